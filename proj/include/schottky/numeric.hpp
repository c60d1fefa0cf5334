#pragma once

// Exact and high-precision scalar types shared by every module:
// GMP rationals, MPFR reals (166-bit mantissa), a small complex type over
// those reals, and Gaussian rationals used as field elements.

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "schottky/error.hpp"

namespace schottky {

using Integer = mpz_class;
using Rational = mpq_class;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<50>,
                                           boost::multiprecision::et_off>;

using Prime = std::uint64_t;

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Accepts "a", "a/b" and plain decimals such as "-0.25".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error(Errc::MalformedInput, "empty rational");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos)
            throw Error(Errc::MalformedInput, "bad rational '" + s + "'");
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+")
            throw Error(Errc::MalformedInput, "bad rational '" + s + "'");
        Integer num;
        if (num.set_str(digits, 10) != 0) throw Error(Errc::MalformedInput, "bad rational '" + s + "'");
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    Rational q;
    if (q.set_str(s, 10) != 0) throw Error(Errc::MalformedInput, "bad rational '" + s + "'");
    if (q.get_den() == 0) throw Error(Errc::MalformedInput, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline bool is_prime(Prime p) {
    if (p < 2) return false;
    Integer n(static_cast<unsigned long>(p));
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

/// p-adic valuation of a nonzero integer.
inline long valuation(const Integer& n, Prime p) {
    if (n == 0) throw Error(Errc::DegenerateConfiguration, "valuation of zero");
    Integer m = abs(n);
    Integer pp(static_cast<unsigned long>(p));
    Integer rem;
    return static_cast<long>(mpz_remove(rem.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t()));
}

inline long valuation(const Rational& q, Prime p) {
    return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

inline std::optional<Integer> integer_sqrt_exact(const Integer& n) {
    if (n < 0) return std::nullopt;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    auto n = integer_sqrt_exact(q.get_num());
    auto d = integer_sqrt_exact(q.get_den());
    if (!n || !d) return std::nullopt;
    return Rational(*n, *d);
}

inline Rational pow(const Rational& q, unsigned long k) {
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), k);
    mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), k);
    return Rational(n, d);
}

/// x / y mod m, for y a unit mod m.
inline Integer mod_div(const Integer& x, const Integer& y, const Integer& m) {
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), y.get_mpz_t(), m.get_mpz_t()) == 0)
        throw Error(Errc::DegenerateConfiguration, "non-invertible residue");
    Integer r = (x * inv) % m;
    if (r < 0) r += m;
    return r;
}

// ---------------------------------------------------------------------------
// Reals
// ---------------------------------------------------------------------------

inline Real to_real(const Rational& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

inline Real to_real(const Integer& n) {
    Real r;
    mpfr_set_z(r.backend().data(), n.get_mpz_t(), MPFR_RNDN);
    return r;
}

/// Exact rational value of a finite real.
inline Rational to_rational(const Real& r) {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), r.backend().data());
    q.canonicalize();
    return q;
}

/// Rational approximation with a decimal denominator (10^digits); keeps sizes bounded.
inline Rational round_rational(const Real& r, int digits) {
    Real scale = boost::multiprecision::pow(Real(10), digits);
    Real scaled = boost::multiprecision::round(r * scale);
    Integer num;
    mpfr_get_z(num.get_mpz_t(), scaled.backend().data(), MPFR_RNDN);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// 17 significant digits, the fixed float format of every report.
inline std::string format_real(const Real& r) {
    std::ostringstream os;
    os << std::setprecision(17) << static_cast<double>(r);
    if (r != 0 && static_cast<double>(r) == 0.0) {
        os.str("");
        os << std::setprecision(17) << std::scientific << r;
    }
    return os.str();
}

struct Complex {
    Real re = 0;
    Real im = 0;

    Complex() = default;
    Complex(Real r, Real i = 0) : re(std::move(r)), im(std::move(i)) {}

    Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
    Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
    Complex operator-() const { return {-re, -im}; }
    Complex operator*(const Complex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Complex operator*(const Real& s) const { return {re * s, im * s}; }
    Complex operator/(const Complex& o) const {
        Real n = o.norm();
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
    Complex operator/(const Real& s) const { return {re / s, im / s}; }
    Complex conj() const { return {re, -im}; }
    Real norm() const { return re * re + im * im; }
    Real abs() const { return boost::multiprecision::sqrt(norm()); }
};

/// Principal square root.
inline Complex sqrt(const Complex& z) {
    Real m = z.abs();
    Real a = boost::multiprecision::sqrt((m + z.re) / 2);
    Real b = boost::multiprecision::sqrt((m - z.re) / 2);
    if (z.im < 0) b = -b;
    return {a, b};
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// re + im*i with exact rational parts.
struct FieldElem {
    Rational re = 0;
    Rational im = 0;

    FieldElem() = default;
    FieldElem(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    FieldElem(long r) : re(r) {}                 // NOLINT(google-explicit-constructor)
    FieldElem(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    FieldElem operator+(const FieldElem& o) const { return {re + o.re, im + o.im}; }
    FieldElem operator-(const FieldElem& o) const { return {re - o.re, im - o.im}; }
    FieldElem operator-() const { return {-re, -im}; }
    FieldElem operator*(const FieldElem& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    FieldElem operator/(const FieldElem& o) const {
        if (o.is_zero()) throw Error(Errc::DegenerateConfiguration, "division by zero");
        Rational n = o.norm();
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
    FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
    FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
    FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

    FieldElem conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; }

    bool operator==(const FieldElem& o) const { return re == o.re && im == o.im; }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

    Complex to_complex() const { return {to_real(re), to_real(im)}; }
};

inline FieldElem from_complex(const Complex& z) { return {to_rational(z.re), to_rational(z.im)}; }

inline std::string to_string(const FieldElem& x) {
    if (x.im == 0) return to_string(x.re);
    return "(" + to_string(x.re) + (x.im < 0 ? "-" : "+") + to_string(abs(x.im)) + "i)";
}

/// Exact square root in Q(i) when one exists.
inline std::optional<FieldElem> gaussian_sqrt(const FieldElem& z) {
    if (z.im == 0) {
        if (z.re >= 0) {
            if (auto s = rational_sqrt(z.re)) return FieldElem(*s);
            return std::nullopt;
        }
        if (auto s = rational_sqrt(-z.re)) return FieldElem(Rational(0), *s);
        return std::nullopt;
    }
    auto n = rational_sqrt(z.norm());
    if (!n) return std::nullopt;
    auto a = rational_sqrt((z.re + *n) / 2);
    if (!a || *a == 0) return std::nullopt;
    Rational b = z.im / (2 * *a);
    return FieldElem(*a, b);
}

} // namespace schottky
