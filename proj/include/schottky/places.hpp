#pragma once

// Points of M(Z) and the absolute values they induce on Gaussian rationals.
//
// Non-archimedean absolute values are kept exact as monomials
//     |x| = prod_p p^(-e_p),  e_p rational,
// which covers p-adic values p^(-v*eps), positive rationals (radii supplied by
// users) and their square roots (twisted Ford radii). Archimedean values are
// MPFR approximations tagged with the working precision.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "schottky/error.hpp"
#include "schottky/numeric.hpp"

namespace schottky {

enum class PlaceKind { Archimedean, Padic, TrivialQ, TrivialFp };

struct Place {
    PlaceKind kind = PlaceKind::TrivialQ;
    Prime p = 0;       // Padic, TrivialFp
    Rational eps = 1;  // Archimedean, Padic

    static Place archimedean(Rational eps = 1) {
        if (eps <= 0 || eps > 1) throw Error(Errc::InvalidPlace, "archimedean eps must lie in (0,1]");
        return {PlaceKind::Archimedean, 0, std::move(eps)};
    }
    static Place padic(Prime p, Rational eps = 1) {
        if (!is_prime(p)) throw Error(Errc::InvalidPlace, std::to_string(p) + " is not prime");
        if (eps <= 0) throw Error(Errc::InvalidPlace, "p-adic eps must be positive");
        return {PlaceKind::Padic, p, std::move(eps)};
    }
    static Place trivial_q() { return {PlaceKind::TrivialQ, 0, 1}; }
    static Place trivial_fp(Prime p) {
        if (!is_prime(p)) throw Error(Errc::InvalidPlace, std::to_string(p) + " is not prime");
        return {PlaceKind::TrivialFp, p, 1};
    }

    bool is_archimedean() const { return kind == PlaceKind::Archimedean; }
    bool is_trivial() const { return kind == PlaceKind::TrivialQ || kind == PlaceKind::TrivialFp; }

    bool operator==(const Place& o) const { return kind == o.kind && p == o.p && eps == o.eps; }
    bool operator!=(const Place& o) const { return !(*this == o); }
};

inline std::string to_string(const Place& pl) {
    switch (pl.kind) {
    case PlaceKind::Archimedean: return "arch(eps=" + to_string(pl.eps) + ")";
    case PlaceKind::Padic: return std::to_string(pl.p) + "-adic(eps=" + to_string(pl.eps) + ")";
    case PlaceKind::TrivialQ: return "trivial_q";
    case PlaceKind::TrivialFp: return "trivial_f" + std::to_string(pl.p);
    }
    return "?";
}

inline constexpr int kDefaultPrecisionBits = 128;

class AbsValue {
public:
    enum class Kind { ExactZero, ExactOne, ExactLog, ApproxReal };

    AbsValue() = default;

    static AbsValue zero() {
        AbsValue a;
        a.kind_ = Kind::ExactZero;
        return a;
    }
    static AbsValue one() { return {}; }

    /// p^(-q*eps)
    static AbsValue exact_log(Prime p, const Rational& q, const Rational& eps = 1) {
        AbsValue a;
        a.eps_ = eps;
        if (q != 0) a.exps_[p] = q * eps;
        a.normalize();
        return a;
    }

    /// A positive rational taken as a real number (a radius, a lambda).
    static AbsValue from_rational(const Rational& r) {
        if (r <= 0) throw Error(Errc::MalformedInput, "absolute values must be positive");
        AbsValue a;
        add_integer_factors(a.exps_, r.get_num(), -1);
        add_integer_factors(a.exps_, r.get_den(), +1);
        a.normalize();
        return a;
    }

    static AbsValue approx(Real v, int prec_bits = kDefaultPrecisionBits) {
        if (v < 0) throw Error(Errc::MalformedInput, "negative absolute value");
        AbsValue a;
        a.kind_ = Kind::ApproxReal;
        a.value_ = std::move(v);
        a.prec_ = prec_bits;
        return a;
    }

    Kind kind() const { return kind_; }
    bool is_exact() const { return kind_ != Kind::ApproxReal; }
    bool is_zero() const {
        return kind_ == Kind::ExactZero || (kind_ == Kind::ApproxReal && value_ == 0);
    }
    const std::map<Prime, Rational>& exponents() const { return exps_; }
    const Rational& eps() const { return eps_; }
    int precision_bits() const { return prec_; }

    /// Exponent q with |x| = p^(-q*eps) for single-prime values.
    Rational q(Prime p) const {
        auto it = exps_.find(p);
        return it == exps_.end() ? Rational(0) : it->second / eps_;
    }

    Real to_real() const {
        switch (kind_) {
        case Kind::ExactZero: return Real(0);
        case Kind::ExactOne: return Real(1);
        case Kind::ApproxReal: return value_;
        case Kind::ExactLog: {
            Real logv = 0;
            for (const auto& [p, e] : exps_) logv -= schottky::to_real(e) * boost::multiprecision::log(Real(p));
            return boost::multiprecision::exp(logv);
        }
        }
        return Real(0);
    }

    AbsValue operator*(const AbsValue& o) const {
        if (is_zero() || o.is_zero()) return zero();
        if (!is_exact() || !o.is_exact())
            return approx(to_real() * o.to_real(), std::min(precision_bits(), o.precision_bits()));
        AbsValue r;
        r.exps_ = exps_;
        for (const auto& [p, e] : o.exps_) r.exps_[p] += e;
        r.eps_ = merged_eps(o);
        r.normalize();
        return r;
    }

    AbsValue inverse() const {
        if (is_zero()) throw Error(Errc::DegenerateConfiguration, "inverse of zero absolute value");
        if (!is_exact()) return approx(Real(1) / value_, prec_);
        AbsValue r = *this;
        for (auto& [p, e] : r.exps_) e = -e;
        return r;
    }

    AbsValue operator/(const AbsValue& o) const { return *this * o.inverse(); }

    AbsValue pow(const Rational& k) const {
        if (is_zero()) {
            if (k <= 0) throw Error(Errc::DegenerateConfiguration, "non-positive power of zero");
            return zero();
        }
        if (!is_exact()) return approx(boost::multiprecision::pow(value_, schottky::to_real(k)), prec_);
        AbsValue r = *this;
        for (auto& [p, e] : r.exps_) e *= k;
        r.normalize();
        return r;
    }

    AbsValue sqrt() const { return pow(Rational(1, 2)); }

    /// Three-way comparison; exact whenever both sides are exact.
    friend int compare(const AbsValue& a, const AbsValue& b) {
        if (a.is_zero() || b.is_zero()) return (a.is_zero() ? 0 : 1) - (b.is_zero() ? 0 : 1);
        if (!a.is_exact() || !b.is_exact()) {
            Real x = a.to_real(), y = b.to_real();
            return x < y ? -1 : (x > y ? 1 : 0);
        }
        std::map<Prime, Rational> d = a.exps_;
        for (const auto& [p, e] : b.exps_) d[p] -= e;
        return compare_monomial_to_one(d);
    }

    friend bool operator==(const AbsValue& a, const AbsValue& b) { return compare(a, b) == 0; }
    friend bool operator!=(const AbsValue& a, const AbsValue& b) { return compare(a, b) != 0; }
    friend bool operator<(const AbsValue& a, const AbsValue& b) { return compare(a, b) < 0; }
    friend bool operator<=(const AbsValue& a, const AbsValue& b) { return compare(a, b) <= 0; }
    friend bool operator>(const AbsValue& a, const AbsValue& b) { return compare(a, b) > 0; }
    friend bool operator>=(const AbsValue& a, const AbsValue& b) { return compare(a, b) >= 0; }

    /// Structural identity of the stored representation (not just the value).
    bool same_representation(const AbsValue& o) const {
        return kind_ == o.kind_ && exps_ == o.exps_ && (kind_ != Kind::ApproxReal || value_ == o.value_);
    }

private:
    static void add_integer_factors(std::map<Prime, Rational>& exps, Integer n, int sign) {
        n = abs(n);
        Integer f = 2;
        while (n > 1) {
            if (f * f > n) {
                if (!n.fits_ulong_p())
                    throw Error(Errc::MalformedInput, "radius has a prime factor beyond 64 bits");
                exps[n.get_ui()] += sign;
                break;
            }
            while (n % f == 0) {
                exps[f.get_ui()] += sign;
                n /= f;
            }
            ++f;
            if (f > 1000000)
                throw Error(Errc::MalformedInput, "radius too hard to factor");
        }
    }

    // sign of prod p^(-d_p) - 1
    static int compare_monomial_to_one(const std::map<Prime, Rational>& d) {
        Integer lcm = 1;
        bool any = false;
        double bits = 0;
        for (const auto& [p, e] : d) {
            if (e == 0) continue;
            any = true;
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.get_den_mpz_t());
        }
        if (!any) return 0;
        for (const auto& [p, e] : d) bits += std::abs(Rational(e * lcm).get_d()) * std::log2(static_cast<double>(p));
        if (bits < 1 << 22) {
            // value^lcm = smaller / larger with integer powers
            Integer num = 1, den = 1;
            for (const auto& [p, e] : d) {
                if (e == 0) continue;
                Rational k = e * lcm;
                Integer pk;
                mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), Integer(abs(k.get_num())).get_ui());
                if (k > 0) den *= pk; else num *= pk;
            }
            return num < den ? -1 : (num > den ? 1 : 0);
        }
        // Huge exponents: the log-sum is a nonzero linear form in logs of primes,
        // so raising the precision eventually decides its sign.
        for (unsigned digits = 60; digits < 100000; digits *= 2) {
            using Var = boost::multiprecision::mpfr_float;
            Var::default_precision(digits);
            Var s = 0;
            Var scale = 0;
            for (const auto& [p, e] : d) {
                Var term = Var(e.get_num().get_str()) / Var(e.get_den().get_str()) * boost::multiprecision::log(Var(p));
                s -= term;
                scale += boost::multiprecision::abs(term);
            }
            Var err = scale * boost::multiprecision::pow(Var(10), -static_cast<int>(digits) + 5);
            if (boost::multiprecision::abs(s) > err) return s < 0 ? -1 : 1;
        }
        throw Error(Errc::DegenerateConfiguration, "absolute value comparison did not resolve");
    }

    Rational merged_eps(const AbsValue& o) const {
        if (exps_.empty()) return o.eps_;
        if (o.exps_.empty()) return eps_;
        return eps_ == o.eps_ ? eps_ : Rational(1);
    }

    void normalize() {
        if (kind_ == Kind::ApproxReal || kind_ == Kind::ExactZero) return;
        for (auto it = exps_.begin(); it != exps_.end();) it = it->second == 0 ? exps_.erase(it) : std::next(it);
        kind_ = exps_.empty() ? Kind::ExactOne : Kind::ExactLog;
        if (exps_.empty()) eps_ = 1;
    }

    Kind kind_ = Kind::ExactOne;
    std::map<Prime, Rational> exps_;
    Rational eps_ = 1;
    Real value_ = 0;
    int prec_ = 1 << 20;
};

inline AbsValue max(const AbsValue& a, const AbsValue& b) { return a < b ? b : a; }
inline AbsValue min(const AbsValue& a, const AbsValue& b) { return a < b ? a : b; }

inline std::string to_string(const AbsValue& a) {
    switch (a.kind()) {
    case AbsValue::Kind::ExactZero: return "0";
    case AbsValue::Kind::ExactOne: return "1";
    case AbsValue::Kind::ApproxReal: return "~" + format_real(a.to_real());
    case AbsValue::Kind::ExactLog: {
        std::string s;
        for (const auto& [p, e] : a.exponents()) {
            if (!s.empty()) s += "*";
            s += std::to_string(p) + "^(" + to_string(-e) + ")";
        }
        return s;
    }
    }
    return "?";
}

/// max(|2|, 1) at the place: 2^eps archimedean, 1 otherwise.
inline AbsValue abs_two_bound(const Place& place) {
    if (place.is_archimedean()) return AbsValue::approx(boost::multiprecision::pow(Real(2), to_real(place.eps)));
    return AbsValue::one();
}

/// |x| at the place.
inline AbsValue abs(const Place& place, const FieldElem& x) {
    if (place.is_archimedean()) {
        if (x.is_zero()) return AbsValue::zero();
        return AbsValue::approx(boost::multiprecision::pow(to_real(x.norm()), to_real(place.eps) / 2));
    }
    if (!x.is_real())
        throw Error(Errc::ImaginaryAtNonArch, to_string(x) + " at " + to_string(place));
    if (place.kind == PlaceKind::TrivialFp) {
        Integer p(static_cast<unsigned long>(place.p));
        if (x.re.get_den() % p == 0)
            throw Error(Errc::BadResidue, to_string(x.re) + " has denominator divisible by " + std::to_string(place.p));
        return x.re.get_num() % p == 0 ? AbsValue::zero() : AbsValue::one();
    }
    if (x.is_zero()) return AbsValue::zero();
    if (place.kind == PlaceKind::TrivialQ) return AbsValue::one();
    return AbsValue::exact_log(place.p, Rational(valuation(x.re, place.p)), place.eps);
}

/// Coefficients from the constant term upwards.
using IntPolynomial = std::vector<Integer>;

/// Seminorm of poly at the Shilov point of D+(0, r), a non-archimedean place.
inline AbsValue gauss_seminorm(const Place& place, const IntPolynomial& poly, const Rational& r) {
    if (place.is_archimedean()) throw Error(Errc::NotNonArchimedean, "gauss_seminorm needs a non-archimedean place");
    if (r <= 0) throw Error(Errc::MalformedInput, "radius must be positive");
    AbsValue best = AbsValue::zero();
    AbsValue radius = AbsValue::from_rational(r);
    AbsValue rpow = AbsValue::one();
    for (const auto& a : poly) {
        best = max(best, abs(place, FieldElem(Rational(a))) * rpow);
        rpow = rpow * radius;
    }
    if (best.is_zero()) throw Error(Errc::ZeroPolynomial, "polynomial vanishes at the place");
    return best;
}

/// |P(r^(1/eps))|_inf^eps: the archimedean fibre of the section through eta_{0,r}.
inline AbsValue hybrid_section_eval(const IntPolynomial& poly, const Rational& r, const Rational& eps) {
    if (r <= 0 || r >= 1) throw Error(Errc::MalformedInput, "r must lie in (0,1)");
    if (eps <= 0 || eps > 1) throw Error(Errc::MalformedInput, "eps must lie in (0,1]");
    Real e = to_real(eps);
    Real x = boost::multiprecision::exp(boost::multiprecision::log(to_real(r)) / e);
    Real acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + to_real(*it);
    acc = boost::multiprecision::abs(acc);
    if (acc == 0) return AbsValue::zero();
    Real v = boost::multiprecision::exp(boost::multiprecision::log(acc) * e);
    if (!boost::multiprecision::isfinite(v))
        throw Error(Errc::DegenerateConfiguration, "hybrid evaluation overflowed");
    return AbsValue::approx(v);
}

} // namespace schottky
