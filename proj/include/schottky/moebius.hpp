#pragma once

// PGL2 over Gaussian rationals: composition, fixed points, Koebe coordinates,
// cross-ratios, and images of discs under Moebius maps.

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "schottky/places.hpp"

namespace schottky {

// ---------------------------------------------------------------------------
// Projective points
// ---------------------------------------------------------------------------

struct ProjPoint {
    FieldElem u = 0;
    FieldElem v = 1;

    ProjPoint() = default;
    ProjPoint(FieldElem x) : u(std::move(x)), v(1) {}  // NOLINT(google-explicit-constructor)
    ProjPoint(long x) : u(x), v(1) {}                  // NOLINT(google-explicit-constructor)
    ProjPoint(FieldElem uu, FieldElem vv) : u(std::move(uu)), v(std::move(vv)) {
        if (u.is_zero() && v.is_zero()) throw Error(Errc::DegenerateConfiguration, "[0:0] is not a point");
        if (!v.is_zero()) {
            u = u / v;
            v = 1;
        } else {
            u = 1;
        }
    }

    static ProjPoint infinity() { return {FieldElem(1), FieldElem(0)}; }

    bool is_infinity() const { return v.is_zero(); }
    const FieldElem& value() const {
        if (is_infinity()) throw Error(Errc::DegenerateConfiguration, "point at infinity has no affine value");
        return u;
    }

    bool operator==(const ProjPoint& o) const { return u == o.u && v == o.v; }
    bool operator!=(const ProjPoint& o) const { return !(*this == o); }
};

inline std::string to_string(const ProjPoint& p) { return p.is_infinity() ? "inf" : to_string(p.u); }

// u1 v2 - v1 u2
inline FieldElem cross_det(const ProjPoint& x, const ProjPoint& y) { return x.u * y.v - x.v * y.u; }

// ---------------------------------------------------------------------------
// Moebius transformations
// ---------------------------------------------------------------------------

struct Moebius {
    FieldElem a = 1, b = 0, c = 0, d = 1;

    Moebius() = default;
    Moebius(FieldElem aa, FieldElem bb, FieldElem cc, FieldElem dd)
        : a(std::move(aa)), b(std::move(bb)), c(std::move(cc)), d(std::move(dd)) {
        if (det().is_zero()) throw Error(Errc::DegenerateConfiguration, "singular matrix");
    }

    static Moebius identity() { return {}; }
    static Moebius iota() { return {0, 1, 1, 0}; }
    static Moebius translation(const FieldElem& t) { return {1, t, 0, 1}; }

    FieldElem det() const { return a * d - b * c; }
    FieldElem trace() const { return a + d; }

    /// First nonzero entry scaled to 1.
    Moebius canonical() const {
        const FieldElem& lead = !a.is_zero() ? a : b;
        Moebius m = *this;
        m.a = a / lead;
        m.b = b / lead;
        m.c = c / lead;
        m.d = d / lead;
        return m;
    }

    bool operator==(const Moebius& o) const {
        Moebius x = canonical(), y = o.canonical();
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    bool operator!=(const Moebius& o) const { return !(*this == o); }

    bool is_identity() const { return b.is_zero() && c.is_zero() && a == d; }
};

inline std::string to_string(const Moebius& m) {
    return "[[" + to_string(m.a) + "," + to_string(m.b) + "],[" + to_string(m.c) + "," + to_string(m.d) + "]]";
}

inline Moebius compose(const Moebius& f, const Moebius& g) {
    return {f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d, f.c * g.a + f.d * g.c, f.c * g.b + f.d * g.d};
}

inline Moebius operator*(const Moebius& f, const Moebius& g) { return compose(f, g); }

inline Moebius invert(const Moebius& f) { return {f.d, -f.b, -f.c, f.a}; }

inline ProjPoint apply(const Moebius& f, const ProjPoint& p) {
    return {f.a * p.u + f.b * p.v, f.c * p.u + f.d * p.v};
}

/// The map sending z1, z2, z3 to 0, inf, 1.
inline Moebius three_point_map(const ProjPoint& z1, const ProjPoint& z2, const ProjPoint& z3) {
    if (z1 == z2 || z1 == z3 || z2 == z3)
        throw Error(Errc::DegenerateFixedPoints, "three reference points are not distinct");
    // z -> [z, z1] [z3, z2] / ([z, z2] [z3, z1]) in homogeneous form
    FieldElem k1 = cross_det(z3, z2);
    FieldElem k2 = cross_det(z3, z1);
    // [z,z1] = u z1.v - v z1.u
    return {z1.v * k1, -z1.u * k1, z2.v * k2, -z2.u * k2};
}

// ---------------------------------------------------------------------------
// Loxodromy and Koebe coordinates
// ---------------------------------------------------------------------------

inline constexpr double kArchTolerance = 1e-12;

struct KoebeTriple {
    ProjPoint alpha;
    ProjPoint alpha_prime = ProjPoint::infinity();
    FieldElem beta = 0;
    /// Set for a multiplier known only through its absolute value (a transcendental
    /// parameter over a trivially valued field); beta is then meaningless.
    std::optional<AbsValue> beta_abs;
    bool approximate = false;

    bool formal() const { return beta_abs.has_value(); }
};

inline AbsValue multiplier_abs(const Place& place, const KoebeTriple& t) {
    if (t.beta_abs) return *t.beta_abs;
    return abs(place, t.beta);
}

inline std::array<Complex, 2> eigenvalues(const Moebius& f) {
    Complex tr = f.trace().to_complex();
    Complex disc = tr * tr - f.det().to_complex() * Real(4);
    Complex s = sqrt(disc);
    return {(tr + s) / Real(2), (tr - s) / Real(2)};
}

inline bool is_loxodromic(const Place& place, const Moebius& f) {
    if (place.is_archimedean()) {
        auto ev = eigenvalues(f);
        Real x = ev[0].abs(), y = ev[1].abs();
        return boost::multiprecision::abs(x - y) > Real(kArchTolerance) * std::max(x, y);
    }
    AbsValue tr = abs(place, f.trace());
    return abs(place, f.det()) < tr * tr;
}

inline Moebius koebe_to_matrix(const KoebeTriple& t) {
    if (t.formal()) throw Error(Errc::FormalMultiplier, "multiplier is known only through its absolute value");
    if (t.alpha == t.alpha_prime) throw Error(Errc::DegenerateTriple, "attracting and repelling points coincide");
    const FieldElem &u = t.alpha.u, &v = t.alpha.v, &up = t.alpha_prime.u, &vp = t.alpha_prime.v;
    const FieldElem& beta = t.beta;
    return {u * vp - beta * up * v, (beta - 1) * u * up, (FieldElem(1) - beta) * v * vp, beta * u * vp - up * v};
}

namespace detail {

inline ProjPoint eigenvector(const Moebius& f, const FieldElem& lambda) {
    FieldElem w = lambda - f.a;
    if (!f.b.is_zero() || !w.is_zero()) return {f.b, w};
    return {lambda - f.d, f.c};
}

inline Prime residue_prime(const Place& place) {
    if (place.kind == PlaceKind::Padic || place.kind == PlaceKind::TrivialFp) return place.p;
    throw Error(Errc::NotLoxodromic, "no residue prime at " + to_string(place));
}

// Root of Y^2 - Y + delta congruent to 0, modulo p^digits.
inline Integer hensel_small_root(const Rational& delta, Prime p, unsigned digits) {
    Integer mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), digits);
    Integer dl = mod_div(delta.get_num(), delta.get_den(), mod);
    Integer y = 0;
    for (unsigned correct = 1; correct < 2 * digits + 2; correct *= 2) {
        Integer fy = (y * y - y + dl) % mod;
        Integer dy = (2 * y - 1) % mod;
        y = (y - mod_div(fy, dy, mod)) % mod;
        if (y < 0) y += mod;
    }
    return y;
}

} // namespace detail

/// Koebe coordinates of a loxodromic matrix; exact when the characteristic
/// polynomial splits, otherwise an approximation to `digits` digits.
inline KoebeTriple matrix_to_koebe(const Place& place, const Moebius& f, unsigned digits = 40) {
    if (!is_loxodromic(place, f)) throw Error(Errc::NotLoxodromic, to_string(f) + " at " + to_string(place));
    FieldElem tr = f.trace();
    FieldElem dt = f.det();
    FieldElem disc = tr * tr - dt * FieldElem(4);
    std::optional<FieldElem> s = gaussian_sqrt(disc);
    if (s && !place.is_archimedean() && !s->is_real()) s.reset();
    if (s) {
        FieldElem l1 = (tr + *s) / FieldElem(2), l2 = (tr - *s) / FieldElem(2);
        bool first_larger = compare(abs(place, l1), abs(place, l2)) > 0;
        const FieldElem& large = first_larger ? l1 : l2;
        const FieldElem& small = first_larger ? l2 : l1;
        return {detail::eigenvector(f, large), detail::eigenvector(f, small), small / large, std::nullopt, false};
    }
    if (place.is_archimedean()) {
        auto ev = eigenvalues(f);
        if (ev[0].abs() < ev[1].abs()) std::swap(ev[0], ev[1]);
        int keep = static_cast<int>(std::min(digits, 45u));
        auto round_c = [&](const Complex& z) { return FieldElem(round_rational(z.re, keep), round_rational(z.im, keep)); };
        auto vec = [&](const Complex& lam) -> ProjPoint {
            Complex w = lam - f.a.to_complex();
            bool w_zero = w.abs() <= lam.abs() * Real(1e-40);
            if (!w_zero) return ProjPoint(round_c(f.b.to_complex() / w));
            if (!f.b.is_zero() || f.c.is_zero()) return ProjPoint::infinity();
            return ProjPoint(round_c((lam - f.d.to_complex()) / f.c.to_complex()));
        };
        return {vec(ev[0]), vec(ev[1]), round_c(ev[1] / ev[0]), std::nullopt, true};
    }
    // Non-archimedean, non-split: lambda = tr*Y with Y a root of Y^2 - Y + det/tr^2.
    Prime p = detail::residue_prime(place);
    if (!tr.is_real() || !dt.is_real()) throw Error(Errc::ImaginaryAtNonArch, to_string(f));
    Rational delta = dt.re / (tr.re * tr.re);
    Integer y0 = detail::hensel_small_root(delta, p, digits);
    Rational small_l = tr.re * Rational(y0);
    Rational large_l = tr.re * Rational(Integer(1) - y0);
    Integer mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), digits);
    Integer beta = mod_div(y0, Integer(1) - y0, mod);
    return {detail::eigenvector(f, large_l), detail::eigenvector(f, small_l), FieldElem(Rational(beta)),
            std::nullopt, true};
}

/// ((a-c)(b-d)) / ((a-d)(b-c)) in homogeneous form.
inline FieldElem cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c, const ProjPoint& d) {
    FieldElem num = cross_det(a, c) * cross_det(b, d);
    FieldElem den = cross_det(a, d) * cross_det(b, c);
    if (den.is_zero()) throw Error(Errc::DegenerateConfiguration, "cross-ratio denominator vanishes");
    return num / den;
}

// ---------------------------------------------------------------------------
// Discs
// ---------------------------------------------------------------------------

enum class Chart { Standard, Inverted };

/// Standard: {|z - center| <= radius} (or <). Inverted: {|1/(z - pivot) - center| <= radius},
/// the side containing infinity. Radii are absolute values at the place, so an
/// archimedean radius is the Euclidean radius raised to eps.
struct Disc {
    Chart chart = Chart::Standard;
    FieldElem center = 0;
    AbsValue radius = AbsValue::one();
    bool closed = true;
    FieldElem pivot = 0;
};

inline std::string to_string(const Disc& D) {
    std::string s = D.closed ? "D+(" : "D-(";
    if (D.chart == Chart::Inverted) {
        s = "inv" + (D.pivot.is_zero() ? std::string() : "@" + to_string(D.pivot)) + " " + s;
    }
    return s + to_string(D.center) + ", " + to_string(D.radius) + ")";
}

inline bool same_disc(const Disc& x, const Disc& y) {
    return x.chart == y.chart && x.center == y.center && x.closed == y.closed && x.radius == y.radius &&
           x.pivot == y.pivot;
}

namespace detail {

inline Real euclid_radius(const Place& place, const AbsValue& r) {
    return boost::multiprecision::pow(r.to_real(), Real(1) / to_real(place.eps));
}

inline AbsValue place_radius(const Place& place, const Real& euclid) {
    return AbsValue::approx(boost::multiprecision::pow(euclid, to_real(place.eps)));
}

inline constexpr int kCenterDigits = 45;

inline FieldElem round_center(const Complex& z) {
    return {round_rational(z.re, kCenterDigits), round_rational(z.im, kCenterDigits)};
}

// Image of the standard disc {|z| <= r} (or <) under [[A,B],[C,D]].
inline Disc image_of_centered(const Place& place, const FieldElem& A, const FieldElem& B, const FieldElem& C,
                              const FieldElem& D, const AbsValue& r, bool closed) {
    FieldElem dt = A * D - B * C;
    if (place.is_archimedean()) {
        Real re = euclid_radius(place, r);
        Real r2 = re * re;
        Complex a = A.to_complex(), b = B.to_complex(), c = C.to_complex(), d = D.to_complex();
        Real mdet = dt.to_complex().abs();
        Real den = d.norm() - c.norm() * r2;
        Real scale = d.norm() + c.norm() * r2;
        if (den > scale * Real(kArchTolerance)) {
            Complex ctr = (b * d.conj() - a * c.conj() * r2) / den;
            return {Chart::Standard, round_center(ctr), place_radius(place, mdet * re / den), closed};
        }
        if (den >= -scale * Real(kArchTolerance))
            throw Error(Errc::PoleInsideDisc, "pole on the boundary circle: the image is a half-plane");
        Real den2 = b.norm() - a.norm() * r2;
        Real scale2 = b.norm() + a.norm() * r2;
        if (den2 > scale2 * Real(kArchTolerance)) {
            Complex ctr = (d * b.conj() - c * a.conj() * r2) / den2;
            return {Chart::Inverted, round_center(ctr), place_radius(place, mdet * re / den2), closed};
        }
        // Pivot at the image of infinity, which lies outside the image disc.
        FieldElem p = A / C;
        FieldElem bp = B - p * D;
        Complex ctr = d / bp.to_complex();
        return {Chart::Inverted, round_center(ctr), place_radius(place, mdet * re / bp.to_complex().norm()), closed, p};
    }
    AbsValue ad = abs(place, D), ac = abs(place, C);
    AbsValue rc = r * ac;
    bool ok = closed ? ad > rc : ad >= rc;
    if (ok && !D.is_zero())
        return {Chart::Standard, B / D, abs(place, dt) * r / (ad * ad), closed};
    AbsValue ab = abs(place, B), aa = abs(place, A);
    AbsValue ra = r * aa;
    ok = closed ? ab > ra : ab >= ra;
    if (ok && !B.is_zero())
        return {Chart::Inverted, D / B, abs(place, dt) * r / (ab * ab), closed};
    if (C.is_zero()) throw Error(Errc::PoleInsideDisc, "image is not a disc");
    FieldElem p = A / C;
    FieldElem bp = B - p * D;
    AbsValue abp = abs(place, bp);
    return {Chart::Inverted, D / bp, abs(place, dt) * r / (abp * abp), closed, p};
}

} // namespace detail

/// Moves an Inverted disc avoiding infinity into the Standard chart, and puts
/// non-archimedean Inverted discs in their canonical form (center 0, pivot 0
/// when possible).
inline Disc canonicalize(const Place& place, Disc D) {
    if (D.chart != Chart::Inverted) return D;
    if (place.is_archimedean()) {
        Real s = detail::euclid_radius(place, D.radius);
        Complex c = D.center.to_complex();
        Real m = c.norm() - s * s;
        if (m > (c.norm() + s * s) * Real(kArchTolerance)) {
            Complex ctr = D.pivot.to_complex() + c.conj() / m;
            return {Chart::Standard, detail::round_center(ctr), detail::place_radius(place, s / m), D.closed};
        }
        return D;
    }
    AbsValue ac = abs(place, D.center);
    bool avoids_inf = D.closed ? ac > D.radius : ac >= D.radius;
    if (avoids_inf) {
        FieldElem inv = D.pivot + FieldElem(1) / D.center;
        return {Chart::Standard, inv, D.radius / (ac * ac), D.closed};
    }
    D.center = 0;
    // the set is P^1 minus a ball of radius 1/s around the pivot
    AbsValue hole = D.radius.inverse();
    AbsValue ap = abs(place, D.pivot);
    if (D.closed ? ap < hole : ap <= hole) D.pivot = 0;
    return D;
}

/// f(D) as a disc, in whichever chart avoids the pole.
inline Disc image_of_disc(const Place& place, const Moebius& f, const Disc& D) {
    // Reduce to a disc centred at 0: standard uses f o (z + center); inverted
    // uses f o (pivot + 1/w) on w = center + (small).
    const FieldElem& o = D.pivot;
    Moebius g = D.chart == Chart::Standard ? f : Moebius(f.a * o + f.b, f.a, f.c * o + f.d, f.c);
    const FieldElem& t = D.center;
    Disc out = detail::image_of_centered(place, g.a, g.a * t + g.b, g.c, g.c * t + g.d, D.radius, D.closed);
    return canonicalize(place, out);
}

/// P^1 minus D.
inline Disc complement(const Place& place, const Disc& D) {
    if (D.chart == Chart::Standard)
        return canonicalize(place, {Chart::Inverted, 0, D.radius.inverse(), !D.closed, D.center});
    // pivot + 1/w with w outside the ball (center, radius)
    Disc outer{Chart::Inverted, 0, D.radius.inverse(), !D.closed, D.center};
    Moebius back(D.pivot, 1, 1, 0);
    return image_of_disc(place, back, outer);
}

// ---------------------------------------------------------------------------
// Set relations between discs
// ---------------------------------------------------------------------------

enum class Tri { Yes, No, Unknown };

inline std::string to_string(Tri t) { return t == Tri::Yes ? "yes" : (t == Tri::No ? "no" : "unknown"); }

enum class Disjointness { Disjoint, Overlap, Unknown };

inline std::string to_string(Disjointness d) {
    return d == Disjointness::Disjoint ? "disjoint" : (d == Disjointness::Overlap ? "overlap" : "unknown");
}

namespace detail {

// A ball {|z - a| <= r} / {< r}, or the complement of one (a co-ball).
struct NaRegion {
    bool co = false;
    FieldElem a = 0;
    AbsValue r;
    bool closed = true;  // of the ball itself
};

inline NaRegion na_region(const Place& place, const Disc& D0) {
    Disc D = canonicalize(place, D0);
    if (D.chart == Chart::Standard) return {false, D.center, D.radius, D.closed};
    // {|1/(z-o)| <= s} = P^1 - D-(o, 1/s); {|1/(z-o)| < s} = P^1 - D+(o, 1/s)
    return {true, D.pivot, D.radius.inverse(), !D.closed};
}

// Is the ball x inside the ball y?
inline bool na_ball_subset(const Place& place, const NaRegion& x, const NaRegion& y) {
    AbsValue dist = abs(place, x.a - y.a);
    if (y.closed) return dist <= y.r && x.r <= y.r;
    if (x.closed) return dist < y.r && x.r < y.r;
    return dist < y.r && x.r <= y.r;
}

inline bool na_ball_disjoint(const Place& place, const NaRegion& x, const NaRegion& y) {
    AbsValue dist = abs(place, x.a - y.a);
    // Two balls meet iff one contains the other's centre.
    auto contains = [&](const NaRegion& b) { return b.closed ? dist <= b.r : dist < b.r; };
    return !contains(x) && !contains(y);
}

struct ArRegion {
    bool co = false;
    bool halfplane = false;
    Complex a;
    Real r = 0;
    bool closed = true;
};

inline ArRegion ar_region(const Place& place, const Disc& D0) {
    Disc D = canonicalize(place, D0);
    Real s = euclid_radius(place, D.radius);
    if (D.chart == Chart::Standard) return {false, false, D.center.to_complex(), s, D.closed};
    Complex c = D.center.to_complex();
    Real m = s * s - c.norm();
    if (m <= (s * s + c.norm()) * Real(kArchTolerance)) return {true, true, c, s, D.closed};
    return {true, false, D.pivot.to_complex() - c.conj() / m, s / m, !D.closed};
}

inline Tri ar_less(const Real& x, const Real& y) {
    Real tol = (boost::multiprecision::abs(x) + boost::multiprecision::abs(y)) * Real(kArchTolerance);
    if (x < y - tol) return Tri::Yes;
    if (x > y + tol) return Tri::No;
    return Tri::Unknown;
}

} // namespace detail

inline Disjointness discs_disjoint(const Place& place, const Disc& D1, const Disc& D2) {
    if (!place.is_archimedean()) {
        auto x = detail::na_region(place, D1), y = detail::na_region(place, D2);
        if (x.co && y.co) return Disjointness::Overlap;
        if (x.co) std::swap(x, y);
        if (y.co) {
            // ball x misses P^1 - K iff x lies in K
            detail::NaRegion k{false, y.a, y.r, y.closed};
            return detail::na_ball_subset(place, x, k) ? Disjointness::Disjoint : Disjointness::Overlap;
        }
        return detail::na_ball_disjoint(place, x, y) ? Disjointness::Disjoint : Disjointness::Overlap;
    }
    auto x = detail::ar_region(place, D1), y = detail::ar_region(place, D2);
    if (x.co && y.co) return Disjointness::Overlap;
    if (x.halfplane || y.halfplane) return Disjointness::Unknown;
    if (x.co) std::swap(x, y);
    Real dist = (x.a - y.a).abs();
    Tri t = y.co ? detail::ar_less(dist + x.r, y.r) : detail::ar_less(x.r + y.r, dist);
    return t == Tri::Yes ? Disjointness::Disjoint : (t == Tri::No ? Disjointness::Overlap : Disjointness::Unknown);
}

/// Is D1 a subset of D2?
inline Tri disc_subset(const Place& place, const Disc& D1, const Disc& D2) {
    if (!place.is_archimedean()) {
        auto x = detail::na_region(place, D1), y = detail::na_region(place, D2);
        if (x.co && !y.co) return Tri::No;
        if (!x.co && !y.co) return detail::na_ball_subset(place, x, y) ? Tri::Yes : Tri::No;
        if (x.co && y.co) {
            detail::NaRegion kx{false, x.a, x.r, x.closed}, ky{false, y.a, y.r, y.closed};
            return detail::na_ball_subset(place, ky, kx) ? Tri::Yes : Tri::No;
        }
        detail::NaRegion k{false, y.a, y.r, y.closed};
        return detail::na_ball_disjoint(place, x, k) ? Tri::Yes : Tri::No;
    }
    auto x = detail::ar_region(place, D1), y = detail::ar_region(place, D2);
    if (x.halfplane || y.halfplane) return Tri::Unknown;
    Real dist = (x.a - y.a).abs();
    if (x.co && !y.co) return Tri::No;
    if (!x.co && !y.co) return detail::ar_less(dist + x.r, y.r);
    if (x.co && y.co) return detail::ar_less(dist + y.r, x.r);
    return detail::ar_less(x.r + y.r, dist);
}

/// Non-archimedean: the two discs have the same Shilov boundary point.
inline bool same_shilov_point(const Place& place, const Disc& D1, const Disc& D2) {
    auto x = detail::na_region(place, D1), y = detail::na_region(place, D2);
    if (x.co != y.co) return false;
    if (x.r != y.r) return false;
    return abs(place, x.a - y.a) <= x.r;
}

/// Is `inner` a maximal open disc inside the closed disc `outer`?
inline Tri is_maximal_open_in(const Place& place, const Disc& inner, const Disc& outer) {
    if (inner.closed || !outer.closed) return Tri::No;
    if (!place.is_archimedean()) {
        if (disc_subset(place, inner, outer) != Tri::Yes) return Tri::No;
        return same_shilov_point(place, inner, outer) ? Tri::Yes : Tri::No;
    }
    auto x = detail::ar_region(place, inner), y = detail::ar_region(place, outer);
    if (x.halfplane || y.halfplane || x.co != y.co) return x.co != y.co ? Tri::No : Tri::Unknown;
    Real scale = std::max(y.r, Real(1));
    Real gap = (x.a - y.a).abs() + boost::multiprecision::abs(x.r - y.r);
    if (gap <= scale * Real(1e-9)) return Tri::Yes;
    return gap > scale * Real(1e-6) ? Tri::No : Tri::Unknown;
}

} // namespace schottky
