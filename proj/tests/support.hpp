#pragma once

// Random inputs shared by the unit tests and the acceptance runner.

#include <random>

#include "schottky/schottky.hpp"

namespace testing_support {

using namespace schottky;

inline Rational small_rational(std::mt19937& rng, long span = 12) {
    std::uniform_int_distribution<long> num(-span, span), den(1, span);
    Rational x(num(rng), den(rng));
    x.canonicalize();
    return x;
}

/// p^k * (unit with small numerator and denominator), k in [lo, hi].
inline Rational padic_scaled(std::mt19937& rng, Prime p, int lo, int hi) {
    std::uniform_int_distribution<int> e(lo, hi);
    std::uniform_int_distribution<long> u(1, 9);
    Rational unit;
    do {
        unit = Rational(u(rng) * (rng() % 2 ? 1 : -1), u(rng));
        unit.canonicalize();
    } while (valuation(unit, p) != 0);
    int k = e(rng);
    Rational pk = pow(Rational(p), static_cast<unsigned long>(k < 0 ? -k : k));
    return k < 0 ? Rational(unit / pk) : Rational(unit * pk);
}

/// A normalized point at a p-adic place with random fixed points and
/// multipliers of valuation in [1, max_v].
inline SchottkyPoint random_padic_point(std::mt19937& rng, Prime p, int g, int max_v = 4) {
    while (true) {
        std::vector<KoebeTriple> ts;
        ts.push_back({0, ProjPoint::infinity(), padic_scaled(rng, p, 1, max_v)});
        std::vector<ProjPoint> used{ProjPoint(0), ProjPoint::infinity(), ProjPoint(1)};
        bool ok = true;
        for (int i = 2; i <= g && ok; ++i) {
            ProjPoint a = i == 2 ? ProjPoint(1) : ProjPoint(FieldElem(padic_scaled(rng, p, -2, 2)));
            ProjPoint b(FieldElem(padic_scaled(rng, p, -2, 2)));
            for (const auto& u : used)
                if ((i > 2 && u == a) || u == b) ok = false;
            if (a == b) ok = false;
            used.push_back(a);
            used.push_back(b);
            ts.push_back({a, b, padic_scaled(rng, p, 1, max_v)});
        }
        if (!ok) continue;
        return make_point(Place::padic(p), std::move(ts));
    }
}

/// Random points until one satisfies the Schottky-basis inequalities.
inline SchottkyPoint random_sb_point(std::mt19937& rng, Prime p, int g, int max_v = 4) {
    while (true) {
        SchottkyPoint pt = random_padic_point(rng, p, g, max_v);
        if (!sb_violation(pt)) return pt;
    }
}

} // namespace testing_support
