#include <catch_amalgamated.hpp>

#include "schottky/schottky.hpp"
#include "support.hpp"

using namespace schottky;

namespace {

FieldElem q(long n, long d = 1) { return FieldElem(Rational(n, d)); }

AbsValue rad(long n, long d = 1) { return AbsValue::from_rational(Rational(n, d)); }

Disc std_disc(FieldElem c, AbsValue r, bool closed = true) { return {Chart::Standard, std::move(c), std::move(r), closed}; }

SchottkyPoint dumbbell() { return make_point_g2(Place::padic(2), q(-1), q(4), q(4)); }

template <class F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::MalformedInput;  // sentinel: unused by the callers below
}

} // namespace

TEST_CASE("point construction checks the invariants") {
    CHECK_THROWS_AS(make_point_g2(Place::padic(2), q(-1), q(1), q(4)), Error);
    CHECK_THROWS_AS(make_point_g2(Place::padic(2), q(0), q(4), q(4)), Error);
    CHECK_THROWS_AS(make_point_g2(Place::archimedean(), q(-1), q(3), q(1, 4)), Error);
    CHECK(dumbbell().normalized());
}

TEST_CASE("reduced words") {
    CHECK(reduced_words(2, 1).size() == 4);
    CHECK(reduced_words(2, 3).size() == 36);
    CHECK(reduced_words(3, 2).size() == 30);
    CHECK(reduce({1, 2, -2, -1, 1}) == Word{1});
    CHECK(is_reduced({1, 2, -1}));
    CHECK_FALSE(is_reduced({1, -1}));
    CHECK(to_string(Word{1, -2}) == "g1,g2'");
    CHECK(parse_word("g1,g2'") == Word{1, -2});
    CHECK(inverse(Word{1, -2}) == Word{2, -1});
}

TEST_CASE("twisted Ford figures") {
    SchottkyPoint g1 = make_point(Place::archimedean(), {KoebeTriple{1, -1, q(1, 4)}});
    SchottkyFigure fig = ford_figure(g1, {Rational(1)});
    CHECK(fig.disc(1).center == q(5, 3));
    CHECK(fig.disc(-1).center == q(-5, 3));
    CHECK(static_cast<double>(fig.disc(1).radius.to_real()) == Catch::Approx(4.0 / 3).epsilon(1e-14));
    CHECK(static_cast<double>(fig.disc(-1).radius.to_real()) == Catch::Approx(4.0 / 3).epsilon(1e-14));
    CHECK(code_of([&] { ford_figure(g1, {Rational(1000000)}); }) == Errc::DiscsNotDisjoint);

    SchottkyPoint p3 = make_point(Place::padic(3), {KoebeTriple{1, -1, q(3)}});
    SchottkyFigure f3 = ford_figure(p3, {Rational(1)});
    CHECK(f3.disc(1).center == q(-2));
    CHECK(f3.disc(-1).center == q(2));
    CHECK(f3.disc(1).radius == AbsValue::exact_log(3, Rational(1, 2)));
    CHECK(f3.disc(-1).radius == AbsValue::exact_log(3, Rational(1, 2)));

    CHECK(code_of([&] { ford_figure(dumbbell(), {Rational(1), Rational(1)}); }) == Errc::GeneratorFixesInfinity);
}

TEST_CASE("normalized figure of the dumbbell point") {
    SchottkyFigure fig = normalized_figure(dumbbell());
    Place pl = Place::padic(2);
    CHECK(same_disc(fig.disc(1), std_disc(0, rad(1, 2))));
    CHECK(same_disc(fig.disc(-1), complement(pl, std_disc(0, rad(2), false))));
    CHECK(same_disc(fig.disc(2), std_disc(q(1), rad(1, 4))));
    CHECK(same_disc(fig.disc(-2), std_disc(q(-1), rad(1, 4))));
    CHECK(fig.parameters[0] == rad(1, 2));
    CHECK(validate_figure(fig).status == Tri::Yes);
}

TEST_CASE("user radii must lie in the window") {
    SchottkyPoint pt = dumbbell();
    RadiusWindow w = radius_window(pt, 1);
    CHECK(w.lower == rad(1, 4));
    REQUIRE(w.upper);
    CHECK(*w.upper == rad(1));
    CHECK_NOTHROW(normalized_figure(pt, std::vector<AbsValue>{rad(3, 4), AbsValue::exact_log(2, Rational(3, 2))}));
    CHECK(code_of([&] { normalized_figure(pt, std::vector<AbsValue>{rad(1), rad(1, 2)}); }) == Errc::RadiiOutOfWindow);
}

TEST_CASE("Schottky-basis criterion") {
    CHECK(is_in_SB(make_point_g2(Place::padic(2), q(-1), q(2), q(2))).status == SBStatus::Yes);
    SchottkyPoint bad = make_point_g2(Place::padic(2), q(2), q(2), q(2));
    SBResult r = is_in_SB(bad);
    REQUIRE(r.status == SBStatus::No);
    REQUIRE(r.violation);
    CHECK(r.violation->i == 1);
    CHECK(r.violation->j == 2);
    CHECK(r.violation->k == 2);
    CHECK(r.violation->prime_j != r.violation->prime_k);
    CHECK(r.violation->value == AbsValue::one());
    CHECK(code_of([&] { normalized_figure(bad); }) == Errc::NotInSB);
    for (Prime p : {2u, 5u}) {
        SchottkyPoint g1 = make_point(Place::padic(p), {KoebeTriple{0, ProjPoint::infinity(), q(static_cast<long>(p))}});
        CHECK(is_in_SB(g1).status == SBStatus::Yes);
    }
}

TEST_CASE("archimedean figure search") {
    SchottkyPoint g1 = make_point(Place::archimedean(), {KoebeTriple{1, -1, q(1, 4)}});
    SBResult r = is_in_SB(g1);
    CHECK(r.status == SBStatus::Yes);
    SchottkyPoint g2 = make_point_g2(Place::archimedean(), q(-1), q(1, 100), q(1, 100));
    SBResult r2 = is_in_SB(g2);
    REQUIRE(r2.status == SBStatus::Yes);
    CHECK(validate_figure(*r2.figure).status == Tri::Yes);
    // loose multipliers on crowded fixed points: the search may give up, but never says No
    SchottkyPoint hard = make_point_g2(Place::archimedean(), q(-1), q(9, 10), q(9, 10));
    CHECK(is_in_SB(hard).status != SBStatus::No);
}

TEST_CASE("word discs nest along prefixes") {
    SchottkyFigure fig = normalized_figure(dumbbell());
    Place pl = fig.place;
    CHECK(same_disc(word_disc(fig, {2}), fig.disc(2)));
    Disc d12 = word_disc(fig, {1, 2});
    CHECK(same_disc(d12, std_disc(q(4), rad(1, 16))));
    CHECK(disc_subset(pl, d12, open_version(fig.disc(1))) == Tri::Yes);

    for (int n = 1; n <= 3; ++n)
        for (const auto& u : reduced_words(2, n))
            for (int m = 1; m <= 3; ++m)
                for (const auto& v : reduced_words(2, m)) {
                    bool prefix = v.size() <= u.size() && std::equal(v.begin(), v.end(), u.begin());
                    CHECK((disc_subset(pl, word_disc(fig, u), word_disc(fig, v)) == Tri::Yes) == prefix);
                }
}

TEST_CASE("generated groups are free and loxodromic") {
    SchottkyPoint pt = dumbbell();
    auto gens = pt.generators();
    for (int n = 1; n <= 4; ++n)
        for (const auto& w : reduced_words(2, n)) {
            Moebius m = word_matrix(gens, w);
            CHECK_FALSE(m.is_identity());
            CHECK(is_loxodromic(pt.place, m));
        }
}

TEST_CASE("limit samples") {
    SchottkyFigure fig = normalized_figure(dumbbell());
    LimitSample s2 = limit_sample(fig, 2);
    CHECK(s2.discs.size() == 12);
    CHECK(s2.disjoint == Tri::Yes);
    CHECK(s2.nested == Tri::Yes);
    LimitSample s1 = limit_sample(fig, 1);
    for (const auto& a : s2.radii)
        for (const auto& b : s1.radii) CHECK(a < b);
    CHECK(s2.c < AbsValue::one());
    CHECK(limit_sample(fig, 3).discs.size() == 36);
    try {
        limit_sample(fig, 14, 1000);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BudgetExceeded);
    }

    SchottkyPoint tate = make_point(Place::padic(3), {KoebeTriple{0, ProjPoint::infinity(), q(9)}});
    SchottkyFigure tf = normalized_figure(tate);
    AbsValue beta = abs(tate.place, q(9));
    LimitSample prev = limit_sample(tf, 1);
    for (int n = 2; n <= 5; ++n) {
        LimitSample cur = limit_sample(tf, n);
        REQUIRE(cur.radii.size() == 2);
        for (size_t k = 0; k < 2; ++k) {
            // words g^n and g^-n both add one letter of the same sign
            size_t j = cur.words[k][0] == prev.words[k][0] ? k : 1 - k;
            CHECK(cur.radii[k] == prev.radii[j] * beta);
        }
        prev = cur;
    }
}

TEST_CASE("fundamental domain report") {
    SchottkyPoint tate = make_point(Place::padic(3), {KoebeTriple{0, ProjPoint::infinity(), q(9)}});
    auto r1 = fundamental_domain_report(normalized_figure(tate));
    CHECK(r1.genus == 1);
    CHECK(r1.shape == "annulus");
    CHECK(r1.identifications.size() == 1);
    auto r2 = fundamental_domain_report(normalized_figure(dumbbell()));
    CHECK(r2.genus == 2);
    CHECK(r2.removed.size() == 4);
    for (const auto& D : r2.removed) CHECK_FALSE(D.closed);
}

TEST_CASE("normalized certificates validate on random SB points") {
    std::mt19937 rng(11);
    for (int n = 0; n < 20; ++n) {
        SchottkyPoint pt = testing_support::random_sb_point(rng, n % 2 ? 3 : 2, 2 + n % 2);
        SBResult r = is_in_SB(pt);
        REQUIRE(r.status == SBStatus::Yes);
        CHECK(validate_figure(*r.figure).status == Tri::Yes);
        LimitSample s = limit_sample(*r.figure, 3);
        CHECK(s.disjoint == Tri::Yes);
        CHECK(s.nested == Tri::Yes);
        CHECK(s.decay_bound);
        CHECK(s.c < AbsValue::one());
    }
}
