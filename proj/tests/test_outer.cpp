#include <catch_amalgamated.hpp>

#include "schottky/outer.hpp"
#include "support.hpp"

using namespace schottky;

namespace {

FieldElem q(long n, long d = 1) { return FieldElem(Rational(n, d)); }

// relative agreement to half the working digits
bool invariants_agree(const Place& place, const FieldElem& x, const FieldElem& y) {
    if (x == y) return true;
    if (!x.is_real() || !y.is_real() || x.is_zero()) return false;
    return valuation((x - y).re, place.p) - valuation(x.re, place.p) >= static_cast<long>(kDefaultDigits / 2);
}

} // namespace

TEST_CASE("Nielsen words print and parse") {
    CHECK(parse_nielsen("s1,s2'") == NielsenWord{1, -2});
    CHECK(parse_nielsen("id").empty());
    CHECK(to_string_nielsen({3, -4}) == "s3,s4'");
    CHECK(to_string_nielsen(iota_word()) == "s3,s2,s3,s2");
    CHECK_THROWS_AS(parse_nielsen("s5"), Error);
    CHECK_THROWS_AS(parse_nielsen("t1"), Error);
    for (int n = 0; n <= 3; ++n)
        for (const auto& w : nielsen_words(2, n)) CHECK(parse_nielsen(to_string_nielsen(w)) == w);
}

TEST_CASE("automorphisms of the free group") {
    std::vector<Word> id2{{1}, {2}};
    CHECK(automorphism({}, 2) == id2);
    CHECK(automorphism({1, 1}, 2) == id2);
    CHECK(automorphism({2, 2}, 2) == id2);
    CHECK(automorphism({3, 3}, 2) == id2);
    CHECK(automorphism({4, -4}, 2) == id2);
    CHECK(automorphism({1, 1, 1}, 3) == std::vector<Word>{{1}, {2}, {3}});
    CHECK(automorphism(iota_word(), 2) == std::vector<Word>{{-1}, {-2}});
    CHECK(automorphism({4}, 2) == std::vector<Word>{{1}, {-1, 2}});
    CHECK(automorphism({1}, 3) == std::vector<Word>{{3}, {1}, {2}});
    CHECK_THROWS_AS(nielsen_images(2, 1), Error);
    CHECK_THROWS_AS(nielsen_images(4, 1), Error);
}

TEST_CASE("normalizing a basis") {
    Place p2 = Place::padic(2);
    Moebius g1 = koebe_to_matrix({ProjPoint::infinity(), 0, q(4)});
    Moebius g2 = koebe_to_matrix({1, q(3), q(8)});
    SchottkyPoint a = normalize_basis(p2, {g1, g2});
    CHECK(a.triples[1].alpha_prime == ProjPoint(q(1, 3)));
    CHECK(a.triples[0].beta == q(4));

    Moebius h1 = koebe_to_matrix({0, ProjPoint::infinity(), q(4)});
    SchottkyPoint b = normalize_basis(p2, {g2, h1});
    CHECK(b.triples[1].alpha_prime == ProjPoint(q(3)));
    CHECK(b.triples[0].beta == q(8));
    CHECK(b.triples[1].beta == q(4));
}

TEST_CASE("single Nielsen moves") {
    SchottkyPoint x = make_point_g2(Place::padic(2), q(3), q(4), q(8));
    SchottkyPoint s3 = nielsen_apply(3, x);
    CHECK(s3.triples[1].alpha_prime == ProjPoint(q(1, 3)));
    CHECK(s3.triples[0].beta == q(4));
    CHECK(s3.triples[1].beta == q(8));
    SchottkyPoint s2 = nielsen_apply(2, x);
    CHECK(s2.triples[1].alpha_prime == ProjPoint(q(3)));
    CHECK(s2.triples[0].beta == q(8));
    CHECK(s2.triples[1].beta == q(4));
    CHECK(same_point(apply_word({2, 2}, x), x));
    CHECK(same_point(apply_word({3, 3}, x), x));
    CHECK(same_point(apply_word(iota_word(), x), x));
    CHECK_FALSE(same_point(s2, x));
    CHECK(apply_word({4}, x).approximate());
    CHECK(same_point(apply_word({4, -4}, x), x));
}

TEST_CASE("relations hold on random points") {
    std::mt19937 rng(3);
    for (int n = 0; n < 12; ++n) {
        Prime p = n % 2 ? 3 : 2;
        int g = 2 + n % 2;
        SchottkyPoint x = testing_support::random_sb_point(rng, p, g);
        NielsenWord rot(static_cast<size_t>(g), 1);
        CHECK(same_point(apply_word(rot, x), x));
        CHECK(same_point(apply_word({1, -1}, x), x));
        CHECK(same_point(apply_word({2, 2}, x), x));
        CHECK(same_point(apply_word({3, 3}, x), x));
        CHECK(same_point(apply_word({4, -4}, x), x));
        if (g == 2) CHECK(same_point(apply_word(iota_word(), x), x));
    }
}

TEST_CASE("the marked group transforms equivariantly") {
    std::mt19937 rng(9);
    SchottkyPoint x = testing_support::random_sb_point(rng, 2, 2);
    for (int n = 1; n <= 3; ++n)
        for (const auto& tau : nielsen_words(2, n)) {
            SchottkyPoint y = apply_word(tau, x);
            auto img = automorphism(tau, 2);
            auto gens = y.generators();
            INFO(to_string_nielsen(tau));
            for (int i = 0; i < 2; ++i)
                CHECK(invariants_agree(x.place, multiplier_invariant(gens[static_cast<size_t>(i)]),
                                       multiplier_invariant(evaluate(x, img[static_cast<size_t>(i)]))));
        }
}

TEST_CASE("stabilizer search") {
    SchottkyPoint generic = make_point_g2(Place::padic(2), q(3), q(4), q(8));
    auto st = stabilizer_search(generic, 4);
    CHECK(std::find(st.begin(), st.end(), NielsenWord{}) != st.end());
    CHECK(std::find(st.begin(), st.end(), iota_word()) != st.end());

    SchottkyPoint symmetric = make_point_g2(Place::padic(2), q(-1), q(4), q(4));
    auto ss = stabilizer_search(symmetric, 4);
    CHECK(ss.size() > st.size());
    CHECK(std::find(ss.begin(), ss.end(), NielsenWord{2}) != ss.end());
    CHECK(std::find(ss.begin(), ss.end(), NielsenWord{3}) != ss.end());

    SchottkyPoint g3 = make_point(Place::padic(3), {KoebeTriple{0, ProjPoint::infinity(), q(3)},
                                                    KoebeTriple{1, q(5), q(9)}, KoebeTriple{q(7), q(11), q(27)}});
    CHECK(stabilizer_search(g3, 2) == std::vector<NielsenWord>{{}});
    CHECK_THROWS_AS(stabilizer_search(make_point_g2(Place::archimedean(), q(-1), q(1, 100), q(1, 100)), 1), Error);
}

TEST_CASE("Schottky membership through basis changes") {
    SchottkyPoint x = make_point_g2(Place::padic(2), q(-1), q(4), q(4));
    MembershipResult r = is_schottky(x, 0);
    CHECK(r.status == MembershipStatus::Yes);
    CHECK(r.witness.empty());

    // a point outside SB whose s4 image lands in it
    SchottkyPoint moved = apply_word({4}, x);
    CHECK(is_in_SB(moved).status != SBStatus::Yes);
    MembershipResult m = is_schottky(moved, 2);
    CHECK(m.status == MembershipStatus::Yes);
    REQUIRE(m.image);
    CHECK(is_in_SB(*m.image).status == SBStatus::Yes);

    CHECK_THROWS_AS(make_point(Place::padic(2), {KoebeTriple{0, ProjPoint::infinity(), q(3)}}), Error);

    std::mt19937 rng(21);
    for (int n = 0; n < 5; ++n) {
        SchottkyPoint s = testing_support::random_sb_point(rng, 3, 2);
        for (const auto& tau : nielsen_words(2, 1))
            CHECK(is_schottky(apply_word(tau, s), 2).status == MembershipStatus::Yes);
    }
}

TEST_CASE("outer space datum") {
    SchottkyPoint x = make_point_g2(Place::padic(2), q(-1), q(4), q(4));
    CVDatum d = cv_datum(x, 2);
    CHECK(d.marking_change.empty());
    CHECK(d.graph.betti == 2);
    CHECK(d.lengths.size() == 6);
    for (const auto& [w, l] : d.lengths) CHECK(l == translation_length(x, w));
    CHECK(d.lengths[0].second.q == 2);
}
