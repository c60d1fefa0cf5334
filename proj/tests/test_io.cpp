#include <catch_amalgamated.hpp>

#include "schottky/io.hpp"
#include "support.hpp"

using namespace schottky;
using io::json;

namespace {

FieldElem q(long n, long d = 1) { return FieldElem(Rational(n, d)); }

std::string message_of(const std::string& text) {
    try {
        io::parse_point(text);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedInput);
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

} // namespace

TEST_CASE("scalars round trip") {
    for (auto x : {Rational(0), Rational(-7, 3), Rational(1, 1024)}) CHECK(io::decode_rational(io::encode(x), "x") == x);
    FieldElem z(Rational(1, 2), Rational(-3));
    CHECK(io::decode_field(io::encode(z), "z") == z);
    CHECK(io::decode_point(io::encode(ProjPoint::infinity()), "z").is_infinity());
    for (const Place& pl : {Place::padic(5), Place::padic(2, Rational(1, 10)), Place::archimedean(Rational(1, 2)),
                            Place::trivial_q()})
        CHECK(io::decode_place(io::encode(pl)) == pl);
    for (const AbsValue& a : {AbsValue::zero(), AbsValue::one(), AbsValue::exact_log(3, Rational(1, 2)),
                              AbsValue::from_rational(Rational(3, 8))})
        CHECK(io::decode_abs(io::encode(a), "a") == a);
    CHECK(io::decode_abs(json("3/4"), "a") == AbsValue::from_rational(Rational(3, 4)));
    Moebius m(q(1), q(2), q(3), q(5));
    CHECK(io::decode_moebius(io::encode(m), "m") == m);
    Disc D{Chart::Inverted, q(1, 3), AbsValue::from_rational(Rational(1, 4)), false};
    CHECK(same_disc(io::decode_disc(io::encode(D), "D"), D));
}

TEST_CASE("points round trip") {
    std::mt19937 rng(17);
    for (int n = 0; n < 10; ++n) {
        SchottkyPoint pt = testing_support::random_padic_point(rng, n % 2 ? 3 : 5, 2 + n % 2);
        std::string text = io::dump(io::encode(pt));
        CHECK(same_point(io::parse_point(text), pt));
    }
    SchottkyPoint ar = make_point(Place::archimedean(), {KoebeTriple{1, -1, q(1, 4)}});
    CHECK(same_point(io::parse_point(io::encode(ar).dump()), ar));
    SchottkyPoint a4 = apply_word({4}, make_point_g2(Place::padic(2), q(3), q(4), q(8)));
    json j = io::encode(a4);
    CHECK(j["koebe"][1]["approximate"] == true);
    CHECK(io::parse_point(j.dump()).approximate());
}

TEST_CASE("normalization slots are implied") {
    std::string text = R"({"place":{"kind":"padic","p":2},"g":2,
        "koebe":[{"beta":"4"},{"alpha_prime":"-1","beta":"4"}]})";
    SchottkyPoint pt = io::parse_point(text);
    CHECK(pt.normalized());
    json j = io::encode(pt);
    CHECK_FALSE(j["koebe"][0].contains("alpha"));
    CHECK_FALSE(j["koebe"][1].contains("alpha"));
    CHECK(j["koebe"][1]["alpha_prime"] == "-1");
}

TEST_CASE("malformed input names the field") {
    CHECK(contains(message_of("{"), "JSON syntax"));
    CHECK(contains(message_of("[]"), "<root>"));
    CHECK(contains(message_of(R"({"koebe":[{"beta":"4"}]})"), "place"));
    CHECK(contains(message_of(R"({"place":{"kind":"padic","p":4},"koebe":[{"beta":"4"}]})"), "place"));
    CHECK(contains(message_of(R"({"place":{"kind":"padic","p":2},"koebe":[{"beta":"x"}]})"), "koebe[0].beta"));
    CHECK(contains(message_of(R"({"place":{"kind":"padic","p":2},"koebe":[{}]})"), "koebe[0].beta"));
    CHECK(contains(message_of(R"({"place":{"kind":"padic","p":2},"g":3,"koebe":[{"beta":"4"}]})"), "'g'"));
    CHECK(contains(message_of(R"({"place":{"kind":"padic","p":2},"koebe":[{"beta":"4"},{"beta":"4"}]})"),
                   "koebe[1].alpha_prime"));
    CHECK(contains(message_of(R"({"place":{"kind":"padic","p":2},"koebe":[{"beta":"3"}]})"), "beta"));
}

TEST_CASE("report schemas") {
    SchottkyPoint pt = make_point_g2(Place::padic(2), q(-1), q(4), q(4));
    SchottkyFigure fig = normalized_figure(pt);
    json f = io::encode(fig);
    CHECK(f["discs"].size() == 4);
    CHECK(f["discs"][0]["letter"] == "g1");
    MetricGraph G = glue_skeleton(build_tree(fig));
    json g = io::encode(G);
    for (const char* key : {"vertices", "edges", "betti", "cycles"}) CHECK(g.contains(key));
    CHECK(g["betti"] == 2);
    CHECK(g["cycles"][0]["gen"] == 1);
    CHECK(g["edges"][0]["len"]["p"] == 2);
    json s = io::encode(limit_sample(fig, 2));
    CHECK(s["count"] == 12);
    CHECK(s["disjoint"] == "yes");
    CHECK(io::dump(json{{"b", 1}, {"a", 2}}) == "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
}
