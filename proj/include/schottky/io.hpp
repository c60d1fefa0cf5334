#pragma once

// JSON encoding of places, field elements, points, discs and graphs.
// Rationals travel as strings "num/den"; reals as JSON numbers.

#include <string>

#include <nlohmann/json.hpp>

#include "schottky/outer.hpp"

namespace schottky::io {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void bad(const std::string& field, const std::string& what) {
    throw Error(Errc::MalformedInput, "field '" + field + "': " + what);
}

inline const json& member(const json& j, const std::string& key, const std::string& field) {
    if (!j.is_object()) bad(field, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(field + "." + key, "missing");
    return *it;
}

} // namespace detail

inline double to_double(const Real& r) { return std::stod(format_real(r)); }

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

inline json encode(const Rational& q) { return to_string(q); }

inline Rational decode_rational(const json& j, const std::string& field) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_number_float()) return parse_rational(j.dump());
    } catch (const Error& e) {
        detail::bad(field, e.what());
    }
    detail::bad(field, "expected a rational string");
}

inline json encode(const FieldElem& x) {
    if (x.is_real()) return to_string(x.re);
    return json{{"re", to_string(x.re)}, {"im", to_string(x.im)}};
}

inline FieldElem decode_field(const json& j, const std::string& field) {
    if (j.is_object()) {
        Rational re = j.contains("re") ? decode_rational(j["re"], field + ".re") : Rational(0);
        Rational im = j.contains("im") ? decode_rational(j["im"], field + ".im") : Rational(0);
        return {re, im};
    }
    return decode_rational(j, field);
}

inline json encode(const ProjPoint& z) {
    if (z.is_infinity()) return "inf";
    return encode(z.u);
}

inline ProjPoint decode_point(const json& j, const std::string& field) {
    if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity"))
        return ProjPoint::infinity();
    return ProjPoint(decode_field(j, field));
}

inline json encode(const Place& pl) {
    switch (pl.kind) {
    case PlaceKind::Padic: return {{"kind", "padic"}, {"p", pl.p}, {"eps", to_string(pl.eps)}};
    case PlaceKind::Archimedean: return {{"kind", "arch"}, {"eps", to_string(pl.eps)}};
    case PlaceKind::TrivialQ: return {{"kind", "trivial_q"}};
    case PlaceKind::TrivialFp: return {{"kind", "trivial_fp"}, {"p", pl.p}};
    }
    return {};
}

inline Place decode_place(const json& j, const std::string& field = "place") {
    const json& k = detail::member(j, "kind", field);
    if (!k.is_string()) detail::bad(field + ".kind", "expected a string");
    std::string kind = k.get<std::string>();
    auto prime = [&] {
        const json& p = detail::member(j, "p", field);
        if (!p.is_number_unsigned() && !p.is_number_integer()) detail::bad(field + ".p", "expected an integer");
        long v = p.get<long>();
        if (v < 2) detail::bad(field + ".p", "not a prime");
        return static_cast<Prime>(v);
    };
    auto eps = [&] { return j.contains("eps") ? decode_rational(j["eps"], field + ".eps") : Rational(1); };
    try {
        if (kind == "padic") return Place::padic(prime(), eps());
        if (kind == "arch" || kind == "archimedean") return Place::archimedean(eps());
        if (kind == "trivial_q") return Place::trivial_q();
        if (kind == "trivial_fp") return Place::trivial_fp(prime());
    } catch (const Error& e) {
        if (e.code() == Errc::MalformedInput) throw;
        detail::bad(field, e.what());
    }
    detail::bad(field + ".kind", "unknown place kind '" + kind + "'");
}

inline json encode(const AbsValue& a) {
    switch (a.kind()) {
    case AbsValue::Kind::ExactZero: return {{"kind", "zero"}};
    case AbsValue::Kind::ExactOne: return {{"kind", "one"}};
    case AbsValue::Kind::ApproxReal:
        return {{"kind", "approx"}, {"value", to_double(a.to_real())}, {"prec", a.precision_bits()}};
    case AbsValue::Kind::ExactLog: break;
    }
    if (a.exponents().size() == 1) {
        Prime p = a.exponents().begin()->first;
        return {{"kind", "exact_log"}, {"q", to_string(a.q(p))}, {"p", p}, {"eps", to_string(a.eps())}};
    }
    json ex = json::object();
    for (const auto& [p, e] : a.exponents()) ex[std::to_string(p)] = to_string(e);
    return {{"kind", "monomial"}, {"exponents", ex}, {"value", to_double(a.to_real())}};
}

inline AbsValue decode_abs(const json& j, const std::string& field) {
    if (!j.is_object()) return AbsValue::from_rational(decode_rational(j, field));
    const json& k = detail::member(j, "kind", field);
    std::string kind = k.is_string() ? k.get<std::string>() : "";
    if (kind == "zero") return AbsValue::zero();
    if (kind == "one") return AbsValue::one();
    if (kind == "exact_log") {
        const json& p = detail::member(j, "p", field);
        if (!p.is_number_integer()) detail::bad(field + ".p", "expected an integer");
        Rational eps = j.contains("eps") ? decode_rational(j["eps"], field + ".eps") : Rational(1);
        return AbsValue::exact_log(static_cast<Prime>(p.get<long>()), decode_rational(detail::member(j, "q", field), field + ".q"), eps);
    }
    if (kind == "monomial") {
        AbsValue a = AbsValue::one();
        for (const auto& [p, e] : detail::member(j, "exponents", field).items())
            a = a * AbsValue::exact_log(static_cast<Prime>(std::stoul(p)), decode_rational(e, field + ".exponents." + p));
        return a;
    }
    if (kind == "approx") {
        const json& v = detail::member(j, "value", field);
        if (!v.is_number()) detail::bad(field + ".value", "expected a number");
        return AbsValue::approx(Real(v.get<double>()));
    }
    detail::bad(field + ".kind", "unknown absolute value kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Maps, discs, points
// ---------------------------------------------------------------------------

inline json encode(const Moebius& m) {
    return {{"a", encode(m.a)}, {"b", encode(m.b)}, {"c", encode(m.c)}, {"d", encode(m.d)}};
}

inline Moebius decode_moebius(const json& j, const std::string& field) {
    Moebius m{decode_field(detail::member(j, "a", field), field + ".a"), decode_field(detail::member(j, "b", field), field + ".b"),
              decode_field(detail::member(j, "c", field), field + ".c"), decode_field(detail::member(j, "d", field), field + ".d")};
    if (m.det().is_zero()) detail::bad(field, "singular matrix");
    return m;
}

inline json encode(const Disc& D) {
    json j{{"chart", D.chart == Chart::Standard ? "std" : "inv"},
           {"center", encode(D.center)},
           {"radius", encode(D.radius)},
           {"closed", D.closed}};
    if (!D.pivot.is_zero()) j["pivot"] = encode(D.pivot);
    return j;
}

inline Disc decode_disc(const json& j, const std::string& field) {
    Disc D;
    const json& chart = detail::member(j, "chart", field);
    if (chart == "std") D.chart = Chart::Standard;
    else if (chart == "inv") D.chart = Chart::Inverted;
    else detail::bad(field + ".chart", "expected \"std\" or \"inv\"");
    D.center = decode_field(detail::member(j, "center", field), field + ".center");
    D.radius = decode_abs(detail::member(j, "radius", field), field + ".radius");
    if (j.contains("closed")) {
        if (!j["closed"].is_boolean()) detail::bad(field + ".closed", "expected a boolean");
        D.closed = j["closed"].get<bool>();
    }
    if (j.contains("pivot")) D.pivot = decode_field(j["pivot"], field + ".pivot");
    return D;
}

inline json encode(const KoebeTriple& t) {
    json j{{"alpha", encode(t.alpha)}, {"alpha_prime", encode(t.alpha_prime)}};
    if (t.formal()) j["beta_abs"] = encode(*t.beta_abs);
    else j["beta"] = encode(t.beta);
    if (t.approximate) j["approximate"] = true;
    return j;
}

/// Normalization slots (alpha_1, alpha'_1, alpha_2) are omitted on output and implied on input.
inline json encode(const SchottkyPoint& pt) {
    json koebe = json::array();
    bool norm = pt.normalized();
    for (size_t i = 0; i < pt.triples.size(); ++i) {
        json t = encode(pt.triples[i]);
        if (norm && i == 0) {
            t.erase("alpha");
            t.erase("alpha_prime");
        }
        if (norm && i == 1) t.erase("alpha");
        koebe.push_back(t);
    }
    return {{"place", encode(pt.place)}, {"g", pt.genus()}, {"koebe", koebe}};
}

inline SchottkyPoint decode_point_json(const json& j) {
    if (!j.is_object()) detail::bad("<root>", "expected an object");
    Place place = decode_place(detail::member(j, "place", "<root>"));
    const json& koebe = detail::member(j, "koebe", "<root>");
    if (!koebe.is_array() || koebe.empty()) detail::bad("koebe", "expected a non-empty array");
    if (j.contains("g")) {
        const json& g = j["g"];
        if (!g.is_number_integer() || g.get<long>() != static_cast<long>(koebe.size()))
            detail::bad("g", "does not match the number of Koebe entries");
    }
    std::vector<KoebeTriple> triples;
    for (size_t i = 0; i < koebe.size(); ++i) {
        std::string f = "koebe[" + std::to_string(i) + "]";
        const json& e = koebe[i];
        if (!e.is_object()) detail::bad(f, "expected an object");
        KoebeTriple t;
        if (e.contains("alpha")) t.alpha = decode_point(e["alpha"], f + ".alpha");
        else if (i >= 2) detail::bad(f + ".alpha", "missing");
        else t.alpha = ProjPoint(i == 0 ? 0 : 1);
        if (e.contains("alpha_prime")) t.alpha_prime = decode_point(e["alpha_prime"], f + ".alpha_prime");
        else if (i == 0) t.alpha_prime = ProjPoint::infinity();
        else detail::bad(f + ".alpha_prime", "missing");
        if (e.contains("beta_abs")) {
            t.beta_abs = decode_abs(e["beta_abs"], f + ".beta_abs");
            t.beta = e.contains("beta") ? decode_field(e["beta"], f + ".beta") : FieldElem(0);
        } else {
            t.beta = decode_field(detail::member(e, "beta", f), f + ".beta");
        }
        if (e.contains("approximate")) t.approximate = e["approximate"].get<bool>();
        triples.push_back(std::move(t));
    }
    try {
        return make_point(place, std::move(triples));
    } catch (const Error& e) {
        if (e.code() == Errc::MalformedInput) throw;
        detail::bad("koebe", e.what());
    }
}

inline SchottkyPoint parse_point(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::MalformedInput, std::string("JSON syntax: ") + e.what());
    }
    return decode_point_json(j);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json encode(const SchottkyFigure& fig) {
    json discs = json::array();
    for (int i = 1; i <= fig.genus(); ++i)
        for (int s : {i, -i}) discs.push_back({{"letter", letter_name(s)}, {"disc", encode(fig.disc(s))}});
    json params = json::array();
    for (const auto& a : fig.parameters) params.push_back(encode(a));
    json j{{"witness", to_string(fig.witness)}, {"discs", discs}, {"parameters", params}};
    if (!fig.chart.is_identity()) j["chart"] = encode(fig.chart);
    return j;
}

inline json encode(const MetricLength& l) {
    return {{"q", to_string(l.q)}, {"p", l.p}, {"eps", to_string(l.eps)}};
}

inline json encode(const MetricGraph& G) {
    json vs = json::array();
    for (int v = 0; v < G.vertex_count; ++v) vs.push_back(v);
    json es = json::array();
    for (const auto& e : G.edges) es.push_back({{"u", e.u}, {"v", e.v}, {"len", encode(e.len)}});
    json cs = json::array();
    for (size_t i = 0; i < G.cycles.size(); ++i) cs.push_back({{"gen", i + 1}, {"edges", G.cycles[i]}});
    return {{"vertices", vs}, {"edges", es}, {"betti", G.betti}, {"cycles", cs}};
}

inline json encode(const MetricTree& T) {
    json nodes = json::array();
    for (const auto& n : T.nodes) {
        json j{{"center", encode(n.center)}, {"radius", encode(n.radius)}};
        if (n.leaf) j["leaf"] = letter_name(*n.leaf);
        nodes.push_back(j);
    }
    json es = json::array();
    for (const auto& e : T.edges) es.push_back({{"u", e.u}, {"v", e.v}, {"len", encode(e.len)}});
    return {{"nodes", nodes}, {"edges", es}};
}

inline json encode(const LimitSample& s) {
    json discs = json::array();
    for (size_t k = 0; k < s.words.size(); ++k)
        discs.push_back({{"word", to_string(s.words[k])}, {"disc", encode(s.discs[k])}, {"radius", encode(s.radii[k])}});
    return {{"depth", s.depth},
            {"count", s.words.size()},
            {"discs", discs},
            {"R", encode(s.R)},
            {"c", encode(s.c)},
            {"disjoint", s.disjoint == Tri::Yes ? "yes" : (s.disjoint == Tri::No ? "no" : "unknown")},
            {"nested", s.nested == Tri::Yes ? "yes" : (s.nested == Tri::No ? "no" : "unknown")},
            {"monotone", s.monotone},
            {"decay_bound", s.decay_bound}};
}

/// Sorted keys (nlohmann's default map) and a trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace schottky::io
