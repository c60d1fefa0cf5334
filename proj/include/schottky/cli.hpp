#pragma once

// Command implementations behind tools/schottky. Each command returns a JSON
// report and an exit code; the executable only parses flags and prints.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "schottky/io.hpp"

namespace schottky::cli {

using io::json;

enum Exit { kOk = 0, kMalformed = 1, kNo = 2, kUnknown = 3, kBudget = 4, kArchUnsupported = 5, kFailure = 6 };

struct RunConfig {
    std::string command;
    std::string input_path;
    std::string json_text;
    int depth = 3;
    int nielsen_depth = 3;
    long long budget = kDefaultBudget;
    std::string out;
    std::string eps_grid = "1,1/2,1/10";
    int prec_bits = 128;
    std::string word;
    std::string r = "1/2,1/3";
    int word_length = 2;
};

struct CmdResult {
    int exit = kOk;
    json report;
    std::string svg;  // written to RunConfig::out by the caller
};

inline std::vector<Rational> parse_rational_list(const std::string& text, const std::string& flag) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(parse_rational(tok));
        } catch (const Error& e) {
            throw Error(Errc::MalformedInput, flag + ": " + e.what());
        }
    }
    if (out.empty()) throw Error(Errc::MalformedInput, flag + ": empty list");
    return out;
}

/// p-adic digits (or decimal digits at the real place) carried by approximate coordinates.
inline unsigned working_digits(const Place& place, int bits) {
    if (bits < 16) throw Error(Errc::MalformedInput, "--prec must be at least 16 bits");
    double per_digit = place.is_archimedean() || place.p < 2 ? std::log2(10.0) : std::log2(static_cast<double>(place.p));
    return static_cast<unsigned>(std::ceil(bits / per_digit));
}

inline SchottkyPoint load_point(const RunConfig& cfg) {
    if (!cfg.json_text.empty()) return io::parse_point(cfg.json_text);
    if (cfg.input_path.empty()) throw Error(Errc::MalformedInput, "one of --input or --json is required");
    std::ifstream in(cfg.input_path);
    if (!in) throw Error(Errc::MalformedInput, "cannot read " + cfg.input_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return io::parse_point(ss.str());
}

inline std::string status_name(SBStatus s) {
    return s == SBStatus::Yes ? "yes" : (s == SBStatus::No ? "no" : "unknown");
}

inline json encode_violation(const SBViolation& v) {
    return {{"i", v.i}, {"j", v.j}, {"k", v.k}, {"prime_j", v.prime_j}, {"prime_k", v.prime_k},
            {"value", io::encode(v.value)}, {"inequality", v.describe()}};
}

inline json encode_membership(const MembershipResult& m) {
    json j{{"status", to_string(m.status)}, {"explored", m.explored}};
    if (m.status == MembershipStatus::Yes) {
        j["witness"] = to_string_nielsen(m.witness);
        if (m.image) j["image"] = io::encode(*m.image);
    }
    return j;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline CmdResult cmd_verify(const RunConfig& cfg) {
    SchottkyPoint pt = load_point(cfg);
    unsigned digits = working_digits(pt.place, cfg.prec_bits);
    SBResult sb = is_in_SB(pt);
    CmdResult res;
    res.report = {{"command", "verify"}, {"point", io::encode(pt)}, {"sb", status_name(sb.status)}};
    if (sb.figure) res.report["certificate"] = io::encode(*sb.figure);
    if (sb.violation) res.report["violation"] = encode_violation(*sb.violation);
    // an SB certificate already answers the basis search with the empty word
    if (sb.status == SBStatus::Yes) res.report["schottky"] = {{"status", "yes"}, {"witness", ""}, {"explored", 1}};
    else if (!pt.formal()) res.report["schottky"] = encode_membership(is_schottky(pt, cfg.nielsen_depth, digits));
    res.exit = sb.status == SBStatus::Yes ? kOk : (sb.status == SBStatus::No ? kNo : kUnknown);
    return res;
}

// ---------------------------------------------------------------------------
// limitset
// ---------------------------------------------------------------------------

namespace detail {

struct Circle {
    double x, y, r;
};

/// Boundary circle of an archimedean disc, in the plane.
inline std::optional<Circle> boundary_circle(const Place& place, const Disc& D) {
    Real inv_eps = Real(1) / to_real(place.eps);
    Real rad = boost::multiprecision::pow(D.radius.to_real(), inv_eps);
    Complex c = D.center.to_complex();
    if (D.chart == Chart::Standard) return Circle{io::to_double(c.re), io::to_double(c.im), io::to_double(rad)};
    // {|1/(z - p) - c| = s} pulled back along z = p + 1/w
    Real den = c.abs() * c.abs() - rad * rad;
    if (boost::multiprecision::abs(den) <= Real(1e-30)) return std::nullopt;  // a line
    Complex p = D.pivot.to_complex();
    return Circle{io::to_double(p.re + c.re / den), io::to_double(p.im - c.im / den),
                  io::to_double(rad / boost::multiprecision::abs(den))};
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace detail

/// Level-1 circles are stroked, level-n circles filled; hue is indexed by level.
inline std::string limit_set_svg(const SchottkyFigure& fig, const LimitSample& s) {
    std::vector<detail::Circle> top, deep;
    for (int l : letters(fig.genus()))
        if (auto c = detail::boundary_circle(fig.place, fig.disc(l))) top.push_back(*c);
    for (const auto& D : s.discs)
        if (auto c = detail::boundary_circle(fig.place, D)) deep.push_back(*c);
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& c : top) {
        x0 = std::min(x0, c.x - c.r);
        y0 = std::min(y0, c.y - c.r);
        x1 = std::max(x1, c.x + c.r);
        y1 = std::max(y1, c.y + c.r);
    }
    if (top.empty()) x0 = y0 = -1, x1 = y1 = 1;
    double pad = 0.05 * std::max(x1 - x0, y1 - y0);
    x0 -= pad, y0 -= pad, x1 += pad, y1 += pad;
    double w = x1 - x0, h = y1 - y0;
    int hue1 = 210, hue_n = (210 + 40 * (s.depth - 1)) % 360;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << detail::fmt(x0) << " " << detail::fmt(-y1) << " "
       << detail::fmt(w) << " " << detail::fmt(h) << "\">\n";
    os << "<g class=\"level-1\" fill=\"none\" stroke=\"hsl(" << hue1 << ",70%,40%)\" stroke-width=\""
       << detail::fmt(w / 800) << "\">\n";
    for (const auto& c : top)
        os << "<circle cx=\"" << detail::fmt(c.x) << "\" cy=\"" << detail::fmt(c.y == 0 ? 0.0 : -c.y) << "\" r=\"" << detail::fmt(c.r) << "\"/>\n";
    os << "</g>\n<g class=\"level-" << s.depth << "\" fill=\"hsl(" << hue_n << ",70%,45%)\" stroke=\"none\">\n";
    for (const auto& c : deep)
        os << "<circle cx=\"" << detail::fmt(c.x) << "\" cy=\"" << detail::fmt(c.y == 0 ? 0.0 : -c.y) << "\" r=\"" << detail::fmt(c.r) << "\"/>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

inline std::optional<SchottkyFigure> certified_figure(const SchottkyPoint& pt, CmdResult& res) {
    SBResult sb = is_in_SB(pt);
    if (sb.status == SBStatus::Yes) return sb.figure;
    res.exit = sb.status == SBStatus::No ? kNo : kUnknown;
    res.report["error"] = {{"code", "NotInSB"}, {"message", "the point is not certified in the Schottky-basis locus"}};
    if (sb.violation) res.report["violation"] = encode_violation(*sb.violation);
    return std::nullopt;
}

inline CmdResult cmd_limitset(const RunConfig& cfg) {
    SchottkyPoint pt = load_point(cfg);
    CmdResult res;
    res.report = {{"command", "limitset"}};
    if (cfg.depth < 1) throw Error(Errc::MalformedInput, "--depth must be at least 1");
    long long count = disc_count(pt.genus(), cfg.depth);
    if (count > cfg.budget)
        throw Error(Errc::BudgetExceeded, std::to_string(count) + " discs exceed the budget of " + std::to_string(cfg.budget));
    auto fig = certified_figure(pt, res);
    if (!fig) return res;
    LimitSample s = limit_sample(*fig, cfg.depth, cfg.budget);
    if (pt.place.is_archimedean()) {
        if (cfg.out.empty()) throw Error(Errc::MalformedInput, "--out is required for archimedean limit sets");
        res.svg = limit_set_svg(*fig, s);
        json summary = io::encode(s);
        summary.erase("discs");
        res.report.update(summary);
        res.report["svg"] = cfg.out;
    } else {
        res.report.update(io::encode(s));
    }
    return res;
}

// ---------------------------------------------------------------------------
// skeleton
// ---------------------------------------------------------------------------

inline CmdResult cmd_skeleton(const RunConfig& cfg) {
    SchottkyPoint pt = load_point(cfg);
    ::schottky::detail::require_padic(pt.place);
    CmdResult res;
    res.report = {{"command", "skeleton"}};
    unsigned digits = working_digits(pt.place, cfg.prec_bits);
    std::optional<SchottkyFigure> fig;
    NielsenWord change;
    SBResult sb = is_in_SB(pt);
    if (sb.status == SBStatus::Yes) {
        fig = sb.figure;
    } else {
        MembershipResult m = is_schottky(pt, cfg.nielsen_depth, digits);
        if (m.status != MembershipStatus::Yes) {
            res.exit = m.status == MembershipStatus::No ? kNo : kUnknown;
            res.report["error"] = {{"code", "NotInSB"}, {"message", "no Schottky basis within the Nielsen depth"}};
            return res;
        }
        fig = m.figure;
        change = m.witness;
    }
    MetricTree tree = build_tree(*fig);
    res.report["tree"] = io::encode(tree);
    res.report["graph"] = io::encode(glue_skeleton(tree));
    res.report["marking_change"] = to_string_nielsen(change);
    json lengths = json::array();
    for (const auto& w : conjugacy_representatives(pt.genus(), cfg.word_length))
        lengths.push_back({{"word", to_string(w)}, {"len", io::encode(translation_length(pt, w))}});
    res.report["lengths"] = lengths;
    return res;
}

// ---------------------------------------------------------------------------
// act
// ---------------------------------------------------------------------------

inline CmdResult cmd_act(const RunConfig& cfg) {
    SchottkyPoint pt = load_point(cfg);
    NielsenWord w = parse_nielsen(cfg.word);
    SchottkyPoint q = apply_word(w, pt, working_digits(pt.place, cfg.prec_bits));
    CmdResult res;
    res.report = {{"command", "act"}, {"word", to_string_nielsen(w)}, {"point", io::encode(q)},
                  {"approximate", q.approximate()}};
    return res;
}

// ---------------------------------------------------------------------------
// hybrid
// ---------------------------------------------------------------------------

/// x^e for positive rational x when the result is rational.
inline std::optional<Rational> exact_power(const Rational& x, const Rational& e) {
    if (!e.get_den().fits_ulong_p() || !e.get_num().fits_slong_p()) return std::nullopt;
    unsigned long k = e.get_den().get_ui();
    Integer num, den;
    if (mpz_root(num.get_mpz_t(), x.get_num().get_mpz_t(), k) == 0) return std::nullopt;
    if (mpz_root(den.get_mpz_t(), x.get_den().get_mpz_t(), k) == 0) return std::nullopt;
    Rational root(num, den);
    long a = e.get_num().get_si();
    Rational out = pow(root, static_cast<unsigned long>(a < 0 ? -a : a));
    return a < 0 ? Rational(1 / out) : out;
}

/// Fixed points away from the normalization slots, rational stand-ins for generic values.
inline std::vector<std::pair<ProjPoint, ProjPoint>> hybrid_fixed_points(int g) {
    std::vector<std::pair<ProjPoint, ProjPoint>> out{{ProjPoint(0), ProjPoint::infinity()}};
    if (g >= 2) out.push_back({ProjPoint(1), ProjPoint(FieldElem(Rational(-355, 113)))});
    for (int i = 3; i <= g; ++i)
        out.push_back({ProjPoint(FieldElem(Rational(2721 * (i - 1), 1001))), ProjPoint(FieldElem(Rational(-2721 * i, 1001)))});
    return out;
}

inline SchottkyPoint hybrid_arch_point(const std::vector<Rational>& r, const Rational& eps) {
    auto fx = hybrid_fixed_points(static_cast<int>(r.size()));
    std::vector<KoebeTriple> triples;
    for (size_t i = 0; i < r.size(); ++i) {
        KoebeTriple t{fx[i].first, fx[i].second, 0};
        if (auto b = exact_power(r[i], Rational(1 / eps))) {
            t.beta = *b;
        } else {
            Real v = boost::multiprecision::pow(to_real(r[i]), Real(1) / to_real(eps));
            t.beta = round_rational(v, 45);
            t.approximate = true;
        }
        triples.push_back(t);
    }
    return make_point(Place::archimedean(eps), std::move(triples));
}

inline SchottkyPoint hybrid_trivial_point(const std::vector<Rational>& r) {
    auto fx = hybrid_fixed_points(static_cast<int>(r.size()));
    std::vector<KoebeTriple> triples;
    for (size_t i = 0; i < r.size(); ++i) {
        KoebeTriple t{fx[i].first, fx[i].second, 0};
        t.beta_abs = AbsValue::from_rational(r[i]);
        triples.push_back(t);
    }
    return make_point(Place::trivial_q(), std::move(triples));
}

inline const std::vector<std::pair<std::string, IntPolynomial>>& hybrid_polynomials() {
    static const std::vector<std::pair<std::string, IntPolynomial>> polys{
        {"T", {0, 1}}, {"T+1", {1, 1}}, {"3T^2+5", {5, 0, 3}}};
    return polys;
}

inline CmdResult cmd_hybrid(const RunConfig& cfg) {
    std::vector<Rational> r = parse_rational_list(cfg.r, "--r");
    for (const auto& x : r)
        if (x <= 0 || x >= 1) throw Error(Errc::MalformedInput, "--r entries must lie in (0,1)");
    std::vector<Rational> grid = parse_rational_list(cfg.eps_grid, "--eps-grid");
    for (const auto& e : grid)
        if (e <= 0 || e > 1) throw Error(Errc::MalformedInput, "--eps-grid entries must lie in (0,1]");

    CmdResult res;
    json rs = json::array();
    for (const auto& x : r) rs.push_back(to_string(x));
    res.report = {{"command", "hybrid"}, {"r", rs}};

    SchottkyPoint triv = hybrid_trivial_point(r);
    SBResult tsb = is_in_SB(triv);
    json trow{{"place", io::encode(triv.place)}, {"point", io::encode(triv)}, {"status", status_name(tsb.status)},
              {"exact", tsb.status != SBStatus::UnknownArch}};
    if (tsb.figure) trow["certificate"] = io::encode(*tsb.figure);
    if (tsb.violation) trow["violation"] = encode_violation(*tsb.violation);
    res.report["trivial"] = trow;

    json rows = json::array();
    for (const auto& eps : grid) {
        SchottkyPoint pt = hybrid_arch_point(r, eps);
        SBResult sb = is_in_SB(pt);
        json ys = json::array();
        bool y_exact = true;
        for (size_t i = 0; i < r.size(); ++i) {
            const auto& t = pt.triples[i];
            auto y = t.approximate ? std::nullopt : exact_power(abs(t.beta.re), eps);
            if (y) {
                ys.push_back(to_string(*y));
            } else {
                y_exact = false;
                ys.push_back(format_real(multiplier_abs(pt.place, t).to_real()));
            }
        }
        json semi = json::object();
        for (const auto& [name, poly] : hybrid_polynomials()) {
            Real h = hybrid_section_eval(poly, r[0], eps).to_real();
            Real gs = gauss_seminorm(Place::trivial_q(), poly, r[0]).to_real();
            semi[name] = {{"hybrid", io::to_double(h)}, {"trivial", io::to_double(gs)},
                          {"gap", io::to_double(boost::multiprecision::abs(h - gs))}};
        }
        json row{{"eps", to_string(eps)}, {"point", io::encode(pt)}, {"status", status_name(sb.status)},
                 {"Y_abs", ys}, {"Y_exact", y_exact}, {"seminorms", semi}};
        rows.push_back(row);
    }
    res.report["rows"] = rows;
    return res;
}

// ---------------------------------------------------------------------------

inline int exit_for(const Error& e) {
    switch (e.code()) {
    case Errc::MalformedInput:
    case Errc::InvalidPlace:
    case Errc::ImaginaryAtNonArch: return kMalformed;
    case Errc::BudgetExceeded: return kBudget;
    case Errc::ArchimedeanUnsupported: return kArchUnsupported;
    default: return kFailure;
    }
}

inline CmdResult run(const RunConfig& cfg) {
    try {
        if (cfg.command == "verify") return cmd_verify(cfg);
        if (cfg.command == "limitset") return cmd_limitset(cfg);
        if (cfg.command == "skeleton") return cmd_skeleton(cfg);
        if (cfg.command == "act") return cmd_act(cfg);
        if (cfg.command == "hybrid") return cmd_hybrid(cfg);
        throw Error(Errc::MalformedInput, "unknown command '" + cfg.command + "'");
    } catch (const Error& e) {
        CmdResult res;
        res.exit = exit_for(e);
        res.report = {{"command", cfg.command}, {"error", {{"code", errc_name(e.code())}, {"message", e.what()}}}};
        return res;
    }
}

} // namespace schottky::cli
