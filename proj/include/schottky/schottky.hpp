#pragma once

// Schottky points, reduced words, Schottky figures (twisted Ford and
// normalized), the Schottky-basis criterion and limit-set sampling.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schottky/moebius.hpp"

namespace schottky {

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

struct SchottkyPoint {
    Place place;
    std::vector<KoebeTriple> triples;

    int genus() const { return static_cast<int>(triples.size()); }
    bool approximate() const {
        for (const auto& t : triples)
            if (t.approximate) return true;
        return false;
    }
    bool formal() const {
        for (const auto& t : triples)
            if (t.formal()) return true;
        return false;
    }
    /// 1-based.
    Moebius generator(int i) const { return koebe_to_matrix(triples.at(static_cast<size_t>(i - 1))); }
    std::vector<Moebius> generators() const {
        std::vector<Moebius> out;
        for (const auto& t : triples) out.push_back(koebe_to_matrix(t));
        return out;
    }
    std::vector<ProjPoint> fixed_points() const {
        std::vector<ProjPoint> out;
        for (const auto& t : triples) {
            out.push_back(t.alpha);
            out.push_back(t.alpha_prime);
        }
        return out;
    }
    /// alpha_1 = 0, alpha'_1 = inf and alpha_2 = 1.
    bool normalized() const {
        if (triples.empty()) return false;
        if (triples[0].alpha != ProjPoint(0) || !triples[0].alpha_prime.is_infinity()) return false;
        return triples.size() < 2 || triples[1].alpha == ProjPoint(1);
    }
};

inline bool multiplier_in_unit_interval(const Place& place, const KoebeTriple& t) {
    AbsValue b = multiplier_abs(place, t);
    if (b.is_zero()) return false;
    if (place.is_archimedean()) return b.to_real() < Real(1) - Real(kArchTolerance);
    return b < AbsValue::one();
}

/// Checks 0 < |beta_i| < 1 and that the 2g fixed points are pairwise distinct.
inline SchottkyPoint make_point(const Place& place, std::vector<KoebeTriple> triples) {
    if (triples.empty()) throw Error(Errc::MalformedInput, "a Schottky point needs g >= 1");
    SchottkyPoint pt{place, std::move(triples)};
    for (size_t i = 0; i < pt.triples.size(); ++i) {
        const auto& t = pt.triples[i];
        if (!t.formal() && t.beta.is_zero()) throw Error(Errc::MalformedInput, "beta_" + std::to_string(i + 1) + " is zero");
        if (!multiplier_in_unit_interval(place, t))
            throw Error(Errc::MalformedInput, "|beta_" + std::to_string(i + 1) + "| is not in (0,1)");
    }
    auto fx = pt.fixed_points();
    for (size_t i = 0; i < fx.size(); ++i)
        for (size_t j = i + 1; j < fx.size(); ++j)
            if (fx[i] == fx[j]) throw Error(Errc::MalformedInput, "fixed points " + to_string(fx[i]) + " coincide");
    return pt;
}

/// g = 2 point (alpha'_2, beta_1, beta_2) with the normalization slots filled in.
inline SchottkyPoint make_point_g2(const Place& place, const FieldElem& alpha_prime2, const FieldElem& beta1,
                                   const FieldElem& beta2) {
    return make_point(place, {KoebeTriple{0, ProjPoint::infinity(), beta1},
                              KoebeTriple{1, alpha_prime2, beta2}});
}

// ---------------------------------------------------------------------------
// Reduced words: letter +i is gamma_i, -i is gamma_i^{-1}.
// ---------------------------------------------------------------------------

using Word = std::vector<int>;

inline bool is_reduced(const Word& w) {
    for (size_t k = 0; k + 1 < w.size(); ++k)
        if (w[k] == -w[k + 1]) return false;
    for (int l : w)
        if (l == 0) return false;
    return true;
}

inline Word inverse(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& l : out) l = -l;
    return out;
}

/// Free reduction of a concatenation.
inline Word reduce(const Word& w) {
    Word out;
    for (int l : w) {
        if (!out.empty() && out.back() == -l) out.pop_back();
        else out.push_back(l);
    }
    return out;
}

inline std::vector<int> letters(int g) {
    std::vector<int> out;
    for (int i = 1; i <= g; ++i) {
        out.push_back(i);
        out.push_back(-i);
    }
    return out;
}

inline std::string to_string(const Word& w) {
    if (w.empty()) return "id";
    std::string s;
    for (int l : w) {
        if (!s.empty()) s += ",";
        s += "g" + std::to_string(l > 0 ? l : -l);
        if (l < 0) s += "'";
    }
    return s;
}

inline Word parse_word(const std::string& text) {
    Word w;
    if (text.empty() || text == "id") return w;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
        while (!tok.empty() && tok.back() == ' ') tok.pop_back();
        bool inv = !tok.empty() && tok.back() == '\'';
        if (inv) tok.pop_back();
        if (tok.size() < 2 || (tok[0] != 'g' && tok[0] != 'e'))
            throw Error(Errc::MalformedInput, "bad word letter '" + tok + "'");
        int i = 0;
        try {
            i = std::stoi(tok.substr(1));
        } catch (const std::exception&) {
            throw Error(Errc::MalformedInput, "bad word letter '" + tok + "'");
        }
        if (i <= 0) throw Error(Errc::MalformedInput, "bad word letter '" + tok + "'");
        w.push_back(inv ? -i : i);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return w;
}

/// All reduced words of length n in letter order g1, g1', g2, g2', ...
inline void for_each_reduced_word(int g, int n, const std::function<void(const Word&)>& fn) {
    Word w;
    auto ls = letters(g);
    std::function<void()> rec = [&]() {
        if (static_cast<int>(w.size()) == n) {
            fn(w);
            return;
        }
        for (int l : ls) {
            if (!w.empty() && w.back() == -l) continue;
            w.push_back(l);
            rec();
            w.pop_back();
        }
    };
    rec();
}

inline std::vector<Word> reduced_words(int g, int n) {
    std::vector<Word> out;
    for_each_reduced_word(g, n, [&](const Word& w) { out.push_back(w); });
    return out;
}

inline Moebius letter_matrix(const std::vector<Moebius>& gens, int l) {
    const Moebius& m = gens.at(static_cast<size_t>((l > 0 ? l : -l) - 1));
    return l > 0 ? m : invert(m);
}

inline Moebius word_matrix(const std::vector<Moebius>& gens, const Word& w) {
    Moebius m;
    for (int l : w) m = m * letter_matrix(gens, l);
    return m;
}

// ---------------------------------------------------------------------------
// Figures
// ---------------------------------------------------------------------------

enum class WitnessKind { Ford, Normalized, UserSupplied };

inline std::string to_string(WitnessKind w) {
    switch (w) {
    case WitnessKind::Ford: return "ford";
    case WitnessKind::Normalized: return "normalized";
    case WitnessKind::UserSupplied: return "user";
    }
    return "?";
}

struct SchottkyFigure {
    Place place;
    std::vector<KoebeTriple> triples;
    std::vector<Moebius> generators;          // empty when a multiplier is formal
    std::vector<std::array<Disc, 2>> discs;   // [i-1][0] = B+(gamma_i), [i-1][1] = B+(gamma_i^-1)
    WitnessKind witness = WitnessKind::UserSupplied;
    std::vector<AbsValue> parameters;         // the lambdas or the radii
    Moebius chart;                            // coordinates in which a Ford figure was built

    int genus() const { return static_cast<int>(discs.size()); }
    const Disc& disc(int letter) const {
        return discs.at(static_cast<size_t>((letter > 0 ? letter : -letter) - 1))[letter > 0 ? 0 : 1];
    }
    bool formal() const { return generators.empty(); }
};

inline std::string letter_name(int l) { return to_string(Word{l}); }

struct FigureCheck {
    Tri status = Tri::Yes;
    std::string message;
    int first = 0, second = 0;  // offending letters
    bool overlap = false;       // failure is a disjointness failure
};

namespace detail {

// chart sending alpha -> 0 and alpha' -> inf
inline Moebius koebe_chart(const KoebeTriple& t) {
    return {t.alpha.v, -t.alpha.u, t.alpha_prime.v, -t.alpha_prime.u};
}

inline Tri maximal_condition_formal(const SchottkyFigure& fig, int i) {
    const Place& place = fig.place;
    const KoebeTriple& t = fig.triples[static_cast<size_t>(i - 1)];
    AbsValue b = multiplier_abs(place, t);
    Moebius phi = koebe_chart(t);
    Disc P = image_of_disc(place, phi, fig.disc(i));
    Disc Q = image_of_disc(place, phi, fig.disc(-i));
    auto p = na_region(place, P), q = na_region(place, Q);
    if (p.co || !q.co) return Tri::No;
    // Q is closed exactly when its hole ball is open
    if (abs(place, p.a) > p.r || abs(place, q.a) > q.r || !p.closed || q.closed) return Tri::No;
    // gamma acts as z -> beta z in this chart
    Disc img_plus{Chart::Standard, 0, q.r * b, q.closed};
    Disc img_minus{Chart::Inverted, 0, b / p.r, !p.closed};
    Tri a = is_maximal_open_in(place, img_plus, P);
    Tri c = is_maximal_open_in(place, img_minus, Q);
    if (a == Tri::No || c == Tri::No) return Tri::No;
    return (a == Tri::Yes && c == Tri::Yes) ? Tri::Yes : Tri::Unknown;
}

} // namespace detail

/// Pairwise disjointness of the 2g discs and the maximal-open-disc condition.
inline FigureCheck validate_figure(const SchottkyFigure& fig) {
    FigureCheck out;
    auto ls = letters(fig.genus());
    for (size_t x = 0; x < ls.size(); ++x)
        for (size_t y = x + 1; y < ls.size(); ++y) {
            Disjointness d = discs_disjoint(fig.place, fig.disc(ls[x]), fig.disc(ls[y]));
            if (d == Disjointness::Disjoint) continue;
            Tri t = d == Disjointness::Overlap ? Tri::No : Tri::Unknown;
            if (out.status == Tri::Yes || t == Tri::No) {
                out = {t, "B+(" + letter_name(ls[x]) + ") and B+(" + letter_name(ls[y]) + ") " +
                              (t == Tri::No ? "overlap" : "are not separated beyond tolerance"),
                       ls[x], ls[y], true};
                if (t == Tri::No) return out;
            }
        }
    for (int l : ls) {
        Tri t;
        try {
            if (fig.formal()) {
                if (l < 0) continue;
                t = detail::maximal_condition_formal(fig, l);
            } else {
                Disc outside = complement(fig.place, fig.disc(-l));
                Disc img = image_of_disc(fig.place, letter_matrix(fig.generators, l), outside);
                t = is_maximal_open_in(fig.place, img, fig.disc(l));
            }
        } catch (const Error& e) {
            if (e.code() != Errc::PoleInsideDisc) throw;
            t = Tri::No;
        }
        if (t == Tri::Yes) continue;
        if (out.status == Tri::Yes || t == Tri::No) {
            out = {t, letter_name(l) + " does not map the complement of B+(" + letter_name(-l) +
                          ") onto a maximal open disc of B+(" + letter_name(l) + ")",
                   l, -l};
            if (t == Tri::No) return out;
        }
    }
    return out;
}

namespace detail {

inline AbsValue lambda_value(const Place& place, const Rational& lambda) {
    if (lambda <= 0) throw Error(Errc::MalformedInput, "lambda must be positive");
    if (place.is_archimedean())
        return AbsValue::approx(boost::multiprecision::pow(to_real(lambda), to_real(place.eps)));
    return AbsValue::from_rational(lambda);
}

inline std::array<Disc, 2> ford_discs(const Place& place, const Moebius& m, const AbsValue& lambda) {
    if (m.c.is_zero()) throw Error(Errc::GeneratorFixesInfinity, to_string(m) + " fixes infinity");
    AbsValue ac = abs(place, m.c);
    AbsValue rho = (lambda * abs(place, m.det())).sqrt() / ac;
    Disc plus{Chart::Standard, m.a / m.c, rho / lambda, true};
    Disc minus{Chart::Standard, -m.d / m.c, rho, true};
    return {plus, minus};
}

inline FigureCheck require_valid(const SchottkyFigure& fig) {
    FigureCheck chk = validate_figure(fig);
    if (chk.status == Tri::Yes) return chk;
    throw Error(chk.overlap ? Errc::DiscsNotDisjoint : Errc::InvalidFigure, chk.message);
}

} // namespace detail

/// Twisted Ford figure; with `shift` the discs are built for the conjugates by
/// h(z) = 1/(z - shift) and carried back.
inline SchottkyFigure ford_figure(const SchottkyPoint& pt, const std::vector<Rational>& lambdas,
                                  const std::optional<FieldElem>& shift = std::nullopt, bool validate = true) {
    if (static_cast<int>(lambdas.size()) != pt.genus())
        throw Error(Errc::MalformedInput, "need one lambda per generator");
    SchottkyFigure fig;
    fig.place = pt.place;
    fig.triples = pt.triples;
    fig.generators = pt.generators();
    fig.witness = WitnessKind::Ford;
    if (shift) fig.chart = Moebius(0, 1, 1, -*shift);
    Moebius back = invert(fig.chart);
    for (int i = 0; i < pt.genus(); ++i) {
        AbsValue lam = detail::lambda_value(pt.place, lambdas[static_cast<size_t>(i)]);
        fig.parameters.push_back(lam);
        Moebius conj = fig.chart * fig.generators[static_cast<size_t>(i)] * back;
        auto d = detail::ford_discs(pt.place, conj, lam);
        if (shift) {
            d[0] = image_of_disc(pt.place, back, d[0]);
            d[1] = image_of_disc(pt.place, back, d[1]);
        }
        fig.discs.push_back(d);
    }
    if (validate) detail::require_valid(fig);
    return fig;
}

// ---------------------------------------------------------------------------
// The Schottky-basis criterion (non-archimedean)
// ---------------------------------------------------------------------------

struct SBViolation {
    int i = 0, j = 0, k = 0;
    bool prime_j = false, prime_k = false;
    AbsValue value;  // |beta_i| * |cross-ratio|

    std::string describe() const {
        auto name = [](int n, bool p) { return std::string("alpha") + (p ? "'" : "") + "_" + std::to_string(n); };
        return "i=" + std::to_string(i) + ": |beta_" + std::to_string(i) + "| * |[" + name(j, prime_j) + ", " +
               name(k, prime_k) + "; alpha_" + std::to_string(i) + ", alpha'_" + std::to_string(i) +
               "]| = " + to_string(value) + " is not < 1";
    }
};

/// First violated inequality |beta_i| |[a_j, a_k; a_i, a'_i]| < 1, if any.
inline std::optional<SBViolation> sb_violation(const SchottkyPoint& pt) {
    const Place& place = pt.place;
    int g = pt.genus();
    for (int i = 1; i <= g; ++i) {
        const auto& ti = pt.triples[static_cast<size_t>(i - 1)];
        AbsValue b = multiplier_abs(place, ti);
        for (int j = 1; j <= g; ++j) {
            if (j == i) continue;
            for (int k = 1; k <= g; ++k) {
                if (k == i) continue;
                for (int sj = 0; sj < 2; ++sj)
                    for (int sk = 0; sk < 2; ++sk) {
                        const auto& tj = pt.triples[static_cast<size_t>(j - 1)];
                        const auto& tk = pt.triples[static_cast<size_t>(k - 1)];
                        const ProjPoint& x = sj ? tj.alpha_prime : tj.alpha;
                        const ProjPoint& y = sk ? tk.alpha_prime : tk.alpha;
                        AbsValue v = b * abs(place, cross_ratio(x, y, ti.alpha, ti.alpha_prime));
                        if (v >= AbsValue::one()) return SBViolation{i, j, k, sj == 1, sk == 1, v};
                    }
            }
        }
    }
    return std::nullopt;
}

struct RadiusWindow {
    AbsValue lower = AbsValue::zero();  // |beta_i| * max |other|
    std::optional<AbsValue> upper;      // min |other|, none when g = 1
};

inline RadiusWindow radius_window(const SchottkyPoint& pt, int i) {
    const auto& t = pt.triples[static_cast<size_t>(i - 1)];
    Moebius phi = detail::koebe_chart(t);
    RadiusWindow w;
    AbsValue mx = AbsValue::zero();
    for (int j = 1; j <= pt.genus(); ++j) {
        if (j == i) continue;
        const auto& tj = pt.triples[static_cast<size_t>(j - 1)];
        for (const auto* x : {&tj.alpha, &tj.alpha_prime}) {
            AbsValue v = abs(pt.place, apply(phi, *x).value());
            mx = max(mx, v);
            w.upper = w.upper ? min(*w.upper, v) : v;
        }
    }
    w.lower = multiplier_abs(pt.place, t) * mx;
    return w;
}

inline SchottkyFigure normalized_figure(const SchottkyPoint& pt,
                                        const std::optional<std::vector<AbsValue>>& radii = std::nullopt) {
    const Place& place = pt.place;
    if (place.is_archimedean()) throw Error(Errc::NotNonArchimedean, "normalized figures need a non-archimedean place");
    if (auto v = sb_violation(pt)) throw Error(Errc::NotInSB, v->describe());
    if (radii && static_cast<int>(radii->size()) != pt.genus())
        throw Error(Errc::MalformedInput, "need one radius per generator");
    SchottkyFigure fig;
    fig.place = place;
    fig.triples = pt.triples;
    if (!pt.formal()) fig.generators = pt.generators();
    fig.witness = WitnessKind::Normalized;
    for (int i = 1; i <= pt.genus(); ++i) {
        const auto& t = pt.triples[static_cast<size_t>(i - 1)];
        RadiusWindow win = radius_window(pt, i);
        AbsValue r;
        if (radii) {
            r = (*radii)[static_cast<size_t>(i - 1)];
            if (!(win.lower < r) || (win.upper && !(r < *win.upper)))
                throw Error(Errc::RadiiOutOfWindow, "r_" + std::to_string(i) + " = " + to_string(r) + " lies outside (" +
                                                        to_string(win.lower) + ", " +
                                                        (win.upper ? to_string(*win.upper) : "inf") + ")");
        } else if (win.upper) {
            r = (win.lower * *win.upper).sqrt();
        } else {
            r = AbsValue::one();
        }
        fig.parameters.push_back(r);
        Moebius back = invert(detail::koebe_chart(t));
        Disc plus{Chart::Standard, 0, r, true};
        Disc minus{Chart::Inverted, 0, multiplier_abs(place, t) / r, true};
        fig.discs.push_back({image_of_disc(place, back, plus), image_of_disc(place, back, minus)});
    }
    detail::require_valid(fig);
    return fig;
}

// ---------------------------------------------------------------------------
// Membership in SB
// ---------------------------------------------------------------------------

enum class SBStatus { Yes, No, UnknownArch };

inline std::string to_string(SBStatus s) {
    return s == SBStatus::Yes ? "yes" : (s == SBStatus::No ? "no" : "unknown");
}

struct SBResult {
    SBStatus status = SBStatus::UnknownArch;
    std::optional<SchottkyFigure> figure;
    std::optional<SBViolation> violation;
};

struct ArchSearchConfig {
    int t_min = -8, t_max = 8;  // lambda_i = 4^t
    int sweeps = 3;
};

inline std::vector<FieldElem> default_chart_shifts() {
    std::vector<FieldElem> out;
    for (long v : {0L, 1L, -1L, 2L, -2L, 3L, -3L, 5L, -5L}) out.emplace_back(v);
    for (auto [re, im] : std::vector<std::pair<long, long>>{{0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}, {0, 2}, {0, -2}})
        out.emplace_back(Rational(re), Rational(im));
    out.emplace_back(Rational(1, 2));
    out.emplace_back(Rational(-1, 2));
    out.emplace_back(Rational(1, 3));
    return out;
}

namespace detail {

// Smallest relative gap (dist - r1 - r2)/(dist + r1 + r2) between Ford discs of
// the conjugated generators; positive means pairwise disjoint.
inline Real ford_margin(const Place& place, const std::vector<Moebius>& gens, const std::vector<int>& ts) {
    std::vector<std::pair<Complex, Real>> circles;
    for (size_t i = 0; i < gens.size(); ++i) {
        const Moebius& m = gens[i];
        Complex a = m.a.to_complex(), c = m.c.to_complex(), d = m.d.to_complex();
        Real lam = boost::multiprecision::pow(Real(4), ts[i]);
        Real rho = boost::multiprecision::sqrt(lam * m.det().to_complex().abs()) / c.abs();
        circles.emplace_back(a / c, rho / lam);
        circles.emplace_back(-d / c, rho);
    }
    (void)place;
    Real best = 1;
    for (size_t x = 0; x < circles.size(); ++x)
        for (size_t y = x + 1; y < circles.size(); ++y) {
            Real dist = (circles[x].first - circles[y].first).abs();
            Real rs = circles[x].second + circles[y].second;
            best = std::min(best, (dist - rs) / (dist + rs));
        }
    return best;
}

inline Rational four_pow(int t) { return t >= 0 ? Rational(Integer(1) << (2 * t)) : Rational(1, Integer(1) << (-2 * t)); }

inline std::optional<SchottkyFigure> arch_search_in_chart(const SchottkyPoint& pt, const std::optional<FieldElem>& shift,
                                                          const ArchSearchConfig& cfg) {
    Moebius h = shift ? Moebius(0, 1, 1, -*shift) : Moebius();
    Moebius back = invert(h);
    std::vector<Moebius> conj;
    for (const auto& m : pt.generators()) {
        Moebius cm = h * m * back;
        if (cm.c.is_zero()) return std::nullopt;
        conj.push_back(cm);
    }
    std::vector<int> ts(conj.size(), 0);
    Real best = ford_margin(pt.place, conj, ts);
    auto attempt = [&]() -> std::optional<SchottkyFigure> {
        std::vector<Rational> lambdas;
        for (int t : ts) lambdas.push_back(four_pow(t));
        try {
            SchottkyFigure fig = ford_figure(pt, lambdas, shift, false);
            if (validate_figure(fig).status == Tri::Yes) return fig;
        } catch (const Error&) {
        }
        return std::nullopt;
    };
    if (best > Real(1e-9))
        if (auto f = attempt()) return f;
    for (int sweep = 0; sweep < cfg.sweeps; ++sweep)
        for (size_t i = 0; i < ts.size(); ++i) {
            int keep = ts[i];
            for (int t = cfg.t_min; t <= cfg.t_max; ++t) {
                ts[i] = t;
                Real m = ford_margin(pt.place, conj, ts);
                if (m > best) {
                    best = m;
                    keep = t;
                }
            }
            ts[i] = keep;
            if (best > Real(1e-9))
                if (auto f = attempt()) return f;
        }
    return std::nullopt;
}

} // namespace detail

/// Archimedean half of is_in_SB: searches twisted Ford figures over a lambda grid
/// and a list of chart moves. Never answers No.
inline SBResult arch_figure_search(const SchottkyPoint& pt, const ArchSearchConfig& cfg = {}) {
    SBResult res;
    std::vector<std::optional<FieldElem>> shifts{std::nullopt};
    auto fixed = pt.fixed_points();
    for (const auto& m : default_chart_shifts()) {
        bool is_fixed = false;
        for (const auto& p : fixed)
            if (p == ProjPoint(m)) is_fixed = true;
        if (!is_fixed) shifts.emplace_back(m);
    }
    for (const auto& s : shifts) {
        if (auto fig = detail::arch_search_in_chart(pt, s, cfg)) {
            res.status = SBStatus::Yes;
            res.figure = std::move(fig);
            return res;
        }
    }
    res.status = SBStatus::UnknownArch;
    return res;
}

inline SBResult is_in_SB(const SchottkyPoint& pt, const ArchSearchConfig& cfg = {}) {
    if (pt.place.is_archimedean()) return arch_figure_search(pt, cfg);
    SBResult res;
    if (auto v = sb_violation(pt)) {
        res.status = SBStatus::No;
        res.violation = v;
        return res;
    }
    res.status = SBStatus::Yes;
    res.figure = normalized_figure(pt);
    return res;
}

// ---------------------------------------------------------------------------
// Word discs and limit sets
// ---------------------------------------------------------------------------

/// B+(w) = w'(B+(last letter of w)).
inline Disc word_disc(const SchottkyFigure& fig, const Word& w) {
    if (w.empty()) throw Error(Errc::MalformedInput, "word_disc needs a non-empty word");
    if (!is_reduced(w)) throw Error(Errc::MalformedInput, "word " + to_string(w) + " is not reduced");
    if (fig.formal()) throw Error(Errc::FormalMultiplier, "figure generators are formal");
    Word prefix(w.begin(), w.end() - 1);
    Moebius m = word_matrix(fig.generators, prefix);
    try {
        return image_of_disc(fig.place, m, fig.disc(w.back()));
    } catch (const Error& e) {
        if (e.code() == Errc::PoleInsideDisc)
            throw Error(Errc::InvalidFigure, "B+(" + to_string(w) + ") is not a disc: figure is inconsistent");
        throw;
    }
}

/// B-(v): the open disc with the boundary of B+(v).
inline Disc open_version(Disc D) {
    D.closed = false;
    return D;
}

namespace detail {

// A type-2/3 point eta_{a, rho} given by centre and radius.
struct ShilovPoint {
    FieldElem a;
    AbsValue r;
};

inline ShilovPoint leaf_of(const Place& place, const Disc& D) {
    auto reg = na_region(place, D);
    return {reg.a, reg.r};
}

// A point strictly inside the segment between the Shilov points of B+(g1) and
// B+(g1^-1); it lies in F+ and in no figure disc.
inline ShilovPoint interior_base_point(const SchottkyFigure& fig) {
    ShilovPoint x = leaf_of(fig.place, fig.disc(1)), y = leaf_of(fig.place, fig.disc(-1));
    AbsValue j = max(max(x.r, y.r), abs(fig.place, x.a - y.a));
    if (x.r < j) return {x.a, (x.r * j).sqrt()};
    return {y.a, (y.r * j).sqrt()};
}

// Radius in the chart taking the base point to the Gauss point.
inline AbsValue chordal_radius(const Place& place, const Disc& D, const ShilovPoint& eta) {
    auto reg = na_region(place, D);
    if (!reg.co) {
        AbsValue dist = abs(place, reg.a - eta.a);
        if (dist <= eta.r) return reg.r / eta.r;
        return reg.r * eta.r / (dist * dist);
    }
    if (!(abs(place, reg.a - eta.a) < reg.r) || !(eta.r < reg.r))
        throw Error(Errc::InvalidFigure, "base point lies inside a figure disc");
    return eta.r / reg.r;
}

} // namespace detail

struct LimitSample {
    int depth = 0;
    std::vector<Word> words;
    std::vector<Disc> discs;
    std::vector<AbsValue> radii;  // in the measuring chart
    AbsValue R, c;                // radius(B+(w)) <= R c^|w|
    Tri disjoint = Tri::Yes;      // discs of equal length pairwise disjoint
    Tri nested = Tri::Yes;        // B+(w) inside B+(prefix)
    bool monotone = true;         // radius strictly decreases along prefixes
    bool decay_bound = true;      // radius(B+(w)) <= R c^|w| for every enumerated w
};

inline long long disc_count(int g, int n) {
    long long count = 2LL * g;
    for (int k = 1; k < n; ++k) {
        count *= (2LL * g - 1);
        if (count > (1LL << 50)) break;
    }
    return count;
}

inline constexpr long long kDefaultBudget = 1000000;

namespace detail {

inline Tri combine(Tri a, Tri b) {
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::Yes;
}

} // namespace detail

/// Radius of a figure-derived disc in the measuring chart: the chordal radius
/// around a base point of F+ (non-archimedean), the Euclidean radius in the
/// figure's construction chart (archimedean).
inline std::function<AbsValue(const Disc&)> radius_gauge(const SchottkyFigure& fig) {
    if (fig.place.is_archimedean()) {
        return [fig](const Disc& D) {
            Disc e = image_of_disc(fig.place, fig.chart, D);
            if (e.chart != Chart::Standard) throw Error(Errc::InvalidFigure, "disc contains the chart's infinity");
            return e.radius;
        };
    }
    detail::ShilovPoint eta = detail::interior_base_point(fig);
    return [place = fig.place, eta](const Disc& D) { return detail::chordal_radius(place, D, eta); };
}

inline LimitSample limit_sample(const SchottkyFigure& fig, int n, long long budget = kDefaultBudget) {
    if (n < 1) throw Error(Errc::MalformedInput, "depth must be at least 1");
    if (fig.formal()) throw Error(Errc::FormalMultiplier, "figure generators are formal");
    int g = fig.genus();
    if (disc_count(g, n) > budget)
        throw Error(Errc::BudgetExceeded, std::to_string(disc_count(g, n)) + " discs exceed the budget of " +
                                              std::to_string(budget));
    const Place& place = fig.place;
    auto gauge = radius_gauge(fig);
    auto ls = letters(g);

    LimitSample out;
    out.depth = n;

    std::vector<AbsValue> level1;
    AbsValue r1max = AbsValue::zero();
    for (int l : ls) {
        level1.push_back(gauge(fig.disc(l)));
        r1max = max(r1max, level1.back());
    }
    // c from the words of length 2
    AbsValue c = AbsValue::zero();
    for (size_t x = 0; x < ls.size(); ++x)
        for (int l2 : ls) {
            if (l2 == -ls[x]) continue;
            AbsValue r = gauge(word_disc(fig, {ls[x], l2}));
            c = max(c, r / level1[x]);
        }
    if (c.is_zero()) c = AbsValue::one();  // g = 1 at depth 1 cannot happen; keeps the type total
    out.c = c;
    out.R = r1max / c;

    auto bound_ok = [&](const AbsValue& r, int len) {
        AbsValue b = out.R * c.pow(Rational(len));
        if (place.is_archimedean()) return r.to_real() <= b.to_real() * (Real(1) + Real(kArchTolerance));
        return r <= b;
    };

    for (size_t x = 0; x < ls.size(); ++x) {
        if (!bound_ok(level1[x], 1)) out.decay_bound = false;
        for (size_t y = x + 1; y < ls.size(); ++y) {
            Disjointness d = discs_disjoint(place, fig.disc(ls[x]), fig.disc(ls[y]));
            out.disjoint = detail::combine(out.disjoint, d == Disjointness::Disjoint ? Tri::Yes
                                                         : d == Disjointness::Overlap ? Tri::No : Tri::Unknown);
        }
    }

    Word w;
    std::function<void(const Moebius&, const Disc&, const AbsValue&)> rec =
        [&](const Moebius& m, const Disc& D, const AbsValue& r) {
            if (static_cast<int>(w.size()) == n) {
                out.words.push_back(w);
                out.discs.push_back(D);
                out.radii.push_back(r);
                return;
            }
            struct Child {
                int l;
                Disc disc;
                AbsValue r;
            };
            std::vector<Child> kids;
            for (int l : ls) {
                if (l == -w.back()) continue;
                Disc cd = image_of_disc(place, m, fig.disc(l));
                AbsValue cr = gauge(cd);
                out.nested = detail::combine(out.nested, disc_subset(place, cd, D));
                if (!(cr < r)) out.monotone = false;
                if (!bound_ok(cr, static_cast<int>(w.size()) + 1)) out.decay_bound = false;
                kids.push_back({l, cd, cr});
            }
            for (size_t x = 0; x < kids.size(); ++x)
                for (size_t y = x + 1; y < kids.size(); ++y) {
                    Disjointness d = discs_disjoint(place, kids[x].disc, kids[y].disc);
                    out.disjoint = detail::combine(out.disjoint, d == Disjointness::Disjoint ? Tri::Yes
                                                                 : d == Disjointness::Overlap ? Tri::No : Tri::Unknown);
                }
            for (auto& k : kids) {
                w.push_back(k.l);
                rec(m * letter_matrix(fig.generators, k.l), k.disc, k.r);
                w.pop_back();
            }
        };
    for (size_t x = 0; x < ls.size(); ++x) {
        w.assign(1, ls[x]);
        rec(letter_matrix(fig.generators, ls[x]), fig.disc(ls[x]), level1[x]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fundamental domain
// ---------------------------------------------------------------------------

struct Identification {
    int generator;  // gamma_i maps the boundary of B+(gamma_i^-1) onto that of B+(gamma_i)
    Disc from, to;
};

struct FundamentalDomainReport {
    int genus = 0;
    std::vector<Disc> removed;  // the 2g open discs whose complement is F+
    std::vector<Identification> identifications;
    std::string shape;          // "annulus" for g = 1
};

inline FundamentalDomainReport fundamental_domain_report(const SchottkyFigure& fig) {
    FundamentalDomainReport rep;
    rep.genus = fig.genus();
    for (int l : letters(fig.genus())) rep.removed.push_back(open_version(fig.disc(l)));
    for (int i = 1; i <= fig.genus(); ++i) rep.identifications.push_back({i, fig.disc(-i), fig.disc(i)});
    rep.shape = fig.genus() == 1 ? "annulus" : "sphere minus " + std::to_string(2 * fig.genus()) + " discs";
    return rep;
}

} // namespace schottky
