#pragma once

// The action of Out(F_g) on Schottky points through the Nielsen generators,
// membership search over basis changes, and the outer-space datum.

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "schottky/skeleton.hpp"

namespace schottky {

/// Letters +k / -k for sigma_k and its inverse, k in 1..4.
using NielsenWord = std::vector<int>;

inline std::string to_string_nielsen(const NielsenWord& w) {
    std::string s;
    for (int l : w) {
        if (!s.empty()) s += ",";
        s += "s" + std::to_string(l > 0 ? l : -l);
        if (l < 0) s += "'";
    }
    return s;
}

inline NielsenWord parse_nielsen(const std::string& text) {
    NielsenWord w;
    if (text.empty() || text == "id") return w;
    size_t pos = 0;
    while (true) {
        size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
        while (!tok.empty() && tok.back() == ' ') tok.pop_back();
        bool inv = !tok.empty() && tok.back() == '\'';
        if (inv) tok.pop_back();
        if (tok.size() != 2 || tok[0] != 's' || tok[1] < '1' || tok[1] > '4')
            throw Error(Errc::MalformedInput, "bad Nielsen letter '" + tok + "'");
        int k = tok[1] - '0';
        w.push_back(inv ? -k : k);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return w;
}

/// The involution e_i -> e_i^-1 of F_2.
inline const NielsenWord& iota_word() {
    static const NielsenWord w{3, 2, 3, 2};
    return w;
}

/// Images of e_1..e_g under one Nielsen generator.
inline std::vector<Word> nielsen_images(int letter, int g) {
    std::vector<Word> img;
    for (int i = 1; i <= g; ++i) img.push_back({i});
    int k = letter > 0 ? letter : -letter;
    bool inv = letter < 0;
    if ((k == 2 || k == 4) && g < 2) throw Error(Errc::MalformedInput, "s" + std::to_string(k) + " needs g >= 2");
    switch (k) {
    case 1:
        for (int i = 1; i <= g; ++i) {
            int j = inv ? (i == g ? 1 : i + 1) : (i == 1 ? g : i - 1);
            img[static_cast<size_t>(i - 1)] = {j};
        }
        break;
    case 2: std::swap(img[0], img[1]); break;
    case 3: img[0] = {-1}; break;
    case 4: img[1] = inv ? Word{1, 2} : Word{-1, 2}; break;
    default: throw Error(Errc::MalformedInput, "unknown Nielsen generator");
    }
    return img;
}

/// Substitute images for the letters of w.
inline Word substitute(const std::vector<Word>& images, const Word& w) {
    Word out;
    for (int l : w) {
        const Word& im = images.at(static_cast<size_t>((l > 0 ? l : -l) - 1));
        Word piece = l > 0 ? im : inverse(im);
        out.insert(out.end(), piece.begin(), piece.end());
    }
    return reduce(out);
}

/// tau = s_1 o s_2 o ... o s_n as images of the basis.
inline std::vector<Word> automorphism(const NielsenWord& w, int g) {
    std::vector<Word> img;
    for (int i = 1; i <= g; ++i) img.push_back({i});
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        auto s = nielsen_images(*it, g);
        for (auto& x : img) x = substitute(s, x);
    }
    return img;
}

inline Moebius evaluate(const SchottkyPoint& pt, const Word& w) { return word_matrix(pt.generators(), reduce(w)); }

inline constexpr unsigned kDefaultDigits = 40;

/// Conjugates the triples by the map sending (alpha_1, alpha'_1, alpha_2) to (0, inf, 1).
inline SchottkyPoint normalize_triples(const Place& place, std::vector<KoebeTriple> triples) {
    Moebius eps;
    if (triples.size() >= 2) {
        eps = three_point_map(triples[0].alpha, triples[0].alpha_prime, triples[1].alpha);
    } else {
        const auto& t = triples.at(0);
        if (t.alpha == t.alpha_prime) throw Error(Errc::DegenerateFixedPoints, "fixed points coincide");
        eps = detail::koebe_chart(t);
    }
    for (auto& t : triples) {
        t.alpha = apply(eps, t.alpha);
        t.alpha_prime = apply(eps, t.alpha_prime);
    }
    return make_point(place, std::move(triples));
}

inline SchottkyPoint normalize_basis(const Place& place, const std::vector<Moebius>& basis,
                                     unsigned digits = kDefaultDigits) {
    std::vector<KoebeTriple> triples;
    for (const auto& m : basis) triples.push_back(matrix_to_koebe(place, m, digits));
    return normalize_triples(place, std::move(triples));
}

namespace detail {

inline KoebeTriple triple_of_word(const SchottkyPoint& pt, const Word& w, unsigned digits) {
    if (w.size() == 1) {
        KoebeTriple t = pt.triples.at(static_cast<size_t>((w[0] > 0 ? w[0] : -w[0]) - 1));
        if (w[0] < 0) std::swap(t.alpha, t.alpha_prime);
        return t;
    }
    if (pt.formal()) throw Error(Errc::FormalMultiplier, "products of formal generators have no Koebe coordinates");
    KoebeTriple t = matrix_to_koebe(pt.place, evaluate(pt, w), digits);
    t.approximate = t.approximate || pt.approximate();
    return t;
}

} // namespace detail

inline SchottkyPoint nielsen_apply(int letter, const SchottkyPoint& pt, unsigned digits = kDefaultDigits) {
    std::vector<KoebeTriple> triples;
    for (const auto& w : nielsen_images(letter, pt.genus())) triples.push_back(detail::triple_of_word(pt, w, digits));
    return normalize_triples(pt.place, std::move(triples));
}

/// Applies the letters from left to right, which realises s_1 o ... o s_n.
inline SchottkyPoint apply_word(const NielsenWord& w, const SchottkyPoint& pt, unsigned digits = kDefaultDigits) {
    SchottkyPoint cur = pt;
    for (int l : w) cur = nielsen_apply(l, cur, digits);
    return cur;
}

// ---------------------------------------------------------------------------
// Equality of points
// ---------------------------------------------------------------------------

namespace detail {

inline bool approx_equal(const Place& place, const FieldElem& x, const FieldElem& y, unsigned digits) {
    if (x == y) return true;
    FieldElem d = x - y;
    if (place.is_archimedean()) {
        Real scale = std::max({Real(1), x.to_complex().abs(), y.to_complex().abs()});
        return d.to_complex().abs() <= scale * Real(1e-9);
    }
    if (place.kind == PlaceKind::TrivialQ) return false;
    if (!d.is_real()) return false;
    return valuation(d.re, place.p) >= static_cast<long>(digits / 2);
}

inline bool approx_equal(const Place& place, const ProjPoint& x, const ProjPoint& y, unsigned digits) {
    if (x == y) return true;
    if (x.is_infinity() || y.is_infinity()) {
        const ProjPoint& f = x.is_infinity() ? y : x;
        if (f.u.is_zero()) return false;
        return approx_equal(place, FieldElem(1) / f.u, FieldElem(0), digits);
    }
    // compare in the chart where both have absolute value <= 1 when possible
    bool big = place.is_archimedean() ? x.u.to_complex().abs() > Real(1) && y.u.to_complex().abs() > Real(1)
                                      : (!x.u.is_zero() && !y.u.is_zero() && abs(place, x.u) > AbsValue::one() &&
                                         abs(place, y.u) > AbsValue::one());
    if (big) return approx_equal(place, FieldElem(1) / x.u, FieldElem(1) / y.u, digits);
    return approx_equal(place, x.u, y.u, digits);
}

} // namespace detail

/// Exact equality of Koebe tuples for exact points; within the working precision otherwise.
inline bool same_point(const SchottkyPoint& a, const SchottkyPoint& b, unsigned digits = kDefaultDigits) {
    if (a.place != b.place || a.genus() != b.genus()) return false;
    bool exact = !a.approximate() && !b.approximate() && !a.place.is_archimedean();
    for (size_t i = 0; i < a.triples.size(); ++i) {
        const auto &s = a.triples[i], &t = b.triples[i];
        if (s.formal() || t.formal()) {
            if (!s.formal() || !t.formal() || *s.beta_abs != *t.beta_abs) return false;
        }
        if (exact) {
            if (s.alpha != t.alpha || s.alpha_prime != t.alpha_prime) return false;
            if (!s.formal() && s.beta != t.beta) return false;
            continue;
        }
        if (!detail::approx_equal(a.place, s.alpha, t.alpha, digits)) return false;
        if (!detail::approx_equal(a.place, s.alpha_prime, t.alpha_prime, digits)) return false;
        if (!s.formal() && !detail::approx_equal(a.place, s.beta, t.beta, digits)) return false;
    }
    return true;
}

/// tr^2/det, the conjugation invariant determining the multiplier.
inline FieldElem multiplier_invariant(const Moebius& m) { return m.trace() * m.trace() / m.det(); }

// ---------------------------------------------------------------------------
// Searches over Nielsen words
// ---------------------------------------------------------------------------

/// Letters used by searches: s2 and s3 are involutions, so their inverses are skipped.
inline std::vector<int> search_letters(int g) {
    if (g == 1) return {3};
    return {1, -1, 2, 3, 4, -4};
}

inline bool cancels(int a, int b) { return a == -b || (a == b && (a == 2 || a == 3)); }

/// All Nielsen words of length exactly n without immediate cancellation.
inline std::vector<NielsenWord> nielsen_words(int g, int n) {
    std::vector<NielsenWord> out{{}};
    for (int k = 0; k < n; ++k) {
        std::vector<NielsenWord> next;
        for (const auto& w : out)
            for (int l : search_letters(g)) {
                if (!w.empty() && cancels(w.back(), l)) continue;
                NielsenWord x = w;
                x.push_back(l);
                next.push_back(x);
            }
        out = std::move(next);
    }
    return out;
}

inline std::vector<NielsenWord> stabilizer_search(const SchottkyPoint& pt, int bound, unsigned digits = kDefaultDigits) {
    if (pt.place.is_archimedean()) throw Error(Errc::NotNonArchimedean, "stabilizer search needs exact equality");
    std::vector<NielsenWord> out;
    for (int n = 0; n <= bound; ++n)
        for (const auto& w : nielsen_words(pt.genus(), n)) {
            try {
                if (same_point(apply_word(w, pt, digits), pt, digits)) out.push_back(w);
            } catch (const Error& e) {
                if (e.code() != Errc::FormalMultiplier && e.code() != Errc::MalformedInput &&
                    e.code() != Errc::DegenerateFixedPoints)
                    throw;
            }
        }
    return out;
}

/// Approximate p-adic coordinates are trusted only when every quantity the
/// criterion looks at sits well above the working precision.
inline bool reliable(const SchottkyPoint& pt, unsigned digits = kDefaultDigits) {
    if (!pt.approximate() || pt.place.is_archimedean()) return true;
    if (pt.place.kind != PlaceKind::Padic && pt.place.kind != PlaceKind::TrivialFp) return false;
    long lim = static_cast<long>(digits / 2);
    auto fx = pt.fixed_points();
    for (size_t i = 0; i < fx.size(); ++i) {
        if (!fx[i].is_infinity() && !fx[i].u.is_zero() && std::labs(valuation(fx[i].u.re, pt.place.p)) >= lim) return false;
        for (size_t j = i + 1; j < fx.size(); ++j) {
            if (fx[i].is_infinity() || fx[j].is_infinity()) continue;
            FieldElem d = fx[i].u - fx[j].u;
            if (d.is_zero() || valuation(d.re, pt.place.p) >= lim) return false;
        }
    }
    for (const auto& t : pt.triples)
        if (!t.formal() && valuation(t.beta.re, pt.place.p) >= lim) return false;
    return true;
}

enum class MembershipStatus { Yes, No, Unknown };

inline std::string to_string(MembershipStatus s) {
    return s == MembershipStatus::Yes ? "yes" : (s == MembershipStatus::No ? "no" : "unknown");
}

struct MembershipResult {
    MembershipStatus status = MembershipStatus::Unknown;
    NielsenWord witness;
    std::optional<SchottkyPoint> image;     // witness applied to the point
    std::optional<SchottkyFigure> figure;   // certificate for the image
    int explored = 0;
};

/// Breadth-first search for a basis change into SB.
inline MembershipResult is_schottky(const SchottkyPoint& pt, int nielsen_depth, unsigned digits = kDefaultDigits,
                                    const ArchSearchConfig& cfg = {}) {
    MembershipResult res;
    for (const auto& t : pt.triples)
        if (!multiplier_in_unit_interval(pt.place, t)) {
            res.status = MembershipStatus::No;
            return res;
        }
    struct Item {
        NielsenWord w;
        SchottkyPoint q;
    };
    std::deque<Item> queue{{{}, pt}};
    std::vector<SchottkyPoint> seen{pt};
    while (!queue.empty()) {
        Item it = std::move(queue.front());
        queue.pop_front();
        ++res.explored;
        if (reliable(it.q, digits)) {
            SBResult sb = is_in_SB(it.q, cfg);
            if (sb.status == SBStatus::Yes) {
                res.status = MembershipStatus::Yes;
                res.witness = it.w;
                res.image = it.q;
                res.figure = sb.figure;
                return res;
            }
        }
        if (static_cast<int>(it.w.size()) >= nielsen_depth) continue;
        for (int l : search_letters(pt.genus())) {
            if (!it.w.empty() && cancels(it.w.back(), l)) continue;
            std::optional<SchottkyPoint> next;
            try {
                next = nielsen_apply(l, it.q, digits);
            } catch (const Error& e) {
                if (e.code() == Errc::FormalMultiplier || e.code() == Errc::NotLoxodromic ||
                    e.code() == Errc::DegenerateFixedPoints || e.code() == Errc::MalformedInput)
                    continue;
                throw;
            }
            bool dup = false;
            for (const auto& s : seen)
                if (same_point(s, *next, digits)) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            seen.push_back(*next);
            NielsenWord w = it.w;
            w.push_back(l);
            queue.push_back({w, *next});
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Outer-space datum
// ---------------------------------------------------------------------------

struct CVDatum {
    MetricGraph graph;
    NielsenWord marking_change;  // basis change used to reach SB
    std::vector<std::pair<Word, MetricLength>> lengths;
};

inline CVDatum cv_datum(const SchottkyPoint& pt, int max_len, int nielsen_depth = 3,
                        unsigned digits = kDefaultDigits) {
    detail::require_padic(pt.place);
    MembershipResult m = is_schottky(pt, nielsen_depth, digits);
    if (m.status != MembershipStatus::Yes || !m.figure)
        throw Error(Errc::NotInSB, "no Schottky basis found within Nielsen depth " + std::to_string(nielsen_depth));
    CVDatum out;
    out.graph = glue_skeleton(build_tree(*m.figure));
    out.marking_change = m.witness;
    for (const auto& w : conjugacy_representatives(pt.genus(), max_len))
        out.lengths.push_back({w, translation_length(pt, w)});
    return out;
}

} // namespace schottky
