#pragma once

// Skeleta of Mumford curves: the tree spanned by the Shilov points of a
// Schottky figure, glued along the generator identifications.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schottky/schottky.hpp"

namespace schottky {

/// Length q * eps * ln p, kept as the exact rational q.
struct MetricLength {
    Rational q = 0;
    Prime p = 0;
    Rational eps = 1;

    MetricLength operator+(const MetricLength& o) const { return {q + o.q, p ? p : o.p, p ? eps : o.eps}; }
    bool operator==(const MetricLength& o) const { return q == o.q && (q == 0 || (p == o.p && eps == o.eps)); }
    bool operator!=(const MetricLength& o) const { return !(*this == o); }
    bool operator<(const MetricLength& o) const { return q < o.q; }

    Real to_real() const { return schottky::to_real(q * eps) * boost::multiprecision::log(Real(p)); }
};

inline std::string to_string(const MetricLength& l) { return to_string(l.q); }

namespace detail {

inline void require_padic(const Place& place) {
    if (place.is_archimedean()) throw Error(Errc::ArchimedeanUnsupported, "skeleta need a non-archimedean place");
    if (place.kind != PlaceKind::Padic)
        throw Error(Errc::ArchimedeanUnsupported, "skeleta need a non-trivially valued place, got " + to_string(place));
}

/// log of a modulus >= 1 in units eps * ln p.
inline MetricLength length_of_modulus(const Place& place, const AbsValue& m) {
    if (!m.is_exact()) throw Error(Errc::DegenerateConfiguration, "inexact modulus");
    for (const auto& [p, e] : m.exponents())
        if (p != place.p) throw Error(Errc::DegenerateConfiguration, "modulus outside the value group of the place");
    Rational e = m.exponents().empty() ? Rational(0) : m.exponents().begin()->second;
    if (e > 0) throw Error(Errc::DegenerateConfiguration, "negative length");
    return {-e / place.eps, place.p, place.eps};
}

} // namespace detail

/// D+(a, max(r, s, |a - b|)); its Shilov point is the join of the two.
inline Disc shilov_join(const Place& place, const Disc& D1, const Disc& D2) {
    if (place.is_archimedean()) throw Error(Errc::NotNonArchimedean, "shilov_join needs a non-archimedean place");
    if (D1.chart != Chart::Standard || D2.chart != Chart::Standard)
        throw Error(Errc::ChartMismatch, "shilov_join takes discs in the standard chart");
    AbsValue j = max(max(D1.radius, D2.radius), abs(place, D1.center - D2.center));
    return {Chart::Standard, D1.center, j, true};
}

/// Distance between the Shilov points of two balls.
inline MetricLength shilov_distance(const Place& place, const FieldElem& a, const AbsValue& r, const FieldElem& b,
                                    const AbsValue& s) {
    AbsValue j = max(max(r, s), abs(place, a - b));
    return detail::length_of_modulus(place, j / r) + detail::length_of_modulus(place, j / s);
}

struct TreeNode {
    FieldElem center;
    AbsValue radius;
    std::optional<int> leaf;  // the letter (i or -i) of the figure disc
};

struct MetricEdge {
    int u = 0, v = 0;
    MetricLength len;
};

struct MetricTree {
    Place place;
    std::vector<TreeNode> nodes;
    std::vector<MetricEdge> edges;

    int leaf_node(int letter) const {
        for (size_t k = 0; k < nodes.size(); ++k)
            if (nodes[k].leaf && *nodes[k].leaf == letter) return static_cast<int>(k);
        throw Error(Errc::MalformedInput, "no leaf for " + letter_name(letter));
    }

    /// Edge indices along the unique path.
    std::vector<int> path(int from, int to) const {
        std::vector<std::vector<std::pair<int, int>>> adj(nodes.size());
        for (size_t e = 0; e < edges.size(); ++e) {
            adj[static_cast<size_t>(edges[e].u)].push_back({edges[e].v, static_cast<int>(e)});
            adj[static_cast<size_t>(edges[e].v)].push_back({edges[e].u, static_cast<int>(e)});
        }
        std::vector<int> via(nodes.size(), -2);
        std::vector<int> stack{from};
        via[static_cast<size_t>(from)] = -1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto [y, e] : adj[static_cast<size_t>(x)])
                if (via[static_cast<size_t>(y)] == -2) {
                    via[static_cast<size_t>(y)] = e;
                    stack.push_back(y);
                }
        }
        std::vector<int> out;
        for (int x = to; x != from;) {
            int e = via[static_cast<size_t>(x)];
            if (e < 0) throw Error(Errc::DegenerateConfiguration, "tree is disconnected");
            out.push_back(e);
            x = edges[static_cast<size_t>(e)].u == x ? edges[static_cast<size_t>(e)].v : edges[static_cast<size_t>(e)].u;
        }
        return out;
    }

    MetricLength distance(int from, int to) const {
        MetricLength total{0, place.p, place.eps};
        for (int e : path(from, to)) total = total + edges[static_cast<size_t>(e)].len;
        return total;
    }
};

namespace detail {

// eta_{a,r} <= eta_{b,s} in the order pointing to infinity
inline bool below_or_equal(const Place& place, const TreeNode& x, const TreeNode& y) {
    return x.radius <= y.radius && abs(place, x.center - y.center) <= y.radius;
}

inline bool same_point(const Place& place, const TreeNode& x, const TreeNode& y) {
    return x.radius == y.radius && abs(place, x.center - y.center) <= x.radius;
}

} // namespace detail

/// The convex hull of the 2g Shilov points of the figure, with exact lengths.
inline MetricTree build_tree(const SchottkyFigure& fig) {
    const Place& place = fig.place;
    detail::require_padic(place);
    MetricTree tree;
    tree.place = place;
    std::vector<TreeNode> leaves;
    for (int l : letters(fig.genus())) {
        auto reg = detail::na_region(place, fig.disc(l));
        leaves.push_back({reg.a, reg.r, l});
    }
    std::vector<TreeNode> nodes = leaves;
    for (size_t x = 0; x < leaves.size(); ++x)
        for (size_t y = x + 1; y < leaves.size(); ++y) {
            AbsValue j = max(max(leaves[x].radius, leaves[y].radius), abs(place, leaves[x].center - leaves[y].center));
            nodes.push_back({leaves[x].center, j, std::nullopt});
        }
    for (const auto& n : nodes) {
        bool dup = false;
        for (auto& m : tree.nodes)
            if (detail::same_point(place, n, m)) {
                dup = true;
                if (n.leaf && !m.leaf) m.leaf = n.leaf;
                else if (n.leaf && m.leaf && *n.leaf != *m.leaf)
                    throw Error(Errc::InvalidFigure, "two figure discs share a Shilov point");
            }
        if (!dup) tree.nodes.push_back(n);
    }
    for (size_t x = 0; x < tree.nodes.size(); ++x) {
        std::optional<size_t> parent;
        for (size_t y = 0; y < tree.nodes.size(); ++y) {
            if (y == x || !detail::below_or_equal(place, tree.nodes[x], tree.nodes[y])) continue;
            if (!parent || tree.nodes[y].radius < tree.nodes[*parent].radius) parent = y;
        }
        if (parent)
            tree.edges.push_back({static_cast<int>(x), static_cast<int>(*parent),
                                  detail::length_of_modulus(place, tree.nodes[*parent].radius / tree.nodes[x].radius)});
    }
    // suppress internal degree-2 nodes
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t v = 0; v < tree.nodes.size() && !changed; ++v) {
            if (tree.nodes[v].leaf) continue;
            std::vector<size_t> inc;
            for (size_t e = 0; e < tree.edges.size(); ++e)
                if (tree.edges[e].u == static_cast<int>(v) || tree.edges[e].v == static_cast<int>(v)) inc.push_back(e);
            if (inc.size() != 2) continue;
            auto other = [&](size_t e) { return tree.edges[e].u == static_cast<int>(v) ? tree.edges[e].v : tree.edges[e].u; };
            MetricEdge merged{other(inc[0]), other(inc[1]), tree.edges[inc[0]].len + tree.edges[inc[1]].len};
            tree.edges.erase(tree.edges.begin() + static_cast<long>(inc[1]));
            tree.edges.erase(tree.edges.begin() + static_cast<long>(inc[0]));
            tree.edges.push_back(merged);
            tree.nodes.erase(tree.nodes.begin() + static_cast<long>(v));
            for (auto& e : tree.edges) {
                if (e.u > static_cast<int>(v)) --e.u;
                if (e.v > static_cast<int>(v)) --e.v;
            }
            changed = true;
        }
    }
    return tree;
}

struct GraphEdge {
    int u = 0, v = 0;
    MetricLength len;
};

struct MetricGraph {
    int vertex_count = 0;
    std::vector<GraphEdge> edges;
    int betti = 0;
    std::vector<std::vector<int>> cycles;  // cycles[i-1]: edge indices of the cycle through glued vertex i

    std::vector<int> degrees() const {
        std::vector<int> d(static_cast<size_t>(vertex_count), 0);
        for (const auto& e : edges) {
            ++d[static_cast<size_t>(e.u)];
            ++d[static_cast<size_t>(e.v)];
        }
        return d;
    }
};

/// Identify leaf (i,+) with leaf (i,-) and suppress the resulting degree-2 vertices.
inline MetricGraph glue_skeleton(const MetricTree& tree) {
    int n = static_cast<int>(tree.nodes.size());
    int g = 0;
    for (const auto& node : tree.nodes)
        if (node.leaf) g = std::max(g, *node.leaf > 0 ? *node.leaf : -*node.leaf);

    // union leaves pairwise
    std::vector<int> rep(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) rep[static_cast<size_t>(k)] = k;
    for (int i = 1; i <= g; ++i) rep[static_cast<size_t>(tree.leaf_node(-i))] = tree.leaf_node(i);
    std::map<int, int> ids;
    for (int k = 0; k < n; ++k)
        if (!ids.count(rep[static_cast<size_t>(k)])) ids.emplace(rep[static_cast<size_t>(k)], static_cast<int>(ids.size()));

    struct Work {
        int u, v;
        MetricLength len;
        std::vector<int> tree_edges;
    };
    std::vector<Work> work;
    for (size_t e = 0; e < tree.edges.size(); ++e)
        work.push_back({ids[rep[static_cast<size_t>(tree.edges[e].u)]], ids[rep[static_cast<size_t>(tree.edges[e].v)]],
                        tree.edges[e].len, {static_cast<int>(e)}});
    int vcount = static_cast<int>(ids.size());
    std::vector<bool> alive(static_cast<size_t>(vcount), true);

    for (bool changed = true; changed;) {
        changed = false;
        int live = 0;
        for (bool a : alive) live += a;
        for (int v = 0; v < vcount && !changed; ++v) {
            if (!alive[static_cast<size_t>(v)] || live == 1) continue;
            std::vector<size_t> inc;
            bool loop = false;
            for (size_t e = 0; e < work.size(); ++e) {
                if (work[e].u == v && work[e].v == v) loop = true;
                if (work[e].u == v || work[e].v == v) inc.push_back(e);
            }
            if (loop || inc.size() != 2) continue;
            auto other = [&](size_t e) { return work[e].u == v ? work[e].v : work[e].u; };
            Work merged{other(inc[0]), other(inc[1]), work[inc[0]].len + work[inc[1]].len, work[inc[0]].tree_edges};
            merged.tree_edges.insert(merged.tree_edges.end(), work[inc[1]].tree_edges.begin(), work[inc[1]].tree_edges.end());
            work.erase(work.begin() + static_cast<long>(inc[1]));
            work.erase(work.begin() + static_cast<long>(inc[0]));
            work.push_back(merged);
            alive[static_cast<size_t>(v)] = false;
            changed = true;
        }
    }
    std::vector<int> renum(static_cast<size_t>(vcount), -1);
    MetricGraph out;
    for (int v = 0; v < vcount; ++v)
        if (alive[static_cast<size_t>(v)]) renum[static_cast<size_t>(v)] = out.vertex_count++;
    std::map<int, int> tree_edge_owner;
    for (size_t e = 0; e < work.size(); ++e) {
        out.edges.push_back({renum[static_cast<size_t>(work[e].u)], renum[static_cast<size_t>(work[e].v)], work[e].len});
        for (int te : work[e].tree_edges) tree_edge_owner[te] = static_cast<int>(e);
    }
    out.betti = static_cast<int>(out.edges.size()) - out.vertex_count + 1;
    for (int i = 1; i <= g; ++i) {
        std::vector<int> cyc;
        for (int te : tree.path(tree.leaf_node(i), tree.leaf_node(-i))) {
            int ge = tree_edge_owner.at(te);
            if (std::find(cyc.begin(), cyc.end(), ge) == cyc.end()) cyc.push_back(ge);
        }
        std::sort(cyc.begin(), cyc.end());
        out.cycles.push_back(cyc);
    }
    if (out.betti != g) throw Error(Errc::InvalidFigure, "glued graph has Betti number " + std::to_string(out.betti));
    return out;
}

/// Canonical multiset description: sorted (degree pattern, lengths) used to
/// compare graphs up to isomorphism in tests and reports.
inline std::vector<std::string> graph_signature(const MetricGraph& G) {
    auto deg = G.degrees();
    std::vector<std::string> sig;
    for (const auto& e : G.edges) {
        int a = deg[static_cast<size_t>(e.u)], b = deg[static_cast<size_t>(e.v)];
        std::string kind = e.u == e.v ? "loop" : "edge";
        sig.push_back(kind + ":" + std::to_string(std::min(a, b)) + "-" + std::to_string(std::max(a, b)) + ":" +
                      to_string(e.len.q));
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

/// |beta| of a loxodromic matrix through |det| / |tr|^2.
inline AbsValue multiplier_modulus(const Place& place, const Moebius& m) {
    AbsValue tr = abs(place, m.trace());
    AbsValue dt = abs(place, m.det());
    if (!(dt < tr * tr)) throw Error(Errc::NotLoxodromic, to_string(m) + " is not loxodromic at " + to_string(place));
    return dt / (tr * tr);
}

inline MetricLength translation_length(const SchottkyPoint& pt, const Word& w) {
    detail::require_padic(pt.place);
    Word r = reduce(w);
    if (r.empty()) throw Error(Errc::NotLoxodromic, "the identity has no translation length");
    Moebius m = word_matrix(pt.generators(), r);
    return detail::length_of_modulus(pt.place, multiplier_modulus(pt.place, m).inverse());
}

/// Lexicographically least representative of the conjugacy class of a cyclically
/// reduced word, identifying w with w^-1 (they have the same length).
inline Word cyclic_canonical(const Word& w) {
    auto key = [](const Word& x) {
        std::vector<std::pair<int, int>> k;
        for (int l : x) k.push_back({l > 0 ? l : -l, l > 0 ? 0 : 1});
        return k;
    };
    Word best = w;
    for (const Word& base : {w, inverse(w)})
        for (size_t s = 0; s < base.size(); ++s) {
            Word rot(base.begin() + static_cast<long>(s), base.end());
            rot.insert(rot.end(), base.begin(), base.begin() + static_cast<long>(s));
            if (key(rot) < key(best)) best = rot;
        }
    return best;
}

/// One representative per conjugacy class (up to inversion) of length <= max_len.
inline std::vector<Word> conjugacy_representatives(int g, int max_len) {
    std::vector<Word> out;
    std::set<Word> seen;
    for (int n = 1; n <= max_len; ++n)
        for_each_reduced_word(g, n, [&](const Word& w) {
            if (w.size() > 1 && w.front() == -w.back()) return;
            Word c = cyclic_canonical(w);
            if (seen.insert(c).second) out.push_back(c);
        });
    return out;
}

} // namespace schottky
