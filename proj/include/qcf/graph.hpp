#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcf/rng.hpp"

namespace qcf::zk {

using Permutation = std::vector<std::uint16_t>;

inline bool is_permutation(const Permutation& p) {
    std::vector<bool> seen(p.size(), false);
    for (auto v : p) {
        if (v >= p.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

inline Permutation identity_perm(std::size_t v) {
    Permutation p(v);
    for (std::size_t i = 0; i < v; ++i) p[i] = static_cast<std::uint16_t>(i);
    return p;
}

inline Permutation random_perm(std::size_t v, Rng& rng) {
    Permutation p = identity_perm(v);
    for (std::size_t i = v; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    return p;
}

// (a then b): composed(i) = a(b(i))
inline Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compose: size mismatch");
    Permutation out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
    return out;
}

inline Permutation inverse(const Permutation& p) {
    Permutation out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<std::uint16_t>(i);
    return out;
}

// Simple undirected graph: sorted edge list, no self-loops.
struct Graph {
    std::uint16_t v = 0;
    std::vector<std::pair<std::uint16_t, std::uint16_t>> edges;

    void normalize() {
        for (auto& e : edges) {
            if (e.first == e.second) throw std::invalid_argument("Graph: self-loop");
            if (e.first > e.second) std::swap(e.first, e.second);
            if (e.second >= v) throw std::invalid_argument("Graph: vertex out of range");
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }

    static Graph from_edges(std::uint16_t v,
                            std::vector<std::pair<std::uint16_t, std::uint16_t>> edges) {
        Graph g{v, std::move(edges)};
        g.normalize();
        return g;
    }

    static Graph random(std::uint16_t v, Rng& rng, double edge_prob = 0.5) {
        Graph g{v, {}};
        for (std::uint16_t i = 0; i < v; ++i)
            for (std::uint16_t j = static_cast<std::uint16_t>(i + 1); j < v; ++j)
                if (rng.chance(edge_prob)) g.edges.emplace_back(i, j);
        return g;
    }

    static Graph cycle(std::uint16_t v) {
        Graph g{v, {}};
        for (std::uint16_t i = 0; i < v; ++i)
            g.edges.emplace_back(i, static_cast<std::uint16_t>((i + 1) % v));
        g.normalize();
        return g;
    }

    static Graph path(std::uint16_t v) {
        Graph g{v, {}};
        for (std::uint16_t i = 0; i + 1 < v; ++i)
            g.edges.emplace_back(i, static_cast<std::uint16_t>(i + 1));
        g.normalize();
        return g;
    }

    bool operator==(const Graph& other) const { return v == other.v && edges == other.edges; }
    bool operator!=(const Graph& other) const { return !(*this == other); }
    bool operator<(const Graph& other) const {
        return v != other.v ? v < other.v : edges < other.edges;
    }

    std::vector<std::size_t> degree_sequence() const {
        std::vector<std::size_t> deg(v, 0);
        for (const auto& e : edges) {
            ++deg[e.first];
            ++deg[e.second];
        }
        std::sort(deg.begin(), deg.end());
        return deg;
    }

    std::string key() const {
        std::ostringstream out;
        out << v << '#';
        for (const auto& e : edges) out << e.first << ',' << e.second << ';';
        return out.str();
    }
};

inline Graph apply_perm(const Graph& g, const Permutation& p) {
    if (p.size() != g.v) throw std::invalid_argument("apply_perm: size mismatch");
    Graph out{g.v, {}};
    out.edges.reserve(g.edges.size());
    for (const auto& e : g.edges) out.edges.emplace_back(p[e.first], p[e.second]);
    out.normalize();
    return out;
}

// Brute force: usable up to v = 8 or so. Independent check used by tests
// and by the binding-side CRS constructor.
inline std::optional<Permutation> find_isomorphism(const Graph& g0, const Graph& g1) {
    if (g0.v != g1.v || g0.edges.size() != g1.edges.size()) return std::nullopt;
    if (g0.degree_sequence() != g1.degree_sequence()) return std::nullopt;
    Permutation p = identity_perm(g0.v);
    std::sort(p.begin(), p.end());
    do {
        if (apply_perm(g0, p) == g1) return p;
    } while (std::next_permutation(p.begin(), p.end()));
    return std::nullopt;
}

struct GIInstance {
    Graph g0, g1;
    bool operator==(const GIInstance& other) const { return g0 == other.g0 && g1 == other.g1; }
    std::string key() const { return g0.key() + "|" + g1.key(); }
};

struct WitnessedInstance {
    GIInstance instance;
    Permutation witness;  // g1 = witness(g0)
};

inline bool witness_valid(const GIInstance& x, const Permutation& w) {
    return is_permutation(w) && w.size() == x.g0.v && apply_perm(x.g0, w) == x.g1;
}

inline WitnessedInstance make_isomorphic_instance(std::uint16_t v, Rng& rng) {
    for (;;) {
        const Graph g0 = Graph::random(v, rng);
        if (g0.edges.empty() || g0.edges.size() == static_cast<std::size_t>(v) * (v - 1) / 2)
            continue;  // empty and complete graphs make degenerate instances
        const Permutation w = random_perm(v, rng);
        return WitnessedInstance{GIInstance{g0, apply_perm(g0, w)}, w};
    }
}

// Random witness-free instance. Prefers pairs with equal degree sequences
// (degree-preserving double edge swaps); below v = 5 no such non-isomorphic
// pair exists, so any non-isomorphic pair with equal edge count is used.
inline GIInstance make_nonisomorphic_instance(std::uint16_t v, Rng& rng) {
    if (v < 4) throw std::invalid_argument("make_nonisomorphic_instance: need v >= 4");
    if (v > 8) throw std::invalid_argument("make_nonisomorphic_instance: isomorphism check capped at v = 8");
    for (std::size_t attempt = 0; attempt < 4096; ++attempt) {
        const Graph g0 = Graph::random(v, rng);
        if (g0.edges.size() < 2) continue;
        if (v >= 5) {
            // walk a few double edge swaps: (a,b),(c,d) -> (a,d),(c,b)
            Graph g1 = g0;
            for (int swaps = 0; swaps < 4 * v; ++swaps) {
                const std::size_t i = rng.below(g1.edges.size());
                const std::size_t j = rng.below(g1.edges.size());
                if (i == j) continue;
                auto [a, b] = g1.edges[i];
                auto [c, d] = g1.edges[j];
                if (rng.bit()) std::swap(c, d);
                if (a == c || a == d || b == c || b == d) continue;
                Graph cand = g1;
                cand.edges.erase(cand.edges.begin() + static_cast<std::ptrdiff_t>(std::max(i, j)));
                cand.edges.erase(cand.edges.begin() + static_cast<std::ptrdiff_t>(std::min(i, j)));
                bool exists = false;
                for (const auto& e : cand.edges) {
                    const auto ad = std::minmax(a, d);
                    const auto cb = std::minmax(c, b);
                    if (e == std::pair<std::uint16_t, std::uint16_t>(ad.first, ad.second) ||
                        e == std::pair<std::uint16_t, std::uint16_t>(cb.first, cb.second))
                        exists = true;
                }
                if (exists) continue;
                cand.edges.emplace_back(a, d);
                cand.edges.emplace_back(c, b);
                cand.normalize();
                g1 = cand;
            }
            if (g1.degree_sequence() == g0.degree_sequence() && !find_isomorphism(g0, g1))
                return GIInstance{g0, apply_perm(g1, random_perm(v, rng))};
        } else {
            const Graph g1 = Graph::random(v, rng);
            if (g1.edges.size() == g0.edges.size() && !find_isomorphism(g0, g1))
                return GIInstance{g0, g1};
        }
    }
    throw std::runtime_error("make_nonisomorphic_instance: no pair found");
}

// --- text serialization: first line v, then one "u v" line per edge -------

inline std::string graph_to_text(const Graph& g) {
    std::ostringstream out;
    out << g.v << '\n' << g.edges.size() << '\n';
    for (const auto& e : g.edges) out << e.first << ' ' << e.second << '\n';
    return out.str();
}

inline Graph graph_from_text(std::istream& in) {
    std::size_t v = 0, e = 0;
    if (!(in >> v >> e)) throw std::runtime_error("graph_from_text: missing header");
    if (v > 64) throw std::runtime_error("graph_from_text: vertex count above 64");
    Graph g{static_cast<std::uint16_t>(v), {}};
    for (std::size_t i = 0; i < e; ++i) {
        std::size_t a = 0, b = 0;
        if (!(in >> a >> b)) throw std::runtime_error("graph_from_text: truncated edge list");
        g.edges.emplace_back(static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b));
    }
    g.normalize();
    return g;
}

}  // namespace qcf::zk
