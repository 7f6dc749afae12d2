#ifndef GALRING_CONFIG_COUNT_HPP
#define GALRING_CONFIG_COUNT_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "char_sums.hpp"
#include "error.hpp"
#include "ring.hpp"

namespace galring {

using Vec = std::vector<Element>;
using Count = mpz_class;

/// Default cap on brute-force work, counted in dot products (or tuples).
inline constexpr u64 kDefaultWorkBudget = 10'000'000;

inline Element dot(const GaloisRing& ring, const Vec& x, const Vec& y) {
    if (x.size() != y.size()) fail(ErrorCode::DimensionMismatch, "dot of vectors with different lengths");
    Element acc = ring.zero();
    for (std::size_t i = 0; i < x.size(); ++i) acc = ring.add(acc, ring.mul(x[i], y[i]));
    return acc;
}

/// A deduplicated finite subset of R^d; insertion order is kept.
class PointSet {
public:
    PointSet(GaloisRing ring, unsigned d) : ring_(std::move(ring)), d_(d) {
        if (d_ < 1) fail(ErrorCode::DimensionMismatch, "dimension must be at least 1");
    }

    PointSet(GaloisRing ring, unsigned d, const std::vector<Vec>& points) : PointSet(std::move(ring), d) {
        for (const auto& pt : points) insert(pt);
    }

    /// All p^{dek} points of R^d.
    static PointSet full(const GaloisRing& ring, unsigned d) {
        PointSet s(ring, d);
        const u64 n = ring.size_u64();
        const auto total = checked_pow(n, d);
        if (!total || *total > (u64{1} << 24)) fail(ErrorCode::CapExceeded, "R^d too large to materialise");
        for (u64 idx = 0; idx < *total; ++idx) s.insert(s.point_at(idx));
        return s;
    }

    /// Returns false when the point was already present.
    bool insert(const Vec& pt) {
        if (pt.size() != d_) fail(ErrorCode::DimensionMismatch, "point has wrong dimension");
        for (const auto& c : pt) ring_.check(c);
        auto key = key_of(pt);
        if (!seen_.insert(key).second) return false;
        points_.push_back(pt);
        return true;
    }

    /// The point whose coordinates are the base-|R| digits of idx, first
    /// coordinate least significant.
    Vec point_at(u64 idx) const {
        const u64 n = ring_.size_u64();
        Vec pt;
        for (unsigned i = 0; i < d_; ++i) {
            pt.push_back(ring_.element_at(idx % n));
            idx /= n;
        }
        return pt;
    }

    const GaloisRing& ring() const { return ring_; }
    unsigned dim() const { return d_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<Vec>& points() const { return points_; }
    const Vec& operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<u64> key_of(const Vec& pt) const {
        std::vector<u64> key;
        for (const auto& c : pt) key.insert(key.end(), c.coeffs.begin(), c.coeffs.end());
        return key;
    }

    GaloisRing ring_;
    unsigned d_;
    std::vector<Vec> points_;
    std::set<std::vector<u64>> seen_;
};

/// Labeled forest: m vertices (0-based internally), edges (i, j, alpha) with
/// i < j requiring x_i . x_j = alpha.
struct ForestEdge {
    unsigned i;
    unsigned j;
    Element alpha;
};

class ForestSpec {
public:
    ForestSpec(unsigned m, std::vector<ForestEdge> edges) : m_(m), edges_(std::move(edges)) {
        std::vector<unsigned> parent(m_);
        std::iota(parent.begin(), parent.end(), 0u);
        auto find = [&](unsigned v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (auto& ed : edges_) {
            if (ed.i >= m_ || ed.j >= m_) fail(ErrorCode::IndexOutOfRange, "forest vertex index out of range");
            if (ed.i == ed.j) fail(ErrorCode::CyclicGraph, "self-loop in forest");
            if (ed.i > ed.j) std::swap(ed.i, ed.j);
            const unsigned a = find(ed.i), b = find(ed.j);
            if (a == b) fail(ErrorCode::CyclicGraph, "edge set contains a cycle");
            parent[a] = b;
        }
    }

    unsigned vertex_count() const { return m_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<ForestEdge>& edges() const { return edges_; }

    static ForestSpec path(const std::vector<Element>& alphas) {
        std::vector<ForestEdge> edges;
        for (unsigned j = 0; j < alphas.size(); ++j) edges.push_back({j, j + 1, alphas[j]});
        return ForestSpec(static_cast<unsigned>(alphas.size() + 1), std::move(edges));
    }

    static ForestSpec star(const std::vector<Element>& alphas) {
        std::vector<ForestEdge> edges;
        for (unsigned j = 0; j < alphas.size(); ++j) edges.push_back({0, j + 1, alphas[j]});
        return ForestSpec(static_cast<unsigned>(alphas.size() + 1), std::move(edges));
    }

private:
    unsigned m_;
    std::vector<ForestEdge> edges_;
};

/// Ring indices of x . y for every ordered pair of points.
class DotMatrix {
public:
    explicit DotMatrix(const PointSet& E) : n_(E.size()), codes_(n_ * n_) {
        const auto& ring = E.ring();
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = a; b < n_; ++b) {
                const u64 c = ring.index_of(dot(ring, E[a], E[b]));
                codes_[a * n_ + b] = c;
                codes_[b * n_ + a] = c;
            }
    }

    std::size_t size() const { return n_; }
    u64 operator()(std::size_t a, std::size_t b) const { return codes_[a * n_ + b]; }

private:
    std::size_t n_;
    std::vector<u64> codes_;
};

/// N(x, alpha) = #{y in E : x . y = alpha}, keyed by ring index of alpha.
class DotTable {
public:
    explicit DotTable(const PointSet& E) : DotTable(E, DotMatrix(E)) {}

    DotTable(const PointSet& E, const DotMatrix& M) : ring_(E.ring()), rows_(E.size()) {
        for (std::size_t a = 0; a < M.size(); ++a)
            for (std::size_t b = 0; b < M.size(); ++b) ++rows_[a][M(a, b)];
    }

    u64 count(std::size_t x, const Element& alpha) const {
        const auto& row = rows_[x];
        const auto it = row.find(ring_.index_of(alpha));
        return it == row.end() ? 0 : it->second;
    }

    const std::unordered_map<u64, u64>& row(std::size_t x) const { return rows_[x]; }
    std::size_t size() const { return rows_.size(); }

private:
    GaloisRing ring_;
    std::vector<std::unordered_map<u64, u64>> rows_;
};

/// Ordered pairs (x, y) in E x E with x . y = t, by direct evaluation.
inline u64 nu(const PointSet& E, const Element& t) {
    const auto& ring = E.ring();
    ring.check(t);
    u64 n = 0;
    for (const auto& x : E.points())
        for (const auto& y : E.points())
            if (dot(ring, x, y) == t) ++n;
    return n;
}

/// Same count through the dot table: sum_x N(x, t).
inline u64 nu_table(const DotTable& table, const Element& t) {
    u64 n = 0;
    for (std::size_t x = 0; x < table.size(); ++x) n += table.count(x, t);
    return n;
}

/// nu(t) for every t at once, indexed by ring index.
inline std::vector<u64> nu_histogram(const PointSet& E) {
    std::vector<u64> hist(E.ring().size_u64(), 0);
    const DotMatrix M(E);
    for (std::size_t a = 0; a < M.size(); ++a)
        for (std::size_t b = 0; b < M.size(); ++b) ++hist[M(a, b)];
    return hist;
}

struct NuDecomposition {
    std::vector<mpq_class> layers;         // nu_0 .. nu_e
    std::vector<CyclotomicSum> layer_sums;  // p^{ek} nu_i for i < e, before division
    mpq_class discrepancy;                 // sum of nu_i, i < e
    mpq_class reconstructed;               // sum of all layers
};

/// nu_i(t) = p^{-ek} sum_{s in [p^i]} sum_{x,y} chi(s (x . y - t)), evaluated
/// exactly by grouping pairs on the value x . y - t.
inline NuDecomposition nu_char_decomposition(const PointSet& E, const Element& t, u64 budget = kDefaultWorkBudget) {
    const auto& ring = E.ring();
    ring.check(t);
    const u64 R = ring.size_u64();
    if (static_cast<u128>(E.size()) * R > budget)
        fail(ErrorCode::WorkBudgetExceeded, "|E| p^{ek} exceeds the work budget");

    std::unordered_map<u64, std::int64_t> multiplicity;
    for (const auto& x : E.points())
        for (const auto& y : E.points()) ++multiplicity[ring.index_of(ring.sub(dot(ring, x, y), t))];

    NuDecomposition out;
    const mpq_class scale(mpz_class(1), to_mpz(R));
    for (unsigned i = 0; i < ring.e(); ++i) {
        std::vector<std::int64_t> counts(ring.modulus(), 0);
        for (const Element& s : ring.enumerate_layer(i))
            for (const auto& [code, mult] : multiplicity)
                counts[chi_exponent(ring, ring.mul(s, ring.element_at(code)))] += mult;
        CyclotomicSum sum = CyclotomicSum::from_counts(ring.p(), ring.e(), std::move(counts));
        const auto value = sum.to_integer();
        if (!value) fail(ErrorCode::InternalError, "layer sum is not an integer");
        mpq_class layer = mpq_class(mpz_class(std::to_string(*value))) * scale;
        layer.canonicalize();
        out.layers.push_back(layer);
        out.layer_sums.push_back(std::move(sum));
        out.discrepancy += layer;
    }
    const mpz_class n = to_mpz(E.size());
    mpq_class top(n * n, to_mpz(R));
    top.canonicalize();
    out.layers.push_back(top);
    out.reconstructed = out.discrepancy + top;
    out.reconstructed.canonicalize();
    out.discrepancy.canonicalize();
    return out;
}

/// |{(x, y, z) in E^3 : x . y = alpha, x . z = beta}| as sum_x N(x,alpha) N(x,beta).
inline Count pi_pair(const PointSet& E, const Element& alpha, const Element& beta) {
    E.ring().check(alpha);
    E.ring().check(beta);
    const DotTable table(E);
    Count total = 0;
    for (std::size_t x = 0; x < E.size(); ++x) total += to_mpz(table.count(x, alpha)) * to_mpz(table.count(x, beta));
    return total;
}

inline Count pi_pair_brute(const PointSet& E, const Element& alpha, const Element& beta, u64 budget = kDefaultWorkBudget) {
    const auto& ring = E.ring();
    const u128 n = E.size();
    if (n * n * n > budget) fail(ErrorCode::WorkBudgetExceeded, "|E|^3 exceeds the work budget");
    Count total = 0;
    for (const auto& x : E.points())
        for (const auto& y : E.points())
            for (const auto& z : E.points())
                if (dot(ring, x, y) == alpha && dot(ring, x, z) == beta) ++total;
    return total;
}

namespace detail {

inline bool tuple_budget_ok(std::size_t base, unsigned m, u64 budget) {
    u128 acc = 1;
    for (unsigned i = 0; i < m; ++i) {
        acc *= base;
        if (acc > budget) return false;
    }
    return true;
}

/// Enumerates E^m (optionally injective tuples only) and counts the ones
/// satisfying every edge constraint.
inline Count forest_brute(const PointSet& E, const ForestSpec& forest, bool distinct, u64 budget) {
    const unsigned m = forest.vertex_count();
    const std::size_t n = E.size();
    if (!tuple_budget_ok(n, m, budget)) fail(ErrorCode::WorkBudgetExceeded, "|E|^m exceeds the work budget");
    if (m == 0) return 1;
    if (n == 0) return 0;
    const auto& ring = E.ring();
    std::vector<u64> alpha;
    for (const auto& ed : forest.edges()) alpha.push_back(ring.index_of(ed.alpha));
    const DotMatrix M(E);
    std::vector<std::size_t> tuple(m, 0);
    Count total = 0;
    for (;;) {
        bool ok = true;
        for (std::size_t q = 0; q < forest.edges().size() && ok; ++q) {
            const auto& ed = forest.edges()[q];
            ok = M(tuple[ed.i], tuple[ed.j]) == alpha[q];
        }
        if (ok && distinct) {
            std::vector<std::size_t> sorted = tuple;
            std::sort(sorted.begin(), sorted.end());
            ok = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        }
        if (ok) ++total;
        unsigned pos = 0;
        while (pos < m && ++tuple[pos] == n) tuple[pos++] = 0;
        if (pos == m) break;
    }
    return total;
}

}  // namespace detail

/// Number of x in E^m with x_i . x_j = alpha_ij on every edge. The default
/// counts all tuples with a tree DP; distinct = true counts injective tuples
/// by enumeration under the work budget.
inline Count pi_forest(const PointSet& E, const ForestSpec& forest, bool distinct = false, u64 budget = kDefaultWorkBudget) {
    const auto& ring = E.ring();
    for (const auto& ed : forest.edges()) ring.check(ed.alpha);
    if (distinct) return detail::forest_brute(E, forest, true, budget);

    const unsigned m = forest.vertex_count();
    const std::size_t n = E.size();
    if (m == 0) return 1;
    const DotMatrix M(E);

    std::vector<std::vector<std::pair<unsigned, u64>>> adj(m);
    for (const auto& ed : forest.edges()) {
        const u64 a = ring.index_of(ed.alpha);
        adj[ed.i].push_back({ed.j, a});
        adj[ed.j].push_back({ed.i, a});
    }

    Count total = 1;
    std::vector<bool> visited(m, false);
    for (unsigned root = 0; root < m; ++root) {
        if (visited[root]) continue;
        // BFS order; parents precede children.
        std::vector<unsigned> order{root};
        std::vector<int> parent(m, -1);
        std::vector<u64> parent_alpha(m, 0);
        visited[root] = true;
        for (std::size_t h = 0; h < order.size(); ++h) {
            const unsigned v = order[h];
            for (const auto& [w, a] : adj[v]) {
                if (visited[w]) continue;
                visited[w] = true;
                parent[w] = static_cast<int>(v);
                parent_alpha[w] = a;
                order.push_back(w);
            }
        }
        // count[v][x]: assignments of v's subtree with x_v = E[x]
        std::vector<std::vector<Count>> count(m);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const unsigned v = *it;
            std::vector<Count> cv(n, 1);
            for (const auto& [c, a] : adj[v]) {
                if (parent[c] != static_cast<int>(v)) continue;
                for (std::size_t x = 0; x < n; ++x) {
                    Count msg = 0;
                    for (std::size_t y = 0; y < n; ++y)
                        if (M(x, y) == a) msg += count[c][y];
                    cv[x] *= msg;
                }
                count[c].clear();
            }
            count[v] = std::move(cv);
        }
        Count component = 0;
        for (const auto& c : count[root]) component += c;
        total *= component;
    }
    return total;
}

/// Oracle for pi_forest: plain enumeration of E^m.
inline Count pi_forest_brute(const PointSet& E, const ForestSpec& forest, u64 budget = kDefaultWorkBudget) {
    return detail::forest_brute(E, forest, false, budget);
}

/// x_1 . x_2 = alpha_1, ..., x_n . x_{n+1} = alpha_n.
inline Count k_chain(const PointSet& E, const std::vector<Element>& alphas, bool distinct = false,
                     u64 budget = kDefaultWorkBudget) {
    if (alphas.empty()) fail(ErrorCode::IndexOutOfRange, "a chain needs at least one edge");
    return pi_forest(E, ForestSpec::path(alphas), distinct, budget);
}

/// c . x_j = alpha_j for j = 1..n.
inline Count star(const PointSet& E, const std::vector<Element>& alphas, bool distinct = false,
                  u64 budget = kDefaultWorkBudget) {
    if (alphas.empty()) fail(ErrorCode::IndexOutOfRange, "a star needs at least one edge");
    return pi_forest(E, ForestSpec::star(alphas), distinct, budget);
}

/// Pairs (a, A) with a in E, every column of A in E and aA = b; the star
/// count with center a.
inline Count matrix_solutions(const PointSet& E, const std::vector<Element>& b) {
    if (b.empty()) fail(ErrorCode::IndexOutOfRange, "b must have at least one entry");
    return star(E, b);
}

/// Direct enumeration of (a, A) in E x E^n checking aA = b column by column.
inline Count matrix_solutions_brute(const PointSet& E, const std::vector<Element>& b, u64 budget = kDefaultWorkBudget) {
    if (b.empty()) fail(ErrorCode::IndexOutOfRange, "b must have at least one entry");
    const auto& ring = E.ring();
    const unsigned n = static_cast<unsigned>(b.size());
    const std::size_t N = E.size();
    if (!detail::tuple_budget_ok(N, n + 1, budget)) fail(ErrorCode::WorkBudgetExceeded, "|E|^{n+1} exceeds the work budget");
    if (N == 0) return 0;
    Count total = 0;
    std::vector<std::size_t> cols(n, 0);
    for (const auto& a : E.points()) {
        std::fill(cols.begin(), cols.end(), 0);
        for (;;) {
            bool ok = true;
            for (unsigned j = 0; j < n && ok; ++j) ok = dot(ring, a, E[cols[j]]) == b[j];
            if (ok) ++total;
            unsigned pos = 0;
            while (pos < n && ++cols[pos] == N) cols[pos++] = 0;
            if (pos == n) break;
        }
    }
    return total;
}

/// p^{dn - n} (p^d - 1): solutions of aA = b over the full space Z_p^d when b
/// has a unit entry.
inline Count affine_solution_count(u64 p, unsigned d, unsigned n) {
    return big_pow(p, static_cast<unsigned long>(d) * n - n) * (big_pow(p, d) - 1);
}

}  // namespace galring

#endif  // GALRING_CONFIG_COUNT_HPP
