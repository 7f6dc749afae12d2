#ifndef GALRING_BOUNDS_HPP
#define GALRING_BOUNDS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "config_count.hpp"
#include "error.hpp"
#include "magnitude.hpp"

namespace galring {

enum class Theorem {
    SingleDot,           // |E| >= sqrt(6+3e) p^{dek-dk/2+ek/2+k/2}
    SingleDotTechnical,  // |E| >= p^{ek} sum_i sqrt(p^{dek+dik-ik}(2p^{-ik-k}+1+p^{-ek}))
    Pair,                // |E| >= sqrt(35e/8) p^{dek-dk/2+ek/2+k/2}
    PairTechnical,       // |E| >= max(technical single threshold, sqrt(2G))
    Forest,              // |E| >= max of the two forest branches
    ForestReduced,       // |E| >= sqrt(14) e n p^{dek-dk/2+nek/2+n/2-ek/2+3k/2}, n >= 4
    Matrix,              // |E| >  e n sqrt(14) p^{dek-dk/2+nek/2+n/2-ek/2+k}
};

inline constexpr Theorem kAllTheorems[] = {Theorem::SingleDot, Theorem::SingleDotTechnical, Theorem::Pair,
                                           Theorem::PairTechnical, Theorem::Forest, Theorem::ForestReduced,
                                           Theorem::Matrix};

constexpr std::string_view theorem_name(Theorem t) {
    switch (t) {
    case Theorem::SingleDot: return "single";
    case Theorem::SingleDotTechnical: return "single-technical";
    case Theorem::Pair: return "pair";
    case Theorem::PairTechnical: return "pair-technical";
    case Theorem::Forest: return "forest";
    case Theorem::ForestReduced: return "forest-reduced";
    case Theorem::Matrix: return "matrix";
    }
    return "?";
}

inline Theorem parse_theorem(std::string_view s) {
    for (Theorem t : kAllTheorems)
        if (theorem_name(t) == s) return t;
    fail(ErrorCode::ParseError, "unknown theorem '" + std::string(s) + "'");
}

struct BoundParams {
    u64 p = 2;
    unsigned e = 1;
    unsigned k = 1;
    unsigned d = 1;
    unsigned n = 0;  // edge count, forest and matrix theorems only
};

struct Threshold {
    Magnitude value;
    bool in_hypothesis = false;
};

namespace detail {

inline mpq_class pow_q(u64 p, long x) {
    const mpz_class v = big_pow(p, static_cast<unsigned long>(x < 0 ? -x : x));
    mpq_class q = x >= 0 ? mpq_class(v) : mpq_class(mpz_class(1), v);
    q.canonicalize();
    return q;
}

inline long ll(unsigned v) { return static_cast<long>(v); }

}  // namespace detail

/// sqrt(6+3e) p^{dek - dk/2 + ek/2 + k/2}
inline Threshold single_threshold(u64 p, unsigned e, unsigned k, unsigned d) {
    using detail::ll;
    const long x = 2 * ll(d) * e * k - ll(d) * k + ll(e) * k + k;
    return {Magnitude::radical(p, 6 + 3 * ll(e), x), e >= 5 && d >= 2 && k >= 1};
}

struct SingleCeiling {
    mpq_class literal;     // 2|E| / p^{ek}, as typeset in the statement
    mpq_class consistent;  // 2|E|^2 / p^{ek}, twice the main term
};

inline SingleCeiling single_ceiling(const mpz_class& set_size, u64 p, unsigned e, unsigned k) {
    const mpz_class q = big_pow(p, static_cast<unsigned long>(e) * k);
    SingleCeiling c{mpq_class(2 * set_size, q), mpq_class(2 * set_size * set_size, q)};
    c.literal.canonicalize();
    c.consistent.canonicalize();
    return c;
}

/// p^{ek} sum_{i<e} sqrt(p^{dek+dik-ik} (2p^{-ik-k} + 1 + p^{-ek}))
inline Threshold single_technical_threshold(u64 p, unsigned e, unsigned k, unsigned d) {
    using detail::ll;
    Magnitude sum(p);
    for (unsigned i = 0; i < e; ++i) {
        mpq_class r = 2 * detail::pow_q(p, -(ll(i) * k + k)) + 1 + detail::pow_q(p, -ll(e) * k);
        const long x = 2 * ll(e) * k + ll(d) * e * k + ll(d) * i * k - ll(i) * k;
        sum = sum + Magnitude::radical(p, r, x);
    }
    return {sum, e >= 1 && k >= 1};
}

/// G = p^{dek+2ek} e (2p^{-k} (p^{dek-2ek}-1)/(p^{dk-2k}-1) + (1+p^{-ek})(p^{dek-ek}-1)/(p^{dk-k}-1))
inline mpq_class pair_G(u64 p, unsigned e, unsigned k, unsigned d) {
    using detail::ll;
    using detail::pow_q;
    const mpq_class den1 = pow_q(p, ll(d) * k - 2 * ll(k)) - 1;
    const mpq_class den2 = pow_q(p, ll(d) * k - k) - 1;
    if (den1 == 0 || den2 == 0) fail(ErrorCode::DivisionByZero, "G is undefined for d <= 2");
    mpq_class inner = 2 * pow_q(p, -ll(k)) * (pow_q(p, ll(d) * e * k - 2 * ll(e) * k) - 1) / den1 +
                      (1 + pow_q(p, -ll(e) * k)) * (pow_q(p, ll(d) * e * k - ll(e) * k) - 1) / den2;
    mpq_class G = pow_q(p, ll(d) * e * k + 2 * ll(e) * k) * e * inner;
    G.canonicalize();
    return G;
}

struct PairThresholds {
    mpq_class G;
    Magnitude sqrt_2G;
    Magnitude closed_form;  // sqrt(35e/8) p^{dek-dk/2+ek/2+k/2}
    Magnitude technical;    // max(technical single threshold, sqrt(2G))
    bool in_hypothesis = false;
};

inline Magnitude pair_closed_form(u64 p, unsigned e, unsigned k, unsigned d) {
    using detail::ll;
    const long x = 2 * ll(d) * e * k - ll(d) * k + ll(e) * k + k;
    return Magnitude::radical(p, mpq_class(35 * ll(e), 8), x);
}

inline PairThresholds pair_thresholds(u64 p, unsigned e, unsigned k, unsigned d) {
    PairThresholds t;
    t.G = pair_G(p, e, k, d);
    t.sqrt_2G = Magnitude::radical(p, 2 * t.G, 0);
    t.closed_form = pair_closed_form(p, e, k, d);
    t.technical = max(single_technical_threshold(p, e, k, d).value, t.sqrt_2G);
    t.in_hypothesis = d >= 3 && e >= 5 && k >= 1;
    return t;
}

/// Every labelled form of the forest bound.
struct ForestThresholds {
    Magnitude single_edge_branch;       // 2n sqrt(6+3e) p^{dek-dk/2+3ek/2+k/2}
    Magnitude many_edge_branch;         // sqrt(14) e p^{dek-dk/2+nek/2+n/2-ek/2+k/2}
    Magnitude many_edge_unrelaxed;      // sqrt(14e) p^{-ek} (p^{ek}+1)^{n/2} p^{dek-dk/2+ek/2+k/2}
    Magnitude premise;                  // max of the two branches
    Magnitude reduced_stated;           // sqrt(14) e n p^{...+3k/2}
    Magnitude reduced_proof;            // sqrt(14e) n p^{...+3k/2}
    Magnitude row_matrix_stated;        // e n sqrt(14) p^{dek-dk/2+nek/2+n/2-ek/2+k}
    Magnitude row_matrix_proof;         // sqrt(14) e n p^{dek-dk/2+nk/2+n/2-ek/2+3k/2}
    bool in_hypothesis = false;         // d >= 3, e >= 5, n >= 3
    bool reduced_applies = false;       // n >= 4
};

inline ForestThresholds forest_thresholds(u64 p, unsigned e, unsigned k, unsigned d, unsigned n) {
    using detail::ll;
    const long base = 2 * ll(d) * e * k - ll(d) * k;  // doubled dek - dk/2
    const long E = e, K = k, N = n;
    ForestThresholds t;
    t.single_edge_branch = Magnitude::radical(p, mpq_class(4 * N * N * (6 + 3 * E)), base + 3 * E * K + K);
    t.many_edge_branch = Magnitude::radical(p, mpq_class(14 * E * E), base + N * E * K + N - E * K + K);
    {
        const mpz_class q1 = big_pow(p, static_cast<unsigned long>(e) * k) + 1;
        mpz_class q1n;
        mpz_pow_ui(q1n.get_mpz_t(), q1.get_mpz_t(), n);
        t.many_edge_unrelaxed = Magnitude::radical(p, mpq_class(14 * E) * mpq_class(q1n), -2 * E * K + base + E * K + K);
    }
    t.premise = max(t.single_edge_branch, t.many_edge_branch);
    t.reduced_stated = Magnitude::radical(p, mpq_class(14 * E * E * N * N), base + N * E * K + N - E * K + 3 * K);
    t.reduced_proof = Magnitude::radical(p, mpq_class(14 * E * N * N), base + N * E * K + N - E * K + 3 * K);
    t.row_matrix_stated = Magnitude::radical(p, mpq_class(14 * E * E * N * N), base + N * E * K + N - E * K + 2 * K);
    t.row_matrix_proof = Magnitude::radical(p, mpq_class(14 * E * E * N * N), base + N * K + N - E * K + 3 * K);
    t.in_hypothesis = d >= 3 && e >= 5 && k >= 1 && n >= 3;
    t.reduced_applies = n >= 4;
    return t;
}

/// Z_{p^e} (k = 1): sqrt(14) e n p^{de-d/2+ne/2+n/2-e/2+3/2}.
inline Magnitude forest_zpe_p_form(u64 p, unsigned e, unsigned d, unsigned n) {
    const long E = e, D = d, N = n;
    return Magnitude::radical(p, mpq_class(14 * E * E * N * N), 2 * D * E - D + N * E + N - E + 3);
}

/// Same bound in q = p^e: sqrt(14) e n q^{(2d - d/e)/2 + n/2 - 1/2} p^{n/2 + 3/2}.
inline Magnitude forest_zpe_q_form(u64 p, unsigned e, unsigned d, unsigned n) {
    // doubled q-exponent (2d - d/e) + n - 1 scaled by e is the p-exponent contribution
    mpq_class q_exp2 = mpq_class(2 * static_cast<long>(d)) - mpq_class(d, e) + n - 1;
    q_exp2.canonicalize();
    const mpq_class p_exp2 = q_exp2 * e;
    if (p_exp2.get_den() != 1) fail(ErrorCode::InternalError, "non half-integer exponent");
    const long x = p_exp2.get_num().get_si() + static_cast<long>(n) + 3;
    const long E = e, N = n;
    return Magnitude::radical(p, mpq_class(14 * E * E * N * N), x);
}

/// F_{p^k} (e = 1): sqrt(14) n p^{dk - dk/2 + nk/2 + n/2}.
inline Magnitude forest_field_p_form(u64 p, unsigned k, unsigned d, unsigned n) {
    const long K = k, D = d, N = n;
    return Magnitude::radical(p, mpq_class(14 * N * N), 2 * D * K - D * K + N * K + N);
}

/// Field bound rewritten in q = p^k, with sqrt(2) in front: sqrt(2) n q^{d/2 + n/2} p^{n/2}.
inline Magnitude forest_field_q_form(u64 p, unsigned k, unsigned d, unsigned n) {
    const long K = k, D = d, N = n;
    return Magnitude::radical(p, mpq_class(2 * N * N), K * (D + N) + N);
}

/// e n sqrt(14) p^{dek-dk/2+nek/2+n/2-ek/2+k}
inline Magnitude matrix_threshold(u64 p, unsigned e, unsigned k, unsigned d, unsigned n) {
    return forest_thresholds(p, e, k, d, n).row_matrix_stated;
}

/// The size threshold each theorem's premise compares |E| against.
inline Threshold premise_threshold(Theorem th, const BoundParams& b) {
    switch (th) {
    case Theorem::SingleDot: return single_threshold(b.p, b.e, b.k, b.d);
    case Theorem::SingleDotTechnical: return single_technical_threshold(b.p, b.e, b.k, b.d);
    case Theorem::Pair: return {pair_closed_form(b.p, b.e, b.k, b.d), b.d >= 3 && b.e >= 5};
    case Theorem::PairTechnical: {
        const auto t = pair_thresholds(b.p, b.e, b.k, b.d);
        return {t.technical, t.in_hypothesis};
    }
    case Theorem::Forest: {
        const auto t = forest_thresholds(b.p, b.e, b.k, b.d, b.n);
        return {t.premise, t.in_hypothesis};
    }
    case Theorem::ForestReduced: {
        const auto t = forest_thresholds(b.p, b.e, b.k, b.d, b.n);
        return {t.reduced_stated, t.in_hypothesis && t.reduced_applies};
    }
    case Theorem::Matrix:
        return {matrix_threshold(b.p, b.e, b.k, b.d, b.n), b.d >= 3 && b.e >= 5 && b.n >= 4};
    }
    fail(ErrorCode::InternalError, "unhandled theorem");
}

/// Whether |E| meets the premise; the matrix theorem uses a strict inequality.
inline bool premise_met(Theorem th, const mpz_class& set_size, const Magnitude& threshold) {
    const auto c = compare(Magnitude::integer(threshold.base(), set_size), threshold);
    return th == Theorem::Matrix ? c.order == Order::Greater : c.order != Order::Less;
}

/// The closed-form non-triviality dimension, where one is stated.
inline std::optional<double> nontrivial_formula(Theorem th, u64 p, unsigned e, unsigned k, unsigned n) {
    const double lp = std::log(static_cast<double>(p));
    switch (th) {
    case Theorem::SingleDot:
    case Theorem::SingleDotTechnical: return e + 1 + std::log(6.0 + 3.0 * e) / lp / k;
    case Theorem::Pair:
    case Theorem::PairTechnical: return e + 1 + std::log(35.0 * e / 8.0) / lp / k;
    case Theorem::ForestReduced:
        if (n < 4) return std::nullopt;
        return (n - 1.0) * e + 3 + (n + std::log(14.0 * e * n * n) / lp) / k;
    case Theorem::Forest:
    case Theorem::Matrix: return std::nullopt;
    }
    return std::nullopt;
}

/// Smallest d at which the threshold first fits inside R^d.
inline unsigned minimum_dimension(Theorem th) {
    switch (th) {
    case Theorem::SingleDot:
    case Theorem::SingleDotTechnical: return 2;
    default: return 3;
    }
}

struct NontrivialDimension {
    std::optional<unsigned> exact;         // smallest d with threshold <= p^{dek}
    std::optional<double> formula;
    std::optional<long> formula_ceiling;
    bool agrees = false;                   // |exact - ceil(formula)| <= 1
};

inline NontrivialDimension nontrivial_dimension(Theorem th, u64 p, unsigned e, unsigned k, unsigned n = 0,
                                                unsigned max_d = 4096) {
    NontrivialDimension out;
    for (unsigned d = minimum_dimension(th); d <= max_d; ++d) {
        const BoundParams b{p, e, k, d, n};
        const Magnitude whole = Magnitude::power(p, 2 * static_cast<long>(d) * e * k);
        if (less_equal(premise_threshold(th, b).value, whole)) {
            out.exact = d;
            break;
        }
    }
    out.formula = nontrivial_formula(th, p, e, k, n);
    if (out.formula) {
        out.formula_ceiling = static_cast<long>(std::ceil(*out.formula - 1e-12));
        out.agrees = out.exact && std::labs(static_cast<long>(*out.exact) - *out.formula_ceiling) <= 1;
    }
    return out;
}

/// Dot-product constraints for check_conclusion; which fields are read
/// depends on the theorem.
struct ConfigParams {
    std::optional<Element> t;
    std::optional<Element> alpha;
    std::optional<Element> beta;
    std::optional<ForestSpec> forest;
    std::vector<Element> b;
};

struct BoundReport {
    Theorem theorem = Theorem::SingleDot;
    BoundParams params;
    Magnitude threshold;
    double threshold_log_p = 0.0;
    mpz_class set_size;
    bool in_hypothesis = false;
    bool premise_satisfied = false;
    bool premise_satisfiable = false;  // threshold fits inside R^d
    mpq_class conclusion;              // ceiling on the observed count
    std::optional<mpq_class> literal_conclusion;
    Count observed;
    bool holds = false;
    std::optional<bool> holds_literal;
    bool vacuous = true;  // premise unsatisfied; conclusion is informational
};

inline BoundReport check_conclusion(const PointSet& E, Theorem th, const ConfigParams& cfg,
                                    u64 budget = kDefaultWorkBudget) {
    const auto& ring = E.ring();
    BoundReport rep;
    rep.theorem = th;
    rep.set_size = to_mpz(E.size());
    rep.params = BoundParams{ring.p(), ring.e(), ring.k(), E.dim(), 0};
    const mpz_class q = big_pow(ring.p(), static_cast<unsigned long>(ring.e()) * ring.k());

    auto need = [](const auto& opt, const char* what) -> const auto& {
        if (!opt) fail(ErrorCode::ParseError, std::string("missing ") + what);
        return *opt;
    };
    auto pow_size = [&](unsigned m) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), rep.set_size.get_mpz_t(), m);
        return r;
    };
    auto pow_q = [&](unsigned n) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), q.get_mpz_t(), n);
        return r;
    };

    switch (th) {
    case Theorem::SingleDot:
    case Theorem::SingleDotTechnical: {
        rep.observed = to_mpz(nu(E, need(cfg.t, "t")));
        const auto c = single_ceiling(rep.set_size, ring.p(), ring.e(), ring.k());
        rep.conclusion = c.consistent;
        rep.literal_conclusion = c.literal;
        break;
    }
    case Theorem::Pair:
    case Theorem::PairTechnical:
        rep.params.n = 2;
        rep.observed = pi_pair(E, need(cfg.alpha, "alpha"), need(cfg.beta, "beta"));
        rep.conclusion = mpq_class(2 * pow_size(3), pow_q(2));
        break;
    case Theorem::Forest:
    case Theorem::ForestReduced: {
        const auto& forest = need(cfg.forest, "forest");
        rep.params.n = static_cast<unsigned>(forest.edge_count());
        rep.observed = pi_forest(E, forest, false, budget);
        rep.conclusion = mpq_class(2 * pow_size(forest.vertex_count()), pow_q(rep.params.n));
        break;
    }
    case Theorem::Matrix:
        rep.params.n = static_cast<unsigned>(cfg.b.size());
        rep.observed = matrix_solutions(E, cfg.b);
        rep.conclusion = mpq_class(2 * pow_size(rep.params.n + 1), pow_q(rep.params.n));
        break;
    }
    rep.conclusion.canonicalize();

    const bool defined = !((th == Theorem::PairTechnical) && rep.params.d <= 2);
    if (defined) {
        const Threshold thr = premise_threshold(th, rep.params);
        rep.threshold = thr.value;
        rep.threshold_log_p = thr.value.log_p();
        rep.in_hypothesis = thr.in_hypothesis;
        rep.premise_satisfied = premise_met(th, rep.set_size, thr.value);
        const Magnitude whole = Magnitude::power(ring.p(), 2 * static_cast<long>(rep.params.d) * ring.e() * ring.k());
        rep.premise_satisfiable = less_equal(thr.value, whole);
    }
    rep.holds = mpq_class(rep.observed) <= rep.conclusion;
    if (rep.literal_conclusion) rep.holds_literal = mpq_class(rep.observed) <= *rep.literal_conclusion;
    rep.vacuous = !rep.premise_satisfied;
    return rep;
}

}  // namespace galring

#endif  // GALRING_BOUNDS_HPP
