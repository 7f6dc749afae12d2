#ifndef GALRING_SUITES_HPP
#define GALRING_SUITES_HPP

#include <string>
#include <string_view>
#include <vector>

#include "char_sums.hpp"
#include "config_count.hpp"
#include "error.hpp"
#include "ring.hpp"
#include "sampling.hpp"

namespace galring {

enum class Status { Pass, Fail, Skip };

inline std::string_view to_string(Status s) {
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skip: return "skip";
    }
    return "?";
}

struct SuiteResult {
    std::string suite;
    Status status = Status::Pass;
    u64 cases = 0;
    u64 failures = 0;
    std::string detail;  // first failure, or the reason for skipping
};

namespace suite_detail {

class Tally {
public:
    explicit Tally(std::string name) { r_.suite = std::move(name); }

    void check(bool ok, const std::string& what) {
        ++r_.cases;
        if (ok) return;
        if (r_.failures++ == 0) r_.detail = what;
    }

    SuiteResult done() {
        r_.status = r_.failures ? Status::Fail : Status::Pass;
        return r_;
    }

private:
    SuiteResult r_;
};

inline SuiteResult skipped(std::string name, std::string why) {
    SuiteResult r;
    r.suite = std::move(name);
    r.status = Status::Skip;
    r.detail = std::move(why);
    return r;
}

}  // namespace suite_detail

/// Commutative ring axioms on sampled triples (all triples for |R| <= 16),
/// plus unit inverses by two routes.
inline SuiteResult suite_ring_axioms(const GaloisRing& R, u64 seed = 0, unsigned samples = 500) {
    suite_detail::Tally t("ring-axioms");
    const u64 n = R.size_u64();
    auto check_triple = [&](const Element& a, const Element& b, const Element& c) {
        const std::string at = " at " + R.format(a) + " | " + R.format(b) + " | " + R.format(c);
        t.check(R.add(R.add(a, b), c) == R.add(a, R.add(b, c)), "additive associativity" + at);
        t.check(R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c)), "multiplicative associativity" + at);
        t.check(R.mul(a, b) == R.mul(b, a), "commutativity" + at);
        t.check(R.add(a, b) == R.add(b, a), "additive commutativity" + at);
        t.check(R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c)), "distributivity" + at);
        t.check(R.add(a, R.neg(a)) == R.zero(), "additive inverse" + at);
        t.check(R.mul(a, R.one()) == a && R.add(a, R.zero()) == a, "identities" + at);
        if (R.is_unit(a)) {
            const Element inv = R.inverse(a);
            t.check(R.mul(a, inv) == R.one(), "inverse" + at);
            t.check(inv == R.inverse_by_power(a), "inverse routes disagree" + at);
        } else {
            bool threw = false;
            try {
                R.inverse(a);
            } catch (const Error& err) {
                threw = err.code() == ErrorCode::NotAUnit;
            }
            t.check(threw, "non-unit inverted" + at);
        }
    };
    if (n <= 16) {
        for (u64 i = 0; i < n; ++i)
            for (u64 j = 0; j < n; ++j)
                for (u64 l = 0; l < n; ++l) check_triple(R.element_at(i), R.element_at(j), R.element_at(l));
    } else {
        Rng rng(seed);
        for (unsigned s = 0; s < samples; ++s)
            check_triple(random_element(R, rng), random_element(R, rng), random_element(R, rng));
    }
    return t.done();
}

/// Digit expansion round trip, Teichmuller digits, valuation and indexing.
inline SuiteResult suite_digits(const GaloisRing& R) {
    suite_detail::Tally t("digits");
    const auto T = R.teichmuller_set();
    t.check(T.elements.size() == *checked_pow(R.p(), R.k()), "Teichmuller set has wrong size");
    for (const auto& x : T.elements) t.check(R.pow(x, *checked_pow(R.p(), R.k())) == x, "Teichmuller element not fixed");
    const Element p = R.from_int(static_cast<long long>(R.p()));
    for (const Element& z : R.enumerate_ring()) {
        const auto d = R.digits(z);
        Element acc = R.zero(), pi = R.one();
        unsigned first_nonzero = R.e();
        for (unsigned i = 0; i < d.digits.size(); ++i) {
            t.check(R.is_teichmuller(d.digits[i]), "digit outside the Teichmuller set at " + R.format(z));
            if (first_nonzero == R.e() && !R.is_zero(d.digits[i])) first_nonzero = i;
            acc = R.add(acc, R.mul(pi, d.digits[i]));
            pi = R.mul(pi, p);
        }
        t.check(acc == z, "digits do not recompose to " + R.format(z));
        t.check(R.compose(d) == z, "compose disagrees at " + R.format(z));
        t.check(R.valuation(z) == first_nonzero, "valuation disagrees with digits at " + R.format(z));
        t.check(R.element_at(R.index_of(z)) == z, "index round trip fails at " + R.format(z));
    }
    return t.done();
}

/// phi^k = id, phi is a ring map, and the trace lands in Z_{p^e} and matches
/// the linear evaluation.
inline SuiteResult suite_trace_frobenius(const GaloisRing& R, u64 seed = 0, unsigned samples = 300) {
    suite_detail::Tally t("trace-frobenius");
    for (const Element& z : R.enumerate_ring()) {
        Element w = z;
        for (unsigned j = 0; j < R.k(); ++j) w = R.frobenius(w);
        t.check(w == z, "phi^k != id at " + R.format(z));
        t.check(R.trace(z) == R.trace_linear(z), "trace routes disagree at " + R.format(z));
    }
    for (const auto& x : R.teichmuller_set().elements)
        t.check(R.frobenius(x) == R.pow(x, R.p()), "phi is not the p-th power on Teichmuller elements");
    Rng rng(seed);
    for (unsigned s = 0; s < samples; ++s) {
        const Element a = random_element(R, rng), b = random_element(R, rng);
        t.check(R.frobenius(R.add(a, b)) == R.add(R.frobenius(a), R.frobenius(b)), "phi not additive");
        t.check(R.frobenius(R.mul(a, b)) == R.mul(R.frobenius(a), R.frobenius(b)), "phi not multiplicative");
        t.check(R.trace(R.add(a, b)) == (R.trace(a) + R.trace(b)) % R.modulus(), "trace not additive");
    }
    return t.done();
}

/// sum_z chi(a z) is |R| for a = 0 and 0 otherwise, for every a.
inline SuiteResult suite_orthogonality(const GaloisRing& R) {
    suite_detail::Tally t("orthogonality");
    const auto size = static_cast<std::int64_t>(R.size_u64());
    const CyclotomicSum full = CyclotomicSum::integer(R.p(), R.e(), size);
    const CyclotomicSum zero = CyclotomicSum::integer(R.p(), R.e(), 0);
    for (const Element& a : R.enumerate_ring()) {
        const CyclotomicSum s = full_ring_char_sum(R, a);
        t.check(s == (R.is_zero(a) ? full : zero), "orthogonality fails at a = " + R.format(a) + ": " + s.to_string());
    }
    return t.done();
}

/// Unit sums against their closed form for every 0 < n < e.
inline SuiteResult suite_unit_sum(const GaloisRing& R) {
    if (R.e() < 2) return suite_detail::skipped("unit-sum", "needs e >= 2");
    suite_detail::Tally t("unit-sum");
    for (unsigned n = 1; n < R.e(); ++n) {
        const CyclotomicSum s = unit_sum(R, n);
        t.check(s == CyclotomicSum::integer(R.p(), R.e(), unit_sum_closed_form(R, n)),
                "n = " + std::to_string(n) + ": " + s.to_string());
    }
    return t.done();
}

/// Ideal sums against the reduced ring, for every a and every i < e.
inline SuiteResult suite_ideal_reduction(const GaloisRing& R) {
    suite_detail::Tally t("ideal-reduction");
    for (const Element& a : R.enumerate_ring())
        for (unsigned i = 0; i < R.e(); ++i) {
            const auto rep = ideal_sum_reduction_check(R, a, i);
            t.check(rep.equal, "a = " + R.format(a) + ", i = " + std::to_string(i) + ": " + rep.lhs.to_string() +
                                   " vs " + rep.rhs.to_string());
        }
    return t.done();
}

/// Layer decomposition of nu(t) against direct counting on random (E, t).
inline SuiteResult suite_nu_decomposition(const GaloisRing& R, u64 seed = 0, unsigned trials = 50,
                                          unsigned max_size = 12, unsigned d = 2) {
    suite_detail::Tally t("nu-decomposition");
    for (unsigned trial = 0; trial < trials; ++trial) {
        Rng rng({seed, trial});
        const u64 space = *space_size(R, d);
        const u64 size = rng.below(std::min<u64>(max_size, space) + 1);
        const PointSet E = sample_subset(R, d, size, rng);
        const Element target = random_element(R, rng);
        const auto dec = nu_char_decomposition(E, target);
        const u64 direct = nu(E, target);
        t.check(dec.reconstructed == mpq_class(to_mpz(direct)),
                "trial " + std::to_string(trial) + ": decomposition " + dec.reconstructed.get_str() + " vs " +
                    std::to_string(direct));
    }
    return t.done();
}

/// Edge sets of acyclic graphs on m labeled vertices.
inline std::vector<std::vector<std::pair<unsigned, unsigned>>> forest_shapes(unsigned m) {
    std::vector<std::pair<unsigned, unsigned>> all;
    for (unsigned i = 0; i < m; ++i)
        for (unsigned j = i + 1; j < m; ++j) all.push_back({i, j});
    std::vector<std::vector<std::pair<unsigned, unsigned>>> out;
    for (u64 mask = 0; mask < (u64{1} << all.size()); ++mask) {
        std::vector<unsigned> parent(m);
        for (unsigned v = 0; v < m; ++v) parent[v] = v;
        auto find = [&](unsigned v) {
            while (parent[v] != v) v = parent[v];
            return v;
        };
        bool acyclic = true;
        std::vector<std::pair<unsigned, unsigned>> edges;
        for (std::size_t b = 0; b < all.size() && acyclic; ++b) {
            if (!(mask >> b & 1)) continue;
            const unsigned x = find(all[b].first), y = find(all[b].second);
            if (x == y) acyclic = false;
            parent[x] = y;
            edges.push_back(all[b]);
        }
        if (acyclic) out.push_back(std::move(edges));
    }
    return out;
}

/// Tree DP against enumeration for every forest on at most max_m vertices,
/// with random labels and random point sets.
inline SuiteResult suite_forest_dp(const GaloisRing& R, u64 seed = 0, unsigned trials = 20, unsigned max_m = 4,
                                   unsigned max_size = 10, unsigned d = 2) {
    suite_detail::Tally t("forest-dp");
    for (unsigned trial = 0; trial < trials; ++trial) {
        Rng rng({seed, trial});
        const u64 space = *space_size(R, d);
        const u64 size = 1 + rng.below(std::min<u64>(max_size, space));
        const PointSet E = sample_subset(R, d, size, rng);
        // labels drawn from observed dot products half the time, so counts are rarely all zero
        std::vector<Element> observed;
        for (const auto& x : E.points())
            for (const auto& y : E.points()) observed.push_back(dot(R, x, y));
        auto label = [&] { return rng.below(2) ? observed[rng.below(observed.size())] : random_element(R, rng); };
        for (unsigned m = 1; m <= max_m; ++m)
            for (const auto& shape : forest_shapes(m)) {
                std::vector<ForestEdge> edges;
                for (const auto& [i, j] : shape) edges.push_back({i, j, label()});
                const ForestSpec forest(m, edges);
                const Count dp = pi_forest(E, forest);
                const Count brute = pi_forest_brute(E, forest);
                t.check(dp == brute, "trial " + std::to_string(trial) + ", m = " + std::to_string(m) + ": dp " +
                                         dp.get_str() + " vs brute " + brute.get_str());
            }
        const Element a = label(), b = label();
        t.check(pi_pair(E, a, b) == pi_pair_brute(E, a, b), "pair count disagrees with enumeration");
        const DotTable table(E);
        t.check(nu_table(table, a) == nu(E, a), "nu table disagrees with direct count");
    }
    return t.done();
}

/// Solutions of aA = b over all of Z_p^d for b with a unit entry.
inline SuiteResult suite_affine_count(const GaloisRing& R, unsigned max_d = 2, unsigned max_n = 2) {
    if (R.e() != 1 || R.k() != 1) return suite_detail::skipped("affine-count", "needs a prime field Z_p");
    suite_detail::Tally t("affine-count");
    const u64 p = R.p();
    for (unsigned d = 1; d <= max_d; ++d) {
        const auto space = checked_pow(p, d);
        if (!space || *space > 4096) break;
        const PointSet E = PointSet::full(R, d);
        for (unsigned n = 1; n <= max_n; ++n) {
            const u64 vectors = *checked_pow(p, n);
            for (u64 code = 1; code < vectors && code <= 64; ++code) {  // code 0 is b = 0
                std::vector<Element> b;
                u64 c = code;
                for (unsigned j = 0; j < n; ++j, c /= p) b.push_back(R.constant(c % p));
                const Count got = matrix_solutions(E, b);
                t.check(got == affine_solution_count(p, d, n), "d = " + std::to_string(d) + ", n = " + std::to_string(n) +
                                                          ": " + got.get_str() + " vs " + affine_solution_count(p, d, n).get_str());
            }
        }
    }
    return t.done();
}

inline std::vector<SuiteResult> run_ring_suites(const GaloisRing& R, u64 seed = 0) {
    return {suite_ring_axioms(R, seed),     suite_digits(R),           suite_trace_frobenius(R, seed),
            suite_orthogonality(R),         suite_unit_sum(R),         suite_ideal_reduction(R),
            suite_nu_decomposition(R, seed), suite_forest_dp(R, seed), suite_affine_count(R)};
}

/// Every (p, e, k) with p^{ek} <= cap, ordered by p, then e, then k.
inline std::vector<RingDescriptor> small_rings(u64 cap) {
    std::vector<RingDescriptor> out;
    for (u64 p = 2; p <= cap; ++p) {
        if (!is_prime(p)) continue;
        for (unsigned e = 1;; ++e) {
            const auto pe = checked_pow(p, e);
            if (!pe || *pe > cap) break;
            for (unsigned k = 1;; ++k) {
                const auto q = checked_pow(p, e * k);
                if (!q || *q > cap) break;
                out.push_back(RingDescriptor{p, e, k, std::nullopt});
            }
        }
    }
    return out;
}

}  // namespace galring

#endif  // GALRING_SUITES_HPP
