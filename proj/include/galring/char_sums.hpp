#ifndef GALRING_CHAR_SUMS_HPP
#define GALRING_CHAR_SUMS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <ranges>
#include <vector>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "ring.hpp"

namespace galring {

/// chi(z) = zeta^{Tr(z)} with zeta = exp(2 pi i / p^e); returns the exponent.
inline u64 chi_exponent(const GaloisRing& ring, const Element& z) { return ring.trace_linear(z); }

inline CyclotomicSum chi(const GaloisRing& ring, const Element& z) {
    return CyclotomicSum::root(ring.p(), ring.e(), chi_exponent(ring, z));
}

/// Exact sum of chi(a z) over z drawn from `domain`.
template <std::ranges::input_range Domain>
CyclotomicSum char_sum(const GaloisRing& ring, Domain&& domain, const Element& a) {
    ring.check(a);
    const u64 m = ring.modulus();
    std::vector<std::int64_t> counts(m, 0);
    for (const Element& z : domain) ++counts[chi_exponent(ring, ring.mul(a, z))];
    return CyclotomicSum::from_counts(ring.p(), ring.e(), std::move(counts));
}

/// Sum of chi(a z) over the whole ring, enumerating z coefficient by
/// coefficient so that Tr(a z) = sum_j z_j Tr(a x^j) is updated additively.
inline CyclotomicSum full_ring_char_sum(const GaloisRing& ring, const Element& a) {
    ring.check(a);
    const u64 m = ring.modulus();
    const unsigned k = ring.k();
    std::vector<u64> step(k);
    Element xj = ring.one();
    const Element x = ring.generator();
    for (unsigned j = 0; j < k; ++j) {
        step[j] = chi_exponent(ring, ring.mul(a, xj));
        xj = ring.mul(xj, x);
    }
    std::vector<std::int64_t> counts(m, 0);
    std::vector<u64> digit(k, 0);
    u64 exponent = 0;
    const u64 total = ring.size_u64();
    for (u64 n = 0; n < total; ++n) {
        ++counts[exponent];
        for (unsigned j = 0; j < k; ++j) {
            exponent += step[j];
            if (exponent >= m) exponent -= m;
            if (++digit[j] < m) break;
            digit[j] = 0;  // m copies of step[j] sum to 0 mod m
        }
    }
    return CyclotomicSum::from_counts(ring.p(), ring.e(), std::move(counts));
}

/// Sum of chi(p^n z) over the units, 0 < n < e.
inline CyclotomicSum unit_sum(const GaloisRing& ring, unsigned n) {
    if (n == 0 || n >= ring.e()) fail(ErrorCode::IndexOutOfRange, "unit_sum needs 0 < n < e");
    const Element pn = ring.constant(*checked_pow(ring.p(), n));
    return char_sum(ring, ring.enumerate_units(), pn);
}

/// Closed form of the unit sum: -|pR| when n + 1 = e, otherwise 0.
inline std::int64_t unit_sum_closed_form(const GaloisRing& ring, unsigned n) {
    if (n == 0 || n >= ring.e()) fail(ErrorCode::IndexOutOfRange, "unit_sum needs 0 < n < e");
    if (n + 1 == ring.e()) return -static_cast<std::int64_t>(*checked_pow(ring.p(), (ring.e() - 1) * ring.k()));
    return 0;
}

struct IdentityReport {
    CyclotomicSum lhs;
    CyclotomicSum rhs;
    bool equal = false;
};

/// Sum over z in p^i R of chi(a z) against the sum over w in R_{e-i,k} of
/// chi_{e-i,k}(rho_i(a) w). The two sides live in different cyclotomic
/// fields; both are compared after reduction to integers.
inline IdentityReport ideal_sum_reduction_check(const GaloisRing& ring, const Element& a, unsigned i) {
    if (i >= ring.e()) fail(ErrorCode::IndexOutOfRange, "ideal index must be below e");
    const GaloisRing child = ring.child(i);
    IdentityReport rep;
    rep.lhs = char_sum(ring, ring.enumerate_ideal(i), a);
    rep.rhs = char_sum(child, child.enumerate_ring(), ring.rho(a, i));
    const auto l = rep.lhs.to_integer();
    const auto r = rep.rhs.to_integer();
    rep.equal = l && r && *l == *r;
    return rep;
}

struct BilinearBoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// |sum_{j,k} z_j y_k c_jk| <= sqrt(R C) |z| |y| with R, C the row and column
/// sum maxima of the nonnegative matrix c (row-major, rows = |z|).
inline BilinearBoundReport bilinear_bound_check(const std::vector<std::vector<double>>& c,
                                       const std::vector<std::complex<double>>& z,
                                       const std::vector<std::complex<double>>& y) {
    if (c.size() != z.size()) fail(ErrorCode::DimensionMismatch, "row count differs from |z|");
    for (const auto& row : c)
        if (row.size() != y.size()) fail(ErrorCode::DimensionMismatch, "column count differs from |y|");
    std::complex<double> total{0.0, 0.0};
    double row_max = 0.0;
    std::vector<double> col_sum(y.size(), 0.0);
    for (std::size_t j = 0; j < z.size(); ++j) {
        double row_sum = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            if (c[j][k] < 0.0) fail(ErrorCode::DimensionMismatch, "matrix entries must be nonnegative");
            total += z[j] * y[k] * c[j][k];
            row_sum += c[j][k];
            col_sum[k] += c[j][k];
        }
        row_max = std::max(row_max, row_sum);
    }
    double col_max = 0.0;
    for (double s : col_sum) col_max = std::max(col_max, s);
    double zn = 0.0, yn = 0.0;
    for (const auto& v : z) zn += std::norm(v);
    for (const auto& v : y) yn += std::norm(v);
    BilinearBoundReport rep;
    rep.lhs = std::abs(total);
    rep.rhs = std::sqrt(row_max * col_max) * std::sqrt(zn) * std::sqrt(yn);
    // rounding slack only; the inequality itself is over the reals
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 64 * std::numeric_limits<double>::epsilon()) + 1e-300;
    return rep;
}

}  // namespace galring

#endif  // GALRING_CHAR_SUMS_HPP
