#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <random>

#include <galring/char_sums.hpp>
#include <galring/suites.hpp>

using namespace galring;

namespace {

// Floating reference for a character sum: add up exp(2 pi i Tr(a z) / p^e)
// with the trace taken as the sum of Frobenius conjugates.
std::complex<double> float_sum(const GaloisRing& R, const std::vector<Element>& domain, const Element& a) {
    std::complex<double> acc{0, 0};
    for (const auto& z : domain) {
        const double t = static_cast<double>(R.trace(R.mul(a, z)));
        acc += std::polar(1.0, 2 * std::numbers::pi * t / static_cast<double>(R.modulus()));
    }
    return acc;
}

template <class Range>
std::vector<Element> collect(Range&& r) {
    std::vector<Element> out;
    for (const auto& z : r) out.push_back(z);
    return out;
}

}  // namespace

TEST(Character, Exponents) {
    const auto Z4 = make_ring(2, 2, 1);
    EXPECT_EQ(chi_exponent(Z4, Z4.zero()), 0u);
    EXPECT_EQ(chi_exponent(Z4, Z4.from_int(2)), 2u);
    EXPECT_EQ(chi(Z4, Z4.from_int(2)), CyclotomicSum::integer(2, 2, -1));
    const auto G = make_ring(2, 2, 2);
    EXPECT_EQ(chi_exponent(G, G.generator()), 3u);
    EXPECT_EQ(chi(G, G.generator()).complex_string(), "0.000000000000,-1.000000000000");
}

TEST(Character, IsAdditiveAndNontrivial) {
    for (const auto& R : {make_ring(2, 2, 2), make_ring(3, 2, 1), make_ring(2, 3, 2), make_ring(5, 1, 2)}) {
        bool nontrivial = false;
        for (const auto& z : R.enumerate_ring()) {
            nontrivial = nontrivial || chi_exponent(R, z) != 0;
            for (const auto& w : R.enumerate_ring())
                ASSERT_EQ(chi_exponent(R, R.add(z, w)), (chi_exponent(R, z) + chi_exponent(R, w)) % R.modulus());
        }
        EXPECT_TRUE(nontrivial);
    }
}

TEST(CharSum, Examples) {
    const auto Z4 = make_ring(2, 2, 1);
    EXPECT_EQ(char_sum(Z4, Z4.enumerate_ring(), Z4.one()), CyclotomicSum::integer(2, 2, 0));
    EXPECT_EQ(char_sum(Z4, Z4.enumerate_ring(), Z4.zero()), CyclotomicSum::integer(2, 2, 4));
    const auto G = make_ring(2, 2, 2);
    EXPECT_THROW(char_sum(G, G.enumerate_ring(), Z4.one()), Error);
}

TEST(CharSum, FastFullRingSumMatchesDirectSum) {
    for (const auto& R : {make_ring(2, 2, 2), make_ring(3, 2, 1), make_ring(2, 3, 2), make_ring(3, 1, 3), make_ring(2, 1, 5)})
        for (const auto& a : R.enumerate_ring()) ASSERT_EQ(full_ring_char_sum(R, a), char_sum(R, R.enumerate_ring(), a));
}

TEST(CharSum, AgreesWithFloatingReferenceOnSubsets) {
    std::mt19937_64 gen(5);
    for (const auto& R : {make_ring(2, 3, 2), make_ring(3, 2, 2), make_ring(2, 4, 1), make_ring(2, 2, 4)}) {
        const auto all = collect(R.enumerate_ring());
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<Element> domain;
            for (const auto& z : all)
                if (gen() % 3 == 0) domain.push_back(z);
            const Element a = all[gen() % all.size()];
            const auto exact = char_sum(R, domain, a);
            EXPECT_LT(std::abs(exact.to_complex() - float_sum(R, domain, a)), 1e-9);
        }
    }
}

TEST(Orthogonality, EveryElementOfSmallRings) {
    for (const auto& d : small_rings(512)) {
        const auto R = GaloisRing::from_descriptor(d);
        const auto rep = suite_orthogonality(R);
        EXPECT_EQ(rep.status, Status::Pass) << R.descriptor() << ": " << rep.detail;
    }
}

TEST(UnitSum, Examples) {
    EXPECT_EQ(unit_sum(make_ring(2, 2, 1), 1), CyclotomicSum::integer(2, 2, -2));
    const auto Z8 = make_ring(2, 3, 1);
    EXPECT_EQ(unit_sum(Z8, 1), CyclotomicSum::integer(2, 3, 0));
    EXPECT_EQ(unit_sum(Z8, 2), CyclotomicSum::integer(2, 3, -4));
    EXPECT_THROW(unit_sum(Z8, 0), Error);
    EXPECT_THROW(unit_sum(Z8, 3), Error);
}

TEST(UnitSum, ClosedFormAndSignUpTo4096) {
    for (const auto& d : small_rings(4096)) {
        if (d.e < 2) continue;
        const auto R = GaloisRing::from_descriptor(d);
        for (unsigned n = 1; n < R.e(); ++n) {
            const auto s = unit_sum(R, n);
            const auto v = s.to_integer();
            ASSERT_TRUE(v.has_value()) << R.descriptor();
            EXPECT_LE(*v, 0);
            EXPECT_EQ(*v, unit_sum_closed_form(R, n)) << R.descriptor() << " n=" << n;
        }
    }
}

TEST(IdealReduction, Examples) {
    const auto Z8 = make_ring(2, 3, 1);
    const auto r1 = ideal_sum_reduction_check(Z8, Z8.one(), 1);
    EXPECT_TRUE(r1.equal);
    EXPECT_EQ(r1.lhs.to_integer().value(), 0);
    const auto r4 = ideal_sum_reduction_check(Z8, Z8.from_int(4), 1);
    EXPECT_TRUE(r4.equal);
    EXPECT_EQ(r4.lhs.to_integer().value(), 4);
    EXPECT_EQ(r4.rhs.to_integer().value(), 4);
    for (const auto& a : Z8.enumerate_ring()) {
        const auto r0 = ideal_sum_reduction_check(Z8, a, 0);
        EXPECT_EQ(r0.lhs, r0.rhs);
    }
    EXPECT_THROW(ideal_sum_reduction_check(Z8, Z8.one(), 3), Error);
}

TEST(IdealReduction, ExhaustiveUpTo256) {
    for (const auto& d : small_rings(256)) {
        const auto R = GaloisRing::from_descriptor(d);
        const auto rep = suite_ideal_reduction(R);
        EXPECT_EQ(rep.status, Status::Pass) << R.descriptor() << ": " << rep.detail;
        EXPECT_EQ(rep.cases, R.size_u64() * R.e());
    }
}

TEST(BilinearBound, Examples) {
    EXPECT_TRUE(bilinear_bound_check({{1.0}}, {{1.0, 0.0}}, {{1.0, 0.0}}).holds);
    const auto r = bilinear_bound_check({{0.0, 0.0}, {0.0, 0.0}}, {{1, 2}, {3, 4}}, {{5, 6}, {7, 8}});
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_TRUE(r.holds);
    EXPECT_THROW(bilinear_bound_check({{1.0}}, {{1, 0}, {1, 0}}, {{1, 0}}), Error);
}

TEST(BilinearBound, RandomNonnegativeMatrices) {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<double>> c(3, std::vector<double>(4));
        for (auto& row : c)
            for (auto& x : row) x = u(gen);
        std::vector<std::complex<double>> z(3), y(4);
        for (auto& x : z) x = {s(gen), s(gen)};
        for (auto& x : y) x = {s(gen), s(gen)};
        EXPECT_TRUE(bilinear_bound_check(c, z, y).holds);
    }
}
