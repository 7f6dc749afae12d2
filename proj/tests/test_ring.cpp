#include <gtest/gtest.h>

#include <map>
#include <set>

#include <galring/ring.hpp>

using namespace galring;

namespace {

// Reference multiplication: schoolbook product, then long division by the
// monic f, all over plain integers reduced mod p^e at the end.
std::vector<long long> ref_mul(const std::vector<long long>& a, const std::vector<long long>& b,
                               const std::vector<long long>& f, long long m) {
    const std::size_t k = f.size() - 1;
    std::vector<long long> prod(2 * k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % m;
    for (std::size_t top = 2 * k - 1; top >= k; --top) {
        const long long c = prod[top];
        for (std::size_t i = 0; i <= k; ++i) prod[top - k + i] = ((prod[top - k + i] - c * f[i]) % m + m) % m;
    }
    prod.resize(k);
    return prod;
}

std::vector<long long> as_ll(const Element& z) { return {z.coeffs.begin(), z.coeffs.end()}; }

std::vector<GaloisRing> small_test_rings() {
    return {make_ring(2, 1, 1), make_ring(2, 2, 1), make_ring(2, 3, 1), make_ring(3, 2, 1), make_ring(2, 2, 2),
            make_ring(2, 1, 3), make_ring(3, 1, 2), make_ring(2, 3, 2), make_ring(5, 2, 1), make_ring(3, 2, 2),
            make_ring(2, 4, 1), make_ring(2, 2, 3)};
}

}  // namespace

TEST(RingConstruction, DefaultPolynomials) {
    EXPECT_EQ(make_ring(2, 2, 1).descriptor(), "p=2 e=2 k=1 f=0,1");
    EXPECT_EQ(make_ring(2, 2, 2).descriptor(), "p=2 e=2 k=2 f=1,1,1");
    EXPECT_EQ(make_ring(2, 1, 3).descriptor(), "p=2 e=1 k=3 f=1,1,0,1");
    EXPECT_EQ(make_ring(3, 1, 2).descriptor(), "p=3 e=1 k=2 f=1,0,1");
}

TEST(RingConstruction, CardinalityAndUnits) {
    const auto R = make_ring(2, 2, 2, std::vector<u64>{1, 1, 1});
    EXPECT_EQ(R.cardinality(), 16);
    EXPECT_EQ(R.unit_count(), 12);
    u64 units = 0;
    for (const auto& z : R.enumerate_ring()) units += (z.coeffs[0] % 2 != 0 || z.coeffs[1] % 2 != 0);
    EXPECT_EQ(units, 12u);
}

TEST(RingConstruction, Errors) {
    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InternalError;
    };
    EXPECT_EQ(code_of([] { make_ring(2, 2, 2, std::vector<u64>{1, 0, 1}); }), ErrorCode::NotIrreducible);
    EXPECT_EQ(code_of([] { make_ring(4, 1, 1); }), ErrorCode::NotPrime);
    EXPECT_EQ(code_of([] { make_ring(1, 1, 1); }), ErrorCode::NotPrime);
    EXPECT_EQ(code_of([] { make_ring(2, 0, 1); }), ErrorCode::DegreeMismatch);
    EXPECT_EQ(code_of([] { make_ring(2, 1, 2, std::vector<u64>{1, 1}); }), ErrorCode::DegreeMismatch);
    EXPECT_EQ(code_of([] { make_ring(2, 2, 2, std::vector<u64>{1, 1, 3}); }), ErrorCode::DegreeMismatch);
    EXPECT_EQ(code_of([] { GaloisRing::parse("p=0 e=1 k=1"); }), ErrorCode::NotPrime);
    EXPECT_EQ(code_of([] { GaloisRing::parse("p=2 e=1"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { GaloisRing::parse("p=2 e=1 k=1 q=3"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { GaloisRing::parse("p=2 e=64 k=1"); }), ErrorCode::RingTooLarge);
}

TEST(RingConstruction, DescriptorRoundTrip) {
    const auto R = GaloisRing::parse("p=2 e=3 k=2 f=1,1,1");
    EXPECT_EQ(R.descriptor(), "p=2 e=3 k=2 f=1,1,1");
    EXPECT_EQ(GaloisRing::parse("p=2,e=3,k=2,f=1,1,1"), R);
    EXPECT_EQ(GaloisRing::parse(R.descriptor()), R);
}

TEST(RingArithmetic, SpecExamples) {
    const auto Z4 = make_ring(2, 2, 1);
    EXPECT_EQ(Z4.add(Z4.from_int(3), Z4.from_int(3)), Z4.from_int(2));
    EXPECT_EQ(Z4.pow(Z4.from_int(3), 0), Z4.one());
    EXPECT_EQ(Z4.inverse(Z4.from_int(3)), Z4.from_int(3));
    EXPECT_EQ(Z4.inverse(Z4.one()), Z4.one());
    try {
        Z4.inverse(Z4.from_int(2));
        FAIL() << "expected NotAUnit";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAUnit);
    }
    const auto G = make_ring(2, 2, 2, std::vector<u64>{1, 1, 1});
    const auto x = G.generator();
    EXPECT_EQ(G.format(G.mul(x, x)), "3,3");
    EXPECT_EQ(G.parse_element("3,1"), G.add(x, G.from_int(3)));
    EXPECT_EQ(G.format(G.parse_element("3,1")), "3,1");
}

TEST(RingArithmetic, MultiplicationMatchesReference) {
    for (const auto& R : small_test_rings()) {
        const std::vector<long long> f(R.params().f.begin(), R.params().f.end());
        const long long m = static_cast<long long>(R.modulus());
        for (const auto& a : R.enumerate_ring())
            for (const auto& b : R.enumerate_ring()) ASSERT_EQ(as_ll(R.mul(a, b)), ref_mul(as_ll(a), as_ll(b), f, m)) << R.descriptor();
    }
}

TEST(RingArithmetic, AxiomsExhaustiveOnTinyRings) {
    for (const auto& R : {make_ring(2, 2, 1), make_ring(2, 3, 1), make_ring(3, 2, 1), make_ring(2, 2, 2), make_ring(2, 1, 3),
                          make_ring(3, 1, 2), make_ring(3, 3, 1), make_ring(2, 5, 1)}) {
        for (const auto& a : R.enumerate_ring())
            for (const auto& b : R.enumerate_ring()) {
                ASSERT_EQ(R.mul(a, b), R.mul(b, a));
                ASSERT_EQ(R.add(a, b), R.add(b, a));
                ASSERT_EQ(R.sub(R.add(a, b), b), a);
                for (const auto& c : R.enumerate_ring()) {
                    ASSERT_EQ(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)));
                    ASSERT_EQ(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)));
                }
            }
    }
}

TEST(RingArithmetic, UnitsAndInverses) {
    for (const auto& R : small_test_rings()) {
        u64 units = 0;
        for (const auto& z : R.enumerate_ring()) {
            bool has_inverse = false;
            for (const auto& w : R.enumerate_ring())
                if (R.mul(z, w) == R.one()) has_inverse = true;
            EXPECT_EQ(R.is_unit(z), has_inverse);
            if (has_inverse) {
                ++units;
                EXPECT_EQ(R.mul(z, R.inverse(z)), R.one());
                EXPECT_EQ(R.inverse(z), R.inverse_by_power(z));
            }
        }
        EXPECT_EQ(to_mpz(units), R.unit_count()) << R.descriptor();
    }
}

TEST(RingValuation, Examples) {
    const auto Z8 = make_ring(2, 3, 1);
    EXPECT_EQ(Z8.valuation(Z8.zero()), 3u);
    EXPECT_EQ(Z8.valuation(Z8.from_int(6)), 1u);
    const auto G = make_ring(2, 2, 2);
    EXPECT_EQ(G.valuation(G.parse_element("0,2")), 1u);
}

TEST(RingValuation, MultiplicativeUpToCap) {
    for (const auto& R : small_test_rings())
        for (const auto& a : R.enumerate_ring())
            for (const auto& b : R.enumerate_ring())
                ASSERT_EQ(R.valuation(R.mul(a, b)), std::min(R.valuation(a) + R.valuation(b), R.e()));
}

TEST(RingEnumeration, IdealsAndLayers) {
    const auto Z8 = make_ring(2, 3, 1);
    EXPECT_EQ(std::ranges::distance(Z8.enumerate_ideal(1)), 4);
    std::set<u64> layer;
    for (const auto& z : Z8.enumerate_layer(1)) layer.insert(z.coeffs[0]);
    EXPECT_EQ(layer, (std::set<u64>{2, 6}));
    const auto G = make_ring(2, 2, 2);
    EXPECT_EQ(std::ranges::distance(G.enumerate_layer(0)), 12);
    EXPECT_EQ(G.layer_size(0), 12);
    EXPECT_EQ(G.ideal_size(2), 1);
    for (const auto& R : small_test_rings())
        for (unsigned i = 0; i <= R.e(); ++i) {
            u64 expected = 0;
            for (const auto& z : R.enumerate_ring()) expected += R.valuation(z) >= i;
            EXPECT_EQ(static_cast<u64>(std::ranges::distance(R.enumerate_ideal(i))), expected);
            for (const auto& z : R.enumerate_ideal(i)) EXPECT_GE(R.valuation(z), i);
        }
}

TEST(RingEnumeration, IndexRoundTrip) {
    for (const auto& R : small_test_rings()) {
        u64 expected = 0;
        for (const auto& z : R.enumerate_ring()) {
            EXPECT_EQ(R.index_of(z), expected++);
            EXPECT_EQ(R.element_at(R.index_of(z)), z);
        }
    }
}

TEST(Teichmuller, Examples) {
    const auto Z9 = make_ring(3, 2, 1);
    std::vector<std::string> got;
    for (const auto& t : Z9.teichmuller_set().elements) got.push_back(Z9.format(t));
    EXPECT_EQ(got, (std::vector<std::string>{"0", "1", "8"}));
    const auto Z4 = make_ring(2, 2, 1);
    EXPECT_EQ(Z4.teichmuller_set().elements.size(), 2u);
    EXPECT_EQ(Z4.teichmuller_set().elements[1], Z4.one());
    EXPECT_EQ(make_ring(2, 1, 2).teichmuller_set().elements.size(), 4u);
}

TEST(Teichmuller, FixedPointsAndCyclicGroup) {
    for (const auto& R : small_test_rings()) {
        const u64 q = *checked_pow(R.p(), R.k());
        // independent oracle: every fixed point of z -> z^q found by enumeration
        std::vector<Element> fixed;
        for (const auto& z : R.enumerate_ring())
            if (R.pow(z, q) == z) fixed.push_back(z);
        const auto T = R.teichmuller_set();
        ASSERT_EQ(T.elements, fixed) << R.descriptor();
        // beta has order exactly q - 1 and its powers exhaust T \ {0}
        std::set<u64> powers;
        Element acc = R.one();
        for (u64 j = 0; j + 1 < q; ++j) {
            powers.insert(R.index_of(acc));
            acc = R.mul(acc, T.beta);
        }
        EXPECT_EQ(acc, R.one());
        EXPECT_EQ(powers.size(), q - 1);
    }
}

TEST(Digits, Examples) {
    const auto Z9 = make_ring(3, 2, 1);
    const auto d = Z9.digits(Z9.from_int(5));
    ASSERT_EQ(d.digits.size(), 2u);
    EXPECT_EQ(Z9.format(d.digits[0]), "8");
    EXPECT_EQ(Z9.format(d.digits[1]), "8");
    for (const auto& z : Z9.digits(Z9.zero()).digits) EXPECT_EQ(z, Z9.zero());
    const auto G = make_ring(2, 3, 2);
    const auto beta = G.teichmuller_set().beta;
    const auto db = G.digits(beta);
    EXPECT_EQ(db.digits[0], beta);
    EXPECT_EQ(db.digits[1], G.zero());
    EXPECT_EQ(db.digits[2], G.zero());
}

TEST(Digits, UniqueAmongAllTeichmullerTuples) {
    for (const auto& R : small_test_rings()) {
        if (R.size_u64() > 256) continue;
        const auto T = R.teichmuller_set().elements;
        // every T^e tuple recomposes to a distinct element: a bijection T^e -> R
        std::map<u64, std::vector<Element>> by_value;
        std::vector<std::size_t> tuple(R.e(), 0);
        const Element p = R.from_int(static_cast<long long>(R.p()));
        for (;;) {
            Element acc = R.zero(), pi = R.one();
            std::vector<Element> digits;
            for (unsigned i = 0; i < R.e(); ++i) {
                acc = R.add(acc, R.mul(pi, T[tuple[i]]));
                pi = R.mul(pi, p);
                digits.push_back(T[tuple[i]]);
            }
            EXPECT_TRUE(by_value.emplace(R.index_of(acc), digits).second);
            unsigned pos = 0;
            while (pos < R.e() && ++tuple[pos] == T.size()) tuple[pos++] = 0;
            if (pos == R.e()) break;
        }
        ASSERT_EQ(by_value.size(), R.size_u64());
        for (const auto& z : R.enumerate_ring()) EXPECT_EQ(R.digits(z).digits, by_value.at(R.index_of(z)));
    }
}

TEST(Frobenius, Examples) {
    const auto G = make_ring(2, 2, 2, std::vector<u64>{1, 1, 1});
    const auto x = G.generator();
    EXPECT_EQ(G.format(G.frobenius(x)), "3,3");
    EXPECT_EQ(G.frobenius(G.frobenius(x)), x);
    EXPECT_EQ(G.trace(x), 3u);
    EXPECT_EQ(G.trace(G.one()), 2u);
    const auto Z9 = make_ring(3, 2, 1);
    for (const auto& z : Z9.enumerate_ring()) {
        EXPECT_EQ(Z9.frobenius(z), z);
        EXPECT_EQ(Z9.trace(z), z.coeffs[0]);
    }
}

TEST(Frobenius, AutomorphismAndTraceProperties) {
    for (const auto& R : small_test_rings()) {
        std::set<u64> images, traces;
        for (const auto& z : R.enumerate_ring()) {
            const Element fz = R.frobenius(z);
            images.insert(R.index_of(fz));
            traces.insert(R.trace(z));
            EXPECT_EQ(R.trace(fz), R.trace(z));
            EXPECT_EQ(R.trace(z), R.trace_linear(z));
            Element w = z;
            for (unsigned j = 0; j < R.k(); ++j) w = R.frobenius(w);
            EXPECT_EQ(w, z);
            // constants are fixed
            if (std::all_of(z.coeffs.begin() + 1, z.coeffs.end(), [](u64 c) { return c == 0; })) {
                EXPECT_EQ(fz, z);
            }
        }
        EXPECT_EQ(images.size(), R.size_u64()) << "not bijective on " << R.descriptor();
        EXPECT_EQ(traces.size(), R.modulus()) << "trace not onto Z_{p^e} on " << R.descriptor();
        for (const auto& a : R.enumerate_ring())
            for (const auto& b : R.enumerate_ring()) {
                ASSERT_EQ(R.frobenius(R.mul(a, b)), R.mul(R.frobenius(a), R.frobenius(b)));
                ASSERT_EQ(R.frobenius(R.add(a, b)), R.add(R.frobenius(a), R.frobenius(b)));
                ASSERT_EQ(R.trace(R.add(a, b)), (R.trace(a) + R.trace(b)) % R.modulus());
            }
    }
}

TEST(ChildRings, RhoExamples) {
    const auto Z9 = make_ring(3, 2, 1);
    const auto Z3 = Z9.child(1);
    EXPECT_EQ(Z3.descriptor(), "p=3 e=1 k=1 f=0,1");
    EXPECT_EQ(Z3.format(Z9.rho(Z9.from_int(5), 1)), "2");
    for (const auto& R : small_test_rings())
        for (const auto& z : R.enumerate_ring()) {
            EXPECT_EQ(R.rho(z, 0), z);
            const auto last = R.child(R.e() - 1);
            EXPECT_EQ(R.rho(z, R.e() - 1), last.reduce_from_parent(z));
        }
}

TEST(ChildRings, RhoIsReductionModPToTheEMinusI) {
    // rho_i keeps the lowest e - i digits, i.e. it is reduction mod p^{e-i}
    for (const auto& R : small_test_rings())
        for (unsigned i = 0; i < R.e(); ++i) {
            const auto C = R.child(i);
            for (const auto& z : R.enumerate_ring()) ASSERT_EQ(R.rho(z, i), C.reduce_from_parent(z));
        }
}

TEST(ChildRings, LayerToUnitBijection) {
    // z of valuation i equals p^i u with u determined modulo p^{e-i}; the map
    // [p^i] -> units of R_{e-i,k} is a bijection
    for (const auto& R : small_test_rings())
        for (unsigned i = 0; i < R.e(); ++i) {
            const auto C = R.child(i);
            std::set<u64> image;
            const Element p = R.from_int(static_cast<long long>(R.p()));
            for (const auto& z : R.enumerate_layer(i)) {
                const auto d = R.digits(z);
                PadicDigits shifted;
                for (unsigned j = 0; j < R.e(); ++j) shifted.digits.push_back(j + i < R.e() ? d.digits[j + i] : R.zero());
                const Element u = R.compose(shifted);
                EXPECT_EQ(R.mul(R.pow(p, i), u), z);
                const Element cu = C.reduce_from_parent(u);
                EXPECT_TRUE(C.is_unit(cu));
                image.insert(C.index_of(cu));
            }
            EXPECT_EQ(to_mpz(image.size()), C.unit_count()) << R.descriptor() << " i=" << i;
            EXPECT_EQ(to_mpz(image.size()), R.layer_size(i));
        }
}

TEST(BigRing, AgreesWithNativeOnSmallRings) {
    for (const auto& R : {make_ring(2, 3, 2), make_ring(3, 2, 1), make_ring(2, 2, 3)}) {
        const auto B = BigGaloisRing::parse(R.descriptor());
        auto lift = [&](const Element& z) {
            std::vector<mpz_class> c;
            for (u64 v : z.coeffs) c.push_back(to_mpz(v));
            return B.element(c);
        };
        for (const auto& a : R.enumerate_ring()) {
            EXPECT_EQ(lift(R.frobenius(a)), B.frobenius(lift(a)));
            EXPECT_EQ(to_mpz(R.trace(a)), B.trace(lift(a)));
            for (const auto& b : R.enumerate_ring()) ASSERT_EQ(lift(R.mul(a, b)), B.mul(lift(a), lift(b)));
        }
    }
}

TEST(BigRing, LargeExponent) {
    const auto B = BigGaloisRing::make(2, 100, 2);
    const auto x = B.generator();
    const auto u = B.add(x, B.from_int(3));
    ASSERT_TRUE(B.is_unit(u));
    EXPECT_EQ(B.mul(u, B.inverse(u)), B.one());
    const auto t = B.teichmuller_lift(x);
    EXPECT_EQ(B.pow(t, 4), t);
    const auto d = B.digits(u);
    EXPECT_EQ(B.compose(d), u);
    EXPECT_EQ(B.valuation(B.scale(u, big_pow(2, 37))), 37u);
    EXPECT_FALSE(B.size().has_value());
}
