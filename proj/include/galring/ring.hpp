#ifndef GALRING_RING_HPP
#define GALRING_RING_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <ranges>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "modular.hpp"

namespace galring {

/// Element of a Galois ring: k residues modulo p^e, constant coefficient first.
/// The tag fingerprints the owning ring so that mixing rings is caught.
template <class Coeff>
struct BasicElement {
    std::vector<Coeff> coeffs;
    u64 tag = 0;

    bool operator==(const BasicElement& other) const { return tag == other.tag && coeffs == other.coeffs; }
};

template <class Coeff>
struct BasicRingParams {
    u64 p = 2;
    unsigned e = 1;
    unsigned k = 1;
    std::vector<Coeff> f;  // k + 1 coefficients, constant first, monic

    bool operator==(const BasicRingParams&) const = default;

    /// `p=2 e=3 k=2 f=1,1,1`
    std::string descriptor() const {
        std::ostringstream os;
        os << "p=" << p << " e=" << e << " k=" << k << " f=";
        for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << ModOps<Coeff>::str(f[i]);
        return os.str();
    }
};

/// Parsed but unvalidated ring descriptor; f is absent when the default
/// polynomial should be selected.
struct RingDescriptor {
    u64 p = 0;
    unsigned e = 0;
    unsigned k = 0;
    std::optional<std::vector<mpz_class>> f;
};

/// Accepts `p=2 e=3 k=2 f=1,1,1` as well as the comma-separated header form
/// `p=2,e=3,k=2,f=1,1,1`; `f` must come last when present.
inline RingDescriptor parse_ring_descriptor(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
            if (!cur.empty()) tokens.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));

    auto parse_uint = [&](const std::string& s) -> unsigned long long {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            fail(ErrorCode::ParseError, "expected unsigned integer in ring descriptor, got '" + s + "'");
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            fail(ErrorCode::ParseError, "integer out of range in ring descriptor: " + s);
        }
    };

    RingDescriptor d;
    bool have_p = false, have_e = false, have_k = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        const auto eq = tok.find('=');
        if (eq == std::string::npos) fail(ErrorCode::ParseError, "unexpected token '" + tok + "' in ring descriptor");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "p") {
            d.p = parse_uint(val);
            have_p = true;
        } else if (key == "e") {
            d.e = static_cast<unsigned>(parse_uint(val));
            have_e = true;
        } else if (key == "k") {
            d.k = static_cast<unsigned>(parse_uint(val));
            have_k = true;
        } else if (key == "f") {
            std::vector<mpz_class> coeffs;
            if (!val.empty()) coeffs.emplace_back(val);
            for (++i; i < tokens.size(); ++i) {
                if (tokens[i].find('=') != std::string::npos) fail(ErrorCode::ParseError, "f must be the last field");
                coeffs.emplace_back(tokens[i]);
            }
            if (coeffs.empty()) fail(ErrorCode::ParseError, "empty f in ring descriptor");
            d.f = std::move(coeffs);
        } else {
            fail(ErrorCode::ParseError, "unknown ring descriptor key '" + key + "'");
        }
    }
    if (!have_p || !have_e || !have_k) fail(ErrorCode::ParseError, "ring descriptor needs p, e and k");
    return d;
}

template <class Coeff>
struct BasicPadicDigits {
    std::vector<BasicElement<Coeff>> digits;  // z_0 .. z_{e-1}
};

template <class Coeff>
struct BasicTeichmullerSet {
    std::vector<BasicElement<Coeff>> elements;  // sorted by index
    BasicElement<Coeff> beta;
};

template <class Coeff>
class BasicGaloisRing;

namespace detail {

template <class Coeff>
struct RingState {
    BasicRingParams<Coeff> params;
    ModOps<Coeff> ops;
    u64 tag = 0;
    std::optional<u64> size;             // |R| when it fits in 64 bits
    std::shared_ptr<const RingState> lower;  // R_{e-1,k}, absent for e = 1
    std::vector<Coeff> trace_basis;      // Tr(x^j), j < k
    std::vector<BasicElement<Coeff>> teich_table;  // indexed by residue code mod p, may be empty
};

inline u64 fnv1a(std::string_view s) {
    u64 h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

/// Teichmüller tables are materialised only up to this many residue classes.
inline constexpr u64 kTeichmullerTableCap = u64{1} << 16;

/// Galois ring R_{e,k} = Z_{p^e}[x]/(f). Immutable after construction and
/// cheap to copy; all member functions are pure.
template <class Coeff>
class BasicGaloisRing {
public:
    using Element = BasicElement<Coeff>;
    using Params = BasicRingParams<Coeff>;
    using PadicDigits = BasicPadicDigits<Coeff>;
    using TeichmullerSet = BasicTeichmullerSet<Coeff>;
    using Ops = ModOps<Coeff>;

    /// Validates p, e, k and f. When f is omitted the smallest monic
    /// polynomial that is irreducible mod p is chosen, ordering candidates by
    /// their integer code sum c_i p^i (i.e. highest coefficient compared first).
    static BasicGaloisRing make(u64 p, unsigned e, unsigned k, std::optional<std::vector<Coeff>> f = std::nullopt) {
        if (!is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
        if (e < 1 || k < 1) fail(ErrorCode::DegreeMismatch, "e and k must be at least 1");
        const Ops ops = Ops::make(p, e);
        std::vector<Coeff> poly;
        if (f) {
            if (f->size() != k + 1) fail(ErrorCode::DegreeMismatch, "f must have k + 1 coefficients");
            for (const auto& c : *f) poly.push_back(ops.from_mpz(Ops::to_big(c)));
            if (poly.back() != ops.one()) fail(ErrorCode::DegreeMismatch, "f must be monic");
            if (!polymod::irreducible_rabin(mod_p(poly, p), p))
                fail(ErrorCode::NotIrreducible, "f is not irreducible mod p");
        } else {
            poly = default_polynomial(p, k, ops);
        }
        return BasicGaloisRing(build(p, e, k, poly));
    }

    static BasicGaloisRing from_descriptor(const RingDescriptor& d) {
        if (!is_prime(d.p)) fail(ErrorCode::NotPrime, std::to_string(d.p) + " is not prime");
        if (d.e < 1 || d.k < 1) fail(ErrorCode::DegreeMismatch, "e and k must be at least 1");
        std::optional<std::vector<Coeff>> f;
        if (d.f) {
            std::vector<Coeff> coeffs;
            const Ops ops = Ops::make(d.p, d.e);
            for (const auto& c : *d.f) coeffs.push_back(ops.from_mpz(c));
            f = std::move(coeffs);
        }
        return make(d.p, d.e, d.k, std::move(f));
    }

    static BasicGaloisRing parse(std::string_view descriptor) { return from_descriptor(parse_ring_descriptor(descriptor)); }

    const Params& params() const { return s_->params; }
    u64 p() const { return s_->params.p; }
    unsigned e() const { return s_->params.e; }
    unsigned k() const { return s_->params.k; }
    const Coeff& modulus() const { return s_->ops.m; }
    const Ops& ops() const { return s_->ops; }
    u64 tag() const { return s_->tag; }
    std::string descriptor() const { return s_->params.descriptor(); }

    bool operator==(const BasicGaloisRing& other) const { return s_ == other.s_ || s_->params == other.s_->params; }

    mpz_class cardinality() const { return big_pow(p(), static_cast<unsigned long>(e()) * k()); }
    mpz_class unit_count() const {
        return cardinality() - big_pow(p(), static_cast<unsigned long>(e() - 1) * k());
    }
    std::optional<u64> size() const { return s_->size; }
    u64 size_u64() const {
        if (!s_->size) fail(ErrorCode::RingTooLarge, "ring cardinality exceeds 64 bits");
        return *s_->size;
    }

    // ---- construction of elements -------------------------------------

    Element zero() const { return Element{std::vector<Coeff>(k(), s_->ops.zero()), tag()}; }
    Element one() const { return constant(s_->ops.one()); }
    Element constant(const Coeff& c) const {
        Element z = zero();
        z.coeffs[0] = s_->ops.from_mpz(Ops::to_big(c));
        return z;
    }
    Element from_int(long long v) const {
        Element z = zero();
        z.coeffs[0] = s_->ops.from_mpz(mpz_class(std::to_string(v)));
        return z;
    }
    /// The class of x; equals a constant when k = 1.
    Element generator() const {
        if (k() == 1) return constant(s_->ops.neg(s_->params.f[0]));
        Element z = zero();
        z.coeffs[1] = s_->ops.one();
        return z;
    }
    Element element(std::vector<Coeff> coeffs) const {
        if (coeffs.size() > k()) fail(ErrorCode::DimensionMismatch, "too many coefficients for this ring");
        coeffs.resize(k(), s_->ops.zero());
        for (auto& c : coeffs) c = s_->ops.from_mpz(Ops::to_big(c));
        return Element{std::move(coeffs), tag()};
    }

    /// Comma-separated residues, constant first: `3,1` is x + 3.
    Element parse_element(std::string_view text) const {
        std::vector<Coeff> coeffs;
        std::string cur;
        auto flush = [&] {
            std::string s;
            for (char c : cur)
                if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
            if (s.empty()) fail(ErrorCode::ParseError, "empty coefficient in element '" + std::string(text) + "'");
            mpz_class v;
            if (v.set_str(s, 10) != 0) fail(ErrorCode::ParseError, "bad coefficient '" + s + "'");
            coeffs.push_back(s_->ops.from_mpz(v));
            cur.clear();
        };
        for (char ch : text) {
            if (ch == ',') flush();
            else cur.push_back(ch);
        }
        flush();
        if (coeffs.size() > k()) fail(ErrorCode::ParseError, "element has more than k coefficients");
        return element(std::move(coeffs));
    }

    std::string format(const Element& z) const {
        check(z);
        std::string out;
        for (std::size_t i = 0; i < z.coeffs.size(); ++i) {
            if (i) out += ",";
            out += Ops::str(z.coeffs[i]);
        }
        return out;
    }

    // ---- arithmetic -----------------------------------------------------

    void check(const Element& z) const {
        if (z.tag != tag() || z.coeffs.size() != k()) fail(ErrorCode::RingMismatch, "element does not belong to " + descriptor());
    }

    Element add(const Element& a, const Element& b) const {
        check(a);
        check(b);
        Element r = a;
        for (unsigned i = 0; i < k(); ++i) r.coeffs[i] = s_->ops.add(a.coeffs[i], b.coeffs[i]);
        return r;
    }
    Element sub(const Element& a, const Element& b) const {
        check(a);
        check(b);
        Element r = a;
        for (unsigned i = 0; i < k(); ++i) r.coeffs[i] = s_->ops.sub(a.coeffs[i], b.coeffs[i]);
        return r;
    }
    Element neg(const Element& a) const {
        check(a);
        Element r = a;
        for (auto& c : r.coeffs) c = s_->ops.neg(c);
        return r;
    }
    Element scale(const Element& a, const Coeff& c) const {
        check(a);
        Element r = a;
        for (auto& x : r.coeffs) x = s_->ops.mul(x, c);
        return r;
    }
    Element mul(const Element& a, const Element& b) const {
        check(a);
        check(b);
        return Element{mul_raw(a.coeffs, b.coeffs), tag()};
    }

    Element pow(Element base, u64 exp) const {
        check(base);
        Element result = one();
        while (exp) {
            if (exp & 1) result = mul(result, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return result;
    }
    Element pow(Element base, mpz_class exp) const {
        check(base);
        if (exp < 0) fail(ErrorCode::IndexOutOfRange, "negative exponent");
        Element result = one();
        while (exp > 0) {
            if (mpz_odd_p(exp.get_mpz_t())) result = mul(result, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return result;
    }

    bool is_zero(const Element& z) const {
        check(z);
        return std::all_of(z.coeffs.begin(), z.coeffs.end(), [](const Coeff& c) { return c == 0; });
    }

    /// A unit iff its image in F_{p^k} is nonzero.
    bool is_unit(const Element& z) const {
        check(z);
        return std::any_of(z.coeffs.begin(), z.coeffs.end(), [&](const Coeff& c) { return !Ops::divisible(c, p()); });
    }

    /// Largest i with z in (p^i); zero has valuation e.
    unsigned valuation(const Element& z) const {
        check(z);
        unsigned best = e();
        for (Coeff c : z.coeffs) {
            unsigned v = 0;
            while (v < e() && c != 0 && Ops::divisible(c, p())) {
                c = Ops::div_exact(c, p());
                ++v;
            }
            if (c == 0) v = e();
            best = std::min(best, v);
        }
        return best;
    }

    /// Inverse via the F_{p^k} inverse lifted by Newton iteration y <- y(2 - uy).
    Element inverse(const Element& u) const {
        if (!is_unit(u)) fail(ErrorCode::NotAUnit, format(u) + " is not a unit");
        polymod::Poly a(k()), f(k() + 1);
        for (unsigned i = 0; i < k(); ++i) a[i] = residue_mod_p(u.coeffs[i]);
        for (unsigned i = 0; i <= k(); ++i) f[i] = residue_mod_p(s_->params.f[i]);
        polymod::trim(a);
        auto [g, s] = polymod::inverse_mod(a, f, p());
        if (g.size() != 1) fail(ErrorCode::InternalError, "inverse mod p failed");
        Element y = zero();
        for (std::size_t i = 0; i < s.size(); ++i) y.coeffs[i] = s_->ops.from_u64(s[i]);
        const Element two = from_int(2);
        for (unsigned precision = 1; precision < e(); precision *= 2) y = mul(y, sub(two, mul(u, y)));
        return y;
    }

    /// u^(|R^x| - 1); the group-order route to the same inverse.
    Element inverse_by_power(const Element& u) const {
        if (!is_unit(u)) fail(ErrorCode::NotAUnit, format(u) + " is not a unit");
        return pow(u, mpz_class(unit_count() - 1));
    }

    // ---- Teichmüller digits, Frobenius, trace --------------------------

    /// The unique t in T_{e,k} with t = z (mod p).
    Element teichmuller_lift(const Element& z) const {
        check(z);
        if (!s_->teich_table.empty()) return s_->teich_table[residue_code(z)];
        return lift_by_iteration(z);
    }

    bool is_teichmuller(const Element& z) const { return teichmuller_lift(z) == z; }

    /// All p^k fixed points of x -> x^(p^k), with a generator of the nonzero part.
    TeichmullerSet teichmuller_set() const {
        const auto q = checked_pow(p(), k());
        if (!q || *q > (u64{1} << 24)) fail(ErrorCode::CapExceeded, "Teichmüller set too large to enumerate");
        TeichmullerSet t;
        t.elements.reserve(*q);
        for (u64 code = 0; code < *q; ++code) {
            Element r = zero();
            u64 c = code;
            for (unsigned i = 0; i < k(); ++i) {
                r.coeffs[i] = s_->ops.from_u64(c % p());
                c /= p();
            }
            Element fixed = lift_by_iteration(r);
            if (pow_p_k(fixed) != fixed) fail(ErrorCode::InternalCardinalityError, "lift is not a fixed point");
            t.elements.push_back(std::move(fixed));
        }
        std::sort(t.elements.begin(), t.elements.end(), [&](const Element& a, const Element& b) { return less(a, b); });
        t.elements.erase(std::unique(t.elements.begin(), t.elements.end()), t.elements.end());
        if (t.elements.size() != *q) fail(ErrorCode::InternalCardinalityError, "|T| != p^k");

        const u64 order = *q - 1;
        const auto factors = prime_factors(order);
        for (const auto& cand : t.elements) {
            if (is_zero(cand)) continue;
            bool generator = true;
            for (u64 r : factors) {
                if (pow(cand, order / r) == one()) {
                    generator = false;
                    break;
                }
            }
            if (generator) {
                t.beta = cand;
                return t;
            }
        }
        fail(ErrorCode::InternalCardinalityError, "no generator of the Teichmüller group");
    }

    /// z = z_0 + p z_1 + ... + p^{e-1} z_{e-1} with every z_i in T_{e,k}.
    PadicDigits digits(const Element& z) const {
        check(z);
        PadicDigits out;
        Element rest = z;
        for (unsigned i = 0; i < e(); ++i) {
            Element d = teichmuller_lift(rest);
            Element diff = sub(rest, d);
            for (auto& c : diff.coeffs) c = Ops::div_exact(c, p());
            out.digits.push_back(std::move(d));
            rest = std::move(diff);
        }
        return out;
    }

    Element compose(const PadicDigits& d) const {
        if (d.digits.size() != e()) fail(ErrorCode::IndexOutOfRange, "expected e digits");
        const Coeff pc = s_->ops.from_u64(p());
        Element acc = zero();
        for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) acc = add(scale(acc, pc), *it);
        return acc;
    }

    /// Digit-wise p-th power; a ring automorphism of order k.
    Element frobenius(const Element& z) const {
        PadicDigits d = digits(z);
        for (auto& t : d.digits) t = pow(t, p());
        return compose(d);
    }

    /// Sum of the k Frobenius conjugates, which lands in Z_{p^e}.
    Coeff trace(const Element& z) const {
        Element acc = z;
        Element conj = z;
        for (unsigned j = 1; j < k(); ++j) {
            conj = frobenius(conj);
            acc = add(acc, conj);
        }
        for (unsigned i = 1; i < k(); ++i)
            if (acc.coeffs[i] != 0) fail(ErrorCode::TraceNotConstant, "trace of " + format(z) + " is not constant");
        return acc.coeffs[0];
    }

    /// Trace through the precomputed traces of 1, x, ..., x^{k-1}.
    Coeff trace_linear(const Element& z) const {
        check(z);
        Coeff acc = s_->ops.zero();
        for (unsigned i = 0; i < k(); ++i) acc = s_->ops.add(acc, s_->ops.mul(z.coeffs[i], s_->trace_basis[i]));
        return acc;
    }

    const std::vector<Coeff>& trace_basis() const { return s_->trace_basis; }

    // ---- child rings ----------------------------------------------------

    /// R_{e-i,k} with f reduced mod p^{e-i}.
    BasicGaloisRing child(unsigned i) const {
        if (i >= e()) fail(ErrorCode::IndexOutOfRange, "child index must be below e");
        std::shared_ptr<const detail::RingState<Coeff>> s = s_;
        for (unsigned j = 0; j < i; ++j) s = s->lower;
        return BasicGaloisRing(std::move(s));
    }

    /// Drops the top i Teichmüller digits and recomposes in R_{e-i,k}.
    Element rho(const Element& a, unsigned i) const {
        if (i >= e()) fail(ErrorCode::IndexOutOfRange, "rho index must be below e");
        const BasicGaloisRing target = child(i);
        const PadicDigits d = digits(a);
        typename BasicGaloisRing::PadicDigits kept;
        for (unsigned j = 0; j < e() - i; ++j) kept.digits.push_back(target.reduce_from_parent(d.digits[j]));
        return target.compose(kept);
    }

    /// Coefficient-wise reduction of an element of any R_{e',k} with e' >= e
    /// sharing this ring's f.
    Element reduce_from_parent(const Element& z) const {
        Element r = zero();
        for (unsigned i = 0; i < k(); ++i) r.coeffs[i] = s_->ops.from_mpz(Ops::to_big(z.coeffs[i]));
        return r;
    }

    // ---- enumeration ----------------------------------------------------

    /// Mixed-radix index with the constant coefficient least significant.
    u64 index_of(const Element& z) const {
        check(z);
        size_u64();
        const u64 m = Ops::to_u64(s_->ops.m);
        u64 idx = 0;
        for (unsigned i = k(); i-- > 0;) idx = idx * m + Ops::to_u64(z.coeffs[i]);
        return idx;
    }

    Element element_at(u64 idx) const {
        const u64 m = Ops::to_u64(s_->ops.m);
        Element z = zero();
        for (unsigned i = 0; i < k(); ++i) {
            z.coeffs[i] = s_->ops.from_u64(idx % m);
            idx /= m;
        }
        return z;
    }

    /// Total order used for sorting and tie-breaking (by index).
    bool less(const Element& a, const Element& b) const {
        for (unsigned i = k(); i-- > 0;)
            if (a.coeffs[i] != b.coeffs[i]) return a.coeffs[i] < b.coeffs[i];
        return false;
    }

    auto enumerate_ring() const {
        const BasicGaloisRing r = *this;
        return std::views::iota(u64{0}, size_u64()) | std::views::transform([r](u64 i) { return r.element_at(i); });
    }

    auto enumerate_units() const {
        const BasicGaloisRing r = *this;
        return enumerate_ring() | std::views::filter([r](const Element& z) { return r.is_unit(z); });
    }

    /// The ideal (p^i), 0 <= i <= e, of size p^{(e-i)k}.
    auto enumerate_ideal(unsigned i) const {
        if (i > e()) fail(ErrorCode::IndexOutOfRange, "ideal index must be at most e");
        const auto count = checked_pow(p(), (e() - i) * k());
        if (!count) fail(ErrorCode::RingTooLarge, "ideal too large to enumerate");
        const BasicGaloisRing r = *this;
        const u64 radix = *checked_pow(p(), e() - i);
        const u64 step = *checked_pow(p(), i);
        return std::views::iota(u64{0}, *count) | std::views::transform([r, radix, step](u64 idx) {
                   Element z = r.zero();
                   for (unsigned j = 0; j < r.k(); ++j) {
                       z.coeffs[j] = r.ops().from_u64((idx % radix) * step);
                       idx /= radix;
                   }
                   return z;
               });
    }

    /// The layer [p^i] = (p^i) \ (p^{i+1}), 0 <= i < e.
    auto enumerate_layer(unsigned i) const {
        if (i >= e()) fail(ErrorCode::IndexOutOfRange, "layer index must be below e");
        const BasicGaloisRing r = *this;
        return enumerate_ideal(i) | std::views::filter([r, i](const Element& z) { return r.valuation(z) == i; });
    }

    mpz_class ideal_size(unsigned i) const {
        if (i > e()) fail(ErrorCode::IndexOutOfRange, "ideal index must be at most e");
        return big_pow(p(), static_cast<unsigned long>(e() - i) * k());
    }
    mpz_class layer_size(unsigned i) const {
        if (i >= e()) fail(ErrorCode::IndexOutOfRange, "layer index must be below e");
        return ideal_size(i) - ideal_size(i + 1);
    }

private:
    explicit BasicGaloisRing(std::shared_ptr<const detail::RingState<Coeff>> s) : s_(std::move(s)) {}

    static polymod::Poly mod_p(const std::vector<Coeff>& poly, u64 p) {
        polymod::Poly out;
        for (const auto& c : poly) out.push_back(Ops::to_u64(Ops::mod_small(c, Coeff(static_cast<unsigned long>(p)))));
        return out;
    }

    static std::vector<Coeff> default_polynomial(u64 p, unsigned k, const Ops& ops) {
        for (u64 code = 0;; ++code) {
            polymod::Poly f(k + 1, 0);
            u64 c = code;
            for (unsigned i = 0; i < k; ++i) {
                f[i] = c % p;
                c /= p;
            }
            if (c != 0) fail(ErrorCode::InternalError, "no irreducible polynomial found");
            f[k] = 1;
            if (polymod::irreducible_rabin(f, p)) {
                std::vector<Coeff> out;
                for (u64 v : f) out.push_back(ops.from_u64(v));
                return out;
            }
        }
    }

    static std::shared_ptr<const detail::RingState<Coeff>> build(u64 p, unsigned e, unsigned k, const std::vector<Coeff>& f) {
        auto s = std::make_shared<detail::RingState<Coeff>>();
        s->params = Params{p, e, k, f};
        s->ops = Ops::make(p, e);
        for (auto& c : s->params.f) c = s->ops.from_mpz(Ops::to_big(c));
        s->tag = detail::fnv1a(s->params.descriptor());
        s->size = checked_pow(p, e * k);
        if (e > 1) {
            const Ops lower_ops = Ops::make(p, e - 1);
            std::vector<Coeff> lower_f;
            for (const auto& c : s->params.f) lower_f.push_back(lower_ops.from_mpz(Ops::to_big(c)));
            s->lower = build(p, e - 1, k, lower_f);
        }
        // Tables are filled through a view of the partially built state; the
        // accessors used below fall back to table-free paths while empty.
        const BasicGaloisRing view(s);
        const auto q = checked_pow(p, k);
        if (q && *q <= kTeichmullerTableCap) {
            std::vector<Element> table(*q);
            for (u64 code = 0; code < *q; ++code) {
                Element r = view.zero();
                u64 c = code;
                for (unsigned i = 0; i < k; ++i) {
                    r.coeffs[i] = s->ops.from_u64(c % p);
                    c /= p;
                }
                table[code] = view.lift_by_iteration(r);
            }
            s->teich_table = std::move(table);
        }
        std::vector<Coeff> basis;
        Element xj = view.one();
        const BasicGaloisRing with_table(s);
        for (unsigned j = 0; j < k; ++j) {
            basis.push_back(with_table.trace(xj));
            xj = with_table.mul(xj, with_table.generator_raw());
        }
        s->trace_basis = std::move(basis);
        return s;
    }

    Element generator_raw() const {
        Element z = zero();
        if (k() == 1) {
            z.coeffs[0] = s_->ops.neg(s_->params.f[0]);
        } else {
            z.coeffs[1] = s_->ops.one();
        }
        return z;
    }

    u64 residue_mod_p(const Coeff& c) const { return Ops::to_u64(Ops::mod_small(c, Coeff(static_cast<unsigned long>(p())))); }

    u64 residue_code(const Element& z) const {
        u64 code = 0;
        for (unsigned i = k(); i-- > 0;) code = code * p() + residue_mod_p(z.coeffs[i]);
        return code;
    }

    Element pow_p_k(Element x) const {
        for (unsigned j = 0; j < k(); ++j) x = pow(x, p());
        return x;
    }

    /// Lift of z mod p iterated through x -> x^(p^k) e - 1 times.
    Element lift_by_iteration(const Element& z) const {
        Element x = zero();
        for (unsigned i = 0; i < k(); ++i) x.coeffs[i] = s_->ops.from_u64(residue_mod_p(z.coeffs[i]));
        for (unsigned it = 1; it < e(); ++it) x = pow_p_k(x);
        return x;
    }

    std::vector<Coeff> mul_raw(const std::vector<Coeff>& a, const std::vector<Coeff>& b) const {
        const unsigned kk = k();
        const auto& ops = s_->ops;
        std::vector<Coeff> r(2 * kk - 1, ops.zero());
        for (unsigned i = 0; i < kk; ++i) {
            if (a[i] == 0) continue;
            for (unsigned j = 0; j < kk; ++j) r[i + j] = ops.add(r[i + j], ops.mul(a[i], b[j]));
        }
        const auto& f = s_->params.f;
        for (unsigned deg = 2 * kk - 1; deg-- > kk;) {
            const Coeff c = r[deg];
            if (c == 0) continue;
            for (unsigned j = 0; j < kk; ++j) r[deg - kk + j] = ops.sub(r[deg - kk + j], ops.mul(c, f[j]));
            r[deg] = ops.zero();
        }
        r.resize(kk);
        return r;
    }

    std::shared_ptr<const detail::RingState<Coeff>> s_;
};

using GaloisRing = BasicGaloisRing<u64>;
using BigGaloisRing = BasicGaloisRing<mpz_class>;
using Element = BasicElement<u64>;
using RingParams = BasicRingParams<u64>;
using PadicDigits = BasicPadicDigits<u64>;
using TeichmullerSet = BasicTeichmullerSet<u64>;

inline GaloisRing make_ring(u64 p, unsigned e, unsigned k, std::optional<std::vector<u64>> f = std::nullopt) {
    return GaloisRing::make(p, e, k, std::move(f));
}

}  // namespace galring

#endif  // GALRING_RING_HPP
