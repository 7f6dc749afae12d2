#ifndef GALRING_MODULAR_HPP
#define GALRING_MODULAR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"

namespace galring {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Deterministic Miller-Rabin; the base set is exact for all 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// p^n, or nullopt when it does not fit in 64 bits.
inline std::optional<u64> checked_pow(u64 p, unsigned n) {
    u128 acc = 1;
    for (unsigned i = 0; i < n; ++i) {
        acc *= p;
        if (acc > static_cast<u128>(~u64{0})) return std::nullopt;
    }
    return static_cast<u64>(acc);
}

inline mpz_class big_pow(u64 p, unsigned long n) {
    mpz_class r;
    mpz_class base(std::to_string(p));
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), n);
    return r;
}

inline mpz_class to_mpz(u64 v) { return mpz_class(std::to_string(v)); }

inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 q = 2; q <= n / q; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Residue arithmetic modulo p^e. The native specialisation keeps the modulus
// below 2^63 so that sums never wrap; products go through 128 bits.
template <class Coeff>
struct ModOps;

template <>
struct ModOps<u64> {
    u64 m = 1;

    static ModOps make(u64 p, unsigned e) {
        auto m = checked_pow(p, e);
        if (!m || *m >= (u64{1} << 63)) fail(ErrorCode::RingTooLarge, "p^e does not fit a native residue");
        return ModOps{*m};
    }
    u64 zero() const { return 0; }
    u64 one() const { return 1 % m; }
    u64 from_u64(u64 v) const { return v % m; }
    u64 from_mpz(const mpz_class& v) const {
        mpz_class r = v % to_mpz(m);
        if (r < 0) r += to_mpz(m);
        return std::stoull(r.get_str());
    }
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= m ? s - m : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (m - b); }
    u64 neg(u64 a) const { return a == 0 ? 0 : m - a; }
    u64 mul(u64 a, u64 b) const { return mulmod(a, b, m); }
    static bool divisible(u64 a, u64 p) { return a % p == 0; }
    static u64 div_exact(u64 a, u64 p) { return a / p; }
    static u64 mod_small(u64 a, u64 q) { return a % q; }
    static u64 to_u64(u64 a) { return a; }
    static std::string str(u64 a) { return std::to_string(a); }
    static mpz_class to_big(u64 a) { return to_mpz(a); }
};

template <>
struct ModOps<mpz_class> {
    mpz_class m = 1;

    static ModOps make(u64 p, unsigned e) { return ModOps{big_pow(p, e)}; }
    mpz_class zero() const { return 0; }
    mpz_class one() const { return m == 1 ? mpz_class(0) : mpz_class(1); }
    mpz_class from_u64(u64 v) const { return from_mpz(to_mpz(v)); }
    mpz_class from_mpz(const mpz_class& v) const {
        mpz_class r = v % m;
        if (r < 0) r += m;
        return r;
    }
    mpz_class add(const mpz_class& a, const mpz_class& b) const {
        mpz_class s = a + b;
        if (s >= m) s -= m;
        return s;
    }
    mpz_class sub(const mpz_class& a, const mpz_class& b) const {
        mpz_class s = a - b;
        if (s < 0) s += m;
        return s;
    }
    mpz_class neg(const mpz_class& a) const { return a == 0 ? mpz_class(0) : mpz_class(m - a); }
    mpz_class mul(const mpz_class& a, const mpz_class& b) const { return mpz_class(a * b % m); }
    static bool divisible(const mpz_class& a, u64 p) { return mpz_divisible_p(a.get_mpz_t(), to_mpz(p).get_mpz_t()); }
    static mpz_class div_exact(const mpz_class& a, u64 p) { return mpz_class(a / to_mpz(p)); }
    static mpz_class mod_small(const mpz_class& a, const mpz_class& q) { return mpz_class(a % q); }
    static u64 to_u64(const mpz_class& a) { return std::stoull(a.get_str()); }
    static std::string str(const mpz_class& a) { return a.get_str(); }
    static mpz_class to_big(const mpz_class& a) { return a; }
};

namespace polymod {

// Dense polynomials over F_p, constant-first. Trailing zeros are trimmed.
using Poly = std::vector<u64>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly sub(Poly a, const Poly& b, u64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

inline Poly mul(const Poly& a, const Poly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    trim(r);
    return r;
}

/// Remainder of a modulo b (b nonzero).
inline Poly rem(Poly a, const Poly& b, u64 p) {
    trim(a);
    const u64 lead_inv = powmod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
        const u64 c = mulmod(a.back(), lead_inv, p);
        const std::size_t shift = a.size() - b.size();
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + p - mulmod(c, b[j], p)) % p;
        trim(a);
    }
    return a;
}

inline Poly gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const u64 inv = powmod(a.back(), p - 2, p);
        for (auto& c : a) c = mulmod(c, inv, p);
    }
    return a;
}

inline Poly powmod(Poly base, u64 exp, const Poly& f, u64 p) {
    Poly result{1};
    base = rem(base, f, p);
    while (exp) {
        if (exp & 1) result = rem(mul(result, base, p), f, p);
        base = rem(mul(base, base, p), f, p);
        exp >>= 1;
    }
    return result;
}

/// Returns (g, s) with s*a == g (mod f) and g = gcd(a, f) monic.
inline std::pair<Poly, Poly> inverse_mod(const Poly& a, const Poly& f, u64 p) {
    Poly r0 = f, r1 = rem(a, f, p);
    Poly s0{}, s1{1};
    while (!r1.empty()) {
        // quotient of r0 by r1
        Poly q, r = r0;
        const u64 lead_inv = ::galring::powmod(r1.back(), p - 2, p);
        if (r.size() >= r1.size()) q.assign(r.size() - r1.size() + 1, 0);
        while (r.size() >= r1.size() && !r.empty()) {
            const u64 c = mulmod(r.back(), lead_inv, p);
            const std::size_t shift = r.size() - r1.size();
            q[shift] = c;
            for (std::size_t j = 0; j < r1.size(); ++j) r[shift + j] = (r[shift + j] + p - mulmod(c, r1[j], p)) % p;
            trim(r);
        }
        trim(q);
        Poly s2 = sub(s0, mul(q, s1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    const u64 inv = ::galring::powmod(r0.back(), p - 2, p);
    for (auto& c : r0) c = mulmod(c, inv, p);
    for (auto& c : s0) c = mulmod(c, inv, p);
    return {r0, rem(s0, f, p)};
}

/// Rabin's test: f of degree k is irreducible over F_p iff x^(p^k) = x mod f
/// and gcd(x^(p^(k/q)) - x, f) = 1 for every prime q | k.
inline bool irreducible_rabin(Poly f, u64 p) {
    trim(f);
    if (f.size() < 2) return false;
    const std::size_t k = f.size() - 1;
    if (k == 1) return true;
    auto frob_iter = [&](std::size_t times) {
        Poly x{0, 1};
        for (std::size_t i = 0; i < times; ++i) x = powmod(x, p, f, p);
        return x;
    };
    const Poly x{0, 1};
    if (sub(frob_iter(k), x, p) != Poly{}) return false;
    for (u64 q : prime_factors(k)) {
        Poly g = gcd(f, sub(frob_iter(k / q), x, p), p);
        if (g.size() != 1) return false;
    }
    return true;
}

/// Trial division by every monic polynomial of degree 1..k/2; feasible only
/// for small p^(k/2).
inline bool irreducible_trial(Poly f, u64 p) {
    trim(f);
    if (f.size() < 2) return false;
    const std::size_t k = f.size() - 1;
    for (std::size_t deg = 1; deg <= k / 2; ++deg) {
        const auto count = checked_pow(p, static_cast<unsigned>(deg));
        if (!count) fail(ErrorCode::CapExceeded, "trial division space too large");
        for (u64 code = 0; code < *count; ++code) {
            Poly g(deg + 1, 0);
            u64 c = code;
            for (std::size_t i = 0; i < deg; ++i) {
                g[i] = c % p;
                c /= p;
            }
            g[deg] = 1;
            if (rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace polymod

}  // namespace galring

#endif  // GALRING_MODULAR_HPP
