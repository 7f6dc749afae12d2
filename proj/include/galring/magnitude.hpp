#ifndef GALRING_MAGNITUDE_HPP
#define GALRING_MAGNITUDE_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "error.hpp"
#include "modular.hpp"

namespace galring {

/// RAII wrapper over an MPFR value.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

/// One summand sqrt(radicand) * p^{half_exp / 2}. Radicands are kept free of
/// factors of p so that equal terms compare equal.
struct MagnitudeTerm {
    mpq_class radicand;
    long long half_exp = 0;

    bool operator==(const MagnitudeTerm& o) const { return radicand == o.radicand && half_exp == o.half_exp; }
};

enum class Order { Less, Equal, Greater };

struct Comparison {
    Order order = Order::Equal;
    bool exact = false;          // decided by exact rational arithmetic
    mpfr_prec_t precision = 0;   // working precision used when not exact
};

/// Nonnegative finite sums of sqrt(r) p^{x/2}, r rational, x integer.
/// Single terms compare exactly by squaring; sums compare through directed
/// rounding enclosures that widen until they separate.
class Magnitude {
public:
    Magnitude() = default;
    explicit Magnitude(u64 p) : p_(p) {}

    /// sqrt(r) * p^{x/2}
    static Magnitude radical(u64 p, const mpq_class& r, long long half_exp = 0) {
        if (r < 0) fail(ErrorCode::InternalError, "negative radicand");
        Magnitude m(p);
        m.push(MagnitudeTerm{r, half_exp});
        return m;
    }

    static Magnitude rational(u64 p, const mpq_class& c) {
        if (c < 0) fail(ErrorCode::InternalError, "negative magnitude");
        return radical(p, c * c, 0);
    }

    static Magnitude integer(u64 p, const mpz_class& n) { return rational(p, mpq_class(n)); }

    /// p^{x/2}
    static Magnitude power(u64 p, long long half_exp) { return radical(p, 1, half_exp); }

    u64 base() const { return p_; }
    const std::vector<MagnitudeTerm>& terms() const { return terms_; }
    bool single_term() const { return terms_.size() <= 1; }
    bool is_zero() const { return terms_.empty(); }

    Magnitude operator+(const Magnitude& o) const {
        same(o);
        Magnitude r = *this;
        for (const auto& t : o.terms_) r.push(t);
        return r;
    }

    Magnitude operator*(const Magnitude& o) const {
        same(o);
        Magnitude r(p_);
        for (const auto& a : terms_)
            for (const auto& b : o.terms_) r.push(MagnitudeTerm{a.radicand * b.radicand, a.half_exp + b.half_exp});
        return r;
    }

    /// Multiply by a nonnegative rational.
    Magnitude scaled(const mpq_class& c) const { return *this * rational(p_, c); }

    /// Squared value of a single term, exactly.
    static mpq_class square(u64 p, const MagnitudeTerm& t) {
        mpq_class q = t.radicand;
        const mpz_class pp = big_pow(p, static_cast<unsigned long>(t.half_exp < 0 ? -t.half_exp : t.half_exp));
        if (t.half_exp >= 0) q *= pp;
        else q /= pp;
        q.canonicalize();
        return q;
    }

    /// Lower and upper bounds at the given precision, written into lo and hi.
    void enclose(mpfr_ptr lo, mpfr_ptr hi) const {
        const mpfr_prec_t prec = mpfr_get_prec(lo);
        mpfr_set_zero(lo, 1);
        mpfr_set_zero(hi, 1);
        Mpfr tmp(prec);
        for (const auto& t : terms_) {
            const mpq_class q = square(p_, t);
            mpfr_set_q(tmp.get(), q.get_mpq_t(), MPFR_RNDD);
            mpfr_sqrt(tmp.get(), tmp.get(), MPFR_RNDD);
            mpfr_add(lo, lo, tmp.get(), MPFR_RNDD);
            mpfr_set_q(tmp.get(), q.get_mpq_t(), MPFR_RNDU);
            mpfr_sqrt(tmp.get(), tmp.get(), MPFR_RNDU);
            mpfr_add(hi, hi, tmp.get(), MPFR_RNDU);
        }
    }

    /// log_p of the value (reporting only); -inf for zero.
    double log_p(mpfr_prec_t prec = 256) const {
        Mpfr lo(prec), hi(prec), lp(prec);
        enclose(lo.get(), hi.get());
        mpfr_log(lo.get(), lo.get(), MPFR_RNDN);
        mpfr_set_ui(lp.get(), static_cast<unsigned long>(p_), MPFR_RNDN);
        mpfr_log(lp.get(), lp.get(), MPFR_RNDN);
        mpfr_div(lo.get(), lo.get(), lp.get(), MPFR_RNDN);
        return mpfr_get_d(lo.get(), MPFR_RNDN);
    }

    double to_double() const {
        Mpfr lo(128), hi(128);
        enclose(lo.get(), hi.get());
        return mpfr_get_d(lo.get(), MPFR_RNDN);
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i) out += " + ";
            out += "sqrt(" + terms_[i].radicand.get_str() + ")*" + std::to_string(p_) + "^(" +
                   std::to_string(terms_[i].half_exp) + "/2)";
        }
        return out;
    }

private:
    void same(const Magnitude& o) const {
        if (p_ != o.p_ && !terms_.empty() && !o.terms_.empty()) fail(ErrorCode::RingMismatch, "magnitudes over different bases");
    }

    void push(MagnitudeTerm t) {
        if (t.radicand == 0) return;
        t.radicand.canonicalize();
        const mpz_class pz = to_mpz(p_);
        mpz_class num = t.radicand.get_num(), den = t.radicand.get_den();
        while (mpz_divisible_p(num.get_mpz_t(), pz.get_mpz_t())) {
            num /= pz;
            ++t.half_exp;
        }
        while (mpz_divisible_p(den.get_mpz_t(), pz.get_mpz_t())) {
            den /= pz;
            --t.half_exp;
        }
        t.radicand = mpq_class(num, den);
        t.radicand.canonicalize();
        for (auto& u : terms_) {
            if (u.radicand == t.radicand && u.half_exp == t.half_exp) {
                u.radicand *= 4;  // sqrt(r) + sqrt(r) = sqrt(4r)
                return;
            }
        }
        terms_.push_back(std::move(t));
    }

    u64 p_ = 2;
    std::vector<MagnitudeTerm> terms_;
};

/// Default precision ceiling for certified comparisons, in bits.
inline constexpr mpfr_prec_t kDefaultPrecisionCap = 256;

inline Comparison compare(const Magnitude& a, const Magnitude& b, mpfr_prec_t cap = kDefaultPrecisionCap) {
    // cancel identical summands first
    std::vector<MagnitudeTerm> lhs = a.terms(), rhs = b.terms();
    for (auto it = lhs.begin(); it != lhs.end();) {
        auto jt = std::find(rhs.begin(), rhs.end(), *it);
        if (jt != rhs.end()) {
            rhs.erase(jt);
            it = lhs.erase(it);
        } else {
            ++it;
        }
    }
    const u64 p = a.is_zero() ? b.base() : a.base();
    if (lhs.size() <= 1 && rhs.size() <= 1) {
        const mpq_class l = lhs.empty() ? mpq_class(0) : Magnitude::square(p, lhs[0]);
        const mpq_class r = rhs.empty() ? mpq_class(0) : Magnitude::square(p, rhs[0]);
        return Comparison{l < r ? Order::Less : (l > r ? Order::Greater : Order::Equal), true, 0};
    }
    Magnitude A(p), B(p);
    for (const auto& t : lhs) A = A + Magnitude::radical(p, t.radicand, t.half_exp);
    for (const auto& t : rhs) B = B + Magnitude::radical(p, t.radicand, t.half_exp);
    for (mpfr_prec_t prec = 64; prec <= cap; prec *= 2) {
        Mpfr alo(prec), ahi(prec), blo(prec), bhi(prec);
        A.enclose(alo.get(), ahi.get());
        B.enclose(blo.get(), bhi.get());
        if (mpfr_less_p(ahi.get(), blo.get())) return Comparison{Order::Less, false, prec};
        if (mpfr_greater_p(alo.get(), bhi.get())) return Comparison{Order::Greater, false, prec};
    }
    fail(ErrorCode::PrecisionCapExceeded, "enclosures still overlap at " + std::to_string(cap) + " bits");
}

inline bool less_equal(const Magnitude& a, const Magnitude& b, mpfr_prec_t cap = kDefaultPrecisionCap) {
    return compare(a, b, cap).order != Order::Greater;
}

inline Magnitude max(const Magnitude& a, const Magnitude& b, mpfr_prec_t cap = kDefaultPrecisionCap) {
    return compare(a, b, cap).order == Order::Less ? b : a;
}

}  // namespace galring

#endif  // GALRING_MAGNITUDE_HPP
