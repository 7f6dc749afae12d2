#ifndef GALRING_CYCLOTOMIC_HPP
#define GALRING_CYCLOTOMIC_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "modular.hpp"

namespace galring {

/// An element of Z[zeta] for zeta = exp(2 pi i / p^e), stored in the integral
/// basis 1, zeta, ..., zeta^{phi(p^e) - 1}. Values are always canonical, so
/// equality is coefficient equality.
class CyclotomicSum {
public:
    CyclotomicSum() = default;

    /// From raw counts: counts[j] is the multiplicity of zeta^j, j < p^e.
    static CyclotomicSum from_counts(u64 p, unsigned e, std::vector<std::int64_t> counts) {
        CyclotomicSum s(p, e);
        if (counts.size() > s.modulus_) fail(ErrorCode::DimensionMismatch, "more exponent classes than p^e");
        counts.resize(s.modulus_, 0);
        s.coeffs_ = reduce(p, s.modulus_, std::move(counts));
        return s;
    }

    static CyclotomicSum integer(u64 p, unsigned e, std::int64_t v) {
        CyclotomicSum s(p, e);
        s.coeffs_.assign(s.phi(), 0);
        s.coeffs_[0] = v;
        return s;
    }

    static CyclotomicSum root(u64 p, unsigned e, u64 exponent) {
        CyclotomicSum s(p, e);
        std::vector<std::int64_t> raw(s.modulus_, 0);
        raw[exponent % s.modulus_] = 1;
        s.coeffs_ = reduce(p, s.modulus_, std::move(raw));
        return s;
    }

    u64 p() const { return p_; }
    unsigned e() const { return e_; }
    u64 modulus() const { return modulus_; }
    const std::vector<std::int64_t>& coefficients() const { return coeffs_; }

    bool operator==(const CyclotomicSum&) const = default;

    CyclotomicSum operator+(const CyclotomicSum& o) const {
        same(o);
        CyclotomicSum r = *this;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] += o.coeffs_[i];
        return r;
    }
    CyclotomicSum operator-() const {
        CyclotomicSum r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    CyclotomicSum operator-(const CyclotomicSum& o) const { return *this + (-o); }
    CyclotomicSum operator*(std::int64_t c) const {
        CyclotomicSum r = *this;
        for (auto& x : r.coeffs_) x *= c;
        return r;
    }

    CyclotomicSum operator*(const CyclotomicSum& o) const {
        same(o);
        std::vector<std::int64_t> raw(modulus_, 0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j) raw[(i + j) % modulus_] += coeffs_[i] * o.coeffs_[j];
        }
        CyclotomicSum r(p_, e_);
        r.coeffs_ = reduce(p_, modulus_, std::move(raw));
        return r;
    }

    /// Complex conjugate: zeta^j -> zeta^{-j}.
    CyclotomicSum conj() const {
        std::vector<std::int64_t> raw(modulus_, 0);
        for (std::size_t j = 0; j < coeffs_.size(); ++j) raw[(modulus_ - j) % modulus_] += coeffs_[j];
        CyclotomicSum r(p_, e_);
        r.coeffs_ = reduce(p_, modulus_, std::move(raw));
        return r;
    }

    CyclotomicSum abs_squared() const { return *this * conj(); }

    bool is_integer() const {
        for (std::size_t j = 1; j < coeffs_.size(); ++j)
            if (coeffs_[j] != 0) return false;
        return true;
    }

    std::optional<std::int64_t> to_integer() const {
        if (!is_integer()) return std::nullopt;
        return coeffs_.empty() ? 0 : coeffs_[0];
    }

    /// Floating rendering for reports only.
    std::complex<double> to_complex() const {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j] == 0) continue;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(modulus_);
            acc += static_cast<double>(coeffs_[j]) * std::polar(1.0, angle);
        }
        return acc;
    }

    /// `mod=8; [0:4, 3:-1]` listing nonzero canonical coefficients.
    std::string to_string() const {
        std::string out = "mod=" + std::to_string(modulus_) + "; [";
        bool first = true;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j] == 0) continue;
            if (!first) out += ", ";
            out += std::to_string(j) + ":" + std::to_string(coeffs_[j]);
            first = false;
        }
        return out + "]";
    }

    /// `re,im` rounded to 12 places.
    std::string complex_string() const {
        const auto z = to_complex();
        auto fmt = [](double v) {
            if (std::abs(v) < 5e-13) v = 0.0;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12f", v);
            return std::string(buf);
        };
        return fmt(z.real()) + "," + fmt(z.imag());
    }

private:
    CyclotomicSum(u64 p, unsigned e) : p_(p), e_(e) {
        const auto m = checked_pow(p, e);
        if (!m || *m > (u64{1} << 26)) fail(ErrorCode::CapExceeded, "cyclotomic modulus too large");
        modulus_ = *m;
    }

    std::size_t phi() const { return static_cast<std::size_t>(modulus_ - modulus_ / p_); }

    void same(const CyclotomicSum& o) const {
        if (p_ != o.p_ || e_ != o.e_) fail(ErrorCode::RingMismatch, "cyclotomic moduli differ");
    }

    /// zeta^{phi + s} = -sum_{r=0}^{p-2} zeta^{s + r p^{e-1}}, whose targets all
    /// lie below phi, so one pass reaches the canonical form.
    static std::vector<std::int64_t> reduce(u64 p, u64 modulus, std::vector<std::int64_t> raw) {
        const u64 block = modulus / p;
        const u64 phi = modulus - block;
        for (u64 j = phi; j < modulus; ++j) {
            const std::int64_t c = raw[j];
            if (c == 0) continue;
            const u64 s = j - phi;
            for (u64 r = 0; r + 1 < p; ++r) raw[s + r * block] -= c;
            raw[j] = 0;
        }
        raw.resize(phi);
        return raw;
    }

    u64 p_ = 2;
    unsigned e_ = 1;
    u64 modulus_ = 2;
    std::vector<std::int64_t> coeffs_{0};
};

}  // namespace galring

#endif  // GALRING_CYCLOTOMIC_HPP
