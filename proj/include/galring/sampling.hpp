#ifndef GALRING_SAMPLING_HPP
#define GALRING_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "config_count.hpp"
#include "error.hpp"
#include "ring.hpp"

namespace galring {

/// Seeded 64-bit generator. Bounded draws use rejection so that results do
/// not depend on the standard library's distribution implementations.
class Rng {
public:
    static constexpr std::string_view kName = "mt19937_64";

    explicit Rng(u64 seed) : gen_(seed) {}

    /// Stream keyed by several integers, e.g. (seed, size, sample index).
    Rng(std::initializer_list<u64> key) {
        std::vector<std::uint32_t> words;
        for (u64 v : key) {
            words.push_back(static_cast<std::uint32_t>(v));
            words.push_back(static_cast<std::uint32_t>(v >> 32));
        }
        std::seed_seq seq(words.begin(), words.end());
        gen_.seed(seq);
    }

    u64 next() { return gen_(); }

    /// Uniform in [0, n), n > 0.
    u64 below(u64 n) {
        if (n == 0) fail(ErrorCode::InternalError, "empty range");
        const u64 limit = ~u64{0} - (~u64{0} % n);  // multiples of n below 2^64 - 1
        u64 r;
        do r = gen_();
        while (r >= limit);
        return r % n;
    }

private:
    std::mt19937_64 gen_;
};

/// `count` distinct indices from [0, total) by a partial Fisher-Yates shuffle
/// kept sparse, so only touched positions are stored.
inline std::vector<u64> sample_indices(u64 total, u64 count, Rng& rng) {
    if (count > total) fail(ErrorCode::InfeasibleSampling, "requested more points than the space holds");
    std::unordered_map<u64, u64> swapped;
    auto at = [&](u64 i) {
        const auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    std::vector<u64> out;
    out.reserve(count);
    for (u64 i = 0; i < count; ++i) {
        const u64 j = i + rng.below(total - i);
        const u64 vi = at(i), vj = at(j);
        swapped[j] = vi;
        swapped[i] = vj;
        out.push_back(vj);
    }
    return out;
}

inline Element random_element(const GaloisRing& ring, Rng& rng) {
    std::vector<u64> coeffs(ring.k());
    for (auto& c : coeffs) c = rng.below(ring.modulus());
    return ring.element(std::move(coeffs));
}

inline Vec random_point(const GaloisRing& ring, unsigned d, Rng& rng) {
    Vec pt;
    for (unsigned i = 0; i < d; ++i) pt.push_back(random_element(ring, rng));
    return pt;
}

enum class SamplingMethod { IndexShuffle, Rejection };

inline std::string_view to_string(SamplingMethod m) {
    return m == SamplingMethod::IndexShuffle ? "fisher-yates" : "rejection";
}

/// Space size |R|^d when it fits in 64 bits.
inline std::optional<u64> space_size(const GaloisRing& ring, unsigned d) {
    const auto n = ring.size();
    if (!n) return std::nullopt;
    return checked_pow(*n, d);
}

/// Uniform random subset of R^d of the given size. Indexed shuffling when
/// R^d is enumerable, otherwise independent point draws with deduplication.
inline PointSet sample_subset(const GaloisRing& ring, unsigned d, u64 size, Rng& rng, SamplingMethod* used = nullptr) {
    PointSet E(ring, d);
    const auto total = space_size(ring, d);
    if (total) {
        if (used) *used = SamplingMethod::IndexShuffle;
        for (u64 idx : sample_indices(*total, size, rng)) E.insert(E.point_at(idx));
        return E;
    }
    if (used) *used = SamplingMethod::Rejection;
    while (E.size() < size) E.insert(random_point(ring, d, rng));
    return E;
}

}  // namespace galring

#endif  // GALRING_SAMPLING_HPP
