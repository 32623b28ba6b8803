#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace hopscatter::core {

/// Counter-based deterministic random stream keyed by (seed, label, stream).
///
/// Draw i of a stream is a pure function of the key and i, so identical keys
/// reproduce bit-identical sequences regardless of platform or execution
/// order. Streams with distinct labels or stream indices are independent.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::string_view label, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Gaussian draw via Box-Muller; consumes exactly two raw draws.
    double normal(double mean = 0.0, double sigma = 1.0);

    /// Uniform integer in [0, n). n must be > 0. Rejection-sampled, unbiased.
    std::uint64_t bounded(std::uint64_t n);

    /// Deterministic Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace hopscatter::core
