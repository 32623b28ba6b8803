#include "hopscatter/core/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "hopscatter/core/angles.hpp"

namespace hopscatter::core {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::string_view label, std::uint64_t stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, &seed, sizeof(seed));
    h = fnv1a(h, label.data(), label.size());
    h = fnv1a(h, &stream, sizeof(stream));
    key_ = mix64(h);
}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

double CounterRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double CounterRng::normal(double mean, double sigma) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(kTwoPi * u2);
}

std::uint64_t CounterRng::bounded(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("CounterRng::bounded: n must be positive");
    }
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = next_u64();
    while (v >= limit) {
        v = next_u64();
    }
    return v % n;
}

}  // namespace hopscatter::core
