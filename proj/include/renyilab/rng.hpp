#pragma once

#include <complex>
#include <cstdint>
#include <cmath>

namespace renyi {

// Counter-based splittable generator. A stream is (key, counter); `split`
// derives an independent child key from (key, index), so campaigns can hand
// stream i to trial i and replay any trial from (seed, i) alone.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    SplitRng split(std::uint64_t index) const {
        SplitRng child(0);
        child.key_ = mix(key_ ^ mix(index + 0x632be59bd9b4e019ull));
        child.counter_ = 0;
        return child;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + (++counter_) * 0x9e3779b97f4a7c15ull;
        return mix(z);
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform_open() { // (0, 1)
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    double gaussian() {
        double u = uniform_open();
        double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
    }

    std::complex<double> complex_gaussian() {
        double u = uniform_open();
        double v = uniform();
        double r = std::sqrt(-std::log(u));
        return {r * std::cos(6.283185307179586476925286766559 * v),
                r * std::sin(6.283185307179586476925286766559 * v)};
    }

    double exponential() { return -std::log(uniform_open()); }

    std::uint64_t key() const { return key_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace renyi
