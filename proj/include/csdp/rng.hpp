#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace csdp {

// Philox4x32-10 (Salmon et al. 2011, Random123 constants).
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
        const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed of trial `trial` in grid cell `cell` of a sweep rooted at seed0.
inline std::uint64_t trial_seed(std::uint64_t seed0, std::uint64_t cell, std::uint64_t trial) {
    return splitmix64(splitmix64(splitmix64(seed0) ^ cell) ^ (trial * 0xD1B54A32D192ED03ull));
}

// One independent stream per (seed, stream id). The 128-bit counter is
// (block index, stream id); the key is the seed.
class Stream {
public:
    explicit Stream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, stream_(stream_id) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // [0, 1) with 53 random bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1), never 0, safe for log.
    double uniform_open() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= limit) return x % bound;
        }
    }

private:
    void refill() {
        buf_ = philox4x32_10({std::uint32_t(block_), std::uint32_t(block_ >> 32),
                              std::uint32_t(stream_), std::uint32_t(stream_ >> 32)},
                             key_);
        ++block_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace csdp
