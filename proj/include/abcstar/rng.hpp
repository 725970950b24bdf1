#pragma once

#include <cmath>
#include <cstdint>

namespace abcstar {

/// Seeded 64-bit random stream (PCG64 XSL-RR) with explicit stream
/// selection. Identical (seed, stream_id) pairs reproduce identical draw
/// sequences; distinct stream_ids select provably distinct state
/// sequences, so per-chain streams can run in parallel and merge
/// deterministically.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id) {
        std::uint64_t s = seed ^ 0x5851f42d4c957f2dULL;
        const std::uint64_t hi = splitmix(s);
        const std::uint64_t lo = splitmix(s);
        std::uint64_t t = stream_id ^ 0x14057b7ef767814fULL;
        // low word keeps stream_id*2+1 so distinct streams get distinct
        // (odd) increments
        inc_ = ((static_cast<u128>(splitmix(t)) << 64) |
                (stream_id * 2ULL + 1ULL)) |
               1;
        state_ = 0;
        step();
        state_ += (static_cast<u128>(hi) << 64) | lo;
        step();
    }

    std::uint64_t next_u64() {
        const u128 old = state_;
        step();
        const std::uint64_t xored =
            static_cast<std::uint64_t>(old >> 64) ^ static_cast<std::uint64_t>(old);
        const unsigned rot = static_cast<unsigned>(old >> 122);
        return (xored >> rot) | (xored << ((-rot) & 63u));
    }

    /// Uniform draw on (0,1): 53-bit mantissa, never exactly 0 or 1.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Marsaglia polar, spare value cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

  private:
    using u128 = unsigned __int128;

    static std::uint64_t splitmix(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    void step() {
        constexpr u128 mult =
            (static_cast<u128>(2549297995355413924ULL) << 64) | 4865540595714422341ULL;
        state_ = state_ * mult + inc_;
    }

    u128 state_ = 0;
    u128 inc_ = 0;
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace abcstar
