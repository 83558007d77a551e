#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace mshit {

/// SplitMix64 finalizer; used to expand seeds, never as a stream itself.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Random stream (xoshiro256**). Every replica of every estimator owns one,
/// keyed by (seed, tag, replica index), so results never depend on how
/// replicas are scheduled across threads.
class Stream
{
public:
    explicit constexpr Stream(std::uint64_t key) noexcept
    {
        std::uint64_t sm = key;
        for (auto& w : s_)
            w = splitmix64(sm);
    }

    constexpr std::uint64_t next() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    constexpr double open_uniform() noexcept
    {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unit-rate exponential, strictly positive.
    double exponential() noexcept { return -std::log(open_uniform()); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
};

/// Well-known stream tags. Generator paths and MSP paths never share draws.
namespace tags {
inline constexpr std::string_view generator = "generator";
inline constexpr std::string_view msp = "msp";
}  // namespace tags

inline std::uint64_t stream_key(std::uint64_t seed, std::string_view tag, std::uint64_t replica) noexcept
{
    std::uint64_t sm = seed ^ fnv1a(tag);
    const std::uint64_t a = splitmix64(sm);
    std::uint64_t sm2 = a ^ (replica * 0xD1B54A32D192ED03ULL);
    return splitmix64(sm2);
}

inline Stream replica_stream(std::uint64_t seed, std::string_view tag, std::uint64_t replica) noexcept
{
    return Stream{stream_key(seed, tag, replica)};
}

}  // namespace mshit
