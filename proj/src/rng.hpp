#pragma once

#include <cstdint>
#include <limits>

namespace bellsim {

/// Finalizer of SplitMix64; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Small SplitMix64 generator. Cheap to construct, so one can be created per
/// emitted pair and per station without any shared state. Satisfies
/// UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit constexpr RandomStream(std::uint64_t state) noexcept : state_(state) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Independent stream for (seed, key, channel). Different keys and channels
/// land at unrelated positions of the generator cycle.
constexpr RandomStream substream(std::uint64_t seed, std::uint64_t key,
                                 std::uint64_t channel = 0) noexcept
{
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ (key * 0xd1b54a32d192ed03ULL));
    h = mix64(h ^ ((channel + 1) * 0x8cb92ba72f3d8dd7ULL));
    return RandomStream(h);
}

} // namespace bellsim
