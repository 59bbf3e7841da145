// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------

#ifndef ELAA_RANDOM_HPP
#define ELAA_RANDOM_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <random>

namespace elaa {

/// What a random substream is used for. Part of the stream key, so adding a new
/// draw kind never perturbs the values produced by existing ones.
enum class StreamPurpose : std::uint32_t {
    RuLos = 1,
    NonRuLos = 2,
    ShadowWindows = 3,
    ShadowValues = 4,
    KFactor = 5,
    SmallScale = 6,
    Visibility = 7,
    Symbols = 8,
    Noise = 9,
    LosPhase = 10,
    Test = 100,
};

/// Identifies one deterministic substream: (root seed, trial, entity, purpose).
/// `entity` is a UT index, an RU-place index, or an SNR-point index depending on purpose.
struct StreamKey {
    std::uint64_t root = 0;
    std::uint64_t trial = 0;
    std::uint64_t entity = 0;
    StreamPurpose purpose = StreamPurpose::Test;
};

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace detail

/// 64-bit digest of a stream key. Streams depend only on the key, never on which
/// worker thread draws them.
inline constexpr std::uint64_t stream_digest(const StreamKey& key)
{
    std::uint64_t h = detail::splitmix64(key.root);
    h = detail::splitmix64(h ^ key.trial);
    h = detail::splitmix64(h ^ key.entity);
    h = detail::splitmix64(h ^ static_cast<std::uint64_t>(key.purpose));
    return h;
}

using Engine = std::mt19937_64;

inline Engine make_engine(const StreamKey& key)
{
    const std::uint64_t d = stream_digest(key);
    const std::uint64_t e = detail::splitmix64(d);
    std::seed_seq seq{static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32),
                      static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(e >> 32)};
    return Engine(seq);
}

/// Uniform draw on [0, 1).
template <class Rng>
double uniform01(Rng& rng)
{
    return std::generate_canonical<double, 53>(rng);
}

/// Circularly-symmetric complex Gaussian with unit variance, CN(0, 1).
template <class Rng>
std::complex<double> complex_normal(Rng& rng, std::normal_distribution<double>& normal)
{
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    const double re = normal(rng);
    const double im = normal(rng);
    return {re * kInvSqrt2, im * kInvSqrt2};
}

} // namespace elaa

#endif
