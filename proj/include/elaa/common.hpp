// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------

#ifndef ELAA_COMMON_HPP
#define ELAA_COMMON_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace elaa {

/// Raised for malformed configuration text or violated scenario invariants.
/// The message names the offending field or constraint.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for numerical failures at run time (degenerate data, singular systems, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn10 = std::numbers::ln10;

// dB helpers. Power quantities use 10*log10, amplitudes 20*log10.
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double power_to_db(double p) { return 10.0 * std::log10(p); }

/// E[10^(X/10)] for X ~ Normal(0, sigma_db^2): the mean power gain of dB-normal shadowing.
inline double lognormal_db_power_mean(double sigma_db)
{
    const double s = sigma_db * kLn10 / 10.0;
    return std::exp(0.5 * s * s);
}

inline double wavelength_from_frequency(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

} // namespace elaa

#endif
