// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// LoS fields for non-reference UTs. Each non-RU mixes the LoS vectors of its two
// flanking RU places into a per-antenna LoS probability, then samples its own field
// with the window mechanism using those probabilities as marginals.

#ifndef ELAA_SOBE_HPP
#define ELAA_SOBE_HPP

#include "elaa/common.hpp"
#include "elaa/los_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace elaa {

/// LoS vectors of all RU places, one column per place.
struct RuBasis {
    std::vector<LosVector> columns;
    std::vector<double> positions; // strictly increasing

    std::size_t place_count() const { return columns.size(); }
    std::size_t antenna_count() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Convex weights over the RU places; at most two are nonzero.
struct CorrelationWeights {
    std::vector<double> zeta;
};

/// Two-RU weights for a UT between ru_left and ru_right. The default gives the closer
/// RU the larger weight; `literal` swaps the orientation.
inline std::pair<double, double> wyner_weights(double ut, double ru_left, double ru_right, bool literal = false)
{
    if (!(ru_left < ru_right))
        throw ConfigError("wyner_weights: ru_left must be strictly below ru_right");
    if (ut < ru_left || ut > ru_right)
        throw ConfigError("wyner_weights: UT at " + std::to_string(ut) + " lies outside [" +
                          std::to_string(ru_left) + ", " + std::to_string(ru_right) + "]");
    const double span = ru_right - ru_left;
    const double to_left = (ut - ru_left) / span;
    const double to_right = (ru_right - ut) / span;
    return literal ? std::pair{to_left, to_right} : std::pair{to_right, to_left};
}

/// Weights of a UT over all RU places: the flanking pair gets wyner_weights, a single
/// place gets weight 1.
inline CorrelationWeights place_weights(double ut, const std::vector<double>& places, bool literal = false)
{
    CorrelationWeights w;
    w.zeta.assign(places.size(), 0.0);
    if (places.empty())
        throw ConfigError("place_weights: no RU places");
    if (places.size() == 1) {
        w.zeta[0] = 1.0;
        return w;
    }
    if (ut < places.front() || ut > places.back())
        throw ConfigError("place_weights: UT at " + std::to_string(ut) + " lies outside the RU-place span");
    std::size_t j = 0;
    while (j + 2 < places.size() && ut > places[j + 1])
        ++j;
    const auto [a, b] = wyner_weights(ut, places[j], places[j + 1], literal);
    w.zeta[j] = a;
    w.zeta[j + 1] = b;
    return w;
}

/// rho_k = B zeta_k, elementwise over antennas.
inline std::vector<double> mix_probability(const RuBasis& basis, const CorrelationWeights& w)
{
    if (w.zeta.size() != basis.place_count())
        throw ConfigError("mix_probability: weight vector has " + std::to_string(w.zeta.size()) +
                          " entries for " + std::to_string(basis.place_count()) + " RU places");
    const std::size_t M = basis.antenna_count();
    std::vector<double> rho(M, 0.0);
    std::vector<std::uint8_t> lo(M, 1), hi(M, 0);
    for (std::size_t j = 0; j < basis.place_count(); ++j) {
        const double z = w.zeta[j];
        if (z == 0.0)
            continue;
        if (basis.columns[j].size() != M)
            throw ConfigError("mix_probability: RU columns differ in length");
        for (std::size_t m = 0; m < M; ++m) {
            const std::uint8_t b = basis.columns[j].state[m];
            rho[m] += z * b;
            lo[m] = std::min(lo[m], b);
            hi[m] = std::max(hi[m], b);
        }
    }
    // Unanimous participating RUs give an exact 0 or 1 regardless of weight rounding.
    for (std::size_t m = 0; m < M; ++m) {
        if (lo[m] == hi[m])
            rho[m] = lo[m];
        else
            rho[m] = std::min(1.0, std::max(0.0, rho[m]));
    }
    return rho;
}

template <class Rng>
LosVector generate_nonru_los(std::span<const double> rho, double spacing, const PropagationParams& p, Rng& rng)
{
    return sample_windowed_states(rho, spacing, p.d_los, rng);
}

} // namespace elaa

#endif
