// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// Correlated LoS/NLoS state fields along the array. A field is built from windows:
// each window starts at an anchor antenna whose state is drawn from its own marginal,
// and later antennas keep the anchor state with probability exp(-separation / d_corr).
// Shadow-window segmentation uses the same mechanism with the shadowing distance.

#ifndef ELAA_LOS_FIELD_HPP
#define ELAA_LOS_FIELD_HPP

#include "elaa/common.hpp"
#include "elaa/random.hpp"
#include "elaa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace elaa {

/// Per-antenna states of one UT (1 = LoS) and the anchor antennas where
/// independent redraws happened. anchors.front() == 0 for a non-empty field.
struct LosVector {
    std::vector<std::uint8_t> state;
    std::vector<std::size_t> anchors;

    std::size_t size() const { return state.size(); }
    std::size_t los_count() const { return static_cast<std::size_t>(std::count(state.begin(), state.end(), 1)); }
};

/// Partition of [0, M) into shadow windows; window w covers [starts[w], starts[w + 1]).
struct WindowSegmentation {
    std::vector<std::size_t> starts;
    std::size_t antenna_count = 0;

    std::size_t window_count() const { return starts.size(); }
    std::size_t begin(std::size_t w) const { return starts[w]; }
    std::size_t end(std::size_t w) const { return w + 1 < starts.size() ? starts[w + 1] : antenna_count; }
    std::size_t length(std::size_t w) const { return end(w) - begin(w); }

    /// Window id of every antenna.
    std::vector<std::size_t> labels() const
    {
        std::vector<std::size_t> out(antenna_count);
        for (std::size_t w = 0; w < window_count(); ++w)
            std::fill(out.begin() + static_cast<std::ptrdiff_t>(begin(w)),
                      out.begin() + static_cast<std::ptrdiff_t>(end(w)), w);
        return out;
    }
};

inline double los_probability(double d2d, const PropagationParams& p)
{
    if (d2d <= p.d1)
        return 1.0;
    const double e = std::exp(-d2d / p.d2);
    return (p.d1 / d2d) * (1.0 - e) + e;
}

inline double same_state_probability(double separation, double d_corr) { return std::exp(-separation / d_corr); }

/// Marginal LoS probability at a second antenna given the marginal at the first
/// and their same-state probability.
inline double marginal_update(double rho, double p_same) { return (2.0 * rho - 1.0) * p_same + 1.0 - rho; }

/// P(L = x) for the number of consecutive antennas sharing one window, with
/// antennas `spacing` apart and correlation distance d_corr.
inline double window_length_pmf_spacing(std::size_t x, double spacing, double d_corr)
{
    if (x == 0)
        return 0.0;
    const double xd = static_cast<double>(x);
    const double c = spacing / (2.0 * d_corr);
    return std::exp(-c * (xd * xd - xd)) - std::exp(-c * (xd * xd + xd));
}

/// Half-wavelength ULA form: exp(-lambda (x^2 - x) / (4 d)) - exp(-lambda (x^2 + x) / (4 d)).
inline double window_length_pmf(std::size_t x, double wavelength, double d_corr)
{
    return window_length_pmf_spacing(x, 0.5 * wavelength, d_corr);
}

/// P(L >= x).
inline double window_length_survival(std::size_t x, double spacing, double d_corr)
{
    if (x <= 1)
        return 1.0;
    const double xd = static_cast<double>(x);
    return std::exp(-spacing / (2.0 * d_corr) * (xd * xd - xd));
}

/// Smallest x_max with P(L > x_max) <= tail, so the PMF over 1..x_max sums to
/// at least 1 - tail.
inline std::size_t window_length_truncation(double spacing, double d_corr, double tail = 1e-12)
{
    const double target = 2.0 * d_corr * std::log(1.0 / tail) / spacing; // need x (x + 1) >= target
    auto x = static_cast<std::size_t>(std::ceil(0.5 * (std::sqrt(1.0 + 4.0 * target) - 1.0)));
    while (window_length_survival(x + 1, spacing, d_corr) > tail)
        ++x;
    return std::max<std::size_t>(x, 1);
}

inline double window_length_mean(double spacing, double d_corr, double tail = 1e-14)
{
    const std::size_t xmax = window_length_truncation(spacing, d_corr, tail);
    double mean = 0.0;
    for (std::size_t x = 1; x <= xmax; ++x)
        mean += window_length_survival(x, spacing, d_corr);
    return mean;
}

namespace detail {

/// keep[k] = exp(-k * spacing / d_corr) for k in [0, n).
inline std::vector<double> keep_table(std::size_t n, double spacing, double d_corr)
{
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k)
        t[k] = std::exp(-static_cast<double>(k) * spacing / d_corr);
    return t;
}

} // namespace detail

/// Window-mechanism sampler over an arbitrary per-antenna marginal. An antenna whose
/// marginal is exactly 0 or 1 cannot carry the opposite state; if the propagated
/// anchor state contradicts such a marginal, the antenna becomes a new anchor.
template <class Rng>
LosVector sample_windowed_states(std::span<const double> marginal, double spacing, double d_corr, Rng& rng)
{
    const std::size_t M = marginal.size();
    LosVector out;
    out.state.resize(M);
    if (M == 0)
        return out;
    const auto draw = [&](double q) -> std::uint8_t { return uniform01(rng) < q ? 1 : 0; };
    const bool infinite = !std::isfinite(d_corr);
    const std::vector<double> keep = infinite ? std::vector<double>{} : detail::keep_table(M, spacing, d_corr);

    std::size_t anchor = 0;
    std::uint8_t current = draw(marginal[0]);
    out.state[0] = current;
    out.anchors.push_back(0);
    for (std::size_t m = 1; m < M; ++m) {
        const double q = marginal[m];
        const bool forced = (q >= 1.0 && current == 0) || (q <= 0.0 && current == 1);
        const bool same = !forced && (infinite || uniform01(rng) < keep[m - anchor]);
        if (!same) {
            anchor = m;
            current = draw(q);
            out.anchors.push_back(m);
        }
        out.state[m] = current;
    }
    return out;
}

/// LoS field of a reference UT (RU); marginals are los_probability of each
/// antenna-to-UT distance.
template <class Rng>
LosVector generate_ru_los(std::span<const double> d2d, double spacing, const PropagationParams& p, Rng& rng)
{
    std::vector<double> q(d2d.size());
    for (std::size_t m = 0; m < d2d.size(); ++m)
        q[m] = los_probability(d2d[m], p);
    return sample_windowed_states(std::span<const double>(q), spacing, p.d_los, rng);
}

/// Shadow windows: anchors placed by the window mechanism with correlation distance d_sf.
template <class Rng>
WindowSegmentation generate_shadow_windows(std::size_t M, double spacing, double d_sf, Rng& rng)
{
    WindowSegmentation seg;
    seg.antenna_count = M;
    if (M == 0)
        return seg;
    seg.starts.push_back(0);
    if (!std::isfinite(d_sf))
        return seg;
    const std::vector<double> keep = detail::keep_table(M, spacing, d_sf);
    std::size_t anchor = 0;
    for (std::size_t m = 1; m < M; ++m) {
        if (!(uniform01(rng) < keep[m - anchor])) {
            anchor = m;
            seg.starts.push_back(m);
        }
    }
    return seg;
}

/// Lengths of the windows that close inside the field (the final, censored window is dropped).
inline std::vector<std::size_t> closed_window_lengths(const std::vector<std::size_t>& anchors)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < anchors.size(); ++i)
        out.push_back(anchors[i] - anchors[i - 1]);
    return out;
}

} // namespace elaa

#endif
