// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// Channel synthesis. H[m, n] = eps * Htilde, where Htilde is Rician for LoS links and
// Rayleigh for NLoS links, eps is the shadow amplitude of the window that antenna m
// falls in, and the LoS state comes from the RU field or the mixed non-RU field.
// Baselines: i.i.d. Rayleigh, i.n.d. Rayleigh and a visibility-region model.

#ifndef ELAA_CHANNEL_HPP
#define ELAA_CHANNEL_HPP

#include "elaa/common.hpp"
#include "elaa/los_field.hpp"
#include "elaa/random.hpp"
#include "elaa/scenario.hpp"
#include "elaa/sobe.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace elaa {

using cplx = std::complex<double>;

inline cplx nlos_gain(double d, cplx delta, const PropagationParams& p)
{
    if (!(d > 0.0))
        throw ConfigError("nlos_gain: distance must be positive");
    return std::sqrt(p.rho_nlos / std::pow(d, p.alpha_nlos)) * delta;
}

inline cplx los_phase(double d, double wavelength) { return std::polar(1.0, -2.0 * kPi * d / wavelength); }

inline cplx los_gain(double d, cplx delta, double kappa, double wavelength, const PropagationParams& p)
{
    if (!(d > 0.0))
        throw ConfigError("los_gain: distance must be positive");
    const double a = std::sqrt(p.rho_los / std::pow(d, p.alpha_los));
    return a * (std::sqrt(kappa / (kappa + 1.0)) * los_phase(d, wavelength) + std::sqrt(1.0 / (kappa + 1.0)) * delta);
}

/// One channel realization. `normalization` has already been applied to H.
struct ChannelMatrix {
    Eigen::MatrixXcd H;
    double normalization = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    ChannelKind kind = ChannelKind::Proposed;
};

/// Per-link draws of one realization, captured on request.
struct LinkDraws {
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> beta; // M x N
    Eigen::MatrixXd eps;                                              // M x N, linear amplitude
    Eigen::MatrixXcd delta;                                           // M x N
    Eigen::MatrixXcd phase;                                           // M x N
    std::vector<double> kappa;                                        // per column
    std::vector<LosVector> ut_states;                                 // per UT
    std::vector<WindowSegmentation> ut_windows;                       // per UT
    std::vector<std::size_t> visible_count;                           // per UT, visibility-region kind only
};

/// Second moment E[eps^2] of the shadow amplitude under the configured convention.
inline double shadow_second_moment(double sigma_db, const ChannelOptions& o)
{
    if (o.paper_literal_moments)
        return std::exp(0.5 * sigma_db * sigma_db);
    if (o.shadowing == ShadowingConvention::MeanUnity)
        return 1.0;
    return lognormal_db_power_mean(sigma_db);
}

class ChannelSynthesizer {
public:
    explicit ChannelSynthesizer(ScenarioConfig s) : s_(std::move(s))
    {
        validate(s_);
        dist_ = compute_distances(s_);
        const auto M = static_cast<Eigen::Index>(s_.ula.antenna_count);
        const auto N = static_cast<Eigen::Index>(s_.layout.total_antennas());
        const auto& p = s_.propagation;
        amp_los_.resize(M, N);
        amp_nlos_.resize(M, N);
        phase_.resize(M, N);
        for (Eigen::Index n = 0; n < N; ++n)
            for (Eigen::Index m = 0; m < M; ++m) {
                const double d = dist_.link(m, n);
                amp_los_(m, n) = std::sqrt(p.rho_los / std::pow(d, p.alpha_los));
                amp_nlos_(m, n) = std::sqrt(p.rho_nlos / std::pow(d, p.alpha_nlos));
                phase_(m, n) = los_phase(d, s_.ula.wavelength);
            }
        const auto& places = s_.layout.ru_places;
        place_distance_.resize(places.size());
        for (std::size_t j = 0; j < places.size(); ++j) {
            place_distance_[j].resize(s_.ula.antenna_count);
            for (std::size_t m = 0; m < s_.ula.antenna_count; ++m)
                place_distance_[j][m] = std::hypot(s_.ula.antenna_x(m) - places[j], s_.layout.d_perp);
        }
        weights_.resize(s_.layout.ut_count());
        for (std::size_t u = 0; u < s_.layout.ut_count(); ++u)
            if (!s_.layout.place_of(u))
                weights_[u] = place_weights(s_.layout.users[u].x, places, s_.channel.paper_literal_weights);
        normalization_ = compute_normalization();
    }

    const ScenarioConfig& scenario() const { return s_; }
    const DistanceTable& distances() const { return dist_; }
    double normalization() const { return normalization_; }
    std::size_t rows() const { return s_.ula.antenna_count; }
    std::size_t cols() const { return s_.layout.total_antennas(); }

    /// Expected E||H||^2 before normalization.
    double expected_power() const { return expected_power_; }

    ChannelMatrix synthesize(std::uint64_t root_seed, std::uint64_t trial, LinkDraws* draws = nullptr) const
    {
        ChannelMatrix out;
        out.seed = root_seed;
        out.trial = trial;
        out.kind = s_.channel.kind;
        out.normalization = normalization_;
        out.H.resize(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols()));
        if (draws)
            prepare_draws(*draws);
        switch (s_.channel.kind) {
        case ChannelKind::Proposed: fill_proposed(out.H, root_seed, trial, draws); break;
        case ChannelKind::IidRayleigh: fill_rayleigh(out.H, root_seed, trial, false, draws); break;
        case ChannelKind::IndRayleigh: fill_rayleigh(out.H, root_seed, trial, true, draws); break;
        case ChannelKind::VisibilityRegion: fill_visibility(out.H, root_seed, trial, draws); break;
        }
        out.H *= normalization_;
        return out;
    }

    /// Per-antenna LoS probability of UT u (marginal at its UT point).
    double los_marginal(std::size_t m, std::size_t u) const
    {
        return los_probability(dist_.ut_distance(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(u)),
                               s_.propagation);
    }

private:
    double compute_normalization()
    {
        const std::size_t M = rows(), N = cols();
        double total = 0.0;
        if (s_.channel.kind == ChannelKind::IidRayleigh) {
            total = static_cast<double>(M * N);
        } else if (s_.channel.kind == ChannelKind::Proposed) {
            const double e_l = shadow_second_moment(s_.propagation.sigma_sf_los_db, s_.channel);
            const double e_n = shadow_second_moment(s_.propagation.sigma_sf_nlos_db, s_.channel);
            for (std::size_t n = 0; n < N; ++n) {
                const std::size_t u = s_.layout.ut_of_column(n);
                for (std::size_t m = 0; m < M; ++m) {
                    const double q = los_marginal(m, u);
                    const double al = amp_los_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
                    const double an = amp_nlos_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
                    total += q * e_l * al * al + (1.0 - q) * e_n * an * an;
                }
            }
        } else {
            total = amp_nlos_.squaredNorm(); // visibility region: full-visibility expectation
        }
        expected_power_ = total;
        return std::sqrt(static_cast<double>(M * N) / total);
    }

    void prepare_draws(LinkDraws& d) const
    {
        const auto M = static_cast<Eigen::Index>(rows());
        const auto N = static_cast<Eigen::Index>(cols());
        d.beta.setZero(M, N);
        d.eps.setOnes(M, N);
        d.delta.setZero(M, N);
        d.phase = phase_;
        d.kappa.assign(cols(), 0.0);
        d.ut_states.clear();
        d.ut_windows.clear();
        d.visible_count.clear();
    }

    double shadow_amplitude(double sigma_db, double z) const
    {
        double eps = db_to_amplitude(sigma_db * z);
        if (s_.channel.shadowing == ShadowingConvention::MeanUnity)
            eps /= std::sqrt(lognormal_db_power_mean(sigma_db));
        return eps;
    }

    void fill_proposed(Eigen::MatrixXcd& H, std::uint64_t seed, std::uint64_t trial, LinkDraws* draws) const
    {
        const std::size_t M = rows();
        const auto& lay = s_.layout;
        const auto& p = s_.propagation;
        const double spacing = s_.ula.spacing;

        RuBasis basis;
        basis.positions = lay.ru_places;
        for (std::size_t j = 0; j < lay.ru_places.size(); ++j) {
            auto rng = make_engine({seed, trial, j, StreamPurpose::RuLos});
            basis.columns.push_back(generate_ru_los(std::span<const double>(place_distance_[j]), spacing, p, rng));
        }

        std::normal_distribution<double> normal;
        for (std::size_t u = 0; u < lay.ut_count(); ++u) {
            LosVector state;
            if (const auto j = lay.place_of(u)) {
                state = basis.columns[*j];
            } else {
                const auto rho = mix_probability(basis, weights_[u]);
                auto rng = make_engine({seed, trial, u, StreamPurpose::NonRuLos});
                state = generate_nonru_los(std::span<const double>(rho), spacing, p, rng);
            }

            auto wrng = make_engine({seed, trial, u, StreamPurpose::ShadowWindows});
            const auto windows = generate_shadow_windows(M, spacing, p.d_sf, wrng);
            auto srng = make_engine({seed, trial, u, StreamPurpose::ShadowValues});
            std::vector<double> eps(M);
            normal.reset();
            for (std::size_t w = 0; w < windows.window_count(); ++w) {
                std::size_t los = 0;
                for (std::size_t m = windows.begin(w); m < windows.end(w); ++m)
                    los += state.state[m];
                const bool majority_los = 2 * los >= windows.length(w);
                const double sigma = majority_los ? p.sigma_sf_los_db : p.sigma_sf_nlos_db;
                const double value = shadow_amplitude(sigma, normal(srng));
                std::fill(eps.begin() + static_cast<std::ptrdiff_t>(windows.begin(w)),
                          eps.begin() + static_cast<std::ptrdiff_t>(windows.end(w)), value);
            }

            auto krng = make_engine({seed, trial, u, StreamPurpose::KFactor});
            normal.reset();
            const double kappa = db_to_power(p.k_mean_db + p.k_std_db * normal(krng));
            const double c_los = std::sqrt(kappa / (kappa + 1.0));
            const double c_dif = std::sqrt(1.0 / (kappa + 1.0));

            auto drng = make_engine({seed, trial, u, StreamPurpose::SmallScale});
            auto prng = make_engine({seed, trial, u, StreamPurpose::LosPhase});
            const bool random_phase = s_.channel.los_phase == LosPhaseModel::UniformRandom;
            normal.reset();
            for (std::size_t i = 0; i < lay.antennas_per_ut; ++i) {
                const auto n = static_cast<Eigen::Index>(u * lay.antennas_per_ut + i);
                for (std::size_t m = 0; m < M; ++m) {
                    const auto mi = static_cast<Eigen::Index>(m);
                    const cplx delta = complex_normal(drng, normal);
                    const cplx phi = random_phase ? std::polar(1.0, 2.0 * kPi * uniform01(prng)) : phase_(mi, n);
                    const cplx g = state.state[m] ? amp_los_(mi, n) * (c_los * phi + c_dif * delta)
                                                  : amp_nlos_(mi, n) * delta;
                    H(mi, n) = eps[m] * g;
                    if (draws) {
                        draws->beta(mi, n) = state.state[m];
                        draws->eps(mi, n) = eps[m];
                        draws->delta(mi, n) = delta;
                        draws->phase(mi, n) = phi;
                    }
                }
                if (draws)
                    draws->kappa[static_cast<std::size_t>(n)] = kappa;
            }
            if (draws) {
                draws->ut_states.push_back(std::move(state));
                draws->ut_windows.push_back(windows);
            }
        }
    }

    void fill_rayleigh(Eigen::MatrixXcd& H, std::uint64_t seed, std::uint64_t trial, bool path_loss,
                       LinkDraws* draws) const
    {
        std::normal_distribution<double> normal;
        const auto& lay = s_.layout;
        for (std::size_t u = 0; u < lay.ut_count(); ++u) {
            auto rng = make_engine({seed, trial, u, StreamPurpose::SmallScale});
            normal.reset();
            for (std::size_t i = 0; i < lay.antennas_per_ut; ++i) {
                const auto n = static_cast<Eigen::Index>(u * lay.antennas_per_ut + i);
                for (Eigen::Index m = 0; m < H.rows(); ++m) {
                    const cplx delta = complex_normal(rng, normal);
                    H(m, n) = path_loss ? amp_nlos_(m, n) * delta : delta;
                    if (draws)
                        draws->delta(m, n) = delta;
                }
            }
        }
    }

    void fill_visibility(Eigen::MatrixXcd& H, std::uint64_t seed, std::uint64_t trial, LinkDraws* draws) const
    {
        fill_rayleigh(H, seed, trial, true, draws);
        const auto& vr = s_.channel.visibility;
        const double lo = s_.ula.antenna_x(0);
        const double hi = s_.ula.antenna_x(rows() - 1);
        const double len = hi - lo;
        const auto& lay = s_.layout;
        for (std::size_t u = 0; u < lay.ut_count(); ++u) {
            auto rng = make_engine({seed, trial, u, StreamPurpose::Visibility});
            std::normal_distribution<double> normal;
            const double L = std::exp(vr.length_log_mean + vr.length_log_std * normal(rng));
            const double v = uniform01(rng);
            std::size_t visible = 0;
            double a = lo, b = hi;
            if (L < len) {
                const double c = lo + 0.5 * L + v * (len - L);
                a = c - 0.5 * L;
                b = c + 0.5 * L;
            }
            for (std::size_t m = 0; m < rows(); ++m) {
                const double x = s_.ula.antenna_x(m);
                const bool seen = x >= a && x <= b;
                visible += seen;
                if (!seen)
                    for (std::size_t i = 0; i < lay.antennas_per_ut; ++i)
                        H(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(u * lay.antennas_per_ut + i)) = 0.0;
            }
            if (draws)
                draws->visible_count.push_back(visible);
        }
    }

    ScenarioConfig s_;
    DistanceTable dist_;
    Eigen::MatrixXd amp_los_, amp_nlos_;
    Eigen::MatrixXcd phase_;
    std::vector<std::vector<double>> place_distance_;
    std::vector<CorrelationWeights> weights_;
    double normalization_ = 1.0;
    double expected_power_ = 0.0;
};

/// Normalization factor sqrt(MN / E||H||^2) of a scenario.
inline double normalization_factor(const ScenarioConfig& s) { return ChannelSynthesizer(s).normalization(); }

inline ChannelMatrix synthesize(const ScenarioConfig& s, std::uint64_t seed, std::uint64_t trial)
{
    return ChannelSynthesizer(s).synthesize(seed, trial);
}

inline ChannelMatrix ind_rayleigh(ScenarioConfig s, std::uint64_t seed, std::uint64_t trial)
{
    s.channel.kind = ChannelKind::IndRayleigh;
    return ChannelSynthesizer(std::move(s)).synthesize(seed, trial);
}

inline ChannelMatrix iid_rayleigh(ScenarioConfig s, std::uint64_t seed, std::uint64_t trial)
{
    s.channel.kind = ChannelKind::IidRayleigh;
    return ChannelSynthesizer(std::move(s)).synthesize(seed, trial);
}

inline ChannelMatrix visibility_region(ScenarioConfig s, const VisibilityParams& vr, std::uint64_t seed,
                                       std::uint64_t trial)
{
    s.channel.kind = ChannelKind::VisibilityRegion;
    s.channel.visibility = vr;
    return ChannelSynthesizer(std::move(s)).synthesize(seed, trial);
}

// Channel dumps. CSV: a '#' header line with M, N, seed, trial, kind and normalization,
// then M rows of 2N values (re, im interleaved over columns). Binary: the 8-byte magic
// "ELAACH01", five little-endian uint64 (M, N, seed, trial, kind), one float64
// normalization, then M*N*2 float64 in the same row-major interleaved order.

inline void write_channel_csv(std::ostream& os, const ChannelMatrix& c)
{
    os << "# M=" << c.H.rows() << ",N=" << c.H.cols() << ",seed=" << c.seed << ",trial=" << c.trial
       << ",kind=" << to_string(c.kind) << ",normalization=" << std::setprecision(17) << c.normalization << '\n';
    os << std::setprecision(17);
    for (Eigen::Index m = 0; m < c.H.rows(); ++m) {
        for (Eigen::Index n = 0; n < c.H.cols(); ++n) {
            if (n) os << ',';
            os << c.H(m, n).real() << ',' << c.H(m, n).imag();
        }
        os << '\n';
    }
}

inline void write_channel_binary(std::ostream& os, const ChannelMatrix& c)
{
    os.write("ELAACH01", 8);
    const std::uint64_t header[5] = {static_cast<std::uint64_t>(c.H.rows()), static_cast<std::uint64_t>(c.H.cols()),
                                     c.seed, c.trial, static_cast<std::uint64_t>(c.kind)};
    os.write(reinterpret_cast<const char*>(header), sizeof header);
    os.write(reinterpret_cast<const char*>(&c.normalization), sizeof c.normalization);
    for (Eigen::Index m = 0; m < c.H.rows(); ++m)
        for (Eigen::Index n = 0; n < c.H.cols(); ++n) {
            const double v[2] = {c.H(m, n).real(), c.H(m, n).imag()};
            os.write(reinterpret_cast<const char*>(v), sizeof v);
        }
}

inline ChannelMatrix read_channel_binary(std::istream& is)
{
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, "ELAACH01", 8) != 0)
        throw NumericError("channel dump: bad magic");
    std::uint64_t header[5];
    ChannelMatrix c;
    if (!is.read(reinterpret_cast<char*>(header), sizeof header) ||
        !is.read(reinterpret_cast<char*>(&c.normalization), sizeof c.normalization))
        throw NumericError("channel dump: truncated header");
    c.seed = header[2];
    c.trial = header[3];
    c.kind = static_cast<ChannelKind>(header[4]);
    c.H.resize(static_cast<Eigen::Index>(header[0]), static_cast<Eigen::Index>(header[1]));
    for (Eigen::Index m = 0; m < c.H.rows(); ++m)
        for (Eigen::Index n = 0; n < c.H.cols(); ++n) {
            double v[2];
            if (!is.read(reinterpret_cast<char*>(v), sizeof v))
                throw NumericError("channel dump: truncated payload");
            c.H(m, n) = {v[0], v[1]};
        }
    return c;
}

/// LoS-state raster: header "antenna,ut0,ut1,...", one row per service antenna.
inline void write_state_csv(std::ostream& os, const LinkDraws& d)
{
    os << "antenna";
    for (std::size_t u = 0; u < d.ut_states.size(); ++u)
        os << ",ut" << u;
    os << '\n';
    const std::size_t M = d.ut_states.empty() ? 0 : d.ut_states.front().size();
    for (std::size_t m = 0; m < M; ++m) {
        os << m;
        for (const auto& s : d.ut_states)
            os << ',' << static_cast<int>(s.state[m]);
        os << '\n';
    }
}

/// Received-signal-strength map in dB, 10 log10 |H[m, n]|^2: header "antenna,col0,...".
inline void write_rss_csv(std::ostream& os, const ChannelMatrix& c)
{
    os << "antenna";
    for (Eigen::Index n = 0; n < c.H.cols(); ++n)
        os << ",col" << n;
    os << '\n' << std::setprecision(8);
    for (Eigen::Index m = 0; m < c.H.rows(); ++m) {
        os << m;
        for (Eigen::Index n = 0; n < c.H.cols(); ++n) {
            const double p = std::norm(c.H(m, n));
            os << ',';
            if (p > 0.0)
                os << power_to_db(p);
            else
                os << "-inf";
        }
        os << '\n';
    }
}

} // namespace elaa

#endif
