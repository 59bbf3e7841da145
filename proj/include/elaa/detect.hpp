// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// Uncoded detection benchmark: Gray-mapped square QAM, y = H s + v, LMMSE equalization
// and the interference-free MRC bound, swept over SNR.

#ifndef ELAA_DETECT_HPP
#define ELAA_DETECT_HPP

#include "elaa/channel.hpp"
#include "elaa/common.hpp"
#include "elaa/parallel.hpp"
#include "elaa/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace elaa {

class QamModulation {
public:
    explicit QamModulation(std::size_t order) : order_(order)
    {
        if (order != 4 && order != 16 && order != 64)
            throw ConfigError("modulation order must be 4, 16 or 64");
        side_ = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(order))));
        bits_per_axis_ = static_cast<std::size_t>(std::lround(std::log2(static_cast<double>(side_))));
        scale_ = 1.0 / std::sqrt(2.0 * static_cast<double>(order - 1) / 3.0);
    }

    std::size_t order() const { return order_; }
    std::size_t side() const { return side_; }

    /// Symbol index s = i * side + q, i and q the in-phase and quadrature level indices.
    cplx point(std::size_t s) const { return {level(s / side_), level(s % side_)}; }

    /// Gray bit label of symbol s; neighbouring points differ in one bit.
    std::uint32_t label(std::size_t s) const
    {
        const auto gray = [](std::size_t i) { return static_cast<std::uint32_t>(i ^ (i >> 1)); };
        return (gray(s / side_) << bits_per_axis_) | gray(s % side_);
    }

    /// Nearest constellation point index.
    std::size_t slice(cplx x) const { return axis_index(x.real()) * side_ + axis_index(x.imag()); }

private:
    double level(std::size_t i) const
    {
        return scale_ * (2.0 * static_cast<double>(i) - static_cast<double>(side_ - 1));
    }

    std::size_t axis_index(double v) const
    {
        const double t = std::round(0.5 * (v / scale_ + static_cast<double>(side_ - 1)));
        if (t <= 0.0)
            return 0;
        if (t >= static_cast<double>(side_ - 1))
            return side_ - 1;
        return static_cast<std::size_t>(t);
    }

    std::size_t order_, side_, bits_per_axis_;
    double scale_;
};

/// y = H s + v with v ~ CN(0, N / snr I).
template <class Rng>
Eigen::VectorXcd transmit(const Eigen::VectorXcd& s, const Eigen::MatrixXcd& H, double snr, Rng& rng,
                          Eigen::VectorXcd* noise_out = nullptr)
{
    std::normal_distribution<double> normal;
    const double sd = std::isinf(snr) ? 0.0 : std::sqrt(static_cast<double>(H.cols()) / snr);
    Eigen::VectorXcd v(H.rows());
    for (Eigen::Index m = 0; m < H.rows(); ++m)
        v(m) = sd * complex_normal(rng, normal);
    if (noise_out)
        *noise_out = v;
    return H * s + v;
}

/// Regularized linear estimate (H^H H + r I)^-1 H^H y with r = N / snr, or r = snr / N
/// when `literal` is set.
inline Eigen::VectorXcd lmmse_equalize(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& H, double snr,
                                       bool literal = false)
{
    const double N = static_cast<double>(H.cols());
    const double r = literal ? snr / N : (std::isinf(snr) ? 0.0 : N / snr);
    Eigen::MatrixXcd G = H.adjoint() * H;
    G.diagonal().array() += r;
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(G);
    if (ldlt.info() != Eigen::Success || (r == 0.0 && ldlt.vectorD().cwiseAbs().minCoeff() == 0.0))
        throw NumericError("lmmse: singular system");
    return ldlt.solve(H.adjoint() * y);
}

inline std::vector<std::size_t> lmmse_detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& H, double snr,
                                             const QamModulation& mod, bool literal = false)
{
    const Eigen::VectorXcd s = lmmse_equalize(y, H, snr, literal);
    std::vector<std::size_t> out(static_cast<std::size_t>(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i)
        out[static_cast<std::size_t>(i)] = mod.slice(s(i));
    return out;
}

/// Genie MRC on stream n with interference removed: (h^H h s_n + h^H v) / ||h||^2.
inline cplx mrc_bound_equalize(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& s, const Eigen::VectorXcd& v,
                               Eigen::Index n)
{
    const auto h = H.col(n);
    const double e = h.squaredNorm();
    if (!(e > 0.0))
        throw NumericError("mrc bound: zero-norm channel column");
    return (e * s(n) + h.dot(v)) / e;
}

struct DetectionRun {
    ScenarioConfig scenario;
    std::vector<double> gamma_db;
    std::size_t trials = 1000;
    std::size_t vectors_per_trial = 8;
    std::size_t modulation_order = 64;
    std::uint64_t seed = 1;
    bool literal_lmmse = false;
    std::size_t workers = 1;
};

struct SerPoint {
    double gamma_db = 0.0;
    std::string channel_kind;
    std::string detector; // "lmmse" or "mrc_bound"
    std::size_t trials = 0;
    std::uint64_t symbols = 0;
    std::uint64_t symbol_errors = 0;

    double ser() const { return symbols ? static_cast<double>(symbol_errors) / static_cast<double>(symbols) : 0.0; }
};

/// Monte Carlo SER for LMMSE and the MRC bound. Trial t uses channel realization t at
/// every SNR point; symbols and noise come from streams keyed by (trial, point).
inline std::vector<SerPoint> ser_sweep(const DetectionRun& run)
{
    if (run.trials == 0)
        throw ConfigError("ser_sweep: trials must be at least 1");
    if (run.gamma_db.empty())
        throw ConfigError("ser_sweep: empty SNR grid");
    for (std::size_t i = 1; i < run.gamma_db.size(); ++i)
        if (!(run.gamma_db[i] > run.gamma_db[i - 1]))
            throw ConfigError("ser_sweep: SNR grid must be strictly increasing");
    const ChannelSynthesizer synth(run.scenario);
    const QamModulation mod(run.modulation_order);
    const std::size_t P = run.gamma_db.size();
    std::vector<std::uint64_t> err_l(run.trials * P, 0), err_m(run.trials * P, 0);

    parallel_for(run.trials, run.workers, [&](std::size_t t) {
        const auto ch = synth.synthesize(run.seed, t);
        const auto& H = ch.H;
        const auto N = H.cols();
        for (std::size_t p = 0; p < P; ++p) {
            const double snr = db_to_power(run.gamma_db[p]);
            auto srng = make_engine({run.seed, t, p, StreamPurpose::Symbols});
            auto nrng = make_engine({run.seed, t, p, StreamPurpose::Noise});
            std::uniform_int_distribution<std::size_t> pick(0, mod.order() - 1);
            for (std::size_t k = 0; k < run.vectors_per_trial; ++k) {
                std::vector<std::size_t> idx(static_cast<std::size_t>(N));
                Eigen::VectorXcd s(N);
                for (Eigen::Index n = 0; n < N; ++n) {
                    idx[static_cast<std::size_t>(n)] = pick(srng);
                    s(n) = mod.point(idx[static_cast<std::size_t>(n)]);
                }
                Eigen::VectorXcd v;
                const Eigen::VectorXcd y = transmit(s, H, snr, nrng, &v);
                const auto det = lmmse_detect(y, H, snr, mod, run.literal_lmmse);
                for (Eigen::Index n = 0; n < N; ++n) {
                    err_l[t * P + p] += det[static_cast<std::size_t>(n)] != idx[static_cast<std::size_t>(n)];
                    err_m[t * P + p] += mod.slice(mrc_bound_equalize(H, s, v, n)) != idx[static_cast<std::size_t>(n)];
                }
            }
        }
    });

    std::vector<SerPoint> out;
    const std::uint64_t per_point =
        static_cast<std::uint64_t>(run.trials) * run.vectors_per_trial * run.scenario.layout.total_antennas();
    for (const char* det : {"lmmse", "mrc_bound"}) {
        const auto& err = std::string(det) == "lmmse" ? err_l : err_m;
        for (std::size_t p = 0; p < P; ++p) {
            SerPoint sp;
            sp.gamma_db = run.gamma_db[p];
            sp.channel_kind = to_string(run.scenario.channel.kind);
            sp.detector = det;
            sp.trials = run.trials;
            sp.symbols = per_point;
            for (std::size_t t = 0; t < run.trials; ++t)
                sp.symbol_errors += err[t * P + p];
            out.push_back(sp);
        }
    }
    return out;
}

inline constexpr const char* kSerCsvHeader = "gamma_db,channel_kind,detector,trials,symbol_errors,ser";

inline void write_ser_row(std::ostream& os, const SerPoint& p)
{
    os << p.gamma_db << ',' << p.channel_kind << ',' << p.detector << ',' << p.trials << ',' << p.symbol_errors << ','
       << p.ser() << '\n';
}

/// SNR (dB) where the SER curve first falls below `target`, by linear interpolation of
/// log10(SER) between the bracketing grid points. nullopt if the curve never crosses.
inline std::optional<double> ser_crossing(const std::vector<double>& gamma_db, const std::vector<double>& ser,
                                          double target = 1e-3)
{
    for (std::size_t i = 1; i < gamma_db.size(); ++i) {
        if (ser[i - 1] >= target && ser[i] < target) {
            if (ser[i] <= 0.0)
                return gamma_db[i];
            const double l0 = std::log10(ser[i - 1]), l1 = std::log10(ser[i]), lt = std::log10(target);
            return gamma_db[i - 1] + (lt - l0) / (l1 - l0) * (gamma_db[i] - gamma_db[i - 1]);
        }
    }
    return std::nullopt;
}

} // namespace elaa

#endif
