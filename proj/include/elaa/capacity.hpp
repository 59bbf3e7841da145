// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------

#ifndef ELAA_CAPACITY_HPP
#define ELAA_CAPACITY_HPP

#include "elaa/common.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace elaa {

/// Eigenvalues of the N x N Gram matrix H^H H (ascending, clamped at 0).
inline Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& H)
{
    if (!H.allFinite())
        throw NumericError("capacity: channel matrix has non-finite entries");
    Eigen::MatrixXcd G(H.cols(), H.cols());
    G.setZero();
    G.selfadjointView<Eigen::Lower>().rankUpdate(H.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0);
}

/// log2 det(I + snr / N * diag(eig)).
inline double capacity_from_eigenvalues(const Eigen::VectorXd& eig, double snr, std::size_t N)
{
    const double s = snr / static_cast<double>(N);
    double c = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i)
        c += std::log1p(s * eig(i));
    return c / std::numbers::ln2;
}

/// Capacity in bit/s/Hz, log2 det(I_N + snr / N * H^H H).
inline double capacity(const Eigen::MatrixXcd& H, double snr)
{
    if (!(snr > 0.0))
        throw ConfigError("capacity: SNR must be positive");
    return capacity_from_eigenvalues(gram_eigenvalues(H), snr, static_cast<std::size_t>(H.cols()));
}

/// sigma_max / sigma_min of H. Rank-deficient H gives +infinity (see is_rank_deficient).
inline double condition_number(const Eigen::MatrixXcd& H)
{
    if (H.size() == 0 || H.cwiseAbs().maxCoeff() == 0.0)
        throw NumericError("condition_number: all-zero matrix");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    const double tol = static_cast<double>(std::max(H.rows(), H.cols())) * std::numeric_limits<double>::epsilon() * smax;
    if (smin <= tol)
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

inline bool is_rank_deficient(double cond) { return std::isinf(cond); }

struct TrialMetrics {
    std::size_t trial = 0;
    double gamma_db = 0.0;
    double capacity = 0.0;
    double fro_norm = 0.0;
    double condition_number = 1.0;
};

struct EnsembleStats {
    double mean = 0.0;
    double stddev = 0.0; // population (1/T) standard deviation
};

inline EnsembleStats ensemble_stats(std::span<const double> x)
{
    if (x.empty())
        throw NumericError("ensemble_stats: empty sample set");
    const double T = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= T;
    double ss = 0.0;
    for (double v : x)
        ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / T)};
}

/// Right-continuous step ECDF.
struct EcdfTable {
    std::vector<double> values;        // sorted, distinct
    std::vector<double> probabilities; // F at each value

    double operator()(double x) const
    {
        const auto it = std::upper_bound(values.begin(), values.end(), x);
        if (it == values.begin())
            return 0.0;
        return probabilities[static_cast<std::size_t>(it - values.begin()) - 1];
    }
};

inline EcdfTable ecdf(std::span<const double> samples)
{
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    EcdfTable t;
    const double T = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i + 1 < s.size() && s[i + 1] == s[i])
            continue;
        t.values.push_back(s[i]);
        t.probabilities.push_back(static_cast<double>(i + 1) / T);
    }
    return t;
}

inline TrialMetrics trial_metrics(const Eigen::MatrixXcd& H, double gamma_db, std::size_t trial)
{
    TrialMetrics t;
    t.trial = trial;
    t.gamma_db = gamma_db;
    t.capacity = capacity(H, db_to_power(gamma_db));
    t.fro_norm = H.norm();
    t.condition_number = condition_number(H);
    return t;
}

inline constexpr const char* kTrialCsvHeader = "trial,gamma_db,capacity,fro_norm,cond";

inline void write_trial_row(std::ostream& os, const TrialMetrics& t)
{
    os << t.trial << ',' << t.gamma_db << ',' << t.capacity << ',' << t.fro_norm << ',';
    if (is_rank_deficient(t.condition_number))
        os << "inf";
    else
        os << t.condition_number;
    os << '\n';
}

} // namespace elaa

#endif
