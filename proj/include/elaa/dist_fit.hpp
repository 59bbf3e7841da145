// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// Maximum-likelihood fits of capacity samples to Gaussian, Weibull and skew-normal
// families, the ECDF residual Theta, and per-parameter linear regression over SNR.

#ifndef ELAA_DIST_FIT_HPP
#define ELAA_DIST_FIT_HPP

#include "elaa/capacity.hpp"
#include "elaa/common.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace elaa {

enum class Family { Gaussian, Weibull, SkewNormal };

inline const char* to_string(Family f)
{
    switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::Weibull: return "weibull";
    case Family::SkewNormal: return "skew_normal";
    }
    return "?";
}

inline Family family_from_string(const std::string& s)
{
    if (s == "gaussian") return Family::Gaussian;
    if (s == "weibull") return Family::Weibull;
    if (s == "skew_normal") return Family::SkewNormal;
    throw ConfigError("unknown distribution family '" + s + "'");
}

inline constexpr std::array<Family, 3> kAllFamilies = {Family::SkewNormal, Family::Gaussian, Family::Weibull};

inline std::size_t parameter_count(Family f) { return f == Family::SkewNormal ? 3 : 2; }

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

inline double log_normal_pdf(double z) { return -0.5 * z * z - 0.5 * std::log(2.0 * kPi); }

/// log Phi(z), accurate in the far lower tail.
inline double log_normal_cdf(double z)
{
    if (z > -30.0)
        return std::log(normal_cdf(z));
    // Mills-ratio asymptotic: Phi(z) ~ phi(z) / -z * (1 - 1/z^2 + 3/z^4)
    const double z2 = z * z;
    return log_normal_pdf(z) - std::log(-z) + std::log1p(-1.0 / z2 + 3.0 / (z2 * z2));
}

namespace detail {

/// (1 / 2 pi) * integral_0^a exp(-h^2 (1 + x^2) / 2) / (1 + x^2) dx for 0 <= a <= 1.
inline double owens_t_quadrature(double h, double a)
{
    if (a == 0.0)
        return 0.0;
    const double hh = 0.5 * h * h;
    const auto f = [hh](double x) {
        const double w = 1.0 + x * x;
        return std::exp(-hh * w) / w;
    };
    return boost::math::quadrature::gauss<double, 64>::integrate(f, 0.0, a) / (2.0 * kPi);
}

} // namespace detail

/// Owen's T function. Gauss-Legendre quadrature on |a| <= 1; for |a| > 1 the
/// reflection T(h, a) = Q(h)/2 + Q(ah)/2 - Q(h) Q(ah) - T(ah, 1/a) with Q = 1 - Phi (h >= 0).
inline double owens_t(double h, double a)
{
    if (a < 0.0)
        return -owens_t(h, -a);
    h = std::abs(h);
    if (a <= 1.0)
        return detail::owens_t_quadrature(h, a);
    if (std::isinf(a))
        return 0.5 * normal_sf(h);
    const double ah = a * h;
    const double qh = normal_sf(h);
    const double qa = normal_sf(ah);
    return 0.5 * qh + 0.5 * qa - qh * qa - detail::owens_t_quadrature(ah, 1.0 / a);
}

inline void check_theta(Family f, std::span<const double> t)
{
    if (t.size() != parameter_count(f))
        throw ConfigError(std::string(to_string(f)) + ": expected " + std::to_string(parameter_count(f)) + " parameters");
    for (double v : t)
        if (!std::isfinite(v))
            throw ConfigError(std::string(to_string(f)) + ": non-finite parameter");
    if (f == Family::Weibull && !(t[0] > 0.0 && t[1] > 0.0))
        throw ConfigError("weibull: scale and shape must be positive");
    if (f != Family::Weibull && !(t[1] > 0.0))
        throw ConfigError(std::string(to_string(f)) + ": scale must be positive");
}

/// CDF of a family. Gaussian (mean, sd); Weibull (scale, shape); skew normal
/// (location, scale, shape).
inline double cdf(Family f, std::span<const double> t, double x)
{
    check_theta(f, t);
    switch (f) {
    case Family::Gaussian: return normal_cdf((x - t[0]) / t[1]);
    case Family::Weibull: return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / t[0], t[1]));
    case Family::SkewNormal: {
        const double z = (x - t[0]) / t[1];
        return std::clamp(normal_cdf(z) - 2.0 * owens_t(z, t[2]), 0.0, 1.0);
    }
    }
    return 0.0;
}

inline double log_pdf(Family f, std::span<const double> t, double x)
{
    switch (f) {
    case Family::Gaussian: return log_normal_pdf((x - t[0]) / t[1]) - std::log(t[1]);
    case Family::Weibull: {
        if (x <= 0.0)
            return -std::numeric_limits<double>::infinity();
        const double k = t[1], lam = t[0];
        return std::log(k / lam) + (k - 1.0) * std::log(x / lam) - std::pow(x / lam, k);
    }
    case Family::SkewNormal: {
        const double z = (x - t[0]) / t[1];
        return std::numbers::ln2 - std::log(t[1]) + log_normal_pdf(z) + log_normal_cdf(t[2] * z);
    }
    }
    return 0.0;
}

inline double negative_log_likelihood(Family f, std::span<const double> t, std::span<const double> x)
{
    check_theta(f, t);
    double s = 0.0;
    for (double v : x)
        s -= log_pdf(f, t, v);
    return s;
}

struct FitResult {
    Family family = Family::Gaussian;
    std::vector<double> theta;
    double theta_err = 0.0;
    double nll = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
};

/// sqrt(sum_t (ECDF(x_t) - F(x_t))^2) over all samples.
template <class Cdf>
double residual_theta(Cdf&& model_cdf, std::span<const double> samples)
{
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double T = static_cast<double>(s.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i])
            ++j;
        const double e = static_cast<double>(j) / T - model_cdf(s[i]);
        acc += static_cast<double>(j - i) * e * e;
        i = j;
    }
    return std::sqrt(acc);
}

inline double residual_theta(Family f, std::span<const double> theta, std::span<const double> samples)
{
    return residual_theta([&](double x) { return cdf(f, theta, x); }, samples);
}

inline FitResult fit_gaussian(std::span<const double> x)
{
    const auto st = ensemble_stats(x);
    if (!(st.stddev > 0.0))
        throw NumericError("gaussian fit: degenerate data (zero variance)");
    FitResult r;
    r.family = Family::Gaussian;
    r.theta = {st.mean, st.stddev};
    return r;
}

inline FitResult fit_weibull(std::span<const double> x)
{
    if (x.empty())
        throw NumericError("weibull fit: empty sample set");
    double xmax = 0.0;
    for (double v : x) {
        if (!(v > 0.0))
            throw NumericError("weibull fit: samples must be positive");
        xmax = std::max(xmax, v);
    }
    const double n = static_cast<double>(x.size());
    std::vector<double> ly(x.size());
    double mean_ly = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ly[i] = std::log(x[i] / xmax);
        mean_ly += ly[i];
    }
    mean_ly /= n;
    bool all_equal = std::all_of(ly.begin(), ly.end(), [&](double v) { return v == ly[0]; });
    if (all_equal)
        throw NumericError("weibull fit: degenerate data (all samples equal)");
    // Profile score in the shape k; increasing in k, with y = x / xmax in (0, 1].
    const auto score = [&](double k) {
        double s0 = 0.0, s1 = 0.0;
        for (double l : ly) {
            const double w = std::exp(k * l);
            s0 += w;
            s1 += w * l;
        }
        return s1 / s0 - 1.0 / k - mean_ly;
    };
    double lo = 1e-3, hi = 1.0;
    while (score(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e8)
            throw NumericError("weibull fit: shape bracket not found");
    }
    while (score(lo) > 0.0)
        lo *= 0.5;
    std::uintmax_t iters = 200;
    const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-10 * std::max(1.0, std::abs(a)); };
    const auto [a, b] = boost::math::tools::toms748_solve(score, lo, hi, tol, iters);
    const double k = 0.5 * (a + b);
    double s0 = 0.0;
    for (double l : ly)
        s0 += std::exp(k * l);
    FitResult r;
    r.family = Family::Weibull;
    r.theta = {xmax * std::pow(s0 / n, 1.0 / k), k};
    r.iterations = static_cast<std::size_t>(iters);
    r.converged = iters < 200;
    return r;
}

struct SimplexOptions {
    double size_tol = 1e-8;
    std::size_t max_iterations = 2000;
};

namespace detail {

struct SnData {
    const std::vector<double>* z;
};

inline double sn_objective(const gsl_vector* v, void* params)
{
    const auto& z = *static_cast<SnData*>(params)->z;
    const double loc = gsl_vector_get(v, 0);
    const double log_scale = gsl_vector_get(v, 1);
    const double shape = gsl_vector_get(v, 2);
    if (!std::isfinite(loc) || !std::isfinite(log_scale) || !std::isfinite(shape) || std::abs(log_scale) > 50.0)
        return std::numeric_limits<double>::max();
    const double scale = std::exp(log_scale);
    // Neumaier summation keeps the objective smooth down to the simplex tolerance.
    double s = 0.0, comp = 0.0;
    for (double x : z) {
        const double u = (x - loc) / scale;
        const double term = -(log_normal_pdf(u) + log_normal_cdf(shape * u));
        const double t = s + term;
        comp += std::abs(s) >= std::abs(term) ? (s - t) + term : (term - t) + s;
        s = t;
    }
    return s + comp + static_cast<double>(z.size()) * (log_scale - std::numbers::ln2);
}

} // namespace detail

/// Skew-normal MLE by Nelder-Mead on (location, log scale, shape) of standardized
/// data, started from method-of-moments estimates.
inline FitResult fit_skew_normal(std::span<const double> x, const SimplexOptions& opt = {})
{
    const auto st = ensemble_stats(x);
    if (!(st.stddev > 0.0))
        throw NumericError("skew-normal fit: degenerate data (zero variance)");
    std::vector<double> z(x.size());
    double m3 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        z[i] = (x[i] - st.mean) / st.stddev;
        m3 += z[i] * z[i] * z[i];
    }
    const double g1 = std::clamp(m3 / static_cast<double>(x.size()), -0.99, 0.99);

    const double ag = std::pow(std::abs(g1), 2.0 / 3.0);
    const double abs_delta = std::sqrt(0.5 * kPi * ag / (ag + std::pow(0.5 * (4.0 - kPi), 2.0 / 3.0)));
    const double delta = std::copysign(std::min(abs_delta, 0.995), g1);
    const double omega = 1.0 / std::sqrt(1.0 - 2.0 * delta * delta / kPi);
    const double xi = -omega * delta * std::sqrt(2.0 / kPi);
    const double alpha = delta / std::sqrt(1.0 - delta * delta);

    gsl_error_handler_t* old = gsl_set_error_handler_off();
    detail::SnData data{&z};
    gsl_multimin_function fn{&detail::sn_objective, 3, &data};
    gsl_vector* start = gsl_vector_alloc(3);
    gsl_vector* step = gsl_vector_alloc(3);
    gsl_vector_set(start, 0, xi);
    gsl_vector_set(start, 1, std::log(omega));
    gsl_vector_set(start, 2, alpha);

    std::size_t total = 0;
    bool converged = false;
    // Restart from the best vertex until a restart converges without moving.
    for (int round = 0; round < 4 && total < opt.max_iterations; ++round) {
        gsl_vector_set(step, 0, 0.2);
        gsl_vector_set(step, 1, 0.2);
        gsl_vector_set(step, 2, 0.5);
        gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3);
        gsl_multimin_fminimizer_set(s, &fn, start, step);
        bool ok = false;
        double best = detail::sn_objective(start, &data);
        std::size_t stalled = 0;
        while (total < opt.max_iterations) {
            ++total;
            if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS)
                break;
            const double size = gsl_multimin_fminimizer_size(s);
            if (gsl_multimin_test_size(size, opt.size_tol) == GSL_SUCCESS) {
                ok = true;
                break;
            }
            // Below 1e3 * tol the NLL can sit at its rounding floor; a long run without
            // any decrease of the best vertex counts as converged.
            const double f = gsl_multimin_fminimizer_minimum(s);
            stalled = f < best ? 0 : stalled + 1;
            best = std::min(best, f);
            if (size < 1e3 * opt.size_tol && stalled >= 100) {
                ok = true;
                break;
            }
        }
        double moved = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            moved = std::max(moved, std::abs(gsl_vector_get(s->x, i) - gsl_vector_get(start, i)));
        gsl_vector_memcpy(start, s->x);
        gsl_multimin_fminimizer_free(s);
        converged = ok;
        if (ok && round > 0 && moved < 1e-6)
            break;
    }
    FitResult r;
    r.family = Family::SkewNormal;
    r.theta = {st.mean + st.stddev * gsl_vector_get(start, 0), st.stddev * std::exp(gsl_vector_get(start, 1)),
               gsl_vector_get(start, 2)};
    r.iterations = total;
    r.converged = converged;
    gsl_vector_free(start);
    gsl_vector_free(step);
    gsl_set_error_handler(old);
    return r;
}

/// MLE fit followed by NLL and Theta on the same samples.
inline FitResult mle_fit(Family f, std::span<const double> x)
{
    if (x.size() < 10)
        throw NumericError(std::string(to_string(f)) + " fit: need at least 10 samples");
    FitResult r;
    switch (f) {
    case Family::Gaussian: r = fit_gaussian(x); break;
    case Family::Weibull: r = fit_weibull(x); break;
    case Family::SkewNormal: r = fit_skew_normal(x); break;
    }
    r.nll = negative_log_likelihood(f, r.theta, x);
    r.theta_err = residual_theta(f, r.theta, x);
    return r;
}

struct LinearFit {
    double a = 0.0; // slope
    double c = 0.0; // intercept
};

/// Ordinary least squares y = a x + c.
inline LinearFit regress_linear(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw NumericError("regress_linear: need at least two (x, y) points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw NumericError("regress_linear: all abscissae are equal");
    LinearFit f;
    f.a = sxy / sxx;
    f.c = my - f.a * mx;
    return f;
}

/// One fitted family across an SNR grid, regressed parameter by parameter.
/// The abscissa is the SNR in dB.
struct RegressionResult {
    Family family = Family::Gaussian;
    std::vector<LinearFit> params;
    std::vector<double> gamma_db;
    std::vector<double> fit_theta_err;        // direct fit, per grid point
    std::vector<double> regression_theta_err; // regression-predicted parameters, per grid point

    std::vector<double> predict(double g_db) const
    {
        std::vector<double> t;
        for (const auto& p : params)
            t.push_back(p.a * g_db + p.c);
        return t;
    }

    double mean_regression_theta_err() const
    {
        double s = 0.0;
        for (double v : regression_theta_err)
            s += v;
        return regression_theta_err.empty() ? 0.0 : s / static_cast<double>(regression_theta_err.size());
    }
};

/// Regresses the per-SNR fits of one family and scores the predicted CDFs against
/// the samples of each grid point. Invalid predicted parameters score +infinity.
inline RegressionResult regress_family(Family f, std::span<const double> gamma_db, const std::vector<FitResult>& fits,
                                       const std::vector<std::vector<double>>& samples)
{
    RegressionResult r;
    r.family = f;
    r.gamma_db.assign(gamma_db.begin(), gamma_db.end());
    for (std::size_t k = 0; k < parameter_count(f); ++k) {
        std::vector<double> y;
        for (const auto& fr : fits)
            y.push_back(fr.theta[k]);
        r.params.push_back(regress_linear(gamma_db, y));
    }
    for (std::size_t i = 0; i < gamma_db.size(); ++i) {
        r.fit_theta_err.push_back(fits[i].theta_err);
        const auto t = r.predict(gamma_db[i]);
        try {
            check_theta(f, t);
            r.regression_theta_err.push_back(residual_theta(f, t, samples[i]));
        } catch (const ConfigError&) {
            r.regression_theta_err.push_back(std::numeric_limits<double>::infinity());
        }
    }
    return r;
}

inline nlohmann::json fit_record(const std::string& scenario_id, double gamma_db, const FitResult& r)
{
    return {{"scenario_id", scenario_id}, {"gamma_db", gamma_db},  {"family", to_string(r.family)},
            {"theta", r.theta},          {"theta_err", r.theta_err}, {"nll", r.nll},
            {"converged", r.converged}};
}

inline nlohmann::json regression_records(const std::string& scenario_id, const RegressionResult& r)
{
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t k = 0; k < r.params.size(); ++k)
        out.push_back({{"scenario_id", scenario_id},
                       {"family", to_string(r.family)},
                       {"param_index", k},
                       {"a", r.params[k].a},
                       {"c", r.params[k].c},
                       {"theta_err", r.mean_regression_theta_err()}});
    return out;
}

} // namespace elaa

#endif
