// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// Reference values were computed offline: skew-normal and Gaussian MLE with scipy,
// Weibull MLE and Owen's T with mpmath at 30 digits.

#include "elaa/dist_fit.hpp"
#include "elaa/random.hpp"

#include <boost/math/special_functions/owens_t.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace elaa;

namespace {

std::vector<double> reference_sample()
{
    std::vector<double> x(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = (static_cast<double>(i) + 0.5) / 500.0;
        x[i] = 190.0 + 8.0 * (u - 0.5) + 5.0 * u * u * u + 2.0 * std::sin(7.0 * static_cast<double>(i));
    }
    return x;
}

std::vector<double> skew_normal_sample(double loc, double scale, double shape, std::size_t n, std::uint64_t seed)
{
    auto rng = make_engine({seed, 0, 0, StreamPurpose::Test});
    std::normal_distribution<double> normal;
    const double d = shape / std::sqrt(1.0 + shape * shape);
    std::vector<double> x(n);
    for (auto& v : x) {
        const double u0 = normal(rng), u1 = normal(rng);
        v = loc + scale * (d * std::abs(u0) + std::sqrt(1.0 - d * d) * u1);
    }
    return x;
}

} // namespace

TEST(OwensT, ReferenceValues)
{
    struct Case {
        double h, a, t;
    };
    const Case cases[] = {
        {0.3, 0.7, 0.092315605730427445458},     {1.5, 2.5, 0.033402648238960321553},
        {-2.0, 0.4, 0.0074296977040216545957},   {3.0, -5.0, -0.00067494901581504726333},
        {0.1, 50.0, 0.2300860809372096116},      {6.0, 0.9, 4.9329380440174618581e-10},
    };
    for (const auto& c : cases)
        EXPECT_NEAR(owens_t(c.h, c.a), c.t, 1e-14 + 1e-12 * std::abs(c.t)) << c.h << ", " << c.a;
}

TEST(OwensT, AnalyticIdentities)
{
    for (double a : {0.1, 0.5, 1.0, 3.0, 20.0})
        EXPECT_NEAR(owens_t(0.0, a), std::atan(a) / (2.0 * kPi), 1e-10);
    for (double h : {-2.0, 0.0, 0.4, 1.7, 5.0})
        EXPECT_NEAR(owens_t(h, 1.0), 0.5 * normal_cdf(h) * normal_sf(h), 1e-10);
    for (double h : {0.0, 0.7, 2.5})
        EXPECT_EQ(owens_t(h, 0.0), 0.0);
}

TEST(OwensT, AgreesWithBoost)
{
    for (double h : {-4.0, -1.0, 0.0, 0.5, 2.0, 7.0})
        for (double a : {-3.0, -0.2, 0.3, 0.99, 1.01, 4.0, 100.0})
            EXPECT_NEAR(owens_t(h, a), boost::math::owens_t(h, a), 1e-14) << h << ", " << a;
}

TEST(Families, SkewNormalReducesToGaussian)
{
    const std::vector<double> sn = {1.5, 2.0, 0.0}, g = {1.5, 2.0};
    for (double x : {-3.0, 0.0, 1.5, 2.2, 9.0}) {
        EXPECT_NEAR(cdf(Family::SkewNormal, sn, x), cdf(Family::Gaussian, g, x), 1e-10);
        EXPECT_NEAR(log_pdf(Family::SkewNormal, sn, x), log_pdf(Family::Gaussian, g, x), 1e-10);
    }
}

TEST(Families, CdfIsConsistentWithPdf)
{
    const std::vector<double> t = {0.5, 1.3, 2.5};
    const double h = 1e-5;
    for (double x : {-1.0, 0.4, 1.0, 3.0}) {
        const double d = (cdf(Family::SkewNormal, t, x + h) - cdf(Family::SkewNormal, t, x - h)) / (2 * h);
        EXPECT_NEAR(d, std::exp(log_pdf(Family::SkewNormal, t, x)), 1e-7);
    }
    const std::vector<double> w = {2.0, 3.0};
    EXPECT_NEAR(cdf(Family::Weibull, w, 2.0), 1.0 - std::exp(-1.0), 1e-15);
    EXPECT_EQ(cdf(Family::Weibull, w, -1.0), 0.0);
}

TEST(Families, LogCdfTail)
{
    EXPECT_NEAR(log_normal_cdf(-1.0), std::log(normal_cdf(-1.0)), 1e-14);
    EXPECT_NEAR(log_normal_cdf(-40.0), -804.60844201375378817, 1e-7);
    EXPECT_TRUE(std::isfinite(log_normal_cdf(-1e3)));
}

TEST(Families, ParameterChecks)
{
    EXPECT_THROW(cdf(Family::Gaussian, std::vector<double>{0.0, -1.0}, 0.0), ConfigError);
    EXPECT_THROW(cdf(Family::Weibull, std::vector<double>{0.0, 1.0}, 1.0), ConfigError);
    EXPECT_THROW(cdf(Family::SkewNormal, std::vector<double>{0.0, 1.0}, 1.0), ConfigError);
    EXPECT_EQ(family_from_string("skew_normal"), Family::SkewNormal);
    EXPECT_THROW(family_from_string("gamma"), ConfigError);
}

TEST(Fits, GaussianReference)
{
    const auto x = reference_sample();
    const auto r = mle_fit(Family::Gaussian, x);
    EXPECT_NEAR(r.theta[0], 191.2496596456071, 1e-10);
    EXPECT_NEAR(r.theta[1], 3.8982964928709802, 1e-10);
}

TEST(Fits, WeibullReference)
{
    const auto x = reference_sample();
    const auto r = mle_fit(Family::Weibull, x);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.theta[0], 193.21295006761191352, 1e-7);
    EXPECT_NEAR(r.theta[1], 49.41498939146594255, 1e-6);
}

TEST(Fits, SkewNormalReference)
{
    const auto x = reference_sample();
    const auto r = mle_fit(Family::SkewNormal, x);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.theta[0], 186.17220829182475, 2e-4);
    EXPECT_NEAR(r.theta[1], 6.4013457851756455, 2e-4);
    EXPECT_NEAR(r.theta[2], 4.233666374712817, 2e-3);
    EXPECT_NEAR(r.nll, 1375.0157664100998, 1e-7);
}

TEST(Fits, SkewNormalRecoversParameters)
{
    const auto x = skew_normal_sample(2.0, 1.5, 3.0, 20000, 42);
    const auto r = fit_skew_normal(x);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.theta[0], 2.0, 0.05);
    EXPECT_NEAR(r.theta[1], 1.5, 0.05);
    EXPECT_NEAR(r.theta[2], 3.0, 0.3);
}

TEST(Fits, SkewNormalBeatsSymmetricFamiliesOnSkewedData)
{
    const auto x = skew_normal_sample(190.0, 6.0, -4.0, 4000, 3);
    const auto sn = mle_fit(Family::SkewNormal, x);
    const auto g = mle_fit(Family::Gaussian, x);
    EXPECT_LT(sn.nll, g.nll);
    EXPECT_LT(sn.theta_err, g.theta_err);
}

TEST(Fits, RejectsDegenerateInput)
{
    const std::vector<double> flat(50, 3.0), few = {1.0, 2.0};
    EXPECT_THROW(mle_fit(Family::Gaussian, flat), NumericError);
    EXPECT_THROW(mle_fit(Family::Weibull, flat), NumericError);
    EXPECT_THROW(mle_fit(Family::SkewNormal, flat), NumericError);
    EXPECT_THROW(mle_fit(Family::Gaussian, few), NumericError);
    std::vector<double> neg(20, 1.0);
    neg[3] = -1.0;
    EXPECT_THROW(fit_weibull(neg), NumericError);
}

TEST(Residual, ThetaOfExactCdf)
{
    // Samples 1..4 under a uniform CDF on [0, 4] have ECDF - F = 0 at every sample.
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    EXPECT_NEAR(residual_theta([](double v) { return v / 4.0; }, x), 0.0, 1e-15);
    // Ties count once per sample on the ECDF step: sqrt(2 * (1 - 0.5)^2).
    const std::vector<double> t = {2.0, 2.0};
    EXPECT_NEAR(residual_theta([](double) { return 0.5; }, t), std::sqrt(0.5), 1e-15);
}

TEST(Regression, LinearLeastSquares)
{
    const std::vector<double> x = {10, 12, 14, 16}, y = {3, 4, 5, 6};
    const auto f = regress_linear(x, y);
    EXPECT_NEAR(f.a, 0.5, 1e-14);
    EXPECT_NEAR(f.c, -2.0, 1e-13);
    EXPECT_THROW(regress_linear(std::vector<double>{1.0, 1.0}, std::vector<double>{2.0, 3.0}), NumericError);
}

TEST(Regression, GaussianFamilyOverGrid)
{
    std::vector<double> g = {10, 15, 20};
    std::vector<std::vector<double>> samples;
    std::vector<FitResult> fits;
    for (double gd : g) {
        auto s = skew_normal_sample(0.0, 1.0, 0.0, 2000, static_cast<std::uint64_t>(gd));
        for (auto& v : s)
            v = 6.64 * gd + 2.0 * v;
        fits.push_back(mle_fit(Family::Gaussian, s));
        samples.push_back(std::move(s));
    }
    const auto r = regress_family(Family::Gaussian, g, fits, samples);
    EXPECT_NEAR(r.params[0].a, 6.64, 0.02);
    EXPECT_NEAR(r.params[1].c, 2.0, 0.1);
    ASSERT_EQ(r.regression_theta_err.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_LT(r.regression_theta_err[i], 2.0 * r.fit_theta_err[i] + 0.5);
    const auto recs = regression_records("x", r);
    EXPECT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0]["family"], "gaussian");
}

TEST(Records, FitRecordSchema)
{
    const auto r = mle_fit(Family::Gaussian, reference_sample());
    const auto j = fit_record("cell", 10.0, r);
    for (const char* k : {"scenario_id", "gamma_db", "family", "theta", "theta_err", "nll", "converged"})
        EXPECT_TRUE(j.contains(k)) << k;
}
