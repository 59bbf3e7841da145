// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------

#include "elaa/detect.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <set>

using namespace elaa;

TEST(Qam, UnitEnergyAndGrayLabels)
{
    for (std::size_t order : {4u, 16u, 64u}) {
        const QamModulation q(order);
        double e = 0.0;
        std::set<std::uint32_t> labels;
        for (std::size_t s = 0; s < order; ++s) {
            e += std::norm(q.point(s));
            labels.insert(q.label(s));
            EXPECT_EQ(q.slice(q.point(s)), s);
        }
        EXPECT_NEAR(e / static_cast<double>(order), 1.0, 1e-12);
        EXPECT_EQ(labels.size(), order);
        // Horizontal and vertical neighbours differ in one bit.
        const std::size_t side = q.side();
        for (std::size_t i = 0; i < side; ++i)
            for (std::size_t j = 0; j + 1 < side; ++j) {
                EXPECT_EQ(std::popcount(q.label(i * side + j) ^ q.label(i * side + j + 1)), 1);
                EXPECT_EQ(std::popcount(q.label(j * side + i) ^ q.label((j + 1) * side + i)), 1);
            }
    }
    EXPECT_THROW(QamModulation(8), ConfigError);
}

TEST(Qam, SlicerSaturatesOutside)
{
    const QamModulation q(16);
    EXPECT_EQ(q.slice({100.0, 100.0}), 15u);
    EXPECT_EQ(q.slice({-100.0, -100.0}), 0u);
}

TEST(Lmmse, TwoByTwoByHand)
{
    // H = [[1, j], [0, 2]], y = [1 + j, 2], snr = 2, N = 2 -> r = 1:
    // (H^H H + I)^-1 H^H y = [5/11 + j/11, 9/11 - j/11].
    Eigen::MatrixXcd H(2, 2);
    H << 1.0, cplx(0, 1), 0.0, 2.0;
    Eigen::VectorXcd y(2);
    y << cplx(1, 1), 2.0;
    const auto s = lmmse_equalize(y, H, 2.0);
    EXPECT_NEAR(std::abs(s(0) - cplx(5.0 / 11, 1.0 / 11)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s(1) - cplx(9.0 / 11, -1.0 / 11)), 0.0, 1e-14);
    // Literal regularizer snr / N = 1 coincides here.
    const auto l = lmmse_equalize(y, H, 2.0, true);
    EXPECT_NEAR((l - s).norm(), 0.0, 1e-14);
}

TEST(Lmmse, NoiselessSquareChannelInverts)
{
    Eigen::MatrixXcd H(3, 2);
    H << 1.0, 0.5, cplx(0, 1), 2.0, 0.3, cplx(1, -1);
    Eigen::VectorXcd s(2);
    s << cplx(0.7, -0.7), cplx(-0.2, 0.9);
    const Eigen::VectorXcd y = H * s;
    EXPECT_NEAR((lmmse_equalize(y, H, std::numeric_limits<double>::infinity()) - s).norm(), 0.0, 1e-12);
}

TEST(Mrc, BoundRemovesInterference)
{
    Eigen::MatrixXcd H(2, 2);
    H << 1.0, 1.0, 0.0, 1.0;
    Eigen::VectorXcd s(2), v = Eigen::VectorXcd::Zero(2);
    s << 0.3, -0.8;
    EXPECT_NEAR(std::abs(mrc_bound_equalize(H, s, v, 0) - 0.3), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(mrc_bound_equalize(H, s, v, 1) + 0.8), 0.0, 1e-15);
    H.col(0).setZero();
    EXPECT_THROW(mrc_bound_equalize(H, s, v, 0), NumericError);
}

TEST(Transmit, NoiseVariance)
{
    const Eigen::MatrixXcd H = Eigen::MatrixXcd::Identity(4000, 4);
    auto rng = make_engine({1, 0, 0, StreamPurpose::Noise});
    Eigen::VectorXcd v;
    transmit(Eigen::VectorXcd::Zero(4), H, 2.0, rng, &v);
    EXPECT_NEAR(v.squaredNorm() / 4000.0, 4.0 / 2.0, 0.1);
}

TEST(Crossing, InterpolatesInLogDomain)
{
    const std::vector<double> g = {10, 12, 14};
    const std::vector<double> s = {1e-1, 1e-2, 1e-4};
    EXPECT_NEAR(*ser_crossing(g, s, 1e-3), 13.0, 1e-12);
    EXPECT_FALSE(ser_crossing(g, std::vector<double>{1.0, 0.5, 0.2}, 1e-3));
    EXPECT_EQ(*ser_crossing(g, std::vector<double>{1e-2, 1e-2, 0.0}, 1e-3), 14.0);
}

TEST(Sweep, RayleighGapIsSmallAndDeterministic)
{
    DetectionRun run;
    run.scenario = build_scenario(R"({"geometry": {"antennas": 64, "d_perp_m": 50, "user_line": {"count": 2,
        "span_m": 5.0}, "ut_antennas": 2}, "channel": {"kind": "iid_rayleigh"}})");
    run.gamma_db = {-4.0, 0.0, 4.0, 8.0};
    run.trials = 40;
    run.vectors_per_trial = 4;
    run.modulation_order = 4;
    const auto a = ser_sweep(run);
    run.workers = 3;
    const auto b = ser_sweep(run);
    ASSERT_EQ(a.size(), 8u);
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_EQ(a[i].symbol_errors, b[i].symbol_errors);
    // LMMSE never beats the interference-free bound by more than noise.
    for (std::size_t p = 0; p < 4; ++p)
        EXPECT_GE(a[p].ser() + 0.02, a[4 + p].ser());
    EXPECT_GT(a[0].ser(), a[3].ser());
    EXPECT_EQ(a[0].symbols, 40u * 4u * 4u);
    run.gamma_db = {3.0, 1.0};
    EXPECT_THROW(ser_sweep(run), ConfigError);
}
