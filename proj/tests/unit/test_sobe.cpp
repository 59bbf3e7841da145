// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------

#include "elaa/sobe.hpp"

#include <gtest/gtest.h>

using namespace elaa;

namespace {

LosVector vec(std::initializer_list<int> bits)
{
    LosVector v;
    for (int b : bits)
        v.state.push_back(static_cast<std::uint8_t>(b));
    v.anchors = {0};
    return v;
}

} // namespace

TEST(Sobe, WynerWeightsFavourTheCloserRu)
{
    const auto [l, r] = wyner_weights(2.0, 0.0, 10.0);
    EXPECT_DOUBLE_EQ(l, 0.8);
    EXPECT_DOUBLE_EQ(r, 0.2);
    const auto [ll, lr] = wyner_weights(2.0, 0.0, 10.0, true);
    EXPECT_DOUBLE_EQ(ll, 0.2);
    EXPECT_DOUBLE_EQ(lr, 0.8);
}

TEST(Sobe, WynerWeightsAtEndpoints)
{
    EXPECT_EQ(wyner_weights(0.0, 0.0, 4.0), (std::pair{1.0, 0.0}));
    EXPECT_EQ(wyner_weights(4.0, 0.0, 4.0), (std::pair{0.0, 1.0}));
    EXPECT_THROW(wyner_weights(5.0, 0.0, 4.0), ConfigError);
    EXPECT_THROW(wyner_weights(1.0, 4.0, 4.0), ConfigError);
}

TEST(Sobe, PlaceWeights)
{
    const auto one = place_weights(3.0, {0.0});
    EXPECT_EQ(one.zeta, (std::vector<double>{1.0}));
    const auto w = place_weights(7.5, {0.0, 5.0, 10.0, 15.0});
    EXPECT_EQ(w.zeta, (std::vector<double>{0.0, 0.5, 0.5, 0.0}));
    const auto at = place_weights(5.0, {0.0, 5.0, 10.0});
    EXPECT_DOUBLE_EQ(at.zeta[1], 1.0);
    EXPECT_THROW(place_weights(-1.0, {0.0, 5.0}), ConfigError);
    EXPECT_THROW(place_weights(0.0, {}), ConfigError);
}

TEST(Sobe, MixProbability)
{
    RuBasis b;
    b.columns = {vec({1, 1, 0, 0}), vec({1, 0, 1, 0})};
    b.positions = {0.0, 1.0};
    CorrelationWeights w{{0.7, 0.3}};
    const auto rho = mix_probability(b, w);
    ASSERT_EQ(rho.size(), 4u);
    EXPECT_DOUBLE_EQ(rho[0], 1.0);
    EXPECT_DOUBLE_EQ(rho[1], 0.7);
    EXPECT_DOUBLE_EQ(rho[2], 0.3);
    EXPECT_DOUBLE_EQ(rho[3], 0.0);
}

TEST(Sobe, UnanimousRusAreExact)
{
    RuBasis b;
    b.columns = {vec({1, 0}), vec({1, 0})};
    // Weights that do not sum to one exactly in floating point.
    CorrelationWeights w{{0.1 + 0.2, 0.7}};
    const auto rho = mix_probability(b, w);
    EXPECT_EQ(rho[0], 1.0);
    EXPECT_EQ(rho[1], 0.0);
}

TEST(Sobe, MixIgnoresZeroWeightPlaces)
{
    RuBasis b;
    b.columns = {vec({0, 0}), vec({1, 1}), vec({0, 1})};
    const auto rho = mix_probability(b, {{0.0, 1.0, 0.0}});
    EXPECT_EQ(rho, (std::vector<double>{1.0, 1.0}));
}

TEST(Sobe, MixRejectsMismatchedWeights)
{
    RuBasis b;
    b.columns = {vec({0, 1})};
    EXPECT_THROW(mix_probability(b, {{0.5, 0.5}}), ConfigError);
}

TEST(Sobe, NonRuFollowsUnanimousRus)
{
    RuBasis b;
    b.columns = {vec({1, 1, 1, 0, 0, 0}), vec({1, 1, 1, 0, 0, 0})};
    const auto rho = mix_probability(b, {{0.4, 0.6}});
    const PropagationParams p;
    auto rng = make_engine({1, 0, 0, StreamPurpose::NonRuLos});
    const auto v = generate_nonru_los(std::span<const double>(rho), 0.04, p, rng);
    EXPECT_EQ(v.state, b.columns[0].state);
}
