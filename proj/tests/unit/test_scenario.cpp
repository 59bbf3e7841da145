// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------

#include "elaa/scenario.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace elaa;

namespace {

std::string error_of(const std::string& text)
{
    try {
        build_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Scenario, EmptyConfigGivesDefaults)
{
    const auto s = build_scenario("");
    EXPECT_EQ(s.ula.antenna_count, 2000u);
    EXPECT_NEAR(s.ula.wavelength, 0.0856549880, 1e-9);
    EXPECT_DOUBLE_EQ(s.ula.spacing, 0.5 * s.ula.wavelength);
    EXPECT_EQ(s.layout.ut_count(), 10u);
    EXPECT_EQ(s.layout.total_antennas(), 40u);
    EXPECT_DOUBLE_EQ(s.layout.d_perp, 25.0);
    ASSERT_EQ(s.layout.ru_places.size(), 2u);
    EXPECT_EQ(s.layout.users.front().role, UtRole::Ru);
    EXPECT_EQ(s.layout.users.back().role, UtRole::Ru);
    EXPECT_EQ(s.layout.users[4].role, UtRole::NonRu);
    EXPECT_DOUBLE_EQ(s.propagation.d_los, 5000.0);
    EXPECT_DOUBLE_EQ(s.propagation.sigma_sf_nlos_db, 7.82);
    EXPECT_EQ(s.channel.kind, ChannelKind::Proposed);
}

TEST(Scenario, UserLineSpansTheArrayByDefault)
{
    const auto s = build_scenario("");
    EXPECT_NEAR(s.layout.users.front().x, s.ula.antenna_x(0), 1e-12);
    EXPECT_NEAR(s.layout.users.back().x, s.ula.antenna_x(1999), 1e-12);
}

TEST(Scenario, ArrayIsCentred)
{
    const auto s = build_scenario(R"({"geometry": {"antennas": 3, "antenna_spacing_m": 0.5}})");
    EXPECT_DOUBLE_EQ(s.ula.antenna_x(0), -0.5);
    EXPECT_DOUBLE_EQ(s.ula.antenna_x(1), 0.0);
    EXPECT_DOUBLE_EQ(s.ula.antenna_x(2), 0.5);
    EXPECT_DOUBLE_EQ(s.ula.separation(0, 2), 1.0);
}

TEST(Scenario, UtAntennasLieAlongTheUtLine)
{
    const auto s = build_scenario(R"({"geometry": {"ut_antennas": 2, "ut_antenna_spacing_m": 1.0,
        "users": [{"x_m": 0.0, "role": "ru"}]}})");
    EXPECT_DOUBLE_EQ(s.layout.antenna_x(0), -0.5);
    EXPECT_DOUBLE_EQ(s.layout.antenna_x(1), 0.5);
}

TEST(Scenario, ExplicitUsersAndPlaces)
{
    const auto s = build_scenario(R"({"geometry": {"users": [{"x_m": -5, "role": "ru"}, {"x_m": 1},
        {"x_m": 5, "role": "ru"}]}})");
    ASSERT_EQ(s.layout.ru_places.size(), 2u);
    EXPECT_EQ(s.layout.place_of(0), 0u);
    EXPECT_FALSE(s.layout.place_of(1));
    EXPECT_EQ(s.layout.place_of(2), 1u);
}

TEST(Scenario, CarrierFrequencySetsWavelength)
{
    const auto s = build_scenario(R"({"geometry": {"carrier_frequency_hz": 2.8e10}})");
    EXPECT_NEAR(s.ula.wavelength, kSpeedOfLight / 2.8e10, 1e-15);
    EXPECT_NE(error_of(R"({"geometry": {"carrier_frequency_hz": 1e9, "wavelength_m": 0.3}})"), "");
}

TEST(Scenario, RejectsNonPositivePerpendicularDistance)
{
    EXPECT_NE(error_of(R"({"geometry": {"d_perp_m": -1}})").find("d_perp must be positive"), std::string::npos);
    EXPECT_NE(error_of(R"({"geometry": {"d_perp_m": 0}})").find("d_perp must be positive"), std::string::npos);
}

TEST(Scenario, RejectsUnknownKeysWithPath)
{
    EXPECT_NE(error_of(R"({"geometry": {"antenas": 10}})").find("geometry.antenas"), std::string::npos);
    EXPECT_NE(error_of(R"({"propagation": {"d_los": 10}})").find("propagation.d_los"), std::string::npos);
    EXPECT_NE(error_of(R"({"bogus": {}})").find("bogus"), std::string::npos);
}

TEST(Scenario, RejectsBadLayouts)
{
    EXPECT_NE(error_of(R"({"geometry": {"users": [{"x_m": -1, "role": "ru"}, {"x_m": 5}, {"x_m": 1, "role": "ru"}]}})")
                  .find("outside the RU-place span"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"geometry": {"users": [{"x_m": 0, "role": "ru"}], "ru_places_m": [1.0]}})")
                  .find("not on an RU place"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"geometry": {"users": [{"x_m": 0}], "ru_places_m": []}})"), "");
    EXPECT_NE(error_of(R"({"geometry": {"user_line": {"count": 3, "ru": [7]}}})").find("out of range"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"geometry": {"users": [{"role": "ru"}]}})").find("x_m"), std::string::npos);
    EXPECT_NE(error_of("[1, 2"), "");
}

TEST(Scenario, RejectsBadPropagation)
{
    EXPECT_NE(error_of(R"({"propagation": {"d_los_m": 0}})"), "");
    EXPECT_NE(error_of(R"({"propagation": {"sigma_sf_los_db": -1}})"), "");
    EXPECT_NE(error_of(R"({"channel": {"kind": "rician"}})"), "");
    EXPECT_NE(error_of(R"({"channel": {"shadowing": "median"}})"), "");
}

TEST(Scenario, JsonRoundTrip)
{
    const auto s = build_scenario(R"({"geometry": {"antennas": 64, "d_perp_m": 50, "user_line": {"count": 5,
        "span_m": 20, "ru": [0, 4]}}, "propagation": {"d_sf_m": 10}, "channel": {"kind": "ind_rayleigh",
        "shadowing": "median_unity", "los_phase": "uniform_random"}})");
    const auto back = scenario_from_json(to_json(s));
    EXPECT_TRUE(back == s);
}

TEST(Scenario, DistanceTable)
{
    const auto s = build_scenario(R"({"geometry": {"antennas": 2, "antenna_spacing_m": 6, "d_perp_m": 4,
        "ut_antennas": 1, "users": [{"x_m": 0, "role": "ru"}]}})");
    const auto d = compute_distances(s);
    EXPECT_DOUBLE_EQ(d.link(0, 0), 5.0);
    EXPECT_DOUBLE_EQ(d.link(1, 0), 5.0);
    EXPECT_DOUBLE_EQ(d.ut_distance(0, 0), 5.0);
    EXPECT_DOUBLE_EQ(d.separation(0, 1), 6.0);
}
