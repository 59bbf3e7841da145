// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// Scenario description: array geometry, UT layout on a line parallel to the array
// (linear Wyner-type layout), propagation parameters, and channel-kind options.
// Configuration text is JSON with "geometry", "propagation", "channel" and
// "experiment" blocks; every field is optional and defaults to the UMi street-canyon
// parameter set with 10 UTs spread over an M = 2000 half-wavelength ULA.

#ifndef ELAA_SCENARIO_HPP
#define ELAA_SCENARIO_HPP

#include "elaa/common.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace elaa {

inline constexpr double kDefaultCarrierHz = 3.5e9;

struct UlaGeometry {
    std::size_t antenna_count = 2000;
    double wavelength = kSpeedOfLight / kDefaultCarrierHz;
    double spacing = 0.5 * (kSpeedOfLight / kDefaultCarrierHz);
    double center_x = 0.0; // the array lies on the x-axis, centred here

    double length() const { return static_cast<double>(antenna_count - 1) * spacing; }

    double antenna_x(std::size_t m) const
    {
        return center_x + (static_cast<double>(m) - 0.5 * static_cast<double>(antenna_count - 1)) * spacing;
    }

    /// Distance between service antennas l and m.
    double separation(std::size_t l, std::size_t m) const
    {
        return spacing * static_cast<double>(l > m ? l - m : m - l);
    }

    bool operator==(const UlaGeometry&) const = default;
};

enum class UtRole { Ru, NonRu };

struct UserTerminal {
    double x = 0.0; // position along the UT line, meters
    UtRole role = UtRole::NonRu;

    bool operator==(const UserTerminal&) const = default;
};

/// UTs on the line y = d_perp. The antennas of one UT share its LoS state and
/// shadowing; they sit on the UT line, `antenna_spacing` apart and centred on x.
struct UtLayout {
    std::vector<UserTerminal> users;
    std::size_t antennas_per_ut = 4;
    double d_perp = 25.0;
    double antenna_spacing = 0.5 * (kSpeedOfLight / kDefaultCarrierHz);
    std::vector<double> ru_places; // sorted, strictly increasing

    std::size_t ut_count() const { return users.size(); }
    std::size_t total_antennas() const { return users.size() * antennas_per_ut; }
    std::size_t ut_of_column(std::size_t n) const { return n / antennas_per_ut; }

    double antenna_x(std::size_t n) const
    {
        const std::size_t u = ut_of_column(n);
        const double i = static_cast<double>(n % antennas_per_ut);
        return users[u].x + (i - 0.5 * static_cast<double>(antennas_per_ut - 1)) * antenna_spacing;
    }

    /// RU-place index a RU sits on; nullopt for non-RUs.
    std::optional<std::size_t> place_of(std::size_t u) const
    {
        if (users[u].role != UtRole::Ru)
            return std::nullopt;
        for (std::size_t j = 0; j < ru_places.size(); ++j)
            if (std::abs(ru_places[j] - users[u].x) <= 1e-9 * std::max(1.0, std::abs(users[u].x)))
                return j;
        return std::nullopt;
    }

    bool operator==(const UtLayout&) const = default;
};

struct PropagationParams {
    double d_los = 5000.0;  // LoS-state correlation distance, m
    double d_sf = 15.0;     // shadowing correlation distance, m
    double d1 = 18.0;       // LoS-probability reference distances, m
    double d2 = 36.0;
    double rho_los = 0.007; // path-loss coefficients
    double rho_nlos = 0.020;
    double alpha_los = 1.050; // path-loss exponents
    double alpha_nlos = 1.765;
    double sigma_sf_los_db = 4.0;
    double sigma_sf_nlos_db = 7.82;
    double k_mean_db = 9.0;
    double k_std_db = 10.0;

    bool operator==(const PropagationParams&) const = default;
};

enum class ChannelKind { Proposed, IidRayleigh, IndRayleigh, VisibilityRegion };

/// How dB-normal shadowing X ~ N(0, sigma^2) maps to a linear amplitude.
/// MedianUnity: eps = 10^(X/20), so E[eps^2] = exp((sigma ln10 / 10)^2 / 2) > 1.
/// MeanUnity:   eps = 10^(X/20) / sqrt(E[10^(X/10)]), so E[eps^2] = 1.
enum class ShadowingConvention { MedianUnity, MeanUnity };

/// LoS path phase: exp(-j 2 pi d / lambda) from the link distance, or an independent
/// uniform phase per link.
enum class LosPhaseModel { Geometric, UniformRandom };

struct VisibilityParams {
    double length_log_mean = 1.6094379124341003; // ln 5
    double length_log_std = 0.916290731874155;   // |ln 0.4|

    bool operator==(const VisibilityParams&) const = default;
};

struct ChannelOptions {
    ChannelKind kind = ChannelKind::Proposed;
    ShadowingConvention shadowing = ShadowingConvention::MeanUnity;
    LosPhaseModel los_phase = LosPhaseModel::Geometric;
    bool paper_literal_weights = false; // verbatim two-RU weight orientation
    bool paper_literal_moments = false; // E|eps|^2 = exp(sigma_db^2 / 2) in the normaliser
    VisibilityParams visibility;

    bool operator==(const ChannelOptions&) const = default;
};

struct ScenarioConfig {
    UlaGeometry ula;
    UtLayout layout;
    PropagationParams propagation;
    ChannelOptions channel;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Link distances. `link(m, n)` is the distance from service antenna m to UT antenna n;
/// `ut_distance(m, u)` is the distance from antenna m to the UT point of UT u (used
/// for LoS probabilities). All nodes share one height, so 2-D and 3-D distances agree.
struct DistanceTable {
    Eigen::MatrixXd link;        // M x N
    Eigen::MatrixXd ut_distance; // M x U
    double spacing = 0.0;

    double separation(std::size_t l, std::size_t m) const
    {
        return spacing * static_cast<double>(l > m ? l - m : m - l);
    }
};

inline const char* to_string(ChannelKind k)
{
    switch (k) {
    case ChannelKind::Proposed: return "proposed";
    case ChannelKind::IidRayleigh: return "iid_rayleigh";
    case ChannelKind::IndRayleigh: return "ind_rayleigh";
    case ChannelKind::VisibilityRegion: return "visibility_region";
    }
    return "?";
}

inline ChannelKind channel_kind_from_string(const std::string& s)
{
    if (s == "proposed") return ChannelKind::Proposed;
    if (s == "iid_rayleigh") return ChannelKind::IidRayleigh;
    if (s == "ind_rayleigh") return ChannelKind::IndRayleigh;
    if (s == "visibility_region") return ChannelKind::VisibilityRegion;
    throw ConfigError("channel.kind: unknown channel kind '" + s + "'");
}

/// Equally spaced users on [center - span/2, center + span/2]; users listed in `ru`
/// become RUs and define the RU places.
inline std::vector<UserTerminal> user_line(std::size_t count, double span, double center,
                                           const std::vector<std::size_t>& ru)
{
    std::vector<UserTerminal> users(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) - 0.5 : 0.0;
        users[i].x = center + t * span;
    }
    for (std::size_t i : ru) {
        if (i >= count)
            throw ConfigError("geometry.user_line.ru: index " + std::to_string(i) + " out of range");
        users[i].role = UtRole::Ru;
    }
    return users;
}

inline void validate(const ScenarioConfig& s)
{
    const auto& g = s.ula;
    const auto& l = s.layout;
    const auto& p = s.propagation;
    if (g.antenna_count < 1) throw ConfigError("geometry.antennas must be at least 1");
    if (!(g.wavelength > 0.0)) throw ConfigError("geometry.wavelength_m must be positive");
    if (!(g.spacing > 0.0)) throw ConfigError("geometry.antenna_spacing_m must be positive");
    if (!(l.d_perp > 0.0)) throw ConfigError("d_perp must be positive");
    if (l.antennas_per_ut < 1) throw ConfigError("geometry.ut_antennas must be at least 1");
    if (!(l.antenna_spacing >= 0.0)) throw ConfigError("geometry.ut_antenna_spacing_m must be non-negative");
    if (l.users.empty()) throw ConfigError("geometry.users must contain at least one UT");
    for (std::size_t j = 1; j < l.ru_places.size(); ++j)
        if (!(l.ru_places[j] > l.ru_places[j - 1]))
            throw ConfigError("geometry.ru_places_m must be strictly increasing");
    bool any_non_ru = false;
    for (std::size_t u = 0; u < l.users.size(); ++u) {
        if (l.users[u].role == UtRole::Ru) {
            if (!l.place_of(u))
                throw ConfigError("geometry.users[" + std::to_string(u) + "]: RU is not on an RU place");
        } else {
            any_non_ru = true;
            if (l.ru_places.size() >= 2 &&
                (l.users[u].x < l.ru_places.front() || l.users[u].x > l.ru_places.back()))
                throw ConfigError("geometry.users[" + std::to_string(u) +
                                  "]: non-RU lies outside the RU-place span");
        }
    }
    if (any_non_ru && l.ru_places.empty())
        throw ConfigError("geometry.ru_places_m: non-RUs need at least one RU place");
    if (!(p.d_los > 0.0)) throw ConfigError("propagation.d_los_m must be positive");
    if (!(p.d_sf > 0.0)) throw ConfigError("propagation.d_sf_m must be positive");
    if (!(p.d1 > 0.0) || !(p.d2 > 0.0)) throw ConfigError("propagation.d1_m and d2_m must be positive");
    if (!(p.alpha_los > 0.0) || !(p.alpha_nlos > 0.0)) throw ConfigError("propagation path-loss exponents must be positive");
    if (!(p.rho_los > 0.0) || !(p.rho_nlos > 0.0)) throw ConfigError("propagation path-loss coefficients must be positive");
    if (p.sigma_sf_los_db < 0.0 || p.sigma_sf_nlos_db < 0.0 || p.k_std_db < 0.0)
        throw ConfigError("propagation standard deviations must be non-negative");
    if (s.channel.visibility.length_log_std < 0.0)
        throw ConfigError("channel.visibility.length_log_std must be non-negative");
}

namespace detail {

/// Strict JSON object reader: every key must be consumed, otherwise the unknown
/// key is reported with its dotted path.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(path_ + ": expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const nlohmann::json& raw(const std::string& key)
    {
        static const nlohmann::json null_value;
        seen_.insert(key);
        return j_.contains(key) ? j_.at(key) : null_value;
    }

    double number(const std::string& key, double fallback)
    {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(field(key) + " must be a number");
        return v.get<double>();
    }

    std::size_t count(const std::string& key, std::size_t fallback)
    {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw ConfigError(field(key) + " must be an integer");
        const auto i = v.get<long long>();
        if (i < 0) throw ConfigError(field(key) + " must be non-negative");
        return static_cast<std::size_t>(i);
    }

    bool boolean(const std::string& key, bool fallback)
    {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(field(key) + " must be a boolean");
        return v.get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(field(key) + " must be a string");
        return v.get<std::string>();
    }

    std::string field(const std::string& key) const { return path_ + "." + key; }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(field(it.key()) + ": unknown field");
    }

private:
    const nlohmann::json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline nlohmann::json empty_object() { return nlohmann::json::object(); }

} // namespace detail

/// Resolves a JSON configuration document. Blocks other than geometry, propagation
/// and channel are left to their owners (the experiment block is read by the runner).
inline ScenarioConfig scenario_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object at top level");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const auto& k = it.key();
        if (k != "geometry" && k != "propagation" && k != "channel" && k != "experiment")
            throw ConfigError(k + ": unknown block");
    }
    ScenarioConfig s;
    const auto geo_json = doc.contains("geometry") ? doc.at("geometry") : detail::empty_object();
    detail::ObjectReader geo(geo_json, "geometry");

    auto& g = s.ula;
    g.antenna_count = geo.count("antennas", g.antenna_count);
    if (geo.has("wavelength_m") && geo.has("carrier_frequency_hz"))
        throw ConfigError("geometry: give either wavelength_m or carrier_frequency_hz, not both");
    if (geo.has("wavelength_m")) {
        g.wavelength = geo.number("wavelength_m", g.wavelength);
        geo.number("carrier_frequency_hz", 0.0);
    } else {
        const double f = geo.number("carrier_frequency_hz", kDefaultCarrierHz);
        if (!(f > 0.0)) throw ConfigError("geometry.carrier_frequency_hz must be positive");
        g.wavelength = wavelength_from_frequency(f);
        geo.number("wavelength_m", 0.0);
    }
    g.spacing = geo.number("antenna_spacing_m", 0.5 * g.wavelength);
    g.center_x = geo.number("array_center_x_m", 0.0);

    auto& l = s.layout;
    l.d_perp = geo.number("d_perp_m", l.d_perp);
    l.antennas_per_ut = geo.count("ut_antennas", l.antennas_per_ut);
    l.antenna_spacing = geo.number("ut_antenna_spacing_m", 0.5 * g.wavelength);

    if (geo.has("users") && geo.has("user_line"))
        throw ConfigError("geometry: give either users or user_line, not both");
    if (geo.has("users")) {
        const auto& arr = geo.raw("users");
        if (!arr.is_array()) throw ConfigError("geometry.users must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            detail::ObjectReader u(arr[i], "geometry.users[" + std::to_string(i) + "]");
            UserTerminal ut;
            if (!u.has("x_m")) throw ConfigError(u.field("x_m") + ": required");
            ut.x = u.number("x_m", 0.0);
            const auto role = u.text("role", "non_ru");
            if (role == "ru") ut.role = UtRole::Ru;
            else if (role == "non_ru") ut.role = UtRole::NonRu;
            else throw ConfigError(u.field("role") + ": expected 'ru' or 'non_ru'");
            u.finish();
            l.users.push_back(ut);
        }
    } else {
        const auto line_json = geo.has("user_line") ? geo.raw("user_line") : detail::empty_object();
        detail::ObjectReader line(line_json, "geometry.user_line");
        const std::size_t count = line.count("count", 10);
        const double span = line.number("span_m", g.length());
        const double center = line.number("center_x_m", g.center_x);
        std::vector<std::size_t> ru;
        if (line.has("ru")) {
            const auto& r = line.raw("ru");
            if (!r.is_array()) throw ConfigError("geometry.user_line.ru must be an array of indices");
            for (const auto& v : r) {
                if (!v.is_number_integer()) throw ConfigError("geometry.user_line.ru must hold integers");
                ru.push_back(v.get<std::size_t>());
            }
        } else {
            line.raw("ru");
            ru = {0};
            if (count > 1) ru.push_back(count - 1);
        }
        line.finish();
        if (count == 0) throw ConfigError("geometry.users must contain at least one UT");
        if (span < 0.0) throw ConfigError("geometry.user_line.span_m must be non-negative");
        l.users = user_line(count, span, center, ru);
    }
    if (geo.has("ru_places_m")) {
        const auto& arr = geo.raw("ru_places_m");
        if (!arr.is_array()) throw ConfigError("geometry.ru_places_m must be an array");
        for (const auto& v : arr) {
            if (!v.is_number()) throw ConfigError("geometry.ru_places_m must hold numbers");
            l.ru_places.push_back(v.get<double>());
        }
    } else {
        geo.raw("ru_places_m");
        for (const auto& u : l.users)
            if (u.role == UtRole::Ru) l.ru_places.push_back(u.x);
        std::sort(l.ru_places.begin(), l.ru_places.end());
    }
    geo.finish();

    const auto prop_json = doc.contains("propagation") ? doc.at("propagation") : detail::empty_object();
    detail::ObjectReader prop(prop_json, "propagation");
    auto& p = s.propagation;
    p.d_los = prop.number("d_los_m", p.d_los);
    p.d_sf = prop.number("d_sf_m", p.d_sf);
    p.d1 = prop.number("d1_m", p.d1);
    p.d2 = prop.number("d2_m", p.d2);
    p.rho_los = prop.number("rho_los", p.rho_los);
    p.rho_nlos = prop.number("rho_nlos", p.rho_nlos);
    p.alpha_los = prop.number("alpha_los", p.alpha_los);
    p.alpha_nlos = prop.number("alpha_nlos", p.alpha_nlos);
    p.sigma_sf_los_db = prop.number("sigma_sf_los_db", p.sigma_sf_los_db);
    p.sigma_sf_nlos_db = prop.number("sigma_sf_nlos_db", p.sigma_sf_nlos_db);
    p.k_mean_db = prop.number("k_factor_mean_db", p.k_mean_db);
    p.k_std_db = prop.number("k_factor_std_db", p.k_std_db);
    prop.finish();

    const auto ch_json = doc.contains("channel") ? doc.at("channel") : detail::empty_object();
    detail::ObjectReader ch(ch_json, "channel");
    auto& c = s.channel;
    c.kind = channel_kind_from_string(ch.text("kind", "proposed"));
    const auto conv = ch.text("shadowing", "mean_unity");
    if (conv == "median_unity") c.shadowing = ShadowingConvention::MedianUnity;
    else if (conv == "mean_unity") c.shadowing = ShadowingConvention::MeanUnity;
    else throw ConfigError("channel.shadowing: expected 'median_unity' or 'mean_unity'");
    const auto phase = ch.text("los_phase", "geometric");
    if (phase == "geometric") c.los_phase = LosPhaseModel::Geometric;
    else if (phase == "uniform_random") c.los_phase = LosPhaseModel::UniformRandom;
    else throw ConfigError("channel.los_phase: expected 'geometric' or 'uniform_random'");
    c.paper_literal_weights = ch.boolean("paper_literal_weights", false);
    c.paper_literal_moments = ch.boolean("paper_literal_moments", false);
    if (ch.has("visibility")) {
        detail::ObjectReader vr(ch.raw("visibility"), "channel.visibility");
        c.visibility.length_log_mean = vr.number("length_log_mean", c.visibility.length_log_mean);
        c.visibility.length_log_std = vr.number("length_log_std", c.visibility.length_log_std);
        vr.finish();
    } else {
        ch.raw("visibility");
    }
    ch.finish();

    validate(s);
    return s;
}

/// Parses configuration text (JSON) into a validated scenario.
inline ScenarioConfig build_scenario(const std::string& config_text)
{
    nlohmann::json doc;
    if (config_text.find_first_not_of(" \t\r\n") == std::string::npos) {
        doc = nlohmann::json::object();
    } else {
        try {
            doc = nlohmann::json::parse(config_text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config: not valid JSON: ") + e.what());
        }
    }
    return scenario_from_json(doc);
}

/// Fully resolved form; `scenario_from_json(to_json(s)) == s`.
inline nlohmann::json to_json(const ScenarioConfig& s)
{
    nlohmann::json users = nlohmann::json::array();
    for (const auto& u : s.layout.users)
        users.push_back({{"x_m", u.x}, {"role", u.role == UtRole::Ru ? "ru" : "non_ru"}});
    const auto& p = s.propagation;
    return {
        {"geometry",
         {{"antennas", s.ula.antenna_count},
          {"wavelength_m", s.ula.wavelength},
          {"antenna_spacing_m", s.ula.spacing},
          {"array_center_x_m", s.ula.center_x},
          {"d_perp_m", s.layout.d_perp},
          {"ut_antennas", s.layout.antennas_per_ut},
          {"ut_antenna_spacing_m", s.layout.antenna_spacing},
          {"users", users},
          {"ru_places_m", s.layout.ru_places}}},
        {"propagation",
         {{"d_los_m", p.d_los},
          {"d_sf_m", p.d_sf},
          {"d1_m", p.d1},
          {"d2_m", p.d2},
          {"rho_los", p.rho_los},
          {"rho_nlos", p.rho_nlos},
          {"alpha_los", p.alpha_los},
          {"alpha_nlos", p.alpha_nlos},
          {"sigma_sf_los_db", p.sigma_sf_los_db},
          {"sigma_sf_nlos_db", p.sigma_sf_nlos_db},
          {"k_factor_mean_db", p.k_mean_db},
          {"k_factor_std_db", p.k_std_db}}},
        {"channel",
         {{"kind", to_string(s.channel.kind)},
          {"shadowing", s.channel.shadowing == ShadowingConvention::MedianUnity ? "median_unity" : "mean_unity"},
          {"los_phase", s.channel.los_phase == LosPhaseModel::Geometric ? "geometric" : "uniform_random"},
          {"paper_literal_weights", s.channel.paper_literal_weights},
          {"paper_literal_moments", s.channel.paper_literal_moments},
          {"visibility",
           {{"length_log_mean", s.channel.visibility.length_log_mean},
            {"length_log_std", s.channel.visibility.length_log_std}}}}},
    };
}

inline DistanceTable compute_distances(const ScenarioConfig& s)
{
    const std::size_t M = s.ula.antenna_count;
    const std::size_t N = s.layout.total_antennas();
    const std::size_t U = s.layout.ut_count();
    const double y = s.layout.d_perp;
    DistanceTable t;
    t.spacing = s.ula.spacing;
    t.link.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(N));
    t.ut_distance.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(U));
    for (std::size_t n = 0; n < N; ++n) {
        const double xn = s.layout.antenna_x(n);
        for (std::size_t m = 0; m < M; ++m)
            t.link(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = std::hypot(s.ula.antenna_x(m) - xn, y);
    }
    for (std::size_t u = 0; u < U; ++u) {
        const double xu = s.layout.users[u].x;
        for (std::size_t m = 0; m < M; ++m)
            t.ut_distance(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(u)) = std::hypot(s.ula.antenna_x(m) - xu, y);
    }
    return t;
}

} // namespace elaa

#endif
