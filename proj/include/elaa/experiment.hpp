// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// Experiment presets and the Monte Carlo runner behind the elaa_sim CLI.
//
// A preset is a JSON document with the scenario blocks plus an "experiment" block:
//   mode          "capacity" | "hardening" | "detection"
//   trials, seed
//   gamma_db      list of SNR points (dB), or gamma_grid {start_db, stop_db, points}
//   families      fitted families (capacity mode), e.g. ["skew_normal", "gaussian", "weibull"]
//   regression    regress fitted parameters over the SNR grid (capacity mode)
//   antennas      antenna counts swept in hardening mode
//   variants      [{id, patch}] scenario patches (hardening and detection modes)
//   modulation_order, vectors_per_trial, literal_lmmse   (detection mode)

#ifndef ELAA_EXPERIMENT_HPP
#define ELAA_EXPERIMENT_HPP

#include "elaa/capacity.hpp"
#include "elaa/channel.hpp"
#include "elaa/common.hpp"
#include "elaa/detect.hpp"
#include "elaa/dist_fit.hpp"
#include "elaa/parallel.hpp"
#include "elaa/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifndef ELAA_VERSION
#define ELAA_VERSION "0.0.0"
#endif

namespace elaa {

using nlohmann::json;

struct Preset {
    std::string name;
    std::string artifact; // what the preset reproduces
    json config;
};

namespace detail {

inline json case_layout(int c)
{
    switch (c) {
    case 1: return {{"count", 5}, {"span_m", 2.0}, {"ru", {2}}};
    case 2: return {{"count", 5}, {"span_m", 20.0}, {"ru", {0, 4}}};
    default: return {{"count", 5}, {"span_m", 50.0}, {"ru", {0, 1, 2, 3, 4}}};
    }
}

inline json regression_grid() { return {{"start_db", 10.0}, {"stop_db", 30.0}, {"points", 11}}; }

inline std::vector<Preset> build_catalog()
{
    std::vector<Preset> out;
    out.push_back({"case-study-1", "10 UTs over the array, RUs at both ends, d_perp = 25 m",
                   {{"geometry", {{"d_perp_m", 25.0}}},
                    {"experiment", {{"mode", "capacity"}, {"trials", 100}, {"gamma_db", {10.0}}}}}});
    for (int c = 1; c <= 3; ++c)
        for (int d : {1, 25, 50})
            out.push_back({"table1-case" + std::to_string(c) + "-" + std::to_string(d) + "m",
                           "capacity fits and SNR regression, case " + std::to_string(c) + ", d_perp = " +
                               std::to_string(d) + " m, M = 2000, 10-30 dB",
                           {{"geometry", {{"d_perp_m", static_cast<double>(d)}, {"user_line", case_layout(c)}}},
                            {"experiment",
                             {{"mode", "capacity"},
                              {"trials", 10000},
                              {"gamma_grid", regression_grid()},
                              {"families", {"skew_normal", "gaussian", "weibull"}},
                              {"regression", true}}}}});
    out.push_back({"table2-case3-50m", "capacity fits at 10 dB, case 3, d_perp = 50 m, M = 200000",
                   {{"geometry", {{"antennas", 200000}, {"d_perp_m", 50.0}, {"user_line", case_layout(3)}}},
                    {"experiment",
                     {{"mode", "capacity"},
                      {"trials", 1000},
                      {"gamma_db", {10.0}},
                      {"families", {"skew_normal", "gaussian", "weibull"}}}}}});
    json hv = json::array();
    hv.push_back({{"id", "iid_rayleigh"}, {"patch", {{"channel", {{"kind", "iid_rayleigh"}}}}}});
    for (int c = 1; c <= 3; ++c)
        hv.push_back({{"id", "case" + std::to_string(c)}, {"patch", {{"geometry", {{"user_line", case_layout(c)}}}}}});
    out.push_back({"fig4-hardening", "capacity standard deviation against M, d_perp = 50 m",
                   {{"geometry", {{"d_perp_m", 50.0}, {"user_line", case_layout(3)}}},
                    {"experiment",
                     {{"mode", "hardening"},
                      {"trials", 1000},
                      {"gamma_db", {10.0}},
                      {"antennas", {200, 2000, 10000, 20000}},
                      {"variants", hv}}}}});
    json dv = json::array();
    dv.push_back({{"id", "iid_rayleigh"}, {"patch", {{"channel", {{"kind", "iid_rayleigh"}}}}}});
    dv.push_back({{"id", "ind_rayleigh"}, {"patch", {{"channel", {{"kind", "ind_rayleigh"}}}}}});
    dv.push_back({{"id", "visibility_region"}, {"patch", {{"channel", {{"kind", "visibility_region"}}}}}});
    for (int c = 1; c <= 3; ++c)
        dv.push_back({{"id", "case" + std::to_string(c)}, {"patch", {{"geometry", {{"user_line", case_layout(c)}}}}}});
    out.push_back({"fig9-lmmse", "LMMSE against the MRC bound, 64-QAM, M = 512, d_perp = 50 m",
                   {{"geometry", {{"antennas", 512}, {"d_perp_m", 50.0}, {"user_line", case_layout(3)}}},
                    {"experiment",
                     {{"mode", "detection"},
                      {"trials", 2000},
                      {"vectors_per_trial", 8},
                      {"modulation_order", 64},
                      {"gamma_grid", {{"start_db", 0.0}, {"stop_db", 32.0}, {"points", 17}}},
                      {"variants", dv}}}}});
    return out;
}

inline std::size_t levenshtein(const std::string& a, const std::string& b)
{
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

} // namespace detail

inline const std::vector<Preset>& preset_catalog()
{
    static const std::vector<Preset> catalog = detail::build_catalog();
    return catalog;
}

inline const Preset& find_preset(const std::string& name)
{
    const auto& cat = preset_catalog();
    for (const auto& p : cat)
        if (p.name == name)
            return p;
    const Preset* best = &cat.front();
    std::size_t best_d = std::numeric_limits<std::size_t>::max();
    for (const auto& p : cat) {
        const auto d = detail::levenshtein(name, p.name);
        if (d < best_d) {
            best_d = d;
            best = &p;
        }
    }
    throw ConfigError("unknown preset '" + name + "'; did you mean '" + best->name + "'?");
}

/// Applies "a.b.c=value". The value is parsed as JSON when possible, otherwise kept as a string.
inline void apply_override(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "': expected key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty())
            throw ConfigError("override '" + assignment + "': empty path component");
        if (!node->is_object())
            throw ConfigError("override '" + assignment + "': '" + key + "' is not inside an object");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        if (node->is_null())
            *node = json::object();
        start = dot + 1;
    }
}

enum class ExperimentMode { Capacity, Hardening, Detection };

struct Variant {
    std::string id;
    json patch;
};

struct ExperimentSettings {
    ExperimentMode mode = ExperimentMode::Capacity;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::vector<double> gamma_db = {10.0};
    std::vector<Family> families;
    bool regression = false;
    std::vector<std::size_t> antennas;
    std::vector<Variant> variants;
    std::size_t modulation_order = 64;
    std::size_t vectors_per_trial = 8;
    bool literal_lmmse = false;
};

inline ExperimentSettings experiment_from_json(const json& doc)
{
    ExperimentSettings e;
    const json block = doc.contains("experiment") ? doc.at("experiment") : json::object();
    detail::ObjectReader r(block, "experiment");
    const auto mode = r.text("mode", "capacity");
    if (mode == "capacity") e.mode = ExperimentMode::Capacity;
    else if (mode == "hardening") e.mode = ExperimentMode::Hardening;
    else if (mode == "detection") e.mode = ExperimentMode::Detection;
    else throw ConfigError("experiment.mode: expected 'capacity', 'hardening' or 'detection'");
    e.trials = r.count("trials", e.trials);
    if (e.trials < 1)
        throw ConfigError("experiment.trials must be at least 1");
    e.seed = r.count("seed", e.seed);
    if (r.has("gamma_db") && r.has("gamma_grid"))
        throw ConfigError("experiment: give either gamma_db or gamma_grid, not both");
    if (r.has("gamma_grid")) {
        detail::ObjectReader g(r.raw("gamma_grid"), "experiment.gamma_grid");
        const double a = g.number("start_db", 10.0), b = g.number("stop_db", 30.0);
        const std::size_t n = g.count("points", 11);
        g.finish();
        if (n < 1) throw ConfigError("experiment.gamma_grid.points must be at least 1");
        e.gamma_db.clear();
        for (std::size_t i = 0; i < n; ++i)
            e.gamma_db.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
        r.raw("gamma_db");
    } else {
        r.raw("gamma_grid");
        if (r.has("gamma_db")) {
            const auto& g = r.raw("gamma_db");
            if (!g.is_array() || g.empty()) throw ConfigError("experiment.gamma_db must be a non-empty array");
            e.gamma_db.clear();
            for (const auto& v : g) {
                if (!v.is_number()) throw ConfigError("experiment.gamma_db must hold numbers");
                e.gamma_db.push_back(v.get<double>());
            }
        }
    }
    for (std::size_t i = 1; i < e.gamma_db.size(); ++i)
        if (!(e.gamma_db[i] > e.gamma_db[i - 1]))
            throw ConfigError("experiment.gamma_db must be strictly increasing");
    if (r.has("families")) {
        const auto& f = r.raw("families");
        if (!f.is_array()) throw ConfigError("experiment.families must be an array");
        for (const auto& v : f) {
            if (!v.is_string()) throw ConfigError("experiment.families must hold strings");
            try {
                e.families.push_back(family_from_string(v.get<std::string>()));
            } catch (const ConfigError& ex) {
                throw ConfigError(std::string("experiment.families: ") + ex.what());
            }
        }
    } else {
        r.raw("families");
    }
    e.regression = r.boolean("regression", false);
    if (e.regression && (e.families.empty() || e.gamma_db.size() < 2))
        throw ConfigError("experiment.regression needs families and at least two SNR points");
    if (r.has("antennas")) {
        for (const auto& v : r.raw("antennas")) {
            if (!v.is_number_integer() || v.get<long long>() < 1)
                throw ConfigError("experiment.antennas must hold positive integers");
            e.antennas.push_back(v.get<std::size_t>());
        }
    } else {
        r.raw("antennas");
    }
    if (e.mode == ExperimentMode::Hardening && e.antennas.empty())
        throw ConfigError("experiment.antennas is required in hardening mode");
    if (r.has("variants")) {
        const auto& vs = r.raw("variants");
        if (!vs.is_array()) throw ConfigError("experiment.variants must be an array");
        for (std::size_t i = 0; i < vs.size(); ++i) {
            detail::ObjectReader v(vs[i], "experiment.variants[" + std::to_string(i) + "]");
            Variant var;
            var.id = v.text("id", "variant" + std::to_string(i));
            var.patch = v.has("patch") ? v.raw("patch") : json::object();
            v.raw("patch");
            v.finish();
            e.variants.push_back(var);
        }
    } else {
        r.raw("variants");
    }
    e.modulation_order = r.count("modulation_order", e.modulation_order);
    e.vectors_per_trial = r.count("vectors_per_trial", e.vectors_per_trial);
    e.literal_lmmse = r.boolean("literal_lmmse", false);
    r.finish();
    return e;
}

inline json experiment_to_json(const ExperimentSettings& e)
{
    json fam = json::array();
    for (auto f : e.families)
        fam.push_back(to_string(f));
    json vars = json::array();
    for (const auto& v : e.variants)
        vars.push_back({{"id", v.id}, {"patch", v.patch}});
    const char* mode = e.mode == ExperimentMode::Capacity ? "capacity"
                       : e.mode == ExperimentMode::Hardening ? "hardening"
                                                             : "detection";
    return {{"mode", mode},
            {"trials", e.trials},
            {"seed", e.seed},
            {"gamma_db", e.gamma_db},
            {"families", fam},
            {"regression", e.regression},
            {"antennas", e.antennas},
            {"variants", vars},
            {"modulation_order", e.modulation_order},
            {"vectors_per_trial", e.vectors_per_trial},
            {"literal_lmmse", e.literal_lmmse}};
}

/// Scenario of a document after merging a variant patch.
inline ScenarioConfig variant_scenario(const json& doc, const json& patch)
{
    json d = doc;
    d.erase("experiment");
    d.merge_patch(patch);
    return scenario_from_json(d);
}

// ---------------------------------------------------------------------------
// Capacity experiments

struct CellFit {
    std::size_t gamma_index = 0;
    FitResult fit;
};

struct CapacityResult {
    std::string scenario_id;
    std::vector<double> gamma_db;
    std::vector<std::vector<TrialMetrics>> metrics; // [gamma][trial]
    std::vector<CellFit> fits;                      // grouped by gamma, then family order
    std::vector<RegressionResult> regressions;
    std::vector<double> mean_power; // per trial, ||H||^2 / (M N)

    std::vector<double> capacities(std::size_t g) const
    {
        std::vector<double> c;
        for (const auto& m : metrics[g])
            c.push_back(m.capacity);
        return c;
    }

    const FitResult* fit(std::size_t g, Family f) const
    {
        for (const auto& r : fits)
            if (r.fit.family == f && r.gamma_index == g)
                return &r.fit;
        return nullptr;
    }

    const RegressionResult* regression(Family f) const
    {
        for (const auto& r : regressions)
            if (r.family == f)
                return &r;
        return nullptr;
    }
};

inline double condition_from_eigenvalues(const Eigen::VectorXd& eig)
{
    const double lmax = eig.maxCoeff(), lmin = eig.minCoeff();
    if (!(lmax > 0.0))
        throw NumericError("condition_number: all-zero matrix");
    if (lmin <= static_cast<double>(eig.size()) * 1e-15 * lmax)
        return std::numeric_limits<double>::infinity();
    return std::sqrt(lmax / lmin);
}

inline CapacityResult run_capacity(const ScenarioConfig& scenario, const ExperimentSettings& e, std::size_t workers,
                                   const std::string& scenario_id = "custom")
{
    const ChannelSynthesizer synth(scenario);
    CapacityResult res;
    res.scenario_id = scenario_id;
    res.gamma_db = e.gamma_db;
    const std::size_t G = e.gamma_db.size();
    res.metrics.assign(G, std::vector<TrialMetrics>(e.trials));
    res.mean_power.assign(e.trials, 0.0);
    const std::size_t N = synth.cols();
    parallel_for(e.trials, workers, [&](std::size_t t) {
        const auto ch = synth.synthesize(e.seed, t);
        const auto eig = gram_eigenvalues(ch.H);
        const double fro = std::sqrt(std::max(0.0, eig.sum()));
        const double cond = condition_from_eigenvalues(eig);
        res.mean_power[t] = eig.sum() / static_cast<double>(ch.H.size());
        for (std::size_t g = 0; g < G; ++g) {
            auto& m = res.metrics[g][t];
            m.trial = t;
            m.gamma_db = e.gamma_db[g];
            m.capacity = capacity_from_eigenvalues(eig, db_to_power(e.gamma_db[g]), N);
            m.fro_norm = fro;
            m.condition_number = cond;
        }
    });
    if (!e.families.empty()) {
        const std::size_t F = e.families.size();
        std::vector<std::vector<double>> samples(G);
        for (std::size_t g = 0; g < G; ++g)
            samples[g] = res.capacities(g);
        res.fits.resize(G * F);
        parallel_for(G * F, workers, [&](std::size_t k) {
            const std::size_t g = k / F;
            res.fits[k] = {g, mle_fit(e.families[k % F], samples[g])};
        });
        if (e.regression) {
            for (std::size_t fi = 0; fi < F; ++fi) {
                std::vector<FitResult> per;
                for (std::size_t g = 0; g < G; ++g)
                    per.push_back(res.fits[g * F + fi].fit);
                res.regressions.push_back(regress_family(e.families[fi], e.gamma_db, per, samples));
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Hardening and detection experiments

struct HardeningRow {
    std::string variant;
    std::size_t antennas = 0;
    std::size_t n = 0;
    std::size_t trials = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

inline std::vector<HardeningRow> run_hardening(const json& doc, const ExperimentSettings& e, std::size_t workers)
{
    std::vector<HardeningRow> rows;
    std::vector<Variant> variants = e.variants;
    if (variants.empty())
        variants.push_back({"base", json::object()});
    for (const auto& v : variants) {
        for (std::size_t M : e.antennas) {
            json patch = v.patch;
            patch["geometry"]["antennas"] = M;
            const auto sc = variant_scenario(doc, patch);
            ExperimentSettings one = e;
            one.gamma_db = {e.gamma_db.front()};
            one.families.clear();
            one.regression = false;
            const auto r = run_capacity(sc, one, workers);
            const auto c = r.capacities(0);
            const auto st = ensemble_stats(c);
            rows.push_back({v.id, M, sc.layout.total_antennas(), e.trials, st.mean, st.stddev});
        }
    }
    return rows;
}

struct DetectionVariantResult {
    std::string variant;
    std::vector<SerPoint> points;
    std::optional<double> lmmse_crossing_db;
    std::optional<double> mrc_crossing_db;

    std::optional<double> gap_db() const
    {
        if (lmmse_crossing_db && mrc_crossing_db)
            return *lmmse_crossing_db - *mrc_crossing_db;
        return std::nullopt;
    }

    std::vector<double> ser(const std::string& detector) const
    {
        std::vector<double> s;
        for (const auto& p : points)
            if (p.detector == detector)
                s.push_back(p.ser());
        return s;
    }
};

inline std::vector<DetectionVariantResult> run_detection(const json& doc, const ExperimentSettings& e,
                                                         std::size_t workers, double target_ser = 1e-3)
{
    std::vector<DetectionVariantResult> out;
    std::vector<Variant> variants = e.variants;
    if (variants.empty())
        variants.push_back({"base", json::object()});
    for (const auto& v : variants) {
        DetectionRun run;
        run.scenario = variant_scenario(doc, v.patch);
        run.gamma_db = e.gamma_db;
        run.trials = e.trials;
        run.vectors_per_trial = e.vectors_per_trial;
        run.modulation_order = e.modulation_order;
        run.seed = e.seed;
        run.literal_lmmse = e.literal_lmmse;
        run.workers = workers;
        DetectionVariantResult r;
        r.variant = v.id;
        r.points = ser_sweep(run);
        for (auto& p : r.points)
            p.channel_kind = v.id;
        r.lmmse_crossing_db = ser_crossing(e.gamma_db, r.ser("lmmse"), target_ser);
        r.mrc_crossing_db = ser_crossing(e.gamma_db, r.ser("mrc_bound"), target_ser);
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bundle output

inline std::uint64_t fnv1a64(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

/// Resolved configuration: the base scenario in full plus the parsed experiment block.
inline json resolved_config(const json& doc)
{
    json base = doc;
    base.erase("experiment");
    json r = to_json(scenario_from_json(base));
    r["experiment"] = experiment_to_json(experiment_from_json(doc));
    return r;
}

struct RunOptions {
    std::filesystem::path out_dir = "elaa_out";
    std::size_t workers = 1;
    std::string scenario_id = "custom";
};

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p)
{
    std::ofstream os(p, std::ios::binary);
    if (!os)
        throw NumericError("cannot open '" + p.string() + "' for writing");
    os << std::setprecision(17);
    return os;
}

inline void write_json(const std::filesystem::path& p, const json& j)
{
    auto os = open_output(p);
    os << j.dump(2) << '\n';
    if (!os)
        throw NumericError("failed writing '" + p.string() + "'");
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

} // namespace detail

/// Runs a document and writes its bundle; returns the manifest.
inline json run_experiment(const json& doc, const RunOptions& opt)
{
    const json resolved = resolved_config(doc);
    const auto e = experiment_from_json(doc);
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec)
        throw NumericError("cannot create output directory '" + opt.out_dir.string() + "': " + ec.message());

    json outputs = json::array();
    json base = doc;
    base.erase("experiment");

    if (e.mode == ExperimentMode::Capacity) {
        const auto sc = scenario_from_json(base);
        const auto r = run_capacity(sc, e, opt.workers, opt.scenario_id);
        {
            auto os = detail::open_output(opt.out_dir / "trials.csv");
            os << kTrialCsvHeader << '\n';
            for (std::size_t t = 0; t < e.trials; ++t)
                for (std::size_t g = 0; g < r.gamma_db.size(); ++g)
                    write_trial_row(os, r.metrics[g][t]);
            outputs.push_back("trials.csv");
        }
        if (!r.fits.empty()) {
            json recs = json::array();
            for (const auto& f : r.fits)
                recs.push_back(fit_record(opt.scenario_id, r.gamma_db[f.gamma_index], f.fit));
            detail::write_json(opt.out_dir / "fits.json", {{"records", recs}});
            outputs.push_back("fits.json");
        }
        if (!r.regressions.empty()) {
            json recs = json::array(), per = json::array();
            for (const auto& reg : r.regressions) {
                for (auto& x : regression_records(opt.scenario_id, reg))
                    recs.push_back(x);
                for (std::size_t g = 0; g < reg.gamma_db.size(); ++g)
                    per.push_back({{"scenario_id", opt.scenario_id},
                                   {"family", to_string(reg.family)},
                                   {"gamma_db", reg.gamma_db[g]},
                                   {"fit_theta_err", reg.fit_theta_err[g]},
                                   {"regression_theta_err", reg.regression_theta_err[g]}});
            }
            detail::write_json(opt.out_dir / "regression.json", {{"records", recs}, {"theta_err", per}});
            outputs.push_back("regression.json");
        }
    } else if (e.mode == ExperimentMode::Hardening) {
        const auto rows = run_hardening(doc, e, opt.workers);
        auto os = detail::open_output(opt.out_dir / "hardening.csv");
        os << "variant,antennas,m_over_n,trials,mean_capacity,std_capacity\n";
        for (const auto& h : rows)
            os << h.variant << ',' << h.antennas << ',' << static_cast<double>(h.antennas) / static_cast<double>(h.n)
               << ',' << h.trials << ',' << h.mean << ',' << h.stddev << '\n';
        outputs.push_back("hardening.csv");
    } else {
        const auto res = run_detection(doc, e, opt.workers);
        auto os = detail::open_output(opt.out_dir / "ser.csv");
        os << kSerCsvHeader << '\n';
        json gaps = json::array();
        for (const auto& v : res) {
            for (const auto& p : v.points)
                write_ser_row(os, p);
            gaps.push_back({{"variant", v.variant},
                            {"target_ser", 1e-3},
                            {"lmmse_db", detail::optional_number(v.lmmse_crossing_db)},
                            {"mrc_bound_db", detail::optional_number(v.mrc_crossing_db)},
                            {"gap_db", detail::optional_number(v.gap_db())}});
        }
        outputs.push_back("ser.csv");
        detail::write_json(opt.out_dir / "gaps.json", {{"records", gaps}});
        outputs.push_back("gaps.json");
    }

    json manifest = {{"scenario_id", opt.scenario_id},
                     {"config", resolved},
                     {"config_hash", hex64(fnv1a64(resolved.dump()))},
                     {"seed", e.seed},
                     {"trials", e.trials},
                     {"version", ELAA_VERSION},
                     {"outputs", outputs}};
    detail::write_json(opt.out_dir / "manifest.json", manifest);
    return manifest;
}

} // namespace elaa

#endif
