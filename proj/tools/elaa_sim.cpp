// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// elaa_sim: command-line front end.
//   run --preset NAME | --config FILE [--seed S] [--trials T] [--out DIR] [--workers W] [--override k=v]...
//   list-presets [--json]
//   fit --input trials.csv [--family all|gaussian|weibull|skew_normal] [--out FILE]
//   dump-channel --preset NAME --trial K [--format csv|binary] [--out FILE] [--states FILE] [--rss FILE]
// Exit codes: 0 ok, 2 configuration error, 3 runtime error.

#include "elaa/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using elaa::json;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw elaa::ConfigError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

json load_document(const std::string& preset, const std::string& config_path, const std::vector<std::string>& overrides)
{
    json doc;
    if (!preset.empty() && !config_path.empty())
        throw elaa::ConfigError("give either --preset or --config, not both");
    if (!preset.empty()) {
        doc = elaa::find_preset(preset).config;
    } else if (!config_path.empty()) {
        try {
            doc = json::parse(read_file(config_path));
        } catch (const json::parse_error& e) {
            throw elaa::ConfigError(config_path + ": not valid JSON: " + e.what());
        }
    } else {
        throw elaa::ConfigError("one of --preset or --config is required");
    }
    for (const auto& o : overrides)
        elaa::apply_override(doc, o);
    return doc;
}

int cmd_list(bool as_json)
{
    const auto& cat = elaa::preset_catalog();
    if (as_json) {
        json arr = json::array();
        for (const auto& p : cat)
            arr.push_back({{"name", p.name}, {"artifact", p.artifact}, {"config", p.config}});
        std::cout << arr.dump(2) << '\n';
        return 0;
    }
    std::size_t w = 0;
    for (const auto& p : cat)
        w = std::max(w, p.name.size());
    for (const auto& p : cat)
        std::cout << std::left << std::setw(static_cast<int>(w) + 2) << p.name << p.artifact << '\n';
    return 0;
}

int cmd_run(const std::string& preset, const std::string& config_path, std::vector<std::string> overrides,
            const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& trials, std::string out,
            std::size_t workers)
{
    if (seed)
        overrides.push_back("experiment.seed=" + std::to_string(*seed));
    if (trials)
        overrides.push_back("experiment.trials=" + std::to_string(*trials));
    const json doc = load_document(preset, config_path, overrides);
    elaa::RunOptions opt;
    opt.scenario_id = preset.empty() ? "custom" : preset;
    opt.out_dir = out.empty() ? std::filesystem::path("elaa_out") / opt.scenario_id : std::filesystem::path(out);
    opt.workers = workers == 0 ? elaa::default_workers() : workers;
    const json manifest = elaa::run_experiment(doc, opt);
    std::cerr << "wrote " << opt.out_dir.string() << " (config " << manifest.at("config_hash").get<std::string>()
              << ")\n";
    return 0;
}

int cmd_fit(const std::string& input, const std::string& family, const std::string& out, const std::string& scenario_id)
{
    std::ifstream is(input);
    if (!is)
        throw elaa::ConfigError("cannot read '" + input + "'");
    std::string line;
    if (!std::getline(is, line))
        throw elaa::ConfigError(input + ": empty file");
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ','))
            cols.push_back(c);
    }
    const auto col = [&](const std::string& name) {
        const auto it = std::find(cols.begin(), cols.end(), name);
        if (it == cols.end())
            throw elaa::ConfigError(input + ": missing column '" + name + "'");
        return static_cast<std::size_t>(it - cols.begin());
    };
    const std::size_t gcol = col("gamma_db"), ccol = col("capacity");
    std::map<double, std::vector<double>> by_gamma;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ','))
            f.push_back(c);
        if (f.size() != cols.size())
            throw elaa::ConfigError(input + ": row " + std::to_string(row) + " has " + std::to_string(f.size()) +
                                    " fields, expected " + std::to_string(cols.size()));
        try {
            by_gamma[std::stod(f[gcol])].push_back(std::stod(f[ccol]));
        } catch (const std::exception&) {
            throw elaa::ConfigError(input + ": row " + std::to_string(row) + ": non-numeric gamma_db or capacity");
        }
    }
    std::vector<elaa::Family> fams;
    if (family == "all")
        fams.assign(elaa::kAllFamilies.begin(), elaa::kAllFamilies.end());
    else
        fams.push_back(elaa::family_from_string(family));
    json recs = json::array();
    for (const auto& [g, x] : by_gamma)
        for (auto f : fams)
            recs.push_back(elaa::fit_record(scenario_id, g, elaa::mle_fit(f, x)));
    const json doc = {{"records", recs}};
    if (out.empty()) {
        std::cout << std::setprecision(17) << doc.dump(2) << '\n';
    } else {
        std::ofstream os(out);
        if (!os)
            throw elaa::NumericError("cannot open '" + out + "' for writing");
        os << doc.dump(2) << '\n';
    }
    return 0;
}

int cmd_dump(const std::string& preset, const std::string& config_path, const std::vector<std::string>& overrides,
             std::uint64_t trial, const std::optional<std::uint64_t>& seed, const std::string& format,
             const std::string& out, const std::string& states, const std::string& rss)
{
    json doc = load_document(preset, config_path, overrides);
    const auto e = elaa::experiment_from_json(doc);
    doc.erase("experiment");
    const elaa::ChannelSynthesizer synth(elaa::scenario_from_json(doc));
    elaa::LinkDraws draws;
    const auto ch = synth.synthesize(seed.value_or(e.seed), trial, &draws);
    const auto write = [&](std::ostream& os) {
        if (format == "binary")
            elaa::write_channel_binary(os, ch);
        else
            elaa::write_channel_csv(os, ch);
    };
    if (out.empty()) {
        write(std::cout);
    } else {
        std::ofstream os(out, std::ios::binary);
        if (!os)
            throw elaa::NumericError("cannot open '" + out + "' for writing");
        write(os);
    }
    if (!states.empty()) {
        std::ofstream os(states);
        if (!os)
            throw elaa::NumericError("cannot open '" + states + "' for writing");
        elaa::write_state_csv(os, draws);
    }
    if (!rss.empty()) {
        std::ofstream os(rss);
        if (!os)
            throw elaa::NumericError("cannot open '" + rss + "' for writing");
        elaa::write_rss_csv(os, ch);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"elaa_sim: spatially non-stationary ELAA-MIMO channel simulator"};
    app.set_version_flag("--version", ELAA_VERSION);
    app.require_subcommand(1);

    std::string preset, config_path, out, family = "all", input, scenario_id = "input", format = "csv", states, rss;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::size_t workers = 0;
    std::uint64_t trial = 0;
    bool as_json = false;

    auto* run = app.add_subcommand("run", "run a preset or a configuration file and write a result bundle");
    run->add_option("--preset", preset, "preset name (see list-presets)");
    run->add_option("--config", config_path, "JSON configuration file");
    run->add_option("--seed", seed, "root seed");
    run->add_option("--trials", trials, "Monte Carlo trials");
    run->add_option("--out", out, "output directory (default elaa_out/<preset>)");
    run->add_option("--workers", workers, "worker threads (0 = hardware concurrency)");
    run->add_option("--override", overrides, "dotted key=value override, repeatable");

    auto* list = app.add_subcommand("list-presets", "list the preset catalog");
    list->add_flag("--json", as_json, "machine-readable output");

    auto* fit = app.add_subcommand("fit", "fit capacity samples from a trials CSV");
    fit->add_option("--input", input, "trials.csv from a run")->required();
    fit->add_option("--family", family, "all, gaussian, weibull or skew_normal");
    fit->add_option("--out", out, "output JSON file (default stdout)");
    fit->add_option("--scenario-id", scenario_id, "scenario id written into the records");

    auto* dump = app.add_subcommand("dump-channel", "write one channel realization");
    dump->add_option("--preset", preset, "preset name");
    dump->add_option("--config", config_path, "JSON configuration file");
    dump->add_option("--trial", trial, "trial index")->required();
    dump->add_option("--seed", seed, "root seed (default: the preset seed)");
    dump->add_option("--override", overrides, "dotted key=value override, repeatable");
    dump->add_option("--format", format, "csv or binary")->check(CLI::IsMember({"csv", "binary"}));
    dump->add_option("--out", out, "output file (default stdout)");
    dump->add_option("--states", states, "also write the per-UT LoS-state CSV here");
    dump->add_option("--rss", rss, "also write the RSS (dB) CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*list)
            return cmd_list(as_json);
        if (*run)
            return cmd_run(preset, config_path, overrides, seed, trials, out, workers);
        if (*fit)
            return cmd_fit(input, family, out, scenario_id);
        if (*dump)
            return cmd_dump(preset, config_path, overrides, trial, seed, format, out, states, rss);
    } catch (const elaa::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
