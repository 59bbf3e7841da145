// SPDX-License-Identifier: Apache-2.0
//
// elaa-channel: spatially non-stationary fading channels for ELAA-MIMO link-level simulation
// ------------------------------------------------------------------------
//
// Runs the elaa_sim binary and checks exit codes and outputs.

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result sim(const std::string& args)
{
    const std::string cmd = std::string(ELAA_SIM_PATH) + " " + args + " 2>&1";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    char buf[4096];
    while (const auto n = std::fread(buf, 1, sizeof buf, p))
        r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("elaa_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST(Cli, ListPresets)
{
    const auto r = sim("list-presets");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("table1-case3-50m"), std::string::npos);
    const auto j = sim("list-presets --json");
    EXPECT_EQ(j.code, 0);
    EXPECT_GE(nlohmann::json::parse(j.out).size(), 13u);
}

TEST(Cli, UnknownPresetIsAConfigError)
{
    const auto r = sim("run --preset table1-case9-1m");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("did you mean"), std::string::npos);
}

TEST(Cli, BadGeometryIsAConfigError)
{
    const auto r = sim("run --preset case-study-1 --override geometry.d_perp_m=-1 --trials 1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("d_perp must be positive"), std::string::npos);
}

TEST(Cli, MissingArgumentsFail)
{
    EXPECT_EQ(sim("").code, 2);
    EXPECT_EQ(sim("run").code, 2);
    EXPECT_EQ(sim("dump-channel --preset case-study-1").code, 2);
}

TEST(Cli, RunThenRefit)
{
    const auto dir = scratch("run");
    const auto r = sim("run --preset table1-case2-25m --trials 20 --override geometry.antennas=64 --out " +
                       (dir / "b").string());
    ASSERT_EQ(r.code, 0) << r.out;
    ASSERT_TRUE(fs::exists(dir / "b" / "trials.csv"));
    const auto f = sim("fit --input " + (dir / "b" / "trials.csv").string() + " --family gaussian");
    ASSERT_EQ(f.code, 0) << f.out;
    const auto j = nlohmann::json::parse(f.out);
    EXPECT_EQ(j["records"].size(), 11u);

    std::ofstream(dir / "bad.csv") << "trial,snr,capacity\n0,10,1.0\n";
    const auto bad = sim("fit --input " + (dir / "bad.csv").string());
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.out.find("missing column 'gamma_db'"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, SeedChangesOutputsReproducibly)
{
    const auto dir = scratch("seed");
    const std::string base = "run --preset case-study-1 --trials 3 --override geometry.antennas=32 --out ";
    ASSERT_EQ(sim(base + (dir / "a").string() + " --seed 9").code, 0);
    ASSERT_EQ(sim(base + (dir / "b").string() + " --seed 9 --workers 2").code, 0);
    ASSERT_EQ(sim(base + (dir / "c").string() + " --seed 10").code, 0);
    const auto read = [](const fs::path& p) {
        std::ifstream is(p);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    EXPECT_EQ(read(dir / "a" / "trials.csv"), read(dir / "b" / "trials.csv"));
    EXPECT_NE(read(dir / "a" / "trials.csv"), read(dir / "c" / "trials.csv"));
    fs::remove_all(dir);
}

TEST(Cli, DumpChannel)
{
    const auto dir = scratch("dump");
    const auto r = sim("dump-channel --preset case-study-1 --trial 2 --override geometry.antennas=16 --out " +
                       (dir / "h.csv").string() + " --states " + (dir / "s.csv").string() + " --rss " +
                       (dir / "r.csv").string());
    ASSERT_EQ(r.code, 0) << r.out;
    std::ifstream h(dir / "h.csv");
    std::string line;
    std::getline(h, line);
    EXPECT_EQ(line.rfind("# M=16,N=40,seed=1,trial=2,kind=proposed", 0), 0u);
    std::ifstream s(dir / "s.csv");
    std::getline(s, line);
    EXPECT_EQ(line, "antenna,ut0,ut1,ut2,ut3,ut4,ut5,ut6,ut7,ut8,ut9");
    EXPECT_TRUE(fs::exists(dir / "r.csv"));
    const auto b = sim("dump-channel --preset case-study-1 --trial 0 --format binary --override geometry.antennas=8 --out " +
                       (dir / "h.bin").string());
    EXPECT_EQ(b.code, 0);
    EXPECT_EQ(fs::file_size(dir / "h.bin"), 8u + 40u + 8u + 8u * 40u * 16u);
    fs::remove_all(dir);
}
