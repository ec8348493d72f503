// Drives the fbenn executable as a subprocess.
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string err;
};

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("fbenn_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Result cli(const std::string& args, const fs::path& dir) {
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string(FBENN_CLI_PATH) + " " + args + " > /dev/null 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

const char* scenario = R"(name = hump
equation = FBENN
p = 0.5
alpha = 1
grid.x0 = -8
grid.dx = 0.05
grid.n = 321
initial = gaussian
initial.amplitude = 0.8
t_end = 0.1
dt = 0.0005
snapshots = 2
)";

}  // namespace

TEST(Cli, RepeatedRunsAreByteIdentical) {
    const auto dir = scratch("determinism");
    std::ofstream(dir / "hump.scn") << scenario;
    for (const char* sub : {"a", "b"}) {
        const auto r = cli("run " + (dir / "hump.scn").string() + " --quiet --out-dir " + (dir / sub).string(), dir);
        ASSERT_EQ(r.code, 0) << r.err;
    }
    const auto a = slurp(dir / "a" / "hump_fields.csv");
    ASSERT_FALSE(a.empty());
    EXPECT_EQ(a.rfind("x,t,phi\n", 0), 0u);
    EXPECT_EQ(a, slurp(dir / "b" / "hump_fields.csv"));
    EXPECT_TRUE(fs::exists(dir / "a" / "hump_summary.json"));
}

TEST(Cli, InvalidConfigurationExitsTwoAndNamesKey) {
    const auto dir = scratch("invalid");
    std::string bad = scenario;
    bad.replace(bad.find("p = 0.5"), 7, "p = 1.5");
    std::ofstream(dir / "bad.scn") << bad;
    const auto r = cli("run " + (dir / "bad.scn").string(), dir);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("'p'"), std::string::npos) << r.err;

    std::string unstable = scenario;
    unstable.replace(unstable.find("dt = 0.0005"), 11, "dt = 0.01");
    std::ofstream(dir / "unstable.scn") << unstable;
    const auto u = cli("run " + (dir / "unstable.scn").string(), dir);
    EXPECT_EQ(u.code, 2);
    EXPECT_NE(u.err.find("'dt'"), std::string::npos) << u.err;

    std::ofstream(dir / "extra.scn") << scenario << "colour = red\n";
    const auto e = cli("run " + (dir / "extra.scn").string(), dir);
    EXPECT_EQ(e.code, 2);
    EXPECT_NE(e.err.find("'colour'"), std::string::npos) << e.err;
}

TEST(Cli, BlowUpExitsThree) {
    const auto dir = scratch("blowup");
    std::string steep = scenario;
    steep.replace(steep.find("alpha = 1"), 9, "alpha = 0.0001");
    steep.replace(steep.find("dt = 0.0005"), 11, "dt = 0.001");
    steep.replace(steep.find("initial.amplitude = 0.8"), 23, "initial.amplitude = 50");
    std::ofstream(dir / "steep.scn") << steep;
    const auto r = cli("run " + (dir / "steep.scn").string() + " --quiet", dir);
    EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, SweepWritesContinuityTable) {
    const auto dir = scratch("sweep");
    std::ofstream(dir / "hump.scn") << scenario;
    const auto r = cli("sweep " + (dir / "hump.scn").string() + " --p 0,0.5,1 --quiet --out-dir " + dir.string(), dir);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto table = slurp(dir / "hump_continuity.csv");
    EXPECT_EQ(table.rfind("p_from,p_to,linf\n0,0.5,", 0), 0u) << table;
    EXPECT_TRUE(fs::exists(dir / "hump_p0.5_fields.csv"));

    // A singleton sweep reproduces the plain run.
    const auto s = cli("sweep " + (dir / "hump.scn").string() + " --p 0.5 --quiet --out-dir " + (dir / "one").string(), dir);
    ASSERT_EQ(s.code, 0) << s.err;
    const auto run = cli("run " + (dir / "hump.scn").string() + " --quiet --out-dir " + (dir / "run").string(), dir);
    ASSERT_EQ(run.code, 0) << run.err;
    EXPECT_EQ(slurp(dir / "one" / "hump_p0.5_fields.csv"), slurp(dir / "run" / "hump_fields.csv"));
}

TEST(Cli, MissingFileAndBadArguments) {
    const auto dir = scratch("args");
    EXPECT_EQ(cli("run " + (dir / "nope.scn").string(), dir).code, 2);
    EXPECT_EQ(cli("frobnicate", dir).code, 2);
}
