#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gkforge/cli/run.hpp"

using namespace gkforge;
using gkforge::cli::RunConfig;

namespace {

std::string sample(const std::string& name) { return std::string(GKFORGE_SAMPLES_DIR) + "/" + name; }

struct Result {
    int code;
    std::string out, err;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Result invoke(const RunConfig& cfg)
{
    std::ostringstream out, err;
    int code = cli::run(cfg, out, err);
    return {code, out.str(), err.str()};
}

RunConfig instance(const std::string& cmd, const std::string& alg, const std::string& met)
{
    RunConfig c;
    c.command = cmd;
    c.algebra_path = sample(alg);
    c.metric_path = sample(met);
    return c;
}

std::string temp_file(const std::string& name, const std::string& text)
{
    auto p = std::filesystem::temp_directory_path() / ("gkforge_test_" + name);
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST(Cli, ClassifyHeisenberg)
{
    auto cfg = instance("classify", "n5g3.json", "id3.json");
    cfg.expect = "infinitely_balanced";
    auto r = invoke(cfg);
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    EXPECT_EQ(j["command"], "classify");
    EXPECT_EQ(j["exit_code"], 0);
    EXPECT_TRUE(j["report"]["flags"]["infinitely_balanced"]["holds"].get<bool>());
}

TEST(Cli, ExpectationFailureExitsOne)
{
    auto cfg = instance("classify", "n5g3.json", "id3.json");
    cfg.expect = "kahler";
    EXPECT_EQ(invoke(cfg).code, 1);
}

TEST(Cli, LiftReportsLevelsAndFlags)
{
    auto cfg = instance("lift", "exem1a.json", "exem1a_metric.json");
    cfg.k = 2;
    auto r = invoke(cfg);
    ASSERT_EQ(r.code, 0) << r.err;
    auto levels = r.json()["report"]["levels"];
    ASSERT_EQ(levels.size(), 3u);
    EXPECT_EQ(levels[0]["alpha"], nlohmann::json({"-3", "0", "0"}));
    EXPECT_FALSE(levels[0]["flags"].contains("balanced"));
    EXPECT_FALSE(levels[2]["flags"]["balanced"].get<bool>());
    EXPECT_TRUE(r.json()["report"]["closed_form_defects"].empty());
}

TEST(Cli, NotLeftSymmetricNamesTheTriple)
{
    auto r = invoke(instance("classify", "not_left_symmetric.json", "id2.json"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("NotLeftSymmetric"), std::string::npos);
    EXPECT_NE(r.err.find("(1,2,1)"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, MissingAndMalformedFiles)
{
    auto cfg = instance("classify", "n5g3.json", "id3.json");
    cfg.algebra_path = "/nonexistent/alg.json";
    EXPECT_EQ(invoke(cfg).code, 2);

    cfg.algebra_path = temp_file("bad.json", "{\"dim\": 2,\n");
    auto r = invoke(cfg);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bad.json:2:1"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors)
{
    auto cfg = instance("classify", "n5g3.json", "id3.json");
    cfg.kmax = 0;
    EXPECT_EQ(invoke(cfg).code, 2);
    cfg.kmax = 2;
    cfg.tol = -1.0;
    EXPECT_EQ(invoke(cfg).code, 2);
    RunConfig t;
    t.command = "tables";
    t.which = "2";
    EXPECT_EQ(invoke(t).code, 2);
    t.command = "nope";
    EXPECT_EQ(invoke(t).code, 2);
}

TEST(Cli, ChartSamples)
{
    RunConfig c;
    c.command = "chart";
    c.config_path = sample("chart_exemple.json");
    auto ok = invoke(c);
    EXPECT_EQ(ok.code, 0) << ok.err;
    for (const auto& chk : ok.json()["report"]["checks"]) EXPECT_TRUE(chk["holds"].get<bool>());

    c.config_path = sample("chart_diagonal_exp.json");
    EXPECT_EQ(invoke(c).code, 0);

    c.config_path = sample("chart_not_pluriclosed.json");
    auto bad = invoke(c);
    EXPECT_EQ(bad.code, 1);
    EXPECT_FALSE(bad.json()["report"]["checks"][0]["holds"].get<bool>());
}

TEST(Cli, TablesSubset)
{
    RunConfig c;
    c.command = "tables";
    c.which = "5";
    c.samples = 4;
    auto r = invoke(c);
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, ReportsAreByteIdentical)
{
    auto cfg = instance("classify", "exem1a.json", "exem1a_metric.json");
    EXPECT_EQ(invoke(cfg).out, invoke(cfg).out);
    RunConfig t;
    t.command = "tables";
    t.which = "7";
    t.samples = 3;
    EXPECT_EQ(invoke(t).out, invoke(t).out);
}

TEST(Cli, FloatBackend)
{
    auto cfg = instance("classify", "n5g3.json", "id3.json");
    cfg.backend = "float";
    auto r = invoke(cfg);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["backend"], "float");
    EXPECT_TRUE(r.json()["report"]["flags"]["infinitely_balanced"]["holds"].get<bool>());
}

TEST(Cli, WritesToOutPath)
{
    auto cfg = instance("classify", "n5g3.json", "id3.json");
    cfg.out_path = (std::filesystem::temp_directory_path() / "gkforge_test_out.json").string();
    auto r = invoke(cfg);
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(cfg.out_path);
    EXPECT_EQ(nlohmann::json::parse(f)["command"], "classify");
}

TEST(CliBinary, BadFlagExitsTwo)
{
    std::string cmd = std::string(GKFORGE_CLI_PATH) + " classify --bogus >/dev/null 2>&1";
    int st = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(st));
    EXPECT_EQ(WEXITSTATUS(st), 2);
    std::string ok = std::string(GKFORGE_CLI_PATH) + " classify --algebra " + sample("n5g3.json") + " --metric " +
                     sample("id3.json") + " >/dev/null";
    st = std::system(ok.c_str());
    EXPECT_EQ(WEXITSTATUS(st), 0);
}
