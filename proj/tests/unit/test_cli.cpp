#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "tmlab/cli.hpp"
#include "tmlab/config.hpp"

using namespace tmlab;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tmlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = main_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(TMLAB_CONFIG_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(ConfigFile, ParsesAndRejects) {
    const auto c = ConfigFile::parse("# comment\nspace.kind = tripod  # trailing\nrun.steps=5\n");
    EXPECT_EQ(c.get("space.kind", ""), "tripod");
    EXPECT_EQ(c.get_u64("run.steps", 0), 5u);
    EXPECT_THROW(ConfigFile::parse("space.kind = a\nspace.kind = b\n"), ConfigError);
    EXPECT_THROW(ConfigFile::parse("space.colour = red\n"), ConfigError);
    EXPECT_THROW(ConfigFile::parse("just words\n"), ConfigError);
    try {
        ConfigFile::parse("run.steps = 1\n\nrun.stepz = 2\n", "x.cfg");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("x.cfg:3"), std::string::npos) << e.what();
    }
}

TEST(ConfigFile, ScenarioErrors) {
    EXPECT_THROW(build_scenario(ConfigFile::parse("family.kind = identity\nrun.u = 0,0\n")), ConfigError);
    EXPECT_THROW(build_scenario(ConfigFile::parse("run.u = 0,0\nrun.x0 = 3,0\nrates.K = 1\n")), InvalidInput);
    EXPECT_THROW(build_scenario(ConfigFile::parse("run.u = 0,0\nrun.x0 = 1,0\nrun.steps = many\n")), ConfigError);
    EXPECT_THROW(build_scenario(ConfigFile::parse("run.u = 0,0\nrun.x0 = 1,0\nschedule.Lambda = 0\n")), InvalidInput);
    const auto ok = build_scenario(ConfigFile::parse("run.u = 0,0\nrun.x0 = 1,0\nrates.K = 4\n"));
    EXPECT_EQ(ok.scenario.bounds.K, 4);
}

TEST(CmdRun, IdentityCsv) {
    const auto r = cli({"run", config("identity.cfg"), "--steps", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 6u);
    EXPECT_EQ(l[1], "n,x_0,d_step,d_Tn,d_p");
    EXPECT_EQ(l[2].substr(0, 4), "0,1,");
    EXPECT_EQ(l[3].substr(0, 6), "1,0.5,");
    EXPECT_EQ(l[4].substr(0, 22), "2,0.33333333333333331,");
    EXPECT_EQ(l[5].substr(0, 7), "3,0.25,");
    EXPECT_TRUE(r.err.empty());
}

TEST(CmdRun, Errors) {
    EXPECT_EQ(cli({"run", "/nonexistent/config.cfg"}).code, 2);
    EXPECT_FALSE(cli({"run", "/nonexistent/config.cfg"}).err.empty());
    EXPECT_EQ(cli({"run", config("rotation.cfg"), "--steps", "0"}).code, 2);
    EXPECT_EQ(cli({"run"}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    const auto bad = temp_file("tmlab_bad.cfg", "run.u = 0,0\nrun.x0 = 1,0\nfamily.kind = rotation\n");
    EXPECT_EQ(cli({"run", bad}).code, 2);
}

TEST(CmdRun, SolverFailureExitsThree) {
    const auto cfg = temp_file("tmlab_solver.cfg",
                               "family.kind = resolvent\nfamily.base = rotation\nfamily.theta = 1\n"
                               "family.gamma = const:1\nfamily.inner_tol = 1e-15\nfamily.inner_max_iter = 2\n"
                               "run.u = 0,0\nrun.x0 = 1,1\n");
    EXPECT_EQ(cli({"run", cfg, "--steps", "3"}).code, 3);
}

TEST(CmdRun, OutFileMatchesStdout) {
    const auto path = (std::filesystem::temp_directory_path() / "tmlab_run.csv").string();
    const auto a = cli({"run", config("rotation.cfg"), "--steps", "50"});
    ASSERT_EQ(cli({"run", config("rotation.cfg"), "--steps", "50", "--out", path}).code, 0);
    std::ifstream f(path);
    std::stringstream b;
    b << f.rdbuf();
    EXPECT_EQ(a.out, b.str());
}

TEST(CmdRates, GoldenRows) {
    auto r = cli({"rates", config("golden.cfg"), "--which", "Sigma_star", "--k-max", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out), (std::vector<std::string>{"k,Sigma_star", "0,145"}));
    r = cli({"rates", config("golden.cfg"), "--which", "Psi_star", "--k-max", "0"});
    EXPECT_EQ(lines(r.out), (std::vector<std::string>{"k,Psi_star", "0,20737"}));
    r = cli({"rates", config("golden.cfg"), "--which", "mu_star", "--k-max", "0"});
    ASSERT_EQ(lines(r.out).size(), 2u);
    EXPECT_EQ(lines(r.out)[1].rfind("0,ASTRO:", 0), 0u);
    r = cli({"rates", config("golden.cfg"), "--which", "chi,Sigma_tilde_star", "--k-max", "2"});
    EXPECT_EQ(lines(r.out), (std::vector<std::string>{"k,chi,Sigma_tilde_star", "0,7,2305", "1,15,9217", "2,23,20737"}));
    EXPECT_EQ(cli({"rates", config("golden.cfg"), "--which", "Omega"}).code, 2);
}

TEST(CmdMetastable, Examples) {
    auto r = cli({"metastable", config("identity.cfg"), "--k", "0", "--cf", "const:0", "--phi", "const:0"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["searched_n"], 0);
    EXPECT_EQ(j["mu_star"], "4609");
    EXPECT_EQ(j["pass"], true);
    for (const char* k : {"0", "3", "12"}) {
        r = cli({"metastable", config("identity.cfg"), "--k", k, "--cf", "id"});
        EXPECT_EQ(r.code, 0);
        EXPECT_EQ(nlohmann::json::parse(r.out)["searched_n"], 0);
    }
    r = cli({"metastable", config("identity.cfg"), "--k", "9", "--cf", "affine:2,1"});
    EXPECT_EQ(nlohmann::json::parse(r.out)["searched_n"], 4);
    r = cli({"metastable", config("identity.cfg"), "--k", "9", "--cf", "affine:2,0"});
    EXPECT_EQ(nlohmann::json::parse(r.out)["searched_n"], 0);
    EXPECT_EQ(cli({"metastable", config("identity.cfg"), "--cf", "affine:2"}).code, 2);
}

TEST(CmdVerify, GeometrySuite) {
    const auto path = (std::filesystem::temp_directory_path() / "tmlab_geo.json").string();
    const auto r = cli({"verify", "--suite", "geometry", "--samples", "500", "--seed", "4", "--report", path});
    EXPECT_EQ(r.code, 0) << r.err;
    std::ifstream f(path);
    const auto j = nlohmann::json::parse(f);
    EXPECT_EQ(j["pass"], true);
    EXPECT_EQ(j["samples"], 500);
    for (const auto& c : j["checks"]) {
        EXPECT_TRUE(c.contains("check_id"));
        EXPECT_TRUE(c.contains("scenario_hash"));
    }
}

TEST(CmdVerify, Deterministic) {
    const auto a = cli({"verify", "--suite", "geometry", "--samples", "200", "--seed", "9"});
    const auto b = cli({"verify", "--suite", "geometry", "--samples", "200", "--seed", "9"});
    EXPECT_EQ(a.out, b.out);
}

TEST(CmdVerify, BadFlags) {
    EXPECT_EQ(cli({"verify", "--suite", "bogus"}).code, 2);
    EXPECT_EQ(cli({"verify", "--samples", "0"}).code, 2);
    EXPECT_EQ(cli({"verify", "--tol", "-1"}).code, 2);
    EXPECT_EQ(cli({"--log-level", "chatty", "verify"}).code, 2);
}

TEST(CmdVerify, BrokenModelFails) {
    const auto broken = SpaceModel::euclidean(2).with_combination_override(
        [](const SpaceModel&, const Point& x, const Point& y, double t) {
            auto a = coordinates(x), b = coordinates(y);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] = (1 - t) * a[i] + t * b[i] + 0.1 * t * (1 - t);
            return Point{EuclideanPoint{a}};
        });
    VerifyOptions o;
    o.suite = "geometry";
    o.samples = 300;
    const auto report = run_verify_suite(o, {broken});
    EXPECT_EQ(report["pass"], false);
}

TEST(Cli, LogLevelGoesToStderr) {
    const auto r = cli({"--log-level", "info", "run", config("identity.cfg"), "--steps", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("[info]"), std::string::npos);
    EXPECT_EQ(r.out.find("[info]"), std::string::npos);
    EXPECT_EQ(cli({"--help"}).code, 0);
}
