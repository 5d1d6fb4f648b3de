#include "mkfp/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace mkfp;
using mkfp::io::json;

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

/// Runs the CLI with stderr discarded; `env` is prepended verbatim.
CliRun run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " \"" MKFP_CLI "\" " + args + " 2>/dev/null";
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string inst(const std::string& name) { return std::string("\"") + MKFP_INSTANCES + "/" + name + "\""; }

json report(const CliRun& r) { return json::parse(r.out); }

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("mkfp_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST(Cli, ValidateExitCodes) {
    EXPECT_EQ(run("validate " + inst("line3.json")).code, 0);
    CliRun asym = run("validate " + inst("asymmetric.json"));
    EXPECT_EQ(asym.code, 1);
    EXPECT_NE(asym.out.find("symmetry violated at (0,1)"), std::string::npos);
    EXPECT_EQ(run("validate " + inst("malformed.json")).code, 2);
    EXPECT_EQ(run("validate /nonexistent/file.json").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, CheckReportsVerdictsAndProfile) {
    CliRun r = run("check " + inst("line3.json"));
    ASSERT_EQ(r.code, 0);
    json j = report(r);
    EXPECT_EQ(j["schema_version"], "1");
    EXPECT_EQ(j["exit_code"], 0);
    EXPECT_TRUE(j["holds"].get<bool>());
    EXPECT_TRUE(j["profile"].is_object() || j["profile"].is_array());
    CliRun s = run("check --variant mks " + inst("singleton_fg.json"));
    EXPECT_EQ(s.code, 1);
    EXPECT_FALSE(report(s)["holds"].get<bool>());
    EXPECT_EQ(run("check " + inst("identity2.json")).code, 1);
    EXPECT_EQ(run("check " + inst("asymmetric.json")).code, 2);
}

TEST(Cli, FormatFromEnvironment) {
    CliRun t = run("check " + inst("line3.json"), "MKFP_FORMAT=text");
    EXPECT_EQ(t.code, 0);
    EXPECT_FALSE(json::accept(t.out));
    EXPECT_NE(t.out.find("holds"), std::string::npos);
    CliRun j = run("check --format text " + inst("line3.json"), "MKFP_FORMAT=json");
    EXPECT_TRUE(json::accept(j.out));
}

TEST(Cli, EquivalenceExitCodes) {
    EXPECT_EQ(run("equivalence " + inst("line3.json")).code, 0);
    CliRun s = run("equivalence " + inst("singleton_fg.json"));
    EXPECT_EQ(s.code, 1);
    json j = report(s);
    EXPECT_TRUE(j["report"]["consistent"].get<bool>());
    EXPECT_EQ(run("equivalence " + inst("scalar_half.json")).code, 2);
}

TEST(Cli, IterateFiniteAndOrdered) {
    CliRun r = run("iterate --start c " + inst("line3.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(run("iterate --start zz " + inst("line3.json")).code, 2);
    EXPECT_EQ(run("iterate " + inst("line3_nr.json")).code, 0);
    EXPECT_EQ(run("iterate " + inst("line3_rz.json")).code, 0);
    EXPECT_EQ(run("iterate " + inst("line3_rz_no_least.json")).code, 1);
    EXPECT_EQ(run("iterate " + inst("scalar_half.json")).code, 0);
    EXPECT_EQ(run("iterate " + inst("affine_08.json")).code, 0);
    EXPECT_EQ(run("iterate --max-steps 3 " + inst("scalar_half.json")).code, 1);
}

TEST(Cli, WitnessFilesRoundTrip) {
    fs::path dir = fresh_dir("line3");
    CliRun r = run("witnesses --emit \"" + dir.string() + "\" " + inst("line3.json"));
    ASSERT_EQ(r.code, 0);
    json j = report(r);
    ASSERT_EQ(j["emitted"].size(), 5u);

    // Re-verify every emitted witness against the same instance.
    io::InstanceFile file = io::instance_from_json(io::read_json_file(std::string(MKFP_INSTANCES) + "/line3.json"));
    FGInstance fg = io::as_fg(file);
    auto load = [&](const std::string& name) { return io::piecewise_from_json(io::read_json_file((dir / (name + ".json")).string())); };
    EXPECT_TRUE(verify_condition(fg, 3, {load("gamma")}).holds);
    EXPECT_TRUE(verify_condition(fg, 4, {load("w")}).holds);
    EXPECT_TRUE(verify_condition(fg, 5, {load("l")}).holds);
    EXPECT_TRUE(verify_condition(fg, 6, {load("phi"), load("psi")}).holds);
    // Report witnesses and the files agree.
    for (const char* name : {"gamma", "w", "l", "phi", "psi"})
        EXPECT_EQ(j["report"]["witnesses"][name], io::read_json_file((dir / (std::string(name) + ".json")).string())) << name;
    // Verdicts in the report match a fresh in-process computation.
    EquivalenceReport eq = equivalence_report(fg);
    for (int i = 1; i <= 6; ++i)
        EXPECT_EQ(j["report"]["conditions"][static_cast<std::size_t>(i - 1)]["holds"].get<bool>(), eq.holds(i));
    fs::remove_all(dir);
}

TEST(Cli, WitnessEmissionPolicy) {
    fs::path none = fresh_dir("identity");
    EXPECT_EQ(run("witnesses --emit \"" + none.string() + "\" " + inst("identity2.json")).code, 1);
    EXPECT_FALSE(fs::exists(none / "gamma.json"));
    fs::path single = fresh_dir("singleton");
    CliRun s = run("witnesses --emit \"" + single.string() + "\" " + inst("singleton_fg.json"));
    EXPECT_EQ(s.code, 1);
    EXPECT_FALSE(fs::exists(single / "gamma.json"));
    EXPECT_TRUE(fs::exists(single / "l.json"));
    // A (phi, psi) pair that works on the singleton although MKS fails.
    FGInstance fg({"x"}, {Rational(1)}, {Rational(0)});
    auto phi = io::piecewise_from_json(io::read_json_file(std::string(MKFP_INSTANCES) + "/witnesses/singleton_phi.json"));
    auto psi = io::piecewise_from_json(io::read_json_file(std::string(MKFP_INSTANCES) + "/witnesses/singleton_psi.json"));
    EXPECT_TRUE(verify_condition(fg, 6, {phi, psi}).holds);
    fs::remove_all(none);
    fs::remove_all(single);
}
