#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modkit_cli/app.hpp"
#include "modkit_cli/commands.hpp"
#include "modkit_cli/instance.hpp"

using namespace modkit;
using namespace modkit::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kInstances = MODKIT_INSTANCES;

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kMinimal = R"({
  "algebras": {"C": {"blocks": [1]}},
  "modules": {"X": {"H0": 1, "H1": 1, "algebra": "C",
                    "span": [{"rows": 1, "cols": 1, "data": [[[1.0, 0.0]]]}]}}
})";

std::string parse_message(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Instance, MinimalInstanceParses) {
    const Instance inst = parse_instance(kMinimal);
    ASSERT_EQ(inst.modules.size(), 1u);
    EXPECT_EQ(inst.modules.at("X").h1, 1);
    EXPECT_TRUE(inst.tolerances.empty());
}

TEST(Instance, StrictParsingNamesTheOffendingField) {
    std::string s = kMinimal;
    EXPECT_NE(parse_message(std::string(s).replace(s.find("\"blocks\""), 8, "\"blokcs\"")).find("unknown field"),
              std::string::npos);
    EXPECT_NE(parse_message(std::string(s).replace(s.find("[1.0, 0.0]"), 10, "[1.0]")).find("[re, im] pair"),
              std::string::npos);
    EXPECT_NE(parse_message(std::string(s).replace(s.find("\"algebra\": \"C\""), 14, "\"algebra\": \"D\"")).find("unknown identifier"),
              std::string::npos);
    EXPECT_NE(parse_message(std::string(s).replace(s.find("\"H1\": 1"), 7, "\"H1\": 2")).find("expected a 2x1 matrix"),
              std::string::npos);
    EXPECT_NE(parse_message("{\n\"modules\": {,}\n}").find("line 2"), std::string::npos);
    EXPECT_NE(parse_message("[]").find("top level"), std::string::npos);
}

TEST(Instance, SerializationRoundTripsEveryShippedInstance) {
    for (const auto& entry : fs::directory_iterator(kInstances)) {
        const fs::path p = entry.path();
        if (p.extension() != ".json" || p.filename() == "manifest.json" || p.filename() == "malformed_complex_pair.json")
            continue;
        const Instance a = load_instance(p.string());
        const Instance b = parse_instance(serialize_instance(a));
        EXPECT_EQ(instance_to_json(a), instance_to_json(b)) << p;
        EXPECT_EQ(serialize_instance(a), serialize_instance(b)) << p;
    }
}

TEST(Instance, ReloadedInstanceGivesIdenticalReports) {
    const fs::path dir = fs::temp_directory_path() / "modkit_roundtrip";
    fs::create_directories(dir);
    for (const char* cmd : {"validate", "represent", "bimodule-check"}) {
        const fs::path src = kInstances / "full_matrix_bimodule.json";
        const fs::path copy = dir / src.filename();
        std::ofstream(copy) << serialize_instance(load_instance(src.string()));
        const Report a = run_command(cmd, {src.string()}, {});
        const Report b = run_command(cmd, {copy.string()}, {});
        EXPECT_EQ(a.render(true), b.render(true)) << cmd;
    }
    fs::remove_all(dir);
}

TEST(Tolerances, PrecedenceDefaultsEnvironmentFileFlags) {
    ::unsetenv("MODKIT_TOL_RANK");
    EXPECT_EQ(resolve_tolerances({}, {}), Tolerances{});
    ::setenv("MODKIT_TOL_RANK", "1e-7", 1);
    EXPECT_EQ(resolve_tolerances({}, {}).rank, 1e-7);
    TolerancePatch file;
    file.rank = 1e-6;
    file.eq = 1e-5;
    EXPECT_EQ(resolve_tolerances(file, {}).rank, 1e-6);
    TolerancePatch flags;
    flags.rank = 1e-4;
    const Tolerances t = resolve_tolerances(file, flags);
    EXPECT_EQ(t.rank, 1e-4);
    EXPECT_EQ(t.eq, 1e-5);
    EXPECT_EQ(t.orth, Tolerances{}.orth);
    ::setenv("MODKIT_TOL_RANK", "not-a-number", 1);
    EXPECT_THROW(resolve_tolerances({}, {}), ParseError);
    ::unsetenv("MODKIT_TOL_RANK");
    flags.eq = -1.0;
    EXPECT_THROW(resolve_tolerances({}, flags), ParseError);
}

TEST(Cli, ExitCodes) {
    const std::string dir = kInstances.string() + "/";
    EXPECT_EQ(run_cli({"validate", dir + "column_module_d2.json"}).status, 0);
    EXPECT_EQ(run_cli({"validate", dir + "broken_right_action.json"}).status, 1);
    EXPECT_EQ(run_cli({"validate", dir + "malformed_complex_pair.json"}).status, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).status, 2);
    EXPECT_EQ(run_cli({"validate", dir + "column_module_d2.json", "--format", "yaml"}).status, 2);
    EXPECT_EQ(run_cli({"validate"}).status, 2);
    EXPECT_EQ(run_cli({"daws", "two"}).status, 2);
    EXPECT_EQ(run_cli({"--help"}).status, 0);
    // A negative verdict is a successful run.
    EXPECT_EQ(run_cli({"bimodule-check", dir + "scalar_action_d2.json"}).status, 0);
}

TEST(Cli, JsonReportShape) {
    const auto r = run_cli({"compacts", (kInstances / "column_module_d2.json").string(), "X", "--format", "json"});
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["command"], "compacts");
    EXPECT_EQ(j["instance"], "column_module_d2.json");
    EXPECT_EQ(j["status"], "pass");
    EXPECT_EQ(j["exit"], 0);
    ASSERT_TRUE(j["results"].is_array());
    for (const auto& res : j["results"]) {
        EXPECT_TRUE(res.contains("check"));
        EXPECT_TRUE(res["pass"].is_boolean());
        EXPECT_TRUE(res["residual"].is_null() || res["residual"].is_number());
    }
}

TEST(Cli, ErrorGoesToStderrAndReport) {
    const auto r = run_cli({"validate", (kInstances / "malformed_complex_pair.json").string(), "--format", "json"});
    EXPECT_NE(r.err.find("[re, im] pair"), std::string::npos);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["status"], "error");
    EXPECT_TRUE(j.contains("error"));
}

TEST(Cli, ResidualsAreRoundedForStableOutput) {
    EXPECT_EQ(report_number(1.23456e-3), 1.23e-3);
    EXPECT_EQ(report_number(3e-13), 0.0);
    EXPECT_EQ(report_number(-2.5e-14), 0.0);
}

TEST(Cli, ShippedFixturesExist) {
    const auto manifest = nlohmann::json::parse(read_file(kInstances / "manifest.json"));
    ASSERT_FALSE(manifest.empty());
    for (const auto& e : manifest) EXPECT_TRUE(fs::exists(kInstances / "expected" / (e["name"].get<std::string>() + ".json"))) << e["name"];
}
