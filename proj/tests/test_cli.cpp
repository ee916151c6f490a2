// Copyright 2026 The gapq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "gapq_cli_tests";
    fs::create_directories(dir);
    return dir;
}

/// Runs the binary with stdout/stderr captured through the shell. `env`
/// is an optional KEY=VALUE prefix.
CliResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path dir = scratch_dir();
    const fs::path out = dir / ("out." + std::to_string(++counter));
    const fs::path err = dir / ("err." + std::to_string(counter));
    const std::string cmd = (env.empty() ? "" : env + " ") + std::string(GAPQ_CLI_PATH) + " " +
                            args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string fixture(const std::string& name) {
    return (fs::path(GAPQ_FIXTURES_DIR) / name).string();
}

}  // namespace

TEST_CASE("gap reports the acceptance gap") {
    const auto r = run_cli("gap --predicate " + fixture("pred_p2_and.json"));
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["p"] == 2);
    CHECK(j["ones"] == 1);
    CHECK(j["zeros"] == 3);
    CHECK(j["gap"] == "-2");
}

TEST_CASE("compile then decide accepts an unbalanced predicate with exit 3") {
    const fs::path prog = scratch_dir() / "compiled_and.json";
    const auto c =
        run_cli("compile-gap --predicate " + fixture("pred_p2_and.json") + " --out " + prog.string());
    REQUIRE(c.code == 0);
    REQUIRE(fs::exists(prog));

    const auto d = run_cli("decide --program " + prog.string());
    CHECK(d.code == 3);
    const json j = json::parse(d.out);
    CHECK(j["accept"] == true);
    CHECK(j["g"] != "0");
    REQUIRE(j["evidence"].size() == 1);
    CHECK(j["evidence"][0]["state"] == json::array({0, 0, 1}));
}

TEST_CASE("a balanced predicate is rejected with exit 0") {
    const fs::path prog = scratch_dir() / "compiled_id.json";
    REQUIRE(run_cli("compile-gap --predicate " + fixture("pred_p1_id.json") + " --out " +
                    prog.string())
                .code == 0);
    const auto d = run_cli("decide --program " + prog.string());
    CHECK(d.code == 0);
    const json j = json::parse(d.out);
    CHECK(j["accept"] == false);
    CHECK(j["g"] == "0");
}

TEST_CASE("simulate reports traces in all three modes") {
    const std::string prog = fixture("hh_cancel.json");

    const auto both = run_cli("simulate --program " + prog + " --mode both");
    REQUIRE(both.code == 0);
    const json jb = json::parse(both.out);
    CHECK(jb["decision"]["accept"] == true);
    CHECK(jb["decision"]["g"] == "15625");
    REQUIRE(jb["steps"].size() == 2);
    CHECK(jb["steps"][1]["consistency_ok"] == true);
    CHECK(jb["steps"][1]["norm_ok"] == true);
    REQUIRE(jb["final"].size() == 1);
    CHECK(jb["final"][0]["form"] == json::parse(R"([[[0],"125"]])"));

    const auto exact = run_cli("simulate --program " + prog + " --mode exact");
    REQUIRE(exact.code == 0);
    const json je = json::parse(exact.out);
    CHECK_FALSE(je["steps"][0].contains("norm"));
    CHECK(je["decision"]["accept"] == true);

    const auto numeric = run_cli("simulate --program " + prog + " --mode numeric");
    REQUIRE(numeric.code == 0);
    const json jn = json::parse(numeric.out);
    CHECK_FALSE(jn.contains("decision"));
    CHECK(jn["steps"][1]["norm_ok"] == true);
}

TEST_CASE("validate passes honest fields and fails corrupted ones") {
    const auto good = run_cli("validate --field " + fixture("sqrt2_field.json"));
    CHECK(good.code == 0);
    CHECK(json::parse(good.out)["valid"] == true);

    const auto bad = run_cli("validate --field " + fixture("bad_struct_field.json"));
    CHECK(bad.code == 1);
    const json j = json::parse(bad.out);
    CHECK(j["valid"] == false);
    CHECK(j["field"]["violations"].size() >= 1);
}

TEST_CASE("validate surfaces non-unitary layers without aborting") {
    const auto r = run_cli("validate --program " + fixture("literal_h_program.json"));
    CHECK(r.code == 1);
    const json j = json::parse(r.out);
    CHECK(j["valid"] == false);
    CHECK(j["field"]["valid"] == true);
    REQUIRE(j["program"]["problems"].size() == 1);
    CHECK(j["program"]["layers"][0]["pass"] == false);
}

TEST_CASE("decide refuses a non-unitary program with exit 1") {
    const auto r = run_cli("decide --program " + fixture("literal_h_program.json"));
    CHECK(r.code == 1);
    CHECK(json::parse(r.out)["error"]["kind"] == "validation_error");
}

TEST_CASE("crosscheck accepts honest programs and flags drifting ones") {
    const auto good = run_cli("crosscheck --program " + fixture("hh_cancel.json"));
    CHECK(good.code == 3);  // consistent and accepting
    const json jg = json::parse(good.out);
    CHECK(jg["match"] == true);
    CHECK(jg["g_counting"] == jg["g_simulator"]);
    CHECK(jg["drift_ok"] == true);

    const auto bad = run_cli("crosscheck --program " + fixture("bad_struct_program.json"));
    CHECK(bad.code == 1);
    const json jb = json::parse(bad.out);
    CHECK(jb["drift_ok"] == false);
}

TEST_CASE("the enumeration budget trips exit code 4") {
    const auto flag = run_cli("crosscheck --program " + fixture("hh_cancel.json") + " --budget 3");
    CHECK(flag.code == 4);
    CHECK(json::parse(flag.out)["error"]["kind"] == "budget_exceeded");

    const auto env = run_cli("crosscheck --program " + fixture("hh_cancel.json"), "GAPQ_BUDGET=3");
    CHECK(env.code == 4);

    // An explicit flag beats the environment.
    const auto both =
        run_cli("crosscheck --program " + fixture("hh_cancel.json") + " --budget 1000",
                "GAPQ_BUDGET=3");
    CHECK(both.code == 3);
}

TEST_CASE("a program may reference its field by path") {
    const auto r = run_cli("decide --program " + fixture("sqrt2_hh.json"));
    CHECK(r.code == 3);  // HH returns to |0>, which is accepting
    CHECK(json::parse(r.out)["accept"] == true);
}

TEST_CASE("missing and malformed inputs exit with code 2") {
    CHECK(run_cli("decide --program /nonexistent.json").code == 2);

    const fs::path broken = scratch_dir() / "broken.json";
    std::ofstream(broken) << "{ not json";
    const auto r = run_cli("decide --program " + broken.string());
    CHECK(r.code == 2);
    CHECK(json::parse(r.out)["error"]["kind"] == "parse_error");

    CHECK(run_cli("validate").code == 2);  // neither --field nor --program
}

TEST_CASE("reports are byte deterministic and --out mirrors stdout") {
    const std::string args = "simulate --program " + fixture("hh_cancel.json");
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.out == b.out);

    const fs::path out = scratch_dir() / "report.json";
    const auto c = run_cli(args + " --out " + out.string());
    REQUIRE(c.code == 0);
    CHECK(slurp(out) == a.out);
}

TEST_CASE("--quiet silences the summary") {
    const std::string args = "gap --predicate " + fixture("pred_p1_const0.json");
    CHECK_FALSE(run_cli(args).err.empty());
    CHECK(run_cli(args + " --quiet").err.empty());
}

TEST_CASE("unknown subcommands fail") {
    CHECK(run_cli("frobnicate").code != 0);
}
