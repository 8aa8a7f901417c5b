// End-to-end runs of the ctx binary: exit-code contract, JSON output shape,
// deterministic sampling, and the shipped sample files.
//
// CTX_CLI_PATH and CTX_DATA_DIR are injected by the build.

#include <catch2/catch_amalgamated.hpp>

#include "ctx/behavior.hpp"
#include "ctx/json_io.hpp"
#include "ctx/scenario.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path();
    const fs::path out = dir / ("ctx_cli_out_" + std::to_string(++counter));
    const fs::path err = dir / ("ctx_cli_err_" + std::to_string(counter));
    const std::string cmd = std::string(CTX_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

std::string data_file(const std::string& name) {
    return (fs::path(CTX_DATA_DIR) / name).string();
}

fs::path write_temp(const std::string& name, const std::string& body) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST_CASE("validate reports structure and exit codes", "[cli]") {
    const auto ok = run("validate " + data_file("pr_box.json"));
    CHECK(ok.exit_code == 0);
    const ctx::Json j = ctx::Json::parse(ok.out);
    CHECK(j["ok"].get<bool>());
    CHECK(j["kind"].get<std::string>() == "behavior");
    CHECK(j["disturbance"]["nondisturbing"].get<bool>());

    const auto sc = run("validate " + data_file("cycle5_scenario.json"));
    CHECK(sc.exit_code == 0);
    CHECK(ctx::Json::parse(sc.out)["kind"].get<std::string>() == "scenario");

    const auto broken = write_temp("broken_scenario.json", R"({
      "outcomes": ["-1", "+1"],
      "measurements": ["x", "x"],
      "contexts": [["x"]]
    })");
    const auto bad = run("validate " + broken.string());
    CHECK(bad.exit_code == 1);
    const ctx::Json bj = ctx::Json::parse(bad.out);
    CHECK_FALSE(bj["ok"].get<bool>());
    CHECK_FALSE(bj["issues"].empty());

    const auto garbage = write_temp("garbage.json", "not json at all {");
    const auto err = run("validate " + garbage.string());
    CHECK(err.exit_code == 2);
    CHECK_FALSE(err.err.empty());

    const auto missing = run("validate /nonexistent/nowhere.json");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("check decides and exits accordingly", "[cli]") {
    SECTION("contextual box") {
        const auto trad = run("check " + data_file("pr_box.json"));
        CHECK(trad.exit_code == 1);
        const ctx::Json j = ctx::Json::parse(trad.out);
        CHECK_FALSE(j["noncontextual"].get<bool>());
        CHECK(j["analysis"].get<std::string>() == "traditional");
        CHECK(j["certified"].get<bool>());

        const auto ext = run("--mode exact check --extended " + data_file("pr_box.json"));
        CHECK(ext.exit_code == 1);
        const ctx::Json je = ctx::Json::parse(ext.out);
        CHECK(je["mu_deficit_exact"].get<std::string>() == "1");
        CHECK(je["policy"].get<std::string>() == "maximal");

        const auto mm = run("--mode exact check --extended --policy multimaximal " +
                            data_file("pr_box.json"));
        CHECK(mm.exit_code == 1);
        CHECK(ctx::Json::parse(mm.out)["policy"].get<std::string>() == "multimaximal");
    }

    SECTION("disturbing path behavior") {
        const auto trad = run("check " + data_file("path_behavior.json"));
        CHECK(trad.exit_code == 1);  // no traditional global model at all

        const auto ext = run("--mode exact check --extended " + data_file("path_behavior.json"));
        CHECK(ext.exit_code == 0);  // extended-noncontextual despite disturbance
        const ctx::Json j = ctx::Json::parse(ext.out);
        CHECK(j["noncontextual"].get<bool>());
        CHECK(j["mu_deficit_exact"].get<std::string>() == "0");
        CHECK_FALSE(j["disturbance"]["nondisturbing"].get<bool>());
    }

    SECTION("noncontextual behavior with witness") {
        ctx::Json b;
        b["scenario"] = ctx::scenario_to_json(ctx::n_cycle(3));
        b["tables"] = {{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
        const auto file = write_temp("classical_cycle3.json", b.dump(2));

        const auto bare = run("--mode exact check " + file.string());
        CHECK(bare.exit_code == 0);
        CHECK_FALSE(ctx::Json::parse(bare.out).contains("witness"));

        const auto wit = run("--mode exact check --witness " + file.string());
        CHECK(wit.exit_code == 0);
        const ctx::Json j = ctx::Json::parse(wit.out);
        REQUIRE(j.contains("witness"));
        REQUIRE(j["witness"].size() == 1);
        CHECK(j["witness"][0]["assignment"] ==
              ctx::Json::array({"-1", "-1", "-1"}));
        CHECK(j["witness"][0]["weight"].get<std::string>() == "1");
    }
}

TEST_CASE("quantify emits the requested measures", "[cli]") {
    const auto r = run("--mode exact quantify --measures cf,neg,l1u,mu,m " +
                       data_file("pr_box.json"));
    REQUIRE(r.exit_code == 0);
    const ctx::Json j = ctx::Json::parse(r.out);
    REQUIRE(j["measures"].size() == 5);
    CHECK(j["measures"][0]["measure"].get<std::string>() == "contextual-fraction");
    CHECK(j["measures"][0]["exact"].get<std::string>() == "1");
    CHECK(j["measures"][1]["exact"].get<std::string>() == "1");    // negativity
    CHECK(j["measures"][2]["exact"].get<std::string>() == "1/2");  // l1-uniform
    CHECK(j["measures"][3]["exact"].get<std::string>() == "1");    // mu-deficit
    CHECK(j["measures"][4]["exact"].get<std::string>() == "1/4");  // m-deficit

    const auto bad = run("quantify --measures entropy " + data_file("pr_box.json"));
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("unknown measure") != std::string::npos);

    // negativity of a disturbing behavior is reported as infinite
    const auto inf = run("quantify --measures neg " + data_file("path_behavior.json"));
    REQUIRE(inf.exit_code == 0);
    CHECK(ctx::Json::parse(inf.out)["measures"][0]["value"].get<std::string>() == "inf");
}

TEST_CASE("ncycle analyzes cycles and rejects the rest", "[cli]") {
    const auto r = run("ncycle " + data_file("pr_box.json"));
    CHECK(r.exit_code == 1);
    const ctx::Json j = ctx::Json::parse(r.out);
    CHECK(j["traditional"]["contextual"].get<bool>());
    CHECK(j["closed_form"]["contextual_fraction"].get<double>() == 1.0);

    const auto not_cycle = run("ncycle " + data_file("path_behavior.json"));
    CHECK(not_cycle.exit_code == 2);
    CHECK(not_cycle.err.find("cycle") != std::string::npos);
}

TEST_CASE("extend emits the copy scenario", "[cli]") {
    const auto r = run("extend " + data_file("path_scenario.json"));
    REQUIRE(r.exit_code == 0);
    const ctx::Json j = ctx::Json::parse(r.out);
    CHECK(j["measurements"] == ctx::Json::array({"x^0", "y^0", "y^1", "z^1"}));
    REQUIRE(j["context_kinds"].size() == 3);
    CHECK(j["context_kinds"][2]["coupling"].get<std::string>() == "y");
}

TEST_CASE("random sampling is deterministic per seed", "[cli]") {
    const auto a = run("--seed 5 random " + data_file("cycle4_scenario.json"));
    const auto b = run("--seed 5 random " + data_file("cycle4_scenario.json"));
    const auto c = run("--seed 6 random " + data_file("cycle4_scenario.json"));
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);

    // the sample itself is a valid nondisturbing behavior
    auto sampled = ctx::behavior_from_json(ctx::Json::parse(a.out));
    CHECK_NOTHROW(ctx::require_valid(sampled));
    CHECK(ctx::is_nondisturbing(sampled));

    // exact emission survives the round trip even for non-dyadic entries
    const auto exact = run("--seed 5 --mode exact random " + data_file("cycle4_scenario.json"));
    auto exact_back = ctx::behavior_from_json(ctx::Json::parse(exact.out));
    CHECK_NOTHROW(ctx::require_valid(exact_back));
    CHECK(ctx::is_nondisturbing(exact_back));

    const auto free = run("--seed 5 random --free " + data_file("cycle4_scenario.json"));
    auto free_b = ctx::behavior_from_json(ctx::Json::parse(free.out));
    CHECK_NOTHROW(ctx::require_valid(free_b));

    const auto pert = run("--seed 5 random --perturb 1/3 " + data_file("cycle4_scenario.json"));
    auto pert_b = ctx::behavior_from_json(ctx::Json::parse(pert.out));
    CHECK_NOTHROW(ctx::require_valid(pert_b));
}

TEST_CASE("table format and usage errors", "[cli]") {
    const auto t = run("--format table check " + data_file("pr_box.json"));
    CHECK(t.exit_code == 1);
    CHECK(t.out.find("noncontextual: false") != std::string::npos);
    CHECK_THROWS(ctx::Json::parse(t.out));  // genuinely not JSON

    const auto no_args = run("");
    CHECK(no_args.exit_code == 2);

    const auto bad_flag = run("check --no-such-flag " + data_file("pr_box.json"));
    CHECK(bad_flag.exit_code == 2);

    const auto help = run("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("validate") != std::string::npos);
}
