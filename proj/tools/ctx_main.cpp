// ctx — command-line front end for the contextuality analysis library.
//
// Subcommands:
//   validate   structural checks for a scenario or behavior file
//   extend     emit the extended scenario (measurement copies + couplings)
//   check      decide (extended) noncontextuality; exit 0 = yes, 1 = no
//   quantify   compute degree-of-contextuality measures
//   ncycle     closed-form cycle analysis; exit 0/1 mirrors the extended verdict
//   random     sample a behavior for a scenario, deterministically per seed
//
// Exit codes: 0 success (or "noncontextual" / "valid"), 1 adverse verdict
// (contextual / violations found), 2 usage or input error.

#include "ctx/ctx.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ctx::Json;

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open \"" + path.string() + "\"");
    return Json::parse(in);
}

// resolves a behavior file's "scenario" reference relative to its directory
ctx::Behavior load_behavior(const std::filesystem::path& path) {
    const auto dir = path.parent_path();
    return ctx::behavior_from_json(
        load_json(path), [&dir](const std::string& ref) { return load_json(dir / ref); });
}

// ----- plain-text rendering of the report JSON -----

void render_table(const Json& j, std::ostream& os, int indent) {
    const std::string pad(2 * static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || (v.is_array() && !v.empty() && v[0].is_structured())) {
                os << pad << k << ":\n";
                render_table(v, os, indent + 1);
            } else {
                os << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
                   << "\n";
            }
        }
        return;
    }
    if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_structured()) {
                os << pad << "-\n";
                render_table(v, os, indent + 1);
            } else {
                os << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            }
        }
        return;
    }
    os << pad << j.dump() << "\n";
}

void emit(const Json& j, const std::string& format) {
    if (format == "table")
        render_table(j, std::cout, 0);
    else
        std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decide and quantify (extended) contextuality of measurement behaviors"};
    app.require_subcommand(1);

    std::string mode_name = "float";
    double eps = 1e-7;
    std::size_t cap = std::size_t{1} << 20;
    std::uint64_t seed = 0;
    std::string format = "json";
    app.add_option("--mode", mode_name, "arithmetic: float (with exact borderline reruns) or exact")
        ->check(CLI::IsMember({"float", "exact"}));
    app.add_option("--eps", eps, "float-mode decision tolerance");
    app.add_option("--cap", cap, "largest admissible assignment-space size");
    app.add_option("--seed", seed, "random seed (subcommand: random)");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "table"}));

    auto* validate_cmd = app.add_subcommand("validate", "check a scenario or behavior file");
    std::string validate_file;
    validate_cmd->add_option("input", validate_file, "scenario or behavior JSON")
        ->required()
        ->check(CLI::ExistingFile);

    auto* extend_cmd = app.add_subcommand("extend", "emit the extended scenario");
    std::string extend_file;
    extend_cmd->add_option("input", extend_file, "scenario JSON")
        ->required()
        ->check(CLI::ExistingFile);

    auto* check_cmd = app.add_subcommand("check", "decide noncontextuality");
    std::string check_file;
    bool check_extended = false;
    bool check_witness = false;
    std::string policy_name = "maximal";
    check_cmd->add_option("input", check_file, "behavior JSON")
        ->required()
        ->check(CLI::ExistingFile);
    check_cmd->add_flag("--extended", check_extended,
                        "decide extended noncontextuality on the copy scenario");
    check_cmd->add_option("--policy", policy_name, "coupling policy for --extended")
        ->check(CLI::IsMember({"maximal", "multimaximal"}));
    check_cmd->add_flag("--witness", check_witness,
                        "include the explicit global model when one exists");

    auto* quantify_cmd = app.add_subcommand("quantify", "compute contextuality measures");
    std::string quantify_file;
    std::string measures_csv = "cf";
    quantify_cmd->add_option("input", quantify_file, "behavior JSON")
        ->required()
        ->check(CLI::ExistingFile);
    quantify_cmd->add_option(
        "--measures", measures_csv,
        "comma list: cf, neg, l1, l1u, l1max, mu, m (mu and m treat the input "
        "as a base behavior and analyze its extension)");

    auto* ncycle_cmd = app.add_subcommand("ncycle", "closed-form analysis of a cycle behavior");
    std::string ncycle_file;
    ncycle_cmd->add_option("input", ncycle_file, "behavior JSON on a cycle scenario")
        ->required()
        ->check(CLI::ExistingFile);

    auto* random_cmd = app.add_subcommand("random", "sample a behavior for a scenario");
    std::string random_file;
    bool random_free = false;
    std::string perturb_str;
    random_cmd->add_option("input", random_file, "scenario JSON")
        ->required()
        ->check(CLI::ExistingFile);
    random_cmd->add_flag("--free", random_free,
                         "independent table per context (generally disturbing)");
    random_cmd->add_option("--perturb", perturb_str,
                           "mix one context with a fresh table at this weight, e.g. 1/3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 2;
    }

    ctx::AnalysisConfig cfg;
    cfg.mode = mode_name == "exact" ? ctx::Mode::Exact : ctx::Mode::Float;
    cfg.eps = eps;
    cfg.cap = cap;

    try {
        if (app.got_subcommand(validate_cmd)) {
            const Json j = load_json(validate_file);
            Json out;
            ctx::ValidationResult result;
            if (j.is_object() && j.contains("tables")) {
                auto b = load_behavior(validate_file);
                out["kind"] = "behavior";
                result = ctx::validate(b);
                if (result.ok()) out["disturbance"] = ctx::disturbance_to_json(
                    ctx::disturbance_report(b));
            } else {
                const auto s = ctx::scenario_from_json(j);
                out["kind"] = "scenario";
                result = ctx::validate(s);
            }
            const Json v = ctx::validation_to_json(result);
            out["ok"] = v["ok"];
            out["issues"] = v["issues"];
            emit(out, format);
            return result.ok() ? 0 : 1;
        }

        if (app.got_subcommand(extend_cmd)) {
            auto s = ctx::scenario_from_json(load_json(extend_file));
            const auto ext = ctx::extend(s);
            emit(ctx::extended_scenario_to_json(ext), format);
            return 0;
        }

        if (app.got_subcommand(check_cmd)) {
            auto b = load_behavior(check_file);
            ctx::require_valid(b);
            Json out;
            bool noncontextual = false;
            if (check_extended) {
                const auto policy = policy_name == "multimaximal"
                                        ? ctx::CouplingPolicy::Multimaximal
                                        : ctx::CouplingPolicy::Maximal;
                const auto model = ctx::extended_global_model(b, policy, cfg);
                out = ctx::extended_model_to_json(model, ctx::extend(b.scenario).scenario,
                                                  cfg.mode);
                out["analysis"] = "extended";
                noncontextual = model.noncontextual;
            } else {
                const auto model = ctx::traditional_global_model(b, cfg);
                out = ctx::global_model_to_json(model, b.scenario, cfg.mode);
                out["analysis"] = "traditional";
                noncontextual = model.noncontextual;
            }
            out["disturbance"] = ctx::disturbance_to_json(ctx::disturbance_report(b));
            if (!check_witness) out.erase("witness");
            emit(out, format);
            return noncontextual ? 0 : 1;
        }

        if (app.got_subcommand(quantify_cmd)) {
            auto b = load_behavior(quantify_file);
            ctx::require_valid(b);
            std::vector<ctx::Measure> measures;
            std::stringstream ss(measures_csv);
            for (std::string tok; std::getline(ss, tok, ',');)
                if (!tok.empty()) measures.push_back(ctx::measure_from_string(tok));
            if (measures.empty()) throw std::invalid_argument("no measures requested");
            Json out;
            out["measures"] = Json::array();
            for (const auto m : measures)
                out["measures"].push_back(ctx::quantifier_to_json(ctx::quantify(b, m, cfg)));
            emit(out, format);
            return 0;
        }

        if (app.got_subcommand(ncycle_cmd)) {
            auto b = load_behavior(ncycle_file);
            ctx::require_valid(b);
            const auto report = ctx::analyze_cycle(b);
            emit(ctx::cycle_report_to_json(report), format);
            return report.extended.contextual ? 1 : 0;
        }

        if (app.got_subcommand(random_cmd)) {
            auto s = ctx::scenario_from_json(load_json(random_file));
            ctx::require_valid(s);
            ctx::Sampler rng(seed);
            auto b = random_free ? ctx::sample_free(rng, s)
                                 : ctx::sample_nondisturbing(rng, s, cap);
            if (!perturb_str.empty())
                b = ctx::perturb_one_context(rng, std::move(b), ctx::parse_rational(perturb_str));
            emit(ctx::behavior_to_json(b, cfg.mode), format);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
