#pragma once

// JSON formats. Scenarios: {"outcomes", "measurements", "contexts"} with
// contexts as arrays of measurement names (indices also accepted on input).
// Behaviors: {"scenario": <object or file path>, "tables": [[entries]]} where
// an entry is a JSON number (read exactly as the dyadic it parses to) or a
// string like "3/4" for exact rationals. Parsing is strict: unknown keys are
// errors, not surprises. Emission order is fixed so equal inputs produce
// byte-identical output; float mode emits numbers, exact mode emits "p/q"
// strings that round-trip losslessly.

#include "ctx/behavior.hpp"
#include "ctx/extension.hpp"
#include "ctx/ncycle.hpp"
#include "ctx/polytope.hpp"
#include "ctx/quantifiers.hpp"
#include "ctx/rational.hpp"
#include "ctx/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctx {

using Json = nlohmann::ordered_json;

// ===================== helpers =====================

namespace detail {

inline void require_object_keys(const Json& j, const std::vector<std::string>& required,
                                const std::vector<std::string>& optional,
                                const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
    for (const auto& k : required)
        if (!j.contains(k))
            throw std::invalid_argument(where + ": missing required key \"" + k + "\"");
    for (const auto& [k, v] : j.items()) {
        (void)v;
        const bool known =
            std::find(required.begin(), required.end(), k) != required.end() ||
            std::find(optional.begin(), optional.end(), k) != optional.end();
        if (!known) throw std::invalid_argument(where + ": unknown key \"" + k + "\"");
    }
}

inline Rational rational_from_json(const Json& v, const std::string& where) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) return rational_from_double(v.get<double>());
    throw std::invalid_argument(where + ": expected a number or a rational string");
}

inline std::string rational_to_string(const Rational& r) { return r.str(); }

inline Json probability_to_json(const Rational& r, Mode mode) {
    if (mode == Mode::Exact) return Json(rational_to_string(r));
    return Json(to_double(r));
}

}  // namespace detail

// ===================== scenarios =====================

inline Json scenario_to_json(const Scenario& s) {
    Json j;
    j["outcomes"] = s.outcomes.labels;
    j["measurements"] = s.measurements;
    Json ctxs = Json::array();
    for (const auto& c : s.contexts) {
        Json one = Json::array();
        for (std::size_t m : c)
            one.push_back(m < s.measurements.size() ? Json(s.measurements[m]) : Json(m));
        ctxs.push_back(std::move(one));
    }
    j["contexts"] = std::move(ctxs);
    return j;
}

inline Scenario scenario_from_json(const Json& j) {
    detail::require_object_keys(j, {"outcomes", "measurements", "contexts"}, {}, "scenario");
    Scenario s;
    if (!j["outcomes"].is_array()) throw std::invalid_argument("scenario: outcomes must be an array");
    for (const auto& v : j["outcomes"]) {
        if (!v.is_string()) throw std::invalid_argument("scenario: outcome labels must be strings");
        s.outcomes.labels.push_back(v.get<std::string>());
    }
    if (!j["measurements"].is_array())
        throw std::invalid_argument("scenario: measurements must be an array");
    for (const auto& v : j["measurements"]) {
        if (!v.is_string()) throw std::invalid_argument("scenario: measurement ids must be strings");
        s.measurements.push_back(v.get<std::string>());
    }
    if (!j["contexts"].is_array()) throw std::invalid_argument("scenario: contexts must be an array");
    for (const auto& c : j["contexts"]) {
        if (!c.is_array()) throw std::invalid_argument("scenario: each context must be an array");
        std::vector<std::size_t> members;
        for (const auto& v : c) {
            if (v.is_string()) {
                members.push_back(s.measurement_index(v.get<std::string>()));
            } else if (v.is_number_unsigned() || v.is_number_integer()) {
                const long long idx = v.get<long long>();
                if (idx < 0 || static_cast<std::size_t>(idx) >= s.measurements.size())
                    throw std::invalid_argument("scenario: context member index " +
                                                std::to_string(idx) + " out of range");
                members.push_back(static_cast<std::size_t>(idx));
            } else {
                throw std::invalid_argument(
                    "scenario: context members must be measurement names or indices");
            }
        }
        s.contexts.push_back(std::move(members));
    }
    return s;
}

inline Json extended_scenario_to_json(const ExtendedScenario& ext) {
    Json j = scenario_to_json(ext.scenario);
    Json kinds = Json::array();
    for (const auto& info : ext.context_info) {
        Json k;
        if (info.kind == ContextKind::Original)
            k["original"] = info.index;
        else
            k["coupling"] = ext.base.measurements[info.index];
        kinds.push_back(std::move(k));
    }
    j["context_kinds"] = std::move(kinds);
    return j;
}

// ===================== behaviors =====================

// `resolver` loads a referenced scenario when "scenario" is a file path
inline Behavior behavior_from_json(
    const Json& j, const std::function<Json(const std::string&)>& resolver = {}) {
    detail::require_object_keys(j, {"scenario", "tables"}, {}, "behavior");
    Behavior b;
    if (j["scenario"].is_string()) {
        if (!resolver)
            throw std::invalid_argument(
                "behavior: \"scenario\" is a file path but no loader is available here");
        b.scenario = scenario_from_json(resolver(j["scenario"].get<std::string>()));
    } else {
        b.scenario = scenario_from_json(j["scenario"]);
    }
    if (!j["tables"].is_array()) throw std::invalid_argument("behavior: tables must be an array");
    for (std::size_t c = 0; c < j["tables"].size(); ++c) {
        const auto& t = j["tables"][c];
        if (!t.is_array())
            throw std::invalid_argument("behavior: table " + std::to_string(c) +
                                        " must be an array");
        Distribution d;
        for (std::size_t i = 0; i < t.size(); ++i)
            d.p.push_back(detail::rational_from_json(
                t[i], "behavior: tables[" + std::to_string(c) + "][" + std::to_string(i) + "]"));
        b.tables.push_back(std::move(d));
    }
    return b;
}

inline Json behavior_to_json(const Behavior& b, Mode mode = Mode::Float) {
    Json j;
    j["scenario"] = scenario_to_json(b.scenario);
    Json tables = Json::array();
    for (const auto& t : b.tables) {
        Json one = Json::array();
        for (const auto& v : t.p) one.push_back(detail::probability_to_json(v, mode));
        tables.push_back(std::move(one));
    }
    j["tables"] = std::move(tables);
    return j;
}

// ===================== reports =====================

inline Json validation_to_json(const ValidationResult& r) {
    Json j;
    j["ok"] = r.ok();
    Json issues = Json::array();
    for (const auto& i : r.issues) {
        Json one;
        one["code"] = i.code;
        one["message"] = i.message;
        issues.push_back(std::move(one));
    }
    j["issues"] = std::move(issues);
    return j;
}

inline Json disturbance_to_json(const DisturbanceReport& r) {
    Json j;
    j["nondisturbing"] = r.nondisturbing;
    j["worst_gap"] = r.worst;
    if (!r.nondisturbing) {
        j["context_a"] = r.context_a;
        j["context_b"] = r.context_b;
        j["measurements"] = r.measurements;
    }
    return j;
}

// decodes a global-assignment index into one outcome label per measurement
inline Json assignment_to_json(const Scenario& s, std::size_t g) {
    const auto tup = tuple_of_index(g, s.n_measurements(), s.outcomes.size());
    Json out = Json::array();
    for (std::size_t v : tup) out.push_back(s.outcomes.label(v));
    return out;
}

inline Json witness_to_json(const Scenario& s,
                            const std::vector<std::pair<std::size_t, Rational>>& w,
                            Mode mode) {
    Json out = Json::array();
    for (const auto& [g, weight] : w) {
        Json one;
        one["assignment"] = assignment_to_json(s, g);
        one["weight"] = detail::probability_to_json(weight, mode);
        out.push_back(std::move(one));
    }
    return out;
}

inline Json global_model_to_json(const GlobalModel& m, const Scenario& s, Mode mode) {
    Json j;
    j["noncontextual"] = m.noncontextual;
    j["status"] = lp::to_string(m.status);
    j["certified"] = m.certified;
    j["exact_adjudicated"] = m.exact_adjudicated;
    if (m.noncontextual)
        j["witness"] = witness_to_json(s, m.weights, mode);
    else
        j["infeasibility"] = m.infeasibility;
    return j;
}

inline Json extended_model_to_json(const ExtendedModel& m, const Scenario& ext_scenario,
                                   Mode mode) {
    Json j;
    j["noncontextual"] = m.noncontextual;
    j["policy"] = to_string(m.policy);
    j["status"] = lp::to_string(m.status);
    j["certified"] = m.certified;
    j["exact_adjudicated"] = m.exact_adjudicated;
    if (m.policy == CouplingPolicy::Maximal) {
        j["mu_deficit"] = m.mu_deficit;
        if (m.mu_deficit_exact)
            j["mu_deficit_exact"] = detail::rational_to_string(*m.mu_deficit_exact);
    }
    if (!m.reason.empty()) j["reason"] = m.reason;
    if (m.noncontextual) j["witness"] = witness_to_json(ext_scenario, m.weights, mode);
    return j;
}

inline Json quantifier_to_json(const QuantifierValue& q) {
    Json j;
    j["measure"] = to_string(q.measure);
    if (q.infinite)
        j["value"] = "inf";
    else
        j["value"] = q.value;
    if (q.exact) j["exact"] = detail::rational_to_string(*q.exact);
    j["certified"] = q.certified;
    j["exact_adjudicated"] = q.exact_adjudicated;
    return j;
}

inline Json criterion_to_json(const CycleCriterion& c) {
    Json j;
    j["s"] = to_double(c.s);
    j["s_exact"] = detail::rational_to_string(c.s);
    j["bound"] = to_double(c.bound);
    j["excess"] = to_double(c.excess);
    j["excess_exact"] = detail::rational_to_string(c.excess);
    j["contextual"] = c.contextual;
    j["on_boundary"] = c.on_boundary;
    return j;
}

inline Json cycle_report_to_json(const CycleReport& r) {
    Json j;
    j["n"] = r.n;
    auto rats = [](const std::vector<Rational>& v) {
        Json a = Json::array();
        for (const auto& x : v) a.push_back(to_double(x));
        return a;
    };
    Json corr;
    corr["pairs"] = rats(r.correlators.pairs);
    corr["single_in_own"] = rats(r.correlators.single_in_own);
    corr["single_in_prev"] = rats(r.correlators.single_in_prev);
    j["correlators"] = std::move(corr);
    j["nondisturbing"] = r.nondisturbing;
    j["traditional"] = criterion_to_json(r.traditional);
    j["extended"] = criterion_to_json(r.extended);
    Json q;
    q["mu_deficit"] = to_double(r.quantifiers.mu_deficit);
    q["m_deficit"] = to_double(r.quantifiers.m_deficit);
    q["negativity"] = to_double(r.quantifiers.negativity);
    q["l1_uniform"] = to_double(r.quantifiers.l1_uniform);
    q["contextual_fraction"] = to_double(r.quantifiers.contextual_fraction);
    q["traditional_contextual_fraction"] =
        to_double(r.quantifiers.traditional_contextual_fraction);
    j["closed_form"] = std::move(q);
    return j;
}

}  // namespace ctx
