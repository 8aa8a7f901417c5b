#pragma once

// Extended scenarios: every measurement is split into one copy per context
// containing it, so that context-dependence of a measurement's statistics
// becomes visible structurally instead of being averaged away.
//
//   measurements:  copy "<base>^<c>" for each base measurement and each of
//                  its containing contexts c, grouped by base measurement in
//                  base order, copies ordered by containing-context index
//   contexts:      first the Original contexts (one per base context, each
//                  holding the copies of its members in the same order), then
//                  one Coupling context per base measurement appearing in two
//                  or more contexts (all its copies, in containing-context
//                  order); measurements in a single context get no coupling
//                  context, a singleton would add nothing
//
// A behavior on the base scenario lifts to the extension by reusing each base
// table verbatim on its Original context (copy order equals base order, so
// tables transfer bit for bit) and filling each Coupling context with a
// coupling of the copy marginals chosen by policy: the canonical maximal
// coupling always exists; a multimaximal coupling may not, and its absence is
// reported rather than papered over.

#include "ctx/behavior.hpp"
#include "ctx/coupling.hpp"
#include "ctx/scenario.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctx {

struct CopyId {
    std::size_t base_measurement = 0;
    std::size_t base_context = 0;

    bool operator==(const CopyId&) const = default;
};

enum class ContextKind { Original, Coupling };

struct ExtendedContextInfo {
    ContextKind kind = ContextKind::Original;
    std::size_t index = 0;  // Original: base context index; Coupling: base measurement index

    bool operator==(const ExtendedContextInfo&) const = default;
};

struct ExtendedScenario {
    Scenario base;
    Scenario scenario;                               // the extension itself
    std::vector<CopyId> copies;                      // extended measurement -> identity
    std::vector<ExtendedContextInfo> context_info;   // extended context -> provenance

    std::size_t n_original_contexts() const { return base.n_contexts(); }
    std::size_t n_coupling_contexts() const { return scenario.n_contexts() - base.n_contexts(); }

    // extended index of the copy of base measurement m in base context c
    std::size_t copy_index(std::size_t m, std::size_t c) const {
        for (std::size_t j = 0; j < copies.size(); ++j)
            if (copies[j].base_measurement == m && copies[j].base_context == c) return j;
        throw std::invalid_argument("copy_index: measurement " + std::to_string(m) +
                                    " has no copy in context " + std::to_string(c));
    }

    // extended indices of all copies of base measurement m, containing-context order
    std::vector<std::size_t> copies_of(std::size_t m) const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < copies.size(); ++j)
            if (copies[j].base_measurement == m) out.push_back(j);
        return out;
    }
};

inline ExtendedScenario extend(const Scenario& base) {
    require_valid(base);
    ExtendedScenario ext;
    ext.base = base;
    ext.scenario.outcomes = base.outcomes;

    // copies, grouped by base measurement
    for (std::size_t m = 0; m < base.n_measurements(); ++m)
        for (std::size_t c : contexts_of(base, m)) {
            ext.scenario.measurements.push_back(base.measurements[m] + "^" + std::to_string(c));
            ext.copies.push_back({m, c});
        }

    // Original contexts, base order
    for (std::size_t c = 0; c < base.n_contexts(); ++c) {
        std::vector<std::size_t> members;
        members.reserve(base.contexts[c].size());
        for (std::size_t m : base.contexts[c]) members.push_back(ext.copy_index(m, c));
        ext.scenario.contexts.push_back(std::move(members));
        ext.context_info.push_back({ContextKind::Original, c});
    }
    // Coupling contexts for shared measurements, base measurement order
    for (std::size_t m = 0; m < base.n_measurements(); ++m) {
        auto group = ext.copies_of(m);
        if (group.size() < 2) continue;
        ext.scenario.contexts.push_back(std::move(group));
        ext.context_info.push_back({ContextKind::Coupling, m});
    }
    return ext;
}

// ===================== lifting behaviors =====================

enum class CouplingPolicy { Maximal, Multimaximal };

inline const char* to_string(CouplingPolicy p) {
    return p == CouplingPolicy::Maximal ? "maximal" : "multimaximal";
}

struct LiftResult {
    bool ok = false;
    Behavior behavior;   // on ext.scenario when ok
    std::string reason;  // names the measurement whose coupling fails to exist
};

// marginals of all copies of base measurement m, containing-context order
inline std::vector<Distribution> copy_marginals(const Scenario& base, const Behavior& b,
                                                std::size_t m) {
    std::vector<Distribution> parts;
    for (std::size_t c : contexts_of(base, m)) parts.push_back(marginal(b, c, {m}));
    return parts;
}

inline LiftResult lift_behavior(const ExtendedScenario& ext, const Behavior& base_behavior,
                                CouplingPolicy policy) {
    if (!(base_behavior.scenario == ext.base))
        throw std::invalid_argument("lift_behavior: behavior is not on the base scenario");

    LiftResult out;
    out.behavior.scenario = ext.scenario;
    out.behavior.tables.reserve(ext.scenario.n_contexts());

    for (std::size_t ci = 0; ci < ext.scenario.n_contexts(); ++ci) {
        const auto& info = ext.context_info[ci];
        if (info.kind == ContextKind::Original) {
            // copies sit in base order, so the base table transfers verbatim
            out.behavior.tables.push_back(base_behavior.table(info.index));
            continue;
        }
        const auto parts = copy_marginals(ext.base, base_behavior, info.index);
        if (policy == CouplingPolicy::Maximal) {
            out.behavior.tables.push_back(canonical_maximal_coupling(parts).joint);
        } else {
            auto mm = multimaximal_coupling(parts);
            if (!mm.exists) {
                out.reason = "measurement \"" + ext.base.measurements[info.index] +
                             "\" admits no multimaximal coupling of its context marginals";
                return out;
            }
            out.behavior.tables.push_back(std::move(mm.table.joint));
        }
    }
    out.ok = true;
    return out;
}

}  // namespace ctx
