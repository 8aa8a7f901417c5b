#pragma once

// Compatibility scenarios: a finite set of measurements, a shared outcome
// alphabet, and the maximal contexts (jointly measurable subsets). Contexts
// are ordered lists of measurement indices; both measurement order and
// context order are significant and preserved through every transformation.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctx {

// ===================== core types =====================

struct OutcomeAlphabet {
    std::vector<std::string> labels;

    std::size_t size() const { return labels.size(); }
    const std::string& label(std::size_t i) const { return labels.at(i); }

    // index of a label, or npos
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(const std::string& l) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return i;
        return npos;
    }

    bool operator==(const OutcomeAlphabet&) const = default;
};

struct Scenario {
    OutcomeAlphabet outcomes;
    std::vector<std::string> measurements;            // ids, order significant
    std::vector<std::vector<std::size_t>> contexts;   // measurement indices, order significant

    std::size_t n_measurements() const { return measurements.size(); }
    std::size_t n_contexts() const { return contexts.size(); }

    std::size_t measurement_index(const std::string& id) const {
        for (std::size_t i = 0; i < measurements.size(); ++i)
            if (measurements[i] == id) return i;
        throw std::invalid_argument("unknown measurement id \"" + id + "\"");
    }

    // table length of a context: |O|^{|C|}
    std::size_t table_size(std::size_t ci) const {
        std::size_t n = 1;
        for (std::size_t k = 0; k < contexts.at(ci).size(); ++k) n *= outcomes.size();
        return n;
    }

    bool operator==(const Scenario&) const = default;
};

// ===================== outcome-tuple indexing =====================
// Tuples over a context are indexed lexicographically, first listed
// measurement most significant.

inline std::size_t tuple_index(const std::vector<std::size_t>& outcome_idx, std::size_t base) {
    std::size_t idx = 0;
    for (std::size_t v : outcome_idx) {
        if (v >= base) throw std::out_of_range("tuple_index: outcome index out of range");
        idx = idx * base + v;
    }
    return idx;
}

inline std::vector<std::size_t> tuple_of_index(std::size_t idx, std::size_t len, std::size_t base) {
    std::vector<std::size_t> t(len, 0);
    for (std::size_t k = len; k-- > 0;) {
        t[k] = idx % base;
        idx /= base;
    }
    if (idx != 0) throw std::out_of_range("tuple_of_index: index out of range");
    return t;
}

// |O|^n with overflow guard; throws if the result would exceed `cap`.
inline std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base)
            throw std::overflow_error("checked_pow: exceeds cap");
        r *= base;
        if (r > cap) throw std::overflow_error("checked_pow: exceeds cap");
    }
    return r;
}

// ===================== validation =====================

struct ValidationIssue {
    std::string code;     // stable machine tag, e.g. "duplicate-measurement"
    std::string message;  // human text naming the offending identifiers
};

struct ValidationResult {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Checks every structural invariant and reports ALL violations, not just the
// first: nonempty distinct outcome labels, nonempty distinct measurement ids,
// contexts nonempty with known, unrepeated measurements, contexts form an
// antichain (no context contained in another), every measurement covered by
// at least one context.
inline ValidationResult validate(const Scenario& s) {
    ValidationResult r;
    auto issue = [&r](std::string code, std::string msg) {
        r.issues.push_back({std::move(code), std::move(msg)});
    };

    if (s.outcomes.size() == 0) issue("empty-outcome-alphabet", "outcome alphabet is empty");
    for (std::size_t i = 0; i < s.outcomes.size(); ++i)
        for (std::size_t j = i + 1; j < s.outcomes.size(); ++j)
            if (s.outcomes.labels[i] == s.outcomes.labels[j])
                issue("duplicate-outcome-label", "outcome label \"" + s.outcomes.labels[i] + "\" repeats");

    if (s.measurements.empty()) issue("no-measurements", "measurement list is empty");
    for (std::size_t i = 0; i < s.measurements.size(); ++i)
        for (std::size_t j = i + 1; j < s.measurements.size(); ++j)
            if (s.measurements[i] == s.measurements[j])
                issue("duplicate-measurement", "measurement id \"" + s.measurements[i] + "\" repeats");

    if (s.contexts.empty()) issue("no-contexts", "context list is empty");
    for (std::size_t c = 0; c < s.contexts.size(); ++c) {
        const auto& ctx = s.contexts[c];
        if (ctx.empty()) issue("empty-context", "context " + std::to_string(c) + " is empty");
        for (std::size_t k = 0; k < ctx.size(); ++k) {
            if (ctx[k] >= s.measurements.size()) {
                issue("unknown-measurement-in-context",
                      "context " + std::to_string(c) + " refers to measurement index " +
                          std::to_string(ctx[k]) + " out of range");
                continue;
            }
            for (std::size_t l = k + 1; l < ctx.size(); ++l)
                if (ctx[k] == ctx[l])
                    issue("repeated-measurement-in-context",
                          "context " + std::to_string(c) + " repeats measurement \"" +
                              s.measurements[ctx[k]] + "\"");
        }
    }

    // antichain: compare contexts as sets
    auto as_set = [](const std::vector<std::size_t>& v) {
        std::vector<std::size_t> w(v);
        std::sort(w.begin(), w.end());
        return w;
    };
    for (std::size_t a = 0; a < s.contexts.size(); ++a) {
        for (std::size_t b = 0; b < s.contexts.size(); ++b) {
            if (a == b) continue;
            const auto sa = as_set(s.contexts[a]), sb = as_set(s.contexts[b]);
            if (!std::includes(sb.begin(), sb.end(), sa.begin(), sa.end())) continue;
            const bool duplicate = sa == sb;
            if (duplicate && a > b) continue;  // report duplicate pairs once
            issue("context-not-maximal",
                  "context " + std::to_string(a) + " is contained in context " + std::to_string(b) +
                      (duplicate ? " (duplicate context)" : ""));
        }
    }

    std::vector<bool> covered(s.measurements.size(), false);
    for (const auto& ctx : s.contexts)
        for (std::size_t m : ctx)
            if (m < covered.size()) covered[m] = true;
    for (std::size_t m = 0; m < covered.size(); ++m)
        if (!covered[m])
            issue("uncovered-measurement",
                  "measurement \"" + s.measurements[m] + "\" appears in no context");

    return r;
}

inline void require_valid(const Scenario& s) {
    auto r = validate(s);
    if (!r.ok()) {
        std::string msg = "invalid scenario:";
        for (const auto& i : r.issues) msg += " [" + i.code + "] " + i.message + ";";
        throw std::invalid_argument(msg);
    }
}

// ===================== builders / queries =====================

// The n-cycle scenario: measurements "0".."n-1" with outcomes {-1,+1};
// context i = {i, (i+1) mod n}. Requires n >= 3.
inline Scenario n_cycle(std::size_t n) {
    if (n < 3) throw std::invalid_argument("n_cycle: need n >= 3, got " + std::to_string(n));
    Scenario s;
    s.outcomes.labels = {"-1", "+1"};
    s.measurements.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.measurements.push_back(std::to_string(i));
    s.contexts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.contexts.push_back({i, (i + 1) % n});
    return s;
}

// Indices of all contexts containing measurement m, in scenario order.
inline std::vector<std::size_t> contexts_of(const Scenario& s, std::size_t m) {
    if (m >= s.measurements.size())
        throw std::invalid_argument("contexts_of: measurement index out of range");
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < s.contexts.size(); ++c)
        if (std::find(s.contexts[c].begin(), s.contexts[c].end(), m) != s.contexts[c].end())
            out.push_back(c);
    return out;
}

// Position of measurement m inside context ci, or throws.
inline std::size_t position_in_context(const Scenario& s, std::size_t ci, std::size_t m) {
    const auto& c = s.contexts.at(ci);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] == m) return k;
    throw std::invalid_argument("measurement \"" + s.measurements.at(m) + "\" not in context " +
                                std::to_string(ci));
}

}  // namespace ctx
