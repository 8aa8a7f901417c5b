#pragma once

// Behaviors: one outcome distribution per context. Probabilities are stored
// as exact rationals (authoritative) with doubles derived on demand, so the
// float and exact solver modes always agree on their inputs.

#include "ctx/rational.hpp"
#include "ctx/scenario.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace ctx {

inline constexpr double kEpsProb = 1e-9;    // probability validation tolerance
inline constexpr double kEpsNd   = 1e-7;    // default nondisturbance tolerance

// ===================== Distribution =====================

struct Distribution {
    std::vector<Rational> p;

    Distribution() = default;
    explicit Distribution(std::vector<Rational> v) : p(std::move(v)) {}

    static Distribution from_doubles(const std::vector<double>& v) {
        Distribution d;
        d.p.reserve(v.size());
        for (double x : v) d.p.push_back(rational_from_double(x));
        return d;
    }

    std::size_t size() const { return p.size(); }
    double value(std::size_t i) const { return to_double(p.at(i)); }
    const Rational& exact(std::size_t i) const { return p.at(i); }

    std::vector<double> values() const {
        std::vector<double> v(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) v[i] = to_double(p[i]);
        return v;
    }

    Rational sum() const {
        Rational s = 0;
        for (const auto& x : p) s += x;
        return s;
    }

    bool operator==(const Distribution&) const = default;
};

// Validates entries in [0,1] and total 1 within eps. Entries in [-eps, 0)
// are clamped to zero in place (tiny negatives from upstream float math).
inline void validate_distribution(Distribution& d, double eps, const std::string& where,
                                  ValidationResult& out) {
    for (std::size_t i = 0; i < d.p.size(); ++i) {
        const double v = to_double(d.p[i]);
        if (v < 0.0) {
            if (v >= -eps) {
                d.p[i] = 0;
            } else {
                out.issues.push_back({"negative-probability",
                                      where + ": entry " + std::to_string(i) + " is " +
                                          std::to_string(v)});
            }
        } else if (v > 1.0 + eps) {
            out.issues.push_back({"probability-above-one",
                                  where + ": entry " + std::to_string(i) + " is " +
                                      std::to_string(v)});
        }
    }
    const double s = to_double(d.sum());
    if (std::abs(s - 1.0) > eps)
        out.issues.push_back({"not-normalized",
                              where + ": entries sum to " + std::to_string(s)});
}

// ===================== Behavior =====================

struct Behavior {
    Scenario scenario;
    std::vector<Distribution> tables;  // one per context, scenario.contexts order

    const Distribution& table(std::size_t ci) const { return tables.at(ci); }
};

// Structural + probabilistic validation; reports every violation with the
// offending context index. Clamps tiny negatives like validate_distribution.
inline ValidationResult validate(Behavior& b, double eps = kEpsProb) {
    ValidationResult r = validate(b.scenario);
    if (b.tables.size() != b.scenario.n_contexts()) {
        r.issues.push_back({"table-count-mismatch",
                            "behavior has " + std::to_string(b.tables.size()) + " tables for " +
                                std::to_string(b.scenario.n_contexts()) + " contexts"});
        return r;
    }
    for (std::size_t c = 0; c < b.tables.size(); ++c) {
        const std::size_t want = b.scenario.table_size(c);
        if (b.tables[c].size() != want) {
            r.issues.push_back({"table-length-mismatch",
                                "context " + std::to_string(c) + " table has " +
                                    std::to_string(b.tables[c].size()) + " entries, expected " +
                                    std::to_string(want)});
            continue;
        }
        validate_distribution(b.tables[c], eps, "context " + std::to_string(c), r);
    }
    return r;
}

inline void require_valid(Behavior& b, double eps = kEpsProb) {
    auto r = validate(b, eps);
    if (!r.ok()) {
        std::string msg = "invalid behavior:";
        for (const auto& i : r.issues) msg += " [" + i.code + "] " + i.message + ";";
        throw std::invalid_argument(msg);
    }
}

// ===================== marginals =====================

// Marginal of context ci onto `subset` (measurement indices, all belonging to
// the context; the result is indexed by tuples over `subset` in the GIVEN
// order). The result is renormalized by the table total, so inputs normalized
// only within tolerance come out exactly normalized.
inline Distribution marginal(const Behavior& b, std::size_t ci,
                             const std::vector<std::size_t>& subset) {
    const auto& ctx = b.scenario.contexts.at(ci);
    const std::size_t base = b.scenario.outcomes.size();

    std::vector<std::size_t> pos;  // positions of subset members inside the context
    pos.reserve(subset.size());
    for (std::size_t m : subset) pos.push_back(position_in_context(b.scenario, ci, m));

    std::size_t out_size = 1;
    for (std::size_t k = 0; k < subset.size(); ++k) out_size *= base;

    Distribution out;
    out.p.assign(out_size, Rational(0));
    const Distribution& t = b.table(ci);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        const auto tup = tuple_of_index(idx, ctx.size(), base);
        std::vector<std::size_t> sub(subset.size());
        for (std::size_t k = 0; k < subset.size(); ++k) sub[k] = tup[pos[k]];
        out.p[tuple_index(sub, base)] += t.exact(idx);
    }
    const Rational total = t.sum();
    if (total == 0) throw std::invalid_argument("marginal: context table sums to zero");
    if (total != 1)
        for (auto& v : out.p) v /= total;
    return out;
}

// ===================== nondisturbance =====================

struct DisturbanceReport {
    bool nondisturbing = true;
    double worst = 0.0;                       // max |p_i - p_j| over shared marginals
    std::size_t context_a = 0, context_b = 0; // location of the worst violation
    std::vector<std::size_t> measurements;    // the shared set at the worst violation
};

// Checks marginal agreement on the full intersection of every context pair
// (agreement there implies agreement on all sub-collections). Intersections
// are ordered by global measurement index so both sides index identically.
inline DisturbanceReport disturbance_report(const Behavior& b, double tol = kEpsNd) {
    DisturbanceReport rep;
    const auto& s = b.scenario;
    for (std::size_t a = 0; a < s.n_contexts(); ++a) {
        for (std::size_t c = a + 1; c < s.n_contexts(); ++c) {
            std::vector<std::size_t> shared;
            for (std::size_t m : s.contexts[a])
                if (std::find(s.contexts[c].begin(), s.contexts[c].end(), m) != s.contexts[c].end())
                    shared.push_back(m);
            if (shared.empty()) continue;
            std::sort(shared.begin(), shared.end());
            const Distribution ma = marginal(b, a, shared);
            const Distribution mc = marginal(b, c, shared);
            for (std::size_t i = 0; i < ma.size(); ++i) {
                const double d = std::abs(to_double(ma.exact(i) - mc.exact(i)));
                if (d > rep.worst) {
                    rep.worst = d;
                    rep.context_a = a;
                    rep.context_b = c;
                    rep.measurements = shared;
                }
            }
        }
    }
    rep.nondisturbing = rep.worst <= tol;
    return rep;
}

inline bool is_nondisturbing(const Behavior& b, double tol = kEpsNd) {
    return disturbance_report(b, tol).nondisturbing;
}

// ===================== binary-outcome helpers =====================

// Expectation of the k-th measurement of context ci under outcome values
// {index 0 -> -1, index 1 -> +1}; requires a binary alphabet.
inline Rational expectation_in_context(const Behavior& b, std::size_t ci, std::size_t pos) {
    const std::size_t base = b.scenario.outcomes.size();
    if (base != 2) throw std::invalid_argument("expectation_in_context: needs a binary alphabet");
    const auto& ctx = b.scenario.contexts.at(ci);
    const Distribution& t = b.table(ci);
    Rational e = 0;
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        const auto tup = tuple_of_index(idx, ctx.size(), base);
        e += (tup.at(pos) == 1 ? t.exact(idx) : -t.exact(idx));
    }
    return e;
}

// Pair correlator <first * second> of a two-measurement binary context.
inline Rational pair_correlator(const Behavior& b, std::size_t ci) {
    const std::size_t base = b.scenario.outcomes.size();
    if (base != 2 || b.scenario.contexts.at(ci).size() != 2)
        throw std::invalid_argument("pair_correlator: needs a binary two-measurement context");
    const Distribution& t = b.table(ci);
    // tuple order: (0,0),(0,1),(1,0),(1,1) with 0 -> -1, 1 -> +1
    return t.exact(0) - t.exact(1) - t.exact(2) + t.exact(3);
}

// Builds the binary two-measurement table with given singles and correlator:
// p(a,b) = (1 + a*s1 + b*s2 + a*b*c) / 4, tuple order as above.
inline Distribution table_from_correlations(const Rational& s1, const Rational& s2,
                                            const Rational& c) {
    Distribution d;
    d.p.reserve(4);
    for (int a : {-1, +1})
        for (int bb : {-1, +1})
            d.p.push_back((Rational(1) + a * s1 + bb * s2 + a * bb * c) / 4);
    // stored order must be (−1,−1),(−1,+1),(+1,−1),(+1,+1) = indices (0,0),(0,1),(1,0),(1,1)
    return d;
}

// ===================== n-cycle construction from correlators =====================

// General (possibly disturbing) n-cycle behavior: context i carries
//   first measurement i with single `single_in_own[i]`   (its copy in context i)
//   second measurement i+1 with single `single_in_prev[i+1]` (its copy in context i)
// and pair correlator `pairs[i]`. All inputs exact rationals in [-1, 1]; every
// resulting table entry must be nonnegative or the construction throws with
// the offending context.
inline Behavior behavior_from_cycle_correlators(std::size_t n,
                                                const std::vector<Rational>& pairs,
                                                const std::vector<Rational>& single_in_own,
                                                const std::vector<Rational>& single_in_prev) {
    if (pairs.size() != n || single_in_own.size() != n || single_in_prev.size() != n)
        throw std::invalid_argument("behavior_from_cycle_correlators: need n entries per vector");
    auto in_range = [](const Rational& v) { return v >= -1 && v <= 1; };
    for (std::size_t i = 0; i < n; ++i)
        if (!in_range(pairs[i]) || !in_range(single_in_own[i]) || !in_range(single_in_prev[i]))
            throw std::invalid_argument(
                "behavior_from_cycle_correlators: correlator outside [-1,1] at index " +
                std::to_string(i));

    Behavior b;
    b.scenario = n_cycle(n);
    b.tables.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        Distribution t = table_from_correlations(single_in_own[i], single_in_prev[j], pairs[i]);
        for (std::size_t k = 0; k < t.size(); ++k)
            if (t.exact(k) < 0)
                throw std::invalid_argument(
                    "behavior_from_cycle_correlators: context " + std::to_string(i) +
                    " gets negative probability " + std::to_string(t.value(k)));
        b.tables.push_back(std::move(t));
    }
    return b;
}

// Nondisturbing convenience: one single per measurement, used in both of its
// contexts.
inline Behavior behavior_from_cycle_correlators(std::size_t n,
                                                const std::vector<Rational>& pairs,
                                                const std::vector<Rational>& singles) {
    return behavior_from_cycle_correlators(n, pairs, singles, singles);
}

inline Behavior behavior_from_cycle_correlators(std::size_t n,
                                                const std::vector<double>& pairs,
                                                const std::vector<double>& singles) {
    std::vector<Rational> p, s;
    for (double v : pairs) p.push_back(rational_from_double(v));
    for (double v : singles) s.push_back(rational_from_double(v));
    return behavior_from_cycle_correlators(n, p, s, s);
}

}  // namespace ctx
