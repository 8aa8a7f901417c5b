#pragma once

// Closed-form criteria and quantifiers for cycle scenarios (binary outcomes,
// contexts {i, i+1 mod n}). These are the independent cross-check against the
// LP machinery: everything here is exact rational arithmetic, no solver.
//
// The workhorse is s(z) = max over sign vectors with an odd number of minus
// signs of sum_i gamma_i z_i. A nondisturbing cycle behavior is noncontextual
// precisely when s(pair correlators) <= n - 2. The extended criterion feeds s
// the 2n interleaved values (pair correlator of context i, then the maximal
// coupling correlator 1 - |difference of the two context reads| of
// measurement i+1) against the bound 2n - 2; it applies to disturbing
// behaviors as well, which is its reason to exist.
//
// The excess max(s - bound, 0) converts to quantifier values in closed form;
// the prefactors below are checked against the LP path by the test suite.

#include "ctx/behavior.hpp"
#include "ctx/coupling.hpp"
#include "ctx/rational.hpp"
#include "ctx/scenario.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctx {

// ===================== the s-function =====================

// max over odd-minus-count sign vectors of the signed sum; closed form:
// flipping all negative entries positive costs nothing when their count is
// odd, otherwise the cheapest entry must stay (or become) negative
inline Rational s_function(const std::vector<Rational>& z) {
    if (z.empty()) throw std::invalid_argument("s_function: empty argument");
    Rational sum_abs(0);
    Rational min_abs;
    bool first = true;
    std::size_t negatives = 0;
    for (const auto& v : z) {
        const Rational a = v < 0 ? Rational(-v) : v;
        if (v < 0) ++negatives;
        sum_abs += a;
        if (first || a < min_abs) { min_abs = a; first = false; }
    }
    if (negatives % 2 == 1) return sum_abs;
    return sum_abs - 2 * min_abs;
}

// ===================== correlator extraction =====================

struct CycleCorrelators {
    std::vector<Rational> pairs;           // context i: <m_i m_{i+1}>
    std::vector<Rational> single_in_own;   // <m_i> read in context i (first slot)
    std::vector<Rational> single_in_prev;  // <m_i> read in context i-1 (second slot)

    std::size_t n() const { return pairs.size(); }
};

// requires the canonical cycle shape: binary outcomes labelled -1/+1 and
// context i = {i, (i+1) mod n}; measurement names are free
inline void require_cycle_shape(const Scenario& s) {
    const std::size_t n = s.n_measurements();
    if (n < 3 || s.n_contexts() != n ||
        s.outcomes.labels != std::vector<std::string>{"-1", "+1"})
        throw std::invalid_argument("cycle analysis: scenario is not a canonical cycle");
    for (std::size_t i = 0; i < n; ++i)
        if (s.contexts[i] != std::vector<std::size_t>{i, (i + 1) % n})
            throw std::invalid_argument(
                "cycle analysis: context " + std::to_string(i) +
                " is not {" + std::to_string(i) + ", " + std::to_string((i + 1) % n) + "}");
}

inline CycleCorrelators cycle_correlators(const Behavior& b) {
    require_cycle_shape(b.scenario);
    const std::size_t n = b.scenario.n_measurements();
    CycleCorrelators c;
    c.pairs.resize(n);
    c.single_in_own.resize(n);
    c.single_in_prev.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.pairs[i] = pair_correlator(b, i);
        c.single_in_own[i] = expectation_in_context(b, i, 0);
        c.single_in_prev[(i + 1) % n] = expectation_in_context(b, i, 1);
    }
    return c;
}

// ===================== criteria =====================

struct CycleCriterion {
    Rational s{};         // attained value
    Rational bound{};     // facet bound
    Rational excess{};    // max(s - bound, 0)
    bool contextual = false;
    bool on_boundary = false;  // s == bound exactly
};

namespace detail {

inline CycleCriterion make_criterion(Rational s, Rational bound) {
    CycleCriterion c;
    c.s = std::move(s);
    c.bound = std::move(bound);
    c.excess = c.s > c.bound ? Rational(c.s - c.bound) : Rational(0);
    c.contextual = c.s > c.bound;
    c.on_boundary = c.s == c.bound;
    return c;
}

}  // namespace detail

// s(pairs) <= n - 2; decides noncontextuality for nondisturbing cycle
// behaviors (for disturbing ones use the extended criterion)
inline CycleCriterion traditional_cycle_criterion(const CycleCorrelators& c) {
    const std::size_t n = c.n();
    if (n < 3) throw std::invalid_argument("traditional_cycle_criterion: need n >= 3");
    return detail::make_criterion(s_function(c.pairs), Rational(n) - 2);
}

// s over the 2n interleaved values <= 2n - 2; decides extended
// noncontextuality (maximal-coupling policy) for any cycle behavior
inline CycleCriterion extended_cycle_criterion(const CycleCorrelators& c) {
    const std::size_t n = c.n();
    if (n < 3) throw std::invalid_argument("extended_cycle_criterion: need n >= 3");
    std::vector<Rational> z;
    z.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        z.push_back(c.pairs[i]);
        const std::size_t j = (i + 1) % n;
        z.push_back(coupling_correlator(c.single_in_prev[j], c.single_in_own[j]));
    }
    return detail::make_criterion(s_function(z), Rational(2 * n) - 2);
}

// ===================== closed-form quantifiers =====================

struct CycleQuantifiers {
    // extended measures, from the extended excess
    Rational mu_deficit;            // excess / 2
    Rational m_deficit;             // excess / 2n
    Rational negativity;            // excess / (2n - 2)
    Rational l1_uniform;            // excess / 2n
    Rational contextual_fraction;   // excess / 2, for the lifted behavior
    // traditional contextual fraction, from the traditional excess
    Rational traditional_contextual_fraction;  // excess_trad / 2
};

inline CycleQuantifiers closed_form_cycle_quantifiers(const CycleCorrelators& c) {
    const std::size_t n = c.n();
    const auto trad = traditional_cycle_criterion(c);
    const auto ext = extended_cycle_criterion(c);
    CycleQuantifiers q;
    q.mu_deficit = ext.excess / 2;
    q.m_deficit = ext.excess / Rational(2 * n);
    q.negativity = ext.excess / Rational(2 * n - 2);
    q.l1_uniform = ext.excess / Rational(2 * n);
    q.contextual_fraction = ext.excess / 2;
    q.traditional_contextual_fraction = trad.excess / 2;
    return q;
}

// ===================== one-stop report =====================

struct CycleReport {
    std::size_t n = 0;
    CycleCorrelators correlators;
    bool nondisturbing = false;          // exact: both reads of every single agree
    CycleCriterion traditional;          // meaningful when nondisturbing
    CycleCriterion extended;             // always meaningful
    CycleQuantifiers quantifiers;
};

inline CycleReport analyze_cycle(const Behavior& b) {
    CycleReport r;
    r.correlators = cycle_correlators(b);
    r.n = r.correlators.n();
    r.nondisturbing = true;
    for (std::size_t j = 0; j < r.n; ++j)
        if (r.correlators.single_in_own[j] != r.correlators.single_in_prev[j])
            r.nondisturbing = false;
    r.traditional = traditional_cycle_criterion(r.correlators);
    r.extended = extended_cycle_criterion(r.correlators);
    r.quantifiers = closed_form_cycle_quantifiers(r.correlators);
    return r;
}

}  // namespace ctx
