#pragma once

// Degree-of-contextuality measures. All of them are linear programs over the
// assignment polytope of the behavior's scenario:
//
//   contextual fraction   1 - (largest noncontextual subbehavior mass):
//                         max 1.l  s.t.  A l <= B, l >= 0
//   negativity            cheapest signed global model:
//                         min |q|_1 - 1  s.t.  A q = B  (+inf if none exists,
//                         which happens exactly for disturbing behaviors)
//   l1 distances          nearest noncontextual behavior in stacked l1:
//                         min |A l - B|_1 over the simplex of models, as the
//                         total, the per-context average, or the worst context
//   agreement deficits    on the extended scenario, with original contexts
//                         pinned: the total shortfall of copy agreement below
//                         the coupling bounds (mu deficit, via the decision
//                         machinery) and the worst single-measurement
//                         shortfall any global model must concede (m deficit)
//
// Float runs whose value sits within 10x the tolerance of a decision edge are
// re-run exactly; `exact_adjudicated` records that. Solver certificates are
// re-checked independently and recorded in `certified`.

#include "ctx/behavior.hpp"
#include "ctx/extension.hpp"
#include "ctx/lp.hpp"
#include "ctx/polytope.hpp"
#include "ctx/rational.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctx {

enum class Measure {
    ContextualFraction,
    Negativity,
    L1Total,
    L1Uniform,
    L1Max,
    MuDeficit,
    MDeficit,
};

inline const char* to_string(Measure m) {
    switch (m) {
        case Measure::ContextualFraction: return "contextual-fraction";
        case Measure::Negativity: return "negativity";
        case Measure::L1Total: return "l1-total";
        case Measure::L1Uniform: return "l1-uniform";
        case Measure::L1Max: return "l1-max";
        case Measure::MuDeficit: return "mu-deficit";
        case Measure::MDeficit: return "m-deficit";
    }
    return "?";
}

// parses the CLI spellings: cf, neg, l1, l1u, l1max, mu, m (plus long names)
inline Measure measure_from_string(const std::string& s) {
    if (s == "cf" || s == "contextual-fraction") return Measure::ContextualFraction;
    if (s == "neg" || s == "negativity") return Measure::Negativity;
    if (s == "l1" || s == "l1-total") return Measure::L1Total;
    if (s == "l1u" || s == "l1-uniform") return Measure::L1Uniform;
    if (s == "l1max" || s == "l1-max") return Measure::L1Max;
    if (s == "mu" || s == "mu-deficit") return Measure::MuDeficit;
    if (s == "m" || s == "m-deficit") return Measure::MDeficit;
    throw std::invalid_argument("unknown measure \"" + s + "\"");
}

struct QuantifierValue {
    Measure measure = Measure::ContextualFraction;
    double value = 0.0;
    std::optional<Rational> exact;   // present after an exact run
    bool infinite = false;           // negativity of a disturbing behavior
    bool certified = false;
    bool exact_adjudicated = false;
    long iterations = 0;
};

namespace detail {

template <typename T>
struct MeasureRun {
    T value{};
    bool infinite = false;
    bool certified = false;
    long iterations = 0;
    double borderline_gap = 0.0;  // distance to the nearest decision edge
};

// ----- contextual fraction: max mass of a subnormalized global model -----
template <typename T>
MeasureRun<T> run_cf(const Behavior& b, const AnalysisConfig& cfg) {
    const auto A = vertex_matrix<T>(b.scenario, cfg.cap);
    const std::size_t R = A.rows, G = A.cols;
    lp::Problem<T> p;
    p.A = lp::Matrix<T>(R, G + R);
    for (std::size_t i = 0; i < R; ++i) {
        for (std::size_t g = 0; g < G; ++g) p.A.at(i, g) = A.at(i, g);
        p.A.at(i, G + i) = T(1);
    }
    p.b = behavior_vector<T>(b);
    p.c.assign(G + R, T(0));
    for (std::size_t g = 0; g < G; ++g) p.c[g] = T(-1);

    lp::SimplexOptions opt;
    opt.eps = cfg.eps;
    const auto sol = lp::solve(p, opt);
    if (sol.status != lp::Status::Optimal)
        throw std::logic_error("contextual fraction: subnormalized model LP must be solvable");
    MeasureRun<T> out;
    out.value = T(1) + sol.value;  // 1 - max mass
    if constexpr (!std::is_same_v<T, Rational>) {
        if (out.value < 0 && out.value > -cfg.eps) out.value = 0;
    }
    out.certified = lp::verify(p, sol, cfg.eps).ok;
    out.iterations = sol.iterations;
    out.borderline_gap = std::abs(as_double(out.value));
    return out;
}

// ----- negativity: cheapest signed model, +inf when none exists -----
template <typename T>
MeasureRun<T> run_negativity(const Behavior& b, const AnalysisConfig& cfg) {
    const auto A = vertex_matrix<T>(b.scenario, cfg.cap);
    const std::size_t R = A.rows, G = A.cols;
    lp::Problem<T> p;
    p.A = lp::Matrix<T>(R, 2 * G);
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t g = 0; g < G; ++g) {
            p.A.at(i, g) = A.at(i, g);
            p.A.at(i, G + g) = T(0) - A.at(i, g);
        }
    p.b = behavior_vector<T>(b);
    p.c.assign(2 * G, T(1));

    lp::SimplexOptions opt;
    opt.eps = cfg.eps;
    const auto sol = lp::solve(p, opt);
    MeasureRun<T> out;
    out.certified = lp::verify(p, sol, cfg.eps).ok;
    out.iterations = sol.iterations;
    if (sol.status == lp::Status::Infeasible) {
        out.infinite = true;
        out.borderline_gap = as_double(sol.value);  // phase-1 mass
        return out;
    }
    if (sol.status != lp::Status::Optimal)
        throw std::logic_error("negativity: unexpected solver status");
    out.value = sol.value - T(1);
    if constexpr (!std::is_same_v<T, Rational>) {
        if (out.value < 0 && out.value > -cfg.eps) out.value = 0;
    }
    out.borderline_gap = std::abs(as_double(out.value));
    return out;
}

// ----- l1 family: distance from the model simplex -----
enum class L1Flavor { Total, Uniform, Max };

template <typename T>
MeasureRun<T> run_l1(const Behavior& b, L1Flavor flavor, const AnalysisConfig& cfg) {
    const auto A = vertex_matrix<T>(b.scenario, cfg.cap);
    const std::size_t R = A.rows, G = A.cols, C = b.scenario.n_contexts();
    const auto off = row_offsets(b.scenario);
    const bool maxflavor = flavor == L1Flavor::Max;

    // variables: l (G) | s+ (R) | s- (R) | [u (C) | z (1)] for the max flavor
    const std::size_t n_vars = G + 2 * R + (maxflavor ? C + 1 : 0);
    const std::size_t zcol = G + 2 * R + C;
    const std::size_t n_rows = R + 1 + (maxflavor ? C : 0);
    lp::Problem<T> p;
    p.A = lp::Matrix<T>(n_rows, n_vars);
    p.b.assign(n_rows, T(0));
    p.c.assign(n_vars, T(0));

    const auto target = behavior_vector<T>(b);
    for (std::size_t i = 0; i < R; ++i) {
        for (std::size_t g = 0; g < G; ++g) p.A.at(i, g) = A.at(i, g);
        p.A.at(i, G + i) = T(1);
        p.A.at(i, G + R + i) = T(-1);
        p.b[i] = target[i];
    }
    for (std::size_t g = 0; g < G; ++g) p.A.at(R, g) = T(1);  // proper model
    p.b[R] = T(1);

    if (maxflavor) {
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t i = off[c]; i < off[c + 1]; ++i) {
                p.A.at(R + 1 + c, G + i) = T(1);
                p.A.at(R + 1 + c, G + R + i) = T(1);
            }
            p.A.at(R + 1 + c, G + 2 * R + c) = T(1);   // slack: block sum <= z
            p.A.at(R + 1 + c, zcol) = T(-1);
        }
        p.c[zcol] = T(1);
    } else {
        for (std::size_t i = 0; i < 2 * R; ++i) p.c[G + i] = T(1);
    }

    lp::SimplexOptions opt;
    opt.eps = cfg.eps;
    const auto sol = lp::solve(p, opt);
    if (sol.status != lp::Status::Optimal)
        throw std::logic_error("l1 distance: simplex-constrained LP must be solvable");
    MeasureRun<T> out;
    out.value = sol.value;
    if (flavor == L1Flavor::Uniform) out.value /= T(static_cast<double>(C));
    if constexpr (!std::is_same_v<T, Rational>) {
        if (out.value < 0 && out.value > -cfg.eps) out.value = 0;
    }
    out.certified = lp::verify(p, sol, cfg.eps).ok;
    out.iterations = sol.iterations;
    out.borderline_gap = std::abs(as_double(out.value));
    return out;
}

// ----- m deficit: worst per-measurement agreement shortfall -----
template <typename T>
MeasureRun<T> run_m_deficit(const Behavior& base, const AnalysisConfig& cfg) {
    const auto ext = extend(base.scenario);
    const std::size_t k = ext.scenario.outcomes.size();
    const std::size_t cols = assignment_count(ext.scenario, cfg.cap);
    const auto shared = shared_measurements(ext, base);

    lp::Problem<T> p;
    append_original_pins(ext, base, cols, cfg.cap, p);
    const std::size_t pin_rows = p.A.rows;
    const std::size_t S = shared.size();
    // variables: l (cols) | z (1) | w (S slacks);   agree.l + z - w = mu
    const std::size_t zcol = cols, wcol = cols + 1;
    lp::Matrix<T> A(pin_rows + S, cols + 1 + S);
    for (std::size_t i = 0; i < pin_rows; ++i)
        for (std::size_t g = 0; g < cols; ++g) A.at(i, g) = p.A.at(i, g);
    for (std::size_t s = 0; s < S; ++s) {
        const auto group = ext.copies_of(shared[s].first);
        for (std::size_t g = 0; g < cols; ++g) {
            const auto tup = tuple_of_index(g, ext.scenario.n_measurements(), k);
            bool all = true;
            for (std::size_t i = 1; i < group.size(); ++i)
                if (tup[group[i]] != tup[group[0]]) { all = false; break; }
            if (all) A.at(pin_rows + s, g) = T(1);
        }
        A.at(pin_rows + s, zcol) = T(1);
        A.at(pin_rows + s, wcol + s) = T(-1);
        p.b.push_back(scalar_from<T>(coupling_mu(shared[s].second)));
    }
    p.A = std::move(A);
    p.c.assign(cols + 1 + S, T(0));
    p.c[zcol] = T(1);

    lp::SimplexOptions opt;
    opt.eps = cfg.eps;
    const auto sol = lp::solve(p, opt);
    if (sol.status != lp::Status::Optimal)
        throw std::logic_error("m deficit: pinned epigraph LP must be solvable");
    MeasureRun<T> out;
    out.value = sol.value;
    if constexpr (!std::is_same_v<T, Rational>) {
        if (out.value < 0 && out.value > -cfg.eps) out.value = 0;
    }
    out.certified = lp::verify(p, sol, cfg.eps).ok;
    out.iterations = sol.iterations;
    out.borderline_gap = std::abs(as_double(out.value));
    return out;
}

template <typename T>
MeasureRun<T> run_measure(const Behavior& b, Measure m, const AnalysisConfig& cfg) {
    switch (m) {
        case Measure::ContextualFraction: return run_cf<T>(b, cfg);
        case Measure::Negativity: return run_negativity<T>(b, cfg);
        case Measure::L1Total: return run_l1<T>(b, L1Flavor::Total, cfg);
        case Measure::L1Uniform: return run_l1<T>(b, L1Flavor::Uniform, cfg);
        case Measure::L1Max: return run_l1<T>(b, L1Flavor::Max, cfg);
        case Measure::MDeficit: return run_m_deficit<T>(b, cfg);
        case Measure::MuDeficit: break;  // handled by the decision machinery
    }
    throw std::logic_error("run_measure: unhandled measure");
}

}  // namespace detail

// Computes one measure of the behavior. MuDeficit and MDeficit treat the
// input as a base behavior and work on its extension; the other measures
// apply to the behavior's own scenario (lift first for extended readings).
inline QuantifierValue quantify(const Behavior& b, Measure m, const AnalysisConfig& cfg = {}) {
    QuantifierValue out;
    out.measure = m;

    if (m == Measure::MuDeficit) {
        const auto model = extended_global_model(b, CouplingPolicy::Maximal, cfg);
        out.value = model.mu_deficit;
        out.exact = model.mu_deficit_exact;
        out.certified = model.certified;
        out.exact_adjudicated = model.exact_adjudicated;
        out.iterations = model.iterations;
        return out;
    }

    if (cfg.mode == Mode::Exact) {
        const auto r = detail::run_measure<Rational>(b, m, cfg);
        out.value = r.infinite ? std::numeric_limits<double>::infinity() : to_double(r.value);
        if (!r.infinite) out.exact = r.value;
        out.infinite = r.infinite;
        out.certified = r.certified;
        out.exact_adjudicated = true;
        out.iterations = r.iterations;
        return out;
    }

    const auto r = detail::run_measure<double>(b, m, cfg);
    // rerun exactly only when the float answer genuinely sits near a decision
    // edge; anything below eps/1000 is solver noise on a clean zero
    if (r.borderline_gap < 10 * cfg.eps && r.borderline_gap > 1e-3 * cfg.eps) {
        const auto e = detail::run_measure<Rational>(b, m, cfg);
        out.value = e.infinite ? std::numeric_limits<double>::infinity() : to_double(e.value);
        if (!e.infinite) out.exact = e.value;
        out.infinite = e.infinite;
        out.certified = e.certified;
        out.exact_adjudicated = true;
        out.iterations = r.iterations + e.iterations;
        return out;
    }
    out.value = r.infinite ? std::numeric_limits<double>::infinity() : r.value;
    out.infinite = r.infinite;
    out.certified = r.certified;
    out.iterations = r.iterations;
    return out;
}

}  // namespace ctx
