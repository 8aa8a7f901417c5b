#pragma once

// Couplings of finitely many distributions over one shared outcome alphabet.
//
// A coupling of p_1..p_l is a joint distribution on l-tuples whose one-part
// marginals are the p_j. The agreement probability P(all parts equal) is at
// most mu = sum_a min_j p_j(a); couplings hitting that bound are maximal.
// `canonical_maximal_coupling` builds one in closed form: put min_j p_j(a) on
// each diagonal tuple (a,..,a) and spread the leftover mass as the product of
// the normalized residuals. A coupling is multimaximal when every subset of
// two or more parts is simultaneously maximal; that is a linear feasibility
// question, decided here by the exact simplex so existence verdicts carry
// certificates and never depend on floating-point luck.
//
// Everything in this header is exact: the tables involved are small (the cap
// guards the l-fold product), so there is no reason to leave rationals.

#include "ctx/behavior.hpp"
#include "ctx/lp.hpp"
#include "ctx/rational.hpp"
#include "ctx/scenario.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctx {

// joint distribution over `parts` copies of a `alphabet`-letter outcome set;
// tuples are indexed lexicographically with the first part most significant
struct CouplingTable {
    std::size_t parts = 0;
    std::size_t alphabet = 0;
    Distribution joint;

    Distribution marginal(std::size_t part) const {
        if (part >= parts) throw std::out_of_range("CouplingTable::marginal: part out of range");
        Distribution d;
        d.p.assign(alphabet, Rational(0));
        for (std::size_t t = 0; t < joint.p.size(); ++t) {
            const auto tup = tuple_of_index(t, parts, alphabet);
            d.p[tup[part]] += joint.p[t];
        }
        return d;
    }

    // P(all listed parts produce the same outcome); empty or singleton lists
    // are trivially 1
    Rational agreement(const std::vector<std::size_t>& subset) const {
        for (auto s : subset)
            if (s >= parts) throw std::out_of_range("CouplingTable::agreement: part out of range");
        if (subset.size() <= 1) return Rational(1);
        Rational acc(0);
        for (std::size_t t = 0; t < joint.p.size(); ++t) {
            if (joint.p[t] == 0) continue;
            const auto tup = tuple_of_index(t, parts, alphabet);
            bool all_equal = true;
            for (std::size_t s = 1; s < subset.size(); ++s)
                if (tup[subset[s]] != tup[subset[0]]) { all_equal = false; break; }
            if (all_equal) acc += joint.p[t];
        }
        return acc;
    }
};

namespace detail {

inline void require_parts(const std::vector<Distribution>& parts, const char* who) {
    if (parts.empty()) throw std::invalid_argument(std::string(who) + ": no distributions");
    const std::size_t k = parts.front().p.size();
    if (k == 0) throw std::invalid_argument(std::string(who) + ": empty alphabet");
    for (const auto& d : parts) {
        if (d.p.size() != k)
            throw std::invalid_argument(std::string(who) + ": alphabet sizes differ");
        if (d.sum() != 1)
            throw std::invalid_argument(std::string(who) + ": distribution not normalized");
        for (const auto& v : d.p)
            if (v < 0) throw std::invalid_argument(std::string(who) + ": negative probability");
    }
}

}  // namespace detail

// the sharp upper bound on P(all parts agree) over all couplings
inline Rational coupling_mu(const std::vector<Distribution>& parts) {
    detail::require_parts(parts, "coupling_mu");
    const std::size_t k = parts.front().p.size();
    Rational mu(0);
    for (std::size_t a = 0; a < k; ++a) {
        Rational m = parts[0].p[a];
        for (std::size_t j = 1; j < parts.size(); ++j)
            if (parts[j].p[a] < m) m = parts[j].p[a];
        mu += m;
    }
    return mu;
}

// diagonal-plus-product construction; always exists, always maximal
inline CouplingTable canonical_maximal_coupling(const std::vector<Distribution>& parts,
                                                std::size_t cap = (std::size_t{1} << 20)) {
    detail::require_parts(parts, "canonical_maximal_coupling");
    const std::size_t l = parts.size();
    const std::size_t k = parts.front().p.size();
    const std::size_t table = checked_pow(k, l, cap);

    std::vector<Rational> diag(k);
    Rational mu(0);
    for (std::size_t a = 0; a < k; ++a) {
        Rational m = parts[0].p[a];
        for (std::size_t j = 1; j < l; ++j)
            if (parts[j].p[a] < m) m = parts[j].p[a];
        diag[a] = m;
        mu += m;
    }
    const Rational residual_mass = Rational(1) - mu;

    CouplingTable out;
    out.parts = l;
    out.alphabet = k;
    out.joint.p.assign(table, Rational(0));

    // diagonal block
    for (std::size_t a = 0; a < k; ++a) {
        std::size_t t = 0;
        for (std::size_t j = 0; j < l; ++j) t = t * k + a;
        out.joint.p[t] = diag[a];
    }
    if (residual_mass == 0) return out;

    // residual block: product of per-part residuals, normalized once
    std::vector<std::vector<Rational>> res(l, std::vector<Rational>(k));
    for (std::size_t j = 0; j < l; ++j)
        for (std::size_t a = 0; a < k; ++a) res[j][a] = parts[j].p[a] - diag[a];
    // each residual vector sums to 1 - mu = residual_mass > 0
    for (std::size_t t = 0; t < table; ++t) {
        const auto tup = tuple_of_index(t, l, k);
        Rational prod(1);
        for (std::size_t j = 0; j < l; ++j) {
            prod *= res[j][tup[j]];
            if (prod == 0) break;
        }
        if (prod == 0) continue;
        // total residual weight is residual_mass^l; scale to residual_mass
        Rational scale = prod;
        for (std::size_t j = 0; j + 1 < l; ++j) scale /= residual_mass;
        out.joint.p[t] += scale;
    }
    return out;
}

// ===== multimaximal couplings =====

struct MultimaximalResult {
    bool exists = false;
    CouplingTable table;       // valid when exists
    std::string reason;        // human-readable when it does not
};

// caps the subset-constraint blow-up: 2^l agreement rows
inline constexpr std::size_t kMaxMultimaximalParts = 6;

// decides whether a coupling exists that is maximal on every subset of parts,
// and returns one if so
inline MultimaximalResult multimaximal_coupling(const std::vector<Distribution>& parts,
                                                std::size_t cap = (std::size_t{1} << 20)) {
    detail::require_parts(parts, "multimaximal_coupling");
    const std::size_t l = parts.size();
    const std::size_t k = parts.front().p.size();
    if (l > kMaxMultimaximalParts)
        throw std::invalid_argument("multimaximal_coupling: more than " +
                                    std::to_string(kMaxMultimaximalParts) + " parts");
    const std::size_t table = checked_pow(k, l, cap);

    if (l == 1) {
        MultimaximalResult r;
        r.exists = true;
        r.table.parts = 1;
        r.table.alphabet = k;
        r.table.joint = parts.front();
        return r;
    }

    // enumerate subsets of size >= 2 once, in mask order, for rows and checks
    std::vector<unsigned> masks;
    for (unsigned mask = 0; mask < (1u << l); ++mask)
        if (__builtin_popcount(mask) >= 2) masks.push_back(mask);

    // subset agreement targets
    std::vector<Rational> mu_of_mask(masks.size());
    for (std::size_t s = 0; s < masks.size(); ++s) {
        std::vector<Distribution> sub;
        for (std::size_t j = 0; j < l; ++j)
            if (masks[s] & (1u << j)) sub.push_back(parts[j]);
        mu_of_mask[s] = coupling_mu(sub);
    }

    // feasibility LP: marginals pinned, every subset agreement pinned to mu
    lp::Problem<Rational> p;
    const std::size_t marg_rows = l * k;
    p.A = lp::Matrix<Rational>(marg_rows + masks.size(), table);
    p.b.assign(marg_rows + masks.size(), Rational(0));
    p.c.assign(table, Rational(0));
    for (std::size_t t = 0; t < table; ++t) {
        const auto tup = tuple_of_index(t, l, k);
        for (std::size_t j = 0; j < l; ++j) p.A.at(j * k + tup[j], t) = 1;
        for (std::size_t s = 0; s < masks.size(); ++s) {
            bool all_equal = true;
            std::size_t first = l;
            for (std::size_t j = 0; j < l; ++j) {
                if (!(masks[s] & (1u << j))) continue;
                if (first == l) first = j;
                else if (tup[j] != tup[first]) { all_equal = false; break; }
            }
            if (all_equal) p.A.at(marg_rows + s, t) = 1;
        }
    }
    for (std::size_t j = 0; j < l; ++j)
        for (std::size_t a = 0; a < k; ++a) p.b[j * k + a] = parts[j].p[a];
    for (std::size_t s = 0; s < masks.size(); ++s) p.b[marg_rows + s] = mu_of_mask[s];

    const auto sol = lp::solve_feasibility(p);
    MultimaximalResult r;
    if (sol.status == lp::Status::Infeasible) {
        r.exists = false;
        r.reason = "no coupling is maximal on every subset of parts";
        return r;
    }
    if (sol.status != lp::Status::Optimal)
        throw std::logic_error("multimaximal_coupling: unexpected solver status");
    r.exists = true;
    r.table.parts = l;
    r.table.alphabet = k;
    r.table.joint.p = sol.x;
    // clear the tiny negatives a float solver could leave; exact mode is a no-op
    for (auto& v : r.table.joint.p)
        if (v < 0) v = 0;
    return r;
}

// correlator of the maximally coupled pair of +/-1 observables with the given
// expectations: 1 - |e1 - e2|
inline Rational coupling_correlator(const Rational& e1, const Rational& e2) {
    const Rational d = e1 >= e2 ? Rational(e1 - e2) : Rational(e2 - e1);
    return Rational(1) - d;
}

}  // namespace ctx
