#pragma once

// Seeded random behaviors. Every sample is exact: uniforms are dyadic
// rationals (53-bit mantissas), simplex points come from sorted-spacing
// construction, so sampled behaviors are exactly normalized and the float and
// exact analysis modes see identical inputs. Same seed, same bytes, anywhere.

#include "ctx/behavior.hpp"
#include "ctx/rational.hpp"
#include "ctx/scenario.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ctx {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0,1) with exactly 53 random bits; representable as a double
    // and as the dyadic rational k / 2^53
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    Rational uniform_rational() { return rational_from_double(uniform()); }

    // uniform point on the k-simplex via sorted spacings; sums to 1 exactly
    Distribution simplex_point(std::size_t k) {
        if (k == 0) throw std::invalid_argument("simplex_point: empty alphabet");
        std::vector<Rational> cuts;
        cuts.reserve(k + 1);
        cuts.push_back(0);
        for (std::size_t i = 0; i + 1 < k; ++i) cuts.push_back(uniform_rational());
        cuts.push_back(1);
        std::sort(cuts.begin(), cuts.end());
        Distribution d;
        d.p.reserve(k);
        for (std::size_t i = 0; i < k; ++i) d.p.push_back(cuts[i + 1] - cuts[i]);
        return d;
    }

    std::size_t pick(std::size_t n) {  // uniform in {0..n-1}
        if (n == 0) throw std::invalid_argument("pick: empty range");
        return static_cast<std::size_t>(gen_() % n);
    }

private:
    std::mt19937_64 gen_;
};

// every context lists at most two binary measurements
inline bool is_binary_pairwise(const Scenario& s) {
    if (s.outcomes.size() != 2) return false;
    for (const auto& c : s.contexts)
        if (c.size() > 2) return false;
    return true;
}

// Nondisturbing sample. Binary pairwise scenarios get the correlator method
// (one single per measurement, pair correlators drawn from their feasible
// interval), which reaches contextual behaviors. Everything else is sampled
// as the marginal family of one global distribution, which is nondisturbing
// by construction (and necessarily noncontextual).
inline Behavior sample_nondisturbing(Sampler& rng, const Scenario& s,
                                     std::size_t cap = std::size_t{1} << 20) {
    require_valid(s);
    Behavior b;
    b.scenario = s;

    if (is_binary_pairwise(s)) {
        std::vector<Rational> singles(s.n_measurements());
        for (auto& e : singles) e = 2 * rng.uniform_rational() - 1;
        for (const auto& c : s.contexts) {
            if (c.size() == 1) {
                const Rational& e = singles[c[0]];
                b.tables.push_back(Distribution{{(1 - e) / 2, (1 + e) / 2}});
                continue;
            }
            const Rational &ea = singles[c[0]], &eb = singles[c[1]];
            const Rational sumab = ea + eb, difab = ea - eb;
            const Rational lo = (sumab < 0 ? -sumab : sumab) - 1;
            const Rational hi = 1 - (difab < 0 ? -difab : difab);
            const Rational corr = lo + rng.uniform_rational() * (hi - lo);
            b.tables.push_back(table_from_correlations(ea, eb, corr));
        }
        return b;
    }

    const std::size_t global_size = checked_pow(s.outcomes.size(), s.n_measurements(), cap);
    Behavior g;  // behavior on the one-context scenario of all measurements
    g.scenario.outcomes = s.outcomes;
    g.scenario.measurements = s.measurements;
    std::vector<std::size_t> all(s.n_measurements());
    for (std::size_t m = 0; m < all.size(); ++m) all[m] = m;
    g.scenario.contexts = {all};
    g.tables.push_back(rng.simplex_point(global_size));
    for (const auto& c : s.contexts) b.tables.push_back(marginal(g, 0, c));
    return b;
}

// independent table per context; generally disturbing
inline Behavior sample_free(Sampler& rng, const Scenario& s) {
    require_valid(s);
    Behavior b;
    b.scenario = s;
    for (std::size_t c = 0; c < s.n_contexts(); ++c)
        b.tables.push_back(rng.simplex_point(s.table_size(c)));
    return b;
}

// mixes one uniformly chosen context's table with a fresh random table at
// weight delta in [0,1]; delta > 0 makes the result disturbing in general
inline Behavior perturb_one_context(Sampler& rng, Behavior b, const Rational& delta) {
    if (delta < 0 || delta > 1)
        throw std::invalid_argument("perturb_one_context: delta outside [0,1]");
    const std::size_t c = rng.pick(b.scenario.n_contexts());
    const Distribution fresh = rng.simplex_point(b.tables.at(c).size());
    for (std::size_t i = 0; i < b.tables[c].size(); ++i)
        b.tables[c].p[i] = (1 - delta) * b.tables[c].p[i] + delta * fresh.p[i];
    return b;
}

}  // namespace ctx
