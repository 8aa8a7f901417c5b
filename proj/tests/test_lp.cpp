// ===== two-phase simplex kernel =====
//
// Exercises the solver over both scalar types and checks every terminal
// status against the independent certificate verifier, plus a randomized
// float-vs-exact agreement sweep.

#include <catch2/catch_amalgamated.hpp>

#include "ctx/lp.hpp"

#include <random>
#include <vector>

using ctx::Rational;
using ctx::scalar_from;
namespace lp = ctx::lp;

namespace {

template <typename T>
T frac(long num, long den = 1) {
    return scalar_from<T>(Rational(num) / den);
}

template <typename T>
lp::Problem<T> make_problem(std::vector<std::vector<long>> rows, std::vector<long> rhs,
                            std::vector<long> obj) {
    lp::Problem<T> p;
    p.c.reserve(obj.size());
    for (long v : obj) p.c.push_back(T(v));
    p.A = lp::Matrix<T>(rows.size(), obj.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < obj.size(); ++j) p.A.at(i, j) = T(rows[i][j]);
    for (long v : rhs) p.b.push_back(T(v));
    return p;
}

double approx_value(double v) { return v; }
double approx_value(const Rational& v) { return ctx::to_double(v); }

}  // namespace

TEMPLATE_TEST_CASE("basic optimum with equality and default bounds", "[lp]", double, Rational) {
    using T = TestType;
    // min -x - 2y  s.t.  x + y = 1, x,y >= 0  ->  y = 1, value -2
    auto p = make_problem<T>({{1, 1}}, {1}, {-1, -2});
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(approx_value(sol.value) == Catch::Approx(-2.0));
    CHECK(approx_value(sol.x[1]) == Catch::Approx(1.0));
    const auto chk = lp::verify(p, sol);
    INFO(chk.detail);
    CHECK(chk.ok);
}

TEMPLATE_TEST_CASE("upper bounds enter through extra rows", "[lp]", double, Rational) {
    using T = TestType;
    // min -x - y  s.t.  x + 2y = 2,  0 <= x <= 1,  0 <= y <= 1
    auto p = make_problem<T>({{1, 2}}, {2}, {-1, -1});
    p.lower = {T(0), T(0)};
    p.upper = {T(1), T(1)};
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(approx_value(sol.value) == Catch::Approx(-1.5));  // x=1, y=1/2
    const auto chk = lp::verify(p, sol);
    INFO(chk.detail);
    CHECK(chk.ok);
}

TEMPLATE_TEST_CASE("free and upper-only variables reduce correctly", "[lp]", double, Rational) {
    using T = TestType;
    // min x  s.t.  x + y = 0,  y in [0,1],  x free  ->  x = -1
    lp::Problem<T> p = make_problem<T>({{1, 1}}, {0}, {1, 0});
    p.lower = {std::nullopt, T(0)};
    p.upper = {std::nullopt, T(1)};
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(approx_value(sol.value) == Catch::Approx(-1.0));
    const auto chk = lp::verify(p, sol);
    INFO(chk.detail);
    CHECK(chk.ok);

    // min -x with x <= 2 and no lower bound, no equality rows  ->  x = 2
    lp::Problem<T> q;
    q.c = {T(-1)};
    q.A = lp::Matrix<T>(0, 1);
    q.lower = {std::nullopt};
    q.upper = {T(2)};
    const auto sq = lp::solve(q);
    REQUIRE(sq.status == lp::Status::Optimal);
    CHECK(approx_value(sq.value) == Catch::Approx(-2.0));
    CHECK(lp::verify(q, sq).ok);
}

TEMPLATE_TEST_CASE("infeasible system yields a checkable Farkas vector", "[lp]",
                   double, Rational) {
    using T = TestType;
    // x + y = -1 with x,y >= 0
    auto p = make_problem<T>({{1, 1}}, {-1}, {1, 1});
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Infeasible);
    const auto chk = lp::verify(p, sol);
    INFO(chk.detail);
    CHECK(chk.ok);

    // incompatible pair: x + y = 1, x + y = 2
    auto q = make_problem<T>({{1, 1}, {1, 1}}, {1, 2}, {0, 0});
    const auto sq = lp::solve(q);
    REQUIRE(sq.status == lp::Status::Infeasible);
    CHECK(lp::verify(q, sq).ok);
}

TEMPLATE_TEST_CASE("unbounded problem yields a checkable ray", "[lp]", double, Rational) {
    using T = TestType;
    // min -x  s.t.  x - y = 0, x,y >= 0  -> ray along (1,1)
    auto p = make_problem<T>({{1, -1}}, {0}, {-1, 0});
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Unbounded);
    const auto chk = lp::verify(p, sol);
    INFO(chk.detail);
    CHECK(chk.ok);
}

TEMPLATE_TEST_CASE("dependent equality rows are dropped, duals stay valid", "[lp]",
                   double, Rational) {
    using T = TestType;
    // duplicated row plus a genuine one
    auto p = make_problem<T>({{1, 1, 0}, {1, 1, 0}, {0, 1, 1}}, {1, 1, 1}, {2, 1, 3});
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(approx_value(sol.value) == Catch::Approx(1.0));  // y = 1, x = z = 0
    const auto chk = lp::verify(p, sol);
    INFO(chk.detail);
    CHECK(chk.ok);
}

TEMPLATE_TEST_CASE("degenerate pivoting terminates under the lowest-index rule", "[lp]",
                   double, Rational) {
    using T = TestType;
    // a classic cycling example when pivoting greedily; slacks included
    lp::Problem<T> p;
    p.c = {frac<T>(-3, 4), T(150), frac<T>(-1, 50), T(6), T(0), T(0), T(0)};
    p.A = lp::Matrix<T>(3, 7);
    const std::vector<std::vector<Rational>> rows = {
        {Rational(1, 4), Rational(-60), Rational(-1, 25), Rational(9), 1, 0, 0},
        {Rational(1, 2), Rational(-90), Rational(-1, 50), Rational(3), 0, 1, 0},
        {Rational(0), Rational(0), Rational(1), Rational(0), 0, 0, 1}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 7; ++j) p.A.at(i, j) = scalar_from<T>(rows[i][j]);
    p.b = {T(0), T(0), T(1)};
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(approx_value(sol.value) == Catch::Approx(-0.05));
    if constexpr (std::is_same_v<T, Rational>) CHECK(sol.value == Rational(-1) / 20);
    CHECK(lp::verify(p, sol).ok);
}

TEST_CASE("iteration cap aborts instead of spinning", "[lp]") {
    auto p = make_problem<double>({{1, 1}}, {1}, {-1, -2});
    lp::SimplexOptions opt;
    opt.max_iters = 1;
    CHECK_THROWS_AS(lp::solve(p, opt), std::runtime_error);
}

TEST_CASE("malformed problems are rejected", "[lp]") {
    lp::Problem<double> p;
    p.c = {1.0, 1.0};
    p.A = lp::Matrix<double>(1, 3);  // wrong column count
    p.b = {1.0};
    CHECK_THROWS_AS(lp::solve(p), std::invalid_argument);

    auto q = make_problem<double>({{1, 1}}, {1}, {0, 0});
    q.lower = {0.0, 2.0};
    q.upper = {std::nullopt, 1.0};  // upper below lower
    CHECK_THROWS_AS(lp::solve(q), std::invalid_argument);
}

TEST_CASE("verifier rejects corrupted certificates", "[lp]") {
    auto p = make_problem<Rational>({{1, 1}}, {1}, {-1, -2});
    auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::Status::Optimal);
    REQUIRE(lp::verify(p, sol).ok);

    auto bad_value = sol;
    bad_value.value += 1;
    CHECK_FALSE(lp::verify(p, bad_value).ok);

    auto bad_x = sol;
    bad_x.x[0] += 1;
    CHECK_FALSE(lp::verify(p, bad_x).ok);

    auto bad_dual = sol;
    bad_dual.dual[0] += 1;
    CHECK_FALSE(lp::verify(p, bad_dual).ok);
}

TEST_CASE("random instances: float and exact runs agree and certify", "[lp][random]") {
    std::mt19937_64 gen(20260813);
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> dim_n(2, 5), dim_m(1, 3);
    std::uniform_int_distribution<int> pick(0, 9);

    int optimal_seen = 0, unbounded_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = dim_n(gen), m = dim_m(gen);
        lp::Problem<Rational> pe;
        pe.A = lp::Matrix<Rational>(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) pe.A.at(i, j) = coef(gen);
        // rhs from a known nonnegative point so the system is feasible
        std::vector<Rational> x0(n);
        for (auto& v : x0) v = Rational(pick(gen)) / 2;
        pe.b.assign(m, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) pe.b[i] += pe.A.at(i, j) * x0[j];
        pe.c.resize(n);
        for (auto& v : pe.c) v = coef(gen);
        pe.lower.assign(n, Rational(0));
        pe.upper.assign(n, std::nullopt);
        for (std::size_t j = 0; j < n; ++j)
            if (pick(gen) < 3) pe.upper[j] = x0[j] + Rational(1 + pick(gen)) / 2;

        lp::Problem<double> pd;
        pd.A = lp::Matrix<double>(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) pd.A.at(i, j) = ctx::to_double(pe.A.at(i, j));
        pd.b.resize(m);
        for (std::size_t i = 0; i < m; ++i) pd.b[i] = ctx::to_double(pe.b[i]);
        pd.c.resize(n);
        for (std::size_t j = 0; j < n; ++j) pd.c[j] = ctx::to_double(pe.c[j]);
        pd.lower.assign(n, 0.0);
        pd.upper.assign(n, std::nullopt);
        for (std::size_t j = 0; j < n; ++j)
            if (pe.upper[j]) pd.upper[j] = ctx::to_double(*pe.upper[j]);

        const auto se = lp::solve(pe);
        const auto sd = lp::solve(pd);
        INFO("trial " << trial << ": exact " << lp::to_string(se.status) << ", float "
                      << lp::to_string(sd.status));
        REQUIRE(se.status == sd.status);
        REQUIRE(se.status != lp::Status::Infeasible);  // feasible by construction

        const auto ce = lp::verify(pe, se);
        INFO("exact certificate: " << ce.detail);
        REQUIRE(ce.ok);
        const auto cd = lp::verify(pd, sd, 1e-7);
        INFO("float certificate: " << cd.detail);
        REQUIRE(cd.ok);

        if (se.status == lp::Status::Optimal) {
            ++optimal_seen;
            CHECK(ctx::to_double(se.value) == Catch::Approx(sd.value).margin(1e-6));
        } else {
            ++unbounded_seen;
        }
    }
    // the sweep must exercise both terminal paths
    CHECK(optimal_seen >= 10);
    CHECK(unbounded_seen >= 5);
}
