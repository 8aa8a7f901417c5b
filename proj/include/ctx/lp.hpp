#pragma once

// Dense two-phase primal simplex, templated on the scalar type:
//   double          -> float mode, tolerance eps on residuals/pivots
//   ctx::Rational   -> exact mode, all comparisons exact
//
// Problems are stated as  min c.x  s.t.  A x = b,  lower <= x <= upper
// (lower defaults to 0; either bound may be absent). Internally everything is
// reduced to standard form (equalities, x >= 0): finite lower bounds shift,
// upper-only variables flip sign, free variables split, finite upper bounds
// add one slack row per variable. Bland's rule (lowest index) is used for
// both entering and leaving choices, so runs are deterministic and cycling is
// impossible.
//
// Every terminal status carries a certificate that `verify` checks from
// scratch against the problem data, independent of the pivot path:
//   Optimal    -> primal point + dual vector (feasibility, reduced costs,
//                 zero duality gap)
//   Infeasible -> Farkas vector y with y.A <= 0, y.b > 0
//   Unbounded  -> feasible point + improving ray

#include "ctx/rational.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ctx::lp {

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "?";
}

// ===================== dense matrix =====================

template <typename T>
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}

    T& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// ===================== problem / solution =====================

template <typename T>
struct Problem {
    std::vector<T> c;                       // objective, minimized
    Matrix<T> A;                            // equality lhs (rows x n)
    std::vector<T> b;                       // equality rhs
    std::vector<std::optional<T>> lower;    // per-variable; empty vector => all 0
    std::vector<std::optional<T>> upper;    // per-variable; empty vector => none

    std::size_t n_vars() const { return c.size(); }

    std::optional<T> lo(std::size_t j) const {
        if (lower.empty()) return T(0);
        return lower.at(j);
    }
    std::optional<T> up(std::size_t j) const {
        if (upper.empty()) return std::nullopt;
        return upper.at(j);
    }
};

template <typename T>
struct Solution {
    Status status = Status::Optimal;
    T value{};               // Optimal: objective; Infeasible: phase-1 mass
    std::vector<T> x;        // Optimal/Unbounded: point in original variables
    std::vector<T> dual;     // Optimal: duals; Infeasible: Farkas vector
                             //   (row space: equality rows, then upper-bound rows)
    std::vector<T> ray;      // Unbounded: improving direction, original variables
    long iterations = 0;
};

struct SimplexOptions {
    double eps = 1e-7;       // float-mode residual/decision tolerance
    long max_iters = 0;      // 0 => automatic cap
};

// ===================== standard form =====================

namespace detail {

// per-variable reduction record
template <typename T>
struct VarMap {
    enum Kind { Shift, Flip, Split } kind = Shift;
    T offset{};              // Shift: x = offset + x' ; Flip: x = offset - x'
    std::size_t col = 0;     // std column (Split: positive part; negative part follows)
};

template <typename T>
struct StdForm {
    Matrix<T> A;
    std::vector<T> b, c;
    T c0{};                            // constant folded out of the objective
    std::vector<VarMap<T>> vars;       // original variable -> std columns
    std::size_t n_eq_rows = 0;         // original equality rows come first
    std::vector<std::size_t> ub_var;   // upper-bound row -> original variable
};

template <typename T>
StdForm<T> standardize(const Problem<T>& p) {
    const std::size_t n = p.n_vars();
    if (p.A.cols != n && !(p.A.rows == 0 && p.A.cols == 0))
        throw std::invalid_argument("lp: A has " + std::to_string(p.A.cols) +
                                    " columns for " + std::to_string(n) + " variables");
    if (p.b.size() != p.A.rows)
        throw std::invalid_argument("lp: rhs length does not match row count");

    StdForm<T> s;
    s.vars.resize(n);
    s.n_eq_rows = p.A.rows;

    // assign std columns and upper-bound rows
    std::size_t cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto lo = p.lo(j), up = p.up(j);
        auto& vm = s.vars[j];
        if (lo && up && *up < *lo)
            throw std::invalid_argument("lp: variable " + std::to_string(j) +
                                        " has upper bound below lower bound");
        if (lo) {
            vm.kind = VarMap<T>::Shift;
            vm.offset = *lo;
            vm.col = cols++;
            if (up) s.ub_var.push_back(j);   // x' + slack = up - lo
        } else if (up) {
            vm.kind = VarMap<T>::Flip;
            vm.offset = *up;
            vm.col = cols++;
        } else {
            vm.kind = VarMap<T>::Split;
            vm.col = cols;
            cols += 2;
        }
    }
    const std::size_t n_ub = s.ub_var.size();
    cols += n_ub;  // one slack per boxed variable
    const std::size_t rows = s.n_eq_rows + n_ub;

    s.A = Matrix<T>(rows, cols);
    s.b.assign(rows, T(0));
    s.c.assign(cols, T(0));
    s.c0 = T(0);

    // equality block
    for (std::size_t i = 0; i < s.n_eq_rows; ++i) s.b[i] = p.b[i];
    for (std::size_t j = 0; j < n; ++j) {
        const auto& vm = s.vars[j];
        switch (vm.kind) {
            case VarMap<T>::Shift:
                for (std::size_t i = 0; i < s.n_eq_rows; ++i) {
                    const T& aij = p.A.at(i, j);
                    if (aij != 0) {
                        s.A.at(i, vm.col) = aij;
                        s.b[i] -= aij * vm.offset;
                    }
                }
                s.c[vm.col] = p.c[j];
                s.c0 += p.c[j] * vm.offset;
                break;
            case VarMap<T>::Flip:
                for (std::size_t i = 0; i < s.n_eq_rows; ++i) {
                    const T& aij = p.A.at(i, j);
                    if (aij != 0) {
                        s.A.at(i, vm.col) = -aij;
                        s.b[i] -= aij * vm.offset;
                    }
                }
                s.c[vm.col] = -p.c[j];
                s.c0 += p.c[j] * vm.offset;
                break;
            case VarMap<T>::Split:
                for (std::size_t i = 0; i < s.n_eq_rows; ++i) {
                    const T& aij = p.A.at(i, j);
                    if (aij != 0) {
                        s.A.at(i, vm.col) = aij;
                        s.A.at(i, vm.col + 1) = -aij;
                    }
                }
                s.c[vm.col] = p.c[j];
                s.c[vm.col + 1] = -p.c[j];
                break;
        }
    }
    // upper-bound rows: x'_j + slack = up - lo
    for (std::size_t k = 0; k < n_ub; ++k) {
        const std::size_t j = s.ub_var[k];
        const auto& vm = s.vars[j];
        const std::size_t row = s.n_eq_rows + k;
        s.A.at(row, vm.col) = T(1);
        s.A.at(row, s.A.cols - n_ub + k) = T(1);
        s.b[row] = *p.up(j) - *p.lo(j);
    }
    return s;
}

template <typename T>
std::vector<T> primal_back(const StdForm<T>& s, const std::vector<T>& xs) {
    std::vector<T> x(s.vars.size());
    for (std::size_t j = 0; j < s.vars.size(); ++j) {
        const auto& vm = s.vars[j];
        switch (vm.kind) {
            case VarMap<T>::Shift: x[j] = vm.offset + xs[vm.col]; break;
            case VarMap<T>::Flip:  x[j] = vm.offset - xs[vm.col]; break;
            case VarMap<T>::Split: x[j] = xs[vm.col] - xs[vm.col + 1]; break;
        }
    }
    return x;
}

template <typename T>
std::vector<T> ray_back(const StdForm<T>& s, const std::vector<T>& ds) {
    std::vector<T> d(s.vars.size());
    for (std::size_t j = 0; j < s.vars.size(); ++j) {
        const auto& vm = s.vars[j];
        switch (vm.kind) {
            case VarMap<T>::Shift: d[j] = ds[vm.col]; break;
            case VarMap<T>::Flip:  d[j] = -ds[vm.col]; break;
            case VarMap<T>::Split: d[j] = ds[vm.col] - ds[vm.col + 1]; break;
        }
    }
    return d;
}

template <typename T>
struct Tols {
    T pivot{}, feas{};
};

template <typename T>
Tols<T> make_tols(double eps) {
    if constexpr (std::is_same_v<T, Rational>) {
        (void)eps;
        return {Rational(0), Rational(0)};
    } else {
        return {T(1e-11), T(eps)};
    }
}

// Core simplex on standard form min c.x, A x = b, x >= 0.
// Returns solution in std-form variables; dual/Farkas in std-form rows.
template <typename T>
Solution<T> simplex(const StdForm<T>& s, const SimplexOptions& opt) {
    const std::size_t m = s.A.rows, n = s.A.cols;
    const auto tol = make_tols<T>(opt.eps);
    const std::size_t width = n + m + 1;  // vars | artificials | rhs
    const std::size_t RHS = n + m;

    // tableau with per-row sign flips so rhs >= 0
    std::vector<T> tab(m * width, T(0));
    std::vector<T> flip(m, T(1));
    auto tb = [&](std::size_t i, std::size_t j) -> T& { return tab[i * width + j]; };
    for (std::size_t i = 0; i < m; ++i) {
        if (s.b[i] < 0) flip[i] = T(-1);
        for (std::size_t j = 0; j < n; ++j) tb(i, j) = flip[i] * s.A.at(i, j);
        tb(i, n + i) = T(1);
        tb(i, RHS) = flip[i] * s.b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
    std::vector<bool> alive(m, true);

    // reduced-cost rows, maintained through pivots
    std::vector<T> obj1(width, T(0));  // phase 1: cost 1 on artificials
    std::vector<T> obj2(width, T(0));  // phase 2: cost c on variables
    for (std::size_t j = 0; j < n; ++j) {
        T col_sum(0);
        for (std::size_t i = 0; i < m; ++i) col_sum += tb(i, j);
        obj1[j] = -col_sum;
        obj2[j] = s.c[j];
    }

    long iters = 0;
    const long cap = opt.max_iters > 0
                         ? opt.max_iters
                         : static_cast<long>(20000 + 200 * (m + n));

    auto pivot = [&](std::size_t row, std::size_t col) {
        const T p = tb(row, col);
        for (std::size_t j = 0; j < width; ++j) tb(row, j) /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || !alive[i]) continue;
            const T f = tb(i, col);
            if (f == 0) continue;
            for (std::size_t j = 0; j < width; ++j) tb(i, j) -= f * tb(row, j);
            tb(i, col) = T(0);
        }
        for (auto* obj : {&obj1, &obj2}) {
            const T f = (*obj)[col];
            if (f == 0) continue;
            for (std::size_t j = 0; j < width; ++j) (*obj)[j] -= f * tb(row, j);
            (*obj)[col] = T(0);
        }
        basis[row] = col;
        ++iters;
        if (iters > cap) throw std::runtime_error("lp: simplex iteration cap exceeded");
    };

    // Bland: entering = lowest-index variable column with negative reduced
    // cost; leaving = lowest basis index among minimizing ratios.
    auto run_phase = [&](std::vector<T>& obj) -> std::optional<std::size_t> {
        for (;;) {
            std::size_t enter = n;
            for (std::size_t j = 0; j < n; ++j)
                if (obj[j] < -tol.pivot) { enter = j; break; }
            if (enter == n) return std::nullopt;  // optimal for this phase

            std::size_t leave = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (!alive[i] || tb(i, enter) <= tol.pivot) continue;
                if (leave == m) { leave = i; continue; }
                const T lhs = tb(i, RHS) * tb(leave, enter);
                const T rhs = tb(leave, RHS) * tb(i, enter);
                if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
            }
            if (leave == m) return enter;  // unbounded in this phase
            pivot(leave, enter);
        }
    };

    Solution<T> out;

    // ---- phase 1 ----
    if (run_phase(obj1).has_value())
        throw std::runtime_error("lp: phase 1 reported unbounded");  // cannot happen
    T art_mass(0);
    for (std::size_t i = 0; i < m; ++i)
        if (alive[i] && basis[i] >= n) art_mass += tb(i, RHS);
    const T feas_cut = [&] {
        if constexpr (std::is_same_v<T, Rational>) return Rational(0);
        else {
            T scale(1);
            for (std::size_t i = 0; i < m; ++i)
                if (std::abs(as_double(s.b[i])) > as_double(scale)) scale = std::abs(s.b[i]);
            return tol.feas * scale;
        }
    }();
    if (art_mass > feas_cut) {
        out.status = Status::Infeasible;
        out.value = art_mass;
        out.dual.assign(m, T(0));
        for (std::size_t i = 0; i < m; ++i) out.dual[i] = flip[i] * (T(1) - obj1[n + i]);
        out.iterations = iters;
        return out;
    }

    // drive remaining artificials out of the basis; rows that cannot pivot
    // are dependent and get dropped
    for (std::size_t i = 0; i < m; ++i) {
        if (!alive[i] || basis[i] < n) continue;
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j) {
            const T v = tb(i, j) < 0 ? T(-tb(i, j)) : tb(i, j);
            if (v > tol.pivot) { col = j; break; }
        }
        if (col == n) {
            alive[i] = false;  // redundant constraint
        } else {
            pivot(i, col);
        }
    }

    // ---- phase 2 ----
    const auto unb = run_phase(obj2);
    auto extract_x = [&] {
        std::vector<T> xs(n, T(0));
        for (std::size_t i = 0; i < m; ++i)
            if (alive[i] && basis[i] < n) xs[basis[i]] = tb(i, RHS);
        return xs;
    };
    if (unb.has_value()) {
        out.status = Status::Unbounded;
        out.x = extract_x();
        std::vector<T> ds(n, T(0));
        ds[*unb] = T(1);
        for (std::size_t i = 0; i < m; ++i)
            if (alive[i] && basis[i] < n) ds[basis[i]] = -tb(i, *unb);
        out.ray = ds;
        out.iterations = iters;
        return out;
    }

    out.status = Status::Optimal;
    out.x = extract_x();
    out.value = s.c0;
    for (std::size_t j = 0; j < n; ++j)
        if (out.x[j] != 0) out.value += s.c[j] * out.x[j];
    out.dual.assign(m, T(0));
    for (std::size_t i = 0; i < m; ++i)
        if (alive[i]) out.dual[i] = flip[i] * (-obj2[n + i]);
    out.iterations = iters;
    return out;
}

}  // namespace detail

// ===================== public entry points =====================

template <typename T>
Solution<T> solve(const Problem<T>& p, const SimplexOptions& opt = {}) {
    const auto s = detail::standardize(p);
    Solution<T> r = detail::simplex(s, opt);
    if (r.status == Status::Optimal) {
        r.x = detail::primal_back(s, r.x);
    } else if (r.status == Status::Unbounded) {
        r.ray = detail::ray_back(s, r.ray);
        r.x = detail::primal_back(s, r.x);
    }
    return r;
}

// Feasibility of A x = b under the bounds: objective is ignored.
template <typename T>
Solution<T> solve_feasibility(Problem<T> p, const SimplexOptions& opt = {}) {
    for (auto& v : p.c) v = T(0);
    return solve(p, opt);
}

// ===================== independent certificate check =====================

struct CheckResult {
    bool ok = true;
    std::string detail;
};

template <typename T>
CheckResult verify(const Problem<T>& p, const Solution<T>& sol, double eps = 1e-7) {
    const auto s = detail::standardize(p);
    const std::size_t m = s.A.rows, n = s.A.cols;
    auto fail = [](std::string why) { return CheckResult{false, std::move(why)}; };
    const double tol = std::is_same_v<T, Rational> ? 0.0 : eps;

    auto residual_ok = [&](const std::vector<T>& x) -> std::optional<std::string> {
        if (x.size() != p.n_vars()) return "primal length mismatch";
        for (std::size_t i = 0; i < p.A.rows; ++i) {
            T r(0);
            for (std::size_t j = 0; j < p.A.cols; ++j) r += p.A.at(i, j) * x[j];
            r -= p.b[i];
            if (std::abs(as_double(r)) > tol * (1.0 + std::abs(as_double(p.b[i]))))
                return "equality row " + std::to_string(i) + " violated by " +
                       std::to_string(as_double(r));
        }
        for (std::size_t j = 0; j < p.n_vars(); ++j) {
            if (auto lo = p.lo(j); lo && as_double(T(x[j] - *lo)) < -tol)
                return "lower bound violated at variable " + std::to_string(j);
            if (auto up = p.up(j); up && as_double(T(*up - x[j])) < -tol)
                return "upper bound violated at variable " + std::to_string(j);
        }
        return std::nullopt;
    };

    switch (sol.status) {
        case Status::Optimal: {
            if (auto bad = residual_ok(sol.x)) return fail(*bad);
            T cx(0);
            for (std::size_t j = 0; j < p.n_vars(); ++j) cx += p.c[j] * sol.x[j];
            if (std::abs(as_double(T(cx - sol.value))) >
                tol * (1.0 + std::abs(as_double(sol.value))))
                return fail("objective value mismatch");
            if (sol.dual.size() != m) return fail("dual length mismatch");
            // reduced costs of the standardized problem must be >= 0
            for (std::size_t j = 0; j < n; ++j) {
                T r = s.c[j];
                for (std::size_t i = 0; i < m; ++i) r -= sol.dual[i] * s.A.at(i, j);
                if (as_double(r) < -tol) return fail("negative reduced cost at std column " +
                                                     std::to_string(j));
            }
            T yb = s.c0;
            for (std::size_t i = 0; i < m; ++i) yb += sol.dual[i] * s.b[i];
            const double gap = as_double(T(yb - sol.value));
            if (std::abs(gap) > tol * (1.0 + std::abs(as_double(sol.value))))
                return fail("duality gap " + std::to_string(gap));
            return {};
        }
        case Status::Infeasible: {
            if (sol.dual.size() != m) return fail("certificate length mismatch");
            double ymax = 0;
            for (const auto& v : sol.dual) ymax = std::max(ymax, std::abs(as_double(v)));
            if (ymax == 0) return fail("zero Farkas vector");
            const double ctol = tol * std::max(1.0, ymax);
            T yb(0);
            for (std::size_t i = 0; i < m; ++i) yb += sol.dual[i] * s.b[i];
            if (!(as_double(yb) > ctol)) return fail("Farkas vector does not separate rhs");
            for (std::size_t j = 0; j < n; ++j) {
                T r(0);
                for (std::size_t i = 0; i < m; ++i) r += sol.dual[i] * s.A.at(i, j);
                if (as_double(r) > ctol)
                    return fail("Farkas condition fails at std column " + std::to_string(j));
            }
            return {};
        }
        case Status::Unbounded: {
            if (auto bad = residual_ok(sol.x)) return fail(std::string("ray base point: ") + *bad);
            if (sol.ray.size() != p.n_vars()) return fail("ray length mismatch");
            double rmax = 0;
            for (const auto& v : sol.ray) rmax = std::max(rmax, std::abs(as_double(v)));
            if (rmax == 0) return fail("zero ray");
            const double rtol = tol * std::max(1.0, rmax);
            for (std::size_t i = 0; i < p.A.rows; ++i) {
                T r(0);
                for (std::size_t j = 0; j < p.A.cols; ++j) r += p.A.at(i, j) * sol.ray[j];
                if (std::abs(as_double(r)) > rtol)
                    return fail("ray not in the equality kernel at row " + std::to_string(i));
            }
            for (std::size_t j = 0; j < p.n_vars(); ++j) {
                if (p.lo(j) && as_double(sol.ray[j]) < -rtol)
                    return fail("ray leaves lower bound at variable " + std::to_string(j));
                if (p.up(j) && as_double(sol.ray[j]) > rtol)
                    return fail("ray leaves upper bound at variable " + std::to_string(j));
            }
            T cr(0);
            for (std::size_t j = 0; j < p.n_vars(); ++j) cr += p.c[j] * sol.ray[j];
            if (!(as_double(cr) < -rtol)) return fail("ray does not improve the objective");
            return {};
        }
    }
    return fail("unknown status");
}

}  // namespace ctx::lp
