// SPDX-License-Identifier: Apache-2.0
//
// hnfsim - symbol-level secure precoding for hybrid near/far-field downlink
// Copyright (C) 2026 hnfsim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Minimum-power precoding: min ||v||^2 subject to F * stack(v) >= rho.
// Two solvers:
//   solve_iterative - alternating penalty scheme on
//       f(v~, delta) = (1/lambda) ||v~||^2 + ||F v~ - rho - delta||^2,
//       delta >= 0, with exact block minimizers per step, so f is
//       non-increasing across iterations. A post-hoc scaling repair restores
//       exact feasibility (the feasible set is closed under scaling up).
//   solve_oracle - exact active-set enumeration at desk scale, used as the
//       ground truth in tests.

#pragma once

#include "hnf/precoder.hpp"

#include <armadillo>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hnf
{

class SolverError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class InfeasibleError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct SolverConfig
{
    double lambda = 100.0; // penalty weight: larger favors constraint fit over power
    double epsilon = 1e-8; // stop once the objective decrease falls to this
    int max_iter = 10000;
    bool repair = true;
    std::optional<arma::vec> initial; // stacked warm start; default is the zero vector
};

struct IterRecord
{
    double objective = 0.0; // f(v~, delta) after both block updates
    double violation = 0.0; // || max(rho - F v~, 0) ||_2
    double power = 0.0;     // || v~ ||^2
};

using IterTrace = std::vector<IterRecord>;

struct PrecoderSolution
{
    arma::cx_vec v;
    arma::vec v_stacked;
    double objective = 0.0; // ||v||^2 (transmit power), after repair if applied
    int iterations = 0;
    std::vector<double> objective_trace; // f per iteration, leading with the initial point
    bool converged = false;
    bool repaired = false;      // repair ran and reached feasibility
    double repair_scale = 1.0;  // scale factor applied by repair
    double max_violation = 0.0; // max(rho - F v~) at exit, clamped at 0
};

namespace detail
{

inline void check_system_dims(const ConstraintSystem &sys)
{
    if (sys.F.n_rows != sys.rho.n_elem)
        throw std::invalid_argument("solver: F row count and rho length disagree");
}

inline double max_violation_of(const arma::vec &fv, const arma::vec &rho)
{
    if (rho.n_elem == 0)
        return 0.0;
    return std::max(0.0, (rho - fv).max());
}

// Smallest scale s >= 1 with s * (F v~) >= rho, if one exists. The feasible
// set is closed under scaling up (rho >= 0 in sector-built systems), so
// scaling the terminal iterate outward restores exact feasibility without
// changing its direction.
inline bool feasibility_scale(const arma::vec &fv, const arma::vec &rho, double &scale)
{
    double lo = 1.0;
    double hi = std::numeric_limits<double>::infinity();
    for (arma::uword i = 0; i < rho.n_elem; ++i)
    {
        const double a = fv(i);
        const double b = rho(i);
        if (a > 0.0)
            lo = std::max(lo, b / a);
        else if (a == 0.0)
        {
            if (b > 0.0)
                return false;
        }
        else
        {
            if (b >= 0.0)
                return false;
            hi = std::min(hi, b / a);
        }
    }
    if (lo > hi || !std::isfinite(lo))
        return false;
    scale = lo;
    return true;
}

} // namespace detail

// f(v~, delta) = (1/lambda) ||v~||^2 + ||F v~ - rho - delta||^2.
inline double penalty_objective(const arma::vec &v_stacked, const arma::vec &delta,
                                const ConstraintSystem &sys, double lambda)
{
    detail::check_system_dims(sys);
    if (!(lambda > 0.0))
        throw std::invalid_argument("penalty_objective: lambda must be positive");
    if (v_stacked.n_elem != sys.F.n_cols)
        throw std::invalid_argument("penalty_objective: v~ length != F column count");
    if (delta.n_elem != sys.rho.n_elem)
        throw std::invalid_argument("penalty_objective: delta length != rho length");
    if (delta.n_elem > 0 && delta.min() < 0.0)
        throw std::invalid_argument("penalty_objective: delta must be >= 0 elementwise");
    const arma::vec residual = sys.F * v_stacked - sys.rho - delta;
    return arma::dot(v_stacked, v_stacked) / lambda + arma::dot(residual, residual);
}

// Exact minimizer of f over delta >= 0 at fixed v~: the elementwise clamp
// delta = max(F v~ - rho, 0).
inline arma::vec delta_update(const arma::vec &v_stacked, const ConstraintSystem &sys)
{
    detail::check_system_dims(sys);
    if (v_stacked.n_elem != sys.F.n_cols)
        throw std::invalid_argument("delta_update: v~ length != F column count");
    arma::vec slack = sys.F * v_stacked - sys.rho;
    slack.transform([](double x) { return x > 0.0 ? x : 0.0; });
    return slack;
}

// Exact minimizer of f over v~ at fixed delta: v~ = (I/lambda + F'F)^{-1} F'(rho + delta).
// Evaluated through the push-through identity as F' (I/lambda + F F')^{-1} (rho + delta),
// a 2K x 2K symmetric positive definite solve (2K << 2N in the scenarios of
// interest); the two forms are algebraically identical.
inline arma::vec v_update(const arma::vec &delta, const ConstraintSystem &sys, double lambda)
{
    detail::check_system_dims(sys);
    if (!(lambda > 0.0))
        throw std::invalid_argument("v_update: lambda must be positive");
    if (delta.n_elem != sys.rho.n_elem)
        throw std::invalid_argument("v_update: delta length != rho length");
    if (delta.n_elem > 0 && delta.min() < 0.0)
        throw std::invalid_argument("v_update: delta must be >= 0 elementwise");
    if (sys.rho.n_elem == 0)
        return arma::vec(sys.F.n_cols, arma::fill::zeros);
    arma::mat gram = sys.F * sys.F.t();
    gram.diag() += 1.0 / lambda;
    arma::vec z;
    const bool ok =
        arma::solve(z, gram, sys.rho + delta, arma::solve_opts::likely_sympd + arma::solve_opts::no_approx);
    if (!ok)
    {
        std::ostringstream msg;
        msg << "v_update: symmetric factorization failed; rcond(I/lambda + F F') = "
            << arma::rcond(gram);
        throw SolverError(msg.str());
    }
    return sys.F.t() * z;
}

// Alternating scheme from the zero vector (or a configured warm start):
// per iteration, delta <- clamp step at the previous v~, then v~ <- penalized
// least squares at that delta, then f is evaluated. Each step is an exact
// block minimizer, so the f sequence cannot increase; iteration stops once
// the decrease falls to epsilon or max_iter is hit (converged flag records
// which). The optional trace captures objective, violation norm, and power
// per iteration.
inline PrecoderSolution solve_iterative(const ConstraintSystem &sys, const SolverConfig &config = {},
                                        IterTrace *trace = nullptr)
{
    detail::check_system_dims(sys);
    if (!(config.lambda > 0.0))
        throw std::invalid_argument("solve_iterative: lambda must be positive");
    if (!(config.epsilon > 0.0))
        throw std::invalid_argument("solve_iterative: epsilon must be positive");
    if (config.max_iter < 1)
        throw std::invalid_argument("solve_iterative: max_iter must be >= 1");
    const arma::uword n2 = sys.F.n_cols;
    arma::vec v(n2, arma::fill::zeros);
    if (config.initial)
    {
        if (config.initial->n_elem != n2)
            throw std::invalid_argument("solve_iterative: warm start length != F column count");
        v = *config.initial;
    }

    // One factorization of the 2K x 2K system matrix, reused every iteration.
    arma::mat chol_lower;
    if (sys.rho.n_elem > 0)
    {
        arma::mat gram = sys.F * sys.F.t();
        gram.diag() += 1.0 / config.lambda;
        if (!arma::chol(chol_lower, gram, "lower"))
        {
            std::ostringstream msg;
            msg << "solve_iterative: Cholesky factorization failed; rcond(I/lambda + F F') = "
                << arma::rcond(gram);
            throw SolverError(msg.str());
        }
    }

    PrecoderSolution solution;
    if (trace)
        trace->clear();

    arma::vec fv = sys.F * v;
    double f_prev = 0.0;
    for (int iter = 1; iter <= config.max_iter; ++iter)
    {
        arma::vec delta = fv - sys.rho;
        delta.transform([](double x) { return x > 0.0 ? x : 0.0; });
        if (iter == 1)
        {
            const arma::vec residual0 = fv - sys.rho - delta;
            f_prev = arma::dot(v, v) / config.lambda + arma::dot(residual0, residual0);
            solution.objective_trace.push_back(f_prev);
        }
        if (sys.rho.n_elem > 0)
        {
            const arma::vec rhs = sys.rho + delta;
            const arma::vec y = arma::solve(arma::trimatl(chol_lower), rhs);
            const arma::vec z = arma::solve(arma::trimatu(chol_lower.t()), y);
            v = sys.F.t() * z;
        }
        else
            v.zeros();
        fv = sys.F * v;
        const arma::vec residual = fv - sys.rho - delta;
        const double f = arma::dot(v, v) / config.lambda + arma::dot(residual, residual);
        solution.objective_trace.push_back(f);
        solution.iterations = iter;
        if (trace)
        {
            arma::vec shortfall = sys.rho - fv;
            shortfall.transform([](double x) { return x > 0.0 ? x : 0.0; });
            trace->push_back(IterRecord{f, std::sqrt(arma::dot(shortfall, shortfall)), arma::dot(v, v)});
        }
        if (f_prev - f <= config.epsilon)
        {
            solution.converged = true;
            break;
        }
        f_prev = f;
    }

    if (config.repair)
    {
        double scale = 1.0;
        if (detail::feasibility_scale(fv, sys.rho, scale))
        {
            if (scale > 1.0)
            {
                v *= scale;
                fv = sys.F * v;
            }
            solution.repaired = true;
            solution.repair_scale = scale;
        }
    }

    solution.v_stacked = v;
    solution.v = unstack(v);
    solution.objective = arma::dot(v, v);
    solution.max_violation = detail::max_violation_of(fv, sys.rho);
    return solution;
}

// Exact minimizer by KKT enumeration: stationarity gives v~ = F_S' mu_S / 2
// for the active rows S, so each candidate is the least-norm solution of
// F_S v~ = rho_S via the normal equations; keep candidates with nonnegative
// multipliers that satisfy all rows, return the lowest power (first such
// subset in mask order on ties, which makes the reduction deterministic).
// Desk scale only: 2N <= 64, 2K <= 32.
inline PrecoderSolution solve_oracle(const ConstraintSystem &sys)
{
    detail::check_system_dims(sys);
    const arma::uword m = sys.F.n_rows;
    const arma::uword n2 = sys.F.n_cols;
    if (n2 > 64)
        throw std::invalid_argument("solve_oracle: 2N exceeds the desk-scale bound 64");
    if (m > 32)
        throw std::invalid_argument("solve_oracle: 2K exceeds the desk-scale bound 32");

    const double rho_scale = m == 0 ? 1.0 : std::max(1.0, arma::abs(sys.rho).max());
    const double tol = 1e-9 * rho_scale;

    bool found = false;
    double best_power = std::numeric_limits<double>::infinity();
    arma::vec best_v;

    std::vector<arma::uword> subset;
    const std::uint64_t masks = std::uint64_t(1) << m;
    for (std::uint64_t mask = 0; mask < masks; ++mask)
    {
        subset.clear();
        for (arma::uword i = 0; i < m; ++i)
            if (mask & (std::uint64_t(1) << i))
                subset.push_back(i);
        if (subset.size() > n2)
            continue;

        arma::vec candidate;
        if (subset.empty())
            candidate.zeros(n2);
        else
        {
            const arma::uvec rows(subset);
            const arma::mat fs = sys.F.rows(rows);
            const arma::vec rs = sys.rho(rows);
            arma::vec mu;
            if (!arma::solve(mu, fs * fs.t(), rs, arma::solve_opts::no_approx))
                continue; // rank-deficient subset; an independent subset covers its vertex
            if (mu.min() < -tol)
                continue; // multiplier sign condition failed
            candidate = fs.t() * mu;
        }

        if (m > 0 && (sys.F * candidate - sys.rho).min() < -tol)
            continue;
        const double power = arma::dot(candidate, candidate);
        if (!found || power < best_power)
        {
            found = true;
            best_power = power;
            best_v = candidate;
        }
    }

    if (!found)
    {
        std::ostringstream msg;
        msg << "solve_oracle: no primal-feasible KKT candidate (" << m << " rows, " << n2
            << " stacked unknowns); the constraint set is infeasible";
        throw InfeasibleError(msg.str());
    }

    PrecoderSolution solution;
    solution.v_stacked = best_v;
    solution.v = unstack(best_v);
    solution.objective = best_power;
    solution.iterations = 0;
    solution.converged = true;
    solution.max_violation = detail::max_violation_of(sys.F * best_v, sys.rho);
    return solution;
}

} // namespace hnf
