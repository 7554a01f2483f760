// SPDX-License-Identifier: Apache-2.0
//
// fdrs: joint subcarrier and power allocation for a full-duplex
// decode-and-forward relay link with rate splitting
// Copyright (C) 2026 the fdrs developers
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
// Two-level optimizer for the sum-rate maximization.
//
// Inner level: the surrogate problem built from the concave Taylor lower
// bounds at an anchor allocation,
//
//   max  sum_k Rbar_sd^k(p) + sum_k t_k
//   s.t. Rbar_sr^k(p) >= t_k,  Rbar_rd^k(p) >= t_k,
//        sum_k p_rd^k <= P_r,  sum_k (p_sr^k + p_sd^k) <= P_s,
//        p >= power_floor,
//
// solved to its KKT point with a logarithmic-barrier Newton method. The
// per-subcarrier epigraph rates t_k linearize the min of the two hop rates.
//
// Outer level: successive inner approximation. Starting from the uniform
// split, each round solves the surrogate and re-anchors the bounds at the
// solution. The bounds are tight with shared slope at their anchor, so the
// objective ascends and the limit satisfies the KKT conditions of the
// original nonconvex problem.

#ifndef FDRS_SOLVER_HPP
#define FDRS_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fdrs/coefficients.hpp"
#include "fdrs/config.hpp"
#include "fdrs/power.hpp"
#include "fdrs/rates.hpp"

namespace fdrs {

struct SolverOptions {
    int max_outer_iters = 50;
    double outer_tol = 1e-6;      // stop when the sum-rate improves by less than this
    // KKT residual target of each surrogate solve. Stationarity is measured
    // relative to the multiplier scale max(1, |lambda|_1 / m), the usual
    // dual-infeasibility scaling: at binding constraints a log-barrier method
    // sees stationarity noise of order eps * value * multiplier / mu, so an
    // unscaled target much below 1e-7 would sit under the double-precision
    // floor whenever several constraints bind.
    double inner_tol = 5e-7;
    double barrier_shrink = 0.2;  // multiplicative decrease of the barrier weight
    int max_newton_iters = 600;   // budget per surrogate solve, all stages combined
    double armijo = 1e-4;
    double power_floor = 1e-12;   // strict-interiority floor on every transmit power

    void validate() const {
        if (max_outer_iters < 1 || max_newton_iters < 1) throw std::invalid_argument("SolverOptions: iteration caps must be >= 1");
        if (outer_tol <= 0.0 || inner_tol <= 0.0 || power_floor <= 0.0) throw std::invalid_argument("SolverOptions: tolerances must be positive");
        if (barrier_shrink <= 0.0 || barrier_shrink >= 1.0) throw std::invalid_argument("SolverOptions: barrier_shrink must lie in (0,1)");
    }
};

enum class Termination { converged, max_iterations, inner_failure };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iterations: return "max_iterations";
        default: return "inner_failure";
    }
}

struct SolveTrace {
    std::vector<double> surrogate_objective;  // optimal value of each inner solve
    std::vector<double> true_objective;       // sum-rate after each outer iteration
    std::vector<double> inner_residual;       // KKT residual of each inner solve
    int iterations = 0;
    double final_true_objective = 0.0;
    Termination termination = Termination::max_iterations;
    Eigen::VectorXd final_lambdas;  // multiplier estimates of the last inner solve
};

/// A sum-rate maximization instance over the generic link models. The
/// benchmark schemes reuse this with frozen power blocks or swapped
/// interference maps; prefactor carries the rate prefactor (times the slot
/// share for half duplex).
struct SurrogateProblem {
    LinkModel sr;
    LinkModel rd;
    LinkModel sd;
    bool relay_path = true;        // epigraph rates + both hop-rate constraint families
    bool direct_objective = true;  // direct-link bounds in the objective
    bool free_sr = true;
    bool free_sd = true;
    bool free_rd = true;
    double budget_source = 1.0;
    double budget_relay = 1.0;
    double prefactor = 1.0;

    Eigen::Index num_subcarriers() const { return sr.alpha.size(); }
};

inline SurrogateProblem rs_problem(const RateCoefficients& c, const SystemConfig& config) {
    SurrogateProblem p;
    p.sr = link_model_sr(c);
    p.rd = link_model_rd(c);
    p.sd = link_model_sd(c);
    p.budget_source = config.power_source;
    p.budget_relay = config.power_relay;
    p.prefactor = config.rate_prefactor;
    return p;
}

/// Per-subcarrier rates of a problem's three links at an allocation.
inline RateReport problem_report(const SurrogateProblem& pr, const PowerAllocation& p) {
    RateReport rep;
    rep.r_sr = link_rate(pr.sr, p, pr.prefactor);
    rep.r_rd = link_rate(pr.rd, p, pr.prefactor);
    rep.r_sd = link_rate(pr.sd, p, pr.prefactor);
    rep.r_total = 0.0;
    for (Eigen::Index k = 0; k < rep.r_sr.size(); ++k) {
        if (pr.direct_objective) rep.r_total += rep.r_sd[k];
        if (pr.relay_path) rep.r_total += std::min(rep.r_sr[k], rep.r_rd[k]);
    }
    return rep;
}

inline double true_objective(const SurrogateProblem& pr, const PowerAllocation& p) {
    return problem_report(pr, p).r_total;
}

struct InnerResult {
    PowerAllocation powers;
    double objective = 0.0;  // surrogate objective at the returned point
    double kkt_residual = std::numeric_limits<double>::infinity();
    int newton_iters = 0;
    bool converged = false;
    Eigen::VectorXd lambdas;  // one multiplier per constraint, barrier estimates
};

namespace detail {

struct VarLayout {
    Eigen::Index k = 0;
    Eigen::Index off_sr = -1, off_sd = -1, off_rd = -1, off_t = -1;
    Eigen::Index n = 0;       // total variables
    Eigen::Index n_power = 0; // leading power variables
};

inline VarLayout make_layout(const SurrogateProblem& pr) {
    VarLayout lo;
    lo.k = pr.num_subcarriers();
    Eigen::Index off = 0;
    if (pr.free_sr) { lo.off_sr = off; off += lo.k; }
    if (pr.free_sd) { lo.off_sd = off; off += lo.k; }
    if (pr.free_rd) { lo.off_rd = off; off += lo.k; }
    lo.n_power = off;
    if (pr.relay_path) { lo.off_t = off; off += lo.k; }
    lo.n = off;
    if (lo.n_power == 0) throw std::invalid_argument("solver: all power blocks frozen");
    return lo;
}

inline Eigen::VectorXd stack(const VarLayout& lo, const PowerAllocation& p) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(lo.n);
    if (lo.off_sr >= 0) z.segment(lo.off_sr, lo.k) = p.p_sr;
    if (lo.off_sd >= 0) z.segment(lo.off_sd, lo.k) = p.p_sd;
    if (lo.off_rd >= 0) z.segment(lo.off_rd, lo.k) = p.p_rd;
    if (lo.off_t >= 0 && p.t.size() == lo.k) z.segment(lo.off_t, lo.k) = p.t;
    return z;
}

inline PowerAllocation unstack(const VarLayout& lo, const Eigen::VectorXd& z) {
    PowerAllocation p = PowerAllocation::zeros(lo.k);
    if (lo.off_sr >= 0) p.p_sr = z.segment(lo.off_sr, lo.k);
    if (lo.off_sd >= 0) p.p_sd = z.segment(lo.off_sd, lo.k);
    if (lo.off_rd >= 0) p.p_rd = z.segment(lo.off_rd, lo.k);
    if (lo.off_t >= 0) p.t = z.segment(lo.off_t, lo.k);
    return p;
}

// One link model flattened onto the variable vector: u(z) = alpha + W z is
// the full denominator-plus-signal term, sigma(z) = alpha + V z the
// interference alone. In bound mode the convex -log(sigma) part is
// linearized at the anchor (rows L, constants c1); in exact mode the true
// rate c0 (ln u - ln sigma) and its derivatives are used.
struct BoundData {
    Eigen::MatrixXd W;       // K x n
    Eigen::MatrixXd V;       // K x n
    Eigen::VectorXd alpha;   // K
    Eigen::MatrixXd L;       // K x n, V rows divided by sigma0 (bound mode)
    Eigen::VectorXd c1;      // K, constants so that bound = c0 (ln u - L z + c1)
    double c0 = 1.0;
    bool exact = false;

    Eigen::VectorXd u(const Eigen::VectorXd& z) const { return alpha + W * z; }
    Eigen::VectorXd sigma(const Eigen::VectorXd& z) const { return alpha + V * z; }
    Eigen::VectorXd values(const Eigen::VectorXd& z) const {
        const Eigen::VectorXd uu = u(z);
        Eigen::VectorXd r(uu.size());
        if (exact) {
            const Eigen::VectorXd sg = sigma(z);
            for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = c0 * (std::log(uu[i]) - std::log(sg[i]));
        } else {
            const Eigen::VectorXd lz = L * z;
            for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = c0 * (std::log(uu[i]) - lz[i] + c1[i]);
        }
        return r;
    }
};

inline BoundData make_bound(const LinkModel& model, const VarLayout& lo, const Eigen::VectorXd& z0,
                            double prefactor, bool exact) {
    BoundData b;
    b.exact = exact;
    b.c0 = prefactor / std::log(2.0);
    b.alpha = model.alpha;
    b.V = Eigen::MatrixXd::Zero(lo.k, lo.n);
    if (lo.off_sr >= 0) b.V.block(0, lo.off_sr, lo.k, lo.k) = model.g_sr;
    if (lo.off_sd >= 0) b.V.block(0, lo.off_sd, lo.k, lo.k) = model.g_sd;
    if (lo.off_rd >= 0) b.V.block(0, lo.off_rd, lo.k, lo.k) = model.g_rd;
    b.W = b.V;
    Eigen::Index own_off = -1;
    switch (model.own) {
        case PowerSlot::sr: own_off = lo.off_sr; break;
        case PowerSlot::sd: own_off = lo.off_sd; break;
        case PowerSlot::rd: own_off = lo.off_rd; break;
    }
    if (own_off < 0) throw std::invalid_argument("solver: a link model's own power block is frozen");
    for (Eigen::Index k = 0; k < lo.k; ++k) b.W(k, own_off + k) += model.gain[k];

    const Eigen::VectorXd sigma0 = b.alpha + b.V * z0;
    if ((sigma0.array() <= 0.0).any())
        throw std::invalid_argument("solver: anchor yields a nonpositive interference denominator");
    if (!exact) {
        b.L.resize(lo.k, lo.n);
        b.c1.resize(lo.k);
        for (Eigen::Index k = 0; k < lo.k; ++k) {
            b.L.row(k) = b.V.row(k) / sigma0[k];
            b.c1[k] = -std::log(sigma0[k]) + b.V.row(k).dot(z0) / sigma0[k];
        }
    }
    return b;
}

// Barrier solver state for one surrogate instance.
class InnerSolver {
  public:
    InnerSolver(const SurrogateProblem& pr, const PowerAllocation& anchor, const SolverOptions& opts, bool exact)
        : pr_(pr), lo_(make_layout(pr)), opts_(opts) {
        PowerAllocation a = anchor;
        a.t = Eigen::VectorXd::Zero(lo_.k);  // epigraph coordinates are not part of the anchor
        const Eigen::VectorXd z0 = stack(lo_, a);
        if (pr.relay_path) {
            sr_ = make_bound(pr.sr, lo_, z0, pr.prefactor, exact);
            rd_ = make_bound(pr.rd, lo_, z0, pr.prefactor, exact);
        }
        if (pr.direct_objective) sd_ = make_bound(pr.sd, lo_, z0, pr.prefactor, exact);
        num_cons_ = (pr.relay_path ? 2 * lo_.k : 0) + 1 + (lo_.off_rd >= 0 ? 1 : 0) + lo_.n_power;
        has_relay_budget_ = lo_.off_rd >= 0;
    }

    const VarLayout& layout() const { return lo_; }

    // Surrogate objective.
    double objective(const Eigen::VectorXd& z) const {
        double f = 0.0;
        if (pr_.direct_objective) f += sd_.values(z).sum();
        if (lo_.off_t >= 0) f += z.segment(lo_.off_t, lo_.k).sum();
        return f;
    }

    // All constraint values, in the fixed order used for the multipliers:
    // sr-hop rows, rd-hop rows, source budget, relay budget, power floors.
    Eigen::VectorXd constraints(const Eigen::VectorXd& z) const {
        Eigen::VectorXd g(num_cons_);
        Eigen::Index i = 0;
        if (pr_.relay_path) {
            const Eigen::VectorXd rs = sr_.values(z);
            const Eigen::VectorXd rr = rd_.values(z);
            const auto t = z.segment(lo_.off_t, lo_.k);
            for (Eigen::Index k = 0; k < lo_.k; ++k) g[i++] = rs[k] - t[k];
            for (Eigen::Index k = 0; k < lo_.k; ++k) g[i++] = rr[k] - t[k];
        }
        g[i++] = source_slack(z);
        if (has_relay_budget_) g[i++] = relay_slack(z);
        for (Eigen::Index j = 0; j < lo_.n_power; ++j) g[i++] = z[j] - opts_.power_floor;
        return g;
    }

    bool feasible(const Eigen::VectorXd& z) const {
        if (!z.allFinite()) return false;
        if (pr_.relay_path && ((sr_.u(z).array() <= 0.0).any() || (rd_.u(z).array() <= 0.0).any())) return false;
        if (pr_.direct_objective && (sd_.u(z).array() <= 0.0).any()) return false;
        if (pr_.relay_path && sr_.exact &&
            ((sr_.sigma(z).array() <= 0.0).any() || (rd_.sigma(z).array() <= 0.0).any()))
            return false;
        if (pr_.direct_objective && sd_.exact && (sd_.sigma(z).array() <= 0.0).any()) return false;
        return (constraints(z).array() > 0.0).all();
    }

    double barrier_value(const Eigen::VectorXd& z, double mu) const {
        const Eigen::VectorXd g = constraints(z);
        if ((g.array() <= 0.0).any()) return -std::numeric_limits<double>::infinity();
        return objective(z) + mu * g.array().log().sum();
    }

    // Gradient and Hessian of the barrier function at a feasible point.
    void newton_system(const Eigen::VectorXd& z, double mu, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
        grad = Eigen::VectorXd::Zero(lo_.n);
        hess = Eigen::MatrixXd::Zero(lo_.n, lo_.n);

        // Objective part.
        if (pr_.direct_objective) accumulate_log_terms(sd_, z, grad, hess);
        if (lo_.off_t >= 0) grad.segment(lo_.off_t, lo_.k).array() += 1.0;

        // Hop-rate constraints.
        if (pr_.relay_path) {
            add_rate_constraint_barrier(sr_, z, mu, grad, hess);
            add_rate_constraint_barrier(rd_, z, mu, grad, hess);
        }

        // Budgets.
        {
            const double gs = source_slack(z);
            Eigen::VectorXd s = Eigen::VectorXd::Zero(lo_.n);
            if (lo_.off_sr >= 0) s.segment(lo_.off_sr, lo_.k).array() = -1.0;
            if (lo_.off_sd >= 0) s.segment(lo_.off_sd, lo_.k).array() = -1.0;
            grad += (mu / gs) * s;
            hess -= (mu / (gs * gs)) * (s * s.transpose());
        }
        if (has_relay_budget_) {
            const double gr = relay_slack(z);
            Eigen::VectorXd s = Eigen::VectorXd::Zero(lo_.n);
            s.segment(lo_.off_rd, lo_.k).array() = -1.0;
            grad += (mu / gr) * s;
            hess -= (mu / (gr * gr)) * (s * s.transpose());
        }

        // Power floors.
        for (Eigen::Index j = 0; j < lo_.n_power; ++j) {
            const double gj = z[j] - opts_.power_floor;
            grad[j] += mu / gj;
            hess(j, j) -= mu / (gj * gj);
        }
    }

    Eigen::Index num_constraints() const { return num_cons_; }

    // Largest step fraction keeping the linear constraints (power floors and
    // budgets) strictly interior; the concave rate constraints are handled by
    // the backtracking safety net.
    double linear_step_bound(const Eigen::VectorXd& z, const Eigen::VectorXd& d) const {
        double amax = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < lo_.n_power; ++j)
            if (d[j] < 0.0) amax = std::min(amax, (z[j] - opts_.power_floor) / (-d[j]));
        double used = 0.0;
        if (lo_.off_sr >= 0) used += d.segment(lo_.off_sr, lo_.k).sum();
        if (lo_.off_sd >= 0) used += d.segment(lo_.off_sd, lo_.k).sum();
        if (used > 0.0) amax = std::min(amax, source_slack(z) / used);
        if (has_relay_budget_ && lo_.off_rd >= 0) {
            const double ur = d.segment(lo_.off_rd, lo_.k).sum();
            if (ur > 0.0) amax = std::min(amax, relay_slack(z) / ur);
        }
        return amax;
    }

  private:
    // Budget slacks shrink to the barrier weight at the optimum while the
    // powers stay order one, so the plain sum would lose most of the slack's
    // digits to cancellation. Compensated summation keeps it exact.
    static double compensated_slack(double budget, std::initializer_list<const double*> blocks, Eigen::Index k) {
        double sum = budget, comp = 0.0;
        auto add = [&](double x) {
            const double t = sum + x;
            comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
            sum = t;
        };
        for (const double* b : blocks)
            for (Eigen::Index i = 0; i < k; ++i) add(-b[i]);
        return sum + comp;
    }

    double source_slack(const Eigen::VectorXd& z) const {
        if (lo_.off_sr >= 0 && lo_.off_sd >= 0)
            return compensated_slack(pr_.budget_source, {z.data() + lo_.off_sr, z.data() + lo_.off_sd}, lo_.k);
        if (lo_.off_sr >= 0) return compensated_slack(pr_.budget_source, {z.data() + lo_.off_sr}, lo_.k);
        return compensated_slack(pr_.budget_source, {z.data() + lo_.off_sd}, lo_.k);
    }

    double relay_slack(const Eigen::VectorXd& z) const {
        return compensated_slack(pr_.budget_relay, {z.data() + lo_.off_rd}, lo_.k);
    }

    // Gradient row of rate k (bound or exact mode).
    Eigen::VectorXd rate_grad_row(const BoundData& b, const Eigen::VectorXd& z, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& sg, Eigen::Index k) const {
        if (b.exact) return b.c0 * (b.W.row(k) / u[k] - b.V.row(k) / sg[k]).transpose();
        return b.c0 * (b.W.row(k) / u[k] - b.L.row(k)).transpose();
    }

    // Adds weight * (grad, hess) of rate k to the accumulators.
    void add_rate_curvature(const BoundData& b, const Eigen::VectorXd& u, const Eigen::VectorXd& sg, Eigen::Index k,
                            double weight, Eigen::MatrixXd& hess) const {
        hess -= (weight * b.c0 / (u[k] * u[k])) * (b.W.row(k).transpose() * b.W.row(k));
        if (b.exact) hess += (weight * b.c0 / (sg[k] * sg[k])) * (b.V.row(k).transpose() * b.V.row(k));
    }

    // Adds sum_k grad/hess of rate_k.
    void accumulate_log_terms(const BoundData& b, const Eigen::VectorXd& z, Eigen::VectorXd& grad,
                              Eigen::MatrixXd& hess) const {
        const Eigen::VectorXd u = b.u(z);
        const Eigen::VectorXd sg = b.exact ? b.sigma(z) : Eigen::VectorXd();
        for (Eigen::Index k = 0; k < lo_.k; ++k) {
            grad += rate_grad_row(b, z, u, sg, k);
            add_rate_curvature(b, u, sg, k, 1.0, hess);
        }
    }

    void add_rate_constraint_barrier(const BoundData& b, const Eigen::VectorXd& z, double mu, Eigen::VectorXd& grad,
                                     Eigen::MatrixXd& hess) const {
        const Eigen::VectorXd vals = b.values(z);
        const Eigen::VectorXd u = b.u(z);
        const Eigen::VectorXd sg = b.exact ? b.sigma(z) : Eigen::VectorXd();
        const auto t = z.segment(lo_.off_t, lo_.k);
        for (Eigen::Index k = 0; k < lo_.k; ++k) {
            const double g = vals[k] - t[k];
            Eigen::VectorXd cg = rate_grad_row(b, z, u, sg, k);
            cg[lo_.off_t + k] -= 1.0;
            grad += (mu / g) * cg;
            add_rate_curvature(b, u, sg, k, mu / g, hess);
            hess -= (mu / (g * g)) * (cg * cg.transpose());
        }
    }

    const SurrogateProblem& pr_;
    VarLayout lo_;
    SolverOptions opts_;
    BoundData sr_, rd_, sd_;
    Eigen::Index num_cons_ = 0;
    bool has_relay_budget_ = false;
};

// Strictly interior starting point derived from the anchor.
inline Eigen::VectorXd interior_start(const InnerSolver& solver, const SurrogateProblem& pr, const VarLayout& lo,
                                      const PowerAllocation& anchor, const SolverOptions& opts, bool exact) {
    PowerAllocation a = anchor;
    a.t = Eigen::VectorXd::Zero(lo.k);
    Eigen::VectorXd z = stack(lo, a);
    const double shrink = exact ? 1e-6 : 1e-3;  // exact solves are warm-started polishes
    for (Eigen::Index j = 0; j < lo.n_power; ++j) z[j] = std::max(z[j] * (1.0 - shrink), 2.0 * opts.power_floor);

    // Rescale a block if the shrink did not open the budget (possible when
    // the anchor slightly overshoots it).
    auto rescale = [&](Eigen::Index off_a, Eigen::Index off_b, double budget) {
        double used = 0.0;
        if (off_a >= 0) used += z.segment(off_a, lo.k).sum();
        if (off_b >= 0) used += z.segment(off_b, lo.k).sum();
        if (used >= budget * (1.0 - (exact ? 1e-8 : 1e-6)) && used > 0.0) {
            const double s = budget * (1.0 - (exact ? 1e-7 : 1e-4)) / used;
            if (off_a >= 0) z.segment(off_a, lo.k) *= s;
            if (off_b >= 0) z.segment(off_b, lo.k) *= s;
        }
    };
    rescale(lo.off_sr, lo.off_sd, pr.budget_source);
    rescale(lo.off_rd, -1, pr.budget_relay);
    for (Eigen::Index j = 0; j < lo.n_power; ++j) z[j] = std::max(z[j], 2.0 * opts.power_floor);

    if (lo.off_t >= 0) {
        // t strictly below both hop rates at the starting powers.
        Eigen::VectorXd zt = z;
        zt.segment(lo.off_t, lo.k).setZero();
        PowerAllocation pw = unstack(lo, zt);
        const Eigen::VectorXd bs =
            exact ? link_rate(pr.sr, pw, pr.prefactor) : link_taylor_bound(pr.sr, pw, a, pr.prefactor);
        const Eigen::VectorXd br =
            exact ? link_rate(pr.rd, pw, pr.prefactor) : link_taylor_bound(pr.rd, pw, a, pr.prefactor);
        const double rel_slack = exact ? 1e-4 : 1e-2;
        for (Eigen::Index k = 0; k < lo.k; ++k) {
            const double lo_rate = std::min(bs[k], br[k]);
            z[lo.off_t + k] = lo_rate - std::max(rel_slack, rel_slack * std::abs(lo_rate));
        }
    }
    if (!solver.feasible(z)) throw std::invalid_argument("solve_surrogate: could not construct an interior start from the anchor");
    return z;
}

inline InnerResult solve_surrogate_inner(const SurrogateProblem& pr, const PowerAllocation& anchor,
                                         const SolverOptions& opts, bool exact = false) {
    opts.validate();
    auto neg = [](const Eigen::VectorXd& v) { return v.size() > 0 && v.minCoeff() < -1e-12; };
    if (neg(anchor.p_sr) || neg(anchor.p_sd) || neg(anchor.p_rd))
        throw std::invalid_argument("solve_surrogate: anchor has negative powers");
    if (anchor.p_sr.sum() + anchor.p_sd.sum() > pr.budget_source * (1.0 + 1e-9) + 1e-12 ||
        anchor.p_rd.sum() > pr.budget_relay * (1.0 + 1e-9) + 1e-12)
        throw std::invalid_argument("solve_surrogate: anchor violates a power budget");
    InnerSolver solver(pr, anchor, opts, exact);
    const VarLayout& lo = solver.layout();
    Eigen::VectorXd z = interior_start(solver, pr, lo, anchor, opts, exact);

    const double m = static_cast<double>(solver.num_constraints());
    const double mu_final = 0.5 * opts.inner_tol;
    // A polish on the exact rates starts from a near-stationary point, so it
    // enters the barrier path close to its end instead of re-centering.
    double mu = exact ? 1e-4 * std::max(1.0, std::abs(solver.objective(z)) / m)
                      : std::max(1.0, std::abs(solver.objective(z))) / m;
    mu = std::max(mu, mu_final);

    InnerResult res;
    res.newton_iters = 0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    const int stage_cap = std::max(40, opts.max_newton_iters / 8);
    bool out_of_budget = false;

    while (true) {
        const bool final_stage = mu <= mu_final * (1.0 + 1e-12);
        const Eigen::VectorXd g_now = solver.constraints(z);
        const double dual_scale = std::max(1.0, mu * g_now.cwiseInverse().sum() / m);
        const double stage_tol =
            dual_scale * (final_stage ? 0.75 * opts.inner_tol : std::max(0.1 * mu / dual_scale, 0.75 * opts.inner_tol));
        int stage_iters = 0;
        double best_grad = std::numeric_limits<double>::infinity();
        int since_best = 0;
        for (;;) {
            if (res.newton_iters >= opts.max_newton_iters) { out_of_budget = true; break; }
            if (stage_iters >= stage_cap) break;
            solver.newton_system(z, mu, grad, hess);
            const double gnorm = grad.lpNorm<Eigen::Infinity>();
            if (gnorm <= stage_tol) break;
            // No measurable progress over several steps: the stage is at its
            // numerical floor.
            if (gnorm < 0.99 * best_grad) { best_grad = gnorm; since_best = 0; }
            else if (++since_best >= 8) break;

            // Newton step on the concave barrier function; regularize if the
            // factorization loses definiteness.
            Eigen::VectorXd d;
            double tau = 0.0;
            for (int attempt = 0; attempt < 12; ++attempt) {
                Eigen::MatrixXd A = -hess;
                if (tau > 0.0) A.diagonal().array() += tau;
                Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
                if (ldlt.info() == Eigen::Success) {
                    d = ldlt.solve(grad);
                    if (d.allFinite() && grad.dot(d) > 0.0) break;
                }
                tau = (tau == 0.0) ? 1e-10 : tau * 100.0;
                d.setZero();
            }
            const double dec2 = (d.size() > 0 && d.allFinite()) ? grad.dot(d) : 0.0;
            if (dec2 <= 0.0) break;
            // Numerical floor: the quadratic model promises less improvement
            // than the value resolution, so the stage is as centered as the
            // arithmetic allows.
            if (dec2 <= 1e-24 * (1.0 + std::abs(solver.objective(z)))) break;

            // Damped Newton: the decrement-based step of self-concordant
            // barrier calculus needs no function-value line search; keep a
            // plain feasibility backtrack as a safety net. The decrement is
            // taken on the mu-normalized function, which is the one with
            // unit barrier coefficients.
            const double lambda_n = std::sqrt(dec2 / std::min(mu, 1.0));
            double alpha = lambda_n > 0.25 ? 1.0 / (1.0 + lambda_n) : 1.0;
            alpha = std::min(alpha, 0.995 * solver.linear_step_bound(z, d));
            int bt = 0;
            for (; bt < 70; ++bt) {
                if (solver.feasible(z + alpha * d)) break;
                alpha *= 0.5;
            }
            if (bt >= 70) break;
            z += alpha * d;
            ++res.newton_iters;
            ++stage_iters;
        }
        if (final_stage || out_of_budget) break;
        mu = std::max(mu * opts.barrier_shrink, mu_final);
    }

    solver.newton_system(z, mu, grad, hess);
    const Eigen::VectorXd g = solver.constraints(z);
    res.powers = unstack(lo, z);
    res.objective = solver.objective(z);
    res.lambdas = mu * g.cwiseInverse();
    const double dual_scale = std::max(1.0, res.lambdas.sum() / m);
    res.kkt_residual = std::max(grad.lpNorm<Eigen::Infinity>() / dual_scale, mu);
    res.converged = res.kkt_residual <= opts.inner_tol && g.minCoeff() > 0.0;
    return res;
}

inline PowerAllocation uniform_anchor(const SurrogateProblem& pr) {
    const Eigen::Index k = pr.num_subcarriers();
    PowerAllocation p = PowerAllocation::zeros(k);
    const double kk = static_cast<double>(k);
    const int source_blocks = (pr.free_sr ? 1 : 0) + (pr.free_sd ? 1 : 0);
    if (pr.free_sr) p.p_sr.setConstant(pr.budget_source / (source_blocks * kk));
    if (pr.free_sd) p.p_sd.setConstant(pr.budget_source / (source_blocks * kk));
    if (pr.free_rd) p.p_rd.setConstant(pr.budget_relay / kk);
    return p;
}

}  // namespace detail

/// Solve one surrogate instance anchored at the given allocation.
inline InnerResult solve_surrogate(const SurrogateProblem& pr, const PowerAllocation& anchor,
                                           const SolverOptions& opts) {
    return detail::solve_surrogate_inner(pr, anchor, opts);
}

/// Spec'd entry point for the rate-splitting problem.
inline PowerAllocation solve_surrogate(const RateCoefficients& coeffs, const PowerAllocation& anchor,
                                       const SystemConfig& config, const SolverOptions& opts) {
    return detail::solve_surrogate_inner(rs_problem(coeffs, config), anchor, opts).powers;
}

namespace detail {

// Pull an extrapolated anchor back into the feasible box/budget set.
inline PowerAllocation project_feasible(const SurrogateProblem& pr, PowerAllocation p) {
    p.p_sr = p.p_sr.cwiseMax(0.0);
    p.p_sd = p.p_sd.cwiseMax(0.0);
    p.p_rd = p.p_rd.cwiseMax(0.0);
    const double src = p.p_sr.sum() + p.p_sd.sum();
    if (src > pr.budget_source && src > 0.0) {
        const double c = pr.budget_source / src;
        p.p_sr *= c;
        p.p_sd *= c;
    }
    const double rel = p.p_rd.sum();
    if (rel > pr.budget_relay && rel > 0.0) p.p_rd *= pr.budget_relay / rel;
    return p;
}

}  // namespace detail

/// Successive inner approximation over a generic problem. Starts from the
/// uniform split unless an initial anchor is supplied. Re-anchoring tries a
/// few extrapolated steps along the latest move and keeps the best true
/// objective; plain re-anchoring alone crawls along curved valleys of this
/// objective, while the extrapolation preserves both monotone ascent and the
/// fixed points of the iteration.
inline std::pair<PowerAllocation, SolveTrace> sia_solve(const SurrogateProblem& pr, const SolverOptions& opts,
                                                        const PowerAllocation* initial_anchor = nullptr) {
    opts.validate();
    if (pr.budget_source <= 0.0 && pr.budget_relay <= 0.0)
        throw std::invalid_argument("sia_solve: both power budgets are zero");

    PowerAllocation anchor = initial_anchor ? *initial_anchor : detail::uniform_anchor(pr);
    SolveTrace trace;
    double f_prev = true_objective(pr, anchor);
    PowerAllocation two_back = anchor;
    bool have_two_back = false;

    auto extrapolate = [&pr](const PowerAllocation& from, const PowerAllocation& to, double step) {
        PowerAllocation cand = to;
        cand.p_sr = from.p_sr + step * (to.p_sr - from.p_sr);
        cand.p_sd = from.p_sd + step * (to.p_sd - from.p_sd);
        cand.p_rd = from.p_rd + step * (to.p_rd - from.p_rd);
        return detail::project_feasible(pr, cand);
    };

    for (int a = 1; a <= opts.max_outer_iters; ++a) {
        InnerResult inner = detail::solve_surrogate_inner(pr, anchor, opts);
        trace.surrogate_objective.push_back(inner.objective);
        trace.inner_residual.push_back(inner.kkt_residual);
        trace.iterations = a;
        trace.final_lambdas = inner.lambdas;
        // A marginally centered solve (residual slightly above target, as
        // happens at extreme SNRs near the double-precision floor) still
        // yields a valid feasible iterate; only gross failures abort.
        if (!inner.converged &&
            !(std::isfinite(inner.kkt_residual) && inner.kkt_residual < 1e3 * opts.inner_tol)) {
            anchor = inner.powers;
            trace.true_objective.push_back(true_objective(pr, anchor));
            trace.termination = Termination::inner_failure;
            break;
        }

        PowerAllocation best = inner.powers;
        double f_best = true_objective(pr, best);
        auto try_ray = [&](const PowerAllocation& from, const PowerAllocation& to,
                           std::initializer_list<double> steps) {
            for (double step : steps) {
                const PowerAllocation cand = extrapolate(from, to, step);
                const double f_cand = true_objective(pr, cand);
                if (!(f_cand > f_best)) break;
                f_best = f_cand;
                best = cand;
            }
        };
        try_ray(anchor, inner.powers, {2.0, 4.0, 8.0, 16.0});
        // Secant direction over two outer rounds tracks curved valleys that
        // the single-round direction cuts across.
        if (have_two_back) {
            const PowerAllocation through = best;
            try_ray(two_back, through, {2.0, 4.0, 8.0, 16.0});
        }

        // Re-anchoring alone contracts slowly along strongly coupled
        // interference valleys. A barrier solve on the exact rates, started
        // from the incumbent and kept only when the sum rate improves, jumps
        // straight to the stationary point the re-anchored iteration is
        // crawling toward.
        try {
            InnerResult polish = detail::solve_surrogate_inner(pr, best, opts, /*exact=*/true);
            const double f_polish = true_objective(pr, polish.powers);
            // A converged exact solve certifies a stationary point; prefer it
            // even when its value ties within the ascent slack, so the
            // returned allocation and multipliers belong together.
            if (f_polish > f_best || (polish.converged && f_polish > f_best - 10.0 * opts.inner_tol)) {
                f_best = f_polish;
                best = polish.powers;
                trace.final_lambdas = polish.lambdas;
            }
        } catch (const std::exception&) {
            // the exact solve is an accelerator only; the bound iteration continues
        }
        if (pr.relay_path) {
            const Eigen::VectorXd rs = link_rate(pr.sr, best, pr.prefactor);
            const Eigen::VectorXd rr = link_rate(pr.rd, best, pr.prefactor);
            best.t = rs.cwiseMin(rr);
        }

        two_back = anchor;
        have_two_back = true;
        anchor = best;
        trace.true_objective.push_back(f_best);
        if (f_best - f_prev < opts.outer_tol) {
            trace.termination = Termination::converged;
            break;
        }
        f_prev = f_best;
    }
    trace.final_true_objective = true_objective(pr, anchor);
    return {anchor, trace};
}

/// Spec'd entry point: full rate-splitting solve from the uniform split.
inline std::pair<PowerAllocation, SolveTrace> sia_solve(const RateCoefficients& coeffs, const SystemConfig& config,
                                                        const SolverOptions& opts) {
    return sia_solve(rs_problem(coeffs, config), opts);
}

/// KKT residual of the original (non-surrogate) problem at an allocation,
/// using the multiplier estimates of the last inner solve: max of the
/// stationarity infinity-norm, complementarity, dual and primal violations.
inline double true_kkt_residual(const SurrogateProblem& pr, const PowerAllocation& p,
                                const Eigen::VectorXd& lambdas, const SolverOptions& opts) {
    const detail::VarLayout lo = detail::make_layout(pr);
    const Eigen::VectorXd z = detail::stack(lo, p);
    const double c0 = pr.prefactor / std::log(2.0);

    // True-rate gradients share the bound's W/V structure with the
    // interference evaluated at the current point.
    struct TrueLink {
        Eigen::MatrixXd W, V;
        Eigen::VectorXd sigma, u;
    };
    auto make_true = [&](const LinkModel& model) {
        TrueLink t;
        t.V = Eigen::MatrixXd::Zero(lo.k, lo.n);
        if (lo.off_sr >= 0) t.V.block(0, lo.off_sr, lo.k, lo.k) = model.g_sr;
        if (lo.off_sd >= 0) t.V.block(0, lo.off_sd, lo.k, lo.k) = model.g_sd;
        if (lo.off_rd >= 0) t.V.block(0, lo.off_rd, lo.k, lo.k) = model.g_rd;
        t.W = t.V;
        Eigen::Index own_off = model.own == PowerSlot::sr ? lo.off_sr : (model.own == PowerSlot::sd ? lo.off_sd : lo.off_rd);
        for (Eigen::Index k = 0; k < lo.k; ++k) t.W(k, own_off + k) += model.gain[k];
        t.sigma = model.alpha + t.V * z;
        t.u = model.alpha + t.W * z;
        return t;
    };

    Eigen::VectorXd grad_l = Eigen::VectorXd::Zero(lo.n);
    if (pr.direct_objective) {
        const TrueLink tl = make_true(pr.sd);
        for (Eigen::Index k = 0; k < lo.k; ++k)
            grad_l += c0 * (tl.W.row(k) / tl.u[k] - tl.V.row(k) / tl.sigma[k]).transpose();
    }
    if (lo.off_t >= 0) grad_l.segment(lo.off_t, lo.k).array() += 1.0;

    Eigen::Index i = 0;
    double comp = 0.0, primal = 0.0;
    auto fold_constraint = [&](double gval, const Eigen::VectorXd& cgrad) {
        const double lam = lambdas[i++];
        grad_l += lam * cgrad;
        comp = std::max(comp, std::abs(lam * gval));
        primal = std::max(primal, -gval);
    };
    if (pr.relay_path) {
        const TrueLink tsr = make_true(pr.sr);
        const TrueLink trd = make_true(pr.rd);
        const Eigen::VectorXd rs = link_rate(pr.sr, p, pr.prefactor);
        const Eigen::VectorXd rr = link_rate(pr.rd, p, pr.prefactor);
        for (Eigen::Index k = 0; k < lo.k; ++k) {
            Eigen::VectorXd cg = c0 * (tsr.W.row(k) / tsr.u[k] - tsr.V.row(k) / tsr.sigma[k]).transpose();
            cg[lo.off_t + k] -= 1.0;
            fold_constraint(rs[k] - p.t[k], cg);
        }
        for (Eigen::Index k = 0; k < lo.k; ++k) {
            Eigen::VectorXd cg = c0 * (trd.W.row(k) / trd.u[k] - trd.V.row(k) / trd.sigma[k]).transpose();
            cg[lo.off_t + k] -= 1.0;
            fold_constraint(rr[k] - p.t[k], cg);
        }
    }
    {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(lo.n);
        double used = 0.0;
        if (lo.off_sr >= 0) { s.segment(lo.off_sr, lo.k).array() = -1.0; used += p.p_sr.sum(); }
        if (lo.off_sd >= 0) { s.segment(lo.off_sd, lo.k).array() = -1.0; used += p.p_sd.sum(); }
        fold_constraint(pr.budget_source - used, s);
    }
    if (lo.off_rd >= 0) {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(lo.n);
        s.segment(lo.off_rd, lo.k).array() = -1.0;
        fold_constraint(pr.budget_relay - p.p_rd.sum(), s);
    }
    for (Eigen::Index j = 0; j < lo.n_power; ++j) {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(lo.n);
        s[j] = 1.0;
        fold_constraint(z[j] - opts.power_floor, s);
    }
    const double dual = lambdas.size() ? std::max(0.0, -lambdas.minCoeff()) : 0.0;
    return std::max({grad_l.lpNorm<Eigen::Infinity>(), comp, primal, dual});
}

}  // namespace fdrs

#endif  // FDRS_SOLVER_HPP
