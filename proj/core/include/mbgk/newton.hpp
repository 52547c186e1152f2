#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "mbgk/types.hpp"

namespace mbgk {

struct NewtonOptions {
    double tolerance = 1e-14;       ///< shared by the absolute, relative and step criteria
    int max_iterations = 200;
    double armijo = 1e-4;
    double shrink = 0.5;
    int max_backtracks = 50;
    /// Accept a stalled line search when the residual is already below this value.
    double stagnation_tolerance = 1e-10;
};

enum class NewtonStatus { AbsoluteResidual, RelativeResidual, StepSize, Stagnated };

struct NewtonReport {
    int iterations = 0;
    int backtracks = 0;
    double residual = 0.0;
    double initial_residual = 0.0;
    NewtonStatus status = NewtonStatus::AbsoluteResidual;
};

/// Damped Newton iteration for grad psi(x) = 0 with a backtracking line search on ||grad psi||^2.
///
/// eval(x, g, H) fills the gradient and Hessian and returns false when x is not admissible
/// (exponent overflow). solve(H, rhs, d) solves H d = rhs and returns false when H is singular.
template <int D, class Eval, class Solve>
NewtonReport newton_solve(Eigen::Matrix<double, D, 1>& x, Eval&& eval, Solve&& solve,
                          const NewtonOptions& opt = {}) {
    using Vec = Eigen::Matrix<double, D, 1>;
    using Mat = Eigen::Matrix<double, D, D>;
    Vec g, gt, d, xt;
    Mat H, Ht;
    if (!eval(x, g, H) || !g.allFinite()) throw SolverFailure("newton: initial point not admissible");

    NewtonReport rep;
    rep.initial_residual = g.norm();
    double r = rep.initial_residual;
    for (;;) {
        rep.residual = r;
        if (r < opt.tolerance) {
            rep.status = NewtonStatus::AbsoluteResidual;
            return rep;
        }
        if (rep.iterations > 0 && r < opt.tolerance * rep.initial_residual) {
            rep.status = NewtonStatus::RelativeResidual;
            return rep;
        }
        if (rep.iterations >= opt.max_iterations)
            throw SolverFailure("newton: iteration limit reached", r, rep.iterations);
        if (!solve(H, Vec(-g), d) || !d.allFinite())
            throw SolverFailure("newton: singular Hessian", r, rep.iterations);
        ++rep.iterations;
        if (d.norm() < opt.tolerance * x.norm()) {
            x += d;
            rep.status = NewtonStatus::StepSize;
            return rep;
        }

        const double merit = r * r;
        double t = 1.0;
        bool accepted = false;
        for (int k = 0; k <= opt.max_backtracks; ++k) {
            xt = x + t * d;
            if (eval(xt, gt, Ht) && gt.allFinite()) {
                const double rt = gt.norm();
                if (rt * rt <= (1.0 - 2.0 * opt.armijo * t) * merit) {
                    accepted = true;
                    x = xt;
                    g = gt;
                    H = Ht;
                    r = rt;
                    break;
                }
            }
            t *= opt.shrink;
            ++rep.backtracks;
        }
        if (!accepted) {
            if (r <= opt.stagnation_tolerance) {
                rep.status = NewtonStatus::Stagnated;
                return rep;
            }
            throw SolverFailure("newton: line search failed", r, rep.iterations);
        }
    }
}

}  // namespace mbgk
