#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "mbgk/exp_moments.hpp"
#include "mbgk/grid.hpp"
#include "mbgk/newton.hpp"

namespace mbgk {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Target exp(m (lam0 + lam1.v + lam2 |v|^2)) of one species.
struct IntraMultipliers {
    double lam0 = 0.0;
    Vec3 lam1{0.0, 0.0, 0.0};
    double lam2 = 0.0;

    Vec5 vector() const { return {lam0, lam1[0], lam1[1], lam1[2], lam2}; }
    static IntraMultipliers from(const Vec5& a) { return {a[0], {a[1], a[2], a[3]}, a[4]}; }
};

/// Pair of targets sharing lam1 and lam2; species i uses lam0 of its own side.
struct InterMultipliers {
    double lam0_12 = 0.0;
    double lam0_21 = 0.0;
    Vec3 lam1{0.0, 0.0, 0.0};
    double lam2 = 0.0;

    Vec6 vector() const { return {lam0_12, lam0_21, lam1[0], lam1[1], lam1[2], lam2}; }
    static InterMultipliers from(const Vec6& a) { return {a[0], a[1], {a[2], a[3], a[4]}, a[5]}; }
    IntraMultipliers side(int i) const { return {i == 0 ? lam0_12 : lam0_21, lam1, lam2}; }
};

/// Analytic coefficients of the Maxwellian M[n, u, T] for a species of the given mass.
IntraMultipliers maxwellian_multipliers(const Species& species, double n, const Vec3& u, double T);

/// A target stored in a well-conditioned frame:
/// B = exp(beta0 + kappa (beta1 . xi + beta2 |xi|^2)), xi = (v - frame.center) / frame.scale.
struct ScaledTarget {
    ScaledFrame frame;
    double kappa = 1.0;
    double beta0 = 0.0;
    Vec3 beta1{0.0, 0.0, 0.0};
    double beta2 = 0.0;
    bool active = false;  ///< false for a vacuum problem; the target is identically zero then

    QuadraticExponent exponent() const { return {beta0, kappa * beta1, kappa * beta2}; }
    /// Multipliers in the a = m (1, v, |v|^2) convention.
    IntraMultipliers physical(double mass) const;
    void evaluate(const VelocityGrid& grid, std::span<double> out) const;
};

struct DualReport {
    NewtonReport newton;
    double residual = 0.0;      ///< ||grad|| / ||mu|| in the scaled frame
    bool lam2_warning = false;  ///< the quadratic coefficient was not negative
};

struct IntraSolution {
    IntraMultipliers lambda;
    ScaledTarget target;
    DualReport report;
};

struct InterSolution {
    InterMultipliers lambda;
    std::array<ScaledTarget, 2> target;
    DualReport report;
};

struct DualOptions {
    NewtonOptions newton;
    double max_exponent = 700.0;
};

/// Minimizes sum w exp(lambda.a) - mu.lambda with mu = sum w G a for a = m (1, v, |v|^2).
/// `w` holds the nodal weights c nu (without quadrature factors).
IntraSolution solve_intra(std::span<const double> G, std::span<const double> w, const VelocityGrid& grid,
                          const Species& species, const IntraMultipliers* warm = nullptr,
                          const DualOptions& options = {});

/// Joint problem for the two cross-species targets.
InterSolution solve_inter(std::span<const double> G1, std::span<const double> G2, std::span<const double> w12,
                          std::span<const double> w21, const VelocityGrid& grid1, const VelocityGrid& grid2,
                          const Species& s1, const Species& s2, const InterMultipliers* warm = nullptr,
                          const DualOptions& options = {});

// Plain forms in the m (1, v, |v|^2) basis. They loop node by node and serve as references.

Vec5 assemble_intra_target(std::span<const double> G, std::span<const double> w, const VelocityGrid& grid,
                           const Species& species);
Vec6 assemble_inter_target(std::span<const double> G1, std::span<const double> G2, std::span<const double> w12,
                           std::span<const double> w21, const VelocityGrid& grid1, const VelocityGrid& grid2,
                           const Species& s1, const Species& s2);

struct Objective5 {
    double value = 0.0;
    Vec5 gradient = Vec5::Zero();
    Mat5 hessian = Mat5::Zero();
};
struct Objective6 {
    double value = 0.0;
    Vec6 gradient = Vec6::Zero();
    Mat6 hessian = Mat6::Zero();
};

Objective5 intra_objective(const Vec5& alpha, std::span<const double> w, const VelocityGrid& grid,
                           const Species& species, const Vec5& mu);
Objective6 inter_objective(const Vec6& alpha, std::span<const double> w12, std::span<const double> w21,
                           const VelocityGrid& grid1, const VelocityGrid& grid2, const Species& s1,
                           const Species& s2, const Vec6& mu);

std::vector<double> eval_target(const IntraMultipliers& lambda, const VelocityGrid& grid, const Species& species);
/// side 0 gives B_12 on grid 1, side 1 gives B_21 on grid 2.
std::vector<double> eval_target(const InterMultipliers& lambda, int side, const VelocityGrid& grid,
                                const Species& species);

}  // namespace mbgk
