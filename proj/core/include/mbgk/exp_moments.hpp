#pragma once

#include <array>
#include <span>
#include <vector>

#include "mbgk/grid.hpp"

namespace mbgk {

/// Affine change of velocity variables xi = (v - center) / scale.
struct ScaledFrame {
    Vec3 center{0.0, 0.0, 0.0};
    double scale = 1.0;

    std::array<std::vector<double>, 3> axes(const VelocityGrid& grid) const;
};

/// Sums of W_q exp(z(xi_q)) times the monomials
/// 1, xi1, xi2, xi3, xi1^2, xi1 xi2, xi1 xi3, xi2^2, xi2 xi3, xi3^2, xi_p |xi|^2 (p=1..3), |xi|^4
/// where z = z0 + sum_p (a_p xi_p + b xi_p^2).
struct ExpMoments {
    std::array<double, 14> s{};

    double mass() const { return s[0]; }
    double first(int p) const { return s[1 + p]; }
    double second(int p, int r) const;
    double energy() const { return s[4] + s[7] + s[9]; }
    double energy_flux(int p) const { return s[10 + p]; }
    double fourth() const { return s[13]; }
};

/// Exponent parameters in the scaled variables.
struct QuadraticExponent {
    double z0 = 0.0;
    Vec3 a{0.0, 0.0, 0.0};
    double b = 0.0;
};

/// Computes ExpMoments over the tensor grid with per-node weights W using per-axis exponentials.
/// Returns false when the largest exponent exceeds max_exponent (nothing is written then).
bool exp_moments(const std::array<std::vector<double>, 3>& xi, std::span<const double> W,
                 const QuadraticExponent& e, ExpMoments& out, double max_exponent = 700.0);

/// Writes exp(z(xi_q)) for every node. Returns false on overflow.
bool exp_values(const std::array<std::vector<double>, 3>& xi, const QuadraticExponent& e,
                std::span<double> out, double max_exponent = 700.0);

/// Weighted moments sum_q W_q G_q {1, xi, |xi|^2} with the same row-blocked order as exp_moments.
struct WeightedMoments {
    double m0 = 0.0;
    Vec3 m1{0.0, 0.0, 0.0};
    double m2 = 0.0;
};
WeightedMoments weighted_moments(const std::array<std::vector<double>, 3>& xi, std::span<const double> W,
                                 std::span<const double> G);

}  // namespace mbgk
