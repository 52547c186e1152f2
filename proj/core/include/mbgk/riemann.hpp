#pragma once

#include <span>
#include <vector>

namespace mbgk {

/// Primitive state of the 1D Euler equations.
struct EulerState {
    double rho = 1.0;
    double u = 0.0;
    double p = 1.0;
};

/// Exact solution of the Riemann problem for a polytropic gas.
class ExactRiemann {
public:
    ExactRiemann(EulerState left, EulerState right, double gamma = 5.0 / 3.0);

    double p_star() const noexcept { return p_star_; }
    double u_star() const noexcept { return u_star_; }
    /// |f(p*)| relative to the velocity jump scale, after the pressure iteration.
    double residual() const noexcept { return residual_; }

    /// State on the ray x/t = s.
    EulerState sample(double s) const;
    /// Samples at x (interface at x0) and time t > 0.
    std::vector<EulerState> sample(std::span<const double> x, double x0, double t) const;

    /// Characteristic speeds bounding the wave fan: left head/tail (equal for a shock), contact,
    /// right tail/head.
    std::vector<double> wave_speeds() const;

private:
    double pressure_function(double p, const EulerState& s, double c, double& deriv) const;

    EulerState L_, R_;
    double gamma_;
    double cL_, cR_;
    double p_star_ = 0.0, u_star_ = 0.0, residual_ = 0.0;
};

}  // namespace mbgk
