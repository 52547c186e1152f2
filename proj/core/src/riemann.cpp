#include "mbgk/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "mbgk/types.hpp"

namespace mbgk {

ExactRiemann::ExactRiemann(EulerState left, EulerState right, double gamma) : L_(left), R_(right), gamma_(gamma) {
    if (!(L_.rho > 0.0 && R_.rho > 0.0 && L_.p > 0.0 && R_.p > 0.0))
        throw InvalidInput("riemann: densities and pressures must be positive");
    cL_ = std::sqrt(gamma_ * L_.p / L_.rho);
    cR_ = std::sqrt(gamma_ * R_.p / R_.rho);
    const double du = R_.u - L_.u;
    if (2.0 / (gamma_ - 1.0) * (cL_ + cR_) <= du) throw InvalidInput("riemann: initial data generate vacuum");

    // Two-rarefaction guess, then Newton on f_L(p) + f_R(p) + du = 0.
    const double z = (gamma_ - 1.0) / (2.0 * gamma_);
    double p = std::pow((cL_ + cR_ - 0.5 * (gamma_ - 1.0) * du) / (cL_ / std::pow(L_.p, z) + cR_ / std::pow(R_.p, z)),
                        1.0 / z);
    p = std::max(p, 1e-14 * std::min(L_.p, R_.p));
    double f = 0.0;
    for (int it = 0; it < 200; ++it) {
        double dL, dR;
        f = pressure_function(p, L_, cL_, dL) + pressure_function(p, R_, cR_, dR) + du;
        const double step = f / (dL + dR);
        double next = p - step;
        if (next <= 0.0) next = 0.5 * p;
        const double change = std::abs(next - p) / (0.5 * (next + p));
        p = next;
        if (change < 1e-15) break;
    }
    double dL, dR;
    const double fL = pressure_function(p, L_, cL_, dL);
    const double fR = pressure_function(p, R_, cR_, dR);
    p_star_ = p;
    u_star_ = 0.5 * (L_.u + R_.u) + 0.5 * (fR - fL);
    residual_ = std::abs(fL + fR + du) / (cL_ + cR_);
}

double ExactRiemann::pressure_function(double p, const EulerState& s, double c, double& deriv) const {
    const double g = gamma_;
    if (p > s.p) {
        const double A = 2.0 / ((g + 1.0) * s.rho);
        const double B = (g - 1.0) / (g + 1.0) * s.p;
        const double q = std::sqrt(A / (p + B));
        deriv = q * (1.0 - 0.5 * (p - s.p) / (p + B));
        return (p - s.p) * q;
    }
    const double r = p / s.p;
    deriv = std::pow(r, -(g + 1.0) / (2.0 * g)) / (s.rho * c);
    return 2.0 * c / (g - 1.0) * (std::pow(r, (g - 1.0) / (2.0 * g)) - 1.0);
}

EulerState ExactRiemann::sample(double s) const {
    const double g = gamma_;
    const double gm = (g - 1.0) / (g + 1.0);
    if (s <= u_star_) {
        const EulerState& W = L_;
        const double c = cL_;
        if (p_star_ > W.p) {
            const double r = p_star_ / W.p;
            const double S = W.u - c * std::sqrt((g + 1.0) / (2.0 * g) * r + (g - 1.0) / (2.0 * g));
            if (s <= S) return W;
            return {W.rho * (r + gm) / (gm * r + 1.0), u_star_, p_star_};
        }
        const double head = W.u - c;
        const double c_star = c * std::pow(p_star_ / W.p, (g - 1.0) / (2.0 * g));
        const double tail = u_star_ - c_star;
        if (s <= head) return W;
        if (s >= tail) return {W.rho * std::pow(p_star_ / W.p, 1.0 / g), u_star_, p_star_};
        const double k = 2.0 / (g + 1.0) + gm / c * (W.u - s);
        return {W.rho * std::pow(k, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * W.u + s),
                W.p * std::pow(k, 2.0 * g / (g - 1.0))};
    }
    const EulerState& W = R_;
    const double c = cR_;
    if (p_star_ > W.p) {
        const double r = p_star_ / W.p;
        const double S = W.u + c * std::sqrt((g + 1.0) / (2.0 * g) * r + (g - 1.0) / (2.0 * g));
        if (s >= S) return W;
        return {W.rho * (r + gm) / (gm * r + 1.0), u_star_, p_star_};
    }
    const double head = W.u + c;
    const double c_star = c * std::pow(p_star_ / W.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ + c_star;
    if (s >= head) return W;
    if (s <= tail) return {W.rho * std::pow(p_star_ / W.p, 1.0 / g), u_star_, p_star_};
    const double k = 2.0 / (g + 1.0) - gm / c * (W.u - s);
    return {W.rho * std::pow(k, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * W.u + s),
            W.p * std::pow(k, 2.0 * g / (g - 1.0))};
}

std::vector<EulerState> ExactRiemann::sample(std::span<const double> x, double x0, double t) const {
    if (!(t > 0.0)) throw InvalidInput("riemann: sample time must be positive");
    std::vector<EulerState> out;
    out.reserve(x.size());
    for (double xi : x) out.push_back(sample((xi - x0) / t));
    return out;
}

std::vector<double> ExactRiemann::wave_speeds() const {
    const double g = gamma_;
    std::vector<double> s;
    if (p_star_ > L_.p) {
        s.push_back(L_.u - cL_ * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / L_.p + (g - 1.0) / (2.0 * g)));
    } else {
        s.push_back(L_.u - cL_);
        s.push_back(u_star_ - cL_ * std::pow(p_star_ / L_.p, (g - 1.0) / (2.0 * g)));
    }
    s.push_back(u_star_);
    if (p_star_ > R_.p) {
        s.push_back(R_.u + cR_ * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / R_.p + (g - 1.0) / (2.0 * g)));
    } else {
        s.push_back(u_star_ + cR_ * std::pow(p_star_ / R_.p, (g - 1.0) / (2.0 * g)));
        s.push_back(R_.u + cR_);
    }
    return s;
}

}  // namespace mbgk
