#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mbgk/types.hpp"

namespace mbgk {

/// Tensor-product velocity grid with trapezoidal quadrature.
///
/// Nodes are stored with the v1 index slowest: q = (i*N + j)*N + l.
class VelocityGrid {
public:
    VelocityGrid(const Vec3& axis_min, const Vec3& axis_max, int nodes_per_axis);

    int nodes_per_axis() const noexcept { return n_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_ * n_; }
    const Vec3& axis_min() const noexcept { return min_; }
    const Vec3& axis_max() const noexcept { return max_; }
    const Vec3& center() const noexcept { return center_; }
    const Vec3& dv() const noexcept { return dv_; }
    double cell_volume() const noexcept { return dv_[0] * dv_[1] * dv_[2]; }

    std::span<const double> coords(int axis) const { return coords_[static_cast<std::size_t>(axis)]; }
    /// One-dimensional trapezoid weights, 1/2 at the endpoints.
    std::span<const double> axis_weights() const { return w1_; }
    /// Per-node omega_q * dv^3.
    std::span<const double> quadrature() const { return quad_; }

    std::size_t index(int i, int j, int l) const noexcept {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + l;
    }
    Vec3 node(std::size_t q) const;
    double weight(std::size_t q) const;

    /// Sum of omega_q * values_q * dv^3, accumulated row by row.
    double integrate(std::span<const double> values) const;

    double max_abs_v1() const noexcept;
    bool operator==(const VelocityGrid& other) const noexcept;

private:
    int n_;
    Vec3 min_, max_, center_, dv_;
    std::array<std::vector<double>, 3> coords_;
    std::vector<double> w1_;
    std::vector<double> quad_;
};

/// Grid over u_mix +- 6 sqrt(T_mix/m) per axis.
VelocityGrid build_grid(const Species& species, const Vec3& u_mix, double T_mix, int nodes_per_axis);

inline double integrate(const VelocityGrid& grid, std::span<const double> values) {
    return grid.integrate(values);
}

}  // namespace mbgk
