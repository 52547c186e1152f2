#include "mbgk/grid.hpp"

#include <algorithm>
#include <string>

namespace mbgk {

void Species::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidInput("species mass must be positive");
    if (charge_number < 0) throw InvalidInput("charge number must be non-negative");
}

VelocityGrid::VelocityGrid(const Vec3& axis_min, const Vec3& axis_max, int nodes_per_axis)
    : n_(nodes_per_axis), min_(axis_min), max_(axis_max) {
    if (n_ < 2) throw InvalidInput("velocity grid needs at least 2 nodes per axis");
    for (int p = 0; p < 3; ++p) {
        if (!(max_[p] > min_[p]) || !std::isfinite(max_[p] - min_[p]))
            throw InvalidInput("velocity axis " + std::to_string(p) + " has empty range");
        center_[p] = 0.5 * (min_[p] + max_[p]);
        dv_[p] = (max_[p] - min_[p]) / (n_ - 1);
        auto& c = coords_[p];
        c.resize(n_);
        const double mid = 0.5 * (n_ - 1);
        for (int i = 0; i < n_; ++i) c[i] = center_[p] + (i - mid) * dv_[p];
    }
    w1_.assign(n_, 1.0);
    w1_.front() = 0.5;
    w1_.back() = 0.5;

    quad_.resize(size());
    const double vol = cell_volume();
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int l = 0; l < n_; ++l) quad_[index(i, j, l)] = w1_[i] * w1_[j] * w1_[l] * vol;
}

Vec3 VelocityGrid::node(std::size_t q) const {
    const auto n = static_cast<std::size_t>(n_);
    const std::size_t l = q % n, j = (q / n) % n, i = q / (n * n);
    return {coords_[0][i], coords_[1][j], coords_[2][l]};
}

double VelocityGrid::weight(std::size_t q) const {
    const auto n = static_cast<std::size_t>(n_);
    return w1_[q / (n * n)] * w1_[(q / n) % n] * w1_[q % n];
}

double VelocityGrid::integrate(std::span<const double> values) const {
    if (values.size() != size())
        throw InvalidInput("integrate: expected " + std::to_string(size()) + " values, got " +
                           std::to_string(values.size()));
    double total = 0.0;
    const double* v = values.data();
    for (int i = 0; i < n_; ++i) {
        double plane = 0.0;
        for (int j = 0; j < n_; ++j) {
            double row = 0.0;
            for (int l = 0; l < n_; ++l) row += w1_[l] * v[l];
            v += n_;
            plane += w1_[j] * row;
        }
        total += w1_[i] * plane;
    }
    return total * cell_volume();
}

double VelocityGrid::max_abs_v1() const noexcept {
    return std::max(std::abs(min_[0]), std::abs(max_[0]));
}

bool VelocityGrid::operator==(const VelocityGrid& other) const noexcept {
    return n_ == other.n_ && min_ == other.min_ && max_ == other.max_;
}

VelocityGrid build_grid(const Species& species, const Vec3& u_mix, double T_mix, int nodes_per_axis) {
    species.validate();
    if (!(T_mix > 0.0) || !std::isfinite(T_mix)) throw InvalidInput("build_grid: T_mix must be positive");
    const double half = 6.0 * std::sqrt(T_mix / species.mass);
    return VelocityGrid({u_mix[0] - half, u_mix[1] - half, u_mix[2] - half},
                        {u_mix[0] + half, u_mix[1] + half, u_mix[2] + half}, nodes_per_axis);
}

}  // namespace mbgk
