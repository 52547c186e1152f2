#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>

#include "mbgk/field.hpp"
#include "mbgk/grid.hpp"

namespace mbgk {

enum class Boundary { Periodic, Zero, Copy };

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view s);

/// Uniform 1D mesh of `cells` cells on [x_min, x_max].
struct SpatialMesh {
    double x_min = 0.0;
    double x_max = 1.0;
    int cells = 1;
    Boundary boundary = Boundary::Periodic;

    double dx() const noexcept { return (x_max - x_min) / cells; }
    double center(int k) const noexcept { return x_min + (k + 0.5) * dx(); }
    /// A single periodic cell: transport vanishes identically.
    bool homogeneous() const noexcept { return cells == 1 && boundary == Boundary::Periodic; }
    void validate() const;
    bool operator==(const SpatialMesh&) const = default;
};

struct FluxConfig {
    int order = 1;  ///< 1: upwind, 2: minmod-limited

    double cfl_alpha() const noexcept { return order == 2 ? 2.0 / 3.0 : 1.0; }
};

/// s min(|a|,|b|,|c|) when a, b, c share the sign s, else 0.
inline double minmod3(double a, double b, double c) {
    if (a > 0.0 && b > 0.0 && c > 0.0) return std::min(a, std::min(b, c));
    if (a < 0.0 && b < 0.0 && c < 0.0) return std::max(a, std::max(b, c));
    return 0.0;
}

/// Flux at k+1/2 from g_{k-1}, g_k, g_{k+1}, g_{k+2}.
inline double numerical_flux(double gm1, double g0, double g1, double g2, double v1, int order) {
    const double phi = order == 2 ? minmod3(g0 - gm1, g1 - g0, g2 - g1) : 0.0;
    // Upwind form of v/2 (g1 + g0) - |v|/2 (g1 - g0 - phi); it avoids cancellation against a large neighbour.
    return v1 >= 0.0 ? v1 * (g0 + 0.5 * phi) : v1 * (g1 - 0.5 * phi);
}

/// out_k = (F_{k+1/2} - F_{k-1/2}) / dx for every cell and node.
void apply_transport(const PhaseField& f, const SpatialMesh& mesh, const VelocityGrid& grid,
                     const FluxConfig& config, PhaseField& out);

/// 0.99 alpha dx / max|v1| over all given grids.
double cfl_dt(const SpatialMesh& mesh, std::span<const VelocityGrid* const> grids, const FluxConfig& config);

}  // namespace mbgk
