#include "mbgk/transport.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace mbgk {

std::string_view to_string(Boundary b) {
    switch (b) {
        case Boundary::Periodic: return "periodic";
        case Boundary::Zero: return "zero";
        case Boundary::Copy: return "copy";
    }
    return "periodic";
}

Boundary parse_boundary(std::string_view s) {
    if (s == "periodic") return Boundary::Periodic;
    if (s == "zero") return Boundary::Zero;
    if (s == "copy") return Boundary::Copy;
    throw InvalidInput("unknown boundary rule '" + std::string(s) + "'");
}

void SpatialMesh::validate() const {
    if (cells < 1) throw InvalidInput("mesh needs at least one cell");
    if (!(x_max > x_min)) throw InvalidInput("mesh range is empty");
}

void apply_transport(const PhaseField& f, const SpatialMesh& mesh, const VelocityGrid& grid,
                     const FluxConfig& config, PhaseField& out) {
    const int K = mesh.cells;
    const std::size_t nodes = grid.size();
    if (f.cells() != static_cast<std::size_t>(K) || f.nodes() != nodes)
        throw InvalidInput("apply_transport: field shape does not match mesh and grid");
    if (out.cells() != f.cells() || out.nodes() != nodes) out = PhaseField(f.cells(), nodes);
    if (config.order != 1 && config.order != 2) throw InvalidInput("flux order must be 1 or 2");

    std::vector<double> zeros;
    if (mesh.boundary == Boundary::Zero) zeros.assign(nodes, 0.0);
    auto cell = [&](int k) -> const double* {
        if (k >= 0 && k < K) return f.cell(static_cast<std::size_t>(k)).data();
        switch (mesh.boundary) {
            case Boundary::Periodic: return f.cell(static_cast<std::size_t>(((k % K) + K) % K)).data();
            case Boundary::Copy: return f.cell(static_cast<std::size_t>(std::clamp(k, 0, K - 1))).data();
            case Boundary::Zero: return zeros.data();
        }
        return zeros.data();
    };

    const int N = grid.nodes_per_axis();
    const std::size_t block = static_cast<std::size_t>(N) * N;
    const auto v1 = grid.coords(0);
    const double inv_dx = 1.0 / mesh.dx();
    const int order = config.order;
    std::vector<double> prev(nodes), cur(nodes);

    auto flux = [&](int s, std::vector<double>& F) {
        const double* gm1 = cell(s - 2);
        const double* g0 = cell(s - 1);
        const double* g1 = cell(s);
        const double* g2 = cell(s + 1);
        for (int i = 0; i < N; ++i) {
            const double v = v1[i];
            const std::size_t base = static_cast<std::size_t>(i) * block;
            for (std::size_t r = base; r < base + block; ++r)
                F[r] = numerical_flux(gm1[r], g0[r], g1[r], g2[r], v, order);
        }
    };

    flux(0, prev);
    for (int s = 1; s <= K; ++s) {
        flux(s, cur);
        double* o = out.cell(static_cast<std::size_t>(s - 1)).data();
        for (std::size_t r = 0; r < nodes; ++r) o[r] = (cur[r] - prev[r]) * inv_dx;
        std::swap(prev, cur);
    }
}

double cfl_dt(const SpatialMesh& mesh, std::span<const VelocityGrid* const> grids, const FluxConfig& config) {
    double vmax = 0.0;
    for (const VelocityGrid* g : grids) vmax = std::max(vmax, g->max_abs_v1());
    if (!(vmax > 0.0)) throw InvalidInput("cfl_dt: zero velocity range");
    return 0.99 * config.cfl_alpha() * mesh.dx() / vmax;
}

}  // namespace mbgk
