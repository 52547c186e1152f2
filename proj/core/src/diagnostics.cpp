#include "mbgk/diagnostics.hpp"

#include <algorithm>
#include <string>

namespace mbgk {

namespace {

void check_fields(const FieldPair& f, const GridPair& grids) {
    for (int i = 0; i < 2; ++i)
        if (f[i].nodes() != grids[i]->size()) throw InvalidInput("field does not match its velocity grid");
    if (f[0].cells() != f[1].cells()) throw InvalidInput("species fields have different cell counts");
}

struct CellSums {
    double m0 = 0.0;
    Vec3 m1{0.0, 0.0, 0.0};
    double m2 = 0.0;
};

CellSums cell_sums(std::span<const double> f, const VelocityGrid& grid) {
    const int N = grid.nodes_per_axis();
    const auto w = grid.axis_weights();
    const auto x = grid.coords(0), y = grid.coords(1), z = grid.coords(2);
    CellSums s;
    const double* p = f.data();
    for (int i = 0; i < N; ++i) {
        double a0 = 0.0, ay = 0.0, az = 0.0, a2 = 0.0;
        for (int j = 0; j < N; ++j, p += N) {
            double r0 = 0.0, rz = 0.0, rz2 = 0.0;
            for (int l = 0; l < N; ++l) {
                const double t = w[l] * p[l];
                r0 += t;
                rz += t * z[l];
                rz2 += t * z[l] * z[l];
            }
            a0 += w[j] * r0;
            ay += w[j] * r0 * y[j];
            az += w[j] * rz;
            a2 += w[j] * (r0 * y[j] * y[j] + rz2);
        }
        s.m0 += w[i] * a0;
        s.m1[0] += w[i] * a0 * x[i];
        s.m1[1] += w[i] * ay;
        s.m1[2] += w[i] * az;
        s.m2 += w[i] * (a0 * x[i] * x[i] + a2);
    }
    const double vol = grid.cell_volume();
    s.m0 *= vol;
    s.m1 = vol * s.m1;
    s.m2 *= vol;
    return s;
}

}  // namespace

ConservedTotals conserved_totals(const FieldPair& f, const SpatialMesh& mesh, const GridPair& grids,
                                 const SpeciesPair& species) {
    check_fields(f, grids);
    ConservedTotals t;
    const double dx = mesh.dx();
    for (int i = 0; i < 2; ++i) {
        const double m = species[i].mass;
        for (std::size_t k = 0; k < f[i].cells(); ++k) {
            const CellSums s = cell_sums(f[i].cell(k), *grids[i]);
            t.mass[i] += m * s.m0 * dx;
            for (int p = 0; p < 3; ++p) t.momentum[p] += m * s.m1[p] * dx;
            t.energy += 0.5 * m * s.m2 * dx;
        }
    }
    return t;
}

MixtureState global_mixture(const ConservedTotals& t, const SpeciesPair& species) {
    const double rho = t.mass[0] + t.mass[1];
    const double n = t.mass[0] / species[0].mass + t.mass[1] / species[1].mass;
    if (!(rho > 0.0)) throw InvalidInput("global_mixture: empty domain");
    MixtureState mix;
    mix.u = (1.0 / rho) * t.momentum;
    mix.T = (2.0 * t.energy - rho * norm2(mix.u)) / (3.0 * n);
    return mix;
}

double max_relative_drift(const ConservedTotals& a, const ConservedTotals& b) {
    auto rel = [](double x, double y, double scale) { return scale > 0.0 ? std::abs(x - y) / scale : 0.0; };
    double d = 0.0;
    for (int i = 0; i < 2; ++i) d = std::max(d, rel(a.mass[i], b.mass[i], std::abs(a.mass[i])));
    // Momentum components are compared against the momentum magnitude scale sqrt(2 rho E).
    const double rho = a.mass[0] + a.mass[1];
    const double pscale = std::max(std::sqrt(norm2(a.momentum)), std::sqrt(std::max(0.0, 2.0 * rho * a.energy)));
    for (int p = 0; p < 3; ++p) d = std::max(d, rel(a.momentum[p], b.momentum[p], pscale));
    d = std::max(d, rel(a.energy, b.energy, std::abs(a.energy)));
    return d;
}

double entropy(const FieldPair& f, const SpatialMesh& mesh, const GridPair& grids) {
    check_fields(f, grids);
    double H = 0.0;
    for (int i = 0; i < 2; ++i) {
        const auto quad = grids[i]->quadrature();
        for (std::size_t k = 0; k < f[i].cells(); ++k) {
            const auto c = f[i].cell(k);
            double s = 0.0;
            for (std::size_t q = 0; q < c.size(); ++q) {
                if (c[q] < 0.0) throw InvalidInput("entropy: negative distribution value");
                s += quad[q] * entropy_density(c[q]);
            }
            H += s * mesh.dx();
        }
    }
    return H;
}

EntropyRecord EntropyTracker::record(double H, double dt) {
    EntropyRecord r{H, 0.0};
    if (has_previous_ && dt > 0.0) r.dH_dt = (H - previous_) / dt;
    has_previous_ = true;
    previous_ = H;
    return r;
}

std::array<double, 2> l1_self_error(const FieldPair& coarse, const FieldPair& fine, const SpatialMesh& coarse_mesh,
                                    const GridPair& grids) {
    check_fields(coarse, grids);
    check_fields(fine, grids);
    if (fine[0].cells() != 2 * coarse[0].cells()) throw InvalidInput("l1_self_error: fine run needs twice the cells");
    std::array<double, 2> err{0.0, 0.0};
    for (int i = 0; i < 2; ++i) {
        const double vol = grids[i]->cell_volume();
        for (std::size_t k = 0; k < coarse[i].cells(); ++k) {
            const auto c = coarse[i].cell(k);
            const auto a = fine[i].cell(2 * k);
            const auto b = fine[i].cell(2 * k + 1);
            double s = 0.0;
            for (std::size_t q = 0; q < c.size(); ++q) s += std::abs(c[q] - 0.5 * (a[q] + b[q]));
            err[i] += s * vol * coarse_mesh.dx();
        }
    }
    return err;
}

std::vector<double> relative_difference(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidInput("relative_difference: size mismatch");
    std::vector<double> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = relative_difference(a[k], b[k]);
    return r;
}

std::vector<std::array<SpeciesMoments, 2>> cell_moments(const FieldPair& f, const GridPair& grids,
                                                        const SpeciesPair& species) {
    check_fields(f, grids);
    std::vector<std::array<SpeciesMoments, 2>> out(f[0].cells());
    for (std::size_t k = 0; k < out.size(); ++k)
        for (int i = 0; i < 2; ++i) out[k][i] = species_moments(f[i].cell(k), *grids[i], species[i]);
    return out;
}

}  // namespace mbgk
