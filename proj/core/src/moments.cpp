#include "mbgk/moments.hpp"

#include <limits>
#include <string>

namespace mbgk {

namespace {

void check_shape(std::span<const double> f, const VelocityGrid& grid) {
    if (f.size() != grid.size())
        throw InvalidInput("moments: field has " + std::to_string(f.size()) + " values, grid has " +
                           std::to_string(grid.size()));
}

}  // namespace

SpeciesMoments species_moments(std::span<const double> f, const VelocityGrid& grid, const Species& species) {
    check_shape(f, grid);
    const int N = grid.nodes_per_axis();
    const auto w = grid.axis_weights();
    const auto x = grid.coords(0), y = grid.coords(1), z = grid.coords(2);
    const Vec3& c = grid.center();

    double s0 = 0.0;
    Vec3 s1{0.0, 0.0, 0.0};
    const double* p = f.data();
    for (int i = 0; i < N; ++i) {
        double a0 = 0.0, ay = 0.0, az = 0.0;
        for (int j = 0; j < N; ++j) {
            double r0 = 0.0, rz = 0.0;
            for (int l = 0; l < N; ++l) {
                const double v = w[l] * p[l];
                r0 += v;
                rz += v * (z[l] - c[2]);
            }
            p += N;
            a0 += w[j] * r0;
            ay += w[j] * r0 * (y[j] - c[1]);
            az += w[j] * rz;
        }
        s0 += w[i] * a0;
        s1[0] += w[i] * a0 * (x[i] - c[0]);
        s1[1] += w[i] * ay;
        s1[2] += w[i] * az;
    }

    SpeciesMoments m;
    const double vol = grid.cell_volume();
    m.n = s0 * vol;
    m.rho = species.mass * m.n;
    if (!(m.n > 0.0)) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        m.n = 0.0;
        m.rho = 0.0;
        m.u = {nan, nan, nan};
        m.T = nan;
        return m;
    }
    m.u = {c[0] + s1[0] / s0, c[1] + s1[1] / s0, c[2] + s1[2] / s0};

    double s2 = 0.0;
    p = f.data();
    for (int i = 0; i < N; ++i) {
        const double dx2 = (x[i] - m.u[0]) * (x[i] - m.u[0]);
        double plane = 0.0;
        for (int j = 0; j < N; ++j) {
            const double dxy2 = dx2 + (y[j] - m.u[1]) * (y[j] - m.u[1]);
            double row = 0.0;
            for (int l = 0; l < N; ++l) {
                const double dz = z[l] - m.u[2];
                row += w[l] * p[l] * (dxy2 + dz * dz);
            }
            p += N;
            plane += w[j] * row;
        }
        s2 += w[i] * plane;
    }
    m.T = species.mass / 3.0 * s2 / s0;
    return m;
}

MixtureState mixture_state(const SpeciesMoments& s1, const SpeciesMoments& s2) {
    const bool d1 = s1.defined(), d2 = s2.defined();
    if (!d1 && !d2) throw InvalidInput("mixture_state: vacuum mixture");
    if (!d1) return {s2.u, s2.T};
    if (!d2) return {s1.u, s1.T};
    const double rho = s1.rho + s2.rho;
    const double n = s1.n + s2.n;
    MixtureState mix;
    for (int p = 0; p < 3; ++p) mix.u[p] = (s1.rho * s1.u[p] + s2.rho * s2.u[p]) / rho;
    const Vec3 du = s1.u - s2.u;
    mix.T = (s1.n * s1.T + s2.n * s2.T) / n + (s1.rho * s2.rho / rho) * norm2(du) / (3.0 * n);
    return mix;
}

double mixture_temperature_energy_form(const SpeciesMoments& s1, const SpeciesMoments& s2) {
    const MixtureState mix = mixture_state(s1, s2);
    const double um2 = norm2(mix.u);
    double kinetic = 0.0;
    if (s1.defined()) kinetic += s1.rho * (norm2(s1.u) - um2);
    if (s2.defined()) kinetic += s2.rho * (norm2(s2.u) - um2);
    const double nt = (s1.defined() ? s1.n * s1.T : 0.0) + (s2.defined() ? s2.n * s2.T : 0.0);
    const double n = s1.n + s2.n;
    return nt / n + kinetic / (3.0 * n);
}

void maxwellian(std::span<double> out, const Species& species, double n, const Vec3& u, double T,
                const VelocityGrid& grid) {
    check_shape(out, grid);
    if (!(n > 0.0) || !(T > 0.0)) throw InvalidInput("maxwellian: n and T must be positive");
    const double a = species.mass / (2.0 * T);
    const double peak = n * std::pow(species.mass / (2.0 * constants::pi * T), 1.5);
    const int N = grid.nodes_per_axis();
    std::array<std::vector<double>, 3> e;
    for (int p = 0; p < 3; ++p) {
        const auto c = grid.coords(p);
        e[p].resize(N);
        for (int i = 0; i < N; ++i) e[p][i] = std::exp(-a * (c[i] - u[p]) * (c[i] - u[p]));
    }
    double* o = out.data();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double pij = peak * e[0][i] * e[1][j];
            for (int l = 0; l < N; ++l) *o++ = pij * e[2][l];
        }
}

std::vector<double> maxwellian(const Species& species, double n, const Vec3& u, double T,
                               const VelocityGrid& grid) {
    std::vector<double> out(grid.size());
    maxwellian(out, species, n, u, T, grid);
    return out;
}

}  // namespace mbgk
