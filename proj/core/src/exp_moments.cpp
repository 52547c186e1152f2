#include "mbgk/exp_moments.hpp"

#include <algorithm>
#include <cmath>

namespace mbgk {

std::array<std::vector<double>, 3> ScaledFrame::axes(const VelocityGrid& grid) const {
    std::array<std::vector<double>, 3> xi;
    const double inv = 1.0 / scale;
    for (int p = 0; p < 3; ++p) {
        const auto c = grid.coords(p);
        xi[p].resize(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) xi[p][i] = (c[i] - center[p]) * inv;
    }
    return xi;
}

double ExpMoments::second(int p, int r) const {
    static constexpr int idx[3][3] = {{4, 5, 6}, {5, 7, 8}, {6, 8, 9}};
    return s[idx[p][r]];
}

namespace {

/// Per-axis factors exp(a xi + b xi^2 - peak) and the peak exponent.
double axis_factors(const std::vector<double>& xi, double a, double b, std::vector<double>& out) {
    out.resize(xi.size());
    double peak = -HUGE_VAL;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        out[i] = a * xi[i] + b * xi[i] * xi[i];
        peak = std::max(peak, out[i]);
    }
    for (double& v : out) v = std::exp(v - peak);
    return peak;
}

struct Factors {
    std::array<std::vector<double>, 3> e;
    double log_scale = 0.0;
};

bool build_factors(const std::array<std::vector<double>, 3>& xi, const QuadraticExponent& q, Factors& f,
                   double max_exponent) {
    f.log_scale = q.z0;
    for (int p = 0; p < 3; ++p) f.log_scale += axis_factors(xi[p], q.a[p], q.b, f.e[p]);
    return std::isfinite(f.log_scale) && f.log_scale <= max_exponent;
}

}  // namespace

bool exp_moments(const std::array<std::vector<double>, 3>& xi, std::span<const double> W,
                 const QuadraticExponent& e, ExpMoments& out, double max_exponent) {
    thread_local Factors f;
    if (!build_factors(xi, e, f, max_exponent)) return false;
    const int N = static_cast<int>(xi[0].size());
    const double* x = xi[0].data();
    const double* y = xi[1].data();
    const double* z = xi[2].data();
    const double* ez = f.e[2].data();
    const double scale = std::exp(f.log_scale);

    std::array<double, 14> total{};
    const double* w = W.data();
    for (int i = 0; i < N; ++i) {
        std::array<double, 14> plane{};
        const double xi1 = x[i];
        for (int j = 0; j < N; ++j, w += N) {
            double r0 = 0.0, r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
#pragma omp simd reduction(+ : r0, r1, r2, r3, r4)
            for (int l = 0; l < N; ++l) {
                const double t = w[l] * ez[l];
                const double zl = z[l];
                const double z2 = zl * zl;
                r0 += t;
                r1 += t * zl;
                r2 += t * z2;
                r3 += t * z2 * zl;
                r4 += t * z2 * z2;
            }
            const double yf = f.e[1][j];
            r0 *= yf; r1 *= yf; r2 *= yf; r3 *= yf; r4 *= yf;
            const double xi2 = y[j];
            const double rho2 = xi1 * xi1 + xi2 * xi2;
            plane[0] += r0;
            plane[1] += xi1 * r0;
            plane[2] += xi2 * r0;
            plane[3] += r1;
            plane[4] += xi1 * xi1 * r0;
            plane[5] += xi1 * xi2 * r0;
            plane[6] += xi1 * r1;
            plane[7] += xi2 * xi2 * r0;
            plane[8] += xi2 * r1;
            plane[9] += r2;
            const double e2 = rho2 * r0 + r2;
            plane[10] += xi1 * e2;
            plane[11] += xi2 * e2;
            plane[12] += rho2 * r1 + r3;
            plane[13] += rho2 * rho2 * r0 + 2.0 * rho2 * r2 + r4;
        }
        const double xf = f.e[0][i];
        for (int k = 0; k < 14; ++k) total[k] += xf * plane[k];
    }
    for (int k = 0; k < 14; ++k) out.s[k] = scale * total[k];
    return true;
}

bool exp_values(const std::array<std::vector<double>, 3>& xi, const QuadraticExponent& e, std::span<double> out,
                double max_exponent) {
    thread_local Factors f;
    if (!build_factors(xi, e, f, max_exponent)) return false;
    const int N = static_cast<int>(xi[0].size());
    const double scale = std::exp(f.log_scale);
    double* o = out.data();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double r = scale * f.e[0][i] * f.e[1][j];
            const double* ez = f.e[2].data();
            for (int l = 0; l < N; ++l) *o++ = r * ez[l];
        }
    return true;
}

WeightedMoments weighted_moments(const std::array<std::vector<double>, 3>& xi, std::span<const double> W,
                                 std::span<const double> G) {
    const int N = static_cast<int>(xi[0].size());
    const double* x = xi[0].data();
    const double* y = xi[1].data();
    const double* z = xi[2].data();
    WeightedMoments m;
    const double* w = W.data();
    const double* g = G.data();
    for (int i = 0; i < N; ++i) {
        double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0, pe = 0.0;
        for (int j = 0; j < N; ++j, w += N, g += N) {
            double r0 = 0.0, r1 = 0.0, r2 = 0.0;
#pragma omp simd reduction(+ : r0, r1, r2)
            for (int l = 0; l < N; ++l) {
                const double t = w[l] * g[l];
                r0 += t;
                r1 += t * z[l];
                r2 += t * z[l] * z[l];
            }
            p0 += r0;
            p2 += y[j] * r0;
            p3 += r1;
            pe += y[j] * y[j] * r0 + r2;
        }
        m.m0 += p0;
        p1 = x[i] * p0;
        m.m1[0] += p1;
        m.m1[1] += p2;
        m.m1[2] += p3;
        m.m2 += x[i] * x[i] * p0 + pe;
    }
    return m;
}

}  // namespace mbgk
