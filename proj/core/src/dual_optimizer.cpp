#include "mbgk/dual_optimizer.hpp"

#include <cmath>
#include <string>

namespace mbgk {

namespace {

void check(std::span<const double> v, const VelocityGrid& grid, const char* what) {
    if (v.size() != grid.size())
        throw InvalidInput(std::string(what) + ": expected " + std::to_string(grid.size()) + " values");
}

/// v_th of the grid: its half-width over six.
double grid_scale(const VelocityGrid& grid) { return grid.dv()[0] * (grid.nodes_per_axis() - 1) / 12.0; }

double fill_weights(const VelocityGrid& grid, std::span<const double> w, std::vector<double>& W) {
    const auto quad = grid.quadrature();
    W.resize(quad.size());
    double sum = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
        W[q] = quad[q] * w[q];
        sum += W[q];
    }
    return sum;
}

void normalize(std::vector<double>& W, double total) {
    const double inv = 1.0 / total;
    for (double& v : W) v *= inv;
}

/// Physical multipliers -> scaled coefficients for frame (c, s) and factor kappa.
void to_scaled(const IntraMultipliers& lam, double mass, const ScaledFrame& f, double kappa, double& beta0,
               Vec3& beta1, double& beta2) {
    const Vec3& c = f.center;
    const double s = f.scale;
    beta2 = mass * lam.lam2 * s * s / kappa;
    for (int p = 0; p < 3; ++p) beta1[p] = mass * s * (lam.lam1[p] + 2.0 * lam.lam2 * c[p]) / kappa;
    beta0 = mass * (lam.lam0 + dot(lam.lam1, c) + lam.lam2 * norm2(c));
}

bool llt_or_ldlt5(const Mat5& H, const Vec5& rhs, Vec5& d) {
    Eigen::LLT<Mat5> llt(H);
    if (llt.info() == Eigen::Success) {
        d = llt.solve(rhs);
        return true;
    }
    Eigen::LDLT<Mat5> ldlt(H);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
    d = ldlt.solve(rhs);
    return true;
}

struct Thread {
    std::array<std::vector<double>, 2> W;
};
thread_local Thread tls;

}  // namespace

IntraMultipliers maxwellian_multipliers(const Species& species, double n, const Vec3& u, double T) {
    const double m = species.mass;
    IntraMultipliers lam;
    lam.lam2 = -1.0 / (2.0 * T);
    lam.lam1 = (1.0 / T) * u;
    lam.lam0 = (std::log(n * std::pow(m / (2.0 * constants::pi * T), 1.5)) - m * norm2(u) / (2.0 * T)) / m;
    return lam;
}

IntraMultipliers ScaledTarget::physical(double mass) const {
    const Vec3& c = frame.center;
    const double s = frame.scale;
    IntraMultipliers lam;
    lam.lam2 = kappa * beta2 / (mass * s * s);
    for (int p = 0; p < 3; ++p) lam.lam1[p] = kappa * beta1[p] / (mass * s) - 2.0 * lam.lam2 * c[p];
    lam.lam0 = beta0 / mass - dot(lam.lam1, c) - lam.lam2 * norm2(c);
    return lam;
}

void ScaledTarget::evaluate(const VelocityGrid& grid, std::span<double> out) const {
    check(out, grid, "ScaledTarget::evaluate");
    if (!active) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    if (!exp_values(frame.axes(grid), exponent(), out, 709.0))
        throw SolverFailure("target evaluation overflows");
}

IntraSolution solve_intra(std::span<const double> G, std::span<const double> w, const VelocityGrid& grid,
                          const Species& species, const IntraMultipliers* warm, const DualOptions& options) {
    check(G, grid, "solve_intra(G)");
    check(w, grid, "solve_intra(w)");
    IntraSolution sol;
    auto& W = tls.W[0];
    const double omega = fill_weights(grid, w, W);
    if (!(omega > 0.0)) return sol;

    const double m = species.mass;
    const ScaledFrame coarse{grid.center(), grid_scale(grid)};
    const WeightedMoments wm0 = weighted_moments(coarse.axes(grid), W, G);
    if (!(wm0.m0 > 0.0)) return sol;

    // Frame from the weighted mean and spread of G.
    const Vec3 mean = (1.0 / wm0.m0) * wm0.m1;
    double var = (wm0.m2 / wm0.m0 - norm2(mean)) / 3.0;
    if (!(var > 1e-6)) var = 1.0;
    ScaledFrame frame{coarse.center + coarse.scale * mean, coarse.scale * std::sqrt(var)};
    const auto xi = frame.axes(grid);
    const WeightedMoments wm = weighted_moments(xi, W, G);

    const double S = wm.m0;
    Vec5 mu(1.0, wm.m1[0] / S, wm.m1[1] / S, wm.m1[2] / S, wm.m2 / S);
    normalize(W, omega);
    const double shift = std::log(S / omega);

    ExpMoments M;
    auto eval = [&](const Vec5& x, Vec5& g, Mat5& H) {
        if (!exp_moments(xi, W, {x[0], {x[1], x[2], x[3]}, x[4]}, M, options.max_exponent)) return false;
        g << M.mass(), M.first(0), M.first(1), M.first(2), M.energy();
        g -= mu;
        H(0, 0) = M.mass();
        for (int p = 0; p < 3; ++p) {
            H(0, 1 + p) = H(1 + p, 0) = M.first(p);
            for (int r = 0; r < 3; ++r) H(1 + p, 1 + r) = M.second(p, r);
            H(1 + p, 4) = H(4, 1 + p) = M.energy_flux(p);
        }
        H(0, 4) = H(4, 0) = M.energy();
        H(4, 4) = M.fourth();
        return true;
    };

    Vec5 x, g;
    Mat5 H;
    if (!exp_moments(xi, W, {0.0, {0.0, 0.0, 0.0}, -0.5}, M, options.max_exponent))
        throw SolverFailure("solve_intra: cold start overflows");
    x << -std::log(M.mass()), 0.0, 0.0, 0.0, -0.5;
    if (warm) {
        Vec5 xw;
        double b0, b2;
        Vec3 b1;
        to_scaled(*warm, m, frame, 1.0, b0, b1, b2);
        xw << b0 - shift, b1[0], b1[1], b1[2], b2;
        Vec5 gc, gw;
        Mat5 Hc;
        if (xw.allFinite() && eval(xw, gw, Hc) && gw.allFinite() && eval(x, gc, Hc) && gw.norm() < gc.norm())
            x = xw;
    }

    sol.report.newton = newton_solve<5>(x, eval, llt_or_ldlt5, options.newton);
    eval(x, g, H);
    sol.report.residual = g.norm() / mu.norm();

    ScaledTarget& t = sol.target;
    t.frame = frame;
    t.kappa = 1.0;
    t.beta0 = x[0] + shift;
    t.beta1 = {x[1], x[2], x[3]};
    t.beta2 = x[4];
    t.active = true;
    sol.lambda = t.physical(m);
    sol.report.lam2_warning = !(x[4] < 0.0);
    return sol;
}

InterSolution solve_inter(std::span<const double> G1, std::span<const double> G2, std::span<const double> w12,
                          std::span<const double> w21, const VelocityGrid& grid1, const VelocityGrid& grid2,
                          const Species& s1, const Species& s2, const InterMultipliers* warm,
                          const DualOptions& options) {
    check(G1, grid1, "solve_inter(G1)");
    check(G2, grid2, "solve_inter(G2)");
    check(w12, grid1, "solve_inter(w12)");
    check(w21, grid2, "solve_inter(w21)");
    const std::array<const VelocityGrid*, 2> grids{&grid1, &grid2};
    const std::array<std::span<const double>, 2> G{G1, G2};
    const std::array<double, 2> mass{s1.mass, s2.mass};

    std::array<double, 2> omega{};
    for (int i = 0; i < 2; ++i) omega[i] = fill_weights(*grids[i], i == 0 ? w12 : w21, tls.W[i]);

    const ScaledFrame coarse{grid1.center(), grid_scale(grid1)};
    std::array<WeightedMoments, 2> wm0;
    std::array<bool, 2> live{};
    for (int i = 0; i < 2; ++i) {
        if (omega[i] > 0.0) wm0[i] = weighted_moments(coarse.axes(*grids[i]), tls.W[i], G[i]);
        live[i] = omega[i] > 0.0 && wm0[i].m0 > 0.0;
    }

    InterSolution sol;
    if (!live[0] && !live[1]) return sol;
    if (!live[0] || !live[1]) {
        // One side is empty: the remaining problem has the single-species structure.
        const int i = live[0] ? 0 : 1;
        IntraMultipliers wi;
        if (warm) wi = warm->side(i);
        const IntraSolution one = solve_intra(G[i], i == 0 ? w12 : w21, *grids[i], i == 0 ? s1 : s2,
                                              warm ? &wi : nullptr, options);
        sol.target[i] = one.target;
        sol.report = one.report;
        sol.lambda.lam1 = one.lambda.lam1;
        sol.lambda.lam2 = one.lambda.lam2;
        (i == 0 ? sol.lambda.lam0_12 : sol.lambda.lam0_21) = one.lambda.lam0;
        (i == 0 ? sol.lambda.lam0_21 : sol.lambda.lam0_12) = -HUGE_VAL;
        return sol;
    }

    // Shared frame from the weighted mixture mean and temperature.
    const double rho_w = mass[0] * wm0[0].m0 + mass[1] * wm0[1].m0;
    const Vec3 d = (1.0 / rho_w) * (mass[0] * wm0[0].m1 + mass[1] * wm0[1].m1);
    double e = 0.0;
    for (int i = 0; i < 2; ++i) e += mass[i] * (wm0[i].m2 - 2.0 * dot(d, wm0[i].m1) + norm2(d) * wm0[i].m0);
    const double mbar = std::sqrt(mass[0] * mass[1]);
    double var = e / (3.0 * mbar * (wm0[0].m0 + wm0[1].m0));
    if (!(var > 1e-6)) var = 1.0;
    const ScaledFrame frame{coarse.center + coarse.scale * d, coarse.scale * std::sqrt(var)};
    const std::array<double, 2> kappa{mass[0] / mbar, mass[1] / mbar};
    const std::array<std::array<std::vector<double>, 3>, 2> xi{frame.axes(grid1), frame.axes(grid2)};
    std::array<WeightedMoments, 2> wm{weighted_moments(xi[0], tls.W[0], G1), weighted_moments(xi[1], tls.W[1], G2)};

    const double S = wm[0].m0 + wm[1].m0;
    Vec6 mu;
    mu[0] = wm[0].m0 / S;
    mu[1] = wm[1].m0 / S;
    for (int p = 0; p < 3; ++p) mu[2 + p] = (kappa[0] * wm[0].m1[p] + kappa[1] * wm[1].m1[p]) / S;
    mu[5] = (kappa[0] * wm[0].m2 + kappa[1] * wm[1].m2) / S;
    std::array<double, 2> shift{};
    for (int i = 0; i < 2; ++i) {
        normalize(tls.W[i], omega[i]);
        shift[i] = std::log(S / omega[i]);
    }

    std::array<ExpMoments, 2> M;
    auto species_exponent = [&](const Vec6& x, int i) {
        return QuadraticExponent{x[i], {kappa[i] * x[2], kappa[i] * x[3], kappa[i] * x[4]}, kappa[i] * x[5]};
    };
    auto eval = [&](const Vec6& x, Vec6& g, Mat6& H) {
        for (int i = 0; i < 2; ++i)
            if (!exp_moments(xi[i], tls.W[i], species_exponent(x, i), M[i], options.max_exponent)) return false;
        const double k0 = kappa[0], k1 = kappa[1];
        g[0] = M[0].mass() - mu[0];
        g[1] = M[1].mass() - mu[1];
        for (int p = 0; p < 3; ++p) g[2 + p] = (k0 * M[0].first(p) + k1 * M[1].first(p)) - mu[2 + p];
        g[5] = (k0 * M[0].energy() + k1 * M[1].energy()) - mu[5];
        H.setZero();
        H(0, 0) = M[0].mass();
        H(1, 1) = M[1].mass();
        for (int p = 0; p < 3; ++p) {
            H(0, 2 + p) = H(2 + p, 0) = k0 * M[0].first(p);
            H(1, 2 + p) = H(2 + p, 1) = k1 * M[1].first(p);
            for (int r = 0; r < 3; ++r)
                H(2 + p, 2 + r) = k0 * k0 * M[0].second(p, r) + k1 * k1 * M[1].second(p, r);
            H(2 + p, 5) = H(5, 2 + p) = k0 * k0 * M[0].energy_flux(p) + k1 * k1 * M[1].energy_flux(p);
        }
        H(0, 5) = H(5, 0) = k0 * M[0].energy();
        H(1, 5) = H(5, 1) = k1 * M[1].energy();
        H(5, 5) = k0 * k0 * M[0].fourth() + k1 * k1 * M[1].fourth();
        return true;
    };
    // Eliminate the two mass rows first; the reduction is symmetric in the species.
    auto solve = [](const Mat6& H, const Vec6& rhs, Vec6& dx) {
        const double h0 = H(0, 0), h1 = H(1, 1);
        if (!(h0 > 0.0) || !(h1 > 0.0)) return false;
        Eigen::Matrix4d A;
        Eigen::Vector4d r;
        for (int a = 0; a < 4; ++a) {
            const double ba0 = H(0, 2 + a), ba1 = H(1, 2 + a);
            for (int b = 0; b < 4; ++b)
                A(a, b) = H(2 + a, 2 + b) - (ba0 * H(0, 2 + b) / h0 + ba1 * H(1, 2 + b) / h1);
            r[a] = rhs[2 + a] - (ba0 * rhs[0] / h0 + ba1 * rhs[1] / h1);
        }
        Eigen::LLT<Eigen::Matrix4d> llt(A);
        if (llt.info() != Eigen::Success) return false;
        const Eigen::Vector4d ds = llt.solve(r);
        dx.tail<4>() = ds;
        double c0 = 0.0, c1 = 0.0;
        for (int a = 0; a < 4; ++a) {
            c0 += H(0, 2 + a) * ds[a];
            c1 += H(1, 2 + a) * ds[a];
        }
        dx[0] = (rhs[0] - c0) / h0;
        dx[1] = (rhs[1] - c1) / h1;
        return true;
    };

    Vec6 x, g;
    Mat6 H;
    x << 0.0, 0.0, 0.0, 0.0, 0.0, -0.5;
    for (int i = 0; i < 2; ++i) {
        if (!exp_moments(xi[i], tls.W[i], species_exponent(x, i), M[i], options.max_exponent))
            throw SolverFailure("solve_inter: cold start overflows");
    }
    x[0] = std::log(mu[0] / M[0].mass());
    x[1] = std::log(mu[1] / M[1].mass());
    if (warm && std::isfinite(warm->lam0_12) && std::isfinite(warm->lam0_21)) {
        Vec6 xw;
        for (int i = 0; i < 2; ++i) {
            double b0, b2;
            Vec3 b1;
            to_scaled(warm->side(i), mass[i], frame, kappa[i], b0, b1, b2);
            xw[i] = b0 - shift[i];
            xw.segment<3>(2) << b1[0], b1[1], b1[2];
            xw[5] = b2;
        }
        Vec6 gc, gw;
        Mat6 Hc;
        if (xw.allFinite() && eval(xw, gw, Hc) && gw.allFinite() && eval(x, gc, Hc) && gw.norm() < gc.norm())
            x = xw;
    }

    sol.report.newton = newton_solve<6>(x, eval, solve, options.newton);
    eval(x, g, H);
    sol.report.residual = g.norm() / mu.norm();
    sol.report.lam2_warning = !(x[5] < 0.0);

    for (int i = 0; i < 2; ++i) {
        ScaledTarget& t = sol.target[i];
        t.frame = frame;
        t.kappa = kappa[i];
        t.beta0 = x[i] + shift[i];
        t.beta1 = {x[2], x[3], x[4]};
        t.beta2 = x[5];
        t.active = true;
    }
    const IntraMultipliers p0 = sol.target[0].physical(mass[0]);
    const IntraMultipliers p1 = sol.target[1].physical(mass[1]);
    sol.lambda = {p0.lam0, p1.lam0, p0.lam1, p0.lam2};
    return sol;
}

Vec5 assemble_intra_target(std::span<const double> G, std::span<const double> w, const VelocityGrid& grid,
                           const Species& species) {
    check(G, grid, "assemble_intra_target(G)");
    check(w, grid, "assemble_intra_target(w)");
    Vec5 mu = Vec5::Zero();
    const auto quad = grid.quadrature();
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const Vec3 v = grid.node(q);
        const double t = quad[q] * w[q] * G[q] * species.mass;
        mu[0] += t;
        mu[1] += t * v[0];
        mu[2] += t * v[1];
        mu[3] += t * v[2];
        mu[4] += t * norm2(v);
    }
    return mu;
}

Vec6 assemble_inter_target(std::span<const double> G1, std::span<const double> G2, std::span<const double> w12,
                           std::span<const double> w21, const VelocityGrid& grid1, const VelocityGrid& grid2,
                           const Species& s1, const Species& s2) {
    const Vec5 a = assemble_intra_target(G1, w12, grid1, s1);
    const Vec5 b = assemble_intra_target(G2, w21, grid2, s2);
    Vec6 mu;
    mu << a[0], b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], a[4] + b[4];
    return mu;
}

namespace {

template <class Obj>
void accumulate_side(const double* alpha_lam, const VelocityGrid& grid, std::span<const double> w, double mass,
                     int mass_row, int dim, Obj& obj) {
    const auto quad = grid.quadrature();
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const Vec3 v = grid.node(q);
        const double v2 = norm2(v);
        const double z = mass * (alpha_lam[0] + alpha_lam[1] * v[0] + alpha_lam[2] * v[1] + alpha_lam[3] * v[2] +
                                 alpha_lam[4] * v2);
        const double e = quad[q] * w[q] * std::exp(z);
        Eigen::VectorXd a = Eigen::VectorXd::Zero(dim);
        a[mass_row] = mass;
        a[dim - 4] = mass * v[0];
        a[dim - 3] = mass * v[1];
        a[dim - 2] = mass * v[2];
        a[dim - 1] = mass * v2;
        obj.value += e;
        obj.gradient += e * a;
        obj.hessian += e * a * a.transpose();
    }
}

}  // namespace

Objective5 intra_objective(const Vec5& alpha, std::span<const double> w, const VelocityGrid& grid,
                           const Species& species, const Vec5& mu) {
    check(w, grid, "intra_objective");
    Objective5 obj;
    const double lam[5] = {alpha[0], alpha[1], alpha[2], alpha[3], alpha[4]};
    accumulate_side(lam, grid, w, species.mass, 0, 5, obj);
    obj.value -= mu.dot(alpha);
    obj.gradient -= mu;
    return obj;
}

Objective6 inter_objective(const Vec6& alpha, std::span<const double> w12, std::span<const double> w21,
                           const VelocityGrid& grid1, const VelocityGrid& grid2, const Species& s1,
                           const Species& s2, const Vec6& mu) {
    check(w12, grid1, "inter_objective(w12)");
    check(w21, grid2, "inter_objective(w21)");
    Objective6 obj;
    const double lam1[5] = {alpha[0], alpha[2], alpha[3], alpha[4], alpha[5]};
    const double lam2[5] = {alpha[1], alpha[2], alpha[3], alpha[4], alpha[5]};
    accumulate_side(lam1, grid1, w12, s1.mass, 0, 6, obj);
    accumulate_side(lam2, grid2, w21, s2.mass, 1, 6, obj);
    obj.value -= mu.dot(alpha);
    obj.gradient -= mu;
    return obj;
}

std::vector<double> eval_target(const IntraMultipliers& lam, const VelocityGrid& grid, const Species& species) {
    std::vector<double> out(grid.size());
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const Vec3 v = grid.node(q);
        out[q] = std::exp(species.mass * (lam.lam0 + dot(lam.lam1, v) + lam.lam2 * norm2(v)));
    }
    return out;
}

std::vector<double> eval_target(const InterMultipliers& lam, int side, const VelocityGrid& grid,
                                const Species& species) {
    return eval_target(lam.side(side), grid, species);
}

}  // namespace mbgk
