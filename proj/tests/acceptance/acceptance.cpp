// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion keys as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "mbgk/diagnostics.hpp"
#include "mbgk/dual_optimizer.hpp"
#include "mbgk/riemann.hpp"
#include "mbgk/scenarios.hpp"

using namespace mbgk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double min_value(const FieldPair& f) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& fi : f)
        for (double x : fi.data()) m = std::min(m, x);
    return m;
}

/// Steps to t_end, shortening the last step. Calls `each` after every step.
void advance(Scenario& sc, double t_end, const std::function<void(const StepReport&)>& each = {}) {
    const double dt0 = sc.stepper->default_dt();
    while (sc.state.time < t_end * (1.0 - 1e-12)) {
        const double dt = std::min(dt0, t_end - sc.state.time);
        const StepReport rep = sc.stepper->step(sc.state, dt);
        if (each) each(rep);
    }
}

// Toy run shared by the conservation, mixture and entropy criteria.

struct ToyRecord {
    double max_drift = 0.0;
    double max_du = 0.0, max_dT = 0.0;  // relative per-step changes of the global mixture
    MixtureState initial;
    long entropy_increases = 0;
    double max_dH = -std::numeric_limits<double>::infinity();  // largest H_{n+1} - H_n, relative to |H_0|
    double min_f = 0.0;
    double max_residual = 0.0;
    long guard_triggers = 0;
    int steps = 0;
    double seconds = 0.0;
};

ToyRecord run_toy(Scheme scheme, int steps) {
    ScenarioConfig c = preset("toy");
    c.scheme = scheme;
    c.velocity_nodes = 48;
    const auto t0 = std::chrono::steady_clock::now();
    Scenario sc = build_scenario(c);
    const auto grids = sc.stepper->grid_ptrs();
    const auto& sp = sc.stepper->species();
    const auto& mesh = sc.stepper->mesh();
    ToyRecord r;
    const ConservedTotals tot0 = conserved_totals(sc.state.f, mesh, grids, sp);
    r.initial = global_mixture(tot0, sp);
    MixtureState prev = r.initial;
    double H = entropy(sc.state.f, mesh, grids);
    const double H0 = std::abs(H);
    r.min_f = min_value(sc.state.f);
    for (int n = 0; n < steps; ++n) {
        const StepReport rep = sc.stepper->step(sc.state, *c.dt);
        r.guard_triggers += rep.guard_triggers;
        r.max_residual = std::max(r.max_residual, rep.relax.max_residual);
        const ConservedTotals tot = conserved_totals(sc.state.f, mesh, grids, sp);
        r.max_drift = std::max(r.max_drift, max_relative_drift(tot0, tot));
        const MixtureState mix = global_mixture(tot, sp);
        r.max_du = std::max(r.max_du, std::sqrt(norm2(mix.u - prev.u)) / std::sqrt(norm2(prev.u)));
        r.max_dT = std::max(r.max_dT, std::abs(mix.T - prev.T) / prev.T);
        prev = mix;
        const double Hn = entropy(sc.state.f, mesh, grids);
        if (Hn > H) ++r.entropy_increases;
        r.max_dH = std::max(r.max_dH, (Hn - H) / H0);
        H = Hn;
        r.min_f = std::min(r.min_f, min_value(sc.state.f));
    }
    r.steps = steps;
    r.seconds = seconds_since(t0);
    return r;
}

const ToyRecord& toy_splitting() {
    static const ToyRecord r = run_toy(Scheme::Splitting1, 400);
    return r;
}

Outcome conservation() {
    const ToyRecord& r = toy_splitting();
    return {r.max_drift <= 1e-10, "toy 48^3, " + std::to_string(r.steps) + " steps: max relative drift of mass, momentum, energy " +
                                      fmt(r.max_drift) + " (tol 1e-10)"};
}

Outcome mixture() {
    const ToyRecord& r = toy_splitting();
    auto sig3 = [](double x) {
        const double e = std::floor(std::log10(std::abs(x))) - 2.0;
        return std::round(x / std::pow(10.0, e)) * std::pow(10.0, e);
    };
    const double u0 = r.initial.u[0], T0 = r.initial.T;
    const bool steady = r.max_du <= 1e-11 && r.max_dT <= 1e-11;
    const bool initial = std::abs(sig3(u0) - 0.0322) < 1e-12 && std::abs(sig3(T0) - 0.0487) < 1e-12;
    return {steady && initial, "per-step relative change u_mix " + fmt(r.max_du) + ", T_mix " + fmt(r.max_dT) +
                                   " (tol 1e-11); initial (u_mix, T_mix) = (" + fmt(u0) + ", " + fmt(T0) +
                                   ") vs (0.0322, 0.0487) at 3 significant figures"};
}

Outcome entropy_decay() {
    const ToyRecord& r = toy_splitting();
    // Joint equilibrium: both species at the same velocity and temperature.
    ScenarioConfig c = preset("toy");
    c.velocity_nodes = 48;
    Scenario sc = build_scenario(c);
    const auto& sp = sc.stepper->species();
    const std::array<double, 2> n{0.04, 0.015};
    for (int i = 0; i < 2; ++i)
        maxwellian(sc.state.f[static_cast<std::size_t>(i)].cell(0), sp[static_cast<std::size_t>(i)], n[static_cast<std::size_t>(i)],
                   {0.03, 0.0, 0.0}, 0.048, sc.stepper->grid(i));
    const FieldPair before = sc.state.f;
    const double H0 = entropy(before, sc.stepper->mesh(), sc.stepper->grid_ptrs());
    sc.stepper->step(sc.state, *c.dt);
    const double H1 = entropy(sc.state.f, sc.stepper->mesh(), sc.stepper->grid_ptrs());
    const double dH = std::abs(H1 - H0) / std::abs(H0);
    double df = 0.0, peak = 0.0;
    for (int i = 0; i < 2; ++i)
        for (std::size_t q = 0; q < before[static_cast<std::size_t>(i)].data().size(); ++q) {
            df = std::max(df, std::abs(sc.state.f[static_cast<std::size_t>(i)].data()[q] - before[static_cast<std::size_t>(i)].data()[q]));
            peak = std::max(peak, before[static_cast<std::size_t>(i)].data()[q]);
        }
    const bool pass = r.entropy_increases == 0 && dH <= 1e-12;
    return {pass, "toy: " + std::to_string(r.entropy_increases) + " increases in " + std::to_string(r.steps) +
                      " steps (largest H_{n+1}-H_n relative " + fmt(r.max_dH) + "); joint equilibrium |dH|/|H| " +
                      fmt(dH) + ", max |df|/max f " + fmt(df / peak) + " (tol 1e-12)"};
}

// Dual exactness on analytic data plus the post-solve residual over all presets.

Outcome dual_exactness() {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    auto track = [&](double got, double want) { worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want))); };
    for (int trial = 0; trial < 20; ++trial) {
        const Species s1{1.0 + 0.5 * (U(rng) + 1.0), 0, "a"}, s2{3.0 + U(rng), 0, "b"};
        const double n = 1.0 + 0.5 * U(rng), T = 0.8 + 0.3 * U(rng);
        const Vec3 u{0.3 * U(rng), 0.3 * U(rng), 0.3 * U(rng)};
        const VelocityGrid g1 = build_grid(s1, {0, 0, 0}, 1.0, 24), g2 = build_grid(s2, {0, 0, 0}, 1.0, 24);
        const auto G = maxwellian(s1, n, u, T, g1);
        const std::vector<double> w(g1.size(), 5.0 + U(rng));
        const IntraSolution sol = solve_intra(G, w, g1, s1);
        const IntraMultipliers ref = maxwellian_multipliers(s1, n, u, T);
        track(sol.lambda.lam0, ref.lam0);
        for (int p = 0; p < 3; ++p) track(sol.lambda.lam1[p], ref.lam1[p]);
        track(sol.lambda.lam2, ref.lam2);
        // Inter: exponential-family pair data with a shared velocity and temperature.
        const IntraMultipliers ref2 = maxwellian_multipliers(s2, 0.4, u, T);
        const InterMultipliers want{ref.lam0, ref2.lam0, ref.lam1, ref.lam2};
        const auto G1 = eval_target(want, 0, g1, s1), G2 = eval_target(want, 1, g2, s2);
        const std::vector<double> w2(g2.size(), 2.0);
        const InterSolution is = solve_inter(G1, G2, w, w2, g1, g2, s1, s2);
        track(is.lambda.lam0_12, want.lam0_12);
        track(is.lambda.lam0_21, want.lam0_21);
        for (int p = 0; p < 3; ++p) track(is.lambda.lam1[p], want.lam1[p]);
        track(is.lambda.lam2, want.lam2);
    }
    // Residual over every cell of every preset, short runs at reduced resolution.
    double residual = 0.0;
    long solves = 0;
    std::string per;
    for (const auto& name : preset_names()) {
        ScenarioConfig c = preset(name);
        c.mesh.cells = std::min(c.mesh.cells, 40);
        c.velocity_nodes = 16;
        std::erase_if(c.slice_cells, [&](int k) { return k >= c.mesh.cells; });
        Scenario sc = build_scenario(c);
        double r = 0.0;
        for (int n = 0; n < 5; ++n) {
            const StepReport rep = sc.stepper->step(sc.state, sc.stepper->default_dt());
            r = std::max(r, rep.relax.max_residual);
            solves += rep.relax.solves;
        }
        residual = std::max(residual, r);
    }
    const bool pass = worst <= 1e-10 && residual < 1e-12;
    return {pass, "analytic multipliers max relative error " + fmt(worst) + " (tol 1e-10); constraint residual " +
                      fmt(residual) + " over " + std::to_string(solves) + " solves in 9 presets (tol 1e-12)"};
}

Outcome gradient_hessian() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0), W(0.2, 3.0);
    const VelocityGrid g1({-2, -2, -2}, {2, 2, 2}, 5), g2({-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}, 5);
    const Species s1{1.0, 0, "a"}, s2{1.8, 0, "b"};
    const double h = 1e-5;
    double worst_g = 0.0, worst_h = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> w1(g1.size()), w2(g2.size());
        for (auto& x : w1) x = W(rng);
        for (auto& x : w2) x = W(rng);
        Vec5 a;
        a << 0.5 * U(rng), 0.4 * U(rng), 0.4 * U(rng), 0.4 * U(rng), -0.6 + 0.3 * U(rng);
        Vec5 mu;
        mu << 1 + U(rng), U(rng), U(rng), U(rng), 3 + U(rng);
        const Objective5 o = intra_objective(a, w1, g1, s1, mu);
        for (int k = 0; k < 5; ++k) {
            Vec5 ap = a, am = a;
            ap[k] += h;
            am[k] -= h;
            const Objective5 p = intra_objective(ap, w1, g1, s1, mu), m = intra_objective(am, w1, g1, s1, mu);
            worst_g = std::max(worst_g, std::abs((p.value - m.value) / (2 * h) - o.gradient[k]) /
                                            std::max(1.0, std::abs(o.gradient[k])));
            const Vec5 fdh = (p.gradient - m.gradient) / (2 * h);
            worst_h = std::max(worst_h, (fdh - o.hessian.col(k)).norm() / std::max(1.0, o.hessian.col(k).norm()));
        }
        Vec6 b;
        b << 0.5 * U(rng), 0.5 * U(rng), 0.3 * U(rng), 0.3 * U(rng), 0.3 * U(rng), -0.5 + 0.2 * U(rng);
        Vec6 mu6;
        mu6 << 1 + U(rng), 1 + U(rng), U(rng), U(rng), U(rng), 4 + U(rng);
        const Objective6 o6 = inter_objective(b, w1, w2, g1, g2, s1, s2, mu6);
        for (int k = 0; k < 6; ++k) {
            Vec6 bp = b, bm = b;
            bp[k] += h;
            bm[k] -= h;
            const Objective6 p = inter_objective(bp, w1, w2, g1, g2, s1, s2, mu6);
            const Objective6 m = inter_objective(bm, w1, w2, g1, g2, s1, s2, mu6);
            worst_g = std::max(worst_g, std::abs((p.value - m.value) / (2 * h) - o6.gradient[k]) /
                                            std::max(1.0, std::abs(o6.gradient[k])));
            const Vec6 fdh = (p.gradient - m.gradient) / (2 * h);
            worst_h = std::max(worst_h, (fdh - o6.hessian.col(k)).norm() / std::max(1.0, o6.hessian.col(k).norm()));
        }
    }
    return {worst_g < 1e-5 && worst_h < 1e-5, "100 random states on 5^3 grids: gradient " + fmt(worst_g) +
                                                  ", Hessian " + fmt(worst_h) + " (tol 1e-5)"};
}

Outcome positivity() {
    double min_f = std::numeric_limits<double>::infinity();
    long triggers = 0;
    double clipped = 0.0;
    for (const auto& name : preset_names()) {
        for (int order : {1, 2}) {
            ScenarioConfig c = preset(name);
            c.scheme = Scheme::Splitting1;
            c.flux_order = order;
            c.mesh.cells = std::min(c.mesh.cells, 40);
            c.velocity_nodes = 16;
            std::erase_if(c.slice_cells, [&](int k) { return k >= c.mesh.cells; });
            Scenario sc = build_scenario(c);
            for (int n = 0; n < 10; ++n) {
                const StepReport rep = sc.stepper->step(sc.state, sc.stepper->default_dt());
                triggers += rep.guard_triggers;
                clipped += rep.clipped_mass[0] + rep.clipped_mass[1];
                min_f = std::min(min_f, min_value(sc.state.f));
            }
        }
    }
    const ToyRecord ars = run_toy(Scheme::ARS222, 400);
    const bool pass = min_f >= 0.0 && triggers == 0 && clipped == 0.0 && ars.guard_triggers == 0 && ars.min_f >= 0.0;
    return {pass, "first-order scheme, all presets, flux orders 1 and 2 at CFL: min f " + fmt(min_f) + ", guard triggers " +
                      std::to_string(triggers) + ", clipped mass " + fmt(clipped) + "; ARS222 toy 400 steps: guard triggers " +
                      std::to_string(ars.guard_triggers) + ", min f " + fmt(ars.min_f)};
}

Outcome convergence() {
    struct Case {
        const char* preset;
        Scheme scheme;
        int order;
        double need;
    };
    const Case cases[] = {{"appendix_convergence", Scheme::Splitting1, 1, 0.9},
                          {"appendix_convergence", Scheme::ARS222, 2, 1.8},
                          {"appendix_convergence_stiff", Scheme::Splitting1, 1, 0.9},
                          {"appendix_convergence_stiff", Scheme::ARS222, 2, 1.8}};
    bool pass = true;
    std::ostringstream os;
    const fs::path dir = fs::temp_directory_path() / "mbgk_acceptance_convergence";
    for (const Case& k : cases) {
        ScenarioConfig c = preset(k.preset);
        c.scheme = k.scheme;
        c.flux_order = k.order;
        c.velocity_nodes = 24;
        const auto rows = app::convergence(c, 4, dir, nullptr);
        const double finest = std::min(rows.back().order[0], rows.back().order[1]);
        pass = pass && finest >= k.need;
        os << (k.preset == std::string("appendix_convergence") ? "C=1 " : "C=1e4 ") << to_string(k.scheme)
           << "/flux" << k.order << " orders";
        for (std::size_t l = 1; l < rows.size(); ++l) os << ' ' << fmt(std::min(rows[l].order[0], rows[l].order[1]));
        os << " (finest >= " << k.need << "); ";
    }
    fs::remove_all(dir);
    std::string d = os.str();
    d.resize(d.size() - 2);
    return {pass, d};
}

Outcome sod() {
    ScenarioConfig c = preset("sod");
    c.mesh.cells = 200;
    c.velocity_nodes = 32;
    Scenario sc = build_scenario(c);
    advance(sc, c.t_end);
    const bool identical = sc.state.f[0] == sc.state.f[1];
    const auto m = cell_moments(sc.state.f, sc.stepper->grid_ptrs(), sc.stepper->species());
    // Euler data of the mixture: rho = n_1 + n_2 (unit masses), p = n T.
    const ExactRiemann ex({2.0, 0.0, 2.0}, {0.2, 0.0, 0.16}, 5.0 / 3.0);
    const auto speeds = ex.wave_speeds();
    const double t = sc.state.time;
    const double x_contact = ex.u_star() * t, x_shock = speeds.back() * t;
    std::array<double, 3> err{0, 0, 0}, norm{0, 0, 0};
    for (int k = 0; k < c.mesh.cells; ++k) {
        const double x = c.mesh.center(k);
        if (std::abs(x - x_contact) < 0.03 || std::abs(x - x_shock) < 0.03) continue;
        const EulerState e = ex.sample(x / t);
        const auto& mk = m[static_cast<std::size_t>(k)];
        const MixtureState mix = mixture_state(mk[0], mk[1]);
        const std::array<double, 3> got{mk[0].n + mk[1].n, mix.u[0], mix.T};
        const std::array<double, 3> want{e.rho, e.u, e.p / e.rho};
        for (int q = 0; q < 3; ++q) {
            err[static_cast<std::size_t>(q)] += std::abs(got[static_cast<std::size_t>(q)] - want[static_cast<std::size_t>(q)]);
            norm[static_cast<std::size_t>(q)] += std::abs(want[static_cast<std::size_t>(q)]);
        }
    }
    std::array<double, 3> rel{};
    for (int q = 0; q < 3; ++q) rel[static_cast<std::size_t>(q)] = err[static_cast<std::size_t>(q)] / norm[static_cast<std::size_t>(q)];
    const bool pass = identical && *std::max_element(rel.begin(), rel.end()) <= 0.05;
    return {pass, "200 cells, 32^3, t=" + fmt(t) + ": L1-relative error density " + fmt(rel[0]) + ", velocity " + fmt(rel[1]) +
                      ", temperature " + fmt(rel[2]) + " (tol 0.05, +-0.03 around contact and shock excluded); species " +
                      (identical ? "bitwise identical" : "DIFFER")};
}

Outcome mach17() {
    std::array<std::vector<std::array<SpeciesMoments, 2>>, 2> result;
    for (int v = 0; v < 2; ++v) {
        ScenarioConfig c = preset("mach17");
        apply_frequency_tag(c, v == 0 ? "vhat" : "veldep");
        c.mesh.cells = 100;
        c.velocity_nodes = 32;
        c.threads = 1;
        Scenario sc = build_scenario(c);
        advance(sc, c.t_end);
        result[static_cast<std::size_t>(v)] = cell_moments(sc.state.f, sc.stepper->grid_ptrs(), sc.stepper->species());
    }
    double worst = 0.0;
    std::string where;
    const char* names[] = {"n", "u1", "T"};
    for (std::size_t k = 0; k < result[0].size(); ++k)
        for (std::size_t i = 0; i < 2; ++i) {
            const auto& a = result[0][k][i];
            const auto& b = result[1][k][i];
            const double r[3] = {relative_difference(a.n, b.n), relative_difference(a.u[0], b.u[0]), relative_difference(a.T, b.T)};
            for (int q = 0; q < 3; ++q)
                if (std::abs(r[q]) > worst) {
                    worst = std::abs(r[q]);
                    where = std::string(names[q]) + "_" + std::to_string(i + 1) + " in cell " + std::to_string(k);
                }
        }
    return {worst < 0.05, "100 cells, 32^3: max |r| between vhat and velocity-dependent runs " + fmt(worst) + " (" + where +
                              ", tol 0.05)"};
}

// Hydrogen-carbon relaxation character.

struct Decay {
    std::vector<double> t, dT;
};

Decay hc_decay(const char* tag, double stop_time, double stop_fraction) {
    ScenarioConfig c = preset("hydrogen_carbon");
    apply_frequency_tag(c, tag);
    c.velocity_nodes = 48;
    Scenario sc = build_scenario(c);
    Decay d;
    auto sample = [&] {
        const auto m = cell_moments(sc.state.f, sc.stepper->grid_ptrs(), sc.stepper->species());
        d.t.push_back(sc.state.time);
        d.dT.push_back(std::abs(m[0][0].T - m[0][1].T));
    };
    sample();
    while (sc.state.time < stop_time && d.dT.back() > stop_fraction * d.dT.front()) {
        sc.stepper->step(sc.state, *c.dt);
        sample();
    }
    return d;
}

/// Coefficient of determination of a least-squares line through (t, log dT) for t <= t_max.
double log_linear_r2(const Decay& d, double t_max) {
    std::vector<double> x, y;
    for (std::size_t k = 0; k < d.t.size(); ++k)
        if (d.t[k] <= t_max * (1.0 + 1e-12)) {
            x.push_back(d.t[k]);
            y.push_back(std::log(d.dT[k]));
        }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    return sxy * sxy / (sxx * syy);
}

Outcome hydrogen_carbon() {
    const double t_end = preset("hydrogen_carbon").t_end;
    const Decay hat = hc_decay("vhat", t_end, 1e-3);
    const double t_decay = hat.t.back();
    const double t_w = 0.5 * t_decay;
    const Decay dep = hc_decay("veldep", t_w, 0.0);
    const double r2_hat = log_linear_r2(hat, t_w), r2_dep = log_linear_r2(dep, t_w);
    const bool pass = r2_hat > 0.99 && r2_dep < 0.99;
    return {pass, "48^3: |T1-T2| reaches 1e-3 of its initial value at " + fmt(t_decay * 1e12) + " ps under vhat; window [0, " +
                      fmt(t_w * 1e12) + "] ps; R^2 of exponential fit vhat " + fmt(r2_hat) + " (> 0.99), velocity-dependent " +
                      fmt(r2_dep) + " (< 0.99)"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"conservation", conservation},   {"mixture", mixture},         {"entropy", entropy_decay},
        {"dual", dual_exactness},         {"gradient", gradient_hessian}, {"positivity", positivity},
        {"convergence", convergence},     {"sod", sod},                 {"mach17", mach17},
        {"hc", hydrogen_carbon},
    };
    std::set<std::string> only(argv + 1, argv + argc);
    int failures = 0;
    for (const auto& [key, fn] : criteria) {
        if (!only.empty() && !only.count(key)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS " : "FAIL ") << key << ": " << o.detail << " [" << fmt(seconds_since(t0)) << " s]"
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
