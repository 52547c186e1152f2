#include "mbgk/stepper.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "mbgk/parallel.hpp"

namespace mbgk {

int default_threads() {
    if (const char* env = std::getenv("MBGK_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

std::string_view to_string(Scheme s) { return s == Scheme::ARS222 ? "ars222" : "splitting1"; }

Scheme parse_scheme(std::string_view s) {
    if (s == "ars222" || s == "ARS222" || s == "imex") return Scheme::ARS222;
    if (s == "splitting1" || s == "Splitting1" || s == "splitting") return Scheme::Splitting1;
    throw InvalidInput("unknown scheme '" + std::string(s) + "'");
}

Stepper::Stepper(std::array<Species, 2> species, std::array<VelocityGrid, 2> grids, SpatialMesh mesh,
                 FrequencyModel frequency, SchemeConfig config)
    : species_(std::move(species)),
      grids_(std::move(grids)),
      mesh_(mesh),
      config_(config),
      model_(frequency, species_, {&grids_[0], &grids_[1]}),
      relax_(model_, species_, {&grids_[0], &grids_[1]}, config.dual) {
    mesh_.validate();
    for (const auto& s : species_) s.validate();
    if (config_.dt && !(*config_.dt > 0.0)) throw InvalidInput("time step must be positive");
}

double Stepper::cfl_dt() const {
    const std::array<const VelocityGrid*, 2> g{&grids_[0], &grids_[1]};
    return mbgk::cfl_dt(mesh_, g, config_.flux);
}

double Stepper::default_dt() const { return config_.dt ? *config_.dt : cfl_dt(); }

SimState Stepper::make_state() const {
    SimState s;
    for (int i = 0; i < 2; ++i) s.f[i] = PhaseField(static_cast<std::size_t>(mesh_.cells), grids_[i].size());
    s.warm.resize(static_cast<std::size_t>(mesh_.cells));
    return s;
}

void Stepper::transport(const std::array<PhaseField, 2>& f, std::array<PhaseField, 2>& out) const {
    for (int i = 0; i < 2; ++i) {
        if (mesh_.homogeneous()) {
            if (out[i].cells() != f[i].cells() || out[i].nodes() != f[i].nodes())
                out[i] = PhaseField(f[i].cells(), f[i].nodes());
            else
                std::fill(out[i].data().begin(), out[i].data().end(), 0.0);
            continue;
        }
        apply_transport(f[i], mesh_, grids_[i], config_.flux, out[i]);
    }
}

void Stepper::relax_all(std::array<PhaseField, 2>& g, double dt_eff, std::vector<WarmStart>& warm,
                        std::vector<CellTargets>* targets, RelaxStats& stats) const {
    const std::size_t K = g[0].cells();
    if (warm.size() != K) warm.resize(K);
    if (targets) targets->assign(K, CellTargets{});
    const int threads = std::max(1, config_.threads);
    std::vector<RelaxStats> chunk(static_cast<std::size_t>(threads));
    const auto grids = grid_ptrs();
    parallel_for(K, threads, [&](std::size_t b, std::size_t e, int c) {
        for (std::size_t k = b; k < e; ++k) {
            const CellState st = cell_state(g[0].cell(k), g[1].cell(k), species_, grids);
            if (st.vacuum) continue;
            const CellRates rates = model_.rates(st.moments, st.mix);
            try {
                CellTargets t = relax_.relax_in_place(g[0].cell(k), g[1].cell(k), rates, dt_eff, &warm[k],
                                                      chunk[static_cast<std::size_t>(c)]);
                if (targets) (*targets)[k] = std::move(t);
            } catch (const SolverFailure& ex) {
                throw SolverFailure(std::string(ex.what()) + " (cell " + std::to_string(k) + ")", ex.residual(),
                                    ex.iterations(), static_cast<long>(k));
            }
        }
    });
    for (const auto& c : chunk) stats.merge(c);
}

bool Stepper::check_positivity(std::array<PhaseField, 2>& g, StepReport& rep) const {
    for (int i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < g[i].cells(); ++k) {
            const auto cell = g[i].cell(k);
            const auto [lo, hi] = std::minmax_element(cell.begin(), cell.end());
            if (!std::isfinite(*lo) || !std::isfinite(*hi)) return false;
            if (*lo < -config_.negative_tolerance * std::max(*hi, 0.0)) return false;
        }
    for (int i = 0; i < 2; ++i) {
        const auto quad = grids_[i].quadrature();
        for (std::size_t k = 0; k < g[i].cells(); ++k) {
            auto cell = g[i].cell(k);
            for (std::size_t q = 0; q < cell.size(); ++q)
                if (cell[q] < 0.0) {
                    rep.clipped_mass[i] += -cell[q] * quad[q] * species_[i].mass * mesh_.dx();
                    cell[q] = 0.0;
                }
        }
    }
    return true;
}

bool Stepper::attempt_splitting(SimState& s, double dt, StepReport& rep, double& retry_dt) {
    a_ = s.f;
    relax_all(a_, dt, s.warm, nullptr, rep.relax);
    if (!mesh_.homogeneous()) {
        transport(a_, b_);
        for (int i = 0; i < 2; ++i) {
            auto x = a_[i].data();
            const auto t = b_[i].data();
            for (std::size_t r = 0; r < x.size(); ++r) x[r] -= dt * t[r];
        }
    }
    if (!check_positivity(a_, rep)) {
        retry_dt = 0.5 * dt;
        return false;
    }
    std::swap(s.f, a_);
    return true;
}

bool Stepper::attempt_ars(SimState& s, double dt, StepReport& rep, double& retry_dt) {
    constexpr double g = SchemeConfig::gamma;
    constexpr double d = SchemeConfig::delta;

    transport(s.f, a_);  // T(f)
    for (int i = 0; i < 2; ++i) {
        b_[i] = s.f[i];
        auto x = b_[i].data();
        const auto t = a_[i].data();
        for (std::size_t r = 0; r < x.size(); ++r) x[r] -= g * dt * t[r];
    }
    RelaxStats stage1;
    relax_all(b_, g * dt, s.warm, &stage1_, stage1);  // b_ = f1
    transport(b_, c_);                                 // T(f1)

    for (int i = 0; i < 2; ++i) {
        for (std::size_t k = 0; k < s.f[i].cells(); ++k) {
            auto out = a_[i].cell(k);
            const auto f = s.f[i].cell(k);
            const auto t1 = c_[i].cell(k);
            for (std::size_t r = 0; r < out.size(); ++r)
                out[r] = f[r] - d * dt * out[r] - (1.0 - d) * dt * t1[r];
            relax_.add_operator(i, b_[i].cell(k), stage1_[k], (1.0 - g) * dt, out);
        }
    }
    RelaxStats stage2;
    relax_all(a_, g * dt, s.warm, nullptr, stage2);  // a_ = f2
    rep.relax.merge(stage1);
    rep.relax.merge(stage2);

    if (!check_positivity(a_, rep)) {
        double bound = positivity_guard_dt(stage1.max_rate_sum);
        if (config_.local_positivity_bounds) bound = std::max(bound, local_bound(s, dt));
        retry_dt = bound < dt ? bound : 0.5 * dt;
        return false;
    }
    std::swap(s.f, a_);
    return true;
}

double Stepper::local_bound(const SimState& s, double /*dt*/) const {
    // Nodewise bounds from f^l, f^(1) (held in b_) and the stage-1 targets.
    constexpr double g = SchemeConfig::gamma;
    double bound = HUGE_VAL;
    std::vector<double> rate_sum, gain, tmp;
    for (int i = 0; i < 2; ++i) {
        const std::size_t n = grids_[i].size();
        for (std::size_t k = 0; k < s.f[i].cells(); ++k) {
            const auto fl = s.f[i].cell(k);
            const auto f1 = b_[i].cell(k);
            // gain = nu_ii A_ii + nu_ij A_ij, rate_sum = nu_ii + nu_ij
            tmp.assign(n, 0.0);
            std::vector<double> ones(n, 1.0), zeros(n, 0.0);
            gain.assign(n, 0.0);
            relax_.add_operator(i, zeros, stage1_[k], 1.0, gain);
            rate_sum.assign(n, 0.0);
            relax_.add_operator(i, ones, stage1_[k], -1.0, rate_sum);
            for (std::size_t q = 0; q < n; ++q) rate_sum[q] += gain[q];
            for (std::size_t q = 0; q < n; ++q) {
                const double den1 = (1.0 - 2.0 * g) * rate_sum[q] * fl[q] - (1.0 - g) * gain[q];
                const double den2 = (1.0 - g) * (rate_sum[q] * f1[q] - gain[q]);
                const double b1 = den1 > 0.0 ? fl[q] / den1 : HUGE_VAL;
                const double b2 = den2 > 0.0 ? fl[q] / den2 : HUGE_VAL;
                bound = std::min(bound, std::min(b1, b2));
            }
        }
    }
    return bound;
}

StepReport Stepper::step(SimState& s, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("step: dt must be positive");
    StepReport rep;
    const double reference = mesh_.homogeneous() ? dt : std::min(dt, cfl_dt());
    for (;;) {
        double retry = 0.5 * dt;
        bool ok = false;
        try {
            ok = config_.scheme == Scheme::ARS222 ? attempt_ars(s, dt, rep, retry) : attempt_splitting(s, dt, rep, retry);
        } catch (const SolverFailure&) {
            if (0.5 * dt < config_.min_dt_fraction * reference) throw;
            retry = 0.5 * dt;
        }
        if (ok) {
            rep.dt = dt;
            s.time += dt;
            ++s.step;
            return rep;
        }
        ++rep.guard_triggers;
        dt = retry;
        if (dt < config_.min_dt_fraction * reference)
            throw SolverFailure("positivity guard: time step underflow (dt=" + std::to_string(dt) + ")");
    }
}

}  // namespace mbgk
