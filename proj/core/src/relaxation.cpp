#include "mbgk/relaxation.hpp"

#include <algorithm>

namespace mbgk {

void RelaxStats::merge(const RelaxStats& o) {
    max_iterations = std::max(max_iterations, o.max_iterations);
    solves += o.solves;
    stagnated += o.stagnated;
    lam2_warnings += o.lam2_warnings;
    max_residual = std::max(max_residual, o.max_residual);
    max_rate_sum = std::max(max_rate_sum, o.max_rate_sum);
}

void RelaxStats::record(const DualReport& r) {
    ++solves;
    max_iterations = std::max(max_iterations, r.newton.iterations);
    max_residual = std::max(max_residual, r.residual);
    if (r.newton.status == NewtonStatus::Stagnated) ++stagnated;
    if (r.lam2_warning) ++lam2_warnings;
}

namespace {

struct Buffers {
    std::array<std::vector<double>, 2> nu_self, nu_cross, c, w_self, w_cross, b_self, b_cross;

    void resize(int i, std::size_t n) {
        for (auto* v : {&nu_self, &nu_cross, &c, &w_self, &w_cross, &b_self, &b_cross}) (*v)[i].resize(n);
    }
};
thread_local Buffers buf;

bool any_positive(std::span<const double> v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
}

}  // namespace

Relaxation::Relaxation(const CollisionModel& model, std::array<Species, 2> species,
                       std::array<const VelocityGrid*, 2> grids, DualOptions options)
    : model_(model), species_(std::move(species)), grids_(grids), options_(options) {}

CellTargets Relaxation::relax_in_place(std::span<double> G1, std::span<double> G2, const CellRates& rates,
                                       double dt_eff, WarmStart* warm, RelaxStats& stats) const {
    const std::array<std::span<double>, 2> G{G1, G2};
    CellTargets out;
    out.rates = rates;

    for (int i = 0; i < 2; ++i) {
        const int j = 1 - i;
        const std::size_t n = grids_[i]->size();
        if (G[i].size() != n) throw InvalidInput("relax: field size does not match grid");
        buf.resize(i, n);
        model_.fill(i, rates.rate[i][i], buf.nu_self[i]);
        model_.fill(i, rates.rate[i][j], buf.nu_cross[i]);
        double peak = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            const double s = buf.nu_self[i][q] + buf.nu_cross[i][q];
            peak = std::max(peak, s);
            const double c = 1.0 / (1.0 + dt_eff * s);
            buf.c[i][q] = c;
            buf.w_self[i][q] = c * buf.nu_self[i][q];
            buf.w_cross[i][q] = c * buf.nu_cross[i][q];
        }
        stats.max_rate_sum = std::max(stats.max_rate_sum, peak);
    }

    for (int i = 0; i < 2; ++i) {
        if (!any_positive(buf.w_self[i])) continue;
        const IntraMultipliers* w0 = (warm && warm->has_intra[i]) ? &warm->intra[i] : nullptr;
        IntraSolution s = solve_intra(G[i], buf.w_self[i], *grids_[i], species_[i], w0, options_);
        stats.record(s.report);
        out.intra[i] = s.target;
        if (warm && s.target.active) {
            warm->intra[i] = s.lambda;
            warm->has_intra[i] = true;
        }
    }
    if (any_positive(buf.w_cross[0]) || any_positive(buf.w_cross[1])) {
        const InterMultipliers* w0 = (warm && warm->has_inter) ? &warm->inter : nullptr;
        InterSolution s = solve_inter(G1, G2, buf.w_cross[0], buf.w_cross[1], *grids_[0], *grids_[1], species_[0],
                                      species_[1], w0, options_);
        stats.record(s.report);
        out.inter = s.target;
        if (warm && s.target[0].active && s.target[1].active) {
            warm->inter = s.lambda;
            warm->has_inter = true;
        }
    }

    for (int i = 0; i < 2; ++i) {
        out.intra[i].evaluate(*grids_[i], buf.b_self[i]);
        out.inter[i].evaluate(*grids_[i], buf.b_cross[i]);
        double* g = G[i].data();
        const double* c = buf.c[i].data();
        const double* ns = buf.nu_self[i].data();
        const double* nc = buf.nu_cross[i].data();
        const double* bs = buf.b_self[i].data();
        const double* bc = buf.b_cross[i].data();
        for (std::size_t q = 0; q < G[i].size(); ++q)
            g[q] = c[q] * (g[q] + dt_eff * (ns[q] * bs[q] + nc[q] * bc[q]));
    }
    return out;
}

void Relaxation::add_operator(int i, std::span<const double> f, const CellTargets& targets, double factor,
                              std::span<double> out) const {
    const int j = 1 - i;
    const std::size_t n = grids_[i]->size();
    buf.resize(i, n);
    model_.fill(i, targets.rates.rate[i][i], buf.nu_self[i]);
    model_.fill(i, targets.rates.rate[i][j], buf.nu_cross[i]);
    targets.intra[i].evaluate(*grids_[i], buf.b_self[i]);
    targets.inter[i].evaluate(*grids_[i], buf.b_cross[i]);
    const double* ns = buf.nu_self[i].data();
    const double* nc = buf.nu_cross[i].data();
    const double* bs = buf.b_self[i].data();
    const double* bc = buf.b_cross[i].data();
    for (std::size_t q = 0; q < n; ++q)
        out[q] += factor * (ns[q] * (bs[q] - f[q]) + nc[q] * (bc[q] - f[q]));
}

double Relaxation::max_rate_sum(int i, const CellRates& rates) const {
    const int j = 1 - i;
    const auto& a = rates.rate[i][i];
    const auto& b = rates.rate[i][j];
    if (!a.velocity_dependent && !b.velocity_dependent) return a.constant + b.constant;
    buf.resize(i, grids_[i]->size());
    model_.fill(i, a, buf.nu_self[i]);
    model_.fill(i, b, buf.nu_cross[i]);
    double peak = 0.0;
    for (std::size_t q = 0; q < buf.nu_self[i].size(); ++q)
        peak = std::max(peak, buf.nu_self[i][q] + buf.nu_cross[i][q]);
    return peak;
}

CellState cell_state(std::span<const double> f1, std::span<const double> f2, const std::array<Species, 2>& species,
                     const std::array<const VelocityGrid*, 2>& grids) {
    CellState s;
    s.moments[0] = species_moments(f1, *grids[0], species[0]);
    s.moments[1] = species_moments(f2, *grids[1], species[1]);
    s.vacuum = !s.moments[0].defined() && !s.moments[1].defined();
    if (!s.vacuum) s.mix = mixture_state(s.moments[0], s.moments[1]);
    return s;
}

RelaxationOutput implicit_relax(std::span<const double> G1, std::span<const double> G2, double dt_eff,
                                const CollisionModel& model, const std::array<Species, 2>& species,
                                const std::array<const VelocityGrid*, 2>& grids, const DualOptions& options) {
    if (!(dt_eff > 0.0)) throw InvalidInput("implicit_relax: dt_eff must be positive");
    RelaxationOutput out;
    out.psi[0].assign(G1.begin(), G1.end());
    out.psi[1].assign(G2.begin(), G2.end());
    const CellState st = cell_state(G1, G2, species, grids);
    if (st.vacuum) return out;
    const CellRates rates = model.rates(st.moments, st.mix);
    Relaxation relax(model, species, grids, options);
    WarmStart warm;
    const CellTargets t = relax.relax_in_place(out.psi[0], out.psi[1], rates, dt_eff, &warm, out.stats);
    for (int i = 0; i < 2; ++i) {
        out.intra_target[i].resize(grids[i]->size());
        out.inter_target[i].resize(grids[i]->size());
        t.intra[i].evaluate(*grids[i], out.intra_target[i]);
        t.inter[i].evaluate(*grids[i], out.inter_target[i]);
        out.intra[i] = warm.intra[i];
    }
    out.inter = warm.inter;
    return out;
}

}  // namespace mbgk
