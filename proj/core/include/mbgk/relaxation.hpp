#pragma once

#include <array>
#include <span>
#include <vector>

#include "mbgk/dual_optimizer.hpp"
#include "mbgk/frequency.hpp"

namespace mbgk {

/// Everything needed to rebuild the relaxation operator of one cell after a solve.
struct CellTargets {
    CellRates rates;
    std::array<ScaledTarget, 2> intra;  ///< B_11 on grid 1, B_22 on grid 2
    std::array<ScaledTarget, 2> inter;  ///< B_12 on grid 1, B_21 on grid 2
};

/// Multipliers carried between solves of the same cell.
struct WarmStart {
    std::array<IntraMultipliers, 2> intra{};
    InterMultipliers inter{};
    std::array<bool, 2> has_intra{false, false};
    bool has_inter = false;
};

/// Solver statistics accumulated over cells.
struct RelaxStats {
    int max_iterations = 0;
    long solves = 0;
    long stagnated = 0;
    long lam2_warnings = 0;
    double max_residual = 0.0;
    double max_rate_sum = 0.0;  ///< max over nodes of nu_ii + nu_ij

    void merge(const RelaxStats& o);
    void record(const DualReport& r);
};

/// Result of one implicit update on a single cell, returned by value.
struct RelaxationOutput {
    std::array<std::vector<double>, 2> psi;
    std::array<std::vector<double>, 2> intra_target;  ///< B_ii
    std::array<std::vector<double>, 2> inter_target;  ///< B_ij
    std::array<IntraMultipliers, 2> intra;
    InterMultipliers inter;
    RelaxStats stats;
};

/// Implicit BGK update psi_i = c_i G_i + c_i dt (nu_ii B_ii + nu_ij B_ij), c_i = 1/(1 + dt(nu_ii + nu_ij)).
class Relaxation {
public:
    Relaxation(const CollisionModel& model, std::array<Species, 2> species,
               std::array<const VelocityGrid*, 2> grids, DualOptions options = {});

    /// Overwrites G with psi. Solves the three dual problems with weights c nu.
    CellTargets relax_in_place(std::span<double> G1, std::span<double> G2, const CellRates& rates, double dt_eff,
                               WarmStart* warm, RelaxStats& stats) const;

    /// out += factor * (nu_ii (B_ii - f) + nu_ij (B_ij - f)) for species i.
    void add_operator(int i, std::span<const double> f, const CellTargets& targets, double factor,
                      std::span<double> out) const;

    /// Largest nu_ii + nu_ij over the nodes of species i.
    double max_rate_sum(int i, const CellRates& rates) const;

    const std::array<Species, 2>& species() const noexcept { return species_; }
    const VelocityGrid& grid(int i) const { return *grids_[static_cast<std::size_t>(i)]; }

private:
    const CollisionModel& model_;
    std::array<Species, 2> species_;
    std::array<const VelocityGrid*, 2> grids_;
    DualOptions options_;
};

/// Single-cell implicit update with frequencies taken from the moments of G.
RelaxationOutput implicit_relax(std::span<const double> G1, std::span<const double> G2, double dt_eff,
                                const CollisionModel& model, const std::array<Species, 2>& species,
                                const std::array<const VelocityGrid*, 2>& grids, const DualOptions& options = {});

/// Backward-Euler relaxation over a full step dt.
inline RelaxationOutput first_order_relax(std::span<const double> f1, std::span<const double> f2, double dt,
                                          const CollisionModel& model, const std::array<Species, 2>& species,
                                          const std::array<const VelocityGrid*, 2>& grids,
                                          const DualOptions& options = {}) {
    return implicit_relax(f1, f2, dt, model, species, grids, options);
}

/// Local moments and mixture state of one cell; the mixture is unset for a vacuum cell.
struct CellState {
    std::array<SpeciesMoments, 2> moments;
    MixtureState mix;
    bool vacuum = false;
};
CellState cell_state(std::span<const double> f1, std::span<const double> f2, const std::array<Species, 2>& species,
                     const std::array<const VelocityGrid*, 2>& grids);

}  // namespace mbgk
