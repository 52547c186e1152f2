#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "mbgk/field.hpp"
#include "mbgk/frequency.hpp"
#include "mbgk/relaxation.hpp"
#include "mbgk/transport.hpp"

namespace mbgk {

enum class Scheme { Splitting1, ARS222 };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

struct SchemeConfig {
    static constexpr double gamma = 1.0 - 0.70710678118654752440;  ///< 1 - sqrt(2)/2
    static constexpr double delta = 1.0 - 1.0 / (2.0 * gamma);

    Scheme scheme = Scheme::ARS222;
    FluxConfig flux;
    std::optional<double> dt;                ///< fixed step; CFL otherwise
    bool local_positivity_bounds = false;    ///< use the nodewise step bounds instead of the global one
    double negative_tolerance = 1e-13;       ///< relative to the cellwise maximum
    double min_dt_fraction = 1e-6;           ///< abort below this fraction of the CFL step
    int threads = 1;
    DualOptions dual;
};

struct SimState {
    double time = 0.0;
    long step = 0;
    std::array<PhaseField, 2> f;
    std::vector<WarmStart> warm;  ///< one per cell
};

struct StepReport {
    double dt = 0.0;
    int guard_triggers = 0;
    std::array<double, 2> clipped_mass{0.0, 0.0};  ///< sum of clipped negative values times quadrature
    RelaxStats relax;
};

/// Owns the grids and advances a SimState by one of the two schemes.
class Stepper {
public:
    Stepper(std::array<Species, 2> species, std::array<VelocityGrid, 2> grids, SpatialMesh mesh,
            FrequencyModel frequency, SchemeConfig config);
    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    const std::array<Species, 2>& species() const noexcept { return species_; }
    const VelocityGrid& grid(int i) const { return grids_[static_cast<std::size_t>(i)]; }
    std::array<const VelocityGrid*, 2> grid_ptrs() const { return {&grids_[0], &grids_[1]}; }
    const SpatialMesh& mesh() const noexcept { return mesh_; }
    const SchemeConfig& config() const noexcept { return config_; }
    const CollisionModel& collision_model() const noexcept { return model_; }

    double cfl_dt() const;
    /// The configured fixed step, else the CFL step.
    double default_dt() const;

    /// Zero-initialized state with the right shapes.
    SimState make_state() const;

    /// Advances by dt, shrinking it if positivity fails. Returns what was actually done.
    StepReport step(SimState& state, double dt);

    /// The step used by the global positivity bound after a failed attempt.
    static double positivity_guard_dt(double max_rate_sum) {
        return 1.0 / ((1.0 - 2.0 * SchemeConfig::gamma) * max_rate_sum);
    }

private:
    bool attempt_splitting(SimState& s, double dt, StepReport& rep, double& retry_dt);
    bool attempt_ars(SimState& s, double dt, StepReport& rep, double& retry_dt);
    void transport(const std::array<PhaseField, 2>& f, std::array<PhaseField, 2>& out) const;
    /// Relaxes every cell of g in place with frequencies from the moments of g.
    void relax_all(std::array<PhaseField, 2>& g, double dt_eff, std::vector<WarmStart>& warm,
                   std::vector<CellTargets>* targets, RelaxStats& stats) const;
    /// Counts violations; clips tolerated negatives and records their mass.
    bool check_positivity(std::array<PhaseField, 2>& g, StepReport& rep) const;
    double local_bound(const SimState& s, double dt) const;

    std::array<Species, 2> species_;
    std::array<VelocityGrid, 2> grids_;
    SpatialMesh mesh_;
    SchemeConfig config_;
    CollisionModel model_;
    Relaxation relax_;

    std::array<PhaseField, 2> a_, b_, c_;
    std::vector<CellTargets> stage1_;
};

}  // namespace mbgk
