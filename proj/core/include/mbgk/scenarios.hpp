#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbgk/frequency.hpp"
#include "mbgk/stepper.hpp"
#include "mbgk/transport.hpp"

namespace mbgk {

/// Code units: everything dimensionless. Cgs: grams, cm, s, temperatures given in eV.
enum class Units { Code, Cgs };

enum class InitialKind {
    Maxwellian,  ///< piecewise-constant Maxwellian regions
    ToyBump,     ///< 0.1 m^27 exp(-0.01 / ((0.75/m)^10 - |v - u|_1^10)) inside the 1-norm ball
    SmoothSine,  ///< n = 1 + a sin(pi x), u1 = const, T = 1 / (1 + a sin(pi x))
};

std::string_view to_string(Units u);
std::string_view to_string(InitialKind k);

/// Per-species state of one region. Temperatures in eV when Units::Cgs.
struct RegionState {
    std::array<double, 2> n{1.0, 1.0};
    std::array<Vec3, 2> u{};
    std::array<double, 2> T{1.0, 1.0};

    bool operator==(const RegionState&) const = default;
};

/// Applies to cells whose center is <= x_end; the last region extends to the right edge.
struct Region {
    double x_end = 0.0;
    RegionState state;

    bool operator==(const Region&) const = default;
};

struct ScenarioConfig {
    std::string name;
    Units units = Units::Code;
    std::array<Species, 2> species{};
    InitialKind initial = InitialKind::Maxwellian;
    std::vector<Region> regions;     ///< Maxwellian regions; ToyBump reads u from regions[0]
    double sine_amplitude = 0.1;     ///< SmoothSine only
    double sine_velocity = 1.0;      ///< SmoothSine only
    FrequencyModel frequency;
    SpatialMesh mesh;
    Scheme scheme = Scheme::ARS222;
    int flux_order = 2;
    int velocity_nodes = 48;
    std::optional<double> dt;        ///< CFL step when empty
    double t_end = 1.0;
    int snapshot_every = 0;          ///< steps between snapshots; 0 writes only the first and last
    std::vector<int> slice_cells;    ///< cells for distribution slices
    int threads = 1;

    /// Energy per unit of the configured temperature.
    double temperature_scale() const noexcept { return units == Units::Cgs ? constants::kB : 1.0; }
    /// Throws InvalidInput when a field is out of range.
    void validate() const;
    SchemeConfig scheme_config() const;

    bool operator==(const ScenarioConfig&) const = default;
};

std::vector<std::string> preset_names();
/// Throws InvalidInput on an unknown name.
ScenarioConfig preset(std::string_view name);

std::string to_json(const ScenarioConfig& config);
/// Parses a full config, or a {"preset": name, ...} object whose remaining keys patch the preset.
ScenarioConfig config_from_json(std::string_view json);
/// Merges a JSON object onto the config's own serialization.
ScenarioConfig apply_overrides(const ScenarioConfig& config, std::string_view json);

/// Replaces the frequency averaging. A family prefix in the tag is accepted but the preset keeps
/// its own family, so "coulomb_vhat" on a code-unit preset selects the power-law vhat variant.
void apply_frequency_tag(ScenarioConfig& config, std::string_view tag);

/// Mixture state of the initial data used to center the velocity grids.
MixtureState initial_mixture(const ScenarioConfig& config);

/// Fills the distribution of every cell of a state shaped for `grids`.
void initialize_state(const ScenarioConfig& config, const std::array<VelocityGrid, 2>& grids, SimState& state);

struct Scenario {
    ScenarioConfig config;
    MixtureState mixture;
    std::unique_ptr<Stepper> stepper;
    SimState state;
};

Scenario build_scenario(const ScenarioConfig& config);
/// Same, with the velocity grids centered on a given mixture state instead of the config's own.
Scenario build_scenario(const ScenarioConfig& config, const MixtureState& grid_mixture);
Scenario build_scenario(std::string_view name, std::string_view overrides_json = {});

}  // namespace mbgk
