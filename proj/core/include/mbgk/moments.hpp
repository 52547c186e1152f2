#pragma once

#include <span>
#include <vector>

#include "mbgk/grid.hpp"

namespace mbgk {

/// Density, mass density, mean velocity and temperature (energy units) of one species.
/// When n == 0 the velocity and temperature are NaN.
struct SpeciesMoments {
    double n = 0.0;
    double rho = 0.0;
    Vec3 u{0.0, 0.0, 0.0};
    double T = 0.0;

    bool defined() const noexcept { return n > 0.0; }
};

struct MixtureState {
    Vec3 u{0.0, 0.0, 0.0};
    double T = 0.0;
};

SpeciesMoments species_moments(std::span<const double> f, const VelocityGrid& grid, const Species& species);

/// Mass-weighted velocity and the mixture temperature including the drift term.
MixtureState mixture_state(const SpeciesMoments& s1, const SpeciesMoments& s2);

/// Mixture temperature written through the individual kinetic energies. Algebraically equal to
/// mixture_state(...).T; kept separately for cross-checking.
double mixture_temperature_energy_form(const SpeciesMoments& s1, const SpeciesMoments& s2);

void maxwellian(std::span<double> out, const Species& species, double n, const Vec3& u, double T,
                const VelocityGrid& grid);
std::vector<double> maxwellian(const Species& species, double n, const Vec3& u, double T,
                               const VelocityGrid& grid);

}  // namespace mbgk
