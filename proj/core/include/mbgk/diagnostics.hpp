#pragma once

#include <array>
#include <span>
#include <vector>

#include "mbgk/field.hpp"
#include "mbgk/moments.hpp"
#include "mbgk/transport.hpp"

namespace mbgk {

using FieldPair = std::array<PhaseField, 2>;
using GridPair = std::array<const VelocityGrid*, 2>;
using SpeciesPair = std::array<Species, 2>;

/// Totals per unit cross-section: sum_k sum_q omega_q a f dv^3 dx.
struct ConservedTotals {
    std::array<double, 2> mass{0.0, 0.0};
    Vec3 momentum{0.0, 0.0, 0.0};
    double energy = 0.0;  ///< sum of m |v|^2 / 2
};

ConservedTotals conserved_totals(const FieldPair& f, const SpatialMesh& mesh, const GridPair& grids,
                                 const SpeciesPair& species);

/// Mixture velocity and temperature of the whole domain, from the totals.
MixtureState global_mixture(const ConservedTotals& totals, const SpeciesPair& species);

/// Largest relative change of any total between two records.
double max_relative_drift(const ConservedTotals& a, const ConservedTotals& b);

/// h(z) = z log z - z with h(0) = 0.
inline double entropy_density(double z) { return z > 0.0 ? z * std::log(z) - z : 0.0; }

/// H = sum omega (h(f_1) + h(f_2)) dv^3 dx. Throws InvalidInput for negative values.
double entropy(const FieldPair& f, const SpatialMesh& mesh, const GridPair& grids);

struct EntropyRecord {
    double H = 0.0;
    double dH_dt = 0.0;  ///< backward difference; zero for the first record
};

/// Keeps the previous value for the backward difference.
class EntropyTracker {
public:
    EntropyRecord record(double H, double dt);

private:
    bool has_previous_ = false;
    double previous_ = 0.0;
};

/// sum_k sum_q |f_coarse - (f_fine[2k] + f_fine[2k+1]) / 2| dv^3 dx_coarse per species.
std::array<double, 2> l1_self_error(const FieldPair& coarse, const FieldPair& fine, const SpatialMesh& coarse_mesh,
                                    const GridPair& grids);

/// (a - b) / (|a| + |b|), zero when both vanish.
inline double relative_difference(double a, double b) {
    const double s = std::abs(a) + std::abs(b);
    return s > 0.0 ? (a - b) / s : 0.0;
}
std::vector<double> relative_difference(std::span<const double> a, std::span<const double> b);

/// Per-cell moments of both species.
std::vector<std::array<SpeciesMoments, 2>> cell_moments(const FieldPair& f, const GridPair& grids,
                                                        const SpeciesPair& species);

}  // namespace mbgk
