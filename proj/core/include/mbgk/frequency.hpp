#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mbgk/grid.hpp"
#include "mbgk/moments.hpp"

namespace mbgk {

/// Prefactor law: C n_j (code units) or the Coulomb form with its logarithm (cgs).
enum class FrequencyFamily { PowerLaw, Coulomb };

/// How the 1/(delta + |v - u_mix|^3) shape is used.
enum class FrequencyAveraging {
    VelocityDependent,  ///< nodewise shape
    Thermal,            ///< |v - u_mix| replaced by sqrt(T_mix / (2 mu))
    Vhat,               ///< |v - u_mix|^3 replaced by its average against the reduced-mass Maxwellian
    MaxwellAveraged,    ///< frequency averaged against the reduced-mass Maxwellian
};

struct FrequencyModel {
    FrequencyFamily family = FrequencyFamily::PowerLaw;
    FrequencyAveraging averaging = FrequencyAveraging::VelocityDependent;
    double C = 1.0;                ///< power-law prefactor
    double delta_factor = 0.1;     ///< delta = delta_factor * dv_reg^3
    double delta_fraction = 0.25;  ///< dv_reg = delta_fraction * sqrt(T_mix / (2 mu))

    std::string tag() const;
    bool operator==(const FrequencyModel&) const = default;
};

/// Parsed form of a frequency tag such as "coulomb_vhat", "power_law", "sod_veldep" or "vhat".
struct FrequencyTag {
    std::optional<FrequencyFamily> family;
    FrequencyAveraging averaging = FrequencyAveraging::VelocityDependent;
};
FrequencyTag parse_frequency_tag(std::string_view tag);
std::string_view to_string(FrequencyFamily family);
std::string_view to_string(FrequencyAveraging averaging);

double reduced_mass(const Species& a, const Species& b);

/// delta_ij = 0.1 (sqrt(T_mix / (2 mu_ij)) / 4)^3 with T_mix in energy units.
double regularization_delta(const Species& si, const Species& sj, double T_mix,
                            const FrequencyModel& model = {});

/// Coulomb logarithm for the pair (Z_i, Z_j) in a two-ion plasma with charges (Z_1, Z_2) and
/// densities (n1, n2). T_mix_eV is the mixture temperature in eV.
double coulomb_log(int Z_i, int Z_j, int Z_1, int Z_2, double n1, double n2, double T_mix_eV);

/// nu_ij(v) = prefactor / (delta + |v - center|^3), or a constant when !velocity_dependent.
struct PairRate {
    double prefactor = 0.0;
    double delta = 1.0;
    double constant = 0.0;
    bool velocity_dependent = false;
    Vec3 center{0.0, 0.0, 0.0};

    double operator()(const Vec3& v) const {
        if (!velocity_dependent) return constant;
        const Vec3 w = v - center;
        const double r = std::sqrt(norm2(w));
        return prefactor / (delta + r * r * r);
    }
    /// Largest value over all velocities.
    double upper_bound() const { return velocity_dependent ? prefactor / delta : constant; }
};

/// Rates of all four ordered pairs in one cell; rate[i][j] lives on the grid of species i.
struct CellRates {
    std::array<std::array<PairRate, 2>, 2> rate{};
};

/// Evaluates collision frequencies for a fixed species pair and their velocity grids.
class CollisionModel {
public:
    CollisionModel(FrequencyModel model, std::array<Species, 2> species,
                   std::array<const VelocityGrid*, 2> grids);

    const FrequencyModel& model() const noexcept { return model_; }

    /// Pair coefficients from local moments. Absent species give zero rates.
    CellRates rates(const std::array<SpeciesMoments, 2>& moments, const MixtureState& mix) const;

    /// Fills nu_ij on the grid of species i.
    void fill(int i, const PairRate& rate, std::span<double> out) const;

private:
    double mean_cubed_speed(const VelocityGrid& grid, double mu, const MixtureState& mix) const;
    double mean_shape(const VelocityGrid& grid, double mu, double delta, const MixtureState& mix) const;

    FrequencyModel model_;
    std::array<Species, 2> species_;
    std::array<const VelocityGrid*, 2> grids_;
};

/// Convenience wrapper: nu_ij on grid_i for one cell.
void eval_frequency(const FrequencyModel& model, int i, int j, const std::array<Species, 2>& species,
                    const std::array<const VelocityGrid*, 2>& grids,
                    const std::array<SpeciesMoments, 2>& moments, const MixtureState& mix,
                    std::span<double> out);

}  // namespace mbgk
