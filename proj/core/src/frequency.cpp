#include "mbgk/frequency.hpp"

#include <vector>

namespace mbgk {

std::string_view to_string(FrequencyFamily family) {
    return family == FrequencyFamily::Coulomb ? "coulomb" : "power_law";
}

std::string_view to_string(FrequencyAveraging averaging) {
    switch (averaging) {
        case FrequencyAveraging::VelocityDependent: return "veldep";
        case FrequencyAveraging::Thermal: return "thermal";
        case FrequencyAveraging::Vhat: return "vhat";
        case FrequencyAveraging::MaxwellAveraged: return "averaged";
    }
    return "veldep";
}

std::string FrequencyModel::tag() const {
    return std::string(to_string(family)) + "_" + std::string(to_string(averaging));
}

FrequencyTag parse_frequency_tag(std::string_view tag) {
    FrequencyTag out;
    std::string_view rest = tag;
    auto strip = [&](std::string_view prefix) {
        if (rest.substr(0, prefix.size()) == prefix) {
            rest.remove_prefix(prefix.size());
            return true;
        }
        return false;
    };
    if (strip("coulomb")) out.family = FrequencyFamily::Coulomb;
    else if (strip("power_law") || strip("sod") || strip("toy")) out.family = FrequencyFamily::PowerLaw;
    if (out.family && !rest.empty()) {
        if (rest.front() != '_') throw InvalidInput("unknown frequency tag '" + std::string(tag) + "'");
        rest.remove_prefix(1);
    }
    if (rest.empty() || rest == "veldep" || rest == "power") out.averaging = FrequencyAveraging::VelocityDependent;
    else if (rest == "thermal") out.averaging = FrequencyAveraging::Thermal;
    else if (rest == "vhat") out.averaging = FrequencyAveraging::Vhat;
    else if (rest == "averaged" || rest == "bar") out.averaging = FrequencyAveraging::MaxwellAveraged;
    else throw InvalidInput("unknown frequency tag '" + std::string(tag) + "'");
    if (!out.family && rest.empty()) throw InvalidInput("empty frequency tag");
    return out;
}

double reduced_mass(const Species& a, const Species& b) { return a.mass * b.mass / (a.mass + b.mass); }

double regularization_delta(const Species& si, const Species& sj, double T_mix, const FrequencyModel& model) {
    const double dv = model.delta_fraction * std::sqrt(T_mix / (2.0 * reduced_mass(si, sj)));
    return model.delta_factor * dv * dv * dv;
}

double coulomb_log(int Z_i, int Z_j, int Z_1, int Z_2, double n1, double n2, double T_mix_eV) {
    if (n1 < 0.0 || n2 < 0.0) throw InvalidInput("coulomb_log: negative density");
    if (!(T_mix_eV > 0.0)) throw InvalidInput("coulomb_log: non-positive temperature");
    const double e2 = constants::e2_eV_cm;
    const double four_pi = 4.0 * constants::pi;
    const double ne = Z_1 * n1 + Z_2 * n2;
    const double inv_lambda_e2 = four_pi * ne * e2 / T_mix_eV;
    const double inv_lambda_I2 = four_pi * (n1 * Z_1 * Z_1 + n2 * Z_2 * Z_2) * e2 / T_mix_eV;
    const double inv_lambda_D2 = inv_lambda_e2 + inv_lambda_I2;
    const double b90 = Z_i * Z_j * e2 / T_mix_eV;
    if (!(inv_lambda_D2 > 0.0)) throw InvalidInput("coulomb_log: no charged particles");
    return 0.5 * std::log1p(1.0 / (inv_lambda_D2 * b90 * b90));
}

CollisionModel::CollisionModel(FrequencyModel model, std::array<Species, 2> species,
                               std::array<const VelocityGrid*, 2> grids)
    : model_(model), species_(std::move(species)), grids_(grids) {
    if (!grids_[0] || !grids_[1]) throw InvalidInput("CollisionModel: missing grid");
    if (model_.family == FrequencyFamily::Coulomb &&
        (species_[0].charge_number <= 0 || species_[1].charge_number <= 0))
        throw InvalidInput("Coulomb frequencies need positive charge numbers");
}

namespace {

/// Per-axis factors of exp(-mu |v - u|^2 / T).
std::array<std::vector<double>, 3> gaussian_factors(const VelocityGrid& grid, double mu, const MixtureState& mix) {
    std::array<std::vector<double>, 3> e;
    const double a = mu / mix.T;
    for (int p = 0; p < 3; ++p) {
        const auto c = grid.coords(p);
        const auto w = grid.axis_weights();
        e[p].resize(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double d = c[i] - mix.u[p];
            e[p][i] = w[i] * std::exp(-a * d * d);
        }
    }
    return e;
}

template <class F>
double gaussian_average(const VelocityGrid& grid, double mu, const MixtureState& mix, F&& g) {
    const auto e = gaussian_factors(grid, mu, mix);
    const int N = grid.nodes_per_axis();
    const auto x = grid.coords(0), y = grid.coords(1), z = grid.coords(2);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < N; ++i) {
        const double dx = x[i] - mix.u[0];
        double pn = 0.0, pd = 0.0;
        for (int j = 0; j < N; ++j) {
            const double dy = y[j] - mix.u[1];
            const double dxy2 = dx * dx + dy * dy;
            double rn = 0.0, rd = 0.0;
            for (int l = 0; l < N; ++l) {
                const double dz = z[l] - mix.u[2];
                const double r = std::sqrt(dxy2 + dz * dz);
                rn += e[2][l] * g(r);
                rd += e[2][l];
            }
            pn += e[1][j] * rn;
            pd += e[1][j] * rd;
        }
        num += e[0][i] * pn;
        den += e[0][i] * pd;
    }
    return num / den;
}

}  // namespace

double CollisionModel::mean_cubed_speed(const VelocityGrid& grid, double mu, const MixtureState& mix) const {
    return gaussian_average(grid, mu, mix, [](double r) { return r * r * r; });
}

double CollisionModel::mean_shape(const VelocityGrid& grid, double mu, double delta, const MixtureState& mix) const {
    return gaussian_average(grid, mu, mix, [delta](double r) { return 1.0 / (delta + r * r * r); });
}

CellRates CollisionModel::rates(const std::array<SpeciesMoments, 2>& moments, const MixtureState& mix) const {
    CellRates out;
    if (!(mix.T > 0.0)) return out;
    const double T_eV = mix.T / constants::kB;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            PairRate& r = out.rate[i][j];
            r.center = mix.u;
            if (!moments[i].defined() || !moments[j].defined()) continue;
            const Species& si = species_[i];
            const Species& sj = species_[j];
            const double mu = reduced_mass(si, sj);
            r.delta = regularization_delta(si, sj, mix.T, model_);
            if (model_.family == FrequencyFamily::PowerLaw) {
                r.prefactor = model_.C * moments[j].n;
            } else {
                const double g = si.charge_number * sj.charge_number * constants::e2_erg_cm / (2.0 * mu);
                const double L = coulomb_log(si.charge_number, sj.charge_number, species_[0].charge_number,
                                             species_[1].charge_number, moments[0].n, moments[1].n, T_eV);
                r.prefactor = 4.0 * constants::pi * moments[j].n * g * g * L;
            }
            // Reduced-mass averages: the lighter grid of the pair resolves the weight.
            const VelocityGrid& avg_grid =
                (i == j || si.mass <= sj.mass) ? *grids_[i] : *grids_[j];
            switch (model_.averaging) {
                case FrequencyAveraging::VelocityDependent:
                    r.velocity_dependent = true;
                    break;
                case FrequencyAveraging::Thermal: {
                    const double vT = std::sqrt(mix.T / (2.0 * mu));
                    r.constant = r.prefactor / (r.delta + vT * vT * vT);
                    break;
                }
                case FrequencyAveraging::Vhat:
                    r.constant = r.prefactor / (r.delta + mean_cubed_speed(avg_grid, mu, mix));
                    break;
                case FrequencyAveraging::MaxwellAveraged:
                    r.constant = r.prefactor * mean_shape(avg_grid, mu, r.delta, mix);
                    break;
            }
        }
    }
    return out;
}

void CollisionModel::fill(int i, const PairRate& rate, std::span<double> out) const {
    const VelocityGrid& grid = *grids_[static_cast<std::size_t>(i)];
    if (out.size() != grid.size()) throw InvalidInput("CollisionModel::fill: shape mismatch");
    if (!rate.velocity_dependent) {
        std::fill(out.begin(), out.end(), rate.constant);
        return;
    }
    const int N = grid.nodes_per_axis();
    const auto x = grid.coords(0), y = grid.coords(1), z = grid.coords(2);
    double* o = out.data();
    for (int a = 0; a < N; ++a) {
        const double dx = x[a] - rate.center[0];
        for (int b = 0; b < N; ++b) {
            const double dy = y[b] - rate.center[1];
            const double dxy2 = dx * dx + dy * dy;
            for (int c = 0; c < N; ++c) {
                const double dz = z[c] - rate.center[2];
                const double r = std::sqrt(dxy2 + dz * dz);
                *o++ = rate.prefactor / (rate.delta + r * r * r);
            }
        }
    }
}

void eval_frequency(const FrequencyModel& model, int i, int j, const std::array<Species, 2>& species,
                    const std::array<const VelocityGrid*, 2>& grids,
                    const std::array<SpeciesMoments, 2>& moments, const MixtureState& mix,
                    std::span<double> out) {
    CollisionModel cm(model, species, grids);
    cm.fill(i, cm.rates(moments, mix).rate[i][j], out);
}

}  // namespace mbgk
