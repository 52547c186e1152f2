#include "mbgk/scenarios.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

namespace mbgk {

namespace {

using nlohmann::json;

constexpr double inf = std::numeric_limits<double>::infinity();

Species make_species(double mass, int Z, std::string name) { return Species{mass, Z, std::move(name)}; }

RegionState uniform_state(std::array<double, 2> n, double u1, std::array<double, 2> T) {
    RegionState s;
    s.n = n;
    s.u = {Vec3{u1, 0.0, 0.0}, Vec3{u1, 0.0, 0.0}};
    s.T = T;
    return s;
}

ScenarioConfig toy() {
    ScenarioConfig c;
    c.name = "toy";
    c.units = Units::Code;
    c.species = {make_species(1.0, 0, "species1"), make_species(1.5, 0, "species2")};
    c.initial = InitialKind::ToyBump;
    RegionState s;
    s.u = {Vec3{0.1, 0.0, 0.0}, Vec3{-0.1, 0.0, 0.0}};
    c.regions = {Region{inf, s}};
    c.frequency = FrequencyModel{FrequencyFamily::PowerLaw, FrequencyAveraging::VelocityDependent, 10.0};
    c.mesh = SpatialMesh{0.0, 1.0, 1, Boundary::Periodic};
    c.scheme = Scheme::Splitting1;
    c.flux_order = 1;
    c.dt = 0.01;
    c.t_end = 4.0;
    c.snapshot_every = 25;
    c.slice_cells = {0};
    return c;
}

ScenarioConfig hydrogen_carbon() {
    ScenarioConfig c;
    c.name = "hydrogen_carbon";
    c.units = Units::Cgs;
    c.species = {make_species(1.993e-23, 6, "carbon"), make_species(1.661e-24, 1, "hydrogen")};
    c.initial = InitialKind::Maxwellian;
    RegionState s;
    s.n = {6.1e22, 3.6133e21};
    s.u = {Vec3{9.818e5, 0.0, 0.0}, Vec3{0.0, 0.0, 0.0}};
    s.T = {150.0, 100.0};
    c.regions = {Region{inf, s}};
    c.frequency = FrequencyModel{FrequencyFamily::Coulomb, FrequencyAveraging::VelocityDependent, 1.0};
    c.mesh = SpatialMesh{0.0, 1.0, 1, Boundary::Periodic};
    c.scheme = Scheme::ARS222;
    c.flux_order = 2;
    c.dt = 0.8e-15;
    c.t_end = 10000 * 0.8e-15;
    c.snapshot_every = 100;
    c.slice_cells = {0};
    return c;
}

ScenarioConfig sod() {
    ScenarioConfig c;
    c.name = "sod";
    c.units = Units::Code;
    c.species = {make_species(1.0, 0, "species1"), make_species(1.0, 0, "species2")};
    c.regions = {Region{0.0, uniform_state({1.0, 1.0}, 0.0, {1.0, 1.0})},
                 Region{inf, uniform_state({0.1, 0.1}, 0.0, {0.8, 0.8})}};
    c.frequency = FrequencyModel{FrequencyFamily::PowerLaw, FrequencyAveraging::VelocityDependent, 2e4};
    c.mesh = SpatialMesh{-0.5, 0.5, 400, Boundary::Copy};
    c.t_end = 0.055;
    return c;
}

std::array<Species, 2> hydrogen_helium() {
    return {make_species(1.655e-24, 1, "hydrogen"), make_species(3.308e-24, 2, "helium")};
}

ScenarioConfig shock(std::string name, double half_width, RegionState left, RegionState right, double t_end) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.units = Units::Cgs;
    c.species = hydrogen_helium();
    c.regions = {Region{0.0, left}, Region{inf, right}};
    c.frequency = FrequencyModel{FrequencyFamily::Coulomb, FrequencyAveraging::VelocityDependent, 1.0};
    c.mesh = SpatialMesh{-half_width, half_width, 200, Boundary::Copy};
    c.t_end = t_end;
    return c;
}

ScenarioConfig mach17() {
    return shock("mach17", 3e-4, uniform_state({6.666e19, 6.666e19}, 1.7634411e7, {100.0, 100.0}),
                 uniform_state({1.308e20, 1.308e20}, 8.985007e6, {171.32, 171.32}), 5.390e-12);
}

ScenarioConfig mach4() {
    return shock("mach4", 6e-4, uniform_state({3.3488e19, 3.3488e19}, 5.06e7, {100.0, 100.0}),
                 uniform_state({1.128e20, 1.128e20}, 1.50e7, {586.3, 586.3}), 6.345e-12);
}

ScenarioConfig interpenetration(std::string name, double n_high, double n_low) {
    return shock(std::move(name), 25e-4, uniform_state({n_high, n_low}, 2.2e6, {10.0, 10.0}),
                 uniform_state({n_low, n_high}, -2.2e6, {10.0, 10.0}), 120.870e-12);
}

ScenarioConfig appendix(std::string name, double C) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.units = Units::Code;
    c.species = {make_species(1.0, 0, "species1"), make_species(1.0, 0, "species2")};
    c.initial = InitialKind::SmoothSine;
    c.sine_amplitude = 0.1;
    c.sine_velocity = 1.0;
    c.frequency = FrequencyModel{FrequencyFamily::PowerLaw, FrequencyAveraging::VelocityDependent, C};
    c.mesh = SpatialMesh{0.0, 2.0, 20, Boundary::Periodic};
    c.t_end = 0.2;
    return c;
}

const RegionState& region_at(const ScenarioConfig& c, double x) {
    for (const auto& r : c.regions)
        if (x <= r.x_end) return r.state;
    return c.regions.back().state;
}

/// Per-species (n, u, T) of the initial data at x, T in energy units. Not used for ToyBump.
std::array<SpeciesMoments, 2> local_state(const ScenarioConfig& c, double x) {
    std::array<SpeciesMoments, 2> out;
    const double scale = c.temperature_scale();
    for (int i = 0; i < 2; ++i) {
        const double m = c.species[i].mass;
        if (c.initial == InitialKind::SmoothSine) {
            const double s = 1.0 + c.sine_amplitude * std::sin(constants::pi * x);
            out[i] = SpeciesMoments{s, m * s, Vec3{c.sine_velocity, 0.0, 0.0}, scale / s};
        } else {
            const auto& r = region_at(c, x);
            out[i] = SpeciesMoments{r.n[i], m * r.n[i], r.u[i], r.T[i] * scale};
        }
    }
    return out;
}

double toy_bump(double m, double s1) {
    const double r = 0.75 / m;
    if (!(s1 < r)) return 0.0;
    const double d = std::pow(r, 10) - std::pow(s1, 10);
    return 0.1 * std::pow(m, 27) * std::exp(-0.01 / d);
}

/// Continuum moments of the toy bump. The integrand depends on |w|_1 only; the 1-norm ball of
/// radius s has volume 4 s^3 / 3 and second moment 2 s^5 / 5.
SpeciesMoments toy_moments(const Species& sp, const Vec3& u) {
    const double r = 0.75 / sp.mass;
    constexpr int M = 200000;
    const double h = r / M;
    double n = 0.0, w2 = 0.0;
    for (int k = 0; k < M; ++k) {
        const double s = (k + 0.5) * h;
        const double g = toy_bump(sp.mass, s);
        n += g * 4.0 * s * s;
        w2 += g * 2.0 * s * s * s * s;
    }
    n *= h;
    w2 *= h;
    return SpeciesMoments{n, sp.mass * n, u, sp.mass * w2 / (3.0 * n)};
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 vec_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw InvalidInput("velocity must be a 3-array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

Units parse_units(std::string_view s) {
    if (s == "code") return Units::Code;
    if (s == "cgs") return Units::Cgs;
    throw InvalidInput("unknown units '" + std::string(s) + "'");
}

InitialKind parse_initial(std::string_view s) {
    if (s == "maxwellian") return InitialKind::Maxwellian;
    if (s == "toy_bump") return InitialKind::ToyBump;
    if (s == "smooth_sine") return InitialKind::SmoothSine;
    throw InvalidInput("unknown initial kind '" + std::string(s) + "'");
}

FrequencyFamily parse_family(std::string_view s) {
    if (s == "coulomb") return FrequencyFamily::Coulomb;
    if (s == "power_law") return FrequencyFamily::PowerLaw;
    throw InvalidInput("unknown frequency family '" + std::string(s) + "'");
}

json to_json_value(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    j["units"] = to_string(c.units);
    j["species"] = json::array();
    for (const auto& s : c.species)
        j["species"].push_back({{"mass", s.mass}, {"charge_number", s.charge_number}, {"name", s.name}});
    j["initial"] = to_string(c.initial);
    j["regions"] = json::array();
    for (const auto& r : c.regions) {
        j["regions"].push_back({{"x_end", number_or_null(r.x_end)},
                                {"n", {r.state.n[0], r.state.n[1]}},
                                {"u", {vec_json(r.state.u[0]), vec_json(r.state.u[1])}},
                                {"T", {r.state.T[0], r.state.T[1]}}});
    }
    j["sine_amplitude"] = c.sine_amplitude;
    j["sine_velocity"] = c.sine_velocity;
    j["frequency"] = {{"family", to_string(c.frequency.family)},
                      {"averaging", to_string(c.frequency.averaging)},
                      {"C", c.frequency.C},
                      {"delta_factor", c.frequency.delta_factor},
                      {"delta_fraction", c.frequency.delta_fraction}};
    j["mesh"] = {{"x_min", c.mesh.x_min},
                 {"x_max", c.mesh.x_max},
                 {"cells", c.mesh.cells},
                 {"boundary", to_string(c.mesh.boundary)}};
    j["scheme"] = to_string(c.scheme);
    j["flux_order"] = c.flux_order;
    j["velocity_nodes"] = c.velocity_nodes;
    j["dt"] = c.dt ? json(*c.dt) : json(nullptr);
    j["t_end"] = c.t_end;
    j["snapshot_every"] = c.snapshot_every;
    j["slice_cells"] = c.slice_cells;
    j["threads"] = c.threads;
    return j;
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

ScenarioConfig from_json_value(const json& j) {
    if (!j.is_object()) throw InvalidInput("scenario config must be a JSON object");
    static const char* known[] = {"name", "units", "species", "initial", "regions", "sine_amplitude",
                                  "sine_velocity", "frequency", "mesh", "scheme", "flux_order",
                                  "velocity_nodes", "dt", "t_end", "snapshot_every", "slice_cells", "threads"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw InvalidInput("unknown config key '" + key + "'");
    }
    ScenarioConfig c;
    read(j, "name", c.name);
    if (j.contains("units")) c.units = parse_units(j["units"].get<std::string>());
    if (j.contains("species")) {
        const auto& s = j["species"];
        if (!s.is_array() || s.size() != 2) throw InvalidInput("exactly two species are required");
        for (std::size_t i = 0; i < 2; ++i) {
            read(s[i], "mass", c.species[i].mass);
            read(s[i], "charge_number", c.species[i].charge_number);
            read(s[i], "name", c.species[i].name);
        }
    }
    if (j.contains("initial")) c.initial = parse_initial(j["initial"].get<std::string>());
    if (j.contains("regions")) {
        for (const auto& r : j["regions"]) {
            Region reg;
            reg.x_end = r.contains("x_end") && !r["x_end"].is_null() ? r["x_end"].get<double>() : inf;
            if (r.contains("n")) reg.state.n = {r["n"].at(0).get<double>(), r["n"].at(1).get<double>()};
            if (r.contains("u")) reg.state.u = {vec_from(r["u"].at(0)), vec_from(r["u"].at(1))};
            if (r.contains("T")) reg.state.T = {r["T"].at(0).get<double>(), r["T"].at(1).get<double>()};
            c.regions.push_back(reg);
        }
    }
    read(j, "sine_amplitude", c.sine_amplitude);
    read(j, "sine_velocity", c.sine_velocity);
    if (j.contains("frequency")) {
        const auto& f = j["frequency"];
        if (f.is_string()) {
            const auto tag = parse_frequency_tag(f.get<std::string>());
            if (tag.family) c.frequency.family = *tag.family;
            c.frequency.averaging = tag.averaging;
        } else {
            if (f.contains("family")) c.frequency.family = parse_family(f["family"].get<std::string>());
            if (f.contains("averaging")) {
                const auto tag = parse_frequency_tag(f["averaging"].get<std::string>());
                c.frequency.averaging = tag.averaging;
            }
            read(f, "C", c.frequency.C);
            read(f, "delta_factor", c.frequency.delta_factor);
            read(f, "delta_fraction", c.frequency.delta_fraction);
        }
    }
    if (j.contains("mesh")) {
        const auto& m = j["mesh"];
        read(m, "x_min", c.mesh.x_min);
        read(m, "x_max", c.mesh.x_max);
        read(m, "cells", c.mesh.cells);
        if (m.contains("boundary")) c.mesh.boundary = parse_boundary(m["boundary"].get<std::string>());
    }
    if (j.contains("scheme")) c.scheme = parse_scheme(j["scheme"].get<std::string>());
    read(j, "flux_order", c.flux_order);
    read(j, "velocity_nodes", c.velocity_nodes);
    if (j.contains("dt")) {
        if (j["dt"].is_null()) c.dt.reset();
        else c.dt = j["dt"].get<double>();
    }
    read(j, "t_end", c.t_end);
    read(j, "snapshot_every", c.snapshot_every);
    read(j, "slice_cells", c.slice_cells);
    read(j, "threads", c.threads);
    c.validate();
    return c;
}

json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

/// A frequency tag in a patch only replaces the averaging of the base config.
void merge_onto(json& base, json patch) {
    if (auto it = patch.find("frequency"); it != patch.end() && it->is_string())
        *it = json{{"averaging", it->get<std::string>()}};
    base.merge_patch(patch);
}

template <class F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("bad config value: ") + e.what());
    }
}

}  // namespace

std::string_view to_string(Units u) { return u == Units::Cgs ? "cgs" : "code"; }

std::string_view to_string(InitialKind k) {
    switch (k) {
        case InitialKind::Maxwellian: return "maxwellian";
        case InitialKind::ToyBump: return "toy_bump";
        case InitialKind::SmoothSine: return "smooth_sine";
    }
    return "maxwellian";
}

void ScenarioConfig::validate() const {
    for (const auto& s : species) s.validate();
    mesh.validate();
    if (flux_order != 1 && flux_order != 2) throw InvalidInput("flux_order must be 1 or 2");
    if (velocity_nodes < 3) throw InvalidInput("velocity_nodes must be at least 3");
    if (dt && !(*dt > 0.0)) throw InvalidInput("dt must be positive");
    if (!(t_end >= 0.0)) throw InvalidInput("t_end must be non-negative");
    if (snapshot_every < 0) throw InvalidInput("snapshot_every must be non-negative");
    if (threads < 1) throw InvalidInput("threads must be positive");
    if (!(frequency.C > 0.0) || !(frequency.delta_factor > 0.0) || !(frequency.delta_fraction > 0.0))
        throw InvalidInput("frequency parameters must be positive");
    if (frequency.family == FrequencyFamily::Coulomb) {
        if (units != Units::Cgs) throw InvalidInput("the Coulomb frequency needs cgs units");
        for (const auto& s : species)
            if (s.charge_number <= 0) throw InvalidInput("the Coulomb frequency needs positive charge numbers");
    }
    for (int k : slice_cells)
        if (k < 0 || k >= mesh.cells) throw InvalidInput("slice cell out of range");
    if (initial != InitialKind::SmoothSine && regions.empty()) throw InvalidInput("no initial regions");
    for (std::size_t r = 0; r < regions.size(); ++r) {
        if (r > 0 && !(regions[r].x_end > regions[r - 1].x_end)) throw InvalidInput("regions must be ordered");
        if (initial != InitialKind::Maxwellian) continue;
        const auto& s = regions[r].state;
        for (int i = 0; i < 2; ++i) {
            if (!(s.n[i] >= 0.0)) throw InvalidInput("densities must be non-negative");
            if (!(s.T[i] > 0.0)) throw InvalidInput("temperatures must be positive");
        }
        if (s.n[0] + s.n[1] <= 0.0) throw InvalidInput("region is vacuum");
    }
    if (initial == InitialKind::SmoothSine && !(std::abs(sine_amplitude) < 1.0))
        throw InvalidInput("sine amplitude must be below 1");
}

SchemeConfig ScenarioConfig::scheme_config() const {
    SchemeConfig s;
    s.scheme = scheme;
    s.flux.order = flux_order;
    s.dt = dt;
    s.threads = threads;
    return s;
}

std::vector<std::string> preset_names() {
    return {"toy",    "hydrogen_carbon",       "sod", "mach17", "mach4", "interpenetration_high",
            "interpenetration_low", "appendix_convergence", "appendix_convergence_stiff"};
}

ScenarioConfig preset(std::string_view name) {
    if (name == "toy") return toy();
    if (name == "hydrogen_carbon") return hydrogen_carbon();
    if (name == "sod") return sod();
    if (name == "mach17") return mach17();
    if (name == "mach4") return mach4();
    if (name == "interpenetration_high") return interpenetration("interpenetration_high", 1e20, 1e17);
    if (name == "interpenetration_low") return interpenetration("interpenetration_low", 1e18, 1e15);
    if (name == "appendix_convergence") return appendix("appendix_convergence", 1.0);
    if (name == "appendix_convergence_stiff") return appendix("appendix_convergence_stiff", 1e4);
    throw InvalidInput("unknown preset '" + std::string(name) + "'");
}

std::string to_json(const ScenarioConfig& config) { return to_json_value(config).dump(2); }

ScenarioConfig config_from_json(std::string_view text) {
    return guarded([&] {
        json j = parse(text);
        if (j.is_object() && j.contains("preset")) {
            const auto name = j["preset"].get<std::string>();
            j.erase("preset");
            json base = to_json_value(preset(name));
            merge_onto(base, std::move(j));
            return from_json_value(base);
        }
        return from_json_value(j);
    });
}

ScenarioConfig apply_overrides(const ScenarioConfig& config, std::string_view text) {
    return guarded([&] {
        const json patch = parse(text);
        if (!patch.is_object()) throw InvalidInput("overrides must be a JSON object");
        json base = to_json_value(config);
        merge_onto(base, patch);
        return from_json_value(base);
    });
}

void apply_frequency_tag(ScenarioConfig& config, std::string_view tag) {
    config.frequency.averaging = parse_frequency_tag(tag).averaging;
}

MixtureState initial_mixture(const ScenarioConfig& config) {
    if (config.initial == InitialKind::ToyBump) {
        const auto& u = config.regions.front().state.u;
        return mixture_state(toy_moments(config.species[0], u[0]), toy_moments(config.species[1], u[1]));
    }
    MixtureState avg;
    for (int k = 0; k < config.mesh.cells; ++k) {
        const auto s = local_state(config, config.mesh.center(k));
        const auto mix = mixture_state(s[0], s[1]);
        avg.u = avg.u + mix.u;
        avg.T += mix.T;
    }
    const double inv = 1.0 / config.mesh.cells;
    avg.u = inv * avg.u;
    avg.T *= inv;
    return avg;
}

void initialize_state(const ScenarioConfig& config, const std::array<VelocityGrid, 2>& grids, SimState& state) {
    const auto cells = static_cast<std::size_t>(config.mesh.cells);
    for (int i = 0; i < 2; ++i) {
        if (state.f[i].cells() != cells || state.f[i].nodes() != grids[i].size())
            throw InvalidInput("state shape does not match the scenario");
    }
    for (std::size_t k = 0; k < cells; ++k) {
        if (config.initial == InitialKind::ToyBump) {
            for (int i = 0; i < 2; ++i) {
                const auto& g = grids[i];
                const Vec3 u = config.regions.front().state.u[i];
                auto out = state.f[i].cell(k);
                for (std::size_t q = 0; q < g.size(); ++q) {
                    const Vec3 w = g.node(q) - u;
                    out[q] = toy_bump(config.species[i].mass, std::abs(w[0]) + std::abs(w[1]) + std::abs(w[2]));
                }
            }
            continue;
        }
        const auto s = local_state(config, config.mesh.center(static_cast<int>(k)));
        for (int i = 0; i < 2; ++i) maxwellian(state.f[i].cell(k), config.species[i], s[i].n, s[i].u, s[i].T, grids[i]);
    }
}

Scenario build_scenario(const ScenarioConfig& config) { return build_scenario(config, initial_mixture(config)); }

Scenario build_scenario(const ScenarioConfig& config, const MixtureState& grid_mixture) {
    config.validate();
    Scenario sc;
    sc.config = config;
    sc.mixture = grid_mixture;
    std::array<VelocityGrid, 2> grids{build_grid(config.species[0], sc.mixture.u, sc.mixture.T, config.velocity_nodes),
                                      build_grid(config.species[1], sc.mixture.u, sc.mixture.T, config.velocity_nodes)};
    sc.stepper = std::make_unique<Stepper>(config.species, grids, config.mesh, config.frequency, config.scheme_config());
    sc.state = sc.stepper->make_state();
    initialize_state(config, grids, sc.state);
    return sc;
}

Scenario build_scenario(std::string_view name, std::string_view overrides_json) {
    ScenarioConfig c = preset(name);
    if (!overrides_json.empty()) c = apply_overrides(c, overrides_json);
    return build_scenario(c);
}

}  // namespace mbgk
