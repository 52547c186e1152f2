#include <gtest/gtest.h>

#include "mbgk/diagnostics.hpp"
#include "mbgk/scenarios.hpp"
#include "test_util.hpp"

using namespace mbgk;

TEST(Scenarios, EveryPresetRoundTripsThroughJson) {
    const auto names = preset_names();
    EXPECT_EQ(names.size(), 9u);
    for (const auto& n : names) {
        const ScenarioConfig c = preset(n);
        EXPECT_EQ(c.name, n);
        EXPECT_NO_THROW(c.validate()) << n;
        EXPECT_EQ(config_from_json(to_json(c)), c) << n;
    }
}

TEST(Scenarios, PresetConstants) {
    const auto hc = preset("hydrogen_carbon");
    EXPECT_EQ(hc.units, Units::Cgs);
    EXPECT_EQ(hc.species[0].charge_number, 6);
    EXPECT_DOUBLE_EQ(hc.species[0].mass, 1.993e-23);
    EXPECT_DOUBLE_EQ(hc.species[1].mass, 1.661e-24);
    EXPECT_DOUBLE_EQ(hc.regions[0].state.n[0], 6.1e22);
    EXPECT_DOUBLE_EQ(hc.regions[0].state.n[1], 3.6133e21);
    EXPECT_DOUBLE_EQ(hc.regions[0].state.u[0][0], 9.818e5);
    EXPECT_DOUBLE_EQ(hc.regions[0].state.T[0], 150.0);
    EXPECT_DOUBLE_EQ(hc.regions[0].state.T[1], 100.0);
    EXPECT_DOUBLE_EQ(*hc.dt, 0.8e-15);
    EXPECT_EQ(hc.frequency.family, FrequencyFamily::Coulomb);

    const auto m17 = preset("mach17");
    EXPECT_EQ(m17.mesh.boundary, Boundary::Copy);
    EXPECT_DOUBLE_EQ(m17.regions[0].state.u[0][0], 1.7634411e7);
    EXPECT_DOUBLE_EQ(m17.regions[1].state.T[0], 171.32);
    EXPECT_EQ(m17.species[1].charge_number, 2);

    const auto sod = preset("sod");
    EXPECT_EQ(sod.frequency.C, 2e4);
    EXPECT_EQ(sod.mesh.cells, 400);
    EXPECT_FALSE(sod.dt.has_value());

    const auto toy = preset("toy");
    EXPECT_EQ(toy.initial, InitialKind::ToyBump);
    EXPECT_EQ(toy.scheme, Scheme::Splitting1);
    EXPECT_DOUBLE_EQ(*toy.dt, 0.01);
    EXPECT_EQ(preset("appendix_convergence_stiff").frequency.C, 1e4);
}

TEST(Scenarios, ToyMixtureMatchesOracle) {
    const MixtureState mix = initial_mixture(preset("toy"));
    EXPECT_NEAR(mix.u[0], 0.03141132055698969, 1e-8);
    EXPECT_NEAR(mix.T, 0.04823606400568031, 1e-8);
    EXPECT_EQ(mix.u[1], 0.0);
}

TEST(Scenarios, HydrogenCarbonMixtureMatchesOracle) {
    const MixtureState mix = initial_mixture(preset("hydrogen_carbon"));
    EXPECT_LT(test::rel(mix.u[0], 976976.9602439713), 1e-12);
    EXPECT_LT(test::rel(mix.T / constants::kB, 147.22244237109987), 1e-12);
}

TEST(Scenarios, SodMixtureIsCellAverage) {
    const MixtureState mix = initial_mixture(preset("sod"));
    EXPECT_EQ(mix.u[0], 0.0);
    EXPECT_NEAR(mix.T, 0.9, 1e-14);
}

TEST(Scenarios, FrequencyTagKeepsFamily) {
    ScenarioConfig c = preset("sod");
    apply_frequency_tag(c, "coulomb_vhat");
    EXPECT_EQ(c.frequency.family, FrequencyFamily::PowerLaw);
    EXPECT_EQ(c.frequency.averaging, FrequencyAveraging::Vhat);
    apply_frequency_tag(c, "thermal");
    EXPECT_EQ(c.frequency.averaging, FrequencyAveraging::Thermal);
    EXPECT_THROW(apply_frequency_tag(c, "bogus"), InvalidInput);
}

TEST(Scenarios, OverridesAndPresetReferences) {
    const auto c = apply_overrides(preset("mach17"), R"({"mesh": {"cells": 50}, "velocity_nodes": 12})");
    EXPECT_EQ(c.mesh.cells, 50);
    EXPECT_EQ(c.velocity_nodes, 12);
    EXPECT_DOUBLE_EQ(c.mesh.x_max, 3e-4);

    const auto d = config_from_json(R"({"preset": "sod", "frequency": "vhat", "dt": 0.001})");
    EXPECT_EQ(d.name, "sod");
    EXPECT_EQ(d.frequency.averaging, FrequencyAveraging::Vhat);
    EXPECT_EQ(d.frequency.C, 2e4);
    EXPECT_DOUBLE_EQ(*d.dt, 0.001);
    EXPECT_FALSE(config_from_json(R"({"preset": "toy", "dt": null})").dt.has_value());

    EXPECT_THROW(config_from_json(R"({"preset": "toy", "colour": 1})"), InvalidInput);
    EXPECT_THROW(config_from_json(R"({"preset": "nope"})"), InvalidInput);
    EXPECT_THROW(config_from_json("{not json"), InvalidInput);
    EXPECT_THROW(apply_overrides(preset("toy"), "[1, 2]"), InvalidInput);
    EXPECT_THROW(apply_overrides(preset("toy"), R"({"mesh": {"cells": "many"}})"), InvalidInput);
}

TEST(Scenarios, ValidationRejectsNonPhysicalInput) {
    EXPECT_THROW(preset("unknown"), InvalidInput);
    EXPECT_THROW(apply_overrides(preset("sod"), R"({"regions": [{"x_end": null, "n": [1, 1], "u": [[0,0,0],[0,0,0]], "T": [-1, 1]}]})"),
                 InvalidInput);
    EXPECT_THROW(apply_overrides(preset("sod"), R"({"velocity_nodes": 1})"), InvalidInput);
    EXPECT_THROW(apply_overrides(preset("sod"), R"({"t_end": -1})"), InvalidInput);
    EXPECT_THROW(apply_overrides(preset("sod"), R"({"species": [{"mass": 0}, {"mass": 1}]})"), InvalidInput);
}

TEST(Scenarios, ToyBumpHasCompactSupport) {
    ScenarioConfig c = preset("toy");
    c.velocity_nodes = 16;
    const Scenario sc = build_scenario(c);
    for (int i = 0; i < 2; ++i) {
        const auto& g = sc.stepper->grid(i);
        const double r = 0.75 / c.species[static_cast<std::size_t>(i)].mass;
        const Vec3 u = c.regions[0].state.u[static_cast<std::size_t>(i)];
        const auto f = sc.state.f[static_cast<std::size_t>(i)].cell(0);
        bool inside = false;
        for (std::size_t q = 0; q < g.size(); ++q) {
            const Vec3 w = g.node(q) - u;
            const double s = std::abs(w[0]) + std::abs(w[1]) + std::abs(w[2]);
            if (s >= r) EXPECT_EQ(f[q], 0.0);
            if (s < 0.5 * r) {
                EXPECT_GT(f[q], 0.0);
                inside = true;
            }
        }
        EXPECT_TRUE(inside);
    }
}

TEST(Scenarios, SmoothSineInitialMoments) {
    ScenarioConfig c = preset("appendix_convergence");
    c.velocity_nodes = 24;
    const Scenario sc = build_scenario(c);
    const auto m = cell_moments(sc.state.f, sc.stepper->grid_ptrs(), sc.stepper->species());
    for (int k = 0; k < c.mesh.cells; ++k) {
        const double s = 1.0 + 0.1 * std::sin(constants::pi * c.mesh.center(k));
        for (int i = 0; i < 2; ++i) {
            EXPECT_NEAR(m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].n, s, 1e-6);
            EXPECT_NEAR(m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].u[0], 1.0, 1e-6);
            EXPECT_NEAR(m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].T, 1.0 / s, 1e-5);
        }
    }
}

TEST(Scenarios, RegionsSplitAtCellCenters) {
    ScenarioConfig c = preset("sod");
    c.mesh.cells = 4;
    c.velocity_nodes = 12;
    const Scenario sc = build_scenario(c);
    const auto m = cell_moments(sc.state.f, sc.stepper->grid_ptrs(), sc.stepper->species());
    EXPECT_NEAR(m[1][0].n, 1.0, 1e-6);
    EXPECT_NEAR(m[2][0].n, 0.1, 1e-6);
    EXPECT_NEAR(m[2][1].T, 0.8, 1e-4);
}

TEST(Scenarios, BuildByNameWithOverrides) {
    const Scenario sc = build_scenario("mach17", R"({"mesh": {"cells": 6}, "velocity_nodes": 6})");
    EXPECT_EQ(sc.stepper->mesh().cells, 6);
    EXPECT_EQ(sc.stepper->grid(0).nodes_per_axis(), 6);
    EXPECT_EQ(sc.state.f[1].cells(), 6u);
}
