#include <gtest/gtest.h>

#include <random>

#include "mbgk/transport.hpp"
#include "test_util.hpp"

using namespace mbgk;

namespace {

PhaseField random_field(std::size_t K, std::size_t n, std::mt19937_64& rng) {
    PhaseField f(K, n);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (auto& x : f.data()) x = d(rng);
    return f;
}

}  // namespace

TEST(Transport, Minmod) {
    EXPECT_EQ(minmod3(1.0, 2.0, 3.0), 1.0);
    EXPECT_EQ(minmod3(-1.0, -0.5, -3.0), -0.5);
    EXPECT_EQ(minmod3(1.0, -2.0, 3.0), 0.0);
    EXPECT_EQ(minmod3(0.0, 2.0, 3.0), 0.0);
}

TEST(Transport, FirstOrderFluxIsUpwind) {
    EXPECT_DOUBLE_EQ(numerical_flux(9.0, 2.0, 5.0, 7.0, 3.0, 1), 6.0);
    EXPECT_DOUBLE_EQ(numerical_flux(9.0, 2.0, 5.0, 7.0, -3.0, 1), -15.0);
    EXPECT_DOUBLE_EQ(numerical_flux(1.0, 2.0, 3.0, 4.0, 0.0, 2), 0.0);
}

TEST(Transport, PeriodicFluxDifferencesSumToZero) {
    std::mt19937_64 rng(1);
    const VelocityGrid g = test::cube(2.0, 6);
    const SpatialMesh mesh{0.0, 1.0, 9, Boundary::Periodic};
    for (int order : {1, 2}) {
        const PhaseField f = random_field(9, g.size(), rng);
        PhaseField out;
        apply_transport(f, mesh, g, {order}, out);
        for (std::size_t q = 0; q < g.size(); ++q) {
            double s = 0.0, scale = 0.0;
            for (std::size_t k = 0; k < 9; ++k) {
                s += out.cell(k)[q];
                scale += std::abs(out.cell(k)[q]);
            }
            EXPECT_NEAR(s, 0.0, 1e-14 * scale + 1e-300);
        }
    }
}

TEST(Transport, ConstantStatesAreSteadyForPeriodicAndCopy) {
    const VelocityGrid g = test::cube(2.0, 4);
    for (Boundary b : {Boundary::Periodic, Boundary::Copy}) {
        const SpatialMesh mesh{0.0, 1.0, 5, b};
        const PhaseField f(5, g.size(), 0.7);
        PhaseField out;
        apply_transport(f, mesh, g, {2}, out);
        for (double x : out.data()) EXPECT_EQ(x, 0.0);
    }
}

TEST(Transport, ZeroBoundaryLetsMassLeave) {
    const VelocityGrid g = test::cube(2.0, 4);
    const SpatialMesh mesh{0.0, 1.0, 5, Boundary::Zero};
    const PhaseField f(5, g.size(), 1.0);
    PhaseField out;
    apply_transport(f, mesh, g, {1}, out);
    // Net outflow through both ends: sum_k out_k dx = F_right - F_left = |v| per node.
    for (std::size_t q = 0; q < g.size(); ++q) {
        double s = 0.0;
        for (std::size_t k = 0; k < 5; ++k) s += out.cell(k)[q] * mesh.dx();
        EXPECT_NEAR(s, std::abs(g.node(q)[0]), 1e-14);
    }
}

TEST(Transport, UpwindAtUnitCourantNumberShiftsExactly) {
    const VelocityGrid g({-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}, 2);  // v1 in {-1, 1}
    const SpatialMesh mesh{0.0, 1.0, 6, Boundary::Periodic};
    PhaseField f(6, g.size());
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t q = 0; q < g.size(); ++q) f.cell(k)[q] = static_cast<double>(k * k + q);
    PhaseField out;
    apply_transport(f, mesh, g, {1}, out);
    const double dt = mesh.dx();
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t q = 0; q < g.size(); ++q) {
            const double v = g.node(q)[0];
            const std::size_t src = v > 0 ? (k + 5) % 6 : (k + 1) % 6;
            EXPECT_NEAR(f.cell(k)[q] - dt * out.cell(k)[q], f.cell(src)[q], 1e-12);
        }
}

TEST(Transport, SecondOrderIsExactForLinearProfiles) {
    const VelocityGrid g = test::cube(1.5, 3);
    const SpatialMesh mesh{0.0, 1.0, 8, Boundary::Copy};
    PhaseField f(8, g.size());
    for (std::size_t k = 0; k < 8; ++k)
        for (std::size_t q = 0; q < g.size(); ++q) f.cell(k)[q] = 1.0 + 0.5 * mesh.center(static_cast<int>(k));
    PhaseField out;
    apply_transport(f, mesh, g, {2}, out);
    for (std::size_t k = 2; k < 6; ++k)
        for (std::size_t q = 0; q < g.size(); ++q) EXPECT_NEAR(out.cell(k)[q], 0.5 * g.node(q)[0], 1e-12);
}

TEST(Transport, ExplicitStepUnderCflKeepsPositivity) {
    std::mt19937_64 rng(17);
    const VelocityGrid g = test::cube(3.0, 6);
    for (Boundary b : {Boundary::Periodic, Boundary::Zero, Boundary::Copy}) {
        for (int order : {1, 2}) {
            const SpatialMesh mesh{-1.0, 1.0, 12, b};
            const std::array<const VelocityGrid*, 1> gp{&g};
            const double dt = cfl_dt(mesh, gp, {order});
            EXPECT_DOUBLE_EQ(dt, 0.99 * (order == 2 ? 2.0 / 3.0 : 1.0) * mesh.dx() / 3.0);
            for (int trial = 0; trial < 20; ++trial) {
                PhaseField f = random_field(12, g.size(), rng);
                // Sparse spikes stress the limiter.
                for (auto& x : f.data())
                    if (x < 0.5) x = 0.0;
                PhaseField out;
                apply_transport(f, mesh, g, {order}, out);
                for (std::size_t r = 0; r < f.data().size(); ++r)
                    ASSERT_GE(f.data()[r] - dt * out.data()[r], -1e-15);
            }
        }
    }
}

TEST(Transport, ValidationAndParsing) {
    EXPECT_EQ(parse_boundary("copy"), Boundary::Copy);
    EXPECT_EQ(to_string(Boundary::Zero), "zero");
    EXPECT_THROW(parse_boundary("reflect"), InvalidInput);
    EXPECT_THROW((SpatialMesh{0.0, 1.0, 0}.validate()), InvalidInput);
    EXPECT_THROW((SpatialMesh{1.0, 1.0, 3}.validate()), InvalidInput);
    EXPECT_TRUE((SpatialMesh{0.0, 1.0, 1, Boundary::Periodic}.homogeneous()));
    EXPECT_FALSE((SpatialMesh{0.0, 1.0, 1, Boundary::Copy}.homogeneous()));
    const VelocityGrid g = test::cube(1.0, 3);
    PhaseField f(4, g.size()), out;
    EXPECT_THROW(apply_transport(f, SpatialMesh{0.0, 1.0, 5}, g, {1}, out), InvalidInput);
    EXPECT_THROW(apply_transport(f, SpatialMesh{0.0, 1.0, 4}, g, {3}, out), InvalidInput);
}
