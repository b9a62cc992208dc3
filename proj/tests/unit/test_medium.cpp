#include <gtest/gtest.h>

#include "elastic3d/medium.hpp"
#include "elastic3d/sponge.hpp"

using namespace elastic3d;

namespace {

LayeredModel two_layers() {
    LayeredModel m;
    m.layers = {{0.0, 4.90, 2.816, 2.50}, {3.0, 6.0, 3.448, 2.70}};
    m.surface_depth_km = 0.0;
    return m;
}

SimulationDomain column(GridDims g) {
    return SimulationDomain::make({0.0, 1.0, 0.0, 1.0, -2.0, 10.0}, g, 0.01, 1, {});
}

}  // namespace

TEST(Medium, LameHandValues) {
    const LameParameters l = lame_from_velocities(4900.0, 2816.0, 2500.0);
    EXPECT_NEAR(l.lambda / 2.037572e10, 1.0, 1e-6);
    EXPECT_NEAR(l.mu / 1.982464e10, 1.0, 1e-6);
    EXPECT_THROW(lame_from_velocities(1000.0, 900.0, 2000.0), ModelError);
}

TEST(Medium, ValidationRejectsBadTables) {
    LayeredModel m = two_layers();
    EXPECT_NO_THROW(m.validate());
    m.layers[1].top_depth_km = 0.0;
    EXPECT_THROW(m.validate(), ModelError);
    m = two_layers();
    m.layers[0].rho_g_cm3 = 0.0;
    EXPECT_THROW(m.validate(), ModelError);
    EXPECT_THROW(LayeredModel{}.validate(), ModelError);
}

TEST(Medium, LayerLookupAndVelocityExtremes) {
    const LayeredModel m = two_layers();
    EXPECT_DOUBLE_EQ(m.layer_at(1.0).vp_km_s, 4.90);
    EXPECT_DOUBLE_EQ(m.layer_at(3.0).vp_km_s, 6.0);
    EXPECT_DOUBLE_EQ(m.layer_at(-1.0).vp_km_s, 4.90);
    EXPECT_DOUBLE_EQ(m.max_velocity(), 6000.0);
    EXPECT_DOUBLE_EQ(m.min_velocity(), 2816.0);
}

TEST(Medium, VolumeHasVacuumAboveSurface) {
    const auto d = column({4, 4, 12});
    const auto v = build_parameter_volume<double>(two_layers(), d, {2, 2, 12});
    ASSERT_TRUE(v.surface_z.has_value());
    EXPECT_DOUBLE_EQ(*v.surface_z, 2000.0);
    EXPECT_TRUE(is_vacuum(v.rho(0, 0, 0)));
    EXPECT_TRUE(is_vacuum(v.rho(1, 1, 1)));
    EXPECT_EQ(v.mu(0, 0, 1), 0.0);
    EXPECT_DOUBLE_EQ(v.rho(0, 0, 2), 2500.0);
    EXPECT_DOUBLE_EQ(v.rho(0, 0, 11), 2700.0);
}

TEST(Medium, VacuumThresholdIsStrict) {
    EXPECT_TRUE(is_vacuum(kVacuumDensity));
    EXPECT_TRUE(is_vacuum(9.999));
    EXPECT_FALSE(is_vacuum(kVacuumThreshold));
}

TEST(Medium, FullSpaceWithoutSurface) {
    LayeredModel m = two_layers();
    m.surface_depth_km.reset();
    const auto v = build_parameter_volume<float>(m, column({4, 4, 12}), {2, 2, 12});
    EXPECT_FALSE(v.surface_z.has_value());
    EXPECT_FLOAT_EQ(v.rho(0, 0, 0), 2500.0f);
}

TEST(Medium, SampleOnCoarserGridInterpolates) {
    const auto d = column({4, 4, 24});
    const auto v = build_parameter_volume<double>(two_layers(), d, {2, 2, 12});
    // Parameter cell k covers sim cells 2k and 2k+1.
    EXPECT_DOUBLE_EQ(sample_medium(v, d.grid, {1.0, 1.0, 22.0}).rho, 2700.0);
    EXPECT_DOUBLE_EQ(sample_medium(v, d.grid, {1.0, 1.0, 7.5}).rho, 2500.0);
    // Halfway between the 2.5 km and 3.5 km parameter samples.
    EXPECT_DOUBLE_EQ(sample_medium(v, d.grid, {1.0, 1.0, 9.5}).rho, 2600.0);
    EXPECT_NEAR(to_parameter_coord(1.0, 4, 2), 0.25, 1e-15);
}

TEST(Medium, ParameterGridDivisor) {
    EXPECT_EQ(parameter_grid_for({64, 64, 32}), (GridDims{16, 16, 8}));
    EXPECT_EQ(parameter_grid_for({4, 4, 4}, {4, 4, 1}), (GridDims{2, 2, 4}));
}

TEST(Sponge, FaceWeights) {
    const SpongeProfile p;
    EXPECT_NEAR(face_weight(0, p), 0.913931, 1e-6);
    EXPECT_DOUBLE_EQ(face_weight(20, p), 1.0);
    EXPECT_LT(face_weight(5, p), face_weight(6, p));
    const GridDims g{64, 64, 64};
    EXPECT_DOUBLE_EQ(sponge_weight(32, 32, 32, p, g), 1.0);
    EXPECT_DOUBLE_EQ(sponge_weight(0, 32, 32, p, g), face_weight(0, p));
    EXPECT_DOUBLE_EQ(sponge_weight(63, 32, 32, p, g), face_weight(0, p));
    EXPECT_DOUBLE_EQ(sponge_weight(0, 0, 32, p, g), face_weight(0, p) * face_weight(0, p));
}

TEST(Sponge, DisabledFaceAndTable) {
    SpongeProfile p;
    p.faces.z_lo = false;
    const GridDims g{60, 60, 60};
    EXPECT_DOUBLE_EQ(sponge_weight(20, 20, 0, p, g), 1.0);
    const SpongeTable<double> t(p, g);
    for (int k : {0, 5, 39})
        for (int i : {0, 13, 20}) EXPECT_DOUBLE_EQ(t.weight(i, 7, k), sponge_weight(i, 7, k, p, g));
    p.strength = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
}
