#include <gtest/gtest.h>

#include "elastic3d/geometry.hpp"
#include "elastic3d/utc_time.hpp"

using namespace elastic3d;

namespace {

const GeographicBounds kCuba{17.78, 21.63, -78.27, -71.86, -30.0, 90.0};

}  // namespace

TEST(Geometry, CubaExtentFromProjection) {
    const Extent e = physical_size(kCuba);
    EXPECT_NEAR(e.x / 1000.0, 428.1, 0.1);
    EXPECT_NEAR(e.y / 1000.0, 671.0, 1.0);
    EXPECT_DOUBLE_EQ(e.z, 120000.0);
}

TEST(Geometry, LocalRoundTrip) {
    const LocalPoint p = geographic_to_local(kCuba, 19.749, -76.09, 7.0);
    const GeographicPoint g = local_to_geographic(kCuba, p);
    EXPECT_NEAR(g.lat, 19.749, 1e-12);
    EXPECT_NEAR(g.lon, -76.09, 1e-12);
    EXPECT_NEAR(g.depth_km, 7.0, 1e-12);
    EXPECT_NEAR(p.z, 37000.0, 1e-9);
}

TEST(Geometry, OutsideBoundsNamesAxis) {
    try {
        geographic_to_local(kCuba, 30.0, -76.0, 0.0);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("latitude"), std::string::npos);
    }
    EXPECT_THROW(geographic_to_local(kCuba, 20.0, -70.0, 0.0), DomainError);
    EXPECT_THROW(geographic_to_local(kCuba, 20.0, -76.0, 95.0), DomainError);
}

TEST(Geometry, LimitsHandValues) {
    EXPECT_NEAR(max_time_step(3750.0, 8000.0), 0.232031, 1e-6);
    EXPECT_NEAR(max_source_frequency(10610.0, 2816.0), 0.053082, 1e-6);
    EXPECT_THROW(max_time_step(0.0, 1.0), DomainError);
    EXPECT_THROW(max_source_frequency(1.0, -1.0), DomainError);
}

TEST(Geometry, GridMappingPutsNodesAtCellCenters) {
    const auto d = SimulationDomain::make(kCuba, {64, 64, 32}, 0.1, 10, {});
    EXPECT_NEAR(d.dz, 3750.0, 1e-9);
    const GridPoint g = d.to_grid({0.5 * d.dx, 0.5 * d.dy, 0.5 * d.dz});
    EXPECT_NEAR(g.x, 0.0, 1e-12);
    EXPECT_NEAR(g.z, 0.0, 1e-12);
    const LocalPoint p = d.to_local({3.0, 4.0, 5.0});
    EXPECT_NEAR(p.z, 5.5 * d.dz, 1e-9);
}

TEST(Geometry, StaggeredOffsets) {
    using A = std::array<double, 3>;
    EXPECT_EQ(staggered_offset(Component::sxx), (A{0, 0, 0}));
    EXPECT_EQ(staggered_offset(Component::vx), (A{0.5, 0, 0}));
    EXPECT_EQ(staggered_offset(Component::vy), (A{0, 0.5, 0}));
    EXPECT_EQ(staggered_offset(Component::vz), (A{0, 0, 0.5}));
    EXPECT_EQ(staggered_offset(Component::sxy), (A{0.5, 0.5, 0}));
    EXPECT_EQ(staggered_offset(Component::sxz), (A{0.5, 0, 0.5}));
    EXPECT_EQ(staggered_offset(Component::syz), (A{0, 0.5, 0.5}));
    for (Component c : kAllComponents) EXPECT_EQ(component_from_name(component_name(c)), c);
}

TEST(Geometry, LevelTable) {
    ASSERT_EQ(level_presets().size(), 11u);
    EXPECT_EQ(level_preset(0).grid, (GridDims{64, 64, 32}));
    EXPECT_EQ(level_preset(3).grid, (GridDims{128, 128, 64}));
    EXPECT_EQ(level_preset(10).grid, (GridDims{512, 512, 512}));
    EXPECT_EQ(level_preset(6).n_steps, 3400);
    EXPECT_DOUBLE_EQ(level_preset(7).dt, 0.01);
    EXPECT_THROW(level_preset(11), DomainError);
    EXPECT_THROW(level_preset(-1), DomainError);
}

TEST(UtcTime, ParseFormatAndDifference) {
    const UtcTime a = parse_utc("2016-01-17 08:29:25.0");
    const UtcTime b = parse_utc("2016-01-17T08:30:25.08Z");
    EXPECT_NEAR(seconds_between(a, b), 60.08, 1e-9);
    EXPECT_EQ(format_utc(a), "2016-01-17T08:29:25.000000Z");
    EXPECT_EQ(parse_utc(format_utc(b)), b);
    EXPECT_THROW(parse_utc("2016-13-01 00:00:00"), DomainError);
    EXPECT_THROW(parse_utc("yesterday"), DomainError);
}
