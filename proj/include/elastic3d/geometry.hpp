#pragma once

// Simulation domain, geographic-to-local mapping, staggered layout and the
// time-step / source-frequency limits of the 4th-order staggered scheme.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "utc_time.hpp"

namespace elastic3d {

inline constexpr double kEarthRadius = 6'371'000.0;  // m

struct GeographicBounds {
    double lat_min = 0.0;
    double lat_max = 0.0;
    double lon_min = 0.0;
    double lon_max = 0.0;
    double depth_min_km = 0.0;  // negative = above sea level
    double depth_max_km = 0.0;

    void validate() const {
        if (!(lat_min < lat_max)) throw DomainError("bounds: lat_min must be < lat_max");
        if (!(lon_min < lon_max)) throw DomainError("bounds: lon_min must be < lon_max");
        if (!(depth_min_km < depth_max_km)) throw DomainError("bounds: depth_min must be < depth_max");
        if (lat_min < -90.0 || lat_max > 90.0) throw DomainError("bounds: latitude outside [-90, 90]");
        if (lon_min < -180.0 || lon_max > 180.0) throw DomainError("bounds: longitude outside [-180, 180]");
    }

    [[nodiscard]] double mean_latitude() const { return 0.5 * (lat_min + lat_max); }
    [[nodiscard]] double meters_per_degree_lat() const { return kEarthRadius * std::numbers::pi / 180.0; }
    [[nodiscard]] double meters_per_degree_lon() const {
        return meters_per_degree_lat() * std::cos(mean_latitude() * std::numbers::pi / 180.0);
    }
};

struct GeographicPoint {
    double lat = 0.0;
    double lon = 0.0;
    double depth_km = 0.0;
};

/// Physical coordinates in meters: x along latitude, y along longitude, z down.
struct LocalPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Real-valued grid coordinates (node (i,j,k) sits at (i,j,k)).
struct GridPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct Extent {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct GridDims {
    int nx = 0;
    int ny = 0;
    int nz = 0;

    [[nodiscard]] long long cells() const { return 1LL * nx * ny * nz; }
    friend bool operator==(const GridDims&, const GridDims&) = default;
};

inline Extent physical_size(const GeographicBounds& b) {
    return {(b.lat_max - b.lat_min) * b.meters_per_degree_lat(), (b.lon_max - b.lon_min) * b.meters_per_degree_lon(),
            (b.depth_max_km - b.depth_min_km) * 1000.0};
}

inline LocalPoint geographic_to_local(const GeographicBounds& b, double lat, double lon, double depth_km) {
    if (lat < b.lat_min || lat > b.lat_max) {
        throw DomainError("latitude " + std::to_string(lat) + " outside domain bounds");
    }
    if (lon < b.lon_min || lon > b.lon_max) {
        throw DomainError("longitude " + std::to_string(lon) + " outside domain bounds");
    }
    if (depth_km < b.depth_min_km || depth_km > b.depth_max_km) {
        throw DomainError("depth " + std::to_string(depth_km) + " km outside domain bounds");
    }
    return {(lat - b.lat_min) * b.meters_per_degree_lat(), (lon - b.lon_min) * b.meters_per_degree_lon(),
            (depth_km - b.depth_min_km) * 1000.0};
}

inline GeographicPoint local_to_geographic(const GeographicBounds& b, const LocalPoint& p) {
    return {b.lat_min + p.x / b.meters_per_degree_lat(), b.lon_min + p.y / b.meters_per_degree_lon(),
            b.depth_min_km + p.z / 1000.0};
}

/// Great-circle distance in meters (haversine on the spherical Earth).
inline double surface_distance(double lat1, double lon1, double lat2, double lon2) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double dlat = (lat2 - lat1) * deg;
    const double dlon = (lon2 - lon1) * deg;
    const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1 * deg) * std::cos(lat2 * deg) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(a)));
}

// dt_max = 0.495 * dx_min / vel_max
inline double max_time_step(double dx_min, double vel_max) {
    if (!(dx_min > 0.0) || !(vel_max > 0.0)) {
        throw DomainError("max_time_step: spacing and velocity must be positive");
    }
    return 0.495 * dx_min / vel_max;
}

// f_max = vel_min / (5 * dx_max)
inline double max_source_frequency(double dx_max, double vel_min) {
    if (!(dx_max > 0.0) || !(vel_min > 0.0)) {
        throw DomainError("max_source_frequency: spacing and velocity must be positive");
    }
    return vel_min / (5.0 * dx_max);
}

struct SimulationDomain {
    GeographicBounds bounds;
    GridDims grid;
    Extent size;
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;
    double dt = 0.0;
    int n_steps = 0;
    UtcTime start_time{};

    static SimulationDomain make(const GeographicBounds& bounds, GridDims grid, double dt, int n_steps,
                                 UtcTime start_time) {
        bounds.validate();
        if (grid.nx <= 0 || grid.ny <= 0 || grid.nz <= 0) throw DomainError("grid counts must be positive");
        if (!(dt > 0.0)) throw DomainError("dt must be positive");
        if (n_steps < 0) throw DomainError("n_steps must be non-negative");
        SimulationDomain d;
        d.bounds = bounds;
        d.grid = grid;
        d.size = physical_size(bounds);
        d.dx = d.size.x / grid.nx;
        d.dy = d.size.y / grid.ny;
        d.dz = d.size.z / grid.nz;
        d.dt = dt;
        d.n_steps = n_steps;
        d.start_time = start_time;
        return d;
    }

    [[nodiscard]] double min_spacing() const { return std::min({dx, dy, dz}); }
    [[nodiscard]] double max_spacing() const { return std::max({dx, dy, dz}); }
    [[nodiscard]] double duration() const { return dt * n_steps; }

    // Node (i,j,k) represents the cell whose center is at ((i+0.5)dx, ...).
    [[nodiscard]] GridPoint to_grid(const LocalPoint& p) const {
        return {p.x / dx - 0.5, p.y / dy - 0.5, p.z / dz - 0.5};
    }
    [[nodiscard]] LocalPoint to_local(const GridPoint& g) const {
        return {(g.x + 0.5) * dx, (g.y + 0.5) * dy, (g.z + 0.5) * dz};
    }
    [[nodiscard]] GridPoint grid_position(const GeographicPoint& g) const {
        return to_grid(geographic_to_local(bounds, g.lat, g.lon, g.depth_km));
    }
};

enum class Component : int { vx, vy, vz, sxx, syy, szz, sxy, sxz, syz };

inline constexpr std::array<Component, 9> kAllComponents = {Component::vx,  Component::vy,  Component::vz,
                                                            Component::sxx, Component::syy, Component::szz,
                                                            Component::sxy, Component::sxz, Component::syz};
inline constexpr std::array<Component, 3> kVelocityComponents = {Component::vx, Component::vy, Component::vz};
inline constexpr std::array<Component, 6> kStressComponents = {Component::sxx, Component::syy, Component::szz,
                                                               Component::sxy, Component::sxz, Component::syz};

inline std::string_view component_name(Component c) {
    constexpr std::array<std::string_view, 9> names = {"vx", "vy", "vz", "sxx", "syy", "szz", "sxy", "sxz", "syz"};
    const auto idx = static_cast<int>(c);
    if (idx < 0 || idx >= 9) throw DomainError("unknown field component id " + std::to_string(idx));
    return names[static_cast<std::size_t>(idx)];
}

inline Component component_from_name(std::string_view name) {
    for (Component c : kAllComponents) {
        if (component_name(c) == name) return c;
    }
    throw DomainError("unknown field component '" + std::string(name) + "'");
}

/// Half-cell offset of a component's samples relative to the integer node.
inline std::array<double, 3> staggered_offset(Component c) {
    switch (c) {
        case Component::sxx:
        case Component::syy:
        case Component::szz: return {0.0, 0.0, 0.0};
        case Component::sxy: return {0.5, 0.5, 0.0};
        case Component::sxz: return {0.5, 0.0, 0.5};
        case Component::syz: return {0.0, 0.5, 0.5};
        case Component::vx: return {0.5, 0.0, 0.0};
        case Component::vy: return {0.0, 0.5, 0.0};
        case Component::vz: return {0.0, 0.0, 0.5};
    }
    throw DomainError("unknown field component id " + std::to_string(static_cast<int>(c)));
}

inline GridPoint staggered_position(Component c, int i, int j, int k) {
    const auto o = staggered_offset(c);
    return {i + o[0], j + o[1], k + o[2]};
}

/// One row of the bundled level-of-detail table.
struct LevelOfDetail {
    int level = 0;
    GridDims grid;
    int n_steps = 0;
    double dt = 0.0;
    // Tabulated values kept as metadata; the solver derives its own.
    std::array<double, 3> tabulated_spacing_km{};
    double tabulated_max_frequency = 0.0;
};

inline const std::array<LevelOfDetail, 11>& level_presets() {
    static const std::array<LevelOfDetail, 11> table = {{
        {0, {64, 64, 32}, 1700, 0.1, {6.67, 10.61, 3.75}, 0.037},
        {1, {64, 64, 64}, 1700, 0.1, {6.67, 10.61, 1.87}, 0.037},
        {2, {128, 64, 64}, 1700, 0.1, {3.33, 10.61, 1.87}, 0.037},
        {3, {128, 128, 64}, 1700, 0.1, {3.33, 5.30, 1.87}, 0.075},
        {4, {128, 128, 128}, 3400, 0.05, {3.33, 5.30, 0.93}, 0.075},
        {5, {256, 128, 128}, 3400, 0.05, {1.66, 5.30, 0.93}, 0.075},
        {6, {256, 256, 128}, 3400, 0.05, {1.66, 2.65, 0.93}, 0.15},
        {7, {256, 256, 256}, 17000, 0.01, {1.66, 2.65, 0.46}, 0.15},
        {8, {512, 256, 256}, 17000, 0.01, {0.83, 2.65, 0.46}, 0.15},
        {9, {512, 512, 256}, 17000, 0.01, {0.83, 1.32, 0.46}, 0.30},
        {10, {512, 512, 512}, 17000, 0.01, {0.83, 1.32, 0.23}, 0.30},
    }};
    return table;
}

inline const LevelOfDetail& level_preset(int level) {
    if (level < 0 || level > 10) throw DomainError("level of detail must be in 0..10, got " + std::to_string(level));
    return level_presets()[static_cast<std::size_t>(level)];
}

}  // namespace elastic3d
