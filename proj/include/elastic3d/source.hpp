#pragma once

// Moment-tensor point sources: source time functions and the trilinear
// distribution of the moment-rate density onto the six stress grids.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "fields.hpp"
#include "geometry.hpp"

namespace elastic3d {

enum class WaveletKind { ricker, gaussian_derivative };

inline std::string_view wavelet_name(WaveletKind k) {
    return k == WaveletKind::ricker ? "ricker" : "gaussian-derivative";
}

inline WaveletKind wavelet_from_name(std::string_view s) {
    if (s == "ricker") return WaveletKind::ricker;
    if (s == "gaussian-derivative") return WaveletKind::gaussian_derivative;
    throw ConfigError("unknown source time function '" + std::string(s) + "'");
}

struct SourceTimeFunction {
    WaveletKind kind = WaveletKind::ricker;
    double peak_frequency = 1.0;  // Hz
    double onset_delay = 1.5;     // s, time of the wavelet center

    /// Conventional delay that keeps the wavelet causal.
    static double default_delay(double peak_frequency) { return 1.5 / peak_frequency; }
};

inline double evaluate_stf(const SourceTimeFunction& stf, double t) {
    const double a = std::numbers::pi * stf.peak_frequency * (t - stf.onset_delay);
    switch (stf.kind) {
        case WaveletKind::ricker: {
            const double u = a * a;
            return (1.0 - 2.0 * u) * std::exp(-u);
        }
        case WaveletKind::gaussian_derivative: {
            // -a exp(-a^2), scaled so the extrema are +-1
            static const double scale = std::sqrt(2.0 * std::numbers::e);
            return -scale * a * std::exp(-a * a);
        }
    }
    return 0.0;
}

/// Symmetric moment tensor (N m); only the six independent components are stored.
struct MomentTensor {
    double xx = 0.0, yy = 0.0, zz = 0.0, xy = 0.0, xz = 0.0, yz = 0.0;

    /// Symmetric part of an arbitrary 3x3 matrix.
    static MomentTensor from_matrix(const std::array<std::array<double, 3>, 3>& m) {
        return {m[0][0], m[1][1], m[2][2], 0.5 * (m[0][1] + m[1][0]), 0.5 * (m[0][2] + m[2][0]),
                0.5 * (m[1][2] + m[2][1])};
    }

    static MomentTensor isotropic(double m0) { return {m0, m0, m0, 0.0, 0.0, 0.0}; }

    [[nodiscard]] double operator[](Component c) const {
        switch (c) {
            case Component::sxx: return xx;
            case Component::syy: return yy;
            case Component::szz: return zz;
            case Component::sxy: return xy;
            case Component::sxz: return xz;
            case Component::syz: return yz;
            default: throw DomainError("moment tensor has no velocity component");
        }
    }

    friend MomentTensor operator+(const MomentTensor& a, const MomentTensor& b) {
        return {a.xx + b.xx, a.yy + b.yy, a.zz + b.zz, a.xy + b.xy, a.xz + b.xz, a.yz + b.yz};
    }
    friend bool operator==(const MomentTensor&, const MomentTensor&) = default;
};

struct MomentTensorSource {
    MomentTensor moment;
    GeographicPoint location;
    UtcTime centroid_time{};
    SourceTimeFunction stf;
    double injection_sign = -1.0;  // stress += sign * m * stf * dt / V
};

/// The eight grid nodes (flat indices) and trilinear weights surrounding a
/// real-valued position on one staggered grid.
struct NodeFootprint {
    std::array<std::size_t, 8> index{};
    std::array<double, 8> weight{};
};

inline NodeFootprint node_footprint(GridDims g, const GridPoint& p) {
    const AxisWeight ax = axis_weight(p.x, g.nx);
    const AxisWeight ay = axis_weight(p.y, g.ny);
    const AxisWeight az = axis_weight(p.z, g.nz);
    NodeFootprint f;
    int n = 0;
    for (int c = 0; c < 2; ++c) {
        for (int b = 0; b < 2; ++b) {
            for (int a = 0; a < 2; ++a, ++n) {
                const int i = a ? ax.hi : ax.lo;
                const int j = b ? ay.hi : ay.lo;
                const int k = c ? az.hi : az.lo;
                f.index[n] = static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * (j + static_cast<std::size_t>(g.ny) * k);
                f.weight[n] = (a ? ax.w : 1.0 - ax.w) * (b ? ay.w : 1.0 - ay.w) * (c ? az.w : 1.0 - az.w);
            }
        }
    }
    return f;
}

/// Source resolved onto a grid: per-stress-component footprints at that
/// component's staggered position.
struct PlacedSource {
    MomentTensorSource source;
    GridPoint position;  // grid coordinates of the source point
    std::array<NodeFootprint, 6> footprint{};

    static PlacedSource place(const MomentTensorSource& src, const SimulationDomain& domain, const GridPoint& position) {
        const GridDims g = domain.grid;
        if (position.x < -0.5 || position.x > g.nx - 0.5 || position.y < -0.5 || position.y > g.ny - 0.5 ||
            position.z < -0.5 || position.z > g.nz - 0.5) {
            throw ConfigError("source position outside the simulation grid");
        }
        PlacedSource ps{src, position, {}};
        for (std::size_t c = 0; c < kStressComponents.size(); ++c) {
            const auto o = staggered_offset(kStressComponents[c]);
            ps.footprint[c] = node_footprint(g, {position.x - o[0], position.y - o[1], position.z - o[2]});
        }
        return ps;
    }

    static PlacedSource place(const MomentTensorSource& src, const SimulationDomain& domain) {
        try {
            return place(src, domain, domain.grid_position(src.location));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("source: ") + e.what());
        }
    }
};

/// Adds sign * m_c * stf(t) * dt / (dx dy dz) to each stress component,
/// spread over the component's footprint. `t` is seconds since simulation start.
template <class Real>
void inject_source(FieldSet<Real>& fields, const PlacedSource& ps, const SimulationDomain& domain, double t,
                   double dt) {
    const double cell_volume = domain.dx * domain.dy * domain.dz;
    const double amplitude = ps.source.injection_sign * evaluate_stf(ps.source.stf, t) * dt / cell_volume;
    for (std::size_t c = 0; c < kStressComponents.size(); ++c) {
        const Component comp = kStressComponents[c];
        const double m = ps.source.moment[comp];
        if (m == 0.0) continue;
        Real* data = fields[comp].data();
        const NodeFootprint& f = ps.footprint[c];
        for (std::size_t n = 0; n < 8; ++n) {
            if (f.weight[n] == 0.0) continue;
            data[f.index[n]] += static_cast<Real>(m * amplitude * f.weight[n]);
        }
    }
}

}  // namespace elastic3d
