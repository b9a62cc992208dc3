#pragma once

// Exponential edge taper applied multiplicatively to every field after each
// phase: w(d) = exp(-(alpha (width - d))^2) for d < width cells from a damped
// face, product over faces.

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace elastic3d {

struct SpongeFaces {
    bool x_lo = true;
    bool x_hi = true;
    bool y_lo = true;
    bool y_hi = true;
    bool z_lo = true;  // the free-surface face when a surface exists
    bool z_hi = true;

    friend bool operator==(const SpongeFaces&, const SpongeFaces&) = default;
};

struct SpongeProfile {
    int width = 20;
    double strength = 0.015;
    SpongeFaces faces;

    void validate() const {
        if (width < 0) throw ConfigError("sponge width must be >= 0");
        if (!(strength > 0.0)) throw ConfigError("sponge strength must be > 0");
    }

    friend bool operator==(const SpongeProfile&, const SpongeProfile&) = default;
};

inline double face_weight(int d, const SpongeProfile& p) {
    if (d >= p.width) return 1.0;
    const double a = p.strength * (p.width - d);
    return std::exp(-a * a);
}

/// Combined weight of the two faces normal to one axis at index i of n.
inline double axis_sponge_weight(int i, int n, bool lo, bool hi, const SpongeProfile& p) {
    double w = 1.0;
    if (lo) w *= face_weight(i, p);
    if (hi) w *= face_weight(n - 1 - i, p);
    return w;
}

inline double sponge_weight(int i, int j, int k, const SpongeProfile& p, GridDims g) {
    const auto& f = p.faces;
    return axis_sponge_weight(i, g.nx, f.x_lo, f.x_hi, p) * axis_sponge_weight(j, g.ny, f.y_lo, f.y_hi, p) *
           axis_sponge_weight(k, g.nz, f.z_lo, f.z_hi, p);
}

/// Separable per-axis weights; weight(i,j,k) equals sponge_weight exactly.
template <class Real>
struct SpongeTable {
    std::vector<Real> wx, wy, wz;

    SpongeTable() = default;
    SpongeTable(const SpongeProfile& p, GridDims g) {
        const auto& f = p.faces;
        for (int i = 0; i < g.nx; ++i) wx.push_back(static_cast<Real>(axis_sponge_weight(i, g.nx, f.x_lo, f.x_hi, p)));
        for (int j = 0; j < g.ny; ++j) wy.push_back(static_cast<Real>(axis_sponge_weight(j, g.ny, f.y_lo, f.y_hi, p)));
        for (int k = 0; k < g.nz; ++k) wz.push_back(static_cast<Real>(axis_sponge_weight(k, g.nz, f.z_lo, f.z_hi, p)));
    }

    [[nodiscard]] Real weight(int i, int j, int k) const { return wx[i] * wy[j] * wz[k]; }

    /// Inside the undamped interior.
    [[nodiscard]] bool interior(int i, int j, int k) const { return wx[i] == Real(1) && wy[j] == Real(1) && wz[k] == Real(1); }
};

}  // namespace elastic3d
