#pragma once

#include <cmath>

#include "field3d.hpp"
#include "geometry.hpp"

namespace elastic3d {

/// The nine staggered unknowns; stress symmetry is structural (six stress fields).
template <class Real>
struct FieldSet {
    Field3D<Real> vx, vy, vz;
    Field3D<Real> sxx, syy, szz, sxy, sxz, syz;

    FieldSet() = default;
    explicit FieldSet(GridDims g)
        : vx(g.nx, g.ny, g.nz),
          vy(g.nx, g.ny, g.nz),
          vz(g.nx, g.ny, g.nz),
          sxx(g.nx, g.ny, g.nz),
          syy(g.nx, g.ny, g.nz),
          szz(g.nx, g.ny, g.nz),
          sxy(g.nx, g.ny, g.nz),
          sxz(g.nx, g.ny, g.nz),
          syz(g.nx, g.ny, g.nz) {}

    [[nodiscard]] GridDims dims() const { return {vx.nx(), vx.ny(), vx.nz()}; }

    Field3D<Real>& operator[](Component c) {
        switch (c) {
            case Component::vx: return vx;
            case Component::vy: return vy;
            case Component::vz: return vz;
            case Component::sxx: return sxx;
            case Component::syy: return syy;
            case Component::szz: return szz;
            case Component::sxy: return sxy;
            case Component::sxz: return sxz;
            case Component::syz: return syz;
        }
        throw DomainError("unknown field component");
    }
    const Field3D<Real>& operator[](Component c) const { return const_cast<FieldSet&>(*this)[c]; }

    [[nodiscard]] bool all_finite() const {
        for (Component c : kAllComponents) {
            for (Real v : (*this)[c].values()) {
                if (!std::isfinite(v)) return false;
            }
        }
        return true;
    }

    /// Sum of v^2 over all velocity samples (kinetic-energy proxy).
    [[nodiscard]] double velocity_energy() const {
        double e = 0.0;
        for (Component c : kVelocityComponents) {
            for (Real v : (*this)[c].values()) e += static_cast<double>(v) * static_cast<double>(v);
        }
        return e;
    }

    friend bool operator==(const FieldSet&, const FieldSet&) = default;
};

}  // namespace elastic3d
