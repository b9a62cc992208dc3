#pragma once

// Homogeneous full-space boxes for solver tests: no free surface, uniform
// spacing, explicit grid-coordinate sources and receivers.

#include <vector>

#include "elastic3d/solver.hpp"

namespace e3t {

using namespace elastic3d;

struct Box {
    GridDims grid{32, 32, 32};
    double h = 100.0;
    double vp = 6000.0;
    double vs = 3464.0;
    double rho = 2700.0;
    double dt = 0.0;  // 0 = 0.9 dt_max
    int n_steps = 100;
    SpongeProfile sponge{};
    SolverOptions options{};

    [[nodiscard]] double dt_max() const { return max_time_step(h, vp); }

    [[nodiscard]] SimulationDomain domain() const {
        SimulationDomain d;
        d.grid = grid;
        d.dx = d.dy = d.dz = h;
        d.size = {h * grid.nx, h * grid.ny, h * grid.nz};
        d.dt = dt > 0.0 ? dt : 0.9 * dt_max();
        d.n_steps = n_steps;
        d.bounds = {0.0, 1.0, 0.0, 1.0, 0.0, h * grid.nz / 1000.0};
        return d;
    }

    template <class Real>
    [[nodiscard]] ParameterVolume<Real> volume() const {
        const LameParameters l = lame_from_velocities(vp, vs, rho);
        return {Field3D<Real>(2, 2, 2, static_cast<Real>(rho)), Field3D<Real>(2, 2, 2, static_cast<Real>(l.lambda)),
                Field3D<Real>(2, 2, 2, static_cast<Real>(l.mu)), std::nullopt};
    }

    [[nodiscard]] GridPoint center() const {
        return {0.5 * (grid.nx - 1), 0.5 * (grid.ny - 1), 0.5 * (grid.nz - 1)};
    }
};

inline MomentTensorSource ricker_source(const MomentTensor& m, double fp, double delay = 0.0) {
    MomentTensorSource s;
    s.moment = m;
    s.stf = {WaveletKind::ricker, fp, delay > 0.0 ? delay : SourceTimeFunction::default_delay(fp)};
    return s;
}

inline Receiver receiver_at(const std::string& name, GridPoint p) {
    Receiver r;
    r.name = name;
    r.position = p;
    return r;
}

template <class Real = double>
Simulation<Real> make_box_simulation(const Box& box, const MomentTensorSource& src, GridPoint src_pos,
                                     std::vector<Receiver> receivers = {}) {
    const SimulationDomain d = box.domain();
    std::vector<PlacedSource> sources{PlacedSource::place(src, d, src_pos)};
    return Simulation<Real>(d, box.volume<Real>(), box.sponge, std::move(sources), std::move(receivers), box.options);
}

}  // namespace e3t
