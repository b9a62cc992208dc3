#pragma once

// Layered velocity model ingestion and the (typically coarse) density / Lamé
// parameter volumes sampled trilinearly by the solver.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field3d.hpp"
#include "geometry.hpp"

namespace elastic3d {

// Above-surface fill and the classification threshold for it.
inline constexpr double kVacuumDensity = 1.0;     // kg/m^3
inline constexpr double kVacuumThreshold = 10.0;  // kg/m^3

inline bool is_vacuum(double rho) { return rho < kVacuumThreshold; }

/// One layer as tabulated: km, km/s, km/s, g/cm^3.
struct Layer {
    double top_depth_km = 0.0;
    double vp_km_s = 0.0;
    double vs_km_s = 0.0;
    double rho_g_cm3 = 0.0;

    [[nodiscard]] double vp() const { return vp_km_s * 1000.0; }
    [[nodiscard]] double vs() const { return vs_km_s * 1000.0; }
    [[nodiscard]] double rho() const { return rho_g_cm3 * 1000.0; }
};

struct LameParameters {
    double lambda = 0.0;
    double mu = 0.0;
};

/// mu = rho vs^2, lambda = rho vp^2 - 2 mu (SI in, SI out).
inline LameParameters lame_from_velocities(double vp, double vs, double rho) {
    const double mu = rho * vs * vs;
    const double lambda = rho * vp * vp - 2.0 * mu;
    if (lambda < 0.0) {
        throw ModelError("negative lambda for vp=" + std::to_string(vp) + " vs=" + std::to_string(vs) +
                         " (requires vp^2 >= 2 vs^2)");
    }
    return {lambda, mu};
}

struct LayeredModel {
    std::vector<Layer> layers;
    /// Free-surface depth in km; nullopt models an unbounded full space.
    std::optional<double> surface_depth_km = 0.0;

    void validate() const {
        if (layers.empty()) throw ModelError("layered model has no layers");
        for (std::size_t n = 0; n < layers.size(); ++n) {
            const Layer& l = layers[n];
            const std::string name = "layer " + std::to_string(n) + " (top " + std::to_string(l.top_depth_km) + " km)";
            if (n > 0 && !(l.top_depth_km > layers[n - 1].top_depth_km)) {
                throw ModelError(name + ": top depths must be strictly increasing");
            }
            if (!(l.vp_km_s > l.vs_km_s) || l.vs_km_s < 0.0) throw ModelError(name + ": requires vp > vs >= 0");
            if (!(l.rho_g_cm3 > 0.0)) throw ModelError(name + ": density must be positive");
            try {
                (void)lame_from_velocities(l.vp(), l.vs(), l.rho());
            } catch (const ModelError& e) {
                throw ModelError(name + ": " + e.what());
            }
        }
        if (surface_depth_km && layers.front().top_depth_km > *surface_depth_km) {
            throw ModelError("first layer must start at or above the free surface");
        }
    }

    /// Deepest layer whose top is at or above `depth_km`; the first layer for shallower queries.
    [[nodiscard]] const Layer& layer_at(double depth_km) const {
        if (layers.empty()) throw ModelError("layered model has no layers");
        auto it = std::upper_bound(layers.begin(), layers.end(), depth_km,
                                   [](double d, const Layer& l) { return d < l.top_depth_km; });
        return it == layers.begin() ? layers.front() : *std::prev(it);
    }

    [[nodiscard]] double max_velocity() const {
        double v = 0.0;
        for (const Layer& l : layers) v = std::max(v, l.vp());
        return v;
    }

    /// Slowest propagating wave; fluid layers (vs = 0) contribute their vp.
    [[nodiscard]] double min_velocity() const {
        double v = std::numeric_limits<double>::infinity();
        for (const Layer& l : layers) v = std::min(v, l.vs() > 0.0 ? l.vs() : l.vp());
        return v;
    }
};

template <class Real>
struct ParameterVolume {
    Field3D<Real> rho;
    Field3D<Real> lambda;
    Field3D<Real> mu;
    /// Free-surface z in local meters; nullopt when there is none.
    std::optional<double> surface_z;

    [[nodiscard]] GridDims dims() const { return {rho.nx(), rho.ny(), rho.nz()}; }
};

/// Default parameter grid: simulation grid divided per axis, never below 2.
inline GridDims parameter_grid_for(GridDims sim, std::array<int, 3> divisor = {4, 4, 4}) {
    auto reduce = [](int n, int d) { return std::max(2, n / std::max(1, d)); };
    return {reduce(sim.nx, divisor[0]), reduce(sim.ny, divisor[1]), reduce(sim.nz, divisor[2])};
}

template <class Real = double>
ParameterVolume<Real> build_parameter_volume(const LayeredModel& model, const SimulationDomain& domain,
                                             GridDims param) {
    model.validate();
    if (param.nx < 2 || param.ny < 2 || param.nz < 2) {
        throw DomainError("parameter grid needs at least 2 samples per axis");
    }
    ParameterVolume<Real> v{Field3D<Real>(param.nx, param.ny, param.nz), Field3D<Real>(param.nx, param.ny, param.nz),
                            Field3D<Real>(param.nx, param.ny, param.nz), std::nullopt};
    if (model.surface_depth_km) {
        v.surface_z = (*model.surface_depth_km - domain.bounds.depth_min_km) * 1000.0;
    }

    const double cell_km = (domain.bounds.depth_max_km - domain.bounds.depth_min_km) / param.nz;
    for (int k = 0; k < param.nz; ++k) {
        const double depth = domain.bounds.depth_min_km + (k + 0.5) * cell_km;
        double rho = kVacuumDensity;
        LameParameters lame{};
        if (!model.surface_depth_km || depth >= *model.surface_depth_km) {
            const Layer& layer = model.layer_at(depth);
            rho = layer.rho();
            lame = lame_from_velocities(layer.vp(), layer.vs(), rho);
        }
        for (int j = 0; j < param.ny; ++j) {
            for (int i = 0; i < param.nx; ++i) {
                v.rho(i, j, k) = static_cast<Real>(rho);
                v.lambda(i, j, k) = static_cast<Real>(lame.lambda);
                v.mu(i, j, k) = static_cast<Real>(lame.mu);
            }
        }
    }
    return v;
}

/// Simulation-grid coordinate to parameter-grid coordinate; both grids span
/// the same box with samples at cell centers.
inline double to_parameter_coord(double sim_coord, int sim_n, int param_n) {
    return (sim_coord + 0.5) * param_n / sim_n - 0.5;
}

struct MediumSample {
    double rho = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
};

template <class Real>
MediumSample sample_medium(const ParameterVolume<Real>& v, GridDims sim, const GridPoint& p) {
    const GridDims pd = v.dims();
    const AxisWeight ax = axis_weight(to_parameter_coord(p.x, sim.nx, pd.nx), pd.nx);
    const AxisWeight ay = axis_weight(to_parameter_coord(p.y, sim.ny, pd.ny), pd.ny);
    const AxisWeight az = axis_weight(to_parameter_coord(p.z, sim.nz, pd.nz), pd.nz);
    return {static_cast<double>(blend(v.rho, ax, ay, az)), static_cast<double>(blend(v.lambda, ax, ay, az)),
            static_cast<double>(blend(v.mu, ax, ay, az))};
}

}  // namespace elastic3d
