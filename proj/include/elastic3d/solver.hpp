#pragma once

// Velocity-stress staggered-grid time stepping.
//
// Each step runs two data-parallel phases that accumulate in place:
//   stresses   += dt * C : grad(v)           (reads v, lambda, mu)
//   velocities += dt / rho * div(sigma)      (reads sigma, rho)
// followed by a multiplicative sponge pass on the updated values. Every
// output sample is one expression of the phase inputs, so any partition of
// z-slices among workers reproduces the serial result bit for bit.

#include <omp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "fields.hpp"
#include "geometry.hpp"
#include "medium.hpp"
#include "receivers.hpp"
#include "source.hpp"
#include "sponge.hpp"
#include "stencil.hpp"

namespace elastic3d {

enum class Backend { cpu_serial, cpu_parallel, gpu };

inline std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::cpu_serial: return "cpu-serial";
        case Backend::cpu_parallel: return "cpu-parallel";
        case Backend::gpu: return "gpu";
    }
    return "?";
}

inline Backend backend_from_name(std::string_view s) {
    if (s == "cpu-serial") return Backend::cpu_serial;
    if (s == "cpu-parallel") return Backend::cpu_parallel;
    if (s == "gpu") return Backend::gpu;
    throw ConfigError("unknown backend '" + std::string(s) + "' (expected cpu-serial, cpu-parallel or gpu)");
}

/// Throws BackendUnavailable for backends this build cannot execute.
inline void require_backend(Backend b) {
    if (b == Backend::gpu) {
        throw BackendUnavailable("gpu backend is not available in this build; use cpu-serial or cpu-parallel");
    }
}

struct SolverOptions {
    Backend backend = Backend::cpu_serial;
    int threads = 0;                     // cpu-parallel worker count; 0 = OpenMP default
    bool medium_cache = false;           // precompute medium at staggered points
    int divergence_check_interval = 10;  // full non-finite scan cadence in steps (0 = never)
};

struct StepReport {
    int step = 0;
    double wall_time = 0.0;  // s
    double max_velocity = 0.0;
    bool diverged = false;
};

/// Half-cell offsets of the medium sample points used by the kernels.
enum MediumPoint : int { kAtVx, kAtVy, kAtVz, kAtNode, kAtSxy, kAtSxz, kAtSyz };

/// Precomputed addressing, interpolation and damping tables shared by both phases.
template <class Real>
class SolverContext {
public:
    SolverContext(const SimulationDomain& domain, ParameterVolume<Real> volume, const SpongeProfile& sponge,
                  const SolverOptions& options)
        : grid_(domain.grid), volume_(std::move(volume)), sponge_(sponge, domain.grid), options_(options) {
        sponge.validate();
        const GridDims g = grid_;
        const GridDims pg = volume_.dims();
        build_axis(ax_, g.nx, 1);
        build_axis(ay_, g.ny, g.nx);
        build_axis(az_, g.nz, g.nx * g.ny);
        for (int half = 0; half < 2; ++half) {
            for (int i = 0; i < g.nx; ++i)
                mx_[half].push_back(axis_weight(to_parameter_coord(i + 0.5 * half, g.nx, pg.nx), pg.nx));
            for (int j = 0; j < g.ny; ++j)
                my_[half].push_back(axis_weight(to_parameter_coord(j + 0.5 * half, g.ny, pg.ny), pg.ny));
            for (int k = 0; k < g.nz; ++k)
                mz_[half].push_back(axis_weight(to_parameter_coord(k + 0.5 * half, g.nz, pg.nz), pg.nz));
        }
        inv_h_ = {Real(1.0 / domain.dx), Real(1.0 / domain.dy), Real(1.0 / domain.dz)};

        // 2nd-order band: within 2 cells of the surface level.
        for (int half = 0; half < 2; ++half) {
            band_[half].assign(static_cast<std::size_t>(g.nz), 0);
            if (volume_.surface_z) {
                const double zs = *volume_.surface_z / domain.dz - 0.5;
                for (int k = 0; k < g.nz; ++k) band_[half][k] = std::abs(k + 0.5 * half - zs) < 2.0;
            }
        }

        if (options_.medium_cache) {
            cache_.resize(7);
            for (int p = 0; p < 7; ++p) cache_[p] = Field3D<Real>(g.nx, g.ny, g.nz);
            for (int k = 0; k < g.nz; ++k)
                for (int j = 0; j < g.ny; ++j)
                    for (int i = 0; i < g.nx; ++i) {
                        const std::size_t idx = cache_[0].index(i, j, k);
                        cache_[kAtVx].data()[idx] = sample_rho(kAtVx, i, j, k);
                        cache_[kAtVy].data()[idx] = sample_rho(kAtVy, i, j, k);
                        cache_[kAtVz].data()[idx] = sample_rho(kAtVz, i, j, k);
                        cache_[kAtNode].data()[idx] = sample_mu(kAtNode, i, j, k);
                        cache_[kAtSxy].data()[idx] = sample_mu(kAtSxy, i, j, k);
                        cache_[kAtSxz].data()[idx] = sample_mu(kAtSxz, i, j, k);
                        cache_[kAtSyz].data()[idx] = sample_mu(kAtSyz, i, j, k);
                    }
            lambda_cache_ = Field3D<Real>(g.nx, g.ny, g.nz);
            for (int k = 0; k < g.nz; ++k)
                for (int j = 0; j < g.ny; ++j)
                    for (int i = 0; i < g.nx; ++i) lambda_cache_(i, j, k) = sample_lambda(i, j, k);
        }
    }

    [[nodiscard]] GridDims grid() const { return grid_; }
    [[nodiscard]] const ParameterVolume<Real>& volume() const { return volume_; }
    [[nodiscard]] const SpongeTable<Real>& sponge() const { return sponge_; }
    [[nodiscard]] const SolverOptions& options() const { return options_; }
    [[nodiscard]] bool near_surface(int k, bool half_z) const { return band_[half_z ? 1 : 0][k] != 0; }

    // Runtime trilinear medium lookups at staggered points.
    [[nodiscard]] Real sample_rho(MediumPoint p, int i, int j, int k) const {
        return blend(volume_.rho, mx_[hx(p)][i], my_[hy(p)][j], mz_[hz(p)][k]);
    }
    [[nodiscard]] Real sample_mu(MediumPoint p, int i, int j, int k) const {
        return blend(volume_.mu, mx_[hx(p)][i], my_[hy(p)][j], mz_[hz(p)][k]);
    }
    [[nodiscard]] Real sample_lambda(int i, int j, int k) const {
        return blend(volume_.lambda, mx_[0][i], my_[0][j], mz_[0][k]);
    }

    struct SliceStats {
        Real max_abs = 0;
        bool finite = true;
    };

    template <int Order, bool Cached>
    void velocity_slice(FieldSet<Real>& f, int k, Real dt, SliceStats& st) const;
    template <int Order, bool Cached>
    void velocity_z_slice(FieldSet<Real>& f, int k, Real dt, SliceStats& st) const;
    template <int Order, bool Cached>
    void normal_stress_slice(FieldSet<Real>& f, int k, Real dt) const;
    template <int Order, bool Cached>
    void shear_xy_slice(FieldSet<Real>& f, int k, Real dt) const;
    template <int Order, bool Cached>
    void shear_z_slice(FieldSet<Real>& f, int k, Real dt) const;

private:
    struct Axis {
        std::vector<int> m2, m1, c, p1, p2;  // mirrored neighbor index times stride
    };

    static void build_axis(Axis& a, int n, int stride) {
        for (int i = 0; i < n; ++i) {
            a.m2.push_back(mirrored_index(i - 2, n) * stride);
            a.m1.push_back(mirrored_index(i - 1, n) * stride);
            a.c.push_back(i * stride);
            a.p1.push_back(mirrored_index(i + 1, n) * stride);
            a.p2.push_back(mirrored_index(i + 2, n) * stride);
        }
    }

    static int hx(MediumPoint p) { return p == kAtVx || p == kAtSxy || p == kAtSxz; }
    static int hy(MediumPoint p) { return p == kAtVy || p == kAtSxy || p == kAtSyz; }
    static int hz(MediumPoint p) { return p == kAtVz || p == kAtSxz || p == kAtSyz; }

    template <bool Cached>
    Real rho_at(MediumPoint p, std::size_t idx, int i, int j, int k) const {
        if constexpr (Cached) return cache_[p].data()[idx];
        else return sample_rho(p, i, j, k);
    }
    template <bool Cached>
    Real mu_at(MediumPoint p, std::size_t idx, int i, int j, int k) const {
        if constexpr (Cached) return cache_[p].data()[idx];
        else return sample_mu(p, i, j, k);
    }
    template <bool Cached>
    Real lambda_at(std::size_t idx, int i, int j, int k) const {
        if constexpr (Cached) return lambda_cache_.data()[idx];
        else return sample_lambda(i, j, k);
    }

    // Samples at x+1.5, x+0.5, x-0.5, x-1.5.
    template <int Order>
    static Real diff(Real p15, Real p05, Real m05, Real m15) {
        if constexpr (Order == 4) return difference4(p15, p05, m05, m15);
        else return difference2(p05, m05);
    }

    Real weight(int i, int j, int k) const { return sponge_.weight(i, j, k); }

    GridDims grid_;
    ParameterVolume<Real> volume_;
    SpongeTable<Real> sponge_;
    SolverOptions options_;
    Axis ax_, ay_, az_;
    std::array<std::vector<AxisWeight>, 2> mx_, my_, mz_;
    std::array<std::vector<char>, 2> band_;
    std::array<Real, 3> inv_h_{};
    std::vector<Field3D<Real>> cache_;
    Field3D<Real> lambda_cache_;
};

// vx at (i+.5, j, k), vy at (i, j+.5, k).
template <class Real>
template <int Order, bool Cached>
void SolverContext<Real>::velocity_slice(FieldSet<Real>& f, int k, Real dt, SliceStats& st) const {
    const Real* sxx = f.sxx.data();
    const Real* syy = f.syy.data();
    const Real* sxy = f.sxy.data();
    const Real* sxz = f.sxz.data();
    const Real* syz = f.syz.data();
    Real* vx = f.vx.data();
    Real* vy = f.vy.data();
    const int zc = az_.c[k], zp1 = az_.p1[k], zm1 = az_.m1[k], zm2 = az_.m2[k];
    for (int j = 0; j < grid_.ny; ++j) {
        const int yc = ay_.c[j], yp1 = ay_.p1[j], yp2 = ay_.p2[j], ym1 = ay_.m1[j], ym2 = ay_.m2[j];
        for (int i = 0; i < grid_.nx; ++i) {
            const int xc = ax_.c[i], xp1 = ax_.p1[i], xp2 = ax_.p2[i], xm1 = ax_.m1[i], xm2 = ax_.m2[i];
            const std::size_t idx = static_cast<std::size_t>(xc + yc + zc);
            const Real w = weight(i, j, k);

            const Real rho_x = rho_at<Cached>(kAtVx, idx, i, j, k);
            Real vxn = 0;
            if (!is_vacuum(rho_x)) {
                const Real dxx = diff<Order>(sxx[xp2 + yc + zc], sxx[xp1 + yc + zc], sxx[idx], sxx[xm1 + yc + zc]);
                const Real dxy = diff<Order>(sxy[xc + yp1 + zc], sxy[idx], sxy[xc + ym1 + zc], sxy[xc + ym2 + zc]);
                const Real dxz = diff<Order>(sxz[xc + yc + zp1], sxz[idx], sxz[xc + yc + zm1], sxz[xc + yc + zm2]);
                vxn = (vx[idx] + dt / rho_x * (dxx * inv_h_[0] + dxy * inv_h_[1] + dxz * inv_h_[2])) * w;
            }
            vx[idx] = vxn;

            const Real rho_y = rho_at<Cached>(kAtVy, idx, i, j, k);
            Real vyn = 0;
            if (!is_vacuum(rho_y)) {
                const Real dyx = diff<Order>(sxy[xp1 + yc + zc], sxy[idx], sxy[xm1 + yc + zc], sxy[xm2 + yc + zc]);
                const Real dyy = diff<Order>(syy[xc + yp2 + zc], syy[xc + yp1 + zc], syy[idx], syy[xc + ym1 + zc]);
                const Real dyz = diff<Order>(syz[xc + yc + zp1], syz[idx], syz[xc + yc + zm1], syz[xc + yc + zm2]);
                vyn = (vy[idx] + dt / rho_y * (dyx * inv_h_[0] + dyy * inv_h_[1] + dyz * inv_h_[2])) * w;
            }
            vy[idx] = vyn;

            if (!std::isfinite(vxn) || !std::isfinite(vyn)) st.finite = false;
            st.max_abs = std::max({st.max_abs, std::abs(vxn), std::abs(vyn)});
        }
    }
}

// vz at (i, j, k+.5); separate because its near-surface band is offset.
template <class Real>
template <int Order, bool Cached>
void SolverContext<Real>::velocity_z_slice(FieldSet<Real>& f, int k, Real dt, SliceStats& st) const {
    const Real* szz = f.szz.data();
    const Real* sxz = f.sxz.data();
    const Real* syz = f.syz.data();
    Real* vz = f.vz.data();
    const int zc = az_.c[k], zp1 = az_.p1[k], zp2 = az_.p2[k], zm1 = az_.m1[k];
    for (int j = 0; j < grid_.ny; ++j) {
        const int yc = ay_.c[j], yp1 = ay_.p1[j], ym1 = ay_.m1[j], ym2 = ay_.m2[j];
        for (int i = 0; i < grid_.nx; ++i) {
            const int xc = ax_.c[i], xp1 = ax_.p1[i], xm1 = ax_.m1[i], xm2 = ax_.m2[i];
            const std::size_t idx = static_cast<std::size_t>(xc + yc + zc);
            const Real rho_z = rho_at<Cached>(kAtVz, idx, i, j, k);
            Real vzn = 0;
            if (!is_vacuum(rho_z)) {
                const Real dzx = diff<Order>(sxz[xp1 + yc + zc], sxz[idx], sxz[xm1 + yc + zc], sxz[xm2 + yc + zc]);
                const Real dzy = diff<Order>(syz[xc + yp1 + zc], syz[idx], syz[xc + ym1 + zc], syz[xc + ym2 + zc]);
                const Real dzz = diff<Order>(szz[xc + yc + zp2], szz[xc + yc + zp1], szz[idx], szz[xc + yc + zm1]);
                vzn = (vz[idx] + dt / rho_z * (dzx * inv_h_[0] + dzy * inv_h_[1] + dzz * inv_h_[2])) * weight(i, j, k);
            }
            vz[idx] = vzn;
            if (!std::isfinite(vzn)) st.finite = false;
            st.max_abs = std::max(st.max_abs, std::abs(vzn));
        }
    }
}

template <class Real>
template <int Order, bool Cached>
void SolverContext<Real>::normal_stress_slice(FieldSet<Real>& f, int k, Real dt) const {
    const Real* vx = f.vx.data();
    const Real* vy = f.vy.data();
    const Real* vz = f.vz.data();
    Real* sxx = f.sxx.data();
    Real* syy = f.syy.data();
    Real* szz = f.szz.data();
    const int zc = az_.c[k], zp1 = az_.p1[k], zm1 = az_.m1[k], zm2 = az_.m2[k];
    for (int j = 0; j < grid_.ny; ++j) {
        const int yc = ay_.c[j], yp1 = ay_.p1[j], ym1 = ay_.m1[j], ym2 = ay_.m2[j];
        for (int i = 0; i < grid_.nx; ++i) {
            const int xc = ax_.c[i], xp1 = ax_.p1[i], xm1 = ax_.m1[i], xm2 = ax_.m2[i];
            const std::size_t idx = static_cast<std::size_t>(xc + yc + zc);
            const Real lam = lambda_at<Cached>(idx, i, j, k);
            const Real mu = mu_at<Cached>(kAtNode, idx, i, j, k);
            const Real exx = diff<Order>(vx[xp1 + yc + zc], vx[idx], vx[xm1 + yc + zc], vx[xm2 + yc + zc]) * inv_h_[0];
            const Real eyy = diff<Order>(vy[xc + yp1 + zc], vy[idx], vy[xc + ym1 + zc], vy[xc + ym2 + zc]) * inv_h_[1];
            const Real ezz = diff<Order>(vz[xc + yc + zp1], vz[idx], vz[xc + yc + zm1], vz[xc + yc + zm2]) * inv_h_[2];
            const Real trace = exx + eyy + ezz;
            const Real w = weight(i, j, k);
            sxx[idx] = (sxx[idx] + dt * (lam * trace + 2 * mu * exx)) * w;
            syy[idx] = (syy[idx] + dt * (lam * trace + 2 * mu * eyy)) * w;
            szz[idx] = (szz[idx] + dt * (lam * trace + 2 * mu * ezz)) * w;
        }
    }
}

// sxy at (i+.5, j+.5, k).
template <class Real>
template <int Order, bool Cached>
void SolverContext<Real>::shear_xy_slice(FieldSet<Real>& f, int k, Real dt) const {
    const Real* vx = f.vx.data();
    const Real* vy = f.vy.data();
    Real* sxy = f.sxy.data();
    const int zc = az_.c[k];
    for (int j = 0; j < grid_.ny; ++j) {
        const int yc = ay_.c[j], yp1 = ay_.p1[j], yp2 = ay_.p2[j], ym1 = ay_.m1[j];
        for (int i = 0; i < grid_.nx; ++i) {
            const int xc = ax_.c[i], xp1 = ax_.p1[i], xp2 = ax_.p2[i], xm1 = ax_.m1[i];
            const std::size_t idx = static_cast<std::size_t>(xc + yc + zc);
            const Real mu = mu_at<Cached>(kAtSxy, idx, i, j, k);
            const Real dvy_dx = diff<Order>(vy[xp2 + yc + zc], vy[xp1 + yc + zc], vy[idx], vy[xm1 + yc + zc]) * inv_h_[0];
            const Real dvx_dy = diff<Order>(vx[xc + yp2 + zc], vx[xc + yp1 + zc], vx[idx], vx[xc + ym1 + zc]) * inv_h_[1];
            sxy[idx] = (sxy[idx] + dt * mu * (dvy_dx + dvx_dy)) * weight(i, j, k);
        }
    }
}

// sxz at (i+.5, j, k+.5), syz at (i, j+.5, k+.5).
template <class Real>
template <int Order, bool Cached>
void SolverContext<Real>::shear_z_slice(FieldSet<Real>& f, int k, Real dt) const {
    const Real* vx = f.vx.data();
    const Real* vy = f.vy.data();
    const Real* vz = f.vz.data();
    Real* sxz = f.sxz.data();
    Real* syz = f.syz.data();
    const int zc = az_.c[k], zp1 = az_.p1[k], zp2 = az_.p2[k], zm1 = az_.m1[k];
    for (int j = 0; j < grid_.ny; ++j) {
        const int yc = ay_.c[j], yp1 = ay_.p1[j], yp2 = ay_.p2[j], ym1 = ay_.m1[j];
        for (int i = 0; i < grid_.nx; ++i) {
            const int xc = ax_.c[i], xp1 = ax_.p1[i], xp2 = ax_.p2[i], xm1 = ax_.m1[i];
            const std::size_t idx = static_cast<std::size_t>(xc + yc + zc);
            const Real w = weight(i, j, k);

            const Real mu_xz = mu_at<Cached>(kAtSxz, idx, i, j, k);
            const Real dvz_dx = diff<Order>(vz[xp2 + yc + zc], vz[xp1 + yc + zc], vz[idx], vz[xm1 + yc + zc]) * inv_h_[0];
            const Real dvx_dz = diff<Order>(vx[xc + yc + zp2], vx[xc + yc + zp1], vx[idx], vx[xc + yc + zm1]) * inv_h_[2];
            sxz[idx] = (sxz[idx] + dt * mu_xz * (dvz_dx + dvx_dz)) * w;

            const Real mu_yz = mu_at<Cached>(kAtSyz, idx, i, j, k);
            const Real dvz_dy = diff<Order>(vz[xc + yp2 + zc], vz[xc + yp1 + zc], vz[idx], vz[xc + ym1 + zc]) * inv_h_[1];
            const Real dvy_dz = diff<Order>(vy[xc + yc + zp2], vy[xc + yc + zp1], vy[idx], vy[xc + yc + zm1]) * inv_h_[2];
            syz[idx] = (syz[idx] + dt * mu_yz * (dvz_dy + dvy_dz)) * w;
        }
    }
}

namespace detail {

template <class Fn>
void for_each_slice(int nz, const SolverOptions& opt, Fn&& fn) {
    if (opt.backend == Backend::cpu_parallel) {
        const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
        for (int k = 0; k < nz; ++k) fn(k);
    } else {
        for (int k = 0; k < nz; ++k) fn(k);
    }
}

}  // namespace detail

/// Velocity phase: v += dt/rho div(sigma), sponge-weighted; vacuum points pinned to 0.
/// Returns the largest |v| written, or NaN if any non-finite value appeared.
template <class Real>
double update_velocities(FieldSet<Real>& f, const SolverContext<Real>& ctx, double dt) {
    using Stats = typename SolverContext<Real>::SliceStats;
    const int nz = ctx.grid().nz;
    std::vector<Stats> stats(static_cast<std::size_t>(nz));
    const Real rdt = static_cast<Real>(dt);
    detail::for_each_slice(nz, ctx.options(), [&](int k) {
        Stats& st = stats[static_cast<std::size_t>(k)];
        const bool cached = ctx.options().medium_cache;
        const bool fourth_h = !ctx.near_surface(k, false);
        const bool fourth_z = !ctx.near_surface(k, true);
        if (cached) {
            fourth_h ? ctx.template velocity_slice<4, true>(f, k, rdt, st) : ctx.template velocity_slice<2, true>(f, k, rdt, st);
            fourth_z ? ctx.template velocity_z_slice<4, true>(f, k, rdt, st) : ctx.template velocity_z_slice<2, true>(f, k, rdt, st);
        } else {
            fourth_h ? ctx.template velocity_slice<4, false>(f, k, rdt, st) : ctx.template velocity_slice<2, false>(f, k, rdt, st);
            fourth_z ? ctx.template velocity_z_slice<4, false>(f, k, rdt, st) : ctx.template velocity_z_slice<2, false>(f, k, rdt, st);
        }
    });
    double max_abs = 0.0;
    for (const Stats& s : stats) {
        if (!s.finite) return std::numeric_limits<double>::quiet_NaN();
        max_abs = std::max(max_abs, static_cast<double>(s.max_abs));
    }
    return max_abs;
}

/// Stress phase: isotropic Hooke law on the 4th-order (2nd near the surface) strain rates.
template <class Real>
void update_stresses(FieldSet<Real>& f, const SolverContext<Real>& ctx, double dt) {
    const int nz = ctx.grid().nz;
    const Real rdt = static_cast<Real>(dt);
    detail::for_each_slice(nz, ctx.options(), [&](int k) {
        const bool cached = ctx.options().medium_cache;
        const bool fourth_h = !ctx.near_surface(k, false);
        const bool fourth_z = !ctx.near_surface(k, true);
        if (cached) {
            fourth_h ? ctx.template normal_stress_slice<4, true>(f, k, rdt) : ctx.template normal_stress_slice<2, true>(f, k, rdt);
            fourth_h ? ctx.template shear_xy_slice<4, true>(f, k, rdt) : ctx.template shear_xy_slice<2, true>(f, k, rdt);
            fourth_z ? ctx.template shear_z_slice<4, true>(f, k, rdt) : ctx.template shear_z_slice<2, true>(f, k, rdt);
        } else {
            fourth_h ? ctx.template normal_stress_slice<4, false>(f, k, rdt) : ctx.template normal_stress_slice<2, false>(f, k, rdt);
            fourth_h ? ctx.template shear_xy_slice<4, false>(f, k, rdt) : ctx.template shear_xy_slice<2, false>(f, k, rdt);
            fourth_z ? ctx.template shear_z_slice<4, false>(f, k, rdt) : ctx.template shear_z_slice<2, false>(f, k, rdt);
        }
    });
}

struct RunResult {
    TraceSet traces;
    std::vector<StepReport> reports;
    bool diverged = false;
};

/// One simulation: fields, resolved sources and receivers, and the trace buffer.
template <class Real>
class Simulation {
public:
    Simulation(const SimulationDomain& domain, ParameterVolume<Real> volume, const SpongeProfile& sponge,
               std::vector<PlacedSource> sources, std::vector<Receiver> receivers, SolverOptions options = {})
        : domain_(domain),
          ctx_(checked_domain(domain, options), std::move(volume), sponge, options),
          fields_(domain.grid),
          sources_(std::move(sources)),
          receivers_(std::move(receivers)),
          traces_(receivers_.size(), static_cast<std::size_t>(domain.n_steps), domain.dt) {}

    [[nodiscard]] const SimulationDomain& domain() const { return domain_; }
    [[nodiscard]] const SolverContext<Real>& context() const { return ctx_; }
    FieldSet<Real>& fields() { return fields_; }
    [[nodiscard]] const FieldSet<Real>& fields() const { return fields_; }
    [[nodiscard]] const TraceSet& traces() const { return traces_; }
    [[nodiscard]] std::span<const Receiver> receivers() const { return receivers_; }
    [[nodiscard]] std::span<const PlacedSource> sources() const { return sources_; }
    void set_recording(bool on) { recording_ = on; }

    /// Stresses, source injection, velocities, receiver readout; each phase completes before the next.
    StepReport step(int t_index) {
        const auto t0 = std::chrono::steady_clock::now();
        const double dt = domain_.dt;
        update_stresses(fields_, ctx_, dt);
        for (const PlacedSource& s : sources_) inject_source(fields_, s, domain_, t_index * dt, dt);
        const double vmax = update_velocities(fields_, ctx_, dt);
        if (recording_ && !receivers_.empty() && traces_.length() < traces_.capacity()) {
            record_receivers(fields_, std::span<const Receiver>(receivers_), traces_, traces_.length());
        }

        StepReport r;
        r.step = t_index;
        r.max_velocity = vmax;
        r.diverged = !std::isfinite(vmax);
        const int every = ctx_.options().divergence_check_interval;
        if (!r.diverged && every > 0 && (t_index + 1) % every == 0) r.diverged = !fields_.all_finite();
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }

    /// Advances n_steps (or `steps` when given); stops at the first diverged step.
    RunResult run(std::optional<int> steps = std::nullopt) {
        RunResult out;
        const int n = steps.value_or(domain_.n_steps);
        out.reports.reserve(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            out.reports.push_back(step(t));
            if (out.reports.back().diverged) {
                out.diverged = true;
                break;
            }
        }
        out.traces = traces_;
        return out;
    }

private:
    static const SimulationDomain& checked_domain(const SimulationDomain& d, const SolverOptions& o) {
        require_backend(o.backend);
        return d;
    }

    SimulationDomain domain_;
    SolverContext<Real> ctx_;
    FieldSet<Real> fields_;
    std::vector<PlacedSource> sources_;
    std::vector<Receiver> receivers_;
    TraceSet traces_;
    bool recording_ = true;
};

}  // namespace elastic3d
