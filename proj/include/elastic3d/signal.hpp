#pragma once

// Trace post-processing: Butterworth band-pass (zero phase), resampling and
// the rms / relative misfit metrics.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace elastic3d {

/// Second-order section, a0 == 1.
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

/// Digital Butterworth band-pass of the given prototype order as a cascade of
/// biquads (bilinear transform with prewarped band edges).
inline std::vector<Biquad> butterworth_bandpass(int order, double f_lo, double f_hi, double fs) {
    const double nyquist = 0.5 * fs;
    if (order < 1) throw ConfigError("band-pass order must be >= 1");
    if (!(f_lo > 0.0) || !(f_lo < f_hi)) throw ConfigError("band-pass requires 0 < f_lo < f_hi");
    if (!(f_hi < nyquist)) {
        throw ConfigError("band-pass corner " + std::to_string(f_hi) + " Hz is not below Nyquist " +
                          std::to_string(nyquist) + " Hz");
    }
    using cplx = std::complex<double>;
    const double fs2 = 2.0 * fs;
    const double w1 = fs2 * std::tan(std::numbers::pi * f_lo / fs);
    const double w2 = fs2 * std::tan(std::numbers::pi * f_hi / fs);
    const double bw = w2 - w1;
    const double w0sq = w1 * w2;

    std::vector<cplx> poles;
    for (int m = -order + 1; m < order; m += 2) {
        const cplx p = -std::exp(cplx(0.0, std::numbers::pi * m / (2.0 * order)));
        const cplx half = p * (bw / 2.0);
        const cplx root = std::sqrt(half * half - w0sq);
        poles.push_back(half + root);
        poles.push_back(half - root);
    }

    // Overall gain: k_analog = bw^order, then bilinear gain with `order` zeros at s = 0.
    cplx ratio = 1.0;
    for (int n = 0; n < order; ++n) ratio *= fs2;
    for (const cplx& p : poles) ratio /= (fs2 - p);
    const double gain = std::pow(bw, order) * ratio.real();

    std::vector<Biquad> sos;
    for (const cplx& p : poles) {
        const cplx z = (fs2 + p) / (fs2 - p);
        if (z.imag() <= 0.0) continue;  // one per conjugate pair
        Biquad s;
        s.b0 = 1.0;
        s.b1 = 0.0;
        s.b2 = -1.0;  // zeros at z = +1 and z = -1
        s.a1 = -2.0 * z.real();
        s.a2 = std::norm(z);
        sos.push_back(s);
    }
    if (static_cast<int>(sos.size()) != order) throw std::logic_error("butterworth_bandpass: pole pairing failed");
    sos.front().b0 *= gain;
    sos.front().b1 *= gain;
    sos.front().b2 *= gain;
    return sos;
}

/// Magnitude response |H(e^{i 2 pi f / fs})| of a biquad cascade.
inline double sos_magnitude(std::span<const Biquad> sos, double f, double fs) {
    const std::complex<double> zinv = std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi * f / fs));
    std::complex<double> h = 1.0;
    for (const Biquad& s : sos) {
        h *= (s.b0 + s.b1 * zinv + s.b2 * zinv * zinv) / (1.0 + s.a1 * zinv + s.a2 * zinv * zinv);
    }
    return std::abs(h);
}

namespace detail {

// Transposed direct form II, state carried in-place.
inline void sos_filter(std::span<const Biquad> sos, std::vector<double>& x, std::vector<std::array<double, 2>> state) {
    for (std::size_t s = 0; s < sos.size(); ++s) {
        const Biquad& q = sos[s];
        double z0 = state[s][0];
        double z1 = state[s][1];
        for (double& v : x) {
            const double in = v;
            const double out = q.b0 * in + z0;
            z0 = q.b1 * in - q.a1 * out + z1;
            z1 = q.b2 * in - q.a2 * out;
            v = out;
        }
    }
}

// Steady-state initial conditions for a unit step through the cascade.
inline std::vector<std::array<double, 2>> sos_step_state(std::span<const Biquad> sos) {
    std::vector<std::array<double, 2>> zi(sos.size());
    double scale = 1.0;
    for (std::size_t s = 0; s < sos.size(); ++s) {
        const Biquad& q = sos[s];
        const double r0 = q.b1 - q.a1 * q.b0;
        const double r1 = q.b2 - q.a2 * q.b0;
        const double det = 1.0 + q.a1 + q.a2;
        zi[s] = {scale * (r0 + r1) / det, scale * ((1.0 + q.a1) * r1 - q.a2 * r0) / det};
        scale *= (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
    }
    return zi;
}

}  // namespace detail

/// Forward-backward filtering with odd extension at both ends and
/// steady-state initial conditions; output has the input's length.
inline std::vector<double> filtfilt(std::span<const Biquad> sos, std::span<const double> x) {
    if (x.empty()) return {};
    const std::size_t n = x.size();
    std::size_t pad = 3 * (2 * sos.size() + 1);
    if (pad >= n) pad = n - 1;

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    const auto zi = detail::sos_step_state(sos);
    auto scaled = [&](double v) {
        auto z = zi;
        for (auto& s : z) s = {s[0] * v, s[1] * v};
        return z;
    };
    detail::sos_filter(sos, ext, scaled(ext.front()));
    std::reverse(ext.begin(), ext.end());
    detail::sos_filter(sos, ext, scaled(ext.front()));
    std::reverse(ext.begin(), ext.end());
    return {ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

inline constexpr int kBandpassOrder = 4;

/// Zero-phase 4th-order Butterworth band-pass of a trace sampled at `dt`.
inline std::vector<double> bandpass(std::span<const double> trace, double dt, double f_lo, double f_hi) {
    const auto sos = butterworth_bandpass(kBandpassOrder, f_lo, f_hi, 1.0 / dt);
    return filtfilt(sos, trace);
}

/// Linear interpolation of a uniformly sampled series onto another uniform
/// axis. Times are relative to a common origin; samples outside the source
/// span take the nearest end value.
inline std::vector<double> resample_linear(std::span<const double> src, double src_t0, double src_dt, double dst_t0,
                                           double dst_dt, std::size_t n) {
    if (src.empty()) throw DomainError("resample_linear: empty source");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pos = (dst_t0 + i * dst_dt - src_t0) / src_dt;
        if (pos <= 0.0) {
            out[i] = src.front();
        } else if (pos >= static_cast<double>(src.size() - 1)) {
            out[i] = src.back();
        } else {
            const auto k = static_cast<std::size_t>(pos);
            const double w = pos - static_cast<double>(k);
            out[i] = src[k] * (1.0 - w) + src[k + 1] * w;
        }
    }
    return out;
}

inline double rms(std::span<const double> x) {
    if (x.empty()) throw DomainError("rms of an empty trace");
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

inline double rms_error(std::span<const double> sim, std::span<const double> ref) {
    if (sim.size() != ref.size()) {
        throw DomainError("rms_error: length mismatch (" + std::to_string(sim.size()) + " vs " +
                          std::to_string(ref.size()) + "); resample first");
    }
    if (sim.empty()) throw DomainError("rms_error: empty traces");
    double s = 0.0;
    for (std::size_t i = 0; i < sim.size(); ++i) {
        const double d = sim[i] - ref[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(sim.size()));
}

inline double relative_error(std::span<const double> sim, std::span<const double> ref) {
    const double e = rms_error(sim, ref);
    const double r = rms(ref);
    if (r == 0.0) throw DomainError("relative_error: reference trace is identically zero");
    return e / r;
}

}  // namespace elastic3d
