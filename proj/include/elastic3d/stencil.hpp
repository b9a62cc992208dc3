#pragma once

// Staggered first-derivative stencils. Samples sit half a cell either side of
// the evaluation point.

namespace elastic3d {

inline constexpr double kStencilNear = 9.0 / 8.0;
inline constexpr double kStencilFar = 1.0 / 24.0;

/// 4th order: -(1/24)f(x+1.5) + (9/8)f(x+0.5) - (9/8)f(x-0.5) + (1/24)f(x-1.5), undivided.
template <class Real>
constexpr Real difference4(Real fp15, Real fp05, Real fm05, Real fm15) {
    return Real(kStencilNear) * (fp05 - fm05) - Real(kStencilFar) * (fp15 - fm15);
}

template <class Real>
constexpr Real difference2(Real fp05, Real fm05) {
    return fp05 - fm05;
}

/// `f` is any callable sampling the function at a real coordinate.
template <class Sampler>
double derivative4(Sampler&& f, double x, double h) {
    return difference4<double>(f(x + 1.5), f(x + 0.5), f(x - 0.5), f(x - 1.5)) / h;
}

template <class Sampler>
double derivative2(Sampler&& f, double x, double h) {
    return difference2<double>(f(x + 0.5), f(x - 0.5)) / h;
}

}  // namespace elastic3d
