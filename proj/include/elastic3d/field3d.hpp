#pragma once

// Dense 3D scalar field (x fastest) with mirrored-repeat addressing and
// trilinear sampling.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "errors.hpp"

namespace elastic3d {

/// Reflect-with-edge-repeat addressing, period 2n: ... 1 0 | 0 1 .. n-1 | n-1 n-2 ...
inline int mirrored_index(long long i, int n) {
    const long long period = 2LL * n;
    long long m = i % period;
    if (m < 0) m += period;
    return static_cast<int>(m < n ? m : period - 1 - m);
}

template <class T>
class Field3D {
public:
    Field3D() = default;
    Field3D(int nx, int ny, int nz, T value = T{})
        : nx_(nx), ny_(ny), nz_(nz), data_(static_cast<std::size_t>(nx) * ny * nz, value) {
        if (nx <= 0 || ny <= 0 || nz <= 0) throw DomainError("field dimensions must be positive");
    }

    [[nodiscard]] int nx() const { return nx_; }
    [[nodiscard]] int ny() const { return ny_; }
    [[nodiscard]] int nz() const { return nz_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    [[nodiscard]] std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_) * (j + static_cast<std::size_t>(ny_) * k);
    }

    T& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
    const T& operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

    /// Read with mirrored-repeat addressing on every axis.
    [[nodiscard]] T at_mirrored(long long i, long long j, long long k) const {
        return data_[index(mirrored_index(i, nx_), mirrored_index(j, ny_), mirrored_index(k, nz_))];
    }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::span<T> values() { return data_; }
    std::span<const T> values() const { return data_; }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    friend bool operator==(const Field3D&, const Field3D&) = default;

private:
    int nx_ = 0;
    int ny_ = 0;
    int nz_ = 0;
    std::vector<T> data_;
};

/// Interpolation stencil along one axis: two mirrored indices and the weight of the upper one.
struct AxisWeight {
    int lo = 0;
    int hi = 0;
    double w = 0.0;
};

inline AxisWeight axis_weight(double coord, int n) {
    const double f = std::floor(coord);
    const auto base = static_cast<long long>(f);
    return {mirrored_index(base, n), mirrored_index(base + 1, n), coord - f};
}

template <class T>
T blend(const Field3D<T>& f, const AxisWeight& ax, const AxisWeight& ay, const AxisWeight& az) {
    const T wx = static_cast<T>(ax.w);
    const T wy = static_cast<T>(ay.w);
    const T wz = static_cast<T>(az.w);
    const T one = T(1);
    const T c00 = f(ax.lo, ay.lo, az.lo) * (one - wx) + f(ax.hi, ay.lo, az.lo) * wx;
    const T c10 = f(ax.lo, ay.hi, az.lo) * (one - wx) + f(ax.hi, ay.hi, az.lo) * wx;
    const T c01 = f(ax.lo, ay.lo, az.hi) * (one - wx) + f(ax.hi, ay.lo, az.hi) * wx;
    const T c11 = f(ax.lo, ay.hi, az.hi) * (one - wx) + f(ax.hi, ay.hi, az.hi) * wx;
    const T c0 = c00 * (one - wy) + c10 * wy;
    const T c1 = c01 * (one - wy) + c11 * wy;
    return c0 * (one - wz) + c1 * wz;
}

/// Trilinear sample at real-valued grid coordinates; corners outside the
/// field are fetched through mirrored_index.
template <class T>
T sample_trilinear(const Field3D<T>& f, double x, double y, double z) {
    return blend(f, axis_weight(x, f.nx()), axis_weight(y, f.ny()), axis_weight(z, f.nz()));
}

}  // namespace elastic3d
