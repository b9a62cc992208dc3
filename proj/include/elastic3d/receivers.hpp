#pragma once

// Station receivers and the dense trace record buffer filled during a run.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fields.hpp"
#include "geometry.hpp"

namespace elastic3d {

struct Receiver {
    std::string name;
    double lat = 0.0;
    double lon = 0.0;
    double altitude_m = 0.0;
    GridPoint position;  // simulation-grid coordinates, resolved at setup
};

/// Rows are receiver-component (3 per receiver, vx vy vz), columns are time steps.
class TraceSet {
public:
    TraceSet() = default;
    TraceSet(std::size_t receivers, std::size_t capacity, double dt)
        : receivers_(receivers), capacity_(capacity), dt_(dt), data_(receivers * 3 * capacity, 0.0) {}

    [[nodiscard]] std::size_t receivers() const { return receivers_; }
    [[nodiscard]] std::size_t rows() const { return receivers_ * 3; }
    [[nodiscard]] std::size_t length() const { return length_; }
    [[nodiscard]] std::size_t capacity() const { return capacity_; }
    [[nodiscard]] double dt() const { return dt_; }

    [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data_.data() + r * capacity_, length_}; }
    [[nodiscard]] std::span<const double> trace(std::size_t receiver, int component) const {
        return row(receiver * 3 + static_cast<std::size_t>(component));
    }

    /// Writes one column; `column` must equal length().
    void append_column(std::span<const double> values) {
        if (values.size() != rows()) throw DomainError("trace column has wrong number of rows");
        if (length_ >= capacity_) throw DomainError("trace buffer full");
        for (std::size_t r = 0; r < rows(); ++r) data_[r * capacity_ + length_] = values[r];
        ++length_;
    }

    friend bool operator==(const TraceSet& a, const TraceSet& b) {
        if (a.receivers_ != b.receivers_ || a.length_ != b.length_) return false;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (!std::equal(a.row(r).begin(), a.row(r).end(), b.row(r).begin())) return false;
        }
        return true;
    }

private:
    std::size_t receivers_ = 0;
    std::size_t capacity_ = 0;
    std::size_t length_ = 0;
    double dt_ = 0.0;
    std::vector<double> data_;
};

/// Velocity component at a real-valued grid position, read off that
/// component's staggered grid with trilinear weights.
template <class Real>
double sample_velocity(const FieldSet<Real>& fields, Component c, const GridPoint& p) {
    const auto o = staggered_offset(c);
    return static_cast<double>(sample_trilinear(fields[c], p.x - o[0], p.y - o[1], p.z - o[2]));
}

template <class Real>
void record_receivers(const FieldSet<Real>& fields, std::span<const Receiver> receivers, TraceSet& traces,
                      std::size_t t_index) {
    if (t_index != traces.length()) {
        throw DomainError("record_receivers: t_index " + std::to_string(t_index) + " != trace length " +
                          std::to_string(traces.length()));
    }
    std::vector<double> column;
    column.reserve(receivers.size() * 3);
    for (const Receiver& r : receivers) {
        for (Component c : kVelocityComponents) column.push_back(sample_velocity(fields, c, r.position));
    }
    traces.append_column(column);
}

}  // namespace elastic3d
