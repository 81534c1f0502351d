#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hydro {

/// Uniformly sampled signal. Sample k lives at time t0 + k*dt.
struct TimeSeries {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;
    std::string unit;  // "m", "m3/s", or "" for dimensionless

    TimeSeries() = default;
    TimeSeries(double t0_, double dt_, std::vector<double> v, std::string unit_ = "")
        : t0(t0_), dt(dt_), values(std::move(v)), unit(std::move(unit_)) {
        if (!(dt > 0.0)) throw std::invalid_argument("TimeSeries: dt must be > 0");
        if (values.empty()) throw std::invalid_argument("TimeSeries: length must be >= 1");
    }

    std::size_t size() const { return values.size(); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }

    /// Zero-order hold lookup: value of the most recent sample at or before t.
    /// Clamped to the first/last sample outside the span.
    double sample_zoh(double t) const {
        if (t <= t0) return values.front();
        auto k = static_cast<std::size_t>(std::floor((t - t0) / dt));
        if (k >= values.size()) return values.back();
        return values[k];
    }
};

}  // namespace hydro
