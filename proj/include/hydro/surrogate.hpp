#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hydro/plant.hpp"

namespace hydro {

/// Reduced reach model for fast deterministic tests:
///   surface_area * dz_r/dt = q_in(t - delay_in) + w(t - delay_w) - q_out(t)
/// with the near-actuator level affine in z_r and the outgoing discharge:
///   z = z_r + z_offset + z_per_q * (q_ref - q_out).
struct SurrogateReach {
    double surface_area = 1.65e6;  // m^2
    double delay_in = 1800.0;      // s, upstream inflow -> z_r
    double delay_w = 600.0;        // s, W -> z_r
    double z_offset = 0.0;         // m
    double z_per_q = 4.9e-4;       // m per m^3/s
    double q_ref = 700.0;          // m^3/s
};

/// Euler-integrated surrogate with internal delay lines.
class SurrogateSim {
public:
    /// Histories run oldest-first and must cover the respective delays
    /// (at least ceil(delay/dt) + 1 samples); throws invalid_argument otherwise.
    SurrogateSim(const SurrogateReach& reach, double dt, double z_r0,
                 std::span<const double> q_in_history, std::span<const double> w_history);

    /// Convenience: constant pre-histories.
    SurrogateSim(const SurrogateReach& reach, double dt, double z_r0, double q_in0, double w0);

    /// Advance one step of dt with the current inputs; returns the new levels.
    Levels step(double q_in, double w, double q_out);

    Levels levels(double q_out) const;
    double z_remote() const { return z_r_; }

private:
    SurrogateReach reach_;
    double dt_;
    double z_r_;
    std::size_t lag_in_;
    std::size_t lag_w_;
    std::vector<double> q_in_hist_;  // oldest first
    std::vector<double> w_hist_;
};

}  // namespace hydro
