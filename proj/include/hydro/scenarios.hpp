#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hydro/timeseries.hpp"

namespace hydro {

struct LockFlush {
    double start = 0.0;      // s
    double amplitude = 100.0;  // m3/s
    double duration = 900.0;   // s
};

struct Scenario {
    std::string name;
    double duration = 345600.0;  // s
    double t_s = 120.0;          // controller period, s
    TimeSeries q_e_profile;      // m3/s, sampled at t_s, held
    TimeSeries setpoint_profile; // m, remote-level setpoint steps
    bool bias_enabled = true;
    std::vector<LockFlush> flushes;
    std::uint64_t seed = 0;
};

/// Outflow realization error: the turbine passes bias(q_e) less than commanded.
double bias(double q_e);

/// Sum of active rectangular pulses. A pulse is active on
/// (start, start + duration], so a 900 s flush touches exactly 7 controller
/// samples at T_s = 120 s when it starts on the sampling grid.
double lock_flush_signal(std::span<const LockFlush> schedule, double t);

/// Exact integral of the schedule over the whole run: sum(amplitude * duration).
double lock_flush_volume(std::span<const LockFlush> schedule);

/// The three study scenarios:
///   1 - flood recession with large discharge variations (4 days),
///   2 - gentle diurnal variations plus one setpoint transition (4 days),
///   3 - academic saturation test: steep rise pinning the actuator, then a
///       steep drop (1 day).
/// Profiles are authored data; only the lock-flush times derive from `seed`.
Scenario build_scenario(int n, double t_s, std::uint64_t seed);

struct BandReport {
    double max_over = 0.0;   // m, largest excursion above the band, >= 0
    double max_under = 0.0;  // m, largest excursion below the band, >= 0
    double violation_time = 0.0;  // s
    bool within_band = true;
    double band_halfwidth = 0.0;  // m
    double measured_transport_delay = -1.0;  // s, -1 when not measurable
};

/// Compares the remote level against its setpoint trace. When q_e is given,
/// also measures the inflow-to-remote-level transport delay as the lag
/// maximizing the cross-correlation between the q_e and z_r sample
/// differences around the first large q_e step.
BandReport evaluate_band(const TimeSeries& z_r, const TimeSeries& z_r_star, double halfwidth,
                         const TimeSeries* q_e = nullptr);

}  // namespace hydro
