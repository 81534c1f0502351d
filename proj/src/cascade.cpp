#include "hydro/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace hydro {

double ReconstructionLaw::operator()(double q_e) const {
    if (q.size() < 2) throw std::logic_error("ReconstructionLaw: need at least 2 nodes");
    if (q_e <= q.front()) return z_a.front();
    if (q_e >= q.back()) return z_a.back();
    const auto it = std::upper_bound(q.begin(), q.end(), q_e);
    const std::size_t i = static_cast<std::size_t>(it - q.begin());
    const double w = (q_e - q[i - 1]) / (q[i] - q[i - 1]);
    return (1.0 - w) * z_a[i - 1] + w * z_a[i];
}

int ReconstructionLaw::monotonicity() const {
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < z_a.size(); ++i) {
        if (z_a[i] <= z_a[i - 1]) inc = false;
        if (z_a[i] >= z_a[i - 1]) dec = false;
    }
    if (inc) return 1;
    if (dec) return -1;
    return 0;
}

bool run_to_steady(const ChannelGeometry& geom, ReachState& state, double q, double z_r_target,
                   const CalibrationOptions& opts) {
    double z_r_prev = read_levels(geom, state).z_remote;
    long step_count = 0;
    const long check_every = 500;
    double dt = opts.dt;
    while (step_count < opts.max_steps) {
        if (opts.dt <= 0.0) dt = cfl_dt(geom, state);
        const double z_r = read_levels(geom, state).z_remote;
        const double q_out = q + opts.servo_gain * (z_r - z_r_target);
        sv_step(geom, state, q, 0.0, q_out, dt);
        ++step_count;
        if (step_count % check_every == 0) {
            const double z_r_now = read_levels(geom, state).z_remote;
            const double rate = std::abs(z_r_now - z_r_prev) / (check_every * dt);
            if (std::abs(z_r_now - z_r_target) < opts.level_tol && rate < opts.rate_tol)
                return true;
            z_r_prev = z_r_now;
        }
    }
    return false;
}

ReconstructionLaw calibrate_reconstruction(const ChannelGeometry& geom,
                                           std::span<const double> q_grid, double z_r_target,
                                           const CalibrationOptions& opts,
                                           std::vector<std::string>* warnings) {
    geom.validate();
    if (q_grid.size() < 2) throw std::invalid_argument("calibrate_reconstruction: need >= 2 nodes");
    if (!std::is_sorted(q_grid.begin(), q_grid.end()) ||
        std::adjacent_find(q_grid.begin(), q_grid.end()) != q_grid.end())
        throw std::invalid_argument("calibrate_reconstruction: grid must be strictly increasing");

    ReconstructionLaw law;
    law.z_r_target = z_r_target;

    ReachState state = make_uniform_state(geom, z_r_target, q_grid.front());
    for (double q_node : q_grid) {
        // Warm start from the previous node's converged profile.
        for (auto& qi : state.discharge) qi = q_node;
        if (!run_to_steady(geom, state, q_node, z_r_target, opts)) {
            if (warnings)
                warnings->push_back(
                    fmt::format("calibration: no steady state at q = {} m3/s, node dropped", q_node));
            continue;
        }
        law.q.push_back(q_node);
        law.z_a.push_back(read_levels(geom, state).z_near);
    }

    if (warnings && law.monotonicity() == 0)
        warnings->push_back("calibration: z_a column is not monotone in q");
    return law;
}

double TrajectorySegment::value(double t) const {
    if (t <= t_start) return z_from;
    if (t >= t_start + duration) return z_to;
    const double x = (t - t_start) / duration;
    const double s = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
    return z_from + (z_to - z_from) * s;
}

double TrajectorySegment::deriv(double t) const {
    if (t <= t_start || t >= t_start + duration) return 0.0;
    const double x = (t - t_start) / duration;
    const double ds = 30.0 * x * x * (1.0 - x) * (1.0 - x);
    return (z_to - z_from) * ds / duration;
}

TrajectorySegment plan_trajectory(double z_current, double z_target, double t_start,
                                  double duration, double min_duration) {
    if (duration < min_duration)
        throw std::invalid_argument("plan_trajectory: duration shorter than 4 controller periods");
    return {t_start, duration, z_current, z_target};
}

ReferenceTrajectory ReferenceTrajectory::from_steps(const TimeSeries& profile,
                                                    double transition_duration,
                                                    double min_duration) {
    ReferenceTrajectory traj(profile.values.front());
    double current = profile.values.front();
    for (std::size_t k = 1; k < profile.size(); ++k) {
        if (profile.values[k] != current) {
            traj.append(
                plan_trajectory(current, profile.values[k], profile.time(k), transition_duration,
                                min_duration));
            current = profile.values[k];
        }
    }
    return traj;
}

void ReferenceTrajectory::append(const TrajectorySegment& seg) {
    if (!segments_.empty() && seg.t_start < segments_.back().t_start + segments_.back().duration)
        throw std::invalid_argument("ReferenceTrajectory: overlapping segments");
    segments_.push_back(seg);
}

double ReferenceTrajectory::value(double t) const {
    double v = z_initial_;
    for (const auto& seg : segments_) {
        if (t <= seg.t_start) break;
        v = seg.value(t);
    }
    return v;
}

double ReferenceTrajectory::deriv(double t) const {
    for (const auto& seg : segments_)
        if (t > seg.t_start && t < seg.t_start + seg.duration) return seg.deriv(t);
    return 0.0;
}

double outer_correct(OuterLoop& loop, double e_r, double dt, bool freeze_integral) {
    if (!freeze_integral) loop.integral += e_r * dt;
    return loop.gains.kp * e_r + loop.gains.ki * loop.integral;
}

CascadeController::CascadeController(const CascadeConfig& cfg, const ReconstructionLaw& law,
                                     const ReferenceTrajectory& remote_reference, double z0,
                                     double u0)
    : cfg_(cfg),
      law_(law),
      remote_ref_(remote_reference),
      slope_(make_slope_filter(cfg.model.estimator_window, cfg.t_s)),
      outer_{cfg.outer_gains, 0.0} {
    if (!(cfg.outer_gains.kp < 1.0))
        throw std::invalid_argument("cascade: outer loop must be slower than the inner loop "
                                    "(kp_out < 1 required)");
    inner_.filter_buffer.assign(static_cast<std::size_t>(cfg.model.estimator_window),
                                quantize_level(z0));
    inner_.last_command = u0;
}

ControlStep CascadeController::step(double z_meas, double z_r_meas, double q_e, double t) {
    ControlStep out;
    out.z_quant = quantize_level(z_meas);
    out.z_r_quant = quantize_level(z_r_meas);

    // Remote reference and outer error. The outer loop raises the outflow
    // when the remote level runs high, hence the z_star_r - z_r sign and the
    // subtraction from the reconstructed setpoint below.
    out.z_star_r = remote_ref_.value(t);
    const double e_r = out.z_r_quant - out.z_star_r;
    const double delta_z =
        outer_.gains.kp * e_r + outer_.gains.ki * outer_.integral;

    // Inner setpoint: steady-state reconstruction at the current inflow,
    // shifted by the planned remote transition and the outer correction.
    const double z_a_star = law_(q_e) + (out.z_star_r - law_.z_r_target);
    out.z_star = z_a_star - delta_z;
    const double z_star_dot =
        remote_ref_.deriv(t) - (delta_z - prev_delta_z_) / cfg_.t_s;

    // Level slope from the quantized near-actuator measurements.
    inner_.filter_buffer.erase(inner_.filter_buffer.begin());
    inner_.filter_buffer.push_back(out.z_quant);
    out.zdot_hat = apply_filter(slope_, inner_.filter_buffer);

    out.f_hat = estimate_inflow(cfg_.model, out.zdot_hat, inner_.last_command);

    const double e = out.z_quant - out.z_star;
    out.u_raw = ipi_command(cfg_.model, cfg_.inner_gains, out.f_hat, z_star_dot, e, inner_);

    const auto sat = saturate(cfg_.saturator, out.u_raw, inner_.last_command);
    out.u_applied = sat.u;
    out.saturated = sat.saturated;

    if (cfg_.anti_windup) {
        const bool high = sat.saturated && out.u_raw > sat.u;
        const bool low = sat.saturated && out.u_raw < sat.u;
        // Inner command grows with e; outer delta_z grows with e_r and lowers
        // the setpoint, which also grows the command.
        const bool inner_windup = (high && e > 0.0) || (low && e < 0.0);
        const bool outer_windup = (high && e_r > 0.0) || (low && e_r < 0.0);
        update_integral(inner_, e, cfg_.t_s, sat.saturated, inner_windup);
        if (!outer_windup) outer_.integral += e_r * cfg_.t_s;
    } else {
        update_integral(inner_, e, cfg_.t_s, false, false);
        outer_.integral += e_r * cfg_.t_s;
    }

    inner_.last_command = out.u_applied;
    prev_delta_z_ = delta_z;
    return out;
}

}  // namespace hydro
