#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hydro/mfc.hpp"
#include "hydro/plant.hpp"
#include "hydro/signals.hpp"
#include "hydro/timeseries.hpp"

namespace hydro {

/// Piecewise-linear steady-state map q -> near-actuator level z_a that makes
/// the remote level equal z_r_target. Calibrated surrogate for the empirical
/// reconstruction law z_a = g(Q_e).
struct ReconstructionLaw {
    double z_r_target = 0.0;
    std::vector<double> q;    // strictly increasing
    std::vector<double> z_a;  // same length

    double operator()(double q_e) const;

    /// +1 strictly increasing, -1 strictly decreasing, 0 otherwise.
    int monotonicity() const;
};

struct CalibrationOptions {
    double servo_gain = 200.0;       // m^3/s per m of remote-level error
    double dt = 0.0;                 // 0 = automatic CFL step
    double level_tol = 2e-4;         // m, |z_r - target| at convergence
    double rate_tol = 1e-8;          // m/s, |dz_r/dt| at convergence
    long max_steps = 4'000'000;      // per grid node
};

/// Advances the PDE with through-flow q and a proportional downstream level
/// servo until the remote level sits at z_r_target and stops moving.
/// Returns false when the iteration budget runs out.
bool run_to_steady(const ChannelGeometry& geom, ReachState& state, double q, double z_r_target,
                   const CalibrationOptions& opts);

/// Runs the PDE to steady state at each grid discharge with a downstream
/// level servo holding the remote level at z_r_target, and records the
/// near-actuator level. Nodes that fail to converge are dropped and reported
/// through `warnings`.
ReconstructionLaw calibrate_reconstruction(const ChannelGeometry& geom,
                                           std::span<const double> q_grid, double z_r_target,
                                           const CalibrationOptions& opts = {},
                                           std::vector<std::string>* warnings = nullptr);

/// One quintic (smoothstep) transition between two setpoints. First and
/// second derivatives vanish at both ends.
struct TrajectorySegment {
    double t_start = 0.0;
    double duration = 0.0;
    double z_from = 0.0;
    double z_to = 0.0;

    double value(double t) const;
    double deriv(double t) const;
};

TrajectorySegment plan_trajectory(double z_current, double z_target, double t_start,
                                  double duration, double min_duration);

/// Sequence of setpoint transitions; constant before the first and after the
/// last segment.
class ReferenceTrajectory {
public:
    ReferenceTrajectory(double z_initial) : z_initial_(z_initial) {}

    /// Builds transitions from a stepwise setpoint profile: every value
    /// change starts a quintic segment of `transition_duration`.
    static ReferenceTrajectory from_steps(const TimeSeries& profile, double transition_duration,
                                          double min_duration);

    void append(const TrajectorySegment& seg);
    double value(double t) const;
    double deriv(double t) const;

private:
    double z_initial_;
    std::vector<TrajectorySegment> segments_;
};

struct OuterLoopGains {
    double kp = 0.3;   // dimensionless, level to level
    double ki = 0.0;   // 1/s
};

struct OuterLoop {
    OuterLoopGains gains;
    double integral = 0.0;  // m*s
};

/// Setpoint replanning term: delta_z = kp*e_r + ki*int(e_r). The integral is
/// frozen when `freeze_integral` is set (inner command saturated in the
/// windup direction).
double outer_correct(OuterLoop& loop, double e_r, double dt, bool freeze_integral);

struct CascadeConfig {
    UltraLocalModel model;
    ControllerGains inner_gains;
    Saturator saturator;
    OuterLoopGains outer_gains;
    double t_s = 120.0;              // controller period, s
    bool anti_windup = true;
    double transition_duration = 7200.0;  // s, setpoint transitions
};

/// Everything the controller computed in one period, for tracing.
struct ControlStep {
    double z_quant = 0.0;
    double z_r_quant = 0.0;
    double z_star = 0.0;        // corrected inner setpoint
    double z_star_r = 0.0;      // planned remote setpoint
    double zdot_hat = 0.0;
    double f_hat = 0.0;
    double u_raw = 0.0;
    double u_applied = 0.0;
    bool saturated = false;
};

/// Two-loop sampled controller. Owns all loop state for one scenario run.
class CascadeController {
public:
    CascadeController(const CascadeConfig& cfg, const ReconstructionLaw& law,
                      const ReferenceTrajectory& remote_reference, double z0, double u0);

    /// One controller period: quantize measurements, reconstruct the inner
    /// setpoint (feedforward from q_e plus outer correction), estimate the
    /// level slope and the inflow, apply the i-PI law, saturate, and update
    /// both anti-windup integrators. Returns the held command and the
    /// intermediate quantities.
    ControlStep step(double z_meas, double z_r_meas, double q_e, double t);

    const ControllerState& inner_state() const { return inner_; }
    const OuterLoop& outer_loop() const { return outer_; }

private:
    CascadeConfig cfg_;
    ReconstructionLaw law_;
    ReferenceTrajectory remote_ref_;
    SlopeFilter slope_;
    ControllerState inner_;
    OuterLoop outer_;
    double prev_delta_z_ = 0.0;
};

}  // namespace hydro
