#pragma once

#include <vector>

namespace hydro {

/// Short-horizon phenomenological model replacing the unknown plant.
/// For nu = 1 we use the level/discharge form  alpha * dy/dt = F - u,
/// i.e. beta = -1/alpha after normalizing y' = F + beta*u. F then reads
/// directly as an estimated inflow (m3/s).
struct UltraLocalModel {
    int nu = 1;           // derivation order, 1 or 2
    double alpha = 1.0;   // m^2 for the level/discharge form
    int estimator_window = 10;  // M samples fed to the slope filter
};

struct ControllerGains {
    double kp = 0.0;  // 1/s
    double ki = 0.0;  // 1/s^2
    double kd = 0.0;  // dimensionless, nu = 2 only
};

struct ControllerState {
    double integral = 0.0;      // accumulated tracking error, m*s
    double last_command = 0.0;  // applied (post-saturation) command, m3/s
    std::vector<double> filter_buffer;  // last M measured outputs, oldest first
    bool aw_active = false;
};

struct Saturator {
    double u_min = 0.0;
    double u_max = 0.0;
    double rate_max = 0.0;  // m3/s per sample
};

struct SaturationResult {
    double u = 0.0;
    bool saturated = false;
};

/// F_hat = alpha * ydot_hat + u_prev, with u_prev the command actually
/// applied (held, post-saturation) over the last sampling interval.
double estimate_inflow(const UltraLocalModel& model, double ydot_hat, double u_prev);

/// i-PI law for nu = 1:  u = F_hat - alpha*ystar_dot + alpha*(kp*e + ki*integral).
/// With F_hat exact this closes the loop as  de/dt + kp*e + ki*int(e) = 0.
double ipi_command(const UltraLocalModel& model, const ControllerGains& gains, double f_hat,
                   double ystar_dot, double e, const ControllerState& state);

/// i-PID law for nu = 2 (generic y'' = F + beta*u form):
/// u = -F/beta + ystar_ddot/beta + kp*e + ki*int(e) + kd*edot.
double ipid_command_nu2(const UltraLocalModel& model, const ControllerGains& gains, double beta,
                        double f_hat, double ystar_ddot, double e, double edot,
                        const ControllerState& state);

/// Position clamp followed by rate clamp around the previously applied command.
SaturationResult saturate(const Saturator& s, double u_raw, double u_prev);

/// Conditional-integration anti-windup: skip the update when the actuator is
/// saturated and the increment would push the raw command further past the
/// active limit.
void update_integral(ControllerState& state, double e, double dt, bool saturated,
                     bool direction_consistent);

}  // namespace hydro
