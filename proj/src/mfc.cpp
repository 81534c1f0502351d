#include "hydro/mfc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hydro {

namespace {
void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string("non-finite ") + what);
}
}  // namespace

double estimate_inflow(const UltraLocalModel& model, double ydot_hat, double u_prev) {
    require_finite(ydot_hat, "ydot_hat");
    require_finite(u_prev, "u_prev");
    return model.alpha * ydot_hat + u_prev;
}

double ipi_command(const UltraLocalModel& model, const ControllerGains& gains, double f_hat,
                   double ystar_dot, double e, const ControllerState& state) {
    require_finite(f_hat, "f_hat");
    require_finite(ystar_dot, "ystar_dot");
    require_finite(e, "e");
    const double pi = gains.kp * e + gains.ki * state.integral;
    return f_hat - model.alpha * ystar_dot + model.alpha * pi;
}

double ipid_command_nu2(const UltraLocalModel& model, const ControllerGains& gains, double beta,
                        double f_hat, double ystar_ddot, double e, double edot,
                        const ControllerState& state) {
    if (model.nu != 2) throw std::logic_error("ipid_command_nu2: model order is not 2");
    require_finite(f_hat, "f_hat");
    require_finite(ystar_ddot, "ystar_ddot");
    require_finite(e, "e");
    require_finite(edot, "edot");
    return -f_hat / beta + ystar_ddot / beta + gains.kp * e + gains.ki * state.integral +
           gains.kd * edot;
}

SaturationResult saturate(const Saturator& s, double u_raw, double u_prev) {
    double u = std::clamp(u_raw, s.u_min, s.u_max);
    u = std::clamp(u, u_prev - s.rate_max, u_prev + s.rate_max);
    return {u, u != u_raw};
}

void update_integral(ControllerState& state, double e, double dt, bool saturated,
                     bool direction_consistent) {
    state.aw_active = saturated && direction_consistent;
    if (state.aw_active) return;
    state.integral += e * dt;
}

}  // namespace hydro
