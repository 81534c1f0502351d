#include "hydro/signals.hpp"

#include <cmath>
#include <stdexcept>

namespace hydro {

SlopeFilter make_slope_filter(int m, double dt) {
    if (m < 2) throw std::invalid_argument("make_slope_filter: need M >= 2");
    if (!(dt > 0.0)) throw std::invalid_argument("make_slope_filter: need dt > 0");

    const double T = (m - 1) * dt;
    SlopeFilter f;
    f.window_samples = m;
    f.dt = dt;
    f.weights.resize(static_cast<std::size_t>(m));

    // Trapezoidal discretization of (6/T^3) * (2*tau - T), tau from window start.
    for (int k = 0; k < m; ++k) {
        const double tau = k * dt;
        const double endpoint = (k == 0 || k == m - 1) ? 0.5 : 1.0;
        f.weights[static_cast<std::size_t>(k)] = 6.0 / (T * T * T) * (2.0 * tau - T) * dt * endpoint;
    }

    // The kernel integrates to zero and the trapezoid rule is exact on affine
    // integrands, so sum(w) == 0 already. Rescale the first moment so the
    // filter reproduces the slope of affine inputs exactly.
    double first_moment = 0.0;
    for (int k = 0; k < m; ++k) first_moment += f.weights[static_cast<std::size_t>(k)] * (k * dt);
    for (auto& w : f.weights) w /= first_moment;
    return f;
}

double apply_filter(const SlopeFilter& f, std::span<const double> window) {
    if (window.size() != f.weights.size())
        throw std::invalid_argument("apply_filter: window length must equal M");
    double acc = 0.0;
    for (std::size_t k = 0; k < window.size(); ++k) acc += f.weights[k] * window[k];
    return acc;
}

double quantize_level(double z) {
    if (!std::isfinite(z)) throw std::invalid_argument("quantize_level: non-finite level");
    // nearbyint in the default rounding mode is round-half-to-even.
    return std::nearbyint(z * 100.0) / 100.0;
}

}  // namespace hydro
