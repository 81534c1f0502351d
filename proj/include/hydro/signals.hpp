#pragma once

#include <span>
#include <vector>

namespace hydro {

/// Causal sliding-window slope estimator. The weights realize the algebraic
/// first-derivative estimator as a finite filter over the last M samples:
/// kernel (6/T^3)(2*tau - T) on a window of length T = (M-1)*dt, discretized
/// by trapezoidal quadrature and scaled so that affine inputs are
/// differentiated exactly. Weights carry units of 1/s.
struct SlopeFilter {
    int window_samples = 0;  // M
    double dt = 0.0;
    std::vector<double> weights;  // index 0 = oldest sample in the window
};

/// Build the slope filter for a window of M samples spaced dt apart.
/// Guarantees sum(w) == 0 and sum(w_k * k*dt) == 1.
SlopeFilter make_slope_filter(int m, double dt);

/// Weighted sum over the last M samples (oldest first). Units: signal per second.
double apply_filter(const SlopeFilter& f, std::span<const double> window);

/// Level sensor model: round to the nearest 0.01 m, ties to even multiples.
double quantize_level(double z);

}  // namespace hydro
