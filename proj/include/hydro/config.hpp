#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "hydro/cascade.hpp"
#include "hydro/mfc.hpp"
#include "hydro/plant.hpp"
#include "hydro/surrogate.hpp"

namespace hydro {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything a run needs. Loaded from a sectioned key-value file where every
/// physical quantity carries a unit suffix ("length = 15 km"); the loader
/// normalizes to SI and rejects unitless physical entries.
struct RunConfig {
    ChannelGeometry geometry;

    UltraLocalModel model;  // alpha, estimator_window
    bool gains_auto = true; // kp = 1/(10*t_s), ki = kp^2/4
    ControllerGains inner_gains;
    Saturator saturator{0.0, 1400.0, 50.0};
    double t_s = 120.0;
    bool anti_windup = true;

    OuterLoopGains outer_gains;
    double transition_duration = 7200.0;
    double z_r_target = 5.0;
    double q_grid_min = 400.0;
    double q_grid_max = 1400.0;
    double q_grid_step = 100.0;
    std::string reconstruction_table;  // optional CSV path

    SurrogateReach surrogate;

    int scenario = 1;
    std::string plant = "pde";  // "pde" | "surrogate"
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    double band_halfwidth = 0.10;  // m

    /// Gains actually used at period t_s (resolves the auto rule).
    ControllerGains resolved_gains(double period) const;
    CascadeConfig cascade_config(double period) const;
};

RunConfig load_config(const std::string& path);

}  // namespace hydro
