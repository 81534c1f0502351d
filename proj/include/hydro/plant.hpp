#pragma once

#include <stdexcept>
#include <vector>

namespace hydro {

/// Prismatic rectangular reach. Inflow enters at x = 0, the actuator (turbine
/// discharge) sits at x = length, the lateral perturbation W is injected in
/// the cell containing lateral_inflow_x, the remote level probe sits at
/// sensor_x.
struct ChannelGeometry {
    double length = 15000.0;        // m
    double width = 110.0;           // m
    double bed_slope = 1e-4;        // dimensionless, bed falls toward x = length
    double manning_n = 0.033;       // s/m^(1/3)
    int n_cells = 150;
    double lateral_inflow_x = 5000.0;  // m
    double sensor_x = 7500.0;          // m

    double dx() const { return length / n_cells; }
    void validate() const;
};

/// Finite-volume state: per-cell wetted area and discharge, cell centers at
/// x_i = (i + 1/2) * dx.
struct ReachState {
    double t = 0.0;
    std::vector<double> area;       // m^2
    std::vector<double> discharge;  // m^3/s
};

struct Levels {
    double z_near = 0.0;    // depth at the actuator-adjacent cell, m
    double z_remote = 0.0;  // depth interpolated at sensor_x, m
};

class StepSizeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class DryBedError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

ReachState make_uniform_state(const ChannelGeometry& geom, double depth, double discharge);

double total_volume(const ChannelGeometry& geom, const ReachState& state);

/// Largest |Q/A| + sqrt(g*A/width) over the grid.
double max_wave_speed(const ChannelGeometry& geom, const ReachState& state);

/// CFL-stable step size with the 0.9 safety factor.
double cfl_dt(const ChannelGeometry& geom, const ReachState& state);

/// Wide-rectangular Manning normal depth for discharge q; used to seed
/// steady-state searches and as an independent oracle in tests.
double manning_normal_depth(const ChannelGeometry& geom, double q);

/// One explicit step of the 1-D Saint-Venant equations.
/// Local Lax-Friedrichs (Rusanov) fluxes with the mass dissipation applied to
/// the free-surface elevation, which keeps a lake at rest exactly still over
/// a sloping bed. Pressure/bed and friction sources are explicit. Boundary
/// mass fluxes impose the discharges q_in (upstream) and q_out (downstream);
/// q_lat enters the cell containing lateral_inflow_x.
/// Throws StepSizeError on CFL violation and DryBedError if any cell drains.
void sv_step(const ChannelGeometry& geom, ReachState& state, double q_in, double q_lat,
             double q_out, double dt);

Levels read_levels(const ChannelGeometry& geom, const ReachState& state);

}  // namespace hydro
