#pragma once

#include <string>
#include <vector>

#include "hydro/cascade.hpp"
#include "hydro/config.hpp"
#include "hydro/scenarios.hpp"

namespace hydro {

/// Per-controller-period traces of a closed-loop run (one row per period).
struct Traces {
    std::vector<double> t, q_e, w, bias, u_raw, u_applied, saturated, f_hat, z, z_quant, z_star,
        z_r, z_r_quant, z_r_star;

    std::size_t size() const { return t.size(); }
};

struct RunResult {
    Traces traces;
    BandReport report;
    bool any_saturated = false;

    // PDE mass audit: |volume change - integrated boundary/lateral fluxes|.
    double volume_initial = 0.0;
    double volume_final = 0.0;
    double flux_integral = 0.0;       // integral of (q_in + q_lat - q_out) dt
    double abs_inflow_integral = 0.0; // integral of |q_in| dt, for the relative bound
    double mass_error() const { return volume_final - volume_initial - flux_integral; }
};

/// Builds the reconstruction law for a config: loads the CSV table when one
/// is configured and present, calibrates against the PDE otherwise. For the
/// surrogate plant the law is synthesized from the surrogate's affine map.
ReconstructionLaw reconstruction_for(const RunConfig& cfg, std::vector<std::string>* warnings);

/// Executes one scenario in closed loop at period `sc.t_s` on the configured
/// plant, starting from the steady regulated state at the initial inflow.
RunResult run_scenario(const RunConfig& cfg, const Scenario& sc, const ReconstructionLaw& law);

void write_traces_csv(const std::string& path, const Traces& traces);
void write_metrics_csv(const std::string& path, const BandReport& report);
void write_run_plots(const std::string& dir, const Traces& traces, double band_halfwidth);
void write_reconstruction_csv(const std::string& path, const ReconstructionLaw& law);
ReconstructionLaw read_reconstruction_csv(const std::string& path);

}  // namespace hydro
