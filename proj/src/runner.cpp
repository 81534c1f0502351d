#include "hydro/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "hydro/csv.hpp"
#include "hydro/surrogate.hpp"
#include "hydro/svg.hpp"

namespace hydro {

ReconstructionLaw reconstruction_for(const RunConfig& cfg, std::vector<std::string>* warnings) {
    if (cfg.plant == "surrogate") {
        ReconstructionLaw law;
        law.z_r_target = cfg.z_r_target;
        for (double q = cfg.q_grid_min; q <= cfg.q_grid_max + 1e-9; q += cfg.q_grid_step) {
            law.q.push_back(q);
            law.z_a.push_back(cfg.z_r_target + cfg.surrogate.z_offset +
                              cfg.surrogate.z_per_q * (cfg.surrogate.q_ref - q));
        }
        return law;
    }
    if (!cfg.reconstruction_table.empty() &&
        std::filesystem::exists(cfg.reconstruction_table))
        return read_reconstruction_csv(cfg.reconstruction_table);

    std::vector<double> grid;
    for (double q = cfg.q_grid_min; q <= cfg.q_grid_max + 1e-9; q += cfg.q_grid_step)
        grid.push_back(q);
    return calibrate_reconstruction(cfg.geometry, grid, cfg.z_r_target, {}, warnings);
}

RunResult run_scenario(const RunConfig& cfg, const Scenario& sc, const ReconstructionLaw& law) {
    RunResult res;
    const double t_s = sc.t_s;
    const auto n_steps = static_cast<std::size_t>(std::llround(sc.duration / t_s));

    const double q0 = sc.q_e_profile.values.front();
    const double z_r0 = sc.setpoint_profile.values.front();
    const double b0 = sc.bias_enabled ? bias(q0) : 0.0;
    const double u0 = q0 + b0;  // steady regulated command before the run

    const bool pde = cfg.plant == "pde";
    ReachState state;
    SurrogateSim sim(cfg.surrogate, t_s, z_r0, q0, 0.0);
    double z = 0.0, z_r = 0.0;
    if (pde) {
        state = make_uniform_state(cfg.geometry, z_r0, q0);
        if (!run_to_steady(cfg.geometry, state, q0, z_r0, {}))
            throw std::runtime_error("run_scenario: no steady initial state");
        const Levels l = read_levels(cfg.geometry, state);
        z = l.z_near;
        z_r = l.z_remote;
        res.volume_initial = total_volume(cfg.geometry, state);
    } else {
        const Levels l = sim.levels(q0);
        z = l.z_near;
        z_r = l.z_remote;
    }

    const ReferenceTrajectory remote_ref =
        ReferenceTrajectory::from_steps(sc.setpoint_profile, cfg.transition_duration, 4.0 * t_s);
    CascadeController ctl(cfg.cascade_config(t_s), law, remote_ref, z, u0);

    Traces& tr = res.traces;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * t_s;
        const double q_e = sc.q_e_profile.values[std::min(k, sc.q_e_profile.size() - 1)];
        const double b = sc.bias_enabled ? bias(q_e) : 0.0;

        const ControlStep cs = ctl.step(z, z_r, q_e, t);
        const double q_out = cs.u_applied - b;  // realized-outflow error

        tr.t.push_back(t);
        tr.q_e.push_back(q_e);
        tr.w.push_back(lock_flush_signal(sc.flushes, t));
        tr.bias.push_back(b);
        tr.u_raw.push_back(cs.u_raw);
        tr.u_applied.push_back(cs.u_applied);
        tr.saturated.push_back(cs.saturated ? 1.0 : 0.0);
        tr.f_hat.push_back(cs.f_hat);
        tr.z.push_back(z);
        tr.z_quant.push_back(cs.z_quant);
        tr.z_star.push_back(cs.z_star);
        tr.z_r.push_back(z_r);
        tr.z_r_quant.push_back(cs.z_r_quant);
        tr.z_r_star.push_back(cs.z_star_r);
        res.any_saturated = res.any_saturated || cs.saturated;

        // Advance the plant over the held period. The flush schedule is
        // applied at sub-step resolution on the PDE.
        if (pde) {
            double advanced = 0.0;
            while (advanced < t_s - 1e-9) {
                const double dt = std::min(cfl_dt(cfg.geometry, state), t_s - advanced);
                const double w_now = lock_flush_signal(sc.flushes, t + advanced);
                sv_step(cfg.geometry, state, q_e, w_now, q_out, dt);
                res.flux_integral += (q_e + w_now - q_out) * dt;
                res.abs_inflow_integral += std::abs(q_e) * dt;
                advanced += dt;
            }
            const Levels l = read_levels(cfg.geometry, state);
            z = l.z_near;
            z_r = l.z_remote;
        } else {
            const double w_now = lock_flush_signal(sc.flushes, t);
            const Levels l = sim.step(q_e, w_now, q_out);
            z = l.z_near;
            z_r = l.z_remote;
        }
    }
    if (pde) res.volume_final = total_volume(cfg.geometry, state);

    const TimeSeries z_r_trace(0.0, t_s, tr.z_r, "m");
    const TimeSeries z_r_star_trace(0.0, t_s, tr.z_r_star, "m");
    const TimeSeries q_e_trace(0.0, t_s, tr.q_e, "m3/s");
    res.report = evaluate_band(z_r_trace, z_r_star_trace, cfg.band_halfwidth, &q_e_trace);
    return res;
}

void write_traces_csv(const std::string& path, const Traces& tr) {
    CsvTable t;
    t.header = {"t_s", "q_e",     "w", "bias",    "u_raw", "u_applied", "saturated",
                "F_hat", "z", "z_quant", "z_star", "z_r",   "z_r_quant", "z_r_star"};
    t.columns = {tr.t, tr.q_e,     tr.w, tr.bias,    tr.u_raw, tr.u_applied, tr.saturated,
                 tr.f_hat, tr.z, tr.z_quant, tr.z_star, tr.z_r,   tr.z_r_quant, tr.z_r_star};
    write_csv(path, t);
}

void write_metrics_csv(const std::string& path, const BandReport& rep) {
    CsvTable t;
    t.header = {"max_over_m",  "max_under_m",      "violation_time_s",
                "within_band", "band_halfwidth_m", "measured_transport_delay_s"};
    t.columns = {{rep.max_over},
                 {rep.max_under},
                 {rep.violation_time},
                 {rep.within_band ? 1.0 : 0.0},
                 {rep.band_halfwidth},
                 {rep.measured_transport_delay}};
    write_csv(path, t);
}

void write_run_plots(const std::string& dir, const Traces& tr, double band_halfwidth) {
    std::vector<double> t_h(tr.t.size());
    for (std::size_t i = 0; i < tr.t.size(); ++i) t_h[i] = tr.t[i] / 3600.0;

    std::vector<double> pert(tr.w.size());
    for (std::size_t i = 0; i < tr.w.size(); ++i) pert[i] = tr.w[i] + tr.bias[i];

    const auto path = [&](const char* name) { return dir + "/" + name; };

    {
        SvgSeries s{"q_e", "#1f6fb2", t_h, tr.q_e};
        write_svg_chart(path("inflow.svg"), "Upstream discharge", "t [h]", "q_e [m3/s]", {{s}});
    }
    {
        SvgSeries w{"w + bias", "#b2541f", t_h, pert};
        write_svg_chart(path("perturbations.svg"), "Perturbations (lock flushes + outflow bias)",
                        "t [h]", "[m3/s]", {{w}});
    }
    {
        SvgSeries u{"u applied", "#1f6fb2", t_h, tr.u_applied};
        SvgSeries ur{"u raw", "#999999", t_h, tr.u_raw};
        const SvgSeries both[] = {u, ur};
        write_svg_chart(path("command.svg"), "Turbine discharge command", "t [h]", "u [m3/s]",
                        both);
    }
    {
        SvgSeries zs{"z*", "#b2541f", t_h, tr.z_star};
        SvgSeries zz{"z", "#1f6fb2", t_h, tr.z};
        const SvgSeries both[] = {zs, zz};
        write_svg_chart(path("level_near.svg"), "Near-actuator level tracking", "t [h]", "z [m]",
                        both);
    }
    {
        SvgSeries zs{"z_r*", "#b2541f", t_h, tr.z_r_star};
        SvgSeries zz{"z_r", "#1f6fb2", t_h, tr.z_r};
        const SvgSeries both[] = {zs, zz};
        write_svg_chart(path("level_remote.svg"), "Remote level tracking", "t [h]", "z_r [m]",
                        both, band_halfwidth);
    }
}

void write_reconstruction_csv(const std::string& path, const ReconstructionLaw& law) {
    CsvTable t;
    t.header = {"q_m3s", "z_r_target_m", "z_a_m"};
    t.columns = {law.q, std::vector<double>(law.q.size(), law.z_r_target), law.z_a};
    write_csv(path, t);
}

ReconstructionLaw read_reconstruction_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.header.size() != 3 || t.columns[0].empty())
        throw std::runtime_error("read_reconstruction_csv: malformed table " + path);
    ReconstructionLaw law;
    law.q = t.columns[0];
    law.z_r_target = t.columns[1].front();
    law.z_a = t.columns[2];
    return law;
}

}  // namespace hydro
