// End-to-end acceptance gate. Each numbered criterion prints one PASS/FAIL
// line with the measured quantity and its pinned tolerance; the process exits
// nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hydro/config.hpp"
#include "hydro/runner.hpp"
#include "hydro/scenarios.hpp"
#include "hydro/signals.hpp"
#include "hydro/surrogate.hpp"

using namespace hydro;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("[%d] %-34s %s  (%s)\n", id, title, ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

RunResult run_case(RunConfig cfg, const ReconstructionLaw& law, int scenario, double t_s,
                   bool anti_windup = true) {
    cfg.t_s = t_s;
    cfg.anti_windup = anti_windup;
    const Scenario sc = build_scenario(scenario, t_s, cfg.seed);
    return run_scenario(cfg, sc, law);
}

// Largest |z_r - z*_r| over the run (band report with a zero-width band).
double max_excursion(const RunResult& r) {
    double worst = 0.0;
    for (std::size_t k = 0; k < r.traces.size(); ++k)
        worst = std::max(worst, std::abs(r.traces.z_r[k] - r.traces.z_r_star[k]));
    return worst;
}

// Ordinary least squares slope over regularly sampled values.
double ls_slope(const std::vector<double>& y, double dt) {
    const double n = static_cast<double>(y.size());
    double st = 0.0, sy = 0.0, sty = 0.0, stt = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double t = k * dt;
        st += t;
        sy += y[k];
        sty += t * y[k];
        stt += t * t;
    }
    return (n * sty - st * sy) / (n * stt - st * st);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const RunConfig base = load_config(std::string(HYDRO_CONFIG_DIR) + "/default.cfg");

    std::vector<std::string> warnings;
    RunConfig pde = base;
    pde.plant = "pde";
    const ReconstructionLaw law = reconstruction_for(pde, &warnings);
    for (const auto& w : warnings) std::fprintf(stderr, "calibration: %s\n", w.c_str());

    // --- 1: band compliance, scenarios 1 and 2, PDE, T_s = 120 s ------------
    const RunResult s1_120 = run_case(pde, law, 1, 120.0);
    const RunResult s2_120 = run_case(pde, law, 2, 120.0);
    {
        const double worst =
            std::max({s1_120.report.max_over, s1_120.report.max_under, s2_120.report.max_over,
                      s2_120.report.max_under});
        report(1, "band compliance, 120 s",
               s1_120.report.within_band && s2_120.report.within_band,
               fmt("worst overshoot beyond +/-10 cm: %.4f m", worst));
    }

    // --- 2: faster sampling tightens the excursion ---------------------------
    {
        const RunResult s1_60 = run_case(pde, law, 1, 60.0);
        const RunResult s2_60 = run_case(pde, law, 2, 60.0);
        const double exc60 = std::max(max_excursion(s1_60), max_excursion(s2_60));
        const double exc120 = std::max(max_excursion(s1_120), max_excursion(s2_120));
        report(2, "60 s excursion <= 5 cm and < 120 s", exc60 <= 0.05 && exc60 < exc120,
               fmt("60 s: %.4f m, 120 s: %.4f m", exc60, exc120));
    }

    // --- 3: differentiator exactness -----------------------------------------
    {
        const double dt = 1.0;
        double worst_affine = 0.0;
        for (int m : {2, 10, 61}) {
            const SlopeFilter f = make_slope_filter(m, dt);
            std::vector<double> y(m);
            for (int k = 0; k < m; ++k) y[k] = 3.7 - 0.42 * (k * dt);
            worst_affine = std::max(worst_affine, std::abs(apply_filter(f, y) / -0.42 - 1.0));
        }
        const int m = 61;  // T = 60 s window over y = t^2
        const SlopeFilter f = make_slope_filter(m, dt);
        std::vector<double> y(m);
        for (int k = 0; k < m; ++k) y[k] = (k * dt) * (k * dt);
        const double err_quad = std::abs(apply_filter(f, y) - ls_slope(y, dt));
        report(3, "slope filter exactness", worst_affine < 1e-9 && err_quad < 1e-6,
               fmt("affine rel err %.2e (<1e-9), quadratic vs LS %.2e (<1e-6)", worst_affine,
                   err_quad));
    }

    // --- 4: exact-F pole placement on the surrogate ---------------------------
    {
        const double dt = 5.0, e0 = 0.30, z_star = 5.0;
        UltraLocalModel model{1, base.surrogate.surface_area, 5};
        const ControllerGains g = base.resolved_gains(120.0);
        const double s = g.kp / 2.0;  // ki = kp^2/4: double pole at -kp/2
        SurrogateSim sim({}, dt, z_star + e0, 700.0, 0.0);
        ControllerState st;
        st.last_command = 700.0;
        double num = 0.0, den = 0.0;
        const long n = static_cast<long>(10.0 / s / dt);
        for (long k = 0; k < n; ++k) {
            const double t = k * dt;
            const double e = sim.z_remote() - z_star;
            const double e_ref = e0 * (1.0 - s * t) * std::exp(-s * t);
            num += (e - e_ref) * (e - e_ref);
            den += e_ref * e_ref;
            const double u = ipi_command(model, g, 700.0, 0.0, e, st);  // F injected exactly
            update_integral(st, e, dt, false, false);
            st.last_command = u;
            sim.step(700.0, 0.0, u);
        }
        const double rms = std::sqrt(num / den);
        report(4, "exact-F pole placement", rms < 0.01, fmt("RMS error %.4f (<0.01)", rms));
    }

    // --- 5: PDE mass conservation and well-balancedness -----------------------
    {
        const double rel =
            std::abs(s1_120.mass_error()) / std::max(s1_120.volume_initial, 1.0);
        ChannelGeometry geom = base.geometry;
        geom.n_cells = 30;
        geom.length = 3000.0;
        geom.sensor_x = 1500.0;
        geom.lateral_inflow_x = 1000.0;
        // Lake at rest: flat free surface over the sloping bed, zero flow.
        ReachState lake = make_uniform_state(geom, 5.0, 0.0);
        const double dx = geom.dx();
        for (int i = 0; i < geom.n_cells; ++i) {
            const double x = (i + 0.5) * dx;
            const double bed = (geom.length - x) * geom.bed_slope;
            lake.area[static_cast<std::size_t>(i)] =
                (geom.length * geom.bed_slope + 5.0 - bed) * geom.width;
        }
        const ReachState initial = lake;
        const double dt = cfl_dt(geom, lake);
        double drift = 0.0;
        for (int k = 0; k < 100000; ++k) {
            sv_step(geom, lake, 0.0, 0.0, 0.0, dt);
            if (k % 1000 == 999)
                for (std::size_t i = 0; i < lake.area.size(); ++i)
                    drift = std::max(drift,
                                     std::abs(lake.area[i] - initial.area[i]) / geom.width);
        }
        report(5, "mass conservation + still water", rel <= 1e-6 && drift < 1e-8,
               fmt("rel volume err %.2e (<=1e-6), still-water drift %.2e m (<1e-8)", rel, drift));
    }

    // --- 6: saturation handling and anti-windup, scenario 3 -------------------
    {
        const RunResult on = run_case(pde, law, 3, 120.0, true);
        const RunResult off = run_case(pde, law, 3, 120.0, false);
        bool limits_ok = true;
        const auto& tr = on.traces;
        for (std::size_t k = 0; k < tr.size(); ++k) {
            limits_ok = limits_ok && tr.u_applied[k] >= base.saturator.u_min - 1e-9 &&
                        tr.u_applied[k] <= base.saturator.u_max + 1e-9;
            if (k > 0)
                limits_ok = limits_ok && std::abs(tr.u_applied[k] - tr.u_applied[k - 1]) <=
                                             base.saturator.rate_max + 1e-9;
        }
        // Locate the steep inflow drop and check the immediate reaction.
        std::size_t k0 = 0;
        double biggest_drop = 0.0;
        for (std::size_t k = 1; k < tr.size(); ++k)
            if (tr.q_e[k - 1] - tr.q_e[k] > biggest_drop) {
                biggest_drop = tr.q_e[k - 1] - tr.q_e[k];
                k0 = k;
            }
        // The command follows the inflow down; the inner setpoint repositions
        // immediately in the direction the calibrated law dictates for less flow.
        const double dir = static_cast<double>(law.monotonicity());
        const bool reacts = k0 > 0 && k0 + 1 < tr.size() &&
                            tr.u_applied[k0 + 1] < tr.u_applied[k0] &&
                            dir * (tr.z_star[k0] - tr.z_star[k0 - 1]) < 0.0;
        const bool windup_shown = on.any_saturated && !off.report.within_band;
        report(6, "saturation + anti-windup", limits_ok && reacts && windup_shown,
               fmt("limits ok=%.0f, next-sample decrease=%.0f, no-AW worst dev %.3f m",
                   limits_ok ? 1.0 : 0.0, reacts ? 1.0 : 0.0,
                   std::max(off.report.max_over, off.report.max_under) + 0.10));
    }

    // --- 7: transport delay ----------------------------------------------------
    {
        const double d = s1_120.report.measured_transport_delay;
        report(7, "transport delay in [10, 90] min", d >= 600.0 && d <= 5400.0,
               fmt("measured %.1f min", d / 60.0));
    }

    // --- 8: determinism ---------------------------------------------------------
    {
        const fs::path dir = fs::temp_directory_path() / "hydro_acceptance";
        fs::create_directories(dir);
        const RunResult again = run_case(pde, law, 1, 120.0);
        write_traces_csv((dir / "a.csv").string(), s1_120.traces);
        write_traces_csv((dir / "b.csv").string(), again.traces);
        const bool identical = slurp(dir / "a.csv") == slurp(dir / "b.csv");
        fs::remove_all(dir);
        report(8, "byte-identical repeat run", identical,
               identical ? "traces.csv bytes equal" : "traces differ");
    }

    std::printf("%s: %d/%d criteria\n", g_failures == 0 ? "ACCEPTED" : "REJECTED",
                8 - g_failures, 8);
    return g_failures == 0 ? 0 : 1;
}
