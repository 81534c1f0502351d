#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hydro/config.hpp"
#include "hydro/csv.hpp"
#include "hydro/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string plant;
    long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", args.seed, "scenario seed (overrides config)");
    cmd->add_option("--plant", args.plant, "plant model: pde or surrogate")
        ->check(CLI::IsMember({"pde", "surrogate"}));
}

hydro::RunConfig load(const CommonArgs& args) {
    hydro::RunConfig cfg = hydro::load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (!args.plant.empty()) cfg.plant = args.plant;
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    std::filesystem::create_directories(cfg.out_dir);
    return cfg;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int run_one(const hydro::RunConfig& cfg, double t_s, hydro::RunResult& out) {
    const hydro::Scenario sc = hydro::build_scenario(cfg.scenario, t_s, cfg.seed);
    std::vector<std::string> warnings;
    const hydro::ReconstructionLaw law = hydro::reconstruction_for(cfg, &warnings);
    print_warnings(warnings);
    out = hydro::run_scenario(cfg, sc, law);
    return 0;
}

int cmd_run(const CommonArgs& args) {
    const hydro::RunConfig cfg = load(args);
    hydro::RunResult res;
    run_one(cfg, cfg.t_s, res);
    hydro::write_traces_csv(cfg.out_dir + "/traces.csv", res.traces);
    hydro::write_metrics_csv(cfg.out_dir + "/metrics.csv", res.report);
    hydro::write_run_plots(cfg.out_dir, res.traces, cfg.band_halfwidth);
    std::cout << fmt::format(
        "scenario {}: within_band={} max_over={:.4f} m max_under={:.4f} m "
        "violation_time={:.0f} s transport_delay={:.0f} s\n",
        cfg.scenario, res.report.within_band, res.report.max_over, res.report.max_under,
        res.report.violation_time, res.report.measured_transport_delay);
    return res.report.within_band ? 0 : 1;
}

int cmd_calibrate(const CommonArgs& args) {
    hydro::RunConfig cfg = load(args);
    std::vector<double> grid;
    for (double q = cfg.q_grid_min; q <= cfg.q_grid_max + 1e-9; q += cfg.q_grid_step)
        grid.push_back(q);
    std::vector<std::string> warnings;
    const hydro::ReconstructionLaw law =
        hydro::calibrate_reconstruction(cfg.geometry, grid, cfg.z_r_target, {}, &warnings);
    print_warnings(warnings);
    hydro::write_reconstruction_csv(cfg.out_dir + "/reconstruction.csv", law);
    std::cout << fmt::format("calibrated {}/{} grid nodes -> {}/reconstruction.csv\n",
                             law.q.size(), grid.size(), cfg.out_dir);
    return law.q.size() * 5 >= grid.size() * 4 ? 0 : 1;  // >= 80 % of nodes
}

int cmd_sweep(const CommonArgs& args, const std::vector<double>& periods) {
    if (periods.empty()) {
        std::cerr << "sweep: empty period list\n";
        return kExitConfig;
    }
    for (double t_s : periods)
        if (!(t_s > 0.0)) {
            std::cerr << "sweep: periods must be positive\n";
            return kExitConfig;
        }
    const hydro::RunConfig cfg = load(args);

    hydro::CsvTable table;
    table.header = {"t_s", "max_abs_excursion_m", "within_band"};
    table.columns.resize(3);
    double excursion_120 = -1.0, excursion_60 = -1.0;
    for (double t_s : periods) {
        hydro::RunResult res;
        run_one(cfg, t_s, res);
        double max_exc = 0.0;
        for (std::size_t k = 0; k < res.traces.size(); ++k)
            max_exc = std::max(max_exc,
                               std::abs(res.traces.z_r[k] - res.traces.z_r_star[k]));
        table.columns[0].push_back(t_s);
        table.columns[1].push_back(max_exc);
        table.columns[2].push_back(res.report.within_band ? 1.0 : 0.0);
        if (t_s == 120.0) excursion_120 = max_exc;
        if (t_s == 60.0) excursion_60 = max_exc;
        std::cout << fmt::format("T_s = {:>5} s: max |z_r - z_r*| = {:.4f} m within_band={}\n",
                                 t_s, max_exc, res.report.within_band);
    }
    hydro::write_csv(cfg.out_dir + "/sweep.csv", table);

    if (excursion_120 >= 0.0 && excursion_60 >= 0.0 && excursion_60 >= excursion_120) {
        std::cerr << "sweep: no improvement from 120 s to 60 s sampling\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-free water-level regulation toolkit"};
    app.require_subcommand(1);

    CommonArgs run_args, cal_args, sweep_args;
    std::vector<double> periods;

    CLI::App* run = app.add_subcommand("run", "execute one scenario in closed loop");
    add_common(run, run_args);
    CLI::App* cal = app.add_subcommand("calibrate", "build the reconstruction table from the PDE");
    add_common(cal, cal_args);
    CLI::App* sweep = app.add_subcommand("sweep", "compare controller sampling periods");
    add_common(sweep, sweep_args);
    sweep->add_option("--periods", periods, "comma-separated controller periods in seconds")
        ->delimiter(',')
        ->default_val(std::vector<double>{120.0, 60.0});

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_args);
        if (cal->parsed()) return cmd_calibrate(cal_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args, periods);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    } catch (const hydro::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hydro::StepSizeError& e) {
        std::cerr << "simulation failure: " << e.what() << "\n";
        return kExitSimulation;
    } catch (const hydro::DryBedError& e) {
        std::cerr << "simulation failure: " << e.what() << "\n";
        return kExitSimulation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
