#include "hydro/plant.hpp"

#include <algorithm>
#include <cmath>

namespace hydro {

namespace {
constexpr double kGravity = 9.81;
}

void ChannelGeometry::validate() const {
    if (!(length > 0.0) || !(width > 0.0)) throw std::invalid_argument("geometry: length and width must be > 0");
    if (n_cells < 10) throw std::invalid_argument("geometry: need n_cells >= 10");
    if (sensor_x < 0.0 || sensor_x > length) throw std::invalid_argument("geometry: sensor_x outside reach");
    if (lateral_inflow_x < 0.0 || lateral_inflow_x > length)
        throw std::invalid_argument("geometry: lateral_inflow_x outside reach");
    if (!(manning_n > 0.0)) throw std::invalid_argument("geometry: manning_n must be > 0");
}

ReachState make_uniform_state(const ChannelGeometry& geom, double depth, double discharge) {
    geom.validate();
    if (!(depth > 0.0)) throw std::invalid_argument("make_uniform_state: depth must be > 0");
    ReachState s;
    s.area.assign(static_cast<std::size_t>(geom.n_cells), depth * geom.width);
    s.discharge.assign(static_cast<std::size_t>(geom.n_cells), discharge);
    return s;
}

double total_volume(const ChannelGeometry& geom, const ReachState& state) {
    double v = 0.0;
    for (double a : state.area) v += a;
    return v * geom.dx();
}

double max_wave_speed(const ChannelGeometry& geom, const ReachState& state) {
    double s = 0.0;
    for (std::size_t i = 0; i < state.area.size(); ++i) {
        const double a = state.area[i];
        const double c = std::sqrt(kGravity * a / geom.width);
        s = std::max(s, std::abs(state.discharge[i] / a) + c);
    }
    return s;
}

double cfl_dt(const ChannelGeometry& geom, const ReachState& state) {
    return 0.9 * geom.dx() / max_wave_speed(geom, state);
}

double manning_normal_depth(const ChannelGeometry& geom, double q) {
    // h = (n*q / (b*sqrt(S0)))^(3/5), wide-channel R ~ h.
    return std::pow(geom.manning_n * q / (geom.width * std::sqrt(geom.bed_slope)), 0.6);
}

void sv_step(const ChannelGeometry& geom, ReachState& state, double q_in, double q_lat,
             double q_out, double dt) {
    const int n = geom.n_cells;
    const double dx = geom.dx();
    const double b = geom.width;

    if (dt > cfl_dt(geom, state) * (1.0 + 1e-12))
        throw StepSizeError("sv_step: dt exceeds CFL limit");

    const auto& A = state.area;
    const auto& Q = state.discharge;

    // Free-surface elevation; bed falls linearly toward the downstream end.
    std::vector<double> eta(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * dx;
        eta[static_cast<std::size_t>(i)] = (geom.length - x) * geom.bed_slope + A[static_cast<std::size_t>(i)] / b;
    }

    // Interface fluxes, index i is the face between cells i-1 and i.
    std::vector<double> fm(static_cast<std::size_t>(n + 1));  // mass
    std::vector<double> fq(static_cast<std::size_t>(n + 1));  // momentum (advective part)
    fm[0] = q_in;
    fq[0] = q_in * q_in / A[0];
    fm[static_cast<std::size_t>(n)] = q_out;
    fq[static_cast<std::size_t>(n)] =
        q_out * q_out / A[static_cast<std::size_t>(n - 1)];
    for (int i = 1; i < n; ++i) {
        const std::size_t l = static_cast<std::size_t>(i - 1);
        const std::size_t r = static_cast<std::size_t>(i);
        const double cl = std::abs(Q[l] / A[l]) + std::sqrt(kGravity * A[l] / b);
        const double cr = std::abs(Q[r] / A[r]) + std::sqrt(kGravity * A[r] / b);
        const double a_loc = std::max(cl, cr);
        fm[static_cast<std::size_t>(i)] =
            0.5 * (Q[l] + Q[r]) - 0.5 * a_loc * b * (eta[r] - eta[l]);
        fq[static_cast<std::size_t>(i)] =
            0.5 * (Q[l] * Q[l] / A[l] + Q[r] * Q[r] / A[r]) - 0.5 * a_loc * (Q[r] - Q[l]);
    }

    const int lat_cell = std::min(n - 1, static_cast<int>(geom.lateral_inflow_x / dx));

    std::vector<double> a_new(static_cast<std::size_t>(n));
    std::vector<double> q_new(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        a_new[s] = A[s] - dt / dx * (fm[s + 1] - fm[s]);
        if (i == lat_cell) a_new[s] += dt * q_lat / dx;
        if (!(a_new[s] > 0.0)) throw DryBedError("sv_step: cell drained");

        // Non-conservative pressure/bed term -g*A*deta/dx, centered inside,
        // one-sided at the walls; zero for still water by construction.
        double deta_dx;
        if (i == 0)
            deta_dx = (eta[1] - eta[0]) / dx;
        else if (i == n - 1)
            deta_dx = (eta[s] - eta[s - 1]) / dx;
        else
            deta_dx = (eta[s + 1] - eta[s - 1]) / (2.0 * dx);

        const double h = A[s] / b;
        const double r_h = A[s] / (b + 2.0 * h);
        const double sf = geom.manning_n * geom.manning_n * Q[s] * std::abs(Q[s]) /
                          (A[s] * A[s] * std::pow(r_h, 4.0 / 3.0));
        q_new[s] = Q[s] - dt / dx * (fq[s + 1] - fq[s]) -
                   dt * kGravity * A[s] * (deta_dx + sf);
    }

    state.area = std::move(a_new);
    state.discharge = std::move(q_new);
    state.t += dt;
}

Levels read_levels(const ChannelGeometry& geom, const ReachState& state) {
    const double dx = geom.dx();
    const int n = geom.n_cells;
    Levels out;
    out.z_near = state.area[static_cast<std::size_t>(n - 1)] / geom.width;

    // Linear interpolation between cell centers, clamped at the ends.
    const double pos = state.area.size() == 1 ? 0.0 : geom.sensor_x / dx - 0.5;
    if (pos <= 0.0) {
        out.z_remote = state.area[0] / geom.width;
    } else if (pos >= n - 1) {
        out.z_remote = out.z_near;
    } else {
        const int i = static_cast<int>(pos);
        const double w = pos - i;
        const double hl = state.area[static_cast<std::size_t>(i)] / geom.width;
        const double hr = state.area[static_cast<std::size_t>(i + 1)] / geom.width;
        out.z_remote = (1.0 - w) * hl + w * hr;
    }
    return out;
}

}  // namespace hydro
