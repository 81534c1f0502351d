#include "hydro/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hydro {

double bias(double q_e) {
    if (q_e < 0.0) throw std::invalid_argument("bias: q_e must be >= 0");
    return 0.03 * q_e + 10.0;
}

double lock_flush_signal(std::span<const LockFlush> schedule, double t) {
    double w = 0.0;
    for (const auto& p : schedule)
        if (t > p.start && t <= p.start + p.duration) w += p.amplitude;
    return w;
}

double lock_flush_volume(std::span<const LockFlush> schedule) {
    double v = 0.0;
    for (const auto& p : schedule) v += p.amplitude * p.duration;
    return v;
}

namespace {

struct Knot {
    double t;  // s
    double v;
};

// Piecewise linear with repeated abscissae acting as steps (right-continuous).
double piecewise(const std::vector<Knot>& knots, double t) {
    if (t <= knots.front().t) return knots.front().v;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (t < knots[i].t) {
            const double span = knots[i].t - knots[i - 1].t;
            if (span <= 0.0) continue;
            if (knots[i].v == knots[i - 1].v) return knots[i].v;  // avoid FP jitter on plateaus
            const double w = (t - knots[i - 1].t) / span;
            return (1.0 - w) * knots[i - 1].v + w * knots[i].v;
        }
    }
    return knots.back().v;
}

TimeSeries sample_profile(const std::vector<Knot>& knots, double duration, double t_s,
                          std::string unit) {
    const auto n = static_cast<std::size_t>(std::llround(duration / t_s)) + 1;
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = piecewise(knots, static_cast<double>(k) * t_s);
    return TimeSeries(0.0, t_s, std::move(v), std::move(unit));
}

// Portable uniform in [0, 1): implementation-defined distributions avoided so
// seeded scenarios are identical across standard libraries.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<LockFlush> seeded_flushes(int count, double duration, double t_s,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LockFlush> flushes;
    flushes.reserve(static_cast<std::size_t>(count));
    const double lo = 2.0 * 3600.0;
    const double hi = duration - 4.0 * 3600.0;
    const double min_gap = 2.0 * 3600.0;  // lock service cycle: flushes never overlap
    while (flushes.size() < static_cast<std::size_t>(count)) {
        const double t = lo + uniform01(rng) * (hi - lo);
        LockFlush f;
        f.start = std::round(t / t_s) * t_s;  // grid-aligned: 7 samples per flush
        const bool clear = std::all_of(flushes.begin(), flushes.end(), [&](const LockFlush& g) {
            return std::abs(g.start - f.start) >= min_gap;
        });
        if (clear) flushes.push_back(f);
    }
    std::sort(flushes.begin(), flushes.end(),
              [](const LockFlush& a, const LockFlush& b) { return a.start < b.start; });
    return flushes;
}

constexpr double kHour = 3600.0;

}  // namespace

Scenario build_scenario(int n, double t_s, std::uint64_t seed) {
    if (n < 1 || n > 3) throw std::invalid_argument("build_scenario: scenario number must be 1..3");
    if (!(t_s > 0.0)) throw std::invalid_argument("build_scenario: t_s must be > 0");

    Scenario sc;
    sc.t_s = t_s;
    sc.seed = seed;
    sc.bias_enabled = true;

    if (n == 1) {
        // Flood recession, large discharge variations. The 6 h edge is a
        // sharp step and anchors the transport-delay measurement; later
        // transitions are ramps over a few hours.
        sc.name = "scenario1";
        sc.duration = 4.0 * 24.0 * kHour;
        const std::vector<Knot> knots = {
            {0 * kHour, 1250}, {6 * kHour, 1250}, {6 * kHour, 1200},  {10 * kHour, 1150},
            {14 * kHour, 1200}, {18 * kHour, 1200}, {24 * kHour, 1000}, {30 * kHour, 1000},
            {34 * kHour, 900},  {40 * kHour, 900},  {44 * kHour, 950},  {50 * kHour, 950},
            {56 * kHour, 800},  {62 * kHour, 800},  {66 * kHour, 720},  {74 * kHour, 720},
            {80 * kHour, 640},  {88 * kHour, 640},  {92 * kHour, 600},  {96 * kHour, 600}};
        sc.q_e_profile = sample_profile(knots, sc.duration, t_s, "m3/s");
        sc.setpoint_profile = sample_profile({{0, 10.0}}, sc.duration, t_s, "m");
        sc.flushes = seeded_flushes(8, sc.duration, t_s, seed);
    } else if (n == 2) {
        // Normal operation: diurnal swing around 700 m3/s plus one remote
        // setpoint transition on day 2.
        sc.name = "scenario2";
        sc.duration = 4.0 * 24.0 * kHour;
        const auto count = static_cast<std::size_t>(std::llround(sc.duration / t_s)) + 1;
        std::vector<double> q(count);
        for (std::size_t k = 0; k < count; ++k) {
            const double t = static_cast<double>(k) * t_s;
            q[k] = 700.0 + 80.0 * std::sin(2.0 * M_PI * (t - 6.0 * kHour) / (24.0 * kHour));
        }
        sc.q_e_profile = TimeSeries(0.0, t_s, std::move(q), "m3/s");
        sc.setpoint_profile =
            sample_profile({{0, 10.0}, {48 * kHour, 10.0}, {48 * kHour, 10.1}}, sc.duration, t_s, "m");
        sc.flushes = seeded_flushes(8, sc.duration, t_s, seed);
    } else {
        // Academic saturation test: the 1370 m3/s plateau plus the outflow
        // bias exceeds the default actuator ceiling, then the drop to
        // 300 m3/s forces rate saturation downward. The plateau is kept
        // short so the stored surplus stays moderate and the post-drop
        // command decrease is the correct control action.
        sc.name = "scenario3";
        sc.duration = 24.0 * kHour;
        const std::vector<Knot> knots = {{0, 700},          {2 * kHour, 700}, {2 * kHour, 1370},
                                         {3 * kHour, 1370}, {3 * kHour, 300}, {24 * kHour, 300}};
        sc.q_e_profile = sample_profile(knots, sc.duration, t_s, "m3/s");
        sc.setpoint_profile = sample_profile({{0, 10.0}}, sc.duration, t_s, "m");
        sc.flushes.clear();
    }
    return sc;
}

BandReport evaluate_band(const TimeSeries& z_r, const TimeSeries& z_r_star, double halfwidth,
                         const TimeSeries* q_e) {
    if (z_r.size() != z_r_star.size() || z_r.dt != z_r_star.dt || z_r.t0 != z_r_star.t0)
        throw std::invalid_argument("evaluate_band: traces are not aligned");

    BandReport rep;
    rep.band_halfwidth = halfwidth;
    for (std::size_t k = 0; k < z_r.size(); ++k) {
        const double d = z_r.values[k] - z_r_star.values[k];
        if (d > halfwidth) {
            rep.max_over = std::max(rep.max_over, d);
            rep.violation_time += z_r.dt;
        } else if (d < -halfwidth) {
            rep.max_under = std::max(rep.max_under, -d);
            rep.violation_time += z_r.dt;
        }
    }
    rep.within_band = rep.violation_time == 0.0;

    if (q_e && q_e->size() == z_r.size()) {
        // First large inflow step.
        std::size_t k0 = 0;
        double dq = 0.0;
        for (std::size_t k = 1; k < q_e->size(); ++k) {
            if (std::abs(q_e->values[k] - q_e->values[k - 1]) >= 25.0) {
                k0 = k;
                dq = q_e->values[k] - q_e->values[k - 1];
                break;
            }
        }
        if (k0 > 0) {
            const auto max_lag =
                std::min(z_r.size() - k0 - 2, static_cast<std::size_t>(3.0 * 3600.0 / z_r.dt));
            double best = -1e300;
            std::size_t best_lag = 0;
            for (std::size_t lag = 0; lag <= max_lag; ++lag) {
                const double dz = z_r.values[k0 + lag + 1] - z_r.values[k0 + lag];
                const double corr = dq * dz;
                if (corr > best) {
                    best = corr;
                    best_lag = lag;
                }
            }
            rep.measured_transport_delay = static_cast<double>(best_lag) * z_r.dt;
        }
    }
    return rep;
}

}  // namespace hydro
