#include "hydro/surrogate.hpp"

#include <cmath>
#include <stdexcept>

namespace hydro {

namespace {
std::size_t lag_samples(double delay, double dt) {
    return static_cast<std::size_t>(std::ceil(delay / dt - 1e-12));
}
}  // namespace

SurrogateSim::SurrogateSim(const SurrogateReach& reach, double dt, double z_r0,
                           std::span<const double> q_in_history, std::span<const double> w_history)
    : reach_(reach), dt_(dt), z_r_(z_r0) {
    if (!(dt > 0.0)) throw std::invalid_argument("SurrogateSim: dt must be > 0");
    if (!(reach.surface_area > 0.0) || reach.delay_in < 0.0 || reach.delay_w < 0.0)
        throw std::invalid_argument("SurrogateSim: bad reach parameters");
    lag_in_ = lag_samples(reach.delay_in, dt);
    lag_w_ = lag_samples(reach.delay_w, dt);
    if (q_in_history.size() < lag_in_)
        throw std::invalid_argument("SurrogateSim: q_in history shorter than delay");
    if (w_history.size() < lag_w_)
        throw std::invalid_argument("SurrogateSim: w history shorter than delay");
    q_in_hist_.assign(q_in_history.end() - static_cast<std::ptrdiff_t>(lag_in_),
                      q_in_history.end());
    w_hist_.assign(w_history.end() - static_cast<std::ptrdiff_t>(lag_w_), w_history.end());
}

SurrogateSim::SurrogateSim(const SurrogateReach& reach, double dt, double z_r0, double q_in0,
                           double w0)
    : SurrogateSim(reach, dt, z_r0,
                   std::vector<double>(lag_samples(reach.delay_in, dt), q_in0),
                   std::vector<double>(lag_samples(reach.delay_w, dt), w0)) {}

Levels SurrogateSim::step(double q_in, double w, double q_out) {
    // The delay lines hold the last `lag` inputs; pushing first makes the
    // front equal to the input from exactly `delay` ago.
    q_in_hist_.push_back(q_in);
    w_hist_.push_back(w);
    const double q_in_delayed = q_in_hist_.front();
    const double w_delayed = w_hist_.front();
    q_in_hist_.erase(q_in_hist_.begin());
    w_hist_.erase(w_hist_.begin());

    z_r_ += dt_ * (q_in_delayed + w_delayed - q_out) / reach_.surface_area;
    return levels(q_out);
}

Levels SurrogateSim::levels(double q_out) const {
    Levels l;
    l.z_remote = z_r_;
    l.z_near = z_r_ + reach_.z_offset + reach_.z_per_q * (reach_.q_ref - q_out);
    return l;
}

}  // namespace hydro
