#include "hydro/config.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace hydro {

namespace {

enum class Dim {
    Length,       // m, cm, km
    Area,         // m2, km2
    Flow,         // m3/s
    Time,         // s, min, h, d
    PerTime,      // 1/s
    PerTimeSq,    // 1/s2
    Manning,      // s/m^(1/3)
    LevelPerFlow, // s/m2 (m per m3/s)
    Plain,        // dimensionless number
    Integer,
    Text,
    Flag,         // on/off
};

double unit_factor(Dim dim, const std::string& unit) {
    static const std::map<Dim, std::map<std::string, double>> table = {
        {Dim::Length, {{"m", 1.0}, {"cm", 0.01}, {"km", 1000.0}}},
        {Dim::Area, {{"m2", 1.0}, {"km2", 1e6}}},
        {Dim::Flow, {{"m3/s", 1.0}}},
        {Dim::Time, {{"s", 1.0}, {"min", 60.0}, {"h", 3600.0}, {"d", 86400.0}}},
        {Dim::PerTime, {{"1/s", 1.0}, {"1/min", 1.0 / 60.0}, {"1/h", 1.0 / 3600.0}}},
        {Dim::PerTimeSq, {{"1/s2", 1.0}}},
        {Dim::Manning, {{"s/m^(1/3)", 1.0}}},
        {Dim::LevelPerFlow, {{"s/m2", 1.0}}},
    };
    const auto dim_it = table.find(dim);
    if (dim_it == table.end()) throw ConfigError("internal: no unit table for dimension");
    const auto it = dim_it->second.find(unit);
    if (it == dim_it->second.end()) throw ConfigError(fmt::format("unknown unit '{}'", unit));
    return it->second;
}

struct Entry {
    std::string value;  // raw value token(s)
    std::string unit;   // trailing unit token, possibly empty
    int line = 0;
};

struct ParsedFile {
    std::map<std::string, Entry> entries;  // "section.key"

    const Entry* find(const std::string& key) const {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
};

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

ParsedFile parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
    ParsedFile out;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(fmt::format("{}:{}: malformed section header", path, lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", path, lineno));
        const std::string key = trim(line.substr(0, eq));
        std::string rhs = trim(line.substr(eq + 1));
        if (key.empty() || rhs.empty())
            throw ConfigError(fmt::format("{}:{}: empty key or value", path, lineno));

        Entry e;
        e.line = lineno;
        const auto space = rhs.find_last_of(" \t");
        if (space != std::string::npos) {
            e.value = trim(rhs.substr(0, space));
            e.unit = trim(rhs.substr(space + 1));
        } else {
            e.value = rhs;
        }
        out.entries[section.empty() ? key : section + "." + key] = e;
    }
    return out;
}

double parse_number(const std::string& text, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("key '{}': cannot parse number '{}'", key, text));
    }
}

class Reader {
public:
    Reader(ParsedFile file, std::string path) : file_(std::move(file)), path_(std::move(path)) {}

    double physical(const std::string& key, Dim dim, double fallback) {
        const Entry* e = lookup(key);
        if (!e) return fallback;
        if (e->unit.empty())
            throw ConfigError(
                fmt::format("{}:{}: physical entry '{}' must carry a unit", path_, e->line, key));
        return parse_number(e->value, key) * unit_factor(dim, e->unit);
    }

    double plain(const std::string& key, double fallback) {
        const Entry* e = lookup(key);
        if (!e) return fallback;
        if (!e->unit.empty())
            throw ConfigError(fmt::format("{}:{}: '{}' is dimensionless, found unit '{}'", path_,
                                          e->line, key, e->unit));
        return parse_number(e->value, key);
    }

    long integer(const std::string& key, long fallback) {
        const double v = plain(key, static_cast<double>(fallback));
        const long n = std::lround(v);
        if (static_cast<double>(n) != v)
            throw ConfigError(fmt::format("key '{}': expected an integer", key));
        return n;
    }

    std::string text(const std::string& key, std::string fallback) {
        const Entry* e = lookup(key);
        if (!e) return fallback;
        return e->unit.empty() ? e->value : e->value + " " + e->unit;
    }

    bool flag(const std::string& key, bool fallback) {
        const Entry* e = lookup(key);
        if (!e) return fallback;
        if (e->value == "on" || e->value == "true") return true;
        if (e->value == "off" || e->value == "false") return false;
        throw ConfigError(fmt::format("key '{}': expected on/off", key));
    }

    bool has(const std::string& key) const { return file_.find(key) != nullptr; }

    /// Every entry in the file must have been consumed by one of the readers.
    void reject_unread() const {
        for (const auto& [key, entry] : file_.entries)
            if (!read_.contains(key))
                throw ConfigError(
                    fmt::format("{}:{}: unknown key '{}'", path_, entry.line, key));
    }

private:
    const Entry* lookup(const std::string& key) {
        read_.insert(key);
        return file_.find(key);
    }

    ParsedFile file_;
    std::string path_;
    std::set<std::string> read_;
};

}  // namespace

ControllerGains RunConfig::resolved_gains(double period) const {
    if (!gains_auto) return inner_gains;
    ControllerGains g;
    g.kp = 0.5 / period;
    g.ki = g.kp * g.kp / 4.0;  // critically damped error dynamics
    g.kd = 0.0;
    return g;
}

CascadeConfig RunConfig::cascade_config(double period) const {
    CascadeConfig c;
    c.model = model;
    c.inner_gains = resolved_gains(period);
    c.saturator = saturator;
    c.outer_gains = outer_gains;
    c.t_s = period;
    c.anti_windup = anti_windup;
    c.transition_duration = transition_duration;
    return c;
}

RunConfig load_config(const std::string& path) {
    Reader r(parse_file(path), path);
    RunConfig c;

    c.geometry.length = r.physical("geometry.length", Dim::Length, c.geometry.length);
    c.geometry.width = r.physical("geometry.width", Dim::Length, c.geometry.width);
    c.geometry.bed_slope = r.plain("geometry.bed_slope", c.geometry.bed_slope);
    c.geometry.manning_n = r.physical("geometry.manning_n", Dim::Manning, c.geometry.manning_n);
    c.geometry.n_cells = static_cast<int>(r.integer("geometry.n_cells", c.geometry.n_cells));
    c.geometry.lateral_inflow_x =
        r.physical("geometry.lateral_inflow_x", Dim::Length, c.geometry.lateral_inflow_x);
    c.geometry.sensor_x = r.physical("geometry.sensor_x", Dim::Length, c.geometry.sensor_x);
    c.geometry.validate();

    c.model.nu = 1;
    c.model.alpha = r.physical("controller.alpha", Dim::Area, 1.65e6);
    c.model.estimator_window =
        static_cast<int>(r.integer("controller.estimator_window", c.model.estimator_window));
    c.t_s = r.physical("controller.t_s", Dim::Time, c.t_s);
    c.gains_auto = r.text("controller.gains", "auto") == "auto";
    if (!c.gains_auto) {
        c.inner_gains.kp = r.physical("controller.kp", Dim::PerTime, 0.0);
        c.inner_gains.ki = r.physical("controller.ki", Dim::PerTimeSq, 0.0);
        c.inner_gains.kd = r.plain("controller.kd", 0.0);
        if (!(c.inner_gains.kp > 0.0) || c.inner_gains.ki < 0.0 || c.inner_gains.kd < 0.0)
            throw ConfigError("controller gains: need kp > 0, ki >= 0, kd >= 0");
    }
    c.saturator.u_min = r.physical("controller.u_min", Dim::Flow, c.saturator.u_min);
    c.saturator.u_max = r.physical("controller.u_max", Dim::Flow, c.saturator.u_max);
    c.saturator.rate_max = r.physical("controller.rate_max", Dim::Flow, c.saturator.rate_max);
    if (!(c.saturator.u_min < c.saturator.u_max) || !(c.saturator.rate_max > 0.0))
        throw ConfigError("saturator: need u_min < u_max and rate_max > 0");
    c.anti_windup = r.flag("controller.anti_windup", c.anti_windup);

    c.outer_gains.kp = r.plain("cascade.kp_out", c.outer_gains.kp);
    c.outer_gains.ki = r.physical("cascade.ki_out", Dim::PerTime, c.outer_gains.kp / 3600.0);
    c.transition_duration =
        r.physical("cascade.transition_duration", Dim::Time, c.transition_duration);
    c.z_r_target = r.physical("cascade.z_r_target", Dim::Length, c.z_r_target);
    c.q_grid_min = r.physical("cascade.q_grid_min", Dim::Flow, c.q_grid_min);
    c.q_grid_max = r.physical("cascade.q_grid_max", Dim::Flow, c.q_grid_max);
    c.q_grid_step = r.physical("cascade.q_grid_step", Dim::Flow, c.q_grid_step);
    c.reconstruction_table = r.text("cascade.reconstruction_table", "");

    c.surrogate.surface_area = r.physical("surrogate.surface_area", Dim::Area, 1.65e6);
    c.surrogate.delay_in = r.physical("surrogate.delay_in", Dim::Time, c.surrogate.delay_in);
    c.surrogate.delay_w = r.physical("surrogate.delay_w", Dim::Time, c.surrogate.delay_w);
    c.surrogate.z_per_q = r.physical("surrogate.z_per_q", Dim::LevelPerFlow, c.surrogate.z_per_q);
    c.surrogate.q_ref = r.physical("surrogate.q_ref", Dim::Flow, c.surrogate.q_ref);

    c.scenario = static_cast<int>(r.integer("run.scenario", c.scenario));
    c.plant = r.text("run.plant", c.plant);
    if (c.plant != "pde" && c.plant != "surrogate")
        throw ConfigError("run.plant must be 'pde' or 'surrogate'");
    c.out_dir = r.text("run.out_dir", c.out_dir);
    c.seed = static_cast<std::uint64_t>(r.integer("run.seed", static_cast<long>(c.seed)));
    c.band_halfwidth = r.physical("run.band_halfwidth", Dim::Length, c.band_halfwidth);
    r.reject_unread();

    if (!(c.model.alpha > 0.0)) throw ConfigError("controller.alpha must be > 0");
    if (c.model.estimator_window < 2) throw ConfigError("controller.estimator_window must be >= 2");
    if (!(c.outer_gains.kp < 1.0))
        throw ConfigError("cascade.kp_out must stay below 1 (outer loop slower than inner)");
    return c;
}

}  // namespace hydro
