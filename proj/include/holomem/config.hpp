// JSON run configuration: {"system": {...}, "schedule": {...}, "command": {...}}.
// Unknown keys are rejected; errors name the offending field path, and
// syntax errors carry line and column.
#ifndef HOLOMEM_CONFIG_HPP
#define HOLOMEM_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "protocol.hpp"

namespace holomem::config {

using Json = nlohmann::json;

class ConfigError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Typed access to one JSON object with path-qualified errors; `finish`
/// rejects every key that was never read.
class Section {
public:
    Section(const Json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(where() + ": expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const Json& raw(const std::string& key)
    {
        seen_.insert(key);
        if (!j_.contains(key))
            throw ConfigError(path(key) + ": required field is missing");
        return j_.at(key);
    }

    double number(const std::string& key) { return as_number(raw(key), path(key)); }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : mark(key, fallback); }

    long integer(const std::string& key) { return as_integer(raw(key), path(key)); }
    long integer(const std::string& key, long fallback) { return has(key) ? integer(key) : mark(key, fallback); }

    bool boolean(const std::string& key, bool fallback)
    {
        if (!has(key))
            return mark(key, fallback);
        const auto& v = raw(key);
        if (!v.is_boolean())
            throw ConfigError(path(key) + ": expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) { return as_string(raw(key), path(key)); }
    std::string string(const std::string& key, const std::string& fallback)
    {
        return has(key) ? string(key) : mark(key, fallback);
    }

    std::vector<double> numbers(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_array())
            throw ConfigError(path(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(as_number(v[i], path(key) + "[" + std::to_string(i) + "]"));
        return out;
    }

    std::vector<long> integers(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_array())
            throw ConfigError(path(key) + ": expected an array of integers");
        std::vector<long> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(as_integer(v[i], path(key) + "[" + std::to_string(i) + "]"));
        return out;
    }

    std::vector<std::string> strings(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_array())
            throw ConfigError(path(key) + ": expected an array of strings");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(as_string(v[i], path(key) + "[" + std::to_string(i) + "]"));
        return out;
    }

    Section child(const std::string& key) { return Section(raw(key), path(key)); }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(path(it.key()) + ": unknown key");
    }

    static double as_number(const Json& v, const std::string& where)
    {
        if (!v.is_number())
            throw ConfigError(where + ": expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            throw ConfigError(where + ": must be finite");
        return x;
    }

    static long as_integer(const Json& v, const std::string& where)
    {
        if (!v.is_number_integer())
            throw ConfigError(where + ": expected an integer");
        return v.get<long>();
    }

    static std::string as_string(const Json& v, const std::string& where)
    {
        if (!v.is_string())
            throw ConfigError(where + ": expected a string");
        return v.get<std::string>();
    }

private:
    template <class T>
    T mark(const std::string& key, T value)
    {
        seen_.insert(key);
        return value;
    }

    std::string where() const { return path_.empty() ? "config" : path_; }

    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// ---------------------------------------------------------------------------

struct ScheduleConfig {
    std::string type = "designed"; ///< designed | cycle | waypoints | sampled | constant
    CycleFamily family;
    double target_phi = 2.0 * kPi;  ///< designed
    int strokes = 1;                ///< cycle
    double delta_kappa = kPi / 2;   ///< cycle
    std::vector<Waypoint> points;   ///< waypoints
    double ramp_scale = 1.0;        ///< waypoints
    std::vector<double> times, omega_1, omega_2; ///< sampled
    double omega = 1.0, kappa = 0.0, duration = 1.0; ///< constant
    double time_scale = 1.0;
};

struct SweepAxis {
    std::string knob;
    std::vector<double> values;
};

struct CommandConfig {
    std::vector<int> sectors{1, 2, 3};
    std::vector<Complex> input{0.0, 1.0};    ///< photon amplitudes c_0^(l)
    int random_sectors = 0;                  ///< > 0: random input over l < random_sectors
    std::string mode = "both";
    double tolerance = 1e-9;
    int samples = 201;
    std::vector<std::string> suites{"darkness", "connection", "unitarity", "closed_form", "diagonalization",
                                    "finite_n"};
    bool corrupt_connection_sign = false;
    int random_samples = 50;
    std::vector<int> finite_n_atoms{2, 3, 4, 5, 6};
    int finite_n_photons = 2;
    std::vector<SweepAxis> grid;
    std::vector<std::string> metrics{"phi", "max_margin", "cycle_fidelity"};
    int metric_sector = 1;
    double companion_omega_low = 0.2;
    int threads = 0;
    bool qubit_exact = false;
    std::optional<std::uint64_t> seed;
};

struct RunConfig {
    SystemParams system;
    ScheduleConfig schedule;
    CommandConfig command;
};

inline const std::vector<std::string>& sweep_knobs()
{
    static const std::vector<std::string> k{"time_scale", "delta_1", "delta_2", "delta_antisym", "delta_p",
                                            "omega_low", "max_margin", "target_phi"};
    return k;
}

inline const std::vector<std::string>& sweep_metrics()
{
    static const std::vector<std::string> m{"phi", "max_margin", "duration", "cycle_fidelity",
                                            "holonomy_deviation", "path_dependence", "closed_form_difference"};
    return m;
}

inline const std::vector<std::string>& verify_suites()
{
    static const std::vector<std::string> s{"darkness", "connection", "unitarity", "closed_form", "diagonalization",
                                            "finite_n"};
    return s;
}

namespace detail {

inline void read_family(Section& s, CycleFamily& f)
{
    f.omega_high = s.number("omega_high", f.omega_high);
    f.omega_low = s.number("omega_low", f.omega_low);
    f.omega_return = s.number("omega_return", f.omega_return);
    if (s.has("kappa_start"))
        f.kappa_start = s.number("kappa_start");
    f.hold_time = s.number("hold_time", f.hold_time);
    f.ramp_scale = s.number("ramp_scale", f.ramp_scale);
    f.max_margin = s.number("max_margin", f.max_margin);
    f.margin_fill = s.number("margin_fill", f.margin_fill);
    f.max_strokes = static_cast<int>(s.integer("max_strokes", f.max_strokes));
    f.check_detuning = s.boolean("check_detuning", f.check_detuning);
}

inline std::vector<Complex> read_amplitudes(const Json& v, const std::string& where)
{
    if (!v.is_array() || v.empty())
        throw ConfigError(where + ": expected a non-empty array of numbers or [re, im] pairs");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        if (v[i].is_array()) {
            if (v[i].size() != 2)
                throw ConfigError(w + ": complex amplitude must be [re, im]");
            out.emplace_back(Section::as_number(v[i][0], w + "[0]"), Section::as_number(v[i][1], w + "[1]"));
        } else {
            out.emplace_back(Section::as_number(v[i], w), 0.0);
        }
    }
    return out;
}

inline void require_in(const std::string& value, const std::vector<std::string>& allowed,
                       const std::string& where)
{
    for (const auto& a : allowed)
        if (a == value)
            return;
    std::string list;
    for (const auto& a : allowed)
        list += (list.empty() ? "" : ", ") + a;
    throw ConfigError(where + ": '" + value + "' is not one of {" + list + "}");
}

inline void read_schedule(Section& s, ScheduleConfig& c)
{
    c.type = s.string("type");
    require_in(c.type, {"designed", "cycle", "waypoints", "sampled", "constant"}, s.path("type"));
    c.time_scale = s.number("time_scale", 1.0);
    if (!(c.time_scale > 0.0))
        throw ConfigError(s.path("time_scale") + ": must be positive");
    if (c.type == "designed" || c.type == "cycle") {
        read_family(s, c.family);
        if (c.type == "designed") {
            c.target_phi = s.number("target_phi");
        } else {
            c.strokes = static_cast<int>(s.integer("strokes"));
            c.delta_kappa = s.number("delta_kappa");
            if (c.strokes < 0)
                throw ConfigError(s.path("strokes") + ": must be non-negative");
        }
    } else if (c.type == "waypoints") {
        c.ramp_scale = s.number("ramp_scale", 1.0);
        const auto& pts = s.raw("points");
        if (!pts.is_array())
            throw ConfigError(s.path("points") + ": expected an array of [t, omega, kappa]");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const std::string w = s.path("points") + "[" + std::to_string(i) + "]";
            if (!pts[i].is_array() || pts[i].size() != 3)
                throw ConfigError(w + ": expected [t, omega, kappa]");
            c.points.push_back({Section::as_number(pts[i][0], w + "[0]"), Section::as_number(pts[i][1], w + "[1]"),
                                Section::as_number(pts[i][2], w + "[2]")});
        }
    } else if (c.type == "sampled") {
        c.times = s.numbers("times");
        c.omega_1 = s.numbers("omega_1");
        c.omega_2 = s.numbers("omega_2");
    } else {
        c.omega = s.number("omega");
        c.kappa = s.number("kappa");
        c.duration = s.number("duration");
        if (!(c.duration > 0.0))
            throw ConfigError(s.path("duration") + ": must be positive");
    }
    s.finish();
}

inline void read_command(Section& s, CommandConfig& c)
{
    if (s.has("sectors")) {
        c.sectors.clear();
        for (long l : s.integers("sectors")) {
            if (l < 0)
                throw ConfigError(s.path("sectors") + ": sector indices must be non-negative");
            c.sectors.push_back(static_cast<int>(l));
        }
    }
    if (s.has("input"))
        c.input = read_amplitudes(s.raw("input"), s.path("input"));
    c.random_sectors = static_cast<int>(s.integer("random_sectors", 0));
    c.mode = s.string("mode", c.mode);
    require_in(c.mode, {"adiabatic", "exact", "both"}, s.path("mode"));
    c.tolerance = s.number("tolerance", c.tolerance);
    if (!(c.tolerance > 0.0))
        throw ConfigError(s.path("tolerance") + ": must be positive");
    c.samples = static_cast<int>(s.integer("samples", c.samples));
    if (c.samples < 2)
        throw ConfigError(s.path("samples") + ": must be at least 2");
    if (s.has("suites")) {
        c.suites = s.strings("suites");
        for (std::size_t i = 0; i < c.suites.size(); ++i)
            require_in(c.suites[i], verify_suites(), s.path("suites") + "[" + std::to_string(i) + "]");
    }
    c.corrupt_connection_sign = s.boolean("corrupt_connection_sign", false);
    c.random_samples = static_cast<int>(s.integer("random_samples", c.random_samples));
    if (s.has("finite_n_atoms")) {
        c.finite_n_atoms.clear();
        for (long n : s.integers("finite_n_atoms"))
            c.finite_n_atoms.push_back(static_cast<int>(n));
    }
    c.finite_n_photons = static_cast<int>(s.integer("finite_n_photons", c.finite_n_photons));
    if (s.has("grid")) {
        const auto& g = s.raw("grid");
        if (!g.is_array() || g.size() > 2)
            throw ConfigError(s.path("grid") + ": expected an array of one or two axes");
        for (std::size_t i = 0; i < g.size(); ++i) {
            Section ax(g[i], s.path("grid") + "[" + std::to_string(i) + "]");
            SweepAxis a;
            a.knob = ax.string("knob");
            require_in(a.knob, sweep_knobs(), ax.path("knob"));
            a.values = ax.numbers("values");
            ax.finish();
            c.grid.push_back(std::move(a));
        }
    }
    if (s.has("metrics")) {
        c.metrics = s.strings("metrics");
        for (std::size_t i = 0; i < c.metrics.size(); ++i)
            require_in(c.metrics[i], sweep_metrics(), s.path("metrics") + "[" + std::to_string(i) + "]");
    }
    c.metric_sector = static_cast<int>(s.integer("metric_sector", c.metric_sector));
    c.companion_omega_low = s.number("companion_omega_low", c.companion_omega_low);
    c.threads = static_cast<int>(s.integer("threads", 0));
    c.qubit_exact = s.boolean("qubit_exact", false);
    if (s.has("seed")) {
        const auto& v = s.raw("seed");
        if (!v.is_number_unsigned())
            throw ConfigError(s.path("seed") + ": expected a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    }
    s.finish();
}

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace detail

inline RunConfig parse_config(const std::string& text, const std::string& source = "config")
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = detail::line_column(text, e.byte);
        std::string what = e.what();
        const auto pos = what.find("syntax error");
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                          (pos == std::string::npos ? what : what.substr(pos)));
    }
    RunConfig rc;
    Section root(j, "");
    if (root.has("system")) {
        auto s = root.child("system");
        rc.system.g_sqrt_n = s.number("g_sqrt_n", 1.0);
        rc.system.delta_p = s.number("delta_p", 0.0);
        rc.system.delta_1 = s.number("delta_1", 0.0);
        rc.system.delta_2 = s.number("delta_2", 0.0);
        s.finish();
        if (!(rc.system.g_sqrt_n > 0.0))
            throw ConfigError("system.g_sqrt_n: must be positive");
    }
    {
        auto s = root.child("schedule");
        detail::read_schedule(s, rc.schedule);
    }
    if (root.has("command")) {
        auto s = root.child("command");
        detail::read_command(s, rc.command);
    }
    root.finish();
    return rc;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

/// Materializes the configured schedule.
inline PulseSchedule build_schedule(const SystemParams& p, const ScheduleConfig& c)
{
    PulseSchedule s = [&] {
        if (c.type == "designed")
            return design_phase_schedule(p, c.target_phi, c.family).schedule;
        if (c.type == "cycle")
            return build_cycle_schedule(p, c.family, c.strokes, c.delta_kappa,
                                        c.family.kappa_start.value_or(c.delta_kappa >= 0.0 ? 0.0 : kPi / 2));
        if (c.type == "waypoints")
            return PulseSchedule::from_waypoints(c.points, c.ramp_scale);
        if (c.type == "sampled")
            return PulseSchedule::from_samples(c.times, c.omega_1, c.omega_2);
        return PulseSchedule::constant(c.omega, c.kappa, c.duration);
    }();
    return c.time_scale == 1.0 ? s : s.time_scaled(c.time_scale);
}

} // namespace holomem::config

#endif
