#ifndef SIMHD_CONFIG_HPP
#define SIMHD_CONFIG_HPP

#include "simhd/problems.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace simhd {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool known_section(const std::string& s) {
    return s == "problem" || s == "mesh" || s == "fluid" || s == "scheme" ||
           s == "output";
}

inline double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for key '" + key + "': " + v);
    }
    if (pos != v.size())
        throw ConfigError("invalid numeric value for key '" + key + "': " + v);
    return x;
}

inline int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("expected integer for key '" + key + "': " + v);
    return i;
}

inline Bc to_bc(const std::string& key, const std::string& v) {
    if (v == "periodic") return Bc::Periodic;
    if (v == "transmissive") return Bc::Transmissive;
    throw ConfigError("invalid boundary condition for key '" + key + "': " + v);
}

} // namespace detail

// Parse the flat key = value text format into key/value pairs. Lines may be
// empty, comments (#) or section headers ([problem], [mesh], [fluid],
// [scheme], [output]); keys are globally unique.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(
    const std::string& text) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("malformed section header at line " +
                                  std::to_string(lineno));
            const std::string name = detail::trim(t.substr(1, t.size() - 2));
            if (!detail::known_section(name))
                throw ConfigError("unknown config section [" + name + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        kv.emplace_back(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    return kv;
}

// Apply one override onto a config; unknown keys are errors.
inline void apply_config_key(ProblemConfig& c, const std::string& key,
                             const std::string& v) {
    using namespace detail;
    if (key == "problem") {
        // handled by the caller (selects the defaults)
    } else if (key == "nx") {
        c.nx = to_int(key, v);
    } else if (key == "ny") {
        if (c.dim == 1 && to_int(key, v) != 1)
            throw ConfigError("ny is inconsistent with a 1D problem");
        c.ny = to_int(key, v);
    } else if (key == "x_min") {
        c.x_min = to_double(key, v);
    } else if (key == "x_max") {
        c.x_max = to_double(key, v);
    } else if (key == "y_min" || key == "y_max") {
        if (c.dim == 1) throw ConfigError(key + " is inconsistent with a 1D problem");
        (key == "y_min" ? c.y_min : c.y_max) = to_double(key, v);
    } else if (key == "bc_x") {
        c.bc_x = to_bc(key, v);
    } else if (key == "bc_y") {
        if (c.dim == 1) throw ConfigError("bc_y is inconsistent with a 1D problem");
        c.bc_y = to_bc(key, v);
    } else if (key == "gamma") {
        c.gamma = to_double(key, v);
    } else if (key == "c_v") {
        c.c_v = to_double(key, v);
    } else if (key == "mu") {
        c.mu = to_double(key, v);
    } else if (key == "lambda") {
        c.lambda_c = to_double(key, v);
    } else if (key == "eta") {
        c.eta = to_double(key, v);
    } else if (key == "cfl") {
        c.cfl = to_double(key, v);
        if (!(c.cfl > 0.0 && c.cfl < 1.0))
            throw ConfigError("cfl must satisfy 0 < cfl < 1");
    } else if (key == "t_final") {
        c.t_final = to_double(key, v);
    } else if (key == "order") {
        c.order = to_int(key, v);
        if (c.order != 1 && c.order != 2) throw ConfigError("order must be 1 or 2");
    } else if (key == "scheme") {
        if (v == "semi-implicit")
            c.semi_implicit = true;
        else if (v == "explicit-reference")
            c.semi_implicit = false;
        else
            throw ConfigError("unknown scheme: " + v);
    } else if (key == "r_max") {
        c.r_max = to_int(key, v);
        if (c.r_max < 1) throw ConfigError("r_max must be >= 1");
    } else if (key == "output_interval") {
        c.output_interval = to_double(key, v);
    } else if (key == "pressure_floor") {
        c.pressure_floor = to_double(key, v);
    } else if (key == "dt_fixed") {
        c.dt_fixed = to_double(key, v);
    } else if (key == "out_dir") {
        c.out_dir = v;
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

// Build a config from flat text: the problem id selects the registered
// defaults, every other key overrides them.
inline ProblemConfig config_from_text(const std::string& text) {
    const auto kv = parse_config_text(text);
    std::string id;
    for (const auto& [k, v] : kv)
        if (k == "problem") {
            if (!id.empty()) throw ConfigError("duplicate problem key");
            id = v;
        }
    if (id.empty()) throw ConfigError("config does not name a problem");
    ProblemConfig c = default_config(id);
    for (const auto& [k, v] : kv) apply_config_key(c, k, v);
    return c;
}

inline ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_text(ss.str());
}

// Serialize a config back to the flat text format; config_from_text of the
// result reproduces an equal config.
inline std::string config_to_text(const ProblemConfig& c) {
    std::ostringstream os;
    os.precision(17);
    auto bc_name = [](Bc b) { return b == Bc::Periodic ? "periodic" : "transmissive"; };
    os << "[problem]\n";
    os << "problem = " << c.problem << "\n";
    os << "[mesh]\n";
    os << "nx = " << c.nx << "\n";
    os << "x_min = " << c.x_min << "\n";
    os << "x_max = " << c.x_max << "\n";
    os << "bc_x = " << bc_name(c.bc_x) << "\n";
    if (c.dim == 2) {
        os << "ny = " << c.ny << "\n";
        os << "y_min = " << c.y_min << "\n";
        os << "y_max = " << c.y_max << "\n";
        os << "bc_y = " << bc_name(c.bc_y) << "\n";
    }
    os << "[fluid]\n";
    os << "gamma = " << c.gamma << "\n";
    os << "c_v = " << c.c_v << "\n";
    os << "mu = " << c.mu << "\n";
    os << "lambda = " << c.lambda_c << "\n";
    os << "eta = " << c.eta << "\n";
    os << "[scheme]\n";
    os << "scheme = " << (c.semi_implicit ? "semi-implicit" : "explicit-reference") << "\n";
    os << "order = " << c.order << "\n";
    os << "cfl = " << c.cfl << "\n";
    os << "t_final = " << c.t_final << "\n";
    os << "r_max = " << c.r_max << "\n";
    os << "pressure_floor = " << c.pressure_floor << "\n";
    os << "dt_fixed = " << c.dt_fixed << "\n";
    os << "[output]\n";
    os << "output_interval = " << c.output_interval << "\n";
    os << "out_dir = " << c.out_dir << "\n";
    return os.str();
}

inline bool operator==(const ProblemConfig& a, const ProblemConfig& b) {
    return a.problem == b.problem && a.dim == b.dim && a.x_min == b.x_min &&
           a.x_max == b.x_max && a.y_min == b.y_min && a.y_max == b.y_max &&
           a.nx == b.nx && a.ny == b.ny && a.bc_x == b.bc_x && a.bc_y == b.bc_y &&
           a.gamma == b.gamma && a.c_v == b.c_v && a.mu == b.mu &&
           a.lambda_c == b.lambda_c && a.eta == b.eta && a.cfl == b.cfl &&
           a.t_final == b.t_final && a.order == b.order &&
           a.semi_implicit == b.semi_implicit && a.r_max == b.r_max &&
           a.output_interval == b.output_interval &&
           a.pressure_floor == b.pressure_floor && a.dt_fixed == b.dt_fixed &&
           a.out_dir == b.out_dir;
}

} // namespace simhd

#endif
