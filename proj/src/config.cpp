#include "exittails/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "exittails/errors.hpp"
#include "exittails/strfmt.hpp"

namespace exittails {

const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::tail_X: return "tail_X";
        case ExperimentKind::tail_Y: return "tail_Y";
        case ExperimentKind::linear_tail: return "linear_tail";
        case ExperimentKind::equidist: return "equidist";
        case ExperimentKind::coupling: return "coupling";
        case ExperimentKind::conditional_law: return "conditional_law";
        case ExperimentKind::predict: return "predict";
        case ExperimentKind::linearize: return "linearize";
        case ExperimentKind::validate: return "validate";
    }
    return "?";
}

ExperimentKind kind_from_name(const std::string& s) {
    for (auto k : {ExperimentKind::tail_X, ExperimentKind::tail_Y,
                   ExperimentKind::linear_tail, ExperimentKind::equidist,
                   ExperimentKind::coupling, ExperimentKind::conditional_law,
                   ExperimentKind::predict, ExperimentKind::linearize,
                   ExperimentKind::validate})
        if (s == kind_name(k)) return k;
    throw ConfigError("unknown experiment kind: '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key, int line) {
    double out;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto r = std::from_chars(b, e, out);
    if (r.ec != std::errc() || r.ptr != e)
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "': expected a number, got '" + v + "'");
    return out;
}

std::vector<double> to_list(const std::string& v, const std::string& key, int line) {
    std::vector<double> out;
    std::istringstream is(v);
    std::string tok;
    while (is >> tok) out.push_back(to_double(tok, key, line));
    if (out.empty())
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "': expected at least one number");
    return out;
}

std::string list_str(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += format_double(v[i]);
    }
    return s;
}

const char* start_mode_name(StartMode m) {
    switch (m) {
        case StartMode::scaled: return "scaled";
        case StartMode::absolute: return "absolute";
        case StartMode::g_eps_beta: return "g_eps_beta";
    }
    return "?";
}

} // namespace

std::string ExperimentConfig::serialize() const {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "kind = " << kind_name(kind) << '\n';
    os << "name = " << name << '\n';
    os << "model = " << model << '\n';
    if (!poly_coeffs.empty()) os << "poly_coeffs = " << list_str(poly_coeffs) << '\n';
    os << "lambda = " << format_double(lambda) << '\n';
    os << "sigma = " << sigma << '\n';
    os << "sigma_c0 = " << format_double(sigma_c0) << '\n';
    os << "sigma_c1 = " << format_double(sigma_c1) << '\n';
    os << "q_minus = " << format_double(q_minus) << '\n';
    os << "q_plus = " << format_double(q_plus) << '\n';
    os << "epsilon = " << list_str(epsilon) << '\n';
    os << "alpha = " << list_str(alpha) << '\n';
    os << "t = " << list_str(t_shift) << '\n';
    os << "C = " << list_str(C) << '\n';
    os << "beta = " << format_double(beta) << '\n';
    os << "x0 = " << format_double(x0) << '\n';
    os << "x0_mode = " << start_mode_name(x0_mode) << '\n';
    os << "y0 = " << format_double(y0) << '\n';
    os << "z = " << format_double(z) << '\n';
    os << "delta = " << format_double(delta) << '\n';
    os << "bins = " << bins << '\n';
    os << "delta_eps = " << format_double(delta_eps) << '\n';
    os << "c_eps = " << (c_eps_auto ? std::string("auto") : format_double(c_eps)) << '\n';
    os << "beta_prime = " << format_double(beta_prime) << '\n';
    os << "horizon_L = " << format_double(horizon_L) << '\n';
    os << "n_paths = " << n_paths << '\n';
    os << "dt = " << format_double(dt) << '\n';
    os << "master_seed = " << format_u64(master_seed) << '\n';
    os << "parallelism = " << parallelism << '\n';
    os << "backend = " << backend << '\n';
    os << "report_tolerance = " << format_double(report_tolerance) << '\n';
    os << "grid_points = " << grid_points << '\n';
    return os.str();
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    int sections = 0;
    bool saw_kind = false;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s != "[experiment]")
                throw ConfigError("line " + std::to_string(line) +
                                  ": unknown section '" + s + "'");
            if (++sections > 1)
                throw ConfigError("line " + std::to_string(line) +
                                  ": multiple [experiment] sections");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) +
                              ": expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (val.empty())
            throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                              "' has no value");

        if (key == "kind") {
            c.kind = kind_from_name(val);
            saw_kind = true;
        } else if (key == "name") {
            c.name = val;
        } else if (key == "model") {
            c.model = val;
        } else if (key == "poly_coeffs") {
            c.poly_coeffs = to_list(val, key, line);
        } else if (key == "lambda") {
            c.lambda = to_double(val, key, line);
        } else if (key == "sigma") {
            if (val != "constant" && val != "affine")
                throw ConfigError("line " + std::to_string(line) +
                                  ": sigma must be 'constant' or 'affine'");
            c.sigma = val;
        } else if (key == "sigma_c0") {
            c.sigma_c0 = to_double(val, key, line);
        } else if (key == "sigma_c1") {
            c.sigma_c1 = to_double(val, key, line);
        } else if (key == "q_minus") {
            c.q_minus = to_double(val, key, line);
        } else if (key == "q_plus") {
            c.q_plus = to_double(val, key, line);
        } else if (key == "epsilon") {
            c.epsilon = to_list(val, key, line);
        } else if (key == "alpha") {
            c.alpha = to_list(val, key, line);
        } else if (key == "t") {
            c.t_shift = to_list(val, key, line);
        } else if (key == "C") {
            c.C = to_list(val, key, line);
        } else if (key == "beta") {
            c.beta = to_double(val, key, line);
        } else if (key == "x0") {
            c.x0 = to_double(val, key, line);
        } else if (key == "x0_mode") {
            if (val == "scaled") c.x0_mode = StartMode::scaled;
            else if (val == "absolute") c.x0_mode = StartMode::absolute;
            else if (val == "g_eps_beta") c.x0_mode = StartMode::g_eps_beta;
            else
                throw ConfigError("line " + std::to_string(line) +
                                  ": x0_mode must be scaled|absolute|g_eps_beta");
        } else if (key == "y0") {
            c.y0 = to_double(val, key, line);
        } else if (key == "z") {
            c.z = to_double(val, key, line);
        } else if (key == "delta") {
            c.delta = to_double(val, key, line);
        } else if (key == "bins") {
            c.bins = static_cast<int>(to_double(val, key, line));
        } else if (key == "delta_eps") {
            c.delta_eps = to_double(val, key, line);
        } else if (key == "c_eps") {
            if (val == "auto") {
                c.c_eps_auto = true;
                c.c_eps = 0.0;
            } else {
                c.c_eps_auto = false;
                c.c_eps = to_double(val, key, line);
            }
        } else if (key == "beta_prime") {
            c.beta_prime = to_double(val, key, line);
        } else if (key == "horizon_L") {
            c.horizon_L = to_double(val, key, line);
        } else if (key == "n_paths") {
            c.n_paths = static_cast<long>(to_double(val, key, line));
        } else if (key == "dt") {
            c.dt = to_double(val, key, line);
        } else if (key == "master_seed") {
            std::uint64_t out = 0;
            auto r = std::from_chars(val.data(), val.data() + val.size(), out);
            if (r.ec != std::errc() || r.ptr != val.data() + val.size())
                throw ConfigError("line " + std::to_string(line) +
                                  ": master_seed must be an unsigned integer");
            c.master_seed = out;
        } else if (key == "parallelism") {
            c.parallelism = static_cast<int>(to_double(val, key, line));
        } else if (key == "backend") {
            if (val != "map" && val != "direct")
                throw ConfigError("line " + std::to_string(line) +
                                  ": backend must be 'map' or 'direct'");
            c.backend = val;
        } else if (key == "report_tolerance") {
            c.report_tolerance = to_double(val, key, line);
        } else if (key == "grid_points") {
            c.grid_points = static_cast<int>(to_double(val, key, line));
        } else {
            throw ConfigError("line " + std::to_string(line) +
                              ": unknown key '" + key + "'");
        }
    }
    if (!saw_kind) throw ConfigError("config is missing required key 'kind'");
    if (c.n_paths < 1) throw ConfigError("n_paths must be >= 1");
    if (c.parallelism < 1) throw ConfigError("parallelism must be >= 1");
    for (double e : c.epsilon)
        if (!(e > 0 && e < 1)) throw ConfigError("epsilon values must be in (0,1)");
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

} // namespace exittails
