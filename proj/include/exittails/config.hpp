// Experiment declarations: a flat key = value text format with a single
// [experiment] section. parse(serialize(c)) == c for every config c.

#ifndef EXITTAILS_CONFIG_HPP
#define EXITTAILS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace exittails {

enum class ExperimentKind {
    tail_X,
    tail_Y,
    linear_tail,
    equidist,
    coupling,
    conditional_law,
    predict,
    linearize,
    validate,
};

const char* kind_name(ExperimentKind k);
ExperimentKind kind_from_name(const std::string& s);

enum class StartMode { scaled, absolute, g_eps_beta };

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::validate;
    std::string name = "experiment";

    // model
    std::string model = "cubic";
    std::vector<double> poly_coeffs;
    double lambda = 1.0;
    std::string sigma = "constant"; // constant | affine
    double sigma_c0 = 1.0;
    double sigma_c1 = 0.0;
    double q_minus = -0.5;
    double q_plus = 0.5;

    // experiment parameters
    std::vector<double> epsilon{0.05};
    std::vector<double> alpha{1.5};
    std::vector<double> t_shift{0.0}; // Theorem-style time shift t
    std::vector<double> C{0.0};       // small-neighborhood constant C
    double beta = 0.75;
    double x0 = 0.0;                  // start in units of eps (see start mode)
    StartMode x0_mode = StartMode::scaled;
    double y0 = 0.0;                  // Y start in units of eps
    double z = 0.0;                   // Z start in units of eps
    double delta = 0.1;               // equidistribution band parameter
    int bins = 10;
    double delta_eps = 0.0;
    bool c_eps_auto = false;          // true: c(eps) = 1/log(1/eps)
    double c_eps = 0.0;
    double beta_prime = 0.6;
    double horizon_L = 1.0;           // L(eps) in t'_eps for coupling runs

    // execution
    long n_paths = 1000;
    double dt = 0.0;                  // 0 -> 1e-3/lambda
    std::uint64_t master_seed = 1;
    int parallelism = 1;
    std::string backend = "map";      // map | direct (tail_Y)
    double report_tolerance = 0.2;    // relative band used by report
    int grid_points = 1025;           // linearize

    std::string serialize() const;
    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

} // namespace exittails

#endif
