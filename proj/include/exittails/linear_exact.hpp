// The exactly solvable auxiliary process
//     dZ(t) = lambda Z(t) dt + eps sigma0 dW(t),   Z(0) = eps z,
// with exit level eps^beta (1+delta_eps). Exact Gaussian transitions make this
// process the ground truth for the Monte Carlo engine: closed-form marginals,
// the tail constant 2 e^{lambda C} psi0(z), the scale-function side oracle and
// the conditional equidistribution experiment all live here.

#ifndef EXITTAILS_LINEAR_EXACT_HPP
#define EXITTAILS_LINEAR_EXACT_HPP

#include <cstdint>
#include <vector>

#include "exittails/records.hpp"

namespace exittails {

struct LinearModel {
    double lambda = 1.0;
    double sigma0 = 1.0;
    double epsilon = 0.05;
    double z = 0.0;          // initial point is eps*z
    double beta = 0.75;
    double delta_eps = 0.0;  // boundary inflation
    double alpha = 1.5;
    double C = 0.0;
    double c_eps = 0.0;      // subpolynomial correction in t_eps

    // default c(eps) = 1/log(1/eps)
    static LinearModel with_default_c(double lambda, double sigma0, double eps,
                                      double z, double beta, double alpha,
                                      double C);

    double level() const; // eps^beta (1+delta_eps)
};

struct GaussianSpec {
    double mean = 0.0;
    double variance = 0.0;
    bool degenerate = false; // variance at the floor (t = 0)
};

// t_eps = ((alpha-beta)/lambda) log(1/eps) - C + c(eps); throws ParameterError
// if nonpositive.
double t_eps(const LinearModel& m);

// Law of Z(t): mean eps e^{lambda t} z,
// variance eps^2 e^{2 lambda t} sigma0^2 (1-e^{-2 lambda t})/(2 lambda).
GaussianSpec exact_marginal(const LinearModel& m, double t);

// Simulates Z by exact conditional Gaussian steps of size dt until
// |Z| >= level(); crossing time refined by linear interpolation in log|Z|.
// Censors (not an error) at 10*t_eps.
ExitRecord sample_exit(const LinearModel& m, std::uint64_t seed, double dt,
                       const std::vector<Threshold>& thresholds = {},
                       double max_time = -1.0);

// Lemma-style tail constant: eps^{alpha-1} * 2 e^{lambda C} * psi0(z).
double tail_theory(const LinearModel& m);

// P(hit +level before -level) from the scale function
// S(x) = int_0^x exp(-lambda u^2/(eps^2 sigma0^2)) du, by adaptive quadrature.
double exit_side_oracle(const LinearModel& m, double level);

struct EquidistResult {
    long n_paths = 0;
    long n_conditioned = 0;
    std::vector<double> bin_freq;     // relative to all conditioned paths
    std::vector<double> bin_deviation; // |freq*bins/(2(1-delta)) - 1/2| * 2
    double max_deviation = 0.0;
    double test_functional = 0.0;     // eps^{-(1-beta)} mean h(Z(t_eps)/eps)
};

// Simulates to t_eps, keeps paths that never exited, histograms Z(t_eps)/eps^beta
// over [-(1-delta), 1-delta]. h is the standard Gaussian density, so the
// functional targets 1/2. Throws DataError below 100 conditioned samples.
EquidistResult equidistribution_experiment(const LinearModel& m, long n_paths,
                                           int bins, double delta,
                                           std::uint64_t master_seed, double dt,
                                           int parallelism = 1);

} // namespace exittails

#endif
