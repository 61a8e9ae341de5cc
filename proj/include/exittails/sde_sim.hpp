// Euler-Maruyama Monte Carlo engine for the nonlinear process X, for the
// linearized-coordinate process Y (two interchangeable backends), and for the
// coupled pair (Y,Z) driven by the same noise. Batches are deterministic:
// per-path streams derive from (master_seed, path_index) and aggregation uses
// integer counters in path order, so output is independent of parallelism.

#ifndef EXITTAILS_SDE_SIM_HPP
#define EXITTAILS_SDE_SIM_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "exittails/linearizer.hpp"
#include "exittails/model.hpp"
#include "exittails/records.hpp"

namespace exittails {

struct SimOptions {
    double dt = 0.0;                    // 0 -> 1e-3/lambda
    std::vector<Threshold> thresholds;  // survival flags recorded per threshold
    double max_time = 0.0;              // censoring horizon (required > thresholds)
    bool track_martingale = false;      // record sup |U(t)| in the record
};

// X <- X + b(X) dt + eps sigma(X) sqrt(dt) xi; exit time by linear
// interpolation of the overshooting step. NaN states throw NumericPathError.
ExitRecord simulate_exit_X(const VectorFieldModel& model, const NoiseLevel& noise,
                           double x0, std::uint64_t seed, const SimOptions& opt,
                           std::uint64_t path_index = 0);

enum class YBackend {
    map_x,  // simulate X and map through eval_f each step
    direct, // Euler-Maruyama on the Y equation with table-derived coefficients
};

// Y process on [-exit_level, exit_level].
ExitRecord simulate_exit_Y(const VectorFieldModel& model,
                           const LinearizationMap& map, const NoiseLevel& noise,
                           double y0, std::uint64_t seed, const SimOptions& opt,
                           YBackend backend, double exit_level,
                           std::uint64_t path_index = 0);

// Y (direct backend) and Z advanced by the same normal sequence; sup |Y-Z|
// tracked up to horizon ^ first time |Y| = 2 eps^beta.
CouplingRecord simulate_coupled_YZ(const VectorFieldModel& model,
                                   const LinearizationMap& map,
                                   const NoiseLevel& noise, double y0,
                                   std::uint64_t seed, double dt, double horizon,
                                   double beta, double beta_prime, double alpha,
                                   std::uint64_t path_index = 0);

struct BatchSummary {
    long n_paths = 0;
    std::vector<Threshold> thresholds;
    std::vector<long> survivors;        // per threshold
    std::vector<long> survivors_right;  // exited right after the threshold
    std::vector<long> survivors_left;
    long exited_right = 0;
    long exited_left = 0;
    long censored = 0;
};

// Runs fn for path_index = 0..n_paths-1 with derived per-path seeds, in
// parallel, and returns records in path order. Worker exceptions abort the
// batch and rethrow.
std::vector<ExitRecord>
run_batch(long n_paths, std::uint64_t master_seed, int parallelism,
          const std::function<ExitRecord(std::uint64_t path_index,
                                         std::uint64_t seed)>& fn);

std::vector<CouplingRecord>
run_coupling_batch(long n_paths, std::uint64_t master_seed, int parallelism,
                   const std::function<CouplingRecord(std::uint64_t, std::uint64_t)>& fn);

BatchSummary summarize(const std::vector<ExitRecord>& records,
                       const std::vector<Threshold>& thresholds);

double default_max_time(double alpha, double lambda, double epsilon);

} // namespace exittails

#endif
