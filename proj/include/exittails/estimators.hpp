// Statistical layer: Wilson-interval tail estimates, log-log exponent
// regression, one-sample Kolmogorov-Smirnov exponentiality test, binomial
// side-split test, and the exponential-martingale exceedance diagnostic.

#ifndef EXITTAILS_ESTIMATORS_HPP
#define EXITTAILS_ESTIMATORS_HPP

#include <string>
#include <utility>
#include <vector>

#include "exittails/records.hpp"

namespace exittails {

struct TailEstimate {
    long n = 0;
    long survivors = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0; // 95% Wilson interval
    double ci_hi = 0.0;
    std::string threshold_label;
};

TailEstimate tail_estimate(long survivors, long n, std::string threshold_label);
TailEstimate tail_estimate(const std::vector<ExitRecord>& records,
                           std::size_t threshold_index,
                           std::string threshold_label);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
};

// Weighted least squares of log p_hat on log eps; weights are inverse delta-
// method variances (1-p)/(n p). Slope estimates alpha-1. Requires >= 3
// distinct eps and all p_hat > 0.
FitResult exponent_regression(const std::vector<std::pair<double, TailEstimate>>& pairs);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0; // asymptotic Kolmogorov distribution
};

// One-sample KS against CDF 1 - exp(-rate s); sample size >= 50 enforced.
KsResult ks_exponential(std::vector<double> overshoots, double rate);

struct SideSplitResult {
    double z_score = 0.0;
    bool pass = false; // |z| <= 1.959964
    long n_right = 0;
    long n = 0;
};

SideSplitResult side_split_test(long n_right, long n_conditioned,
                                double weight_right);

struct MartingaleRow {
    double N = 0.0;
    double exceedance = 0.0;   // empirical P(sup |U| >= N)
    double fitted_bound = 0.0; // c1 exp(-c2 N^2)
};

struct MartingaleDiagnostic {
    std::vector<MartingaleRow> rows;
    double c1 = 0.0;
    double c2 = 0.0;
    bool log_concave_in_N2 = false; // shape diagnostic only
};

MartingaleDiagnostic martingale_diagnostic(const std::vector<double>& sups,
                                           const std::vector<double>& N_grid);

} // namespace exittails

#endif
