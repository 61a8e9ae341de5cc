// Closed-form asymptotic predictions: the Gaussian kernel psi0, the main exit
// tail constants e^{-lambda t}|f(q±)| psi0(x), the small-neighborhood constant
// e^{lambda C} psi0(y), deterministic transit times, and the conditional limit
// law (exponential rate and side weights).
//
// Predictions are asymptotic coefficients times the eps power; they are never
// clamped to [0,1].

#ifndef EXITTAILS_THEORY_HPP
#define EXITTAILS_THEORY_HPP

#include <map>
#include <string>

#include "exittails/linearizer.hpp"
#include "exittails/model.hpp"
#include "exittails/records.hpp"

namespace exittails {

enum class Quantity {
    tail_joint_side,
    tail_total,
    small_nbhd_tail,
    deterministic_transit,
    conditional_side_weight,
    conditional_overshoot_rate,
};

struct TheoryPrediction {
    Quantity quantity;
    double value = 0.0;
    std::map<std::string, double> inputs; // parameter echo
    bool boundary_alpha_warning = false;  // alpha <= 1 reported, not rejected
};

// psi0(x) = sqrt(lambda/pi) exp(-lambda (x/sigma0)^2) / sigma0.
double psi0(double x, double lambda, double sigma0);

// eps^{alpha-1} e^{-lambda t} |f(q_side)| psi0(x).
TheoryPrediction main_tail_prediction(const LinearizationMap& map,
                                      const VectorFieldModel& model,
                                      const NoiseLevel& noise, double x,
                                      double alpha, double t, Side side);

// Sum over both sides.
TheoryPrediction main_tail_total(const LinearizationMap& map,
                                 const VectorFieldModel& model,
                                 const NoiseLevel& noise, double x,
                                 double alpha, double t);

struct ConditionalLaw {
    double rate = 0.0;
    double weight_left = 0.0;
    double weight_right = 0.0;
};

ConditionalLaw conditional_limit_law(const LinearizationMap& map, double lambda);

// eps^{alpha-1} e^{lambda C} psi0(y), the per-side small-neighborhood constant.
TheoryPrediction small_nbhd_prediction(double y, double alpha, double C,
                                       double beta, const NoiseLevel& noise,
                                       double lambda, double sigma0, Side side);

// T_eps^side = (beta/lambda) log(1/eps) + (1/lambda) log |f(q_side)|.
double deterministic_transit(const LinearizationMap& map,
                             const VectorFieldModel& model,
                             const NoiseLevel& noise, double beta, Side side);

} // namespace exittails

#endif
