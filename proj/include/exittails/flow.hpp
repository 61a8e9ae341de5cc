// Deterministic dynamics of xdot = b(x): the flow S^t forward and backward in
// time and the deterministic exit time T(x) from [q_minus, q_plus].
//
// Integrator: adaptive Dormand-Prince 5(4) with per-step error control and
// quartic dense output; boundary crossings are located by bisection on the
// dense output polynomial.

#ifndef EXITTAILS_FLOW_HPP
#define EXITTAILS_FLOW_HPP

#include "exittails/model.hpp"

namespace exittails {

struct FlowResult {
    double x_end = 0.0;
    double t_elapsed = 0.0;
    long steps_taken = 0;
    double max_local_error_estimate = 0.0;
};

// S^t x0, stopping early if the boundary of [q_minus,q_plus] is reached.
FlowResult flow_forward(const VectorFieldModel& model, double x0, double t,
                        double rel_tol = 1e-10);

// S^{-t} x0 (integrates ydot = -b(y)). Backward flow contracts to the origin;
// integration stops once |x| < 1e-14 and the remaining decay is applied
// analytically at first order.
FlowResult flow_backward(const VectorFieldModel& model, double x0, double t,
                         double rel_tol = 1e-10);

// First time S^t x reaches {q_minus, q_plus}; throws ParameterError at x=0.
double deterministic_exit_time(const VectorFieldModel& model, double x,
                               double rel_tol = 1e-12);

namespace detail {

// One Dormand-Prince 5(4) integration with optional boundary event and
// optional small-magnitude stop. Used by the flow API and the linearizer.
struct Dopri5Options {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;        // set to 0 for pure relative control
    bool use_event = false;        // stop when leaving (event_lo, event_hi)
    double event_lo = 0.0;
    double event_hi = 0.0;
    double min_magnitude = 0.0;    // stop once |y| drops below this (0 = off)
    long max_steps = 10'000'000;
};

struct Dopri5Result {
    double t = 0.0;
    double y = 0.0;
    long steps = 0;
    double max_err = 0.0;          // max accepted per-step error ratio
    bool event_hit = false;
    bool magnitude_stop = false;
};

Dopri5Result integrate_dopri5(const ScalarFn& f, double t0, double y0,
                              double t_end, const Dopri5Options& opt);

} // namespace detail

} // namespace exittails

#endif
