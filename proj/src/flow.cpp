#include "exittails/flow.hpp"

#include <algorithm>
#include <cmath>

#include "exittails/errors.hpp"

namespace exittails {

namespace detail {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output coefficients (Hairer & Wanner DOPRI5)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseSeg {
    double y0, y1, h;
    double r1, r2, r3, r4, r5;
    double eval(double theta) const {
        return r1 + theta * (r2 + (1 - theta) * (r3 + theta * (r4 + (1 - theta) * r5)));
    }
};

} // namespace

Dopri5Result integrate_dopri5(const ScalarFn& f, double t0, double y0,
                              double t_end, const Dopri5Options& opt) {
    Dopri5Result res;
    res.t = t0;
    res.y = y0;
    if (t_end <= t0) return res;

    double t = t0, y = y0;
    double k1 = f(y);
    double h = 1e-4 * (t_end - t0);
    if (h <= 0 || !std::isfinite(h)) h = 1e-6;

    const double tiny = 1e-15 * std::max(1.0, std::abs(t_end));
    while (t < t_end - tiny) {
        if (res.steps >= opt.max_steps)
            throw IntegratorError("dopri5: step limit exceeded");
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegratorError("dopri5: step-size underflow (stiffness?)");
        h = std::min(h, t_end - t);

        const double k2 = f(y + h * a21 * k1);
        const double k3 = f(y + h * (a31 * k1 + a32 * k2));
        const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 =
            f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double y1 =
            y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = f(y1);

        const double errv =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double sc =
            opt.abs_tol + opt.rel_tol * std::max(std::abs(y), std::abs(y1));
        const double err = std::abs(errv) / (sc > 0 ? sc : 1e-300);

        if (err <= 1.0) {
            ++res.steps;
            res.max_err = std::max(res.max_err, err);

            const bool out = opt.use_event && (y1 <= opt.event_lo || y1 >= opt.event_hi);
            if (out) {
                // build dense segment and bisect for the crossing time
                const double ydiff = y1 - y;
                const double bspl = h * k1 - ydiff;
                DenseSeg seg{y, y1, h, y, ydiff, bspl, ydiff - h * k7 - bspl,
                             h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 +
                                  d6 * k6 + d7 * k7)};
                const double target = (y1 >= opt.event_hi) ? opt.event_hi : opt.event_lo;
                double lo = 0.0, hi = 1.0;
                double flo = y - target;
                for (int i = 0; i < 90 && hi - lo > 1e-16; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = seg.eval(mid) - target;
                    if (flo * fm <= 0.0) {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                res.t = t + 0.5 * (lo + hi) * h;
                res.y = target;
                res.event_hit = true;
                return res;
            }

            t += h;
            y = y1;
            k1 = k7; // FSAL

            if (opt.min_magnitude > 0 && std::abs(y) < opt.min_magnitude) {
                res.t = t;
                res.y = y;
                res.magnitude_stop = true;
                return res;
            }
        }
        const double fac =
            0.9 * std::pow(1.0 / std::max(err, 1e-10), 0.2);
        h *= std::clamp(fac, 0.2, 5.0);
    }
    res.t = t_end;
    res.y = y;
    return res;
}

} // namespace detail

FlowResult flow_forward(const VectorFieldModel& model, double x0, double t,
                        double rel_tol) {
    if (t < 0) throw ParameterError("flow_forward: t must be nonnegative");
    detail::Dopri5Options opt;
    opt.rel_tol = std::max(rel_tol * 1e-2, 1e-14);
    opt.abs_tol = 1e-16;
    opt.use_event = true;
    opt.event_lo = model.q_minus;
    opt.event_hi = model.q_plus;
    const auto r = detail::integrate_dopri5(model.b, 0.0, x0, t, opt);
    return {r.y, r.t, r.steps, r.max_err};
}

FlowResult flow_backward(const VectorFieldModel& model, double x0, double t,
                         double rel_tol) {
    if (t < 0) throw ParameterError("flow_backward: t must be nonnegative");
    const auto& b = model.b;
    ScalarFn neg = [&b](double x) { return -b(x); };
    detail::Dopri5Options opt;
    opt.rel_tol = std::max(rel_tol * 1e-2, 1e-14);
    opt.abs_tol = 0.0; // pure relative control: the backward flow decays to 0
    opt.min_magnitude = 1e-14;
    const auto r = detail::integrate_dopri5(neg, 0.0, x0, t, opt);
    double x_end = r.y;
    if (r.magnitude_stop && r.t < t) {
        // below 1e-14 the drift is linear to machine precision
        x_end *= std::exp(-model.lambda * (t - r.t));
    }
    return {x_end, t, r.steps, r.max_err};
}

double deterministic_exit_time(const VectorFieldModel& model, double x,
                               double rel_tol) {
    if (x == 0.0)
        throw ParameterError("deterministic_exit_time: origin never exits");
    if (x <= model.q_minus || x >= model.q_plus)
        return 0.0;
    detail::Dopri5Options opt;
    opt.rel_tol = std::max(rel_tol, 1e-14);
    opt.abs_tol = 1e-300; // |x| grows away from 0; relative control suffices
    opt.use_event = true;
    opt.event_lo = model.q_minus;
    opt.event_hi = model.q_plus;
    // T(x) <= (1/lambda) log(span/|f(x)|) + O(1); 1e4/lambda covers any
    // representable starting point
    const double t_cap = 1e4 / model.lambda;
    const auto r = detail::integrate_dopri5(model.b, 0.0, x, t_cap, opt);
    if (!r.event_hit)
        throw IntegratorError("deterministic_exit_time: no boundary crossing "
                              "before t=1e4/lambda (invalid model?)");
    return r.t;
}

} // namespace exittails
