#include "exittails/model.hpp"

#include <cmath>
#include <sstream>

#include "exittails/errors.hpp"

namespace exittails {

namespace {

double eval_checked(const ScalarFn& fn, double x, const char* what) {
    double v;
    try {
        v = fn(x);
    } catch (const std::exception& e) {
        std::ostringstream os;
        os << "evaluation of " << what << " failed at x=" << x << ": " << e.what();
        throw InvalidModelError(os.str());
    }
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << what << " is not finite at x=" << x;
        throw InvalidModelError(os.str());
    }
    return v;
}

// Locates a zero of b inside [lo,hi] given b(lo)*b(hi) <= 0.
double bisect_zero(const ScalarFn& b, double lo, double hi) {
    double flo = b(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1 + std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = b(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

ValidationReport validate_model(const VectorFieldModel& m, int grid_points,
                                double tol) {
    if (grid_points < 100) throw ParameterError("validate_model: grid_points < 100");
    if (tol <= 0) throw ParameterError("validate_model: tol must be positive");
    if (!(m.q_minus < 0.0 && 0.0 < m.q_plus))
        throw InvalidModelError("interval must satisfy q_minus < 0 < q_plus");

    ValidationReport rep;

    const double b0 = eval_checked(m.b, 0.0, "b");
    rep.checks.push_back({"b(0)=0", std::abs(b0) <= tol, b0, ""});

    const double h = 1e-5 * std::min(-m.q_minus, m.q_plus);
    const double lam_fd = effective_lambda(m, h);
    const bool lam_ok = m.lambda > 0 &&
                        std::abs(lam_fd - m.lambda) <= 1e-3 * std::abs(m.lambda);
    rep.checks.push_back({"b'(0)=lambda>0", lam_ok, lam_fd, ""});

    // unique repelling zero: sign(b(x)) = sign(x) on a grid away from 0,
    // refined by bisection when a sign change is found
    bool sign_ok = true;
    std::string msg;
    double first_bad = 0.0;
    double prev_x = m.q_minus;
    double prev_b = eval_checked(m.b, prev_x, "b");
    for (int i = 1; i <= grid_points; ++i) {
        const double x = m.q_minus + (m.q_plus - m.q_minus) * i / grid_points;
        const double bx = eval_checked(m.b, x, "b");
        if (std::abs(x) > 10 * tol && bx * x <= 0.0 && sign_ok) {
            sign_ok = false;
            first_bad = x;
        }
        // a sign change not bracketing the origin means another zero
        if (sign_ok && prev_b * bx < 0.0 && !(prev_x <= 0.0 && x >= 0.0)) {
            const double zero = bisect_zero(m.b, prev_x, x);
            if (std::abs(zero) > 10 * tol) {
                sign_ok = false;
                first_bad = zero;
            }
        }
        prev_x = x;
        prev_b = bx;
    }
    if (!sign_ok) {
        std::ostringstream os;
        os << "b has a zero or wrong sign near x=" << first_bad;
        msg = os.str();
    }
    rep.checks.push_back({"no other zero", sign_ok, first_bad, msg});

    const double s0 = eval_checked(m.sigma, 0.0, "sigma");
    rep.checks.push_back({"sigma(0)>0", s0 > 0.0, s0, ""});

    return rep;
}

double effective_lambda(const VectorFieldModel& m, double h) {
    if (h <= 0 || h > 1e-4 * std::min(-m.q_minus, m.q_plus))
        throw ParameterError("effective_lambda: h out of range");
    const double bp = eval_checked(m.b, h, "b");
    const double bm = eval_checked(m.b, -h, "b");
    return (bp - bm) / (2.0 * h);
}

ScalarFn make_sigma(const std::string& kind, double c0, double c1) {
    if (kind == "constant") {
        if (c0 <= 0) throw InvalidModelError("constant sigma must be positive");
        return [c0](double) { return c0; };
    }
    if (kind == "affine") {
        return [c0, c1](double x) { return std::max(c0 + c1 * x, 1e-6); };
    }
    throw InvalidModelError("unknown sigma kind: " + kind);
}

VectorFieldModel make_model(const std::string& name, double lambda,
                            double q_minus, double q_plus,
                            const std::vector<double>& poly_coeffs) {
    VectorFieldModel m;
    m.q_minus = q_minus;
    m.q_plus = q_plus;
    m.name = name;
    m.sigma = make_sigma("constant", 1.0);
    if (name == "linear") {
        m.lambda = lambda;
        m.b = [lambda](double x) { return lambda * x; };
        m.analytic_f = [](double x) { return x; };
    } else if (name == "cubic") {
        m.lambda = 1.0;
        m.b = [](double x) { return x - x * x * x; };
        m.analytic_f = [](double x) { return x / std::sqrt(1.0 - x * x); };
    } else if (name == "sine") {
        m.lambda = 1.0;
        m.b = [](double x) { return std::sin(x); };
        m.analytic_f = [](double x) { return 2.0 * std::tan(0.5 * x); };
    } else if (name == "poly") {
        // b(x) = sum_k coeffs[k] x^{k+1}; coeffs[0] is lambda
        if (poly_coeffs.empty() || poly_coeffs[0] <= 0)
            throw InvalidModelError("poly model needs coefficients with coeffs[0]=lambda>0");
        m.lambda = poly_coeffs[0];
        auto cs = poly_coeffs;
        m.b = [cs](double x) {
            double acc = 0.0;
            for (std::size_t k = cs.size(); k-- > 0;) acc = (acc + cs[k]) * x;
            return acc;
        };
    } else {
        throw InvalidModelError("unknown model: " + name);
    }
    return m;
}

} // namespace exittails
