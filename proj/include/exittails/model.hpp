// Problem instances: drift b with a unique repelling zero at the origin,
// diffusion coefficient sigma, interval [q_minus, q_plus], expansion rate
// lambda = b'(0), and the noise level epsilon with its subpolynomial companions.

#ifndef EXITTAILS_MODEL_HPP
#define EXITTAILS_MODEL_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace exittails {

using ScalarFn = std::function<double(double)>;

struct VectorFieldModel {
    ScalarFn b;
    ScalarFn sigma;
    double q_minus = -1.0;
    double q_plus = 1.0;
    double lambda = 1.0;
    std::optional<ScalarFn> analytic_f; // known closed-form linearization, for tests
    std::string name = "custom";
};

// epsilon together with the default subpolynomial choices
// K(eps) = log(1/eps) and c(eps) = 1/log(1/eps); both overridable.
struct NoiseLevel {
    double epsilon;
    double derived_K;
    double derived_c;

    static NoiseLevel of(double eps) {
        const double l = std::log(1.0 / eps);
        return NoiseLevel{eps, l, 1.0 / l};
    }
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool accepted() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Checks b(0)=0, b'(0)=lambda>0, no other zero of b in [q_minus,q_plus]
// (uniform grid plus sign-change bisection), and sigma(0)>0.
ValidationReport validate_model(const VectorFieldModel& candidate,
                                int grid_points = 1000, double tol = 1e-9);

// Central difference (b(h)-b(-h))/(2h).
double effective_lambda(const VectorFieldModel& model, double h);

// Built-in registry: linear, cubic (x - x^3), sine (sin x),
// poly (sum coeffs[k] x^{k+1}); sigma constant c0 or affine c0+c1*x clipped
// positive. analytic_f is attached where a closed form is known.
VectorFieldModel make_model(const std::string& name, double lambda,
                            double q_minus, double q_plus,
                            const std::vector<double>& poly_coeffs = {});

ScalarFn make_sigma(const std::string& kind, double c0, double c1 = 0.0);

} // namespace exittails

#endif
