// The conjugating diffeomorphism f(x) = lim_{t->inf} e^{lambda t} S^{-t} x,
// its inverse g, and the boundary images f(q±).
//
// f is evaluated by following the backward flow with checkpoint times doubling
// until successive values of e^{lambda t} S^{-t} x agree to tolerance. The map
// is tabulated at Chebyshev-Lobatto nodes; node derivatives come from the
// conjugation identity f'(x) = lambda f(x) / b(x), so the stored cubic Hermite
// interpolant has near-exact slopes. Monotonicity is enforced by a
// Fritsch-Carlson clamp (a no-op on resolved grids).

#ifndef EXITTAILS_LINEARIZER_HPP
#define EXITTAILS_LINEARIZER_HPP

#include <vector>

#include "exittails/model.hpp"

namespace exittails {

class LinearizationMap {
  public:
    LinearizationMap(std::vector<double> x, std::vector<double> fx,
                     std::vector<double> dfx, double lambda, double accuracy);

    double eval_f(double x) const;        // monotone cubic Hermite interpolation
    double eval_f_prime(double x) const;  // derivative of the interpolant
    double eval_g(double y) const;        // inverse by bracketed Newton

    double f_qminus() const { return fx_.front(); }
    double f_qplus() const { return fx_.back(); }
    double q_minus() const { return x_.front(); }
    double q_plus() const { return x_.back(); }
    double lambda() const { return lambda_; }
    double accuracy() const { return accuracy_; }

    const std::vector<double>& grid_x() const { return x_; }
    const std::vector<double>& grid_f() const { return fx_; }

  private:
    std::vector<double> x_, fx_, dfx_;
    double lambda_;
    double accuracy_;
    std::size_t locate(double x) const;
};

// f at a single point, |error| <= tol. Throws ConvergenceError if the
// checkpoint sequence has not settled by t = 50/lambda.
double linearize_point(const VectorFieldModel& model, double x,
                       double tol = 1e-10);

// Tabulates f over grid_points Chebyshev-Lobatto nodes on [q_minus, q_plus];
// the accuracy field is certified by half-grid comparison plus direct
// midpoint checks.
LinearizationMap build_map(const VectorFieldModel& model, int grid_points = 1025,
                           double tol = 1e-9);

// |f(S^t x) - e^{lambda t} f(x)|.
double conjugation_residual(const LinearizationMap& map,
                            const VectorFieldModel& model, double x, double t);

} // namespace exittails

#endif
