#ifndef EXITTAILS_QUADRATURE_HPP
#define EXITTAILS_QUADRATURE_HPP

#include <functional>

namespace exittails {

// Adaptive Gauss-Kronrod (7,15) quadrature of f over [a,b].
// Subdivides until the local Kronrod error estimate meets the mixed
// tolerance rel_tol*|I| + abs_tol. Throws QuadratureError on non-convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 0.0,
                 int max_depth = 60);

} // namespace exittails

#endif
