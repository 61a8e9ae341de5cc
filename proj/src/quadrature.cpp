#include "exittails/quadrature.hpp"

#include <cmath>

#include "exittails/errors.hpp"

namespace exittails {

namespace {

// Gauss-Kronrod (7,15) nodes/weights on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct GkResult {
    double integral;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resg = 0.0, resk = 0.0;
    const double fc = f(c);
    resk = kWgk[7] * fc;
    resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double ik = resk * h;
    const double ig = resg * h;
    return {ik, std::abs(ik - ig)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol_abs, int depth, int max_depth) {
    const auto r = gk15(f, a, b);
    if (r.error <= tol_abs || depth >= max_depth) {
        if (depth >= max_depth && r.error > 1e3 * tol_abs)
            throw QuadratureError("adaptive quadrature did not converge");
        return r.integral;
    }
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol_abs, depth + 1, max_depth) +
           adapt(f, m, b, 0.5 * tol_abs, depth + 1, max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const auto first = gk15(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::abs(first.integral));
    if (first.error <= tol) return first.integral;
    return adapt(f, a, b, std::max(tol, 1e-300), 0, max_depth);
}

} // namespace exittails
