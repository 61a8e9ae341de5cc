#include "exittails/theory.hpp"

#include <cmath>

#include "exittails/errors.hpp"

namespace exittails {

double psi0(double x, double lambda, double sigma0) {
    const double r = x / sigma0;
    return std::sqrt(lambda / M_PI) * std::exp(-lambda * r * r) / sigma0;
}

TheoryPrediction main_tail_prediction(const LinearizationMap& map,
                                      const VectorFieldModel& model,
                                      const NoiseLevel& noise, double x,
                                      double alpha, double t, Side side) {
    if (std::abs(x) > noise.derived_K)
        throw ParameterError("main_tail_prediction: |x| exceeds K(eps)");
    const double fq = (side == Side::right) ? map.f_qplus() : map.f_qminus();
    const double sigma0 = model.sigma(0.0);
    TheoryPrediction p;
    p.quantity = Quantity::tail_joint_side;
    p.value = std::pow(noise.epsilon, alpha - 1.0) *
              std::exp(-model.lambda * t) * std::abs(fq) *
              psi0(x, model.lambda, sigma0);
    p.boundary_alpha_warning = !(alpha > 1.0);
    p.inputs = {{"epsilon", noise.epsilon}, {"alpha", alpha}, {"t", t},
                {"x", x},                   {"f_q", fq}};
    return p;
}

TheoryPrediction main_tail_total(const LinearizationMap& map,
                                 const VectorFieldModel& model,
                                 const NoiseLevel& noise, double x,
                                 double alpha, double t) {
    auto l = main_tail_prediction(map, model, noise, x, alpha, t, Side::left);
    auto r = main_tail_prediction(map, model, noise, x, alpha, t, Side::right);
    TheoryPrediction p;
    p.quantity = Quantity::tail_total;
    p.value = l.value + r.value;
    p.boundary_alpha_warning = l.boundary_alpha_warning;
    p.inputs = {{"epsilon", noise.epsilon}, {"alpha", alpha}, {"t", t}, {"x", x}};
    return p;
}

ConditionalLaw conditional_limit_law(const LinearizationMap& map, double lambda) {
    const double fm = std::abs(map.f_qminus());
    const double fp = std::abs(map.f_qplus());
    return {lambda, fm / (fm + fp), fp / (fm + fp)};
}

TheoryPrediction small_nbhd_prediction(double y, double alpha, double C,
                                       double beta, const NoiseLevel& noise,
                                       double lambda, double sigma0, Side side) {
    (void)side; // the per-side constant is symmetric
    if (!(beta > 0 && beta < 1))
        throw ParameterError("small_nbhd_prediction: beta must be in (0,1)");
    TheoryPrediction p;
    p.quantity = Quantity::small_nbhd_tail;
    p.value = std::pow(noise.epsilon, alpha - 1.0) * std::exp(lambda * C) *
              psi0(y, lambda, sigma0);
    p.boundary_alpha_warning = !(alpha > 1.0);
    p.inputs = {{"epsilon", noise.epsilon}, {"alpha", alpha}, {"C", C},
                {"beta", beta},             {"y", y}};
    return p;
}

double deterministic_transit(const LinearizationMap& map,
                             const VectorFieldModel& model,
                             const NoiseLevel& noise, double beta, Side side) {
    const double fq = (side == Side::right) ? map.f_qplus() : map.f_qminus();
    const double level = std::pow(noise.epsilon, beta);
    if (!(level < std::min(std::abs(map.f_qminus()), map.f_qplus())))
        throw ParameterError("deterministic_transit: eps^beta not inside f(I)");
    return beta / model.lambda * std::log(1.0 / noise.epsilon) +
           std::log(std::abs(fq)) / model.lambda;
}

} // namespace exittails
