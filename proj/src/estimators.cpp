#include "exittails/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "exittails/errors.hpp"

namespace exittails {

namespace {

constexpr double kZ95 = 1.959963984540054; // two-sided 95% normal quantile

// asymptotic Kolmogorov tail Q(t) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 t^2}
double kolmogorov_tail(double t) {
    if (t <= 0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * double(k) * double(k) * t * t);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

} // namespace

TailEstimate tail_estimate(long survivors, long n, std::string threshold_label) {
    if (n < 1) throw DataError("tail_estimate: empty input");
    if (survivors < 0 || survivors > n)
        throw DataError("tail_estimate: survivors out of range");
    TailEstimate e;
    e.n = n;
    e.survivors = survivors;
    e.threshold_label = std::move(threshold_label);
    const double p = double(survivors) / double(n);
    e.p_hat = p;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / double(n);
    const double center = (p + z2 / (2.0 * double(n))) / denom;
    const double half =
        kZ95 *
        std::sqrt(p * (1.0 - p) / double(n) + z2 / (4.0 * double(n) * double(n))) /
        denom;
    e.ci_lo = std::max(0.0, center - half);
    e.ci_hi = std::min(1.0, center + half);
    return e;
}

TailEstimate tail_estimate(const std::vector<ExitRecord>& records,
                           std::size_t threshold_index,
                           std::string threshold_label) {
    if (records.empty()) throw DataError("tail_estimate: empty input");
    long surv = 0;
    for (const auto& r : records) {
        if (threshold_index >= r.crossed_thresholds.size())
            throw DataError("tail_estimate: record lacks threshold flag");
        if (r.crossed_thresholds[threshold_index].second) ++surv;
    }
    return tail_estimate(surv, static_cast<long>(records.size()),
                         std::move(threshold_label));
}

FitResult exponent_regression(
    const std::vector<std::pair<double, TailEstimate>>& pairs) {
    std::set<double> distinct;
    for (const auto& [eps, est] : pairs) distinct.insert(eps);
    if (distinct.size() < 3)
        throw DataError("exponent_regression: need >= 3 distinct epsilon values");
    std::vector<double> x, y, w;
    for (const auto& [eps, est] : pairs) {
        if (est.p_hat <= 0.0)
            throw DataError("exponent_regression: p_hat = 0 at eps = " +
                            std::to_string(eps));
        x.push_back(std::log(eps));
        y.push_back(std::log(est.p_hat));
        // delta method: Var log p_hat = (1-p)/(n p)
        const double var = (1.0 - est.p_hat) / (double(est.n) * est.p_hat);
        w.push_back(var > 0 ? 1.0 / var : 1e12);
    }
    double W = 0, xb = 0, yb = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        W += w[i];
        xb += w[i] * x[i];
        yb += w[i] * y[i];
    }
    xb /= W;
    yb /= W;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - xb) * (x[i] - xb);
        sxy += w[i] * (x[i] - xb) * (y[i] - yb);
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = yb - fit.slope * xb;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += w[i] * r * r;
        ss_tot += w[i] * (y[i] - yb) * (y[i] - yb);
    }
    fit.r_squared = (ss_tot > 0) ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    fit.slope_stderr = std::sqrt(1.0 / sxx);
    return fit;
}

KsResult ks_exponential(std::vector<double> overshoots, double rate) {
    if (overshoots.size() < 50)
        throw DataError("ks_exponential: need at least 50 samples");
    if (!(rate > 0)) throw DataError("ks_exponential: rate must be positive");
    for (double s : overshoots)
        if (s < 0) throw DataError("ks_exponential: negative overshoot");
    std::sort(overshoots.begin(), overshoots.end());
    const double n = double(overshoots.size());
    double d = 0.0;
    for (std::size_t i = 0; i < overshoots.size(); ++i) {
        const double F = 1.0 - std::exp(-rate * overshoots[i]);
        d = std::max(d, std::max((double(i) + 1.0) / n - F, F - double(i) / n));
    }
    return {d, kolmogorov_tail(std::sqrt(n) * d)};
}

SideSplitResult side_split_test(long n_right, long n_conditioned,
                                double weight_right) {
    if (n_conditioned < 30)
        throw DataError("side_split_test: need >= 30 conditioned exits");
    if (n_right < 0 || n_right > n_conditioned)
        throw DataError("side_split_test: counts out of range");
    SideSplitResult r;
    r.n_right = n_right;
    r.n = n_conditioned;
    const double freq = double(n_right) / double(n_conditioned);
    const double se =
        std::sqrt(weight_right * (1.0 - weight_right) / double(n_conditioned));
    r.z_score = (freq - weight_right) / se;
    r.pass = std::abs(r.z_score) <= kZ95;
    return r;
}

MartingaleDiagnostic martingale_diagnostic(const std::vector<double>& sups,
                                           const std::vector<double>& N_grid) {
    if (sups.empty()) throw DataError("martingale_diagnostic: no sup data");
    MartingaleDiagnostic diag;
    const double n = double(sups.size());
    for (double N : N_grid) {
        long count = 0;
        for (double s : sups)
            if (s >= N) ++count;
        diag.rows.push_back({N, double(count) / n, 0.0});
    }
    // fit log e(N) = log c1 - c2 N^2 on positive-exceedance rows
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long m = 0;
    for (const auto& row : diag.rows) {
        if (row.exceedance <= 0) continue;
        const double u = row.N * row.N;
        const double v = std::log(row.exceedance);
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
        ++m;
    }
    if (m >= 2) {
        const double det = double(m) * sxx - sx * sx;
        const double slope = (double(m) * sxy - sx * sy) / det;
        const double icept = (sy - slope * sx) / double(m);
        diag.c2 = -slope;
        diag.c1 = std::exp(icept);
        for (auto& row : diag.rows)
            row.fitted_bound = diag.c1 * std::exp(-diag.c2 * row.N * row.N);
    }
    // log-concavity of log e in u = N^2: nonincreasing second differences
    diag.log_concave_in_N2 = true;
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : diag.rows)
        if (row.exceedance > 0)
            pts.emplace_back(row.N * row.N, std::log(row.exceedance));
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double dl = (pts[i].second - pts[i - 1].second) /
                          (pts[i].first - pts[i - 1].first);
        const double dr = (pts[i + 1].second - pts[i].second) /
                          (pts[i + 1].first - pts[i].first);
        if (dr > dl + 0.15) diag.log_concave_in_N2 = false; // noise allowance
    }
    return diag;
}

} // namespace exittails
