#include "exittails/linear_exact.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "exittails/errors.hpp"
#include "exittails/quadrature.hpp"
#include "exittails/rng.hpp"
#include "exittails/theory.hpp"

namespace exittails {

LinearModel LinearModel::with_default_c(double lambda, double sigma0, double eps,
                                        double z, double beta, double alpha,
                                        double C) {
    LinearModel m;
    m.lambda = lambda;
    m.sigma0 = sigma0;
    m.epsilon = eps;
    m.z = z;
    m.beta = beta;
    m.alpha = alpha;
    m.C = C;
    m.c_eps = 1.0 / std::log(1.0 / eps);
    return m;
}

double LinearModel::level() const {
    return std::pow(epsilon, beta) * (1.0 + delta_eps);
}

double t_eps(const LinearModel& m) {
    if (!(m.epsilon > 0 && m.epsilon < 1))
        throw ParameterError("t_eps: epsilon must be in (0,1)");
    const double v =
        (m.alpha - m.beta) / m.lambda * std::log(1.0 / m.epsilon) - m.C + m.c_eps;
    if (!(v > 0)) throw ParameterError("t_eps: nonpositive time scale");
    return v;
}

GaussianSpec exact_marginal(const LinearModel& m, double t) {
    if (t < 0) throw ParameterError("exact_marginal: t must be nonnegative");
    const double gr = std::exp(m.lambda * t);
    const double mean = m.epsilon * gr * m.z;
    if (t == 0.0) return {mean, 0.0, true};
    const double var = m.epsilon * m.epsilon * gr * gr * m.sigma0 * m.sigma0 *
                       (1.0 - std::exp(-2.0 * m.lambda * t)) / (2.0 * m.lambda);
    return {mean, var, false};
}

namespace {

struct StepConsts {
    double growth;
    double noise_sd;
};

StepConsts step_consts(const LinearModel& m, double h) {
    const double g = std::exp(m.lambda * h);
    const double sd = m.epsilon * m.sigma0 *
                      std::sqrt((g * g - 1.0) / (2.0 * m.lambda));
    return {g, sd};
}

// crossing time inside (t_k, t_k+h] by linear interpolation in log|Z|
double refine_crossing(double t_k, double h, double z_prev, double z_next,
                       double level) {
    const double a = std::abs(z_prev);
    const double b = std::abs(z_next);
    if (a <= 0.0 || b <= a) return t_k + h;
    const double theta =
        (std::log(level) - std::log(a)) / (std::log(b) - std::log(a));
    return t_k + std::clamp(theta, 0.0, 1.0) * h;
}

} // namespace

ExitRecord sample_exit(const LinearModel& m, std::uint64_t seed, double dt,
                       const std::vector<Threshold>& thresholds,
                       double max_time) {
    if (!(dt > 0) || dt > 1e-2 / m.lambda)
        throw ParameterError("sample_exit: require 0 < dt <= 1e-2/lambda");
    const double level = m.level();
    if (max_time < 0) max_time = 10.0 * t_eps(m);

    ExitRecord rec;
    rec.seed = seed;
    auto finish = [&](double tau, Side side, double x_exit) {
        rec.tau = tau;
        rec.side = side;
        rec.x_exit = x_exit;
        rec.crossed_thresholds.reserve(thresholds.size());
        for (const auto& th : thresholds)
            rec.crossed_thresholds.emplace_back(th.time, tau > th.time);
        return rec;
    };

    double z = m.epsilon * m.z;
    if (std::abs(z) >= level)
        return finish(0.0, z >= 0 ? Side::right : Side::left, z);

    NormalStream xi(seed);
    const auto sc = step_consts(m, dt);
    const long n_steps = static_cast<long>(std::floor(max_time / dt));
    double t = 0.0;
    for (long k = 0; k < n_steps; ++k) {
        const double z_next = z * sc.growth + sc.noise_sd * xi();
        if (std::abs(z_next) >= level) {
            const double tau = refine_crossing(t, dt, z, z_next, level);
            return finish(tau, z_next >= 0 ? Side::right : Side::left,
                          z_next >= 0 ? level : -level);
        }
        z = z_next;
        t += dt;
    }
    const double rem = max_time - double(n_steps) * dt;
    if (rem > 1e-15) {
        const auto scr = step_consts(m, rem);
        const double z_next = z * scr.growth + scr.noise_sd * xi();
        if (std::abs(z_next) >= level) {
            const double tau = refine_crossing(t, rem, z, z_next, level);
            return finish(tau, z_next >= 0 ? Side::right : Side::left,
                          z_next >= 0 ? level : -level);
        }
        z = z_next;
    }
    return finish(max_time, Side::censored, z);
}

double tail_theory(const LinearModel& m) {
    if (!(m.alpha > 1)) throw ParameterError("tail_theory: alpha must exceed 1");
    return std::pow(m.epsilon, m.alpha - 1.0) * 2.0 *
           std::exp(m.lambda * m.C) * psi0(m.z, m.lambda, m.sigma0);
}

double exit_side_oracle(const LinearModel& m, double level) {
    if (!(level > 0)) throw ParameterError("exit_side_oracle: level must be positive");
    const double x0 = m.epsilon * m.z;
    if (std::abs(x0) > level)
        throw ParameterError("exit_side_oracle: start outside the levels");
    if (x0 == level) return 1.0;
    if (x0 == -level) return 0.0;
    const double a = m.lambda / (m.epsilon * m.epsilon * m.sigma0 * m.sigma0);
    auto scale_density = [a](double u) { return std::exp(-a * u * u); };
    const double denom_half = integrate(scale_density, 0.0, level, 1e-12);
    const double num = integrate(scale_density, 0.0, std::abs(x0), 1e-12);
    const double s_x0 = (x0 >= 0 ? num : -num);
    // S odd: P = (S(x0) - S(-L)) / (S(L) - S(-L)) = (S(x0) + S(L)) / (2 S(L))
    return (s_x0 + denom_half) / (2.0 * denom_half);
}

EquidistResult equidistribution_experiment(const LinearModel& m, long n_paths,
                                           int bins, double delta,
                                           std::uint64_t master_seed, double dt,
                                           int parallelism) {
    if (n_paths < 1) throw ParameterError("equidistribution: n_paths < 1");
    if (bins < 1) throw ParameterError("equidistribution: bins < 1");
    if (!(delta > 0 && delta < 1))
        throw ParameterError("equidistribution: delta must be in (0,1)");
    const double te = t_eps(m);
    const double level = m.level();
    const long n_full = static_cast<long>(std::floor(te / dt));
    const double rem = te - double(n_full) * dt;

    // Z(t_eps) per path, NaN when the path exited before t_eps. Collected per
    // path index so the reduction is independent of the thread layout.
    std::vector<double> z_end(static_cast<std::size_t>(n_paths),
                              std::numeric_limits<double>::quiet_NaN());
    const auto sc = step_consts(m, dt);
    const auto scr = rem > 1e-15 ? step_consts(m, rem) : StepConsts{1.0, 0.0};

    auto worker = [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            NormalStream xi(derive_seed(master_seed, std::uint64_t(i)));
            double z = m.epsilon * m.z;
            bool alive = std::abs(z) < level;
            for (long k = 0; alive && k < n_full; ++k) {
                z = z * sc.growth + sc.noise_sd * xi();
                alive = std::abs(z) < level;
            }
            if (alive && rem > 1e-15) {
                z = z * scr.growth + scr.noise_sd * xi();
                alive = std::abs(z) < level;
            }
            if (alive) z_end[std::size_t(i)] = z;
        }
    };

    const int P = std::max(1, parallelism);
    if (P == 1) {
        worker(0, n_paths);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(P);
        for (int p = 0; p < P; ++p) {
            const long lo = n_paths * p / P;
            const long hi = n_paths * (p + 1) / P;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    EquidistResult res;
    res.n_paths = n_paths;
    std::vector<long> counts(static_cast<std::size_t>(bins), 0);
    const double band = 1.0 - delta;
    const double width = 2.0 * band / bins;
    double func_sum = 0.0;
    const double inv_sqrt_2pi = 0.3989422804014326779399461;
    for (long i = 0; i < n_paths; ++i) {
        const double z = z_end[std::size_t(i)];
        if (std::isnan(z)) continue;
        ++res.n_conditioned;
        const double u = z / std::pow(m.epsilon, m.beta);
        if (u >= -band && u < band) {
            const int bidx = std::min<int>(bins - 1, int((u + band) / width));
            ++counts[std::size_t(bidx)];
        }
        const double v = z / m.epsilon;
        func_sum += inv_sqrt_2pi * std::exp(-0.5 * v * v);
    }
    if (res.n_conditioned < 100)
        throw DataError("equidistribution: fewer than 100 conditioned samples; "
                        "increase epsilon or n_paths, or decrease alpha");

    res.bin_freq.resize(std::size_t(bins));
    res.bin_deviation.resize(std::size_t(bins));
    for (int bdx = 0; bdx < bins; ++bdx) {
        const double freq = double(counts[std::size_t(bdx)]) / double(res.n_conditioned);
        res.bin_freq[std::size_t(bdx)] = freq;
        const double dev = std::abs(freq * bins / (2.0 * band) - 0.5) * 2.0;
        res.bin_deviation[std::size_t(bdx)] = dev;
        res.max_deviation = std::max(res.max_deviation, dev);
    }
    res.test_functional = std::pow(m.epsilon, -(1.0 - m.beta)) * func_sum /
                          double(res.n_conditioned);
    return res;
}

} // namespace exittails
