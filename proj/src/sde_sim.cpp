#include "exittails/sde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "exittails/errors.hpp"
#include "exittails/rng.hpp"

namespace exittails {

namespace {

double resolve_dt(const SimOptions& opt, double lambda) {
    const double dt = (opt.dt > 0) ? opt.dt : 1e-3 / lambda;
    if (dt > 1e-2 / lambda)
        throw ParameterError("simulate: dt must be <= 1e-2/lambda");
    return dt;
}

void check_horizon(const SimOptions& opt, double max_time) {
    for (const auto& th : opt.thresholds)
        if (th.time >= max_time)
            throw ParameterError("simulate: censoring horizon must exceed "
                                 "threshold '" + th.label + "'");
}

void fill_thresholds(ExitRecord& rec, const SimOptions& opt) {
    rec.crossed_thresholds.reserve(opt.thresholds.size());
    for (const auto& th : opt.thresholds)
        rec.crossed_thresholds.emplace_back(th.time, rec.tau > th.time);
}

// crossing time of the overshooting Euler step by linear interpolation
double interp_crossing(double t, double dt, double x_prev, double x_next,
                       double boundary) {
    const double denom = x_next - x_prev;
    if (denom == 0.0) return t + dt;
    const double theta = (boundary - x_prev) / denom;
    return t + std::clamp(theta, 0.0, 1.0) * dt;
}

} // namespace

double default_max_time(double alpha, double lambda, double epsilon) {
    return alpha / lambda * std::log(1.0 / epsilon) + 10.0 / lambda;
}

ExitRecord simulate_exit_X(const VectorFieldModel& model, const NoiseLevel& noise,
                           double x0, std::uint64_t seed, const SimOptions& opt,
                           std::uint64_t path_index) {
    if (!(x0 > model.q_minus && x0 < model.q_plus)) {
        ExitRecord rec;
        rec.seed = seed;
        rec.path_index = path_index;
        rec.tau = 0.0;
        rec.side = (x0 >= model.q_plus) ? Side::right : Side::left;
        rec.x_exit = (rec.side == Side::right) ? model.q_plus : model.q_minus;
        fill_thresholds(rec, opt);
        return rec;
    }
    const double dt = resolve_dt(opt, model.lambda);
    if (!(opt.max_time > 0)) throw ParameterError("simulate_exit_X: max_time not set");
    check_horizon(opt, opt.max_time);

    ExitRecord rec;
    rec.seed = seed;
    rec.path_index = path_index;

    NormalStream xi(seed);
    const auto& b = model.b;
    const auto& sigma = model.sigma;
    const double eps = noise.epsilon;
    const double sqdt = std::sqrt(dt);
    const long n_steps = static_cast<long>(std::ceil(opt.max_time / dt));

    const bool track = opt.track_martingale;
    double sup_u = 0.0, u_acc = 0.0;
    double x = x0, t = 0.0;
    for (long k = 0; k < n_steps; ++k) {
        const double z = xi();
        const double x_next = x + b(x) * dt + eps * sigma(x) * sqdt * z;
        if (std::isnan(x_next))
            throw NumericPathError("simulate_exit_X: NaN state", path_index, seed);
        if (track) {
            u_acc += std::exp(-model.lambda * t) * sigma(x) * sqdt * z;
            sup_u = std::max(sup_u, std::abs(u_acc));
        }
        if (x_next <= model.q_minus || x_next >= model.q_plus) {
            const bool right = x_next >= model.q_plus;
            const double boundary = right ? model.q_plus : model.q_minus;
            const double tau = interp_crossing(t, dt, x, x_next, boundary);
            if (tau > opt.max_time) break; // crossing past the horizon: censor
            rec.tau = tau;
            rec.side = right ? Side::right : Side::left;
            rec.x_exit = boundary;
            if (track) rec.sup_martingale = sup_u;
            fill_thresholds(rec, opt);
            return rec;
        }
        x = x_next;
        t += dt;
        if (t >= opt.max_time) break;
    }
    rec.tau = opt.max_time;
    rec.side = Side::censored;
    rec.x_exit = x;
    if (track) rec.sup_martingale = sup_u;
    fill_thresholds(rec, opt);
    return rec;
}

ExitRecord simulate_exit_Y(const VectorFieldModel& model,
                           const LinearizationMap& map, const NoiseLevel& noise,
                           double y0, std::uint64_t seed, const SimOptions& opt,
                           YBackend backend, double exit_level,
                           std::uint64_t path_index) {
    if (!(exit_level > 0))
        throw ParameterError("simulate_exit_Y: exit_level must be positive");
    if (std::abs(y0) >= exit_level) {
        ExitRecord rec;
        rec.seed = seed;
        rec.path_index = path_index;
        rec.tau = 0.0;
        rec.side = (y0 >= 0) ? Side::right : Side::left;
        rec.x_exit = (y0 >= 0) ? exit_level : -exit_level;
        fill_thresholds(rec, opt);
        return rec;
    }
    const double dt = resolve_dt(opt, model.lambda);
    if (!(opt.max_time > 0)) throw ParameterError("simulate_exit_Y: max_time not set");
    check_horizon(opt, opt.max_time);

    ExitRecord rec;
    rec.seed = seed;
    rec.path_index = path_index;

    NormalStream xi(seed);
    const double eps = noise.epsilon;
    const double sqdt = std::sqrt(dt);
    const long n_steps = static_cast<long>(std::ceil(opt.max_time / dt));
    const double fd_h = 1e-5 * (model.q_plus - model.q_minus);

    // backend (b): coefficients from the map table by centered differences
    auto sigma_tilde = [&](double y) {
        const double x = map.eval_g(y);
        const double fp = (map.eval_f(std::min(x + fd_h, map.q_plus())) -
                           map.eval_f(std::max(x - fd_h, map.q_minus()))) /
                          (std::min(x + fd_h, map.q_plus()) -
                           std::max(x - fd_h, map.q_minus()));
        return fp * model.sigma(x);
    };
    auto h_coeff = [&](double y) {
        const double x = map.eval_g(y);
        const double xl = std::max(x - fd_h, map.q_minus());
        const double xr = std::min(x + fd_h, map.q_plus());
        const double fpp = (map.eval_f(xr) - 2.0 * map.eval_f(x) + map.eval_f(xl)) /
                           (0.25 * (xr - xl) * (xr - xl));
        const double s = model.sigma(x);
        return fpp * s * s;
    };

    const bool track = opt.track_martingale;
    double sup_u = 0.0, u_acc = 0.0;
    double t = 0.0;

    if (backend == YBackend::map_x) {
        double x = map.eval_g(y0);
        double y = map.eval_f(x);
        for (long k = 0; k < n_steps; ++k) {
            const double z = xi();
            const double x_next =
                x + model.b(x) * dt + eps * model.sigma(x) * sqdt * z;
            if (std::isnan(x_next))
                throw NumericPathError("simulate_exit_Y: NaN state", path_index, seed);
            if (track) {
                u_acc += std::exp(-model.lambda * t) * map.eval_f_prime(x) *
                         model.sigma(x) * sqdt * z;
                sup_u = std::max(sup_u, std::abs(u_acc));
            }
            // X may overshoot I when the Y level sits near the boundary image
            const double xc = std::clamp(x_next, map.q_minus(), map.q_plus());
            const double y_next = map.eval_f(xc);
            if (std::abs(y_next) >= exit_level) {
                const bool right = y_next >= 0;
                const double lvl = right ? exit_level : -exit_level;
                const double tau = interp_crossing(t, dt, y, y_next, lvl);
                if (tau > opt.max_time) break;
                rec.tau = tau;
                rec.side = right ? Side::right : Side::left;
                rec.x_exit = lvl;
                if (track) rec.sup_martingale = sup_u;
                fill_thresholds(rec, opt);
                return rec;
            }
            x = xc;
            y = y_next;
            t += dt;
            if (t >= opt.max_time) break;
        }
        rec.x_exit = y;
    } else {
        double y = y0;
        for (long k = 0; k < n_steps; ++k) {
            const double z = xi();
            const double y_next = y + model.lambda * y * dt +
                                  eps * sigma_tilde(y) * sqdt * z +
                                  0.5 * eps * eps * h_coeff(y) * dt;
            if (std::isnan(y_next))
                throw NumericPathError("simulate_exit_Y: NaN state", path_index, seed);
            if (track) {
                u_acc += std::exp(-model.lambda * t) * sigma_tilde(y) * sqdt * z;
                sup_u = std::max(sup_u, std::abs(u_acc));
            }
            if (std::abs(y_next) >= exit_level) {
                const bool right = y_next >= 0;
                const double lvl = right ? exit_level : -exit_level;
                const double tau = interp_crossing(t, dt, y, y_next, lvl);
                if (tau > opt.max_time) break;
                rec.tau = tau;
                rec.side = right ? Side::right : Side::left;
                rec.x_exit = lvl;
                if (track) rec.sup_martingale = sup_u;
                fill_thresholds(rec, opt);
                return rec;
            }
            y = y_next;
            t += dt;
            if (t >= opt.max_time) break;
        }
        rec.x_exit = y;
    }
    rec.tau = opt.max_time;
    rec.side = Side::censored;
    if (track) rec.sup_martingale = sup_u;
    fill_thresholds(rec, opt);
    return rec;
}

CouplingRecord simulate_coupled_YZ(const VectorFieldModel& model,
                                   const LinearizationMap& map,
                                   const NoiseLevel& noise, double y0,
                                   std::uint64_t seed, double dt, double horizon,
                                   double beta, double beta_prime, double alpha,
                                   std::uint64_t path_index) {
    if (!(dt > 0)) throw ParameterError("simulate_coupled_YZ: dt must be positive");
    CouplingRecord rec;
    rec.seed = seed;
    rec.path_index = path_index;
    rec.horizon = horizon;

    const double eps = noise.epsilon;
    const double stop_level = 2.0 * std::pow(eps, beta);
    const double delta_threshold =
        std::pow(eps, beta + beta_prime - (alpha - 1.0));
    const double sigma0 = model.sigma(0.0);
    const double sqdt = std::sqrt(dt);
    const double fd_h = 1e-5 * (model.q_plus - model.q_minus);

    auto sigma_tilde = [&](double y) {
        const double x = map.eval_g(y);
        const double xl = std::max(x - fd_h, map.q_minus());
        const double xr = std::min(x + fd_h, map.q_plus());
        const double fp = (map.eval_f(xr) - map.eval_f(xl)) / (xr - xl);
        return fp * model.sigma(x);
    };
    auto h_coeff = [&](double y) {
        const double x = map.eval_g(y);
        const double xl = std::max(x - fd_h, map.q_minus());
        const double xr = std::min(x + fd_h, map.q_plus());
        const double fpp = (map.eval_f(xr) - 2.0 * map.eval_f(x) + map.eval_f(xl)) /
                           (0.25 * (xr - xl) * (xr - xl));
        const double s = model.sigma(x);
        return fpp * s * s;
    };

    NormalStream xi(seed);
    double y = y0, z = y0, t = 0.0, sup = 0.0;
    const long n_steps = static_cast<long>(std::ceil(horizon / dt));
    for (long k = 0; k < n_steps && t < horizon; ++k) {
        const double w = xi();
        const double y_next = y + model.lambda * y * dt +
                              eps * sigma_tilde(y) * sqdt * w +
                              0.5 * eps * eps * h_coeff(y) * dt;
        const double z_next = z + model.lambda * z * dt + eps * sigma0 * sqdt * w;
        if (std::isnan(y_next) || std::isnan(z_next))
            throw NumericPathError("simulate_coupled_YZ: NaN state", path_index, seed);
        y = y_next;
        z = z_next;
        t += dt;
        sup = std::max(sup, std::abs(y - z));
        if (std::abs(y) >= stop_level) break;
    }
    rec.sup_delta = sup;
    rec.exceeded = sup > delta_threshold;
    return rec;
}

namespace {

template <typename Record, typename Fn>
std::vector<Record> parallel_paths(long n_paths, std::uint64_t master_seed,
                                   int parallelism, const Fn& fn) {
    if (n_paths < 1) throw ParameterError("run_batch: n_paths must be >= 1");
    std::vector<Record> out(static_cast<std::size_t>(n_paths));
    const int P = std::max(1, parallelism);
    if (P == 1) {
        for (long i = 0; i < n_paths; ++i)
            out[std::size_t(i)] =
                fn(std::uint64_t(i), derive_seed(master_seed, std::uint64_t(i)));
        return out;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(P));
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(P));
    for (int p = 0; p < P; ++p) {
        const long lo = n_paths * p / P;
        const long hi = n_paths * (p + 1) / P;
        pool.emplace_back([&, lo, hi, p] {
            try {
                for (long i = lo; i < hi; ++i)
                    out[std::size_t(i)] = fn(std::uint64_t(i),
                                             derive_seed(master_seed, std::uint64_t(i)));
            } catch (...) {
                errors[std::size_t(p)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace

std::vector<ExitRecord>
run_batch(long n_paths, std::uint64_t master_seed, int parallelism,
          const std::function<ExitRecord(std::uint64_t, std::uint64_t)>& fn) {
    return parallel_paths<ExitRecord>(n_paths, master_seed, parallelism, fn);
}

std::vector<CouplingRecord>
run_coupling_batch(long n_paths, std::uint64_t master_seed, int parallelism,
                   const std::function<CouplingRecord(std::uint64_t, std::uint64_t)>& fn) {
    return parallel_paths<CouplingRecord>(n_paths, master_seed, parallelism, fn);
}

BatchSummary summarize(const std::vector<ExitRecord>& records,
                       const std::vector<Threshold>& thresholds) {
    BatchSummary s;
    s.n_paths = static_cast<long>(records.size());
    s.thresholds = thresholds;
    s.survivors.assign(thresholds.size(), 0);
    s.survivors_right.assign(thresholds.size(), 0);
    s.survivors_left.assign(thresholds.size(), 0);
    for (const auto& r : records) {
        if (r.side == Side::right)
            ++s.exited_right;
        else if (r.side == Side::left)
            ++s.exited_left;
        else
            ++s.censored;
        for (std::size_t j = 0; j < thresholds.size(); ++j) {
            const bool survived = j < r.crossed_thresholds.size()
                                      ? r.crossed_thresholds[j].second
                                      : r.tau > thresholds[j].time;
            if (survived) {
                ++s.survivors[j];
                if (r.side == Side::right) ++s.survivors_right[j];
                if (r.side == Side::left) ++s.survivors_left[j];
            }
        }
    }
    return s;
}

} // namespace exittails
