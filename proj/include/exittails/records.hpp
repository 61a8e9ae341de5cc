#ifndef EXITTAILS_RECORDS_HPP
#define EXITTAILS_RECORDS_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace exittails {

enum class Side { left, right, censored };

inline const char* side_name(Side s) {
    switch (s) {
        case Side::left: return "left";
        case Side::right: return "right";
        default: return "censored";
    }
}

struct Threshold {
    std::string label;
    double time = 0.0;
};

// One simulated path outcome.
struct ExitRecord {
    double tau = 0.0;
    Side side = Side::censored;
    double x_exit = 0.0;
    std::uint64_t path_index = 0;
    std::uint64_t seed = 0;
    // (threshold time, survived) pairs, aligned with the job's threshold list.
    std::vector<std::pair<double, bool>> crossed_thresholds;
    // sup_t |U(t)| when martingale tracking is on; NaN otherwise. Not serialized.
    double sup_martingale = std::numeric_limits<double>::quiet_NaN();
};

// Outcome of one coupled (Y,Z) path driven by a shared Brownian increment
// sequence.
struct CouplingRecord {
    double sup_delta = 0.0; // sup |Y-Z| up to horizon ^ first |Y| = 2 eps^beta
    double horizon = 0.0;
    bool exceeded = false;  // sup_delta > eps^{beta+beta'-(alpha-1)}
    std::uint64_t path_index = 0;
    std::uint64_t seed = 0;
};

} // namespace exittails

#endif
