#ifndef EXITTAILS_ERRORS_HPP
#define EXITTAILS_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace exittails {

struct InvalidModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric failure inside a stochastic path; carries provenance.
struct NumericPathError : std::runtime_error {
    NumericPathError(const std::string& what, std::uint64_t path_index,
                     std::uint64_t seed)
        : std::runtime_error(what + " (path_index=" + std::to_string(path_index) +
                             ", seed=" + std::to_string(seed) + ")"),
          path_index(path_index), seed(seed) {}
    std::uint64_t path_index;
    std::uint64_t seed;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace exittails

#endif
