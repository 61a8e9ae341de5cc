// Byte-stable numeric formatting (shortest round-trip) for all output files.

#ifndef EXITTAILS_STRFMT_HPP
#define EXITTAILS_STRFMT_HPP

#include <charconv>
#include <cstdint>
#include <string>

namespace exittails {

inline std::string format_double(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

inline std::string format_u64(std::uint64_t v) {
    char buf[24];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

} // namespace exittails

#endif
