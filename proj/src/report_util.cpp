#include "tvaudit/report_util.hpp"

#include <cstdio>
#include <cstdlib>

namespace tvaudit {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string format_sig9(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

double round_sig9(double value) {
    return std::strtod(format_sig9(value).c_str(), nullptr);
}

} // namespace tvaudit
