#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tvaudit {

/// FNV-1a 64-bit digest of a byte string; used to fingerprint report inputs.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

/// All report numbers are printed with 9 significant digits. format_sig9 is
/// the one formatter; round_sig9 maps a double onto the value its printed
/// form parses back to, so JSON and CSV reports carry identical numbers.
std::string format_sig9(double value);
double round_sig9(double value);

} // namespace tvaudit
