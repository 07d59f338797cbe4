#pragma once

#include <string>
#include <string_view>

namespace riskmcdm {

inline constexpr int kCanonicalDigits = 9;

// Rounds to 9 significant digits (ties to even) and returns the double
// nearest that decimal, so serializers print at most 9 digits.
double canonical(double v);
std::string format_canonical(double v);

std::string sha256_hex(std::string_view bytes);
// Throws Error{IoError}.
std::string sha256_file(const std::string& path);

}  // namespace riskmcdm
