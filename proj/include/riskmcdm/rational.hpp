#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace riskmcdm {

// Exact positive-or-zero fraction used for judgment intensities until they
// enter a floating-point matrix. Always stored reduced with den > 0.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  Rational reciprocal() const;

  // "3", "1/7", "0.25". Throws Error{InvalidIntensity} on malformed text.
  static Rational parse(std::string_view text);
  // Canonical text: "3" or "1/7".
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend Rational operator*(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace riskmcdm
