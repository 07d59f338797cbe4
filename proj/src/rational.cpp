#include "riskmcdm/rational.hpp"

#include <charconv>
#include <numeric>

#include "riskmcdm/error.hpp"

namespace riskmcdm {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    throw Error(ErrorCode::InvalidIntensity, "zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

Rational Rational::reciprocal() const { return Rational(den_, num_); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw Error(ErrorCode::InvalidIntensity, "malformed judgment value '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(trim(text.substr(0, slash)), whole),
                    parse_int(trim(text.substr(slash + 1)), whole));
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto int_part = text.substr(0, dot);
    const auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 12 || (int_part.empty() && frac_part.empty())) {
      throw Error(ErrorCode::InvalidIntensity, "malformed judgment value '" + std::string(whole) + "'");
    }
    std::int64_t scale = 1;
    for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
    const std::int64_t ip = int_part.empty() ? 0 : parse_int(int_part, whole);
    const std::int64_t fp = frac_part.empty() ? 0 : parse_int(frac_part, whole);
    if (ip < 0 || fp < 0) {
      throw Error(ErrorCode::InvalidIntensity, "malformed judgment value '" + std::string(whole) + "'");
    }
    return Rational(ip * scale + fp, scale);
  }
  return Rational(parse_int(text, whole), 1);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace riskmcdm
