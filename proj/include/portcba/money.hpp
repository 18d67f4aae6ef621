#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <string>

#include "portcba/errors.hpp"

namespace portcba {

// Configured amounts are held as integer pence so that table values coming
// from the input document survive round-trips exactly. Probability-weighted
// expectations are computed in double pounds and only rounded when rendered.
class Money {
public:
  constexpr Money() = default;

  static constexpr Money from_pence(std::int64_t pence) {
    Money m;
    m.pence_ = pence;
    return m;
  }
  static constexpr Money from_pounds(std::int64_t pounds) {
    return from_pence(pounds * 100);
  }

  constexpr std::int64_t pence() const { return pence_; }
  constexpr double pounds() const { return static_cast<double>(pence_) / 100.0; }
  constexpr std::int64_t whole_pounds() const { return pence_ / 100; }

  friend constexpr Money operator+(Money a, Money b) { return from_pence(a.pence_ + b.pence_); }
  friend constexpr Money operator-(Money a, Money b) { return from_pence(a.pence_ - b.pence_); }
  friend constexpr Money operator*(Money a, std::int64_t k) { return from_pence(a.pence_ * k); }
  friend constexpr auto operator<=>(Money a, Money b) = default;

private:
  std::int64_t pence_ = 0;
};

// Whole pounds, halves rounded away from zero (the rule used by every
// rendered table).
inline std::int64_t to_whole_pounds(double pounds) {
  if (!std::isfinite(pounds)) throw ConfigError("non-finite currency amount");
  return std::llround(pounds);
}

inline std::string group_thousands(std::int64_t v) {
  const bool neg = v < 0;
  std::string digits = std::to_string(neg ? -v : v);
  std::string out;
  out.reserve(digits.size() + digits.size() / 3 + 1);
  int run = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    out.push_back(*it);
    if (++run == 3 && std::next(it) != digits.rend()) {
      out.push_back(',');
      run = 0;
    }
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

// "£60,500,000" for the markdown renderer; CSV emits the bare integer.
inline std::string format_gbp(double pounds) {
  const std::int64_t whole = to_whole_pounds(pounds);
  return "£" + group_thousands(whole);
}

}  // namespace portcba
