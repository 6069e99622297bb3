/*
 * Copyright 2026 The dsdevs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>

#include "dsdevs/error.hpp"

namespace dsdevs {

namespace detail {

// Shortest decimal that parses back to the same double. Locale independent.
inline std::string format_shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

inline std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// Logical simulation time: a non-negative finite value or INFINITY.
//
// INFINITY is carried as a separate flag so that the passive state has an
// explicit textual form ("inf") and never leaks through float arithmetic.
// Two finite times are simultaneous only when bitwise equal.
class SimTime {
 public:
  constexpr SimTime() = default;

  explicit SimTime(double value) : value_(value) {
    if (std::isnan(value) || std::isinf(value) || value < 0.0) {
      throw UsageError("SimTime must be a finite non-negative value, got " +
                       detail::format_shortest(value));
    }
    if (value == 0.0) value_ = 0.0;  // fold -0.0
  }

  static constexpr SimTime infinity() {
    SimTime t;
    t.infinite_ = true;
    return t;
  }
  static constexpr SimTime zero() { return SimTime{}; }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  // Finite value; INFINITY has no value.
  double value() const {
    if (infinite_) throw UsageError("SimTime::value() called on INFINITY");
    return value_;
  }

  friend constexpr bool operator==(const SimTime& a, const SimTime& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend constexpr std::strong_ordering operator<=>(const SimTime& a, const SimTime& b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend SimTime operator+(const SimTime& a, const SimTime& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return SimTime(a.value_ + b.value_);
  }

  // Duration between two times; `a` must not precede `b`.
  friend SimTime operator-(const SimTime& a, const SimTime& b) {
    if (b.infinite_) throw UsageError("cannot subtract INFINITY");
    if (a.infinite_) return infinity();
    if (a.value_ < b.value_) {
      throw UsageError("negative time difference " + detail::format_shortest(a.value_) +
                       " - " + detail::format_shortest(b.value_));
    }
    return SimTime(a.value_ - b.value_);
  }

  // Canonical rendering: "inf" or the shortest round-trip decimal.
  std::string str() const { return infinite_ ? "inf" : detail::format_shortest(value_); }

  static std::optional<SimTime> parse(std::string_view text) {
    if (text == "inf") return infinity();
    auto v = detail::parse_double(text);
    if (!v || std::isnan(*v) || std::isinf(*v) || *v < 0.0) return std::nullopt;
    return SimTime(*v);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

inline std::ostream& operator<<(std::ostream& os, const SimTime& t) { return os << t.str(); }

// Minimum under the total order. The empty list is a usage error.
inline SimTime sim_time_min(std::span<const SimTime> times) {
  if (times.empty()) throw UsageError("sim_time_min of an empty list");
  SimTime best = times.front();
  for (const auto& t : times.subspan(1)) {
    if (t < best) best = t;
  }
  return best;
}

inline SimTime sim_time_min(std::initializer_list<SimTime> times) {
  return sim_time_min(std::span<const SimTime>(times.begin(), times.size()));
}

}  // namespace dsdevs
