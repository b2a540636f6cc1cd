/*
 * Copyright (c) 2026, the linsmr authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LINSMR_VALUE_HPP_
#define LINSMR_VALUE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "linsmr/errors.hpp"

namespace linsmr {

/// Logical time. The simulator hands out integer ticks; all precedence
/// reasoning is done on tick order, never on metric durations.
using Tick = std::int64_t;

using OpId = std::uint64_t;
using EventId = std::uint64_t;

/// An argument or return value: the unit value `ok`, a signed integer, or
/// the distinguished `empty` marker (e.g. dequeue on an empty queue).
class Value {
 public:
  enum class Kind : std::uint8_t { unit, integer, empty };

  constexpr Value() : kind_(Kind::unit), n_(0) {}

  static constexpr Value unit() { return Value(); }
  static constexpr Value integer(std::int64_t n) { return Value(Kind::integer, n); }
  static constexpr Value empty() { return Value(Kind::empty, 0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_unit() const { return kind_ == Kind::unit; }
  constexpr bool is_int() const { return kind_ == Kind::integer; }
  constexpr bool is_empty_marker() const { return kind_ == Kind::empty; }

  std::int64_t as_int() const {
    if (kind_ != Kind::integer) throw Error("value is not an integer: " + to_string());
    return n_;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::unit: return "ok";
      case Kind::empty: return "empty";
      case Kind::integer: return std::to_string(n_);
    }
    return "?";
  }

  friend constexpr bool operator==(const Value& a, const Value& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::integer || a.n_ == b.n_);
  }
  friend constexpr bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend constexpr bool operator<(const Value& a, const Value& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    return a.kind_ == Kind::integer && a.n_ < b.n_;
  }

 private:
  constexpr Value(Kind k, std::int64_t n) : kind_(k), n_(n) {}
  Kind kind_;
  std::int64_t n_;
};

using Values = std::vector<Value>;

inline std::string to_string(const Values& vs) {
  std::string out = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += vs[i].to_string();
  }
  return out + "]";
}

/// Specification state, flattened to integers. Every built-in object keeps
/// its state (register cell, counter, queue contents, shared variables and
/// condition latches) in this canonical encoding so search memoization can
/// hash and compare states directly.
using SpecState = std::vector<std::int64_t>;

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t hash_state(const SpecState& s) {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto x : s) h = hash_combine(h, std::hash<std::int64_t>{}(x));
  return h;
}

inline std::size_t hash_value(const Value& v) {
  std::size_t h = static_cast<std::size_t>(v.kind());
  if (v.is_int()) h = hash_combine(h, std::hash<std::int64_t>{}(v.as_int()));
  return h;
}

/// Deterministic 64-bit mixer used to derive independent sub-seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace linsmr

#endif  // LINSMR_VALUE_HPP_
