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

#ifndef LINSMR_VERDICT_HPP_
#define LINSMR_VERDICT_HPP_

#include <string>
#include <vector>

#include "linsmr/errors.hpp"
#include "linsmr/trace.hpp"
#include "linsmr/value.hpp"

namespace linsmr {

enum class Level : std::uint8_t { lin, set, mp, interval };

inline std::string to_string(Level l) {
  switch (l) {
    case Level::lin: return "lin";
    case Level::set: return "set";
    case Level::mp: return "mp";
    case Level::interval: return "interval";
  }
  return "?";
}

inline Level level_from_string(const std::string& s) {
  if (s == "lin") return Level::lin;
  if (s == "set") return Level::set;
  if (s == "mp") return Level::mp;
  if (s == "interval") return Level::interval;
  throw MalformedInput("unknown level '" + s + "'");
}

/// One element of an accepting placement or run:
///   point:   an operation's single linearization point
///   joint:   a simultaneity set placed at one instant
///   step:    one effect step of an operation (MP placement, or an
///            internal automaton transition)
///   consume: an invocation consumed by the interval automaton
///   emit:    a response emitted by the interval automaton
struct WitnessStep {
  enum class Kind : std::uint8_t { point, joint, step, consume, emit };

  Kind kind = Kind::point;
  std::vector<OpId> ops;      // singleton except for joint
  std::size_t step_index = 0; // step only

  static WitnessStep point(OpId op) { return {Kind::point, {op}, 0}; }
  static WitnessStep joint(std::vector<OpId> ops) { return {Kind::joint, std::move(ops), 0}; }
  static WitnessStep step(OpId op, std::size_t index) { return {Kind::step, {op}, index}; }
  static WitnessStep consume(OpId op) { return {Kind::consume, {op}, 0}; }
  static WitnessStep emit(OpId op) { return {Kind::emit, {op}, 0}; }

  friend bool operator==(const WitnessStep&, const WitnessStep&) = default;
};

inline std::string to_string(WitnessStep::Kind k) {
  switch (k) {
    case WitnessStep::Kind::point: return "point";
    case WitnessStep::Kind::joint: return "joint";
    case WitnessStep::Kind::step: return "step";
    case WitnessStep::Kind::consume: return "consume";
    case WitnessStep::Kind::emit: return "emit";
  }
  return "?";
}

using Witness = std::vector<WitnessStep>;

/// Reject diagnosis. `contradictory_order` names a pair whose required
/// orders conflict; `budget_exhausted` marks an unknown outcome.
struct Explanation {
  enum class Kind : std::uint8_t {
    none,
    return_mismatch,
    contradictory_order,
    no_common_instant,
    no_valid_placement,
    budget_exhausted
  };

  Kind kind = Kind::none;
  std::string detail;
  std::vector<OpId> ops;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

inline std::string to_string(Explanation::Kind k) {
  switch (k) {
    case Explanation::Kind::none: return "none";
    case Explanation::Kind::return_mismatch: return "return-mismatch";
    case Explanation::Kind::contradictory_order: return "contradictory-order";
    case Explanation::Kind::no_common_instant: return "no-common-instant";
    case Explanation::Kind::no_valid_placement: return "no-valid-placement";
    case Explanation::Kind::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

/// Checker outcome. accepted implies a replayable witness; rejected
/// implies an explanation. A budget-exhausted explanation means unknown
/// rather than a definite reject.
struct Verdict {
  Level level = Level::lin;
  bool accepted = false;
  Witness witness;
  Explanation explanation;

  bool unknown() const { return !accepted && explanation.kind == Explanation::Kind::budget_exhausted; }

  static Verdict accept(Level l, Witness w) {
    Verdict v;
    v.level = l;
    v.accepted = true;
    v.witness = std::move(w);
    return v;
  }

  static Verdict reject(Level l, Explanation e) {
    Verdict v;
    v.level = l;
    v.accepted = false;
    v.explanation = std::move(e);
    return v;
  }

  static Verdict exhausted(Level l, std::string detail) {
    return reject(l, Explanation{Explanation::Kind::budget_exhausted, std::move(detail), {}});
  }
};

inline json witness_step_to_json(const WitnessStep& s) {
  json j{{"kind", to_string(s.kind)}};
  if (s.kind == WitnessStep::Kind::joint) {
    j["ops"] = s.ops;
  } else {
    j["op"] = s.ops.empty() ? 0 : s.ops.front();
  }
  if (s.kind == WitnessStep::Kind::step) j["index"] = s.step_index;
  return j;
}

inline json verdict_to_json(const Verdict& v) {
  json j{{"level", to_string(v.level)}, {"accepted", v.accepted}};
  if (v.accepted) {
    json w = json::array();
    for (const auto& s : v.witness) w.push_back(witness_step_to_json(s));
    j["witness"] = w;
  } else {
    j["explanation"] = json{{"kind", to_string(v.explanation.kind)},
                            {"detail", v.explanation.detail},
                            {"ops", v.explanation.ops}};
  }
  return j;
}

/// Human-readable one-liner plus the serialized record, for CLI output.
inline std::string verdict_to_line(const Verdict& v) { return verdict_to_json(v).dump(); }

inline WitnessStep::Kind witness_kind_from_string(const std::string& s) {
  if (s == "point") return WitnessStep::Kind::point;
  if (s == "joint") return WitnessStep::Kind::joint;
  if (s == "step") return WitnessStep::Kind::step;
  if (s == "consume") return WitnessStep::Kind::consume;
  if (s == "emit") return WitnessStep::Kind::emit;
  throw ParseError("unknown witness step kind '" + s + "'");
}

inline Explanation::Kind explanation_kind_from_string(const std::string& s) {
  if (s == "none") return Explanation::Kind::none;
  if (s == "return-mismatch") return Explanation::Kind::return_mismatch;
  if (s == "contradictory-order") return Explanation::Kind::contradictory_order;
  if (s == "no-common-instant") return Explanation::Kind::no_common_instant;
  if (s == "no-valid-placement") return Explanation::Kind::no_valid_placement;
  if (s == "budget-exhausted") return Explanation::Kind::budget_exhausted;
  throw ParseError("unknown explanation kind '" + s + "'");
}

inline WitnessStep witness_step_from_json(const json& j) {
  WitnessStep s;
  s.kind = witness_kind_from_string(j.at("kind").get<std::string>());
  if (s.kind == WitnessStep::Kind::joint)
    s.ops = j.at("ops").get<std::vector<OpId>>();
  else
    s.ops = {j.at("op").get<OpId>()};
  if (s.kind == WitnessStep::Kind::step) s.step_index = j.at("index").get<std::size_t>();
  return s;
}

/// Inverse of verdict_to_json; throws ParseError on malformed records.
inline Verdict verdict_from_json(const json& j) {
  try {
    Verdict v;
    v.level = level_from_string(j.at("level").get<std::string>());
    v.accepted = j.at("accepted").get<bool>();
    if (v.accepted) {
      for (const auto& s : j.at("witness")) v.witness.push_back(witness_step_from_json(s));
    } else {
      const auto& e = j.at("explanation");
      v.explanation.kind = explanation_kind_from_string(e.at("kind").get<std::string>());
      v.explanation.detail = e.at("detail").get<std::string>();
      v.explanation.ops = e.at("ops").get<std::vector<OpId>>();
    }
    return v;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed verdict record: ") + e.what());
  } catch (const MalformedInput& e) {
    throw ParseError(std::string("malformed verdict record: ") + e.what());
  }
}

inline Verdict verdict_from_string(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed verdict record: not valid JSON");
  return verdict_from_json(j);
}

/// All four levels on one history, with the containment check.
struct HierarchyReport {
  Verdict lin;
  Verdict set;
  Verdict mp;
  Verdict interval;
  bool containment_violation = false;
  std::string violation_detail;
};

inline json hierarchy_report_to_json(const HierarchyReport& r) {
  return json{{"lin", verdict_to_json(r.lin)},
              {"set", verdict_to_json(r.set)},
              {"mp", verdict_to_json(r.mp)},
              {"interval", verdict_to_json(r.interval)},
              {"containment_violation", r.containment_violation},
              {"violation_detail", r.violation_detail}};
}

}  // namespace linsmr

#endif  // LINSMR_VERDICT_HPP_
