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

#ifndef LINSMR_TRACE_HPP_
#define LINSMR_TRACE_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "linsmr/errors.hpp"
#include "linsmr/history.hpp"
#include "linsmr/value.hpp"

namespace linsmr {

// Key order inside each line is fixed so that load followed by save is
// byte-identical.
using json = nlohmann::ordered_json;

inline json value_to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::integer:
      return v.as_int();
    case Value::Kind::unit:
      return "ok";
    case Value::Kind::empty:
      return "empty";
  }
  throw Error("unreachable value kind");
}

inline Value value_from_json(const json& j) {
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "ok") return Value::unit();
    if (s == "empty") return Value::empty();
    throw ParseError("unknown value literal '" + s + "'");
  }
  throw ParseError("value must be an integer or one of \"ok\"/\"empty\"");
}

inline json event_to_json(const EventRecord& e) {
  json payload = json::array();
  for (const auto& v : e.payload) payload.push_back(value_to_json(v));
  return json{{"event_id", e.event_id},
              {"kind", e.kind == EventKind::invocation ? "invocation" : "response"},
              {"op_id", e.op_id},
              {"client", e.client},
              {"object", e.object},
              {"op_name", e.op_name},
              {"payload", payload},
              {"time", e.time}};
}

inline EventRecord event_from_json(const json& j) {
  EventRecord e;
  try {
    e.event_id = j.at("event_id").get<EventId>();
    auto kind = j.at("kind").get<std::string>();
    if (kind == "invocation")
      e.kind = EventKind::invocation;
    else if (kind == "response")
      e.kind = EventKind::response;
    else
      throw ParseError("unknown event kind '" + kind + "'");
    e.op_id = j.at("op_id").get<OpId>();
    e.client = j.at("client").get<std::string>();
    e.object = j.at("object").get<std::string>();
    e.op_name = j.at("op_name").get<std::string>();
    for (const auto& pj : j.at("payload")) e.payload.push_back(value_from_json(pj));
    e.time = j.at("time").get<Tick>();
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed event record: ") + ex.what());
  }
  return e;
}

/// One event per line. Events are written in history order, so the file is
/// already sorted by (time, event_id).
inline std::string trace_to_string(const History& h) {
  std::string out;
  for (const auto& e : h.events()) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

inline History trace_from_string(const std::string& text) {
  std::vector<EventRecord> events;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& ex) {
      throw ParseError("line " + std::to_string(lineno) + ": " + ex.what());
    }
    events.push_back(event_from_json(j));
  }
  return History::build(std::move(events));
}

inline void save_trace(const History& h, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << trace_to_string(h);
}

inline History load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return trace_from_string(buf.str());
}

}  // namespace linsmr

#endif  // LINSMR_TRACE_HPP_
