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

#ifndef LINSMR_HISTORY_HPP_
#define LINSMR_HISTORY_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linsmr/errors.hpp"
#include "linsmr/value.hpp"

namespace linsmr {

enum class EventKind : std::uint8_t { invocation, response };

inline std::string to_string(EventKind k) {
  return k == EventKind::invocation ? "inv" : "resp";
}

/// One invocation or response event on the global timeline.
///
/// `payload` carries the argument values for an invocation and a single
/// return value for a response. `time` is a logical tick; events are
/// ordered by (time, event_id), so equal-tick events have a deterministic
/// order but the checkers treat them as concurrent.
struct EventRecord {
  EventId event_id = 0;
  EventKind kind = EventKind::invocation;
  OpId op_id = 0;
  std::string client;
  std::string object;
  std::string op_name;
  Values payload;
  Tick time = 0;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// The drawn timeline segment of one operation: invocation tick plus the
/// response tick when the operation has completed.
struct OperationSpan {
  OpId op_id = 0;
  Tick invocation_time = 0;
  std::optional<Tick> response_time;

  bool complete() const { return response_time.has_value(); }

  friend bool operator==(const OperationSpan&, const OperationSpan&) = default;
};

/// Per-operation timeline extension: move the invocation `earlier` ticks
/// back and the response `later` ticks forward.
struct TimelineDelta {
  Tick earlier = 0;
  Tick later = 0;
};

enum class CompletionPolicy { drop_pending, close_pending_at_horizon };

/// A validated, immutable event sequence sorted by (time, event_id).
///
/// Invariants enforced at construction:
///   - event ids are unique, op ids pair up as at most one invocation plus
///     at most one response with matching client/object/op_name;
///   - invocation.time < response.time for matched pairs;
///   - each client has at most one outstanding operation at a time.
class History {
 public:
  History() = default;

  /// Validates and sorts; throws MalformedHistory with the offending
  /// event id on any invariant violation.
  static History build(std::vector<EventRecord> events) { return History(std::move(events)); }

  const std::vector<EventRecord>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  /// Operation spans in ascending (invocation_time, op_id) order.
  const std::vector<OperationSpan>& spans() const { return spans_; }

  /// Ids of operations with an invocation but no response.
  const std::vector<OpId>& pending() const { return pending_; }
  bool complete() const { return pending_.empty(); }

  bool contains_op(OpId op) const { return span_index_.count(op) != 0; }

  const OperationSpan& span_of(OpId op) const {
    auto it = span_index_.find(op);
    if (it == span_index_.end()) throw UnknownOp(op);
    return spans_[it->second];
  }

  /// The invocation event of an operation.
  const EventRecord& invocation_of(OpId op) const { return events_[inv_event_.at(check_op(op))]; }

  /// The response event; throws UnknownOp when the operation is pending.
  const EventRecord& response_of(OpId op) const {
    auto it = resp_event_.find(check_op(op));
    if (it == resp_event_.end()) throw UnknownOp(op);
    return events_[it->second];
  }

  /// Strict real-time precedence: a's response happened before b's
  /// invocation. Irreflexive; equal-tick events yield no precedence.
  bool real_time_precedes(OpId a, OpId b) const {
    const auto& sa = span_of(a);
    const auto& sb = span_of(b);
    if (!sa.response_time) throw UnknownOp(a);
    return *sa.response_time < sb.invocation_time;
  }

  /// Sub-history of one object, order and ids preserved. An unknown
  /// object yields an empty history.
  History project_object(std::string_view object) const {
    std::vector<EventRecord> kept;
    for (const auto& e : events_)
      if (e.object == object) kept.push_back(e);
    return History(std::move(kept));
  }

  std::vector<std::string> objects() const {
    std::set<std::string> seen;
    for (const auto& e : events_) seen.insert(e.object);
    return {seen.begin(), seen.end()};
  }

  /// Moves invocations earlier and responses later, re-sorts and
  /// re-validates. Throws Error if a shift would push an invocation below
  /// tick 0 and ClientOverlapViolation if the extension makes operations
  /// of one client overlap. Deltas for unknown ops throw UnknownOp; a
  /// `later` shift on a pending op is ignored.
  History extend_timelines(const std::map<OpId, TimelineDelta>& deltas) const {
    for (const auto& [op, d] : deltas) {
      (void)span_of(op);
      if (d.earlier < 0 || d.later < 0) throw Error("timeline shifts must be non-negative");
    }
    std::vector<EventRecord> shifted = events_;
    for (auto& e : shifted) {
      auto it = deltas.find(e.op_id);
      if (it == deltas.end()) continue;
      if (e.kind == EventKind::invocation) {
        e.time -= it->second.earlier;
        if (e.time < 0) throw Error("extension pushes invocation below tick 0 (op_id=" +
                                    std::to_string(e.op_id) + ")");
      } else {
        e.time += it->second.later;
      }
    }
    try {
      return History(std::move(shifted));
    } catch (const MalformedHistory& m) {
      // The only invariant a pure extension can break is per-client
      // sequentiality; report it under its own name.
      throw ClientOverlapViolation(std::string("timeline extension: ") + m.what());
    }
  }

  /// Resolves pending operations: drop them, or synthesize responses one
  /// tick past the latest event (payload `ok`).
  History completed(CompletionPolicy policy) const {
    if (pending_.empty()) return *this;
    std::vector<EventRecord> out;
    if (policy == CompletionPolicy::drop_pending) {
      std::set<OpId> drop(pending_.begin(), pending_.end());
      for (const auto& e : events_)
        if (!drop.count(e.op_id)) out.push_back(e);
      return History(std::move(out));
    }
    out = events_;
    Tick horizon = 0;
    EventId next_id = 0;
    for (const auto& e : events_) {
      horizon = std::max(horizon, e.time);
      next_id = std::max(next_id, e.event_id);
    }
    for (OpId op : pending_) {
      const auto& inv = invocation_of(op);
      EventRecord resp;
      resp.event_id = ++next_id;
      resp.kind = EventKind::response;
      resp.op_id = op;
      resp.client = inv.client;
      resp.object = inv.object;
      resp.op_name = inv.op_name;
      resp.payload = {Value::unit()};
      resp.time = horizon + 1;
      out.push_back(resp);
    }
    return History(std::move(out));
  }

  /// The recorded return value of a complete operation.
  const Value& return_of(OpId op) const {
    const auto& r = response_of(op);
    static const Value kUnit = Value::unit();
    return r.payload.empty() ? kUnit : r.payload.front();
  }

  friend bool operator==(const History& a, const History& b) { return a.events_ == b.events_; }

 private:
  explicit History(std::vector<EventRecord> events) : events_(std::move(events)) {
    std::stable_sort(events_.begin(), events_.end(), [](const EventRecord& a, const EventRecord& b) {
      if (a.time != b.time) return a.time < b.time;
      return a.event_id < b.event_id;
    });
    validate();
    index();
  }

  OpId check_op(OpId op) const {
    if (!span_index_.count(op)) throw UnknownOp(op);
    return op;
  }

  void validate() const {
    std::set<EventId> ids;
    struct OpInfo {
      const EventRecord* inv = nullptr;
      const EventRecord* resp = nullptr;
    };
    std::map<OpId, OpInfo> ops;
    for (const auto& e : events_) {
      if (!ids.insert(e.event_id).second)
        throw MalformedHistory("duplicate event_id", e.event_id);
      auto& info = ops[e.op_id];
      if (e.kind == EventKind::invocation) {
        if (info.inv) throw MalformedHistory("duplicate invocation for op", e.event_id);
        info.inv = &e;
      } else {
        if (info.resp) throw MalformedHistory("duplicate response for op", e.event_id);
        info.resp = &e;
      }
    }
    for (const auto& [op, info] : ops) {
      (void)op;
      if (!info.inv) throw MalformedHistory("response without invocation", info.resp->event_id);
      if (info.resp) {
        if (info.resp->client != info.inv->client || info.resp->object != info.inv->object ||
            info.resp->op_name != info.inv->op_name)
          throw MalformedHistory("response does not match its invocation", info.resp->event_id);
        if (info.inv->time >= info.resp->time)
          throw MalformedHistory("response not after invocation", info.resp->event_id);
      }
    }
    // Per-client sequentiality: in sorted order each client's events must
    // alternate invocation/response of the same operation.
    std::map<std::string, const EventRecord*> open;  // client -> pending invocation
    for (const auto& e : events_) {
      auto it = open.find(e.client);
      if (e.kind == EventKind::invocation) {
        if (it != open.end() && it->second != nullptr)
          throw MalformedHistory("client has concurrent pending operations", e.event_id);
        open[e.client] = &e;
      } else {
        if (it == open.end() || it->second == nullptr || it->second->op_id != e.op_id)
          throw MalformedHistory("response out of client order", e.event_id);
        it->second = nullptr;
      }
    }
  }

  void index() {
    std::map<OpId, OperationSpan> spans;
    for (std::size_t i = 0; i < events_.size(); ++i) {
      const auto& e = events_[i];
      if (e.kind == EventKind::invocation) {
        spans[e.op_id].op_id = e.op_id;
        spans[e.op_id].invocation_time = e.time;
        inv_event_[e.op_id] = i;
      } else {
        spans[e.op_id].response_time = e.time;
        resp_event_[e.op_id] = i;
      }
    }
    spans_.reserve(spans.size());
    for (auto& [op, s] : spans) {
      if (!s.response_time) pending_.push_back(op);
      spans_.push_back(s);
    }
    std::sort(spans_.begin(), spans_.end(), [](const OperationSpan& a, const OperationSpan& b) {
      if (a.invocation_time != b.invocation_time) return a.invocation_time < b.invocation_time;
      return a.op_id < b.op_id;
    });
    for (std::size_t i = 0; i < spans_.size(); ++i) span_index_[spans_[i].op_id] = i;
  }

  std::vector<EventRecord> events_;
  std::vector<OperationSpan> spans_;
  std::vector<OpId> pending_;
  std::unordered_map<OpId, std::size_t> span_index_;
  std::unordered_map<OpId, std::size_t> inv_event_;
  std::unordered_map<OpId, std::size_t> resp_event_;
};

/// Convenience free functions mirroring the member API.
inline History build_history(std::vector<EventRecord> events) {
  return History::build(std::move(events));
}

inline bool real_time_precedes(const History& h, OpId a, OpId b) {
  return h.real_time_precedes(a, b);
}

inline History project_object(const History& h, std::string_view object) {
  return h.project_object(object);
}

inline History extend_timelines(const History& h, const std::map<OpId, TimelineDelta>& deltas) {
  return h.extend_timelines(deltas);
}

inline History complete_history(const History& h, CompletionPolicy policy) {
  return h.completed(policy);
}

/// Small builder used by the simulator, the generators and the tests to
/// assemble histories without hand-numbering events.
class HistoryBuilder {
 public:
  OpId invoke(std::string client, std::string object, std::string op_name, Values args, Tick t) {
    OpId op = next_op_++;
    events_.push_back({next_event_++, EventKind::invocation, op, std::move(client),
                       std::move(object), std::move(op_name), std::move(args), t});
    return op;
  }

  void respond(OpId op, Value ret, Tick t) {
    for (const auto& e : events_) {
      if (e.op_id == op && e.kind == EventKind::invocation) {
        events_.push_back({next_event_++, EventKind::response, op, e.client, e.object, e.op_name,
                           Values{ret}, t});
        return;
      }
    }
    throw UnknownOp(op);
  }

  /// One complete operation, span [t_inv, t_resp].
  OpId op(std::string client, std::string object, std::string op_name, Values args, Value ret,
          Tick t_inv, Tick t_resp) {
    OpId id = invoke(std::move(client), std::move(object), std::move(op_name), std::move(args), t_inv);
    respond(id, ret, t_resp);
    return id;
  }

  History build() const { return History::build(events_); }

 private:
  std::vector<EventRecord> events_;
  OpId next_op_ = 1;
  EventId next_event_ = 1;
};

}  // namespace linsmr

#endif  // LINSMR_HISTORY_HPP_
