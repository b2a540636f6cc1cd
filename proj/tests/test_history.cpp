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

#include <catch2/catch_amalgamated.hpp>

#include "linsmr/history.hpp"
#include "linsmr/trace.hpp"

using namespace linsmr;

namespace {

History two_sequential_ops() {
  HistoryBuilder b;
  b.op("c1", "reg", "write", {Value::integer(5)}, Value::unit(), 1, 3);
  b.op("c2", "reg", "read", {}, Value::integer(5), 5, 7);
  return b.build();
}

}  // namespace

TEST_CASE("events sort by time with event_id tiebreak", "[history]") {
  std::vector<EventRecord> ev;
  ev.push_back({2, EventKind::response, 1, "c1", "reg", "read", {Value::integer(0)}, 4});
  ev.push_back({1, EventKind::invocation, 1, "c1", "reg", "read", {}, 2});
  auto h = History::build(ev);
  REQUIRE(h.events().front().kind == EventKind::invocation);
  REQUIRE(h.events().back().kind == EventKind::response);
  REQUIRE(h.complete());
  REQUIRE(h.spans().size() == 1);
  REQUIRE(h.spans()[0].invocation_time == 2);
  REQUIRE(h.spans()[0].response_time == 4);
}

TEST_CASE("validation rejects malformed inputs", "[history]") {
  SECTION("duplicate event id") {
    std::vector<EventRecord> ev;
    ev.push_back({1, EventKind::invocation, 1, "c1", "reg", "read", {}, 1});
    ev.push_back({1, EventKind::response, 1, "c1", "reg", "read", {Value::integer(0)}, 2});
    REQUIRE_THROWS_AS(History::build(ev), MalformedHistory);
  }
  SECTION("response without invocation") {
    std::vector<EventRecord> ev;
    ev.push_back({1, EventKind::response, 7, "c1", "reg", "read", {Value::integer(0)}, 2});
    REQUIRE_THROWS_AS(History::build(ev), MalformedHistory);
  }
  SECTION("response fields must match the invocation") {
    std::vector<EventRecord> ev;
    ev.push_back({1, EventKind::invocation, 1, "c1", "reg", "read", {}, 1});
    ev.push_back({2, EventKind::response, 1, "c1", "reg", "write", {Value::unit()}, 2});
    REQUIRE_THROWS_AS(History::build(ev), MalformedHistory);
  }
  SECTION("response must come strictly after invocation") {
    std::vector<EventRecord> ev;
    ev.push_back({1, EventKind::invocation, 1, "c1", "reg", "read", {}, 3});
    ev.push_back({2, EventKind::response, 1, "c1", "reg", "read", {Value::integer(0)}, 3});
    REQUIRE_THROWS_AS(History::build(ev), MalformedHistory);
  }
  SECTION("a client cannot have two pending operations") {
    std::vector<EventRecord> ev;
    ev.push_back({1, EventKind::invocation, 1, "c1", "reg", "read", {}, 1});
    ev.push_back({2, EventKind::invocation, 2, "c1", "reg", "read", {}, 2});
    REQUIRE_THROWS_AS(History::build(ev), MalformedHistory);
  }
  SECTION("error carries the offending event id") {
    std::vector<EventRecord> ev;
    ev.push_back({1, EventKind::invocation, 1, "c1", "reg", "read", {}, 1});
    ev.push_back({9, EventKind::invocation, 2, "c1", "reg", "read", {}, 2});
    try {
      History::build(ev);
      FAIL("expected MalformedHistory");
    } catch (const MalformedHistory& m) {
      REQUIRE(m.event_id == 9);
      REQUIRE(std::string(m.what()).find("event_id=9") != std::string::npos);
    }
  }
}

TEST_CASE("real_time_precedes is strict", "[history]") {
  SECTION("gap implies precedence") {
    auto h = two_sequential_ops();
    auto a = h.spans()[0].op_id;
    auto b = h.spans()[1].op_id;
    REQUIRE(h.real_time_precedes(a, b));
    REQUIRE_FALSE(h.real_time_precedes(b, a));
  }
  SECTION("touching ticks count as concurrent") {
    HistoryBuilder b;
    auto x = b.op("c1", "reg", "write", {Value::integer(1)}, Value::unit(), 1, 5);
    auto y = b.op("c2", "reg", "read", {}, Value::integer(1), 5, 8);
    auto h = b.build();
    REQUIRE_FALSE(h.real_time_precedes(x, y));
    REQUIRE_FALSE(h.real_time_precedes(y, x));
  }
  SECTION("pending operation cannot be ordered") {
    HistoryBuilder b;
    auto x = b.invoke("c1", "reg", "read", {}, 1);
    auto y = b.op("c2", "reg", "read", {}, Value::integer(0), 2, 3);
    auto h = b.build();
    REQUIRE_FALSE(h.complete());
    REQUIRE_THROWS_AS(h.real_time_precedes(x, y), UnknownOp);
    REQUIRE_THROWS_AS(h.real_time_precedes(99, y), UnknownOp);
  }
}

TEST_CASE("projection keeps ids and order; unknown object is empty", "[history]") {
  HistoryBuilder b;
  auto x = b.op("c1", "reg", "write", {Value::integer(1)}, Value::unit(), 1, 3);
  b.op("c1", "queue", "enq", {Value::integer(2)}, Value::unit(), 4, 6);
  auto h = b.build();
  auto hr = h.project_object("reg");
  REQUIRE(hr.spans().size() == 1);
  REQUIRE(hr.spans()[0].op_id == x);
  REQUIRE(h.project_object("nope").empty());
  REQUIRE(h.objects() == std::vector<std::string>{"queue", "reg"});
}

TEST_CASE("extend_timelines moves invocations earlier and responses later", "[history]") {
  auto h = two_sequential_ops();
  auto a = h.spans()[0].op_id;
  auto b = h.spans()[1].op_id;

  SECTION("extension removes precedence") {
    REQUIRE(h.real_time_precedes(a, b));
    auto h2 = h.extend_timelines({{b, {4, 0}}});
    REQUIRE(h2.spans()[0].invocation_time == 1);
    REQUIRE_FALSE(h2.real_time_precedes(a, b));
  }
  SECTION("later shift widens the response side") {
    auto h2 = h.extend_timelines({{a, {0, 10}}});
    REQUIRE(*h2.span_of(a).response_time == 13);
  }
  SECTION("invocation cannot move below tick zero") {
    REQUIRE_THROWS_AS(h.extend_timelines({{a, {2, 0}}}), Error);
  }
  SECTION("unknown op") {
    REQUIRE_THROWS_AS(h.extend_timelines({{1234, {1, 0}}}), UnknownOp);
  }
  SECTION("per-client overlap is reported") {
    HistoryBuilder hb;
    auto x = hb.op("c1", "reg", "read", {}, Value::integer(0), 1, 3);
    auto y = hb.op("c1", "reg", "read", {}, Value::integer(0), 5, 7);
    auto hh = hb.build();
    (void)x;
    REQUIRE_THROWS_AS(hh.extend_timelines({{y, {3, 0}}}), ClientOverlapViolation);
  }
}

TEST_CASE("completion policies", "[history]") {
  HistoryBuilder b;
  b.op("c1", "reg", "write", {Value::integer(1)}, Value::unit(), 1, 3);
  auto p = b.invoke("c2", "reg", "read", {}, 2);
  auto h = b.build();
  REQUIRE(h.pending() == std::vector<OpId>{p});

  auto dropped = h.completed(CompletionPolicy::drop_pending);
  REQUIRE(dropped.complete());
  REQUIRE(dropped.spans().size() == 1);

  auto closed = h.completed(CompletionPolicy::close_pending_at_horizon);
  REQUIRE(closed.complete());
  REQUIRE(closed.spans().size() == 2);
  REQUIRE(*closed.span_of(p).response_time == 4);
  REQUIRE(closed.return_of(p) == Value::unit());
}

TEST_CASE("trace round-trips bit-exactly", "[history]") {
  auto h = two_sequential_ops();
  auto text = trace_to_string(h);
  auto h2 = trace_from_string(text);
  REQUIRE(h2 == h);
  REQUIRE(trace_to_string(h2) == text);

  SECTION("value literals survive") {
    HistoryBuilder b;
    b.op("c1", "q", "deq', really", {}, Value::empty(), 1, 2);
    auto hq = b.build();
    auto s = trace_to_string(hq);
    REQUIRE(trace_from_string(s) == hq);
  }
  SECTION("truncated line fails to parse") {
    auto broken = text.substr(0, text.size() / 2);
    REQUIRE_THROWS_AS(trace_from_string(broken), ParseError);
  }
  SECTION("unknown value literal") {
    REQUIRE_THROWS_AS(value_from_json(json::parse("\"nope\"")), ParseError);
  }
  SECTION("event json field order is stable") {
    auto j = event_to_json(h.events().front());
    auto keys = std::vector<std::string>{};
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    REQUIRE(keys == std::vector<std::string>{"event_id", "kind", "op_id", "client", "object",
                                             "op_name", "payload", "time"});
  }
}
