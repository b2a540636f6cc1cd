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

#include "linsmr/checkers.hpp"
#include "linsmr/generators.hpp"
#include "linsmr/render.hpp"
#include "linsmr/simulator.hpp"

using namespace linsmr;

TEST_CASE("generated histories are well formed and linearizable by construction",
          "[properties]") {
  auto spec = register_spec();
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(seed);
    auto h = random_history(rng, spec);
    REQUIRE(h.complete());
    REQUIRE(check_linearizable(h, spec).accepted);
  }
}

TEST_CASE("mutation can only corrupt a recorded return", "[properties]") {
  auto spec = counter_spec();
  HistoryGenOptions opt;
  opt.mutate_percent = 100;
  std::size_t rejected = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(seed);
    auto h = random_history(rng, spec, opt);
    REQUIRE(h.complete());  // mutation keeps the event structure intact
    if (!check_linearizable(h, spec).accepted) ++rejected;
  }
  REQUIRE(rejected > 0);
}

TEST_CASE("random deltas always produce legal extensions", "[properties]") {
  auto spec = fifo_queue_spec();
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Rng rng(seed);
    auto h = random_history(rng, spec);
    auto delta = random_delta(rng, h);
    auto g = extend_timelines(h, delta);
    for (const auto& s : h.spans()) {
      const auto& e = g.span_of(s.op_id);
      REQUIRE(e.invocation_time <= s.invocation_time);
      REQUIRE(*e.response_time >= *s.response_time);
    }
  }
}

TEST_CASE("random workloads replay on the simulator", "[properties]") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    WorkloadGenOptions opt;
    opt.with_causal_edges = true;
    auto [w, objects] = random_workload(rng, opt);
    SimConfig cfg;
    cfg.seed = seed;
    auto out = run_smr(cfg, w, objects);
    REQUIRE(out.client_history.complete());
    auto [o1, o2] = check_schneider_properties(out.schneider());
    REQUIRE(o1);
    REQUIRE(o2);
  }
}

TEST_CASE("object fusion renames operations onto one composite object", "[properties]") {
  HistoryBuilder b;
  b.op("ca", "X", "write", {Value::integer(1)}, Value::unit(), 1, 2);
  b.op("cb", "Y", "read", {}, Value::integer(0), 3, 4);
  auto fused = fuse_objects(b.build());
  REQUIRE(fused.objects() == std::vector<std::string>{"composite"});
  std::vector<std::string> names;
  for (const auto& s : fused.spans()) names.push_back(fused.invocation_of(s.op_id).op_name);
  std::sort(names.begin(), names.end());
  REQUIRE(names == std::vector<std::string>{"X/write", "Y/read"});
  REQUIRE(fused.spans().size() == 2);
  REQUIRE(fused.span_of(fused.spans()[0].op_id).invocation_time == 1);
}

TEST_CASE("renders are deterministic and cover all modes", "[properties]") {
  HistoryBuilder b;
  b.op("ca", "reg", "write", {Value::integer(2)}, Value::unit(), 1, 4);
  b.op("cb", "reg", "read", {}, Value::integer(2), 3, 6);
  OpId pending = b.invoke("cc", "reg", "read", {}, 5);
  (void)pending;
  auto h = b.build();

  auto a1 = render_ascii(h);
  auto a2 = render_ascii(h);
  REQUIRE(a1 == a2);
  REQUIRE(a1.find("ticks 1..7") == 0);  // pending op extends the axis by two ticks
  REQUIRE(a1.find("reg.write(2)=ok") != std::string::npos);
  REQUIRE(a1.find("=?") != std::string::npos);  // pending op

  auto s1 = render_svg(h);
  REQUIRE(s1 == render_svg(h));
  REQUIRE(s1.find("<svg") == 0);
  REQUIRE(s1.find("dasharray") != std::string::npos);  // pending bar

  REQUIRE(render_ascii(HistoryBuilder{}.build()) == "(empty history)\n");

  RenderOptions iv;
  iv.show = RenderShow::intervals;
  auto overlap = render_ascii(h, iv);
  REQUIRE(overlap.find("overlap") != std::string::npos);
  REQUIRE(overlap.find('^') != std::string::npos);

  HistoryBuilder c;
  c.op("ca", "reg", "write", {Value::integer(2)}, Value::unit(), 1, 4);
  c.op("cb", "reg", "read", {}, Value::integer(2), 3, 6);
  auto complete = c.build();
  auto verdict = check_linearizable(complete, register_spec());
  REQUIRE(verdict.accepted);
  RenderOptions pts;
  pts.show = RenderShow::points;
  pts.witness = verdict.witness;
  auto marked = render_ascii(complete, pts);
  REQUIRE(std::count(marked.begin(), marked.end(), '*') == 2);
  REQUIRE(render_svg(complete, pts).find("<circle") != std::string::npos);
}

TEST_CASE("verdict records round-trip through their serialized form", "[properties]") {
  HistoryBuilder b;
  b.op("ca", "reg", "write", {Value::integer(3)}, Value::unit(), 1, 2);
  b.op("cb", "reg", "read", {}, Value::integer(3), 3, 4);
  auto ok = check_linearizable(b.build(), register_spec());
  REQUIRE(ok.accepted);
  auto ok2 = verdict_from_string(verdict_to_line(ok));
  REQUIRE(ok2.accepted);
  REQUIRE(ok2.level == Level::lin);
  REQUIRE(ok2.witness == ok.witness);

  HistoryBuilder c;
  c.op("ca", "reg", "read", {}, Value::integer(9), 1, 2);
  auto bad = check_linearizable(c.build(), register_spec());
  REQUIRE_FALSE(bad.accepted);
  auto bad2 = verdict_from_string(verdict_to_line(bad));
  REQUIRE_FALSE(bad2.accepted);
  REQUIRE(bad2.explanation == bad.explanation);

  REQUIRE_THROWS_AS(verdict_from_string("not json"), ParseError);
  REQUIRE_THROWS_AS(verdict_from_string("{\"level\":\"lin\"}"), ParseError);
}
