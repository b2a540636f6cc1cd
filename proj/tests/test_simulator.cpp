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
#include "linsmr/quorum.hpp"
#include "linsmr/scenarios.hpp"
#include "linsmr/simulator.hpp"

using namespace linsmr;

namespace {

Workload two_object_workload() {
  Workload w;
  w.clients.push_back({"c0", 1, 1,
                       {{1, "reg1", "write", {Value::integer(1)}}, {2, "reg2", "read", {}}}});
  w.clients.push_back({"c1", 2, 1,
                       {{3, "reg2", "write", {Value::integer(7)}}, {4, "reg1", "read", {}}}});
  return w;
}

std::vector<ObjectDef> two_registers() {
  ObjectDef a;
  a.name = "reg1";
  a.builtin = "register";
  ObjectDef b;
  b.name = "reg2";
  b.builtin = "register";
  return {a, b};
}

OpId op_of_client(const History& h, const std::string& client) {
  for (const auto& s : h.spans())
    if (h.invocation_of(s.op_id).client == client) return s.op_id;
  FAIL("no operation for client " + client);
  return 0;
}

}  // namespace

TEST_CASE("identical configuration and seed give identical outputs", "[simulator]") {
  auto a = run_listing_scenario();
  auto b = run_listing_scenario();
  REQUIRE(a == b);

  SimConfig cfg;
  cfg.seed = 11;
  cfg.ordering = OrderingMode::partial_order;
  auto x = run_smr(cfg, two_object_workload(), two_registers());
  auto y = run_smr(cfg, two_object_workload(), two_registers());
  REQUIRE(x == y);
}

TEST_CASE("correct replicas agree under total order", "[simulator]") {
  auto out = run_smr(SimConfig{}, two_object_workload(), two_registers());
  REQUIRE(out.correct_replicas == std::vector<int>{0, 1, 2});
  for (int r : out.correct_replicas) {
    REQUIRE(out.delivery_order.at(r) == out.delivery_order.at(0));
    REQUIRE(out.replica_states.at(r) == out.replica_states.at(0));
    REQUIRE(out.inner_histories.at(r) == out.inner_histories.at(0));
  }
  REQUIRE(out.client_history.complete());
  auto [o1, o2] = check_schneider_properties(out.schneider());
  REQUIRE(o1);
  REQUIRE(o2);
}

TEST_CASE("outer spans strictly contain inner spans", "[simulator]") {
  auto out = run_listing_scenario();
  for (const auto& [client, name] :
       std::vector<std::pair<std::string, std::string>>{{"cd", "D"}, {"ce", "E"}}) {
    const auto& outer = out.client_history.span_of(op_of_client(out.client_history, client));
    for (int r : out.correct_replicas) {
      const auto& ih = out.inner_histories.at(r);
      const auto& inner = ih.span_of(op_of_client(ih, client));
      REQUIRE(ih.invocation_of(inner.op_id).op_name == name);
      REQUIRE(outer.invocation_time < inner.invocation_time);
      REQUIRE(*inner.response_time < *outer.response_time);
    }
  }
}

TEST_CASE("a crashed replica stops executing but requests still complete", "[simulator]") {
  SimConfig cfg;
  cfg.fault_plan.crashes.push_back({2, 3});
  auto out = run_smr(cfg, two_object_workload(), two_registers());
  REQUIRE(out.client_history.complete());
  REQUIRE(out.correct_replicas == std::vector<int>{0, 1});
  REQUIRE(out.inner_histories.at(0) == out.inner_histories.at(1));
  REQUIRE(out.inner_histories.at(2).spans().size() <
          out.inner_histories.at(0).spans().size());
  // Client decisions come from the surviving pair.
  for (const auto& [id, records] : out.responses) {
    (void)id;
    for (const auto& rec : records) REQUIRE(rec.replica != 2);
  }
}

TEST_CASE("partial order keeps replicas convergent", "[simulator]") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.ordering = OrderingMode::partial_order;
    auto out = run_smr(cfg, two_object_workload(), two_registers());
    REQUIRE(out.client_history.complete());
    for (int r : out.correct_replicas) {
      REQUIRE(out.replica_states.at(r) == out.replica_states.at(0));
      for (const auto& obj : std::vector<std::string>{"reg1", "reg2"}) {
        auto a = out.inner_histories.at(r).project_object(obj);
        auto b = out.inner_histories.at(0).project_object(obj);
        REQUIRE(a.spans().size() == b.spans().size());
      }
    }
    auto [o1, o2] = check_schneider_properties(out.schneider());
    REQUIRE(o1);
    REQUIRE(o2);
  }
}

TEST_CASE("duplicate request ids collapse to one executed instance", "[simulator]") {
  Workload w;
  w.clients.push_back({"mal1", 1, 1, {{7, "reg1", "write", {Value::integer(3)}}}});
  w.clients.push_back({"mal2", 2, 1,
                       {{7, "reg1", "write", {Value::integer(9)}}, {8, "reg1", "read", {}}}});
  auto out = run_smr(SimConfig{}, w, two_registers());
  REQUIRE(std::count(out.processing_order.begin(), out.processing_order.end(), 7) == 1);
  for (int r : out.correct_replicas) {
    const auto& ih = out.inner_histories.at(r);
    std::size_t writes = 0;
    for (const auto& s : ih.spans())
      if (ih.invocation_of(s.op_id).op_name == "write") ++writes;
    REQUIRE(writes == 1);
  }
  // The surviving instance is the first-issued one, so the read sees 3.
  OpId read_op = 0;
  for (const auto& s : out.client_history.spans())
    if (out.client_history.invocation_of(s.op_id).op_name == "read") read_op = s.op_id;
  REQUIRE(out.client_history.return_of(read_op) == Value::integer(3));
}

TEST_CASE("conditional wait needs the lock-level scheduler", "[simulator]") {
  auto out = run_conditional_wait_scenario();
  REQUIRE(out.client_history.complete());
  OpId take_op = op_of_client(out.client_history, "ca");
  REQUIRE(out.client_history.return_of(take_op) == Value::integer(5));
  REQUIRE_THROWS_AS(run_conditional_wait_scenario(kConditionalWaitSeed, SchedulerKind::sequential),
                    DeadlockDetected);
}

TEST_CASE("configuration limits are enforced", "[simulator]") {
  SimConfig cfg;
  cfg.n = 3;
  cfg.f = 1;
  cfg.fault_plan.crashes.push_back({0, 2});
  cfg.fault_plan.crashes.push_back({1, 4});
  REQUIRE_THROWS_AS(run_smr(cfg, two_object_workload(), two_registers()), OutOfSpecRun);
  cfg.allow_out_of_spec = true;
  REQUIRE_NOTHROW(run_smr(cfg, two_object_workload(), two_registers()));

  SimConfig byz;
  byz.n = 3;
  byz.f = 1;
  byz.failure_model = FailureModel::byzantine;
  byz.fault_plan.byzantine[1] = ByzantineBehavior::response_flip;
  // Byzantine tolerance needs n >= 3f + 1.
  REQUIRE_THROWS_AS(run_smr(byz, two_object_workload(), two_registers()), ConfigInvalid);

  SimConfig bad;
  bad.f = -1;
  REQUIRE_THROWS_AS(bad.validate(), ConfigInvalid);
}

TEST_CASE("catalog scenarios reproduce their verdict matrices", "[simulator]") {
  for (const auto& name : std::vector<std::string>{"listing1", "exchanger"}) {
    auto run = run_scenario(name);
    for (const auto& view : run.views) {
      REQUIRE(view.expected.has_value());
      auto report = check_hierarchy(view.history, view.bundle);
      REQUIRE(report.lin.accepted == view.expected->lin);
      REQUIRE(report.set.accepted == view.expected->set);
      REQUIRE(report.mp.accepted == view.expected->mp);
      REQUIRE(report.interval.accepted == view.expected->interval);
      REQUIRE_FALSE(report.containment_violation);
    }
  }
}

TEST_CASE("quorum register shows the new-old inversion only without repair", "[simulator]") {
  auto stale = run_quorum_register(false, anomaly_delay_plan(), anomaly_workload());
  REQUIRE(stale.return_of(op_of_client(stale, "bob")) == Value::integer(1));
  REQUIRE(stale.return_of(op_of_client(stale, "carol")) == Value::integer(0));
  REQUIRE_FALSE(check_linearizable(stale, register_spec()).accepted);

  auto repaired = run_quorum_register(true, anomaly_delay_plan(), anomaly_workload());
  REQUIRE(repaired.return_of(op_of_client(repaired, "carol")) == Value::integer(1));
  REQUIRE(check_linearizable(repaired, register_spec()).accepted);
}

TEST_CASE("scenario files parse and run", "[simulator]") {
  const std::string text = R"(# two writers, one reader
config n 3
config f 1
config seed 5
object reg builtin register
client w1 start 1 think 1
client w2 start 2 think 1
request 1 w1 reg write 4
request 2 w2 reg write 6
request 3 w1 reg read
edge 1 3
check reg register
)";
  auto file = parse_scenario_file(text);
  REQUIRE(file.config.n == 3);
  REQUIRE(file.config.seed == 5);
  REQUIRE(file.workload.clients.size() == 2);
  REQUIRE(file.workload.causal_edges ==
          std::vector<std::pair<std::uint64_t, std::uint64_t>>{{1, 3}});
  REQUIRE(file.objects.size() == 1);
  REQUIRE(file.checks == std::vector<std::pair<std::string, std::string>>{{"reg", "register"}});

  auto run = run_scenario_file(file);
  REQUIRE(run.output.has_value());
  REQUIRE(run.output->client_history.complete());
  REQUIRE(run.views.size() == 1);
  REQUIRE(check_hierarchy(run.views[0].history, run.views[0].bundle).lin.accepted);
}

TEST_CASE("scenario file errors carry line numbers", "[simulator]") {
  REQUIRE_THROWS_AS(parse_scenario_file("request 1 ghost reg read\n"), ParseError);
  REQUIRE_THROWS_AS(parse_scenario_file("client a start 1 think 1\n"
                                        "object reg builtin register\n"
                                        "request 1 a reg read\n"
                                        "request 1 a reg read\n"),
                    ParseError);
  REQUIRE_THROWS_AS(parse_scenario_file("config n three\n"), ParseError);
  try {
    parse_scenario_file("config n 3\nbogus line here\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
  }
}
