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
#include "linsmr/simulator.hpp"
#include "linsmr/voting.hpp"

using namespace linsmr;

namespace {

ResponseSet set_of(std::vector<ReplicaResponse> rs) {
  return {1, std::move(rs)};
}

}  // namespace

TEST_CASE("vote accepts the first value confirmed by f+1 replicas", "[voting]") {
  auto rs = set_of({{0, Value::integer(5), 3}, {1, Value::integer(5), 4}, {2, Value::integer(5), 6}});
  REQUIRE(vote(rs, 1) == VoteDecision::of(Value::integer(5), 4));
  REQUIRE(vote(rs, 0) == VoteDecision::of(Value::integer(5), 3));
  REQUIRE(vote(rs, 2) == VoteDecision::of(Value::integer(5), 6));
}

TEST_CASE("vote processes responses in arrival order with replica tie-break", "[voting]") {
  // The wrong value arrives first; the two matching answers decide later.
  auto rs = set_of({{2, Value::integer(9), 1}, {0, Value::integer(4), 2}, {1, Value::integer(4), 5}});
  REQUIRE(vote(rs, 1) == VoteDecision::of(Value::integer(4), 5));

  // Same arrival tick: replica order decides which response closes the vote.
  auto tie = set_of({{1, Value::integer(4), 7}, {0, Value::integer(4), 7}});
  REQUIRE(vote(tie, 1) == VoteDecision::of(Value::integer(4), 7));
}

TEST_CASE("vote stays undecided without a quorum", "[voting]") {
  REQUIRE(vote(set_of({}), 1) == VoteDecision::undecided());
  auto split = set_of({{0, Value::integer(1), 2}, {1, Value::integer(2), 3}});
  REQUIRE(vote(split, 1) == VoteDecision::undecided());
  REQUIRE(vote(split, 0).decided);
}

TEST_CASE("vote rejects double answers and negative f", "[voting]") {
  auto rs = set_of({{0, Value::integer(1), 2}, {0, Value::integer(1), 4}});
  REQUIRE_THROWS_AS(vote(rs, 1), DuplicateReplicaResponse);
  REQUIRE_THROWS_AS(vote(set_of({}), -1), MalformedInput);
}

TEST_CASE("outer history assembly keeps undecided requests pending", "[voting]") {
  std::vector<OuterRequest> reqs;
  reqs.push_back({1, "ca", "reg", "write", {Value::integer(3)}, 1,
                  VoteDecision::of(Value::unit(), 6)});
  reqs.push_back({2, "cb", "reg", "read", {}, 4, VoteDecision::undecided()});
  auto h = assemble_outer_history(reqs);
  REQUIRE(h.spans().size() == 2);
  REQUIRE_FALSE(h.complete());
  REQUIRE(h.pending().size() == 1);
  REQUIRE(h.invocation_of(h.pending()[0]).client == "cb");

  std::vector<OuterRequest> bad;
  bad.push_back({3, "cc", "reg", "read", {}, 5, VoteDecision::of(Value::integer(0), 5)});
  REQUIRE_THROWS_AS(assemble_outer_history(bad), MalformedInput);
}

TEST_CASE("byzantine responses are outvoted", "[voting]") {
  Workload w;
  w.clients.push_back({"ca", 1, 1,
                       {{1, "reg", "write", {Value::integer(6)}}, {2, "reg", "read", {}}}});
  ObjectDef reg;
  reg.name = "reg";
  reg.builtin = "register";

  for (auto behavior : {ByzantineBehavior::response_flip, ByzantineBehavior::response_drop,
                        ByzantineBehavior::wrong_value}) {
    SimConfig cfg;
    cfg.n = 4;
    cfg.f = 1;
    cfg.failure_model = FailureModel::byzantine;
    cfg.fault_plan.byzantine[3] = behavior;
    auto out = run_smr(cfg, w, {reg});
    REQUIRE(out.client_history.complete());
    REQUIRE(out.correct_replicas == std::vector<int>{0, 1, 2});

    for (const auto& s : out.client_history.spans()) {
      const auto& decided = out.client_history.return_of(s.op_id);
      std::uint64_t id = out.client_history.invocation_of(s.op_id).op_name == "write" ? 1 : 2;
      for (const auto& rec : out.responses.at(id)) {
        if (rec.replica == 3) continue;
        REQUIRE(rec.value == decided);
      }
      if (behavior == ByzantineBehavior::response_drop) {
        for (const auto& rec : out.responses.at(id)) REQUIRE(rec.replica != 3);
      } else {
        bool saw_corrupt = false;
        for (const auto& rec : out.responses.at(id))
          if (rec.replica == 3 && rec.value != decided) saw_corrupt = true;
        // wrong_value may coincide with a decided 42; flip never matches.
        if (behavior == ByzantineBehavior::response_flip) REQUIRE(saw_corrupt);
      }
    }
    REQUIRE(check_linearizable(out.client_history.project_object("reg"), register_spec())
                .accepted);
  }
}
