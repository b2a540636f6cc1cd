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

#include "linsmr/specs.hpp"

using namespace linsmr;

namespace {

const char* kLockObjectSource = R"(
object lockobj {
  shared s = 1
  lock m
  program D() {
    lock m
    read w s
    compute w w + 1
    write s w
    unlock m
    compute w w * 2
    lock m
    write s w
    unlock m
    return ok
  }
  program E() {
    lock m
    read v s
    unlock m
    return v
  }
}
)";

}  // namespace

TEST_CASE("register transitions", "[specs]") {
  auto s = register_spec();
  auto [st1, r1] = s.apply({0}, "write", {Value::integer(5)});
  REQUIRE(st1 == SpecState{5});
  REQUIRE(r1 == Value::unit());
  auto [st2, r2] = s.apply({5}, "read", {});
  REQUIRE(st2 == SpecState{5});
  REQUIRE(r2 == Value::integer(5));
  REQUIRE_THROWS_AS(s.apply({0}, "pop", {}), MalformedInput);
  REQUIRE_THROWS_AS(s.apply({0}, "write", {}), MalformedInput);
}

TEST_CASE("counter transitions", "[specs]") {
  auto s = counter_spec();
  SpecState st = s.initial_state;
  st = s.apply(st, "inc", {}).first;
  st = s.apply(st, "inc", {}).first;
  REQUIRE(s.apply(st, "get", {}).second == Value::integer(2));
}

TEST_CASE("fifo queue transitions", "[specs]") {
  auto s = fifo_queue_spec();
  SpecState st = s.initial_state;
  st = s.apply(st, "enq", {Value::integer(1)}).first;
  st = s.apply(st, "enq", {Value::integer(2)}).first;
  auto [st2, front] = s.apply(st, "deq", {});
  REQUIRE(front == Value::integer(1));
  REQUIRE(s.apply(st2, "deq", {}).second == Value::integer(2));
  REQUIRE(s.apply({}, "deq", {}).second == Value::empty());
}

TEST_CASE("lock object sequential and effect forms agree single-threaded", "[specs]") {
  auto [seq, eff] = lock_object_spec();

  SECTION("D then E from the initial state yields 4") {
    SpecState st = seq.initial_state;
    st = seq.apply(st, "D", {}).first;
    REQUIRE(seq.apply(st, "E", {}).second == Value::integer(4));
  }
  SECTION("first effect step of D exposes the intermediate value") {
    auto d = eff.decompose("D", {});
    REQUIRE(d.steps.size() == 2);
    auto r1 = d.steps[0]({1}, d.initial_locals);
    REQUIRE(r1);
    REQUIRE(r1->state == SpecState{2});
    auto erun = eff.decompose("E", {});
    REQUIRE(erun.steps.size() == 1);
    auto obs = erun.steps[0](r1->state, erun.initial_locals);
    REQUIRE(obs);
    REQUIRE(erun.return_of(obs->locals, {*obs->observation}) == Value::integer(2));
    auto r2 = d.steps[1](obs->state, r1->locals);
    REQUIRE(r2);
    REQUIRE(r2->state == SpecState{4});
  }
  SECTION("consecutive steps equal the atomic transition from any state") {
    for (std::int64_t s0 = -3; s0 <= 5; ++s0) {
      for (const char* op : {"D", "E"}) {
        auto [st_eff, ret_eff] = run_effect_sequentially(eff, {s0}, op, {});
        auto [st_seq, ret_seq] = seq.apply({s0}, op, {});
        REQUIRE(st_eff == st_seq);
        REQUIRE(ret_eff == ret_seq);
      }
    }
  }
}

TEST_CASE("one-step effect form of every builtin matches its sequential spec", "[specs]") {
  for (const auto& name : builtin_spec_names()) {
    auto bundle = bundle_by_name(name);
    SpecState st = bundle.sequential.initial_state;
    // Walk a few transitions, comparing at every reached state.
    std::vector<std::pair<std::string, Values>> script;
    if (name == "register")
      script = {{"write", {Value::integer(3)}}, {"read", {}}, {"write", {Value::integer(-1)}}};
    else if (name == "counter")
      script = {{"inc", {}}, {"get", {}}, {"inc", {}}};
    else if (name == "fifo-queue")
      script = {{"enq", {Value::integer(7)}}, {"deq", {}}, {"deq", {}}};
    else
      script = {{"D", {}}, {"E", {}}, {"D", {}}};
    for (const auto& [op, args] : script) {
      auto [st_eff, ret_eff] = run_effect_sequentially(bundle.effect, st, op, args);
      auto [st_seq, ret_seq] = bundle.sequential.apply(st, op, args);
      REQUIRE(st_eff == st_seq);
      REQUIRE(ret_eff == ret_seq);
      st = st_seq;
    }
  }
}

TEST_CASE("exchanger joint transition swaps arguments", "[specs]") {
  auto ex = exchanger_set_spec();
  std::vector<OpInstance> pair = {{"exchange", {Value::integer(1)}},
                                  {"exchange", {Value::integer(2)}}};
  REQUIRE(ex.admissible(pair));
  auto [st, rets] = ex.joint_apply({}, pair);
  REQUIRE(rets == Values{Value::integer(2), Value::integer(1)});
  REQUIRE(ex.base.apply({}, "exchange", {Value::integer(9)}).second == Value::empty());
  std::vector<OpInstance> triple = {pair[0], pair[0], pair[1]};
  REQUIRE_FALSE(ex.admissible(triple));
}

TEST_CASE("singleton set spec admits no joint classes", "[specs]") {
  auto s = singleton_set_spec_of(register_spec());
  REQUIRE_FALSE(s.admissible({{"write", {Value::integer(1)}}, {"read", {}}}));
}

TEST_CASE("product spec routes prefixed operations to state slices", "[specs]") {
  auto p = product_spec({{"X", register_spec()}, {"Y", register_spec()}});
  REQUIRE(p.initial_state == SpecState{0, 0});
  auto st = p.apply(p.initial_state, "Y/write", {Value::integer(4)}).first;
  REQUIRE(st == SpecState{0, 4});
  REQUIRE(p.apply(st, "X/read", {}).second == Value::integer(0));
  REQUIRE(p.apply(st, "Y/read", {}).second == Value::integer(4));
  REQUIRE_THROWS_AS(p.apply(st, "Z/read", {}), MalformedInput);
  REQUIRE_THROWS_AS(p.apply(st, "read", {}), MalformedInput);
}

TEST_CASE("program-derived effect decomposition", "[specs]") {
  auto def = compile_object(kLockObjectSource);

  SECTION("D has two steps, E one") {
    REQUIRE(effect_decomposition_of(def, def.program("D"), {}).steps.size() == 2);
    REQUIRE(effect_decomposition_of(def, def.program("E"), {}).steps.size() == 1);
  }
  SECTION("derived decomposition equals the hand-built effect form") {
    auto derived = effect_spec_of_object(def);
    auto [seq, eff] = lock_object_spec();
    (void)eff;
    for (std::int64_t s0 = -2; s0 <= 4; ++s0) {
      for (const char* op : {"D", "E"}) {
        auto [st_d, ret_d] = run_effect_sequentially(derived, {s0}, op, {});
        auto [st_s, ret_s] = seq.apply({s0}, op, {});
        REQUIRE(st_d == st_s);
        REQUIRE(ret_d == ret_s);
      }
    }
  }
  SECTION("intermediate state between the two steps of D") {
    auto d = effect_decomposition_of(def, def.program("D"), {});
    auto r1 = d.steps[0]({1}, d.initial_locals);
    REQUIRE(r1);
    REQUIRE(r1->state == SpecState{2});
    auto r2 = d.steps[1]({2}, r1->locals);
    REQUIRE(r2);
    REQUIRE(r2->state == SpecState{4});
  }
  SECTION("lock-free program folds into a single identity step") {
    auto p = compile_program(R"(program pure(x) {
      compute y x * x
      return y
    })");
    ObjectDef tiny;
    tiny.name = "tiny";
    tiny.programs.push_back(p);
    auto d = effect_decomposition_of(tiny, p, {Value::integer(6)});
    REQUIRE(d.steps.size() == 1);
    auto r = d.steps[0]({}, d.initial_locals);
    REQUIRE(r);
    REQUIRE(r->state.empty());
    REQUIRE(d.return_of(r->locals, {}) == Value::integer(36));
  }
  SECTION("nested calls have no effect form") {
    auto p = compile_program(R"(program f() {
      call _ other.get()
      return ok
    })");
    ObjectDef tiny;
    tiny.name = "tiny";
    REQUIRE_THROWS_AS(effect_decomposition_of(tiny, p, {}), UnsupportedProgram);
  }
  SECTION("argument count is enforced") {
    REQUIRE_THROWS_AS(effect_decomposition_of(def, def.program("D"), {Value::integer(1)}),
                      MalformedInput);
  }
}
