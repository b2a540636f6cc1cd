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

#include "linsmr/program.hpp"

using namespace linsmr;

TEST_CASE("listing-style program compiles with two critical sections", "[program]") {
  auto p = compile_program(R"(program D() {
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
  })");
  REQUIRE(p.name == "D");
  REQUIRE(p.params.empty());
  auto locks = std::count_if(p.body.begin(), p.body.end(),
                             [](const Instr& i) { return i.kind == Instr::Kind::lock; });
  REQUIRE(locks == 2);
  REQUIRE(p.body.back().kind == Instr::Kind::ret);
  REQUIRE(p.body.back().returns_unit);
  REQUIRE(p.locals() == std::vector<std::string>{"w"});
}

TEST_CASE("structural validation", "[program]") {
  SECTION("missing unlock") {
    REQUIRE_THROWS_AS(compile_program("program p() {\n lock a\n return 1\n}"), UnbalancedLocks);
  }
  SECTION("empty body") {
    REQUIRE_THROWS_AS(compile_program("program p() {\n}"), ParseError);
  }
  SECTION("missing trailing return") {
    REQUIRE_THROWS_AS(compile_program("program p() {\n lock a\n unlock a\n}"), ParseError);
  }
  SECTION("return only at the end") {
    REQUIRE_THROWS_AS(compile_program("program p() {\n return 1\n return 2\n}"), ParseError);
  }
  SECTION("unlock must match the innermost lock") {
    REQUIRE_THROWS_AS(compile_program("program p() {\n lock a\n lock b\n unlock a\n unlock b\n return ok\n}"),
                      UnbalancedLocks);
  }
  SECTION("no lock re-entry") {
    REQUIRE_THROWS_AS(compile_program("program p() {\n lock a\n lock a\n unlock a\n unlock a\n return ok\n}"),
                      UnbalancedLocks);
  }
  SECTION("wait requires holding exactly its lock") {
    REQUIRE_THROWS_AS(compile_program("program p() {\n wait c a\n return ok\n}"), WaitWithoutLock);
    REQUIRE_THROWS_AS(compile_program("program p() {\n lock b\n wait c a\n unlock b\n return ok\n}"),
                      WaitWithoutLock);
  }
  SECTION("shared access needs a lock") {
    REQUIRE_THROWS_AS(compile_program("program p() {\n read x s\n return x\n}"), UnbalancedLocks);
    REQUIRE_THROWS_AS(compile_program("program p() {\n write s 1\n return ok\n}"), UnbalancedLocks);
    REQUIRE_THROWS_AS(compile_program("program p() {\n signal c\n return ok\n}"), UnbalancedLocks);
  }
  SECTION("nested calls may not sit inside a lock region") {
    REQUIRE_THROWS_AS(
        compile_program("program p() {\n lock a\n call _ o.get()\n unlock a\n return ok\n}"),
        UnsupportedProgram);
  }
  SECTION("use before assignment") {
    REQUIRE_THROWS_AS(compile_program("program p() {\n compute x y + 1\n return x\n}"), ParseError);
  }
  SECTION("parameters are assigned") {
    auto p = compile_program("program p(a, b) {\n compute x a + b\n return x\n}");
    REQUIRE(p.params == std::vector<std::string>{"a", "b"});
  }
}

TEST_CASE("expression grammar", "[program]") {
  auto eval = [](const std::string& text) {
    auto p = compile_program("program p() {\n compute z " + text + "\n return z\n}");
    std::map<std::string, std::int64_t> env;
    return p.body[0].expr.eval(env);
  };
  REQUIRE(eval("1 + 2 * 3") == 7);
  REQUIRE(eval("(1 + 2) * 3") == 9);
  REQUIRE(eval("10 - 3 - 2") == 5);
  REQUIRE(eval("-4 + 6") == 2);
  REQUIRE(eval("2 * -3") == -6);
}

TEST_CASE("call instruction parses object, op and arguments", "[program]") {
  auto p = compile_program(R"(program f(x) {
    call r agg.write(x + 1, 2)
    call _ agg.read()
    return r
  })");
  REQUIRE(p.body[0].kind == Instr::Kind::call);
  REQUIRE(p.body[0].target == "r");
  REQUIRE(p.body[0].source == "agg");
  REQUIRE(p.body[0].op == "write");
  REQUIRE(p.body[0].args.size() == 2);
  REQUIRE(p.body[1].target == "_");
  REQUIRE(p.has_nested_call());
}

TEST_CASE("object blocks", "[program]") {
  SECTION("declarations and programs") {
    auto def = compile_object(R"(object o {
      shared s = -2
      shared t
      lock m
      cond c
      program get() {
        lock m
        read v s
        unlock m
        return v
      }
    })");
    REQUIRE(def.shared_vars == std::vector<std::string>{"s", "t"});
    REQUIRE(def.shared_init == std::vector<std::int64_t>{-2, 0});
    REQUIRE(def.initial_state() == SpecState{-2, 0, 0});  // trailing condition latch
    REQUIRE(def.cond_index("c") == 2);
    REQUIRE(def.has_program("get"));
    REQUIRE_FALSE(def.is_builtin());
  }
  SECTION("builtin shorthand") {
    auto def = compile_object("object r builtin register");
    REQUIRE(def.is_builtin());
    REQUIRE(def.builtin == "register");
  }
  SECTION("undeclared names are rejected") {
    REQUIRE_THROWS_AS(compile_object(R"(object o {
      lock m
      program p() {
        lock m
        write s 1
        unlock m
        return ok
      }
    })"),
                      ParseError);
    REQUIRE_THROWS_AS(compile_object(R"(object o {
      shared s
      program p() {
        lock m
        read v s
        unlock m
        return v
      }
    })"),
                      ParseError);
  }
}
