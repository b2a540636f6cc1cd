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

#ifndef LINSMR_PROGRAM_HPP_
#define LINSMR_PROGRAM_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "linsmr/errors.hpp"
#include "linsmr/value.hpp"

namespace linsmr {

/// Integer arithmetic over locals and constants: +, -, * with the usual
/// precedence, parentheses allowed.
struct Expr {
  enum class Kind : std::uint8_t { constant, variable, add, sub, mul };

  Kind kind = Kind::constant;
  std::int64_t value = 0;
  std::string var;
  std::vector<Expr> kids;  // exactly two for add/sub/mul

  static Expr constant(std::int64_t v) {
    Expr e;
    e.kind = Kind::constant;
    e.value = v;
    return e;
  }

  static Expr variable(std::string name) {
    Expr e;
    e.kind = Kind::variable;
    e.var = std::move(name);
    return e;
  }

  static Expr binary(Kind k, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = k;
    e.kids.push_back(std::move(lhs));
    e.kids.push_back(std::move(rhs));
    return e;
  }

  std::int64_t eval(const std::map<std::string, std::int64_t>& env) const {
    switch (kind) {
      case Kind::constant:
        return value;
      case Kind::variable: {
        auto it = env.find(var);
        if (it == env.end()) throw Error("unbound variable '" + var + "'");
        return it->second;
      }
      case Kind::add:
        return kids[0].eval(env) + kids[1].eval(env);
      case Kind::sub:
        return kids[0].eval(env) - kids[1].eval(env);
      case Kind::mul:
        return kids[0].eval(env) * kids[1].eval(env);
    }
    throw Error("unreachable expression kind");
  }

  void collect_variables(std::vector<std::string>& out) const {
    if (kind == Kind::variable) out.push_back(var);
    for (const auto& k : kids) k.collect_variables(out);
  }
};

/// One straight-line instruction. Field use by kind:
///   lock/unlock: target = lock name
///   read:        target = destination local, source = shared variable
///   write:       target = shared variable, expr = value
///   compute:     target = destination local, expr = value
///   wait:        target = condition, source = lock held across the wait
///   signal:      target = condition
///   call:        target = destination local ("_" discards), source = object,
///                op = operation name, args = argument expressions
///   ret:         expr = returned value ("return ok" yields the unit value)
struct Instr {
  enum class Kind : std::uint8_t { lock, unlock, read, write, compute, wait, signal, call, ret };

  Kind kind = Kind::ret;
  std::string target;
  std::string source;
  std::string op;
  Expr expr;
  std::vector<Expr> args;
  bool returns_unit = false;  // ret only
};

inline std::string to_string(Instr::Kind k) {
  switch (k) {
    case Instr::Kind::lock: return "lock";
    case Instr::Kind::unlock: return "unlock";
    case Instr::Kind::read: return "read";
    case Instr::Kind::write: return "write";
    case Instr::Kind::compute: return "compute";
    case Instr::Kind::wait: return "wait";
    case Instr::Kind::signal: return "signal";
    case Instr::Kind::call: return "call";
    case Instr::Kind::ret: return "return";
  }
  return "?";
}

/// A straight-line request handler. Parameters become locals bound from the
/// invocation arguments; further locals come into existence on first
/// assignment (read/compute/call destinations).
struct Program {
  std::string name;
  std::vector<std::string> params;
  std::vector<Instr> body;

  bool has_nested_call() const {
    return std::any_of(body.begin(), body.end(),
                       [](const Instr& i) { return i.kind == Instr::Kind::call; });
  }

  /// Locals in first-binding order: params first, then assignment targets.
  std::vector<std::string> locals() const {
    std::vector<std::string> out = params;
    auto add = [&out](const std::string& v) {
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    for (const auto& i : body)
      if (i.kind == Instr::Kind::read || i.kind == Instr::Kind::compute ||
          (i.kind == Instr::Kind::call && i.target != "_"))
        add(i.target);
    return out;
  }
};

/// An object: shared variables with initial values, locks, conditions and
/// one program per operation. `builtin` names a registry spec instead; a
/// builtin object has no programs and executes operations atomically.
struct ObjectDef {
  std::string name;
  std::string builtin;
  std::vector<std::string> shared_vars;
  std::vector<std::int64_t> shared_init;
  std::vector<std::string> locks;
  std::vector<std::string> conds;
  std::vector<Program> programs;

  bool is_builtin() const { return !builtin.empty(); }

  const Program& program(const std::string& op_name) const {
    for (const auto& p : programs)
      if (p.name == op_name) return p;
    throw Error("object '" + name + "' has no operation '" + op_name + "'");
  }

  bool has_program(const std::string& op_name) const {
    return std::any_of(programs.begin(), programs.end(),
                       [&](const Program& p) { return p.name == op_name; });
  }

  std::size_t shared_index(const std::string& var) const {
    for (std::size_t i = 0; i < shared_vars.size(); ++i)
      if (shared_vars[i] == var) return i;
    throw Error("object '" + name + "' has no shared variable '" + var + "'");
  }

  /// Shared valuation plus one latch slot per condition, in declaration
  /// order. Conditions are sticky flags: signal sets, nothing clears.
  std::size_t cond_index(const std::string& cond) const {
    for (std::size_t i = 0; i < conds.size(); ++i)
      if (conds[i] == cond) return shared_vars.size() + i;
    throw Error("object '" + name + "' has no condition '" + cond + "'");
  }

  SpecState initial_state() const {
    SpecState s = shared_init;
    s.resize(shared_vars.size() + conds.size(), 0);
    return s;
  }
};

namespace detail {

struct Tokenizer {
  explicit Tokenizer(std::string_view text) : text_(text) {}

  // Tokens: identifiers, integers, and the single characters ( ) { } , . + - *
  // '=' and ':' are also single-character tokens. '#' starts a comment that
  // runs to end of line. Newlines are significant and returned as ";".
  std::vector<std::string> all() {
    std::vector<std::string> out;
    bool line_has_token = false;
    for (std::size_t i = 0; i < text_.size();) {
      char c = text_[i];
      if (c == '#') {
        while (i < text_.size() && text_[i] != '\n') ++i;
        continue;
      }
      if (c == '\n') {
        if (line_has_token) out.push_back(";");
        line_has_token = false;
        ++i;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      line_has_token = true;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
          ++j;
        out.emplace_back(text_.substr(i, j - i));
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        out.emplace_back(text_.substr(i, j - i));
        i = j;
        continue;
      }
      if (std::string_view("(){},.+-*=:").find(c) != std::string_view::npos) {
        out.emplace_back(1, c);
        ++i;
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'");
    }
    if (line_has_token) out.push_back(";");
    return out;
  }

 private:
  std::string_view text_;
};

class TokenStream {
 public:
  explicit TokenStream(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  const std::string& peek() const {
    static const std::string kEnd = "<end>";
    return done() ? kEnd : tokens_[pos_];
  }

  std::string next() {
    if (done()) throw ParseError("unexpected end of input");
    return tokens_[pos_++];
  }

  void expect(const std::string& tok) {
    auto got = next();
    if (got != tok) throw ParseError("expected '" + tok + "', got '" + got + "'");
  }

  bool accept(const std::string& tok) {
    if (!done() && tokens_[pos_] == tok) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_newlines() {
    while (accept(";")) {
    }
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

inline bool is_identifier(const std::string& t) {
  return !t.empty() && (std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_');
}

inline bool is_integer(const std::string& t) {
  return !t.empty() && std::isdigit(static_cast<unsigned char>(t[0]));
}

inline std::string expect_identifier(TokenStream& ts, const char* what) {
  auto t = ts.next();
  if (!is_identifier(t)) throw ParseError(std::string("expected ") + what + ", got '" + t + "'");
  return t;
}

// expr    := term (('+' | '-') term)*
// term    := factor ('*' factor)*
// factor  := integer | identifier | '-' factor | '(' expr ')'
inline Expr parse_expr(TokenStream& ts);

inline Expr parse_factor(TokenStream& ts) {
  if (ts.accept("(")) {
    Expr e = parse_expr(ts);
    ts.expect(")");
    return e;
  }
  if (ts.accept("-")) return Expr::binary(Expr::Kind::sub, Expr::constant(0), parse_factor(ts));
  auto t = ts.next();
  if (is_integer(t)) return Expr::constant(std::stoll(t));
  if (is_identifier(t)) return Expr::variable(t);
  throw ParseError("expected expression, got '" + t + "'");
}

inline Expr parse_term(TokenStream& ts) {
  Expr e = parse_factor(ts);
  while (ts.accept("*")) e = Expr::binary(Expr::Kind::mul, std::move(e), parse_factor(ts));
  return e;
}

inline Expr parse_expr(TokenStream& ts) {
  Expr e = parse_term(ts);
  for (;;) {
    if (ts.accept("+"))
      e = Expr::binary(Expr::Kind::add, std::move(e), parse_term(ts));
    else if (ts.accept("-"))
      e = Expr::binary(Expr::Kind::sub, std::move(e), parse_term(ts));
    else
      return e;
  }
}

inline Instr parse_instruction(TokenStream& ts) {
  Instr i;
  auto opcode = ts.next();
  if (opcode == "lock" || opcode == "unlock") {
    i.kind = opcode == "lock" ? Instr::Kind::lock : Instr::Kind::unlock;
    i.target = expect_identifier(ts, "lock name");
  } else if (opcode == "read") {
    i.kind = Instr::Kind::read;
    i.target = expect_identifier(ts, "destination local");
    i.source = expect_identifier(ts, "shared variable");
  } else if (opcode == "write") {
    i.kind = Instr::Kind::write;
    i.target = expect_identifier(ts, "shared variable");
    i.expr = parse_expr(ts);
  } else if (opcode == "compute") {
    i.kind = Instr::Kind::compute;
    i.target = expect_identifier(ts, "destination local");
    i.expr = parse_expr(ts);
  } else if (opcode == "wait") {
    i.kind = Instr::Kind::wait;
    i.target = expect_identifier(ts, "condition");
    i.source = expect_identifier(ts, "lock name");
  } else if (opcode == "signal") {
    i.kind = Instr::Kind::signal;
    i.target = expect_identifier(ts, "condition");
  } else if (opcode == "call") {
    i.kind = Instr::Kind::call;
    i.target = ts.next();  // destination local or "_"
    if (!is_identifier(i.target) && i.target != "_")
      throw ParseError("expected call destination, got '" + i.target + "'");
    i.source = expect_identifier(ts, "object name");
    ts.expect(".");
    i.op = expect_identifier(ts, "operation name");
    ts.expect("(");
    if (!ts.accept(")")) {
      for (;;) {
        i.args.push_back(parse_expr(ts));
        if (ts.accept(")")) break;
        ts.expect(",");
      }
    }
  } else if (opcode == "return") {
    i.kind = Instr::Kind::ret;
    if (ts.peek() == "ok") {
      ts.next();
      i.returns_unit = true;
    } else {
      i.expr = parse_expr(ts);
    }
  } else {
    throw ParseError("unknown instruction '" + opcode + "'");
  }
  ts.expect(";");
  return i;
}

inline Program parse_program_block(TokenStream& ts) {
  Program p;
  ts.expect("program");
  p.name = expect_identifier(ts, "program name");
  ts.expect("(");
  if (!ts.accept(")")) {
    for (;;) {
      p.params.push_back(expect_identifier(ts, "parameter name"));
      if (ts.accept(")")) break;
      ts.expect(",");
    }
  }
  ts.expect("{");
  ts.skip_newlines();
  while (!ts.accept("}")) {
    p.body.push_back(parse_instruction(ts));
    ts.skip_newlines();
  }
  ts.accept(";");
  return p;
}

}  // namespace detail

/// Structural validation shared by compile_program and compile_object.
/// Enforces: a single trailing return; lock/unlock properly nested (LIFO)
/// and balanced with no re-entry; wait only while its lock is the innermost
/// held lock; shared access (read/write/signal) and waits only under a
/// lock; locals assigned before use in expressions.
inline void validate_program(const Program& p) {
  if (p.body.empty()) throw ParseError("program '" + p.name + "' has no body (missing return)");
  for (std::size_t i = 0; i < p.body.size(); ++i) {
    bool is_ret = p.body[i].kind == Instr::Kind::ret;
    bool is_last = i + 1 == p.body.size();
    if (is_last && !is_ret)
      throw ParseError("program '" + p.name + "' does not end in return");
    if (!is_last && is_ret)
      throw ParseError("program '" + p.name + "' has return before the end");
  }
  std::vector<std::string> held;
  std::vector<std::string> assigned = p.params;
  auto is_assigned = [&assigned](const std::string& v) {
    return std::find(assigned.begin(), assigned.end(), v) != assigned.end();
  };
  auto check_expr = [&](const Expr& e) {
    std::vector<std::string> vars;
    e.collect_variables(vars);
    for (const auto& v : vars)
      if (!is_assigned(v))
        throw ParseError("program '" + p.name + "': variable '" + v + "' used before assignment");
  };
  for (const auto& i : p.body) {
    switch (i.kind) {
      case Instr::Kind::lock:
        if (std::find(held.begin(), held.end(), i.target) != held.end())
          throw UnbalancedLocks("program '" + p.name + "': lock '" + i.target + "' re-acquired");
        held.push_back(i.target);
        break;
      case Instr::Kind::unlock:
        if (held.empty() || held.back() != i.target)
          throw UnbalancedLocks("program '" + p.name + "': unlock '" + i.target +
                                "' does not match the innermost held lock");
        held.pop_back();
        break;
      case Instr::Kind::read:
        if (held.empty())
          throw UnbalancedLocks("program '" + p.name + "': shared read outside a lock region");
        assigned.push_back(i.target);
        break;
      case Instr::Kind::write:
        if (held.empty())
          throw UnbalancedLocks("program '" + p.name + "': shared write outside a lock region");
        check_expr(i.expr);
        break;
      case Instr::Kind::compute:
        check_expr(i.expr);
        assigned.push_back(i.target);
        break;
      case Instr::Kind::wait:
        if (held.empty() || held.back() != i.source)
          throw WaitWithoutLock("program '" + p.name + "': wait('" + i.target +
                                "') without holding lock '" + i.source + "'");
        break;
      case Instr::Kind::signal:
        if (held.empty())
          throw UnbalancedLocks("program '" + p.name + "': signal outside a lock region");
        break;
      case Instr::Kind::call:
        if (!held.empty())
          throw UnsupportedProgram("program '" + p.name + "': nested call inside a lock region");
        for (const auto& a : i.args) check_expr(a);
        if (i.target != "_") assigned.push_back(i.target);
        break;
      case Instr::Kind::ret:
        if (!i.returns_unit) check_expr(i.expr);
        if (!held.empty())
          throw UnbalancedLocks("program '" + p.name + "': lock '" + held.back() +
                                "' still held at return");
        break;
    }
  }
}

/// Parses and validates one `program name(params) { ... }` block.
inline Program compile_program(const std::string& source) {
  detail::TokenStream ts(detail::Tokenizer(source).all());
  ts.skip_newlines();
  Program p = detail::parse_program_block(ts);
  ts.skip_newlines();
  if (!ts.done()) throw ParseError("trailing input after program block");
  validate_program(p);
  return p;
}

/// Validates name references of all programs against the object's
/// declarations. Structural per-program checks run via validate_program.
inline void validate_object(const ObjectDef& def) {
  if (def.is_builtin()) {
    if (!def.programs.empty())
      throw ParseError("builtin object '" + def.name + "' cannot declare programs");
    return;
  }
  if (def.shared_vars.size() != def.shared_init.size())
    throw ParseError("object '" + def.name + "': shared initial values out of step");
  auto declared = [](const std::vector<std::string>& xs, const std::string& x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
  };
  for (const auto& p : def.programs) {
    validate_program(p);
    for (const auto& i : p.body) {
      switch (i.kind) {
        case Instr::Kind::lock:
        case Instr::Kind::unlock:
          if (!declared(def.locks, i.target))
            throw ParseError("object '" + def.name + "': undeclared lock '" + i.target + "'");
          break;
        case Instr::Kind::read:
          if (!declared(def.shared_vars, i.source))
            throw ParseError("object '" + def.name + "': undeclared shared variable '" + i.source + "'");
          break;
        case Instr::Kind::write:
          if (!declared(def.shared_vars, i.target))
            throw ParseError("object '" + def.name + "': undeclared shared variable '" + i.target + "'");
          break;
        case Instr::Kind::wait:
          if (!declared(def.conds, i.target))
            throw ParseError("object '" + def.name + "': undeclared condition '" + i.target + "'");
          if (!declared(def.locks, i.source))
            throw ParseError("object '" + def.name + "': undeclared lock '" + i.source + "'");
          break;
        case Instr::Kind::signal:
          if (!declared(def.conds, i.target))
            throw ParseError("object '" + def.name + "': undeclared condition '" + i.target + "'");
          break;
        default:
          break;
      }
    }
  }
}

/// Parses `object name { shared v = k / lock l / cond c / program ... }` or
/// `object name builtin <spec-name>`.
inline ObjectDef compile_object(const std::string& source) {
  detail::TokenStream ts(detail::Tokenizer(source).all());
  ts.skip_newlines();
  ObjectDef def;
  ts.expect("object");
  def.name = detail::expect_identifier(ts, "object name");
  if (ts.accept("builtin")) {
    def.builtin = detail::expect_identifier(ts, "builtin spec name");
    ts.accept(";");
    ts.skip_newlines();
    if (!ts.done()) throw ParseError("trailing input after builtin object");
    return def;
  }
  ts.expect("{");
  ts.skip_newlines();
  while (!ts.accept("}")) {
    if (ts.peek() == "shared") {
      ts.next();
      def.shared_vars.push_back(detail::expect_identifier(ts, "shared variable"));
      std::int64_t init = 0;
      if (ts.accept("=")) {
        bool neg = ts.accept("-");
        auto t = ts.next();
        if (!detail::is_integer(t)) throw ParseError("expected initial value, got '" + t + "'");
        init = std::stoll(t);
        if (neg) init = -init;
      }
      def.shared_init.push_back(init);
      ts.expect(";");
    } else if (ts.peek() == "lock") {
      ts.next();
      def.locks.push_back(detail::expect_identifier(ts, "lock name"));
      ts.expect(";");
    } else if (ts.peek() == "cond") {
      ts.next();
      def.conds.push_back(detail::expect_identifier(ts, "condition name"));
      ts.expect(";");
    } else if (ts.peek() == "program") {
      def.programs.push_back(detail::parse_program_block(ts));
    } else {
      throw ParseError("unexpected token '" + ts.peek() + "' in object block");
    }
    ts.skip_newlines();
  }
  ts.accept(";");
  ts.skip_newlines();
  if (!ts.done()) throw ParseError("trailing input after object block");
  validate_object(def);
  return def;
}

}  // namespace linsmr

#endif  // LINSMR_PROGRAM_HPP_
