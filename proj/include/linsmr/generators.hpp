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

#ifndef LINSMR_GENERATORS_HPP_
#define LINSMR_GENERATORS_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "linsmr/history.hpp"
#include "linsmr/simulator.hpp"
#include "linsmr/specs.hpp"
#include "linsmr/value.hpp"

namespace linsmr {

/// Seeded generator; all randomized machinery routes through this wrapper
/// so runs are reproducible from a single integer.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }
  std::int64_t int_between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool percent(unsigned p) { return below(100) < p; }

 private:
  std::mt19937_64 eng_;
};

/// Argument shapes of the bundled operations; everything else takes none.
inline Values random_args_for(Rng& rng, const std::string& op_name) {
  if (op_name == "write" || op_name == "enq" || op_name == "exchange" || op_name == "set")
    return {Value::integer(rng.int_between(0, 5))};
  return {};
}

struct HistoryGenOptions {
  std::size_t max_ops = 7;
  std::size_t max_clients = 4;
  bool distinct_clients = false;  // one client per op: maximal overlap freedom
  unsigned mutate_percent = 0;    // chance to corrupt one recorded return
};

/// Random complete history that is linearizable by construction before
/// mutation: a random sequential execution fixes the returns, then each
/// operation is wrapped in a span containing its place in that order, and
/// spans are packed onto clients without per-client overlap. With
/// `mutate_percent` the result may get one corrupted return value.
inline History random_history(Rng& rng, const SequentialSpec& spec,
                              const HistoryGenOptions& opt = {}) {
  std::size_t k = 1 + rng.below(opt.max_ops);
  struct Planned {
    std::string op_name;
    Values args;
    Value ret;
    Tick point = 0;
    Tick inv = 0;
    Tick resp = 0;
    std::size_t client = 0;
  };
  std::vector<Planned> plan(k);
  SpecState st = spec.initial_state;
  for (std::size_t i = 0; i < k; ++i) {
    plan[i].op_name = spec.op_names[rng.below(spec.op_names.size())];
    plan[i].args = random_args_for(rng, plan[i].op_name);
    auto [next, ret] = spec.apply(st, plan[i].op_name, plan[i].args);
    st = std::move(next);
    plan[i].ret = ret;
    plan[i].point = static_cast<Tick>(3 * i + 2);
  }

  std::vector<Tick> lane_busy_until;  // per client, last response time
  for (std::size_t i = 0; i < k; ++i) {
    Tick inv = std::max<Tick>(1, plan[i].point - 1 - static_cast<Tick>(rng.below(3)));
    Tick resp = plan[i].point + 1 + static_cast<Tick>(rng.below(3));
    std::size_t client;
    if (opt.distinct_clients) {
      client = i;
    } else {
      std::vector<std::size_t> free;
      for (std::size_t c = 0; c < lane_busy_until.size(); ++c)
        if (lane_busy_until[c] < inv) free.push_back(c);
      if (!free.empty()) {
        client = free[rng.below(free.size())];
      } else if (lane_busy_until.size() < opt.max_clients) {
        client = lane_busy_until.size();
        lane_busy_until.push_back(0);
      } else {
        // All lanes busy: take the one freeing first; if its last op runs
        // past our place in the order, open a fresh lane instead so the
        // witness order stays feasible.
        client = static_cast<std::size_t>(
            std::min_element(lane_busy_until.begin(), lane_busy_until.end()) -
            lane_busy_until.begin());
        inv = std::max(inv, lane_busy_until[client] + 1);
        if (inv > plan[i].point) {
          client = lane_busy_until.size();
          lane_busy_until.push_back(0);
          inv = std::max<Tick>(1, plan[i].point - 1);
        }
      }
    }
    if (client >= lane_busy_until.size()) lane_busy_until.resize(client + 1, 0);
    resp = std::max(resp, inv + 1);
    plan[i].inv = inv;
    plan[i].resp = resp;
    plan[i].client = client;
    lane_busy_until[client] = resp;
  }

  if (opt.mutate_percent > 0 && rng.percent(opt.mutate_percent)) {
    auto& victim = plan[rng.below(k)];
    victim.ret = victim.ret.is_int() ? Value::integer(victim.ret.as_int() + 1 +
                                                      static_cast<std::int64_t>(rng.below(3)))
                                     : Value::integer(rng.int_between(0, 5));
  }

  HistoryBuilder b;
  for (const auto& p : plan)
    b.op("c" + std::to_string(p.client), spec.name, p.op_name, p.args, p.ret, p.inv, p.resp);
  return b.build();
}

/// Random timeline extension that is always applicable: per operation, the
/// earlier/later slack is clamped against tick one and the client's
/// neighboring spans so the extended history stays well formed.
inline std::map<OpId, TimelineDelta> random_delta(Rng& rng, const History& h) {
  std::map<std::string, std::vector<OpId>> by_client;
  for (const auto& s : h.spans())
    by_client[h.invocation_of(s.op_id).client].push_back(s.op_id);

  std::map<OpId, TimelineDelta> out;
  for (auto& [client, ops] : by_client) {
    std::sort(ops.begin(), ops.end(), [&h](OpId a, OpId b) {
      return h.span_of(a).invocation_time < h.span_of(b).invocation_time;
    });
    // Walk the client's ops in order, tracking the previous response after
    // its own extension, so a later-grown span and an earlier-grown
    // successor can never collide.
    Tick prev_end = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto& span = h.span_of(ops[i]);
      Tick earlier = 0;
      Tick later = 0;
      if (rng.percent(60)) {
        Tick room_before = std::min(span.invocation_time - prev_end - 1,
                                    span.invocation_time - 1);
        earlier = std::min<Tick>(static_cast<Tick>(rng.below(3)),
                                 std::max<Tick>(0, room_before));
        if (span.response_time) {
          Tick room_after = i + 1 < ops.size()
                                ? h.span_of(ops[i + 1]).invocation_time - *span.response_time - 1
                                : static_cast<Tick>(3);
          later = std::min<Tick>(static_cast<Tick>(rng.below(3)),
                                 std::max<Tick>(0, room_after));
        }
      }
      prev_end = span.response_time ? *span.response_time + later : span.invocation_time;
      if (earlier == 0 && later == 0) continue;
      out[ops[i]] = {earlier, later};
    }
  }
  return out;
}

struct WorkloadGenOptions {
  std::size_t clients = 3;
  std::size_t max_ops_per_client = 4;
  bool with_causal_edges = false;
  // Parallel name/builtin lists for the simulated heap.
  std::vector<std::string> objects = {"reg", "ctr", "q"};
  std::vector<std::string> builtins = {"register", "counter", "fifo-queue"};
};

/// Random closed-loop workload over builtin objects, with fresh request
/// ids. Causal edges only point from an earlier per-client position to a
/// strictly later one, so the closed-loop gating can never cycle.
inline std::pair<Workload, std::vector<ObjectDef>> random_workload(Rng& rng,
                                                                   const WorkloadGenOptions& opt) {
  std::vector<ObjectDef> defs;
  for (std::size_t i = 0; i < opt.objects.size(); ++i) {
    ObjectDef d;
    d.name = opt.objects[i];
    d.builtin = opt.builtins[i];
    defs.push_back(std::move(d));
  }

  std::map<std::string, std::vector<std::string>> ops_of = {
      {"register", {"write", "read"}},
      {"counter", {"inc", "get"}},
      {"fifo-queue", {"enq", "deq"}},
      {"lock-object", {"D", "E"}},
  };

  Workload w;
  std::uint64_t next_id = 1;
  for (std::size_t c = 0; c < opt.clients; ++c) {
    ClientScript script;
    script.client = "c" + std::to_string(c);
    script.start = 1 + static_cast<Tick>(rng.below(3));
    script.think = 1 + static_cast<Tick>(rng.below(2));
    std::size_t n_ops = 1 + rng.below(opt.max_ops_per_client);
    for (std::size_t i = 0; i < n_ops; ++i) {
      std::size_t obj = rng.below(opt.objects.size());
      const auto& menu = ops_of.at(opt.builtins[obj]);
      ScriptOp op;
      op.request_id = next_id++;
      op.object = opt.objects[obj];
      op.op_name = menu[rng.below(menu.size())];
      op.args = random_args_for(rng, op.op_name);
      script.ops.push_back(std::move(op));
    }
    w.clients.push_back(std::move(script));
  }

  if (opt.with_causal_edges && opt.clients >= 2) {
    std::size_t tries = opt.clients;
    for (std::size_t t = 0; t < tries; ++t) {
      std::size_t a = rng.below(opt.clients);
      std::size_t b = rng.below(opt.clients);
      if (a == b) continue;
      const auto& sa = w.clients[a].ops;
      const auto& sb = w.clients[b].ops;
      if (sb.size() < 2) continue;
      std::size_t q = 1 + rng.below(sb.size() - 1);
      std::size_t p = rng.below(std::min(sa.size(), q));
      w.causal_edges.emplace_back(sa[p].request_id, sb[q].request_id);
    }
  }
  return {std::move(w), std::move(defs)};
}

/// Single-object view fused into a composite namespace: object names move
/// into the op names ("obj/op") so a multi-object history can be checked
/// against a product specification.
inline History fuse_objects(const History& h) {
  std::vector<EventRecord> events;
  for (EventRecord e : h.events()) {
    e.op_name = e.object + "/" + e.op_name;
    e.object = "composite";
    events.push_back(std::move(e));
  }
  return History::build(std::move(events));
}

}  // namespace linsmr

#endif  // LINSMR_GENERATORS_HPP_
