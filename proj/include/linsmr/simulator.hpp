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

#ifndef LINSMR_SIMULATOR_HPP_
#define LINSMR_SIMULATOR_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linsmr/checkers.hpp"
#include "linsmr/errors.hpp"
#include "linsmr/history.hpp"
#include "linsmr/program.hpp"
#include "linsmr/scheduler.hpp"
#include "linsmr/specs.hpp"
#include "linsmr/value.hpp"
#include "linsmr/voting.hpp"

namespace linsmr {

enum class FailureModel { crash, byzantine };
enum class OrderingMode { total_order, partial_order };

/// The fixed menu of Byzantine replica behaviors: corrupt every response
/// by bit-flipping it, drop every response, or answer a constant wrong
/// value. Execution itself stays deterministic; corruption happens at the
/// replica boundary.
enum class ByzantineBehavior { response_flip, response_drop, wrong_value };

struct CrashFault {
  int replica = 0;
  Tick time = 0;

  friend bool operator==(const CrashFault&, const CrashFault&) = default;
};

struct FaultPlan {
  std::vector<CrashFault> crashes;
  std::map<int, ByzantineBehavior> byzantine;

  std::set<int> faulty_replicas() const {
    std::set<int> out;
    for (const auto& c : crashes) out.insert(c.replica);
    for (const auto& [r, b] : byzantine) out.insert(r);
    return out;
  }
};

struct SimConfig {
  int n = 3;
  int f = 1;
  FailureModel failure_model = FailureModel::crash;
  OrderingMode ordering = OrderingMode::total_order;
  SchedulerKind scheduler = SchedulerKind::lock_level;
  std::uint64_t seed = 1;
  FaultPlan fault_plan;
  bool allow_out_of_spec = false;
  // Conflict relation for partial-order delivery; null means "same
  // object". Non-conflicting requests may be delivered in different orders
  // on different replicas.
  std::function<bool(const ExecRequest&, const ExecRequest&)> conflicts;

  /// Replicas the configured model may lose while staying in spec.
  int max_faulty() const {
    return failure_model == FailureModel::crash ? (n - 1) / 2 : (n - 1) / 3;
  }

  void validate() const {
    if (n < 1) throw ConfigInvalid("replica count must be positive");
    if (f < 0) throw ConfigInvalid("fault tolerance target must be non-negative");
    if (failure_model == FailureModel::crash && n < 2 * f + 1)
      throw ConfigInvalid("crash tolerance f=" + std::to_string(f) + " needs n >= 2f+1, got n=" +
                          std::to_string(n));
    if (failure_model == FailureModel::byzantine && n < 3 * f + 1)
      throw ConfigInvalid("byzantine tolerance f=" + std::to_string(f) +
                          " needs n >= 3f+1, got n=" + std::to_string(n));
    if (!fault_plan.byzantine.empty() && failure_model != FailureModel::byzantine)
      throw ConfigInvalid("byzantine behaviors require the byzantine failure model");
    for (int r : fault_plan.faulty_replicas())
      if (r < 0 || r >= n) throw ConfigInvalid("fault plan names replica " + std::to_string(r));
    if (static_cast<int>(fault_plan.faulty_replicas().size()) > f && !allow_out_of_spec)
      throw OutOfSpecRun("fault plan exceeds f=" + std::to_string(f) +
                         " faulty replicas; out-of-spec runs must be requested explicitly");
  }
};

/// One scripted request of a client.
struct ScriptOp {
  std::uint64_t request_id = 0;
  std::string object;
  std::string op_name;
  Values args;
};

/// A client's request sequence. The client is closed-loop: each request is
/// issued `think` ticks after the previous one decided.
struct ClientScript {
  std::string client;
  Tick start = 1;
  Tick think = 1;
  std::vector<ScriptOp> ops;
};

/// Declared causal edges (r, r') delay r' until r has completed, modeling
/// "r could have caused r'".
struct Workload {
  std::vector<ClientScript> clients;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> causal_edges;
};

struct ReplicaResponseRecord {
  std::uint64_t request_id = 0;
  int replica = 0;
  Value value;
  Tick arrival = 0;

  friend bool operator==(const ReplicaResponseRecord&, const ReplicaResponseRecord&) = default;
};

struct SimOutput {
  History client_history;
  std::map<int, History> inner_histories;
  std::map<int, std::vector<std::uint64_t>> delivery_order;
  std::map<int, std::map<std::string, SpecState>> replica_states;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> causal_edges;
  std::map<std::uint64_t, std::vector<ReplicaResponseRecord>> responses;
  std::vector<std::vector<std::uint64_t>> client_issue_order;
  std::vector<std::uint64_t> processing_order;
  std::vector<int> correct_replicas;

  friend bool operator==(const SimOutput&, const SimOutput&) = default;

  SchneiderInput schneider() const {
    return {client_issue_order, causal_edges, processing_order};
  }
};

namespace detail {

inline Value corrupt_response(ByzantineBehavior b, const Value& v) {
  switch (b) {
    case ByzantineBehavior::response_flip:
      return Value::integer(v.is_int() ? ~v.as_int() : -1);
    case ByzantineBehavior::wrong_value:
      return Value::integer(42);
    case ByzantineBehavior::response_drop:
      return v;  // never sent; handled by the caller
  }
  return v;
}

inline std::vector<ExecRequest> permute_for_replica(
    std::vector<ExecRequest> order, int replica, std::uint64_t seed, std::uint64_t wave,
    const std::function<bool(const ExecRequest&, const ExecRequest&)>& conflicts) {
  auto conflict = [&conflicts](const ExecRequest& a, const ExecRequest& b) {
    return conflicts ? conflicts(a, b) : a.object == b.object;
  };
  for (int pass = 0; pass < replica; ++pass) {
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      if (conflict(order[i], order[i + 1])) continue;
      std::uint64_t bit = mix64(seed ^ mix64((static_cast<std::uint64_t>(replica) << 48) ^
                                             (wave << 24) ^
                                             (static_cast<std::uint64_t>(pass) << 12) ^ i));
      if (bit & 1) std::swap(order[i], order[i + 1]);
    }
  }
  return order;
}

}  // namespace detail

/// Simulates state-machine replication: an abstract sequencer delivers the
/// issued requests to every replica (total order, or per-replica orders
/// that agree on conflicting requests), each replica executes them under
/// the configured deterministic scheduler, and the client decides each
/// request by f+1 voting over the responses.
///
/// Clients are closed-loop, so delivery proceeds in waves: all currently
/// issued requests are delivered and executed together (and may interleave
/// under the lock-level scheduler); a client's next request joins the next
/// wave once the previous one decided. Duplicate request ids are
/// deduplicated at the sequencer, first ordered instance wins.
inline SimOutput run_smr(const SimConfig& cfg, const Workload& workload,
                         const std::vector<ObjectDef>& objects) {
  cfg.validate();

  ObjectHeap proto;
  for (const auto& def : objects) {
    validate_object(def);
    proto.add(def);
  }
  for (const auto& c : workload.clients) {
    if (c.think < 1) throw ConfigInvalid("client '" + c.client + "': think time must be >= 1");
    for (const auto& op : c.ops)
      if (!proto.supports(op.object, op.op_name))
        throw ConfigInvalid("request " + std::to_string(op.request_id) + ": no operation '" +
                            op.op_name + "' on object '" + op.object + "'");
  }

  std::map<std::uint64_t, std::vector<std::uint64_t>> edge_sources;
  for (auto [from, to] : workload.causal_edges) edge_sources[to].push_back(from);

  const int n = cfg.n;
  std::vector<ObjectHeap> heaps(static_cast<std::size_t>(n), proto);
  std::vector<Tick> clocks(static_cast<std::size_t>(n), 0);
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  std::vector<std::optional<Tick>> crash_at(static_cast<std::size_t>(n));
  for (const auto& c : cfg.fault_plan.crashes) {
    auto& slot = crash_at[static_cast<std::size_t>(c.replica)];
    slot = slot ? std::min(*slot, c.time) : c.time;
  }

  std::vector<std::size_t> cursor(workload.clients.size(), 0);
  std::map<std::uint64_t, VoteDecision> decided;
  std::set<std::uint64_t> sequenced_ids;
  std::vector<OuterRequest> issued;
  std::vector<std::vector<std::uint64_t>> client_issue(workload.clients.size());
  std::vector<std::vector<std::pair<ExecRequest, ExecResult>>> inner_events(
      static_cast<std::size_t>(n));

  SimOutput out;
  std::uint64_t wave_index = 0;

  while (true) {
    // Collect every client's next request whose gates are all open: the
    // client's previous request decided, and every causal-edge source
    // decided.
    struct Candidate {
      std::size_t client;
      Tick issue;
      const ScriptOp* op;
    };
    std::vector<Candidate> wave;
    for (std::size_t c = 0; c < workload.clients.size(); ++c) {
      const auto& script = workload.clients[c];
      if (cursor[c] >= script.ops.size()) continue;
      const ScriptOp& op = script.ops[cursor[c]];
      Tick issue = script.start;
      if (cursor[c] > 0) {
        auto it = decided.find(script.ops[cursor[c] - 1].request_id);
        if (it == decided.end() || !it->second.decided) continue;  // starved; never issues
        issue = it->second.time + script.think;
      }
      bool gated = false;
      if (auto es = edge_sources.find(op.request_id); es != edge_sources.end()) {
        for (auto src : es->second) {
          auto it = decided.find(src);
          if (it == decided.end() || !it->second.decided) {
            gated = true;
            break;
          }
          issue = std::max(issue, it->second.time + 1);
        }
      }
      if (!gated) wave.push_back({c, issue, &op});
    }
    if (wave.empty()) break;
    ++wave_index;

    std::stable_sort(wave.begin(), wave.end(), [](const Candidate& a, const Candidate& b) {
      if (a.issue != b.issue) return a.issue < b.issue;
      return a.op->request_id < b.op->request_id;
    });

    // Sequence the wave, dropping duplicate invocation ids.
    std::vector<ExecRequest> sequenced;
    Tick latest_issue = 0;
    for (const auto& cand : wave) {
      cursor[cand.client]++;
      if (!sequenced_ids.insert(cand.op->request_id).second) continue;  // duplicate dropped
      ExecRequest r{cand.op->request_id, workload.clients[cand.client].client, cand.op->object,
                    cand.op->op_name, cand.op->args};
      sequenced.push_back(std::move(r));
      latest_issue = std::max(latest_issue, cand.issue);
      out.processing_order.push_back(cand.op->request_id);
      client_issue[cand.client].push_back(cand.op->request_id);
      OuterRequest outer;
      outer.request_id = cand.op->request_id;
      outer.client = workload.clients[cand.client].client;
      outer.object = cand.op->object;
      outer.op_name = cand.op->op_name;
      outer.args = cand.op->args;
      outer.issue = cand.issue;
      issued.push_back(std::move(outer));
    }
    if (sequenced.empty()) continue;

    for (int r = 0; r < n; ++r) {
      auto ri = static_cast<std::size_t>(r);
      if (!alive[ri]) continue;
      auto order = cfg.ordering == OrderingMode::partial_order
                       ? detail::permute_for_replica(sequenced, r, cfg.seed, wave_index,
                                                     cfg.conflicts)
                       : sequenced;
      for (const auto& req : order) out.delivery_order[r].push_back(req.request_id);
      clocks[ri] = std::max(clocks[ri], latest_issue);

      // In total order the wave executes as one batch, so requests on
      // different objects may interleave. Under partial order each object
      // executes as its own batch: conflicting requests keep their
      // relative order, so every replica runs identical per-object
      // batches and replica agreement is preserved even though batch
      // order differs.
      std::vector<std::vector<ExecRequest>> batches;
      if (cfg.ordering == OrderingMode::partial_order) {
        std::map<std::string, std::size_t> batch_of;
        for (const auto& req : order) {
          auto [it, fresh] = batch_of.emplace(req.object, batches.size());
          if (fresh) batches.emplace_back();
          batches[it->second].push_back(req);
        }
      } else {
        batches.push_back(order);
      }

      auto byz = cfg.fault_plan.byzantine.find(r);
      for (const auto& batch : batches) {
        if (!alive[ri]) break;
        WaveExecutor ex(heaps[ri], clocks[ri], cfg.scheduler, cfg.seed, wave_index, crash_at[ri]);
        auto results = ex.run(batch);
        if (ex.halted()) alive[ri] = false;
        for (std::size_t k = 0; k < results.size(); ++k) {
          inner_events[ri].push_back({batch[k], results[k]});
          if (!results[k].completed) continue;
          if (byz != cfg.fault_plan.byzantine.end() &&
              byz->second == ByzantineBehavior::response_drop)
            continue;
          Value v = byz != cfg.fault_plan.byzantine.end()
                        ? detail::corrupt_response(byz->second, results[k].ret)
                        : results[k].ret;
          // Network delay: two base ticks plus the replica's index, so
          // arrival order deterministically breaks ties by replica.
          out.responses[results[k].request_id].push_back(
              {results[k].request_id, r, v, results[k].inner_resp + 2 + r});
        }
      }
    }

    for (const auto& req : sequenced) {
      ResponseSet rs;
      rs.request_id = req.request_id;
      for (const auto& rec : out.responses[req.request_id])
        rs.responses.push_back({rec.replica, rec.value, rec.arrival});
      VoteDecision d = vote(rs, cfg.f);
      if (d.decided) decided[req.request_id] = d;
    }
    for (auto& o : issued) {
      auto it = decided.find(o.request_id);
      if (it != decided.end()) o.outcome = it->second;
    }
  }

  out.client_history = assemble_outer_history(issued);
  for (int r = 0; r < n; ++r) {
    HistoryBuilder b;
    for (const auto& [req, res] : inner_events[static_cast<std::size_t>(r)]) {
      if (res.inner_inv == 0) continue;  // never started before a crash
      OpId op = b.invoke(req.client, req.object, req.op_name, req.args, res.inner_inv);
      if (res.completed) b.respond(op, res.ret, res.inner_resp);
    }
    out.inner_histories[r] = b.build();
    out.replica_states[r] = heaps[static_cast<std::size_t>(r)].states();
  }
  for (auto& ids : client_issue) out.client_issue_order.push_back(std::move(ids));
  for (auto [from, to] : workload.causal_edges)
    if (sequenced_ids.count(from) && sequenced_ids.count(to))
      out.causal_edges.emplace_back(from, to);

  auto faulty = cfg.fault_plan.faulty_replicas();
  for (int r = 0; r < n; ++r)
    if (!faulty.count(r)) out.correct_replicas.push_back(r);
  return out;
}

}  // namespace linsmr

#endif  // LINSMR_SIMULATOR_HPP_
