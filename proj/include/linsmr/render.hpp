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

#ifndef LINSMR_RENDER_HPP_
#define LINSMR_RENDER_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "linsmr/history.hpp"
#include "linsmr/value.hpp"
#include "linsmr/verdict.hpp"

namespace linsmr {

/// What a diagram emphasizes: plain spans, per-operation points taken
/// from an accepting witness, or regions where spans overlap.
enum class RenderShow : std::uint8_t { spans, points, intervals };

inline RenderShow render_show_from_string(const std::string& s) {
  if (s == "spans") return RenderShow::spans;
  if (s == "points") return RenderShow::points;
  if (s == "intervals") return RenderShow::intervals;
  throw MalformedInput("unknown render mode '" + s + "'");
}

struct RenderOptions {
  RenderShow show = RenderShow::spans;
  Witness witness;  // consulted by points mode; empty renders plain spans
};

namespace detail {

inline std::string op_label(const History& h, OpId op) {
  const auto& inv = h.invocation_of(op);
  std::string s = inv.op_name;
  if (!inv.payload.empty()) {
    s += "(";
    for (std::size_t i = 0; i < inv.payload.size(); ++i) {
      if (i) s += ",";
      s += inv.payload[i].to_string();
    }
    s += ")";
  } else {
    s += "()";
  }
  if (h.span_of(op).response_time)
    s += "=" + h.return_of(op).to_string();
  else
    s += "=?";
  return s;
}

struct RenderLayout {
  Tick t_min = 1;
  Tick t_max = 1;
  std::vector<std::string> clients;                // lane order: first appearance
  std::vector<std::string> objects;                // color order: first appearance
  std::map<std::string, std::size_t> client_lane;
  std::map<std::string, std::size_t> object_slot;
};

inline RenderLayout layout_of(const History& h) {
  RenderLayout l;
  bool first = true;
  for (const auto& s : h.spans()) {
    const auto& inv = h.invocation_of(s.op_id);
    Tick end = s.response_time ? *s.response_time : s.invocation_time + 2;
    if (first) {
      l.t_min = s.invocation_time;
      l.t_max = end;
      first = false;
    }
    l.t_min = std::min(l.t_min, s.invocation_time);
    l.t_max = std::max(l.t_max, end);
    if (l.client_lane.emplace(inv.client, l.clients.size()).second) l.clients.push_back(inv.client);
    if (l.object_slot.emplace(inv.object, l.objects.size()).second) l.objects.push_back(inv.object);
  }
  if (l.t_max < l.t_min) l.t_max = l.t_min;
  return l;
}

/// Assigns each witness element a tick inside every involved span, in
/// witness order with strictly increasing ticks where the spans allow it
/// (clamped otherwise, since the diagram is schematic).
inline std::vector<std::pair<OpId, Tick>> point_marks(const History& h, const Witness& w,
                                                      Tick pending_end) {
  std::vector<std::pair<OpId, Tick>> marks;
  Tick cur = 0;
  bool first = true;
  for (const auto& s : w) {
    if (s.ops.empty()) continue;
    Tick lo = 0, hi = 0;
    bool have = false;
    for (OpId op : s.ops) {
      const auto& sp = h.span_of(op);
      Tick end = sp.response_time ? *sp.response_time : pending_end;
      if (!have) {
        lo = sp.invocation_time;
        hi = end;
        have = true;
      } else {
        lo = std::max(lo, sp.invocation_time);
        hi = std::min(hi, end);
      }
    }
    Tick t = first ? lo : std::max(cur + 1, lo);
    if (t > hi) t = hi;
    cur = t;
    first = false;
    for (OpId op : s.ops) marks.emplace_back(op, t);
  }
  return marks;
}

/// Tick range [lo, hi] covered by two or more spans, as maximal runs.
inline std::vector<std::pair<Tick, Tick>> overlap_runs(const History& h, Tick pending_end) {
  std::vector<std::pair<Tick, int>> deltas;
  for (const auto& s : h.spans()) {
    Tick end = s.response_time ? *s.response_time : pending_end;
    deltas.emplace_back(s.invocation_time, 1);
    deltas.emplace_back(end + 1, -1);
  }
  std::sort(deltas.begin(), deltas.end());
  std::vector<std::pair<Tick, Tick>> runs;
  int depth = 0;
  Tick open = 0;
  for (std::size_t i = 0; i < deltas.size();) {
    Tick t = deltas[i].first;
    int before = depth;
    while (i < deltas.size() && deltas[i].first == t) depth += deltas[i++].second;
    if (before < 2 && depth >= 2) open = t;
    if (before >= 2 && depth < 2) runs.emplace_back(open, t - 1);
  }
  return runs;
}

}  // namespace detail

/// Fixed-width text schematic: one row per operation, grouped by client in
/// order of first appearance, bars over a shared tick axis. Identical
/// histories render to identical text.
inline std::string render_ascii(const History& h, const RenderOptions& opt = {}) {
  if (h.empty()) return "(empty history)\n";
  auto l = detail::layout_of(h);
  const Tick span = l.t_max - l.t_min + 1;
  const Tick max_cols = 100;
  // Integer compression keeps the output stable across platforms.
  auto col = [&l, span, max_cols](Tick t) -> std::size_t {
    if (span <= max_cols) return static_cast<std::size_t>(t - l.t_min);
    return static_cast<std::size_t>((t - l.t_min) * (max_cols - 1) / (span - 1));
  };
  const std::size_t width = col(l.t_max) + 1;

  std::vector<std::pair<OpId, Tick>> marks;
  if (opt.show == RenderShow::points) marks = detail::point_marks(h, opt.witness, l.t_max);

  std::string out = "ticks " + std::to_string(l.t_min) + ".." + std::to_string(l.t_max) + "\n";
  for (const auto& client : l.clients) {
    for (const auto& s : h.spans()) {
      const auto& inv = h.invocation_of(s.op_id);
      if (inv.client != client) continue;
      std::string row(width, ' ');
      std::size_t a = col(s.invocation_time);
      std::size_t b = s.response_time ? col(*s.response_time) : width - 1;
      for (std::size_t i = a; i <= b && i < width; ++i) row[i] = '=';
      row[a] = '[';
      if (s.response_time)
        row[b] = ']';
      else if (b < width)
        row[b] = '>';
      for (const auto& [op, t] : marks)
        if (op == s.op_id) row[std::min(col(t), width - 1)] = '*';
      std::string name = client;
      name.resize(10, ' ');
      out += name + row + "  " + inv.object + "." + detail::op_label(h, s.op_id) + "\n";
    }
  }
  if (opt.show == RenderShow::intervals) {
    std::string row(width, ' ');
    for (const auto& [lo, hi] : detail::overlap_runs(h, l.t_max))
      for (std::size_t i = col(lo); i <= col(hi) && i < width; ++i) row[i] = '^';
    out += std::string(10, ' ') + row + "  overlap\n";
  }
  return out;
}

/// SVG schematic: one lane per client, one rounded bar per operation,
/// colored by object; pending operations get a dashed open end. All
/// coordinates are integers so output is byte-stable.
inline std::string render_svg(const History& h, const RenderOptions& opt = {}) {
  auto l = detail::layout_of(h);
  const int lane_h = 34;
  const int bar_h = 18;
  const int left = 90;
  const Tick span = l.t_max - l.t_min + 1;
  int unit = span > 0 ? static_cast<int>(std::max<Tick>(2, std::min<Tick>(24, 960 / span))) : 12;
  auto x_of = [&l, left, unit](Tick t) {
    return left + static_cast<int>(t - l.t_min) * unit;
  };
  const int width = x_of(l.t_max) + unit + 40;
  const int height = 50 + lane_h * static_cast<int>(l.clients.empty() ? 1 : l.clients.size());
  static const char* palette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                  "#b07aa1", "#76b7b2", "#edc948", "#9c755f"};
  const std::size_t n_colors = sizeof(palette) / sizeof(palette[0]);

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
       "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
       " " + std::to_string(height) + "\">\n";
  s += "<style>text{font-family:monospace;font-size:11px;fill:#222}</style>\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  int axis_y = height - 18;
  s += "<line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(axis_y) + "\" x2=\"" +
       std::to_string(x_of(l.t_max) + unit) + "\" y2=\"" + std::to_string(axis_y) +
       "\" stroke=\"#888\"/>\n";
  Tick step = std::max<Tick>(1, span / 10);
  for (Tick t = l.t_min; t <= l.t_max; t += step)
    s += "<text x=\"" + std::to_string(x_of(t)) + "\" y=\"" + std::to_string(axis_y + 14) +
         "\">" + std::to_string(t) + "</text>\n";

  if (opt.show == RenderShow::intervals)
    for (const auto& [lo, hi] : detail::overlap_runs(h, l.t_max))
      s += "<rect x=\"" + std::to_string(x_of(lo)) + "\" y=\"20\" width=\"" +
           std::to_string(std::max(2, x_of(hi) + unit - x_of(lo))) + "\" height=\"" +
           std::to_string(axis_y - 24) + "\" fill=\"#e15759\" fill-opacity=\"0.15\"/>\n";

  for (const auto& sp : h.spans()) {
    const auto& inv = h.invocation_of(sp.op_id);
    int lane = static_cast<int>(l.client_lane.at(inv.client));
    int y = 28 + lane * lane_h;
    int x1 = x_of(sp.invocation_time);
    Tick end = sp.response_time ? *sp.response_time : l.t_max;
    int x2 = x_of(end) + (sp.response_time ? 0 : unit);
    const char* color = palette[l.object_slot.at(inv.object) % n_colors];
    s += "<rect x=\"" + std::to_string(x1) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
         std::to_string(std::max(2, x2 - x1)) + "\" height=\"" + std::to_string(bar_h) +
         "\" rx=\"3\" fill=\"" + color + "\" fill-opacity=\"0.8\"" +
         (sp.response_time ? std::string() : std::string(" stroke=\"#444\" stroke-dasharray=\"4 3\"")) +
         "/>\n";
    s += "<text x=\"" + std::to_string(x1 + 3) + "\" y=\"" + std::to_string(y + bar_h - 5) +
         "\">" + detail::op_label(h, sp.op_id) + "</text>\n";
  }
  if (opt.show == RenderShow::points)
    for (const auto& [op, t] : detail::point_marks(h, opt.witness, l.t_max)) {
      const auto& inv = h.invocation_of(op);
      int lane = static_cast<int>(l.client_lane.at(inv.client));
      s += "<circle cx=\"" + std::to_string(x_of(t)) + "\" cy=\"" +
           std::to_string(28 + lane * lane_h + bar_h / 2) + "\" r=\"3\" fill=\"#222\"/>\n";
    }
  for (std::size_t i = 0; i < l.clients.size(); ++i)
    s += "<text x=\"6\" y=\"" + std::to_string(28 + static_cast<int>(i) * lane_h + bar_h - 5) +
         "\">" + l.clients[i] + "</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace linsmr

#endif  // LINSMR_RENDER_HPP_
