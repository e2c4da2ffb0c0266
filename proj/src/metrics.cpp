/*
 * Copyright 2026 The mkgc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mkgc/metrics.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "mkgc/int_circuits.h"

namespace mkgc {
namespace {

std::uint32_t output_depth(const IntCiphertext& x) {
  std::uint32_t d = 0;
  for (const BitCt& b : x.bits) d = std::max(d, b.depth);
  return d;
}

// NAND-only constructions. NOT costs one NAND with both inputs tied.
BitCt nand_not(GateBackend& g, const BitCt& a) { return g.boots_nand(a, a); }

BitCt nand_composed(GateBackend& g, GateKind kind, const BitCt& a,
                    const BitCt& b) {
  switch (kind) {
    case GateKind::kNand:
      return g.boots_nand(a, b);
    case GateKind::kAnd:
      return nand_not(g, g.boots_nand(a, b));
    case GateKind::kOr:
      return g.boots_nand(nand_not(g, a), nand_not(g, b));
    case GateKind::kNor:
      return nand_not(g, g.boots_nand(nand_not(g, a), nand_not(g, b)));
    case GateKind::kXor: {
      BitCt t = g.boots_nand(a, b);
      return g.boots_nand(g.boots_nand(a, t), g.boots_nand(b, t));
    }
    case GateKind::kXnor: {
      BitCt t = g.boots_nand(a, b);
      return nand_not(g,
                      g.boots_nand(g.boots_nand(a, t), g.boots_nand(b, t)));
    }
    case GateKind::kNot:
      return nand_not(g, a);
  }
  throw std::logic_error("unknown gate");
}

}  // namespace

std::string_view op_name(OpKind op) {
  switch (op) {
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kDiv: return "div";
  }
  return "?";
}

OpKind parse_op(std::string_view name) {
  for (OpKind op : {OpKind::kAdd, OpKind::kSub, OpKind::kMul, OpKind::kDiv}) {
    if (op_name(op) == name) return op;
  }
  throw std::invalid_argument("unknown operator: " + std::string(name));
}

std::uint64_t published_gate_count(OpKind op, std::size_t w) {
  switch (op) {
    case OpKind::kAdd: return 5 * w;
    case OpKind::kSub: return 6 * w;
    case OpKind::kMul: return 7 * w * (w - 1);
    case OpKind::kDiv: return 7 * w * w + 2 * w + 1;
  }
  return 0;
}

CostReport measure(OpKind op, std::size_t w, GateBackend* backend) {
  ClearBackend clear;
  GateBackend& g = backend != nullptr ? *backend : clear;
  // Gate counts do not depend on the operand values.
  const IntCiphertext a = encode_int(g, 0, w);
  const IntCiphertext b = encode_int(g, -1, w);
  g.reset_counter();

  CostReport r;
  r.op = op;
  r.w = w;
  switch (op) {
    case OpKind::kAdd:
      r.depth = output_depth(add_w(g, a, b));
      break;
    case OpKind::kSub:
      r.depth = output_depth(sub_w(g, a, b));
      break;
    case OpKind::kMul:
      r.depth = output_depth(mul_w(g, a, b));
      break;
    case OpKind::kDiv: {
      DivResult d = div_w(g, sign_extend(a, 2 * w), b);
      r.depth = std::max(output_depth(d.quotient), output_depth(d.remainder));
      r.layers = d.layers;
      break;
    }
  }
  r.gates = g.counter().bootstrapped();
  r.nots = g.counter().nots();
  r.published = published_gate_count(op, w);
  r.match = r.gates == r.published;
  return r;
}

std::vector<GateComparisonRow> naive_gate_comparison() {
  std::vector<GateComparisonRow> rows;
  const std::array<GateKind, 7> gates = {
      GateKind::kAnd, GateKind::kOr,   GateKind::kNand, GateKind::kNor,
      GateKind::kXor, GateKind::kXnor, GateKind::kNot};
  for (GateKind kind : gates) {
    GateComparisonRow row;
    row.gate = kind;
    for (int m = 0; m < 4; ++m) {
      const bool x = (m & 2) != 0, y = (m & 1) != 0;
      ClearBackend direct;
      ClearBackend composed;
      const BitCt dx = direct.constant_bit(x), dy = direct.constant_bit(y);
      const BitCt cx = composed.constant_bit(x), cy = composed.constant_bit(y);
      const BitCt d = kind == GateKind::kNot ? direct.hom_not(dx)
                                             : direct.apply(kind, dx, dy);
      const BitCt c = nand_composed(composed, kind, cx, cy);
      if (direct.decrypt_bit(d) != composed.decrypt_bit(c)) {
        throw std::logic_error("NAND composition disagrees for " +
                               std::string(gate_name(kind)));
      }
      row.direct = direct.counter().bootstrapped();
      row.nand_composed = composed.counter().bootstrapped();
    }
    row.reduction =
        1.0 - static_cast<double>(row.direct) /
                  static_cast<double>(row.nand_composed);
    rows.push_back(row);
  }
  return rows;
}

std::string_view growth_name(Growth g) {
  switch (g) {
    case Growth::kConstant: return "constant";
    case Growth::kLinear: return "linear";
    case Growth::kQuadratic: return "quadratic";
    case Growth::kOther: return "other";
  }
  return "?";
}

ScalingSeries scaling_report(OpKind op, std::size_t w_lo, std::size_t w_hi) {
  if (w_lo == 0 || w_hi < w_lo) throw std::invalid_argument("bad width range");
  ScalingSeries s;
  s.op = op;
  for (std::size_t w = w_lo; w <= w_hi; ++w) s.points.push_back(measure(op, w));

  std::vector<std::int64_t> diff;
  for (const auto& p : s.points) diff.push_back(static_cast<std::int64_t>(p.gates));
  // Take differences until the sequence is constant; the number of rounds is
  // the polynomial degree.
  for (int degree = 0; degree <= 2 && !diff.empty(); ++degree) {
    const bool constant =
        std::all_of(diff.begin(), diff.end(),
                    [&](std::int64_t v) { return v == diff.front(); });
    if (constant && diff.size() >= 2) {
      s.growth = degree == 0   ? Growth::kConstant
                 : degree == 1 ? Growth::kLinear
                               : Growth::kQuadratic;
      return s;
    }
    std::vector<std::int64_t> next;
    for (std::size_t i = 1; i < diff.size(); ++i) next.push_back(diff[i] - diff[i - 1]);
    diff = std::move(next);
  }
  s.growth = Growth::kOther;
  return s;
}

std::string csv_header() { return "op,w,gates,nots,depth,paper_formula,match"; }

std::string to_csv_row(const CostReport& r) {
  std::ostringstream os;
  os << op_name(r.op) << ',' << r.w << ',' << r.gates << ',' << r.nots << ','
     << r.depth << ',' << r.published << ',' << (r.match ? "yes" : "no");
  return os.str();
}

std::string to_text(const std::vector<CostReport>& rows) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-4s %4s %8s %6s %6s %10s %8s %6s\n", "op",
                "w", "gates", "nots", "depth", "published", "delta", "layers");
  os << line;
  for (const auto& r : rows) {
    const long long delta = static_cast<long long>(r.gates) -
                            static_cast<long long>(r.published);
    const std::string layers = r.layers ? std::to_string(*r.layers) : "-";
    std::snprintf(line, sizeof line, "%-4s %4zu %8llu %6llu %6u %10llu %+8lld %6s\n",
                  std::string(op_name(r.op)).c_str(), r.w,
                  static_cast<unsigned long long>(r.gates),
                  static_cast<unsigned long long>(r.nots), r.depth,
                  static_cast<unsigned long long>(r.published), delta,
                  layers.c_str());
    os << line;
  }
  return os.str();
}

std::string to_text(const std::vector<GateComparisonRow>& rows) {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "%-5s %7s %14s %10s\n", "gate", "direct",
                "nand-composed", "reduction");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-5s %7llu %14llu %9.1f%%\n",
                  std::string(gate_name(r.gate)).c_str(),
                  static_cast<unsigned long long>(r.direct),
                  static_cast<unsigned long long>(r.nand_composed),
                  100.0 * r.reduction);
    os << line;
  }
  return os.str();
}

}  // namespace mkgc
