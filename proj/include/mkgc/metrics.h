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

// Gate-count and depth reports for the integer operators.

#ifndef MKGC_METRICS_H_
#define MKGC_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mkgc/gates.h"

namespace mkgc {

enum class OpKind { kAdd, kSub, kMul, kDiv };

std::string_view op_name(OpKind op);
// Throws std::invalid_argument for unknown names.
OpKind parse_op(std::string_view name);

// Published closed-form gate counts: add 5w, sub 6w, mul 7w(w-1),
// div 7w^2 + 2w + 1.
std::uint64_t published_gate_count(OpKind op, std::size_t w);

struct CostReport {
  OpKind op = OpKind::kAdd;
  std::size_t w = 0;
  std::uint64_t gates = 0;  // bootstrapped
  std::uint64_t nots = 0;
  std::uint32_t depth = 0;  // longest refresh chain to any output bit
  std::uint64_t published = 0;
  bool match = false;
  std::optional<std::size_t> layers;  // divider only
};

// Evaluates `op` once at width w on fresh operands and records the counts.
// With no backend given a ClearBackend is used.
CostReport measure(OpKind op, std::size_t w, GateBackend* backend = nullptr);

struct GateComparisonRow {
  GateKind gate;
  std::uint64_t direct = 0;         // refreshes of the native gate
  std::uint64_t nand_composed = 0;  // refreshes of a NAND-only composition
  double reduction = 0.0;           // 1 - direct / nand_composed
};

// Counts are measured by evaluating both constructions.
std::vector<GateComparisonRow> naive_gate_comparison();

enum class Growth { kConstant, kLinear, kQuadratic, kOther };
std::string_view growth_name(Growth g);

struct ScalingSeries {
  OpKind op;
  std::vector<CostReport> points;
  Growth growth = Growth::kOther;
};

// Widths must be consecutive for the growth classification; it is read off
// the finite differences of the gate counts.
ScalingSeries scaling_report(OpKind op, std::size_t w_lo, std::size_t w_hi);

std::string csv_header();
std::string to_csv_row(const CostReport& r);
std::string to_text(const std::vector<CostReport>& rows);
std::string to_text(const std::vector<GateComparisonRow>& rows);

}  // namespace mkgc

#endif  // MKGC_METRICS_H_
