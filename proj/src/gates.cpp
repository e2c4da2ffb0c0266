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

#include "mkgc/gates.h"

#include <algorithm>
#include <stdexcept>

namespace mkgc {

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kAnd: return "AND";
    case GateKind::kOr: return "OR";
    case GateKind::kNand: return "NAND";
    case GateKind::kNor: return "NOR";
    case GateKind::kXor: return "XOR";
    case GateKind::kXnor: return "XNOR";
    case GateKind::kNot: return "NOT";
  }
  return "?";
}

bool gate_truth(GateKind kind, bool a, bool b) {
  switch (kind) {
    case GateKind::kAnd: return a && b;
    case GateKind::kOr: return a || b;
    case GateKind::kNand: return !(a && b);
    case GateKind::kNor: return !(a || b);
    case GateKind::kXor: return a != b;
    case GateKind::kXnor: return a == b;
    case GateKind::kNot: return !a;
  }
  return false;
}

void GateCounter::merge(const GateCounter& other) {
  for (std::size_t i = 0; i < per_gate.size(); ++i) per_gate[i] += other.per_gate[i];
  refreshes += other.refreshes;
  max_depth = std::max(max_depth, other.max_depth);
}

GateConstants default_gate_constants() {
  return GateConstants{
      .and_offset = torus_from_rational(-1, 8),
      .or_offset = torus_from_rational(1, 8),
      .nand_offset = torus_from_rational(5, 8),
      .nor_offset = torus_from_rational(3, 8),
      .xnor_offset = torus_from_rational(1, 2),
  };
}

GateConstants printed_gate_constants() {
  GateConstants c = default_gate_constants();
  c.nor_offset = torus_from_rational(1, 8);
  c.xnor_offset = torus_from_rational(1, 4);
  return c;
}

MkLweCiphertext gate_combination(GateKind kind, const MkLweCiphertext& c1,
                                 const MkLweCiphertext& c2,
                                 const GateConstants& constants,
                                 CombinatorCounter* counter) {
  CombinatorCounter local;
  CombinatorCounter& cc = counter ? *counter : local;
  auto constant = [&](Torus32 mu) {
    ++cc.mod_to_t;
    return trivial_ct(mu, c1.parties(), c1.n());
  };
  auto add = [&](const MkLweCiphertext& x, const MkLweCiphertext& y) {
    ++cc.add;
    return lwe_add(x, y);
  };
  auto sub = [&](const MkLweCiphertext& x, const MkLweCiphertext& y) {
    ++cc.sub;
    return lwe_sub(x, y);
  };
  auto mul = [&](const MkLweCiphertext& x, const MkLweCiphertext& y,
                 std::int32_t k) {
    ++cc.mul;
    return lwe_mul_const(x, y, k);
  };

  switch (kind) {
    case GateKind::kAnd:
      return add(add(constant(constants.and_offset), c1), c2);
    case GateKind::kOr:
      return add(add(constant(constants.or_offset), c1), c2);
    case GateKind::kNand:
      return sub(sub(constant(constants.nand_offset), c1), c2);
    case GateKind::kNor:
      return sub(sub(constant(constants.nor_offset), c1), c2);
    case GateKind::kXor:
      return mul(MkLweCiphertext(c1.parties(), c1.n()), sub(c1, c2), 2);
    case GateKind::kXnor:
      return mul(constant(constants.xnor_offset), sub(c1, c2), -2);
    case GateKind::kNot:
      break;
  }
  throw std::invalid_argument("gate_combination: NOT is not a binary gate");
}

MkLweCiphertext not_combination(const MkLweCiphertext& c,
                                CombinatorCounter* counter) {
  if (counter) {
    ++counter->mod_to_t;
    ++counter->sub;
  }
  return lwe_sub(trivial_ct(mod_to_t(1), c.parties(), c.n()), c);
}

BitCt GateBackend::apply(GateKind kind, const BitCt& a, const BitCt& b) {
  if (kind == GateKind::kNot) {
    throw std::invalid_argument("apply: NOT takes one input; use hom_not");
  }
  BitCt out = eval_binary(kind, a, b);
  out.depth = std::max(a.depth, b.depth) + 1;
  ++counter_.per_gate[static_cast<std::size_t>(kind)];
  ++counter_.refreshes;
  counter_.max_depth = std::max(counter_.max_depth, out.depth);
  return out;
}

BitCt GateBackend::hom_not(const BitCt& a) {
  BitCt out = eval_not(a);
  out.depth = a.depth;
  ++counter_.per_gate[static_cast<std::size_t>(GateKind::kNot)];
  return out;
}

BitCt GateBackend::constant_bit(bool m) { return make_constant(m); }

BitCt GateBackend::encrypt_bit(bool m, std::optional<PartyId> owner) {
  return make_encryption(m, owner);
}

namespace {

bool clear_value(const BitCt& c) {
  const bool* v = std::get_if<bool>(&c.payload);
  if (!v) throw std::invalid_argument("clear backend received an LWE ciphertext");
  return *v;
}

}  // namespace

bool ClearBackend::decrypt_bit(const BitCt& c) const { return clear_value(c); }

BitCt ClearBackend::eval_binary(GateKind kind, const BitCt& a, const BitCt& b) {
  return BitCt{gate_truth(kind, clear_value(a), clear_value(b))};
}

BitCt ClearBackend::eval_not(const BitCt& a) { return BitCt{!clear_value(a)}; }

BitCt ClearBackend::make_constant(bool m) { return BitCt{m}; }

BitCt ClearBackend::make_encryption(bool m, std::optional<PartyId>) {
  return BitCt{m};
}

LweBackend::LweBackend(std::shared_ptr<const RefreshOracle> oracle,
                       std::vector<PartyId> roster, std::uint64_t seed,
                       GateConstants constants)
    : oracle_(std::move(oracle)),
      roster_(std::move(roster)),
      rng_(seed),
      constants_(constants) {
  if (!oracle_) throw std::invalid_argument("LweBackend: null refresh oracle");
  if (roster_.empty()) throw std::invalid_argument("LweBackend: empty roster");
  for (PartyId p : roster_) (void)oracle_->keys().at(p);
}

const MkLweCiphertext& LweBackend::unwrap(const BitCt& c) const {
  const auto* ct = std::get_if<MkLweCiphertext>(&c.payload);
  if (!ct) throw std::invalid_argument("LWE backend received a clear bit");
  return *ct;
}

bool LweBackend::decrypt_bit(const BitCt& c) const {
  return sym_dec(unwrap(c), oracle_->keys()) == 1;
}

BitCt LweBackend::eval_binary(GateKind kind, const BitCt& a, const BitCt& b) {
  const auto& ca = unwrap(a);
  const auto& cb = unwrap(b);
  MkLweCiphertext combined =
      gate_combination(kind, ca, cb, constants_, &combinators_);
  if (observer_) {
    observer_(CombinationRecord{kind, ca.variance(), cb.variance(),
                                combined.variance()});
  }
  return BitCt{oracle_->refresh(combined)};
}

BitCt LweBackend::eval_not(const BitCt& a) {
  return BitCt{not_combination(unwrap(a), &combinators_)};
}

BitCt LweBackend::make_constant(bool m) {
  return BitCt{trivial_ct(mod_to_t(m ? 1 : 0), roster_, params().n)};
}

BitCt LweBackend::make_encryption(bool m, std::optional<PartyId> owner) {
  const PartyId party = owner.value_or(roster_.front());
  if (std::find(roster_.begin(), roster_.end(), party) == roster_.end()) {
    throw std::invalid_argument("encrypt_bit: party not in roster");
  }
  auto single = sym_enc(oracle_->keys().at(party), m ? 1 : 0, params(), rng_);
  return BitCt{extend(single, roster_)};
}

}  // namespace mkgc
