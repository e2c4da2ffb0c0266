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

#ifndef MKGC_GATES_H_
#define MKGC_GATES_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string_view>
#include <variant>
#include <vector>

#include "mkgc/mk_lwe.h"

namespace mkgc {

enum class GateKind { kAnd, kOr, kNand, kNor, kXor, kXnor, kNot };
inline constexpr std::size_t kGateKindCount = 7;
inline constexpr std::array<GateKind, 6> kBinaryGates = {
    GateKind::kAnd, GateKind::kOr,  GateKind::kNand,
    GateKind::kNor, GateKind::kXor, GateKind::kXnor};

std::string_view gate_name(GateKind kind);
bool gate_truth(GateKind kind, bool a, bool b);

enum class BackendKind { kClear, kTorusLwe };

// One encrypted (or, for the clear backend, plain) bit. `depth` is the length
// of the longest chain of refreshed gates that produced it.
struct BitCt {
  std::variant<bool, MkLweCiphertext> payload;
  std::uint32_t depth = 0;
};

struct GateCounter {
  std::array<std::uint64_t, kGateKindCount> per_gate{};
  std::uint64_t refreshes = 0;
  std::uint32_t max_depth = 0;

  std::uint64_t count(GateKind k) const {
    return per_gate[static_cast<std::size_t>(k)];
  }
  std::uint64_t nots() const { return count(GateKind::kNot); }
  // Gates that end in a refresh, i.e. everything except NOT.
  std::uint64_t bootstrapped() const { return refreshes; }
  void merge(const GateCounter& other);
};

// Calls into the ciphertext combinators, per gate evaluation.
struct CombinatorCounter {
  std::uint64_t add = 0;
  std::uint64_t sub = 0;
  std::uint64_t mul = 0;
  std::uint64_t mod_to_t = 0;
};

// Torus constants placed in the linear combination of each gate.
struct GateConstants {
  Torus32 and_offset;
  Torus32 or_offset;
  Torus32 nand_offset;
  Torus32 nor_offset;
  Torus32 xnor_offset;
};

// Constants used by the engine. With messages at {0, 1/4} and the decision
// band [1/4, 3/4), every noiseless gate phase sits 1/8 (XOR/XNOR: 1/4) from
// the band edges.
GateConstants default_gate_constants();
// The constants as commonly printed for these gates: NOR uses 1/8 and XNOR
// uses 1/4. Under the {0, 1/4} encoding NOR(0,0) lands outside the band and
// both XNOR phases land on a band edge. Kept for regression tests.
GateConstants printed_gate_constants();

// Linear combination evaluated before the refresh of a binary gate.
//   AND  (0,-1/8) + c1 + c2        OR   (0, 1/8) + c1 + c2
//   NAND (0, 5/8) - c1 - c2        NOR  (0, 3/8) - c1 - c2
//   XOR  0 + 2 (c1 - c2)           XNOR (0, 1/2) - 2 (c1 - c2)
MkLweCiphertext gate_combination(GateKind kind, const MkLweCiphertext& c1,
                                 const MkLweCiphertext& c2,
                                 const GateConstants& constants,
                                 CombinatorCounter* counter = nullptr);
// (0, 1/4) - c.
MkLweCiphertext not_combination(const MkLweCiphertext& c,
                                CombinatorCounter* counter = nullptr);

// Uniform gate interface over an evaluation substrate. Every binary gate is
// one refresh; NOT is free. Not thread-safe: one backend per worker.
class GateBackend {
 public:
  virtual ~GateBackend() = default;

  virtual BackendKind kind() const = 0;

  BitCt boots_and(const BitCt& a, const BitCt& b) { return apply(GateKind::kAnd, a, b); }
  BitCt boots_or(const BitCt& a, const BitCt& b) { return apply(GateKind::kOr, a, b); }
  BitCt boots_nand(const BitCt& a, const BitCt& b) { return apply(GateKind::kNand, a, b); }
  BitCt boots_nor(const BitCt& a, const BitCt& b) { return apply(GateKind::kNor, a, b); }
  BitCt boots_xor(const BitCt& a, const BitCt& b) { return apply(GateKind::kXor, a, b); }
  BitCt boots_xnor(const BitCt& a, const BitCt& b) { return apply(GateKind::kXnor, a, b); }
  BitCt hom_not(const BitCt& a);
  BitCt apply(GateKind kind, const BitCt& a, const BitCt& b);

  // Noiseless constant. Free, depth 0.
  BitCt constant_bit(bool m);
  // Fresh encryption; for multi-key backends `owner` picks the encrypting
  // party (default: first party of the roster).
  BitCt encrypt_bit(bool m, std::optional<PartyId> owner = std::nullopt);
  virtual bool decrypt_bit(const BitCt& c) const = 0;

  const GateCounter& counter() const { return counter_; }
  void reset_counter() { counter_ = GateCounter{}; }

 protected:
  virtual BitCt eval_binary(GateKind kind, const BitCt& a, const BitCt& b) = 0;
  virtual BitCt eval_not(const BitCt& a) = 0;
  virtual BitCt make_constant(bool m) = 0;
  virtual BitCt make_encryption(bool m, std::optional<PartyId> owner) = 0;

 private:
  GateCounter counter_;
};

// Plain booleans. Serves as the correctness oracle for circuits.
class ClearBackend final : public GateBackend {
 public:
  BackendKind kind() const override { return BackendKind::kClear; }
  bool decrypt_bit(const BitCt& c) const override;

 protected:
  BitCt eval_binary(GateKind kind, const BitCt& a, const BitCt& b) override;
  BitCt eval_not(const BitCt& a) override;
  BitCt make_constant(bool m) override;
  BitCt make_encryption(bool m, std::optional<PartyId> owner) override;
};

// What the LWE backend saw for one binary gate, before refreshing.
struct CombinationRecord {
  GateKind kind;
  double input_variance_a;
  double input_variance_b;
  double combined_variance;
};

// Multi-key LWE ciphertexts over a fixed party roster, refreshed by a shared
// RefreshOracle. Decryption uses the oracle's keyring (joint decryption).
class LweBackend final : public GateBackend {
 public:
  LweBackend(std::shared_ptr<const RefreshOracle> oracle,
             std::vector<PartyId> roster, std::uint64_t seed,
             GateConstants constants = default_gate_constants());

  BackendKind kind() const override { return BackendKind::kTorusLwe; }
  bool decrypt_bit(const BitCt& c) const override;

  const std::vector<PartyId>& roster() const { return roster_; }
  const RefreshOracle& oracle() const { return *oracle_; }
  const LweParams& params() const { return oracle_->params(); }
  const CombinatorCounter& combinators() const { return combinators_; }
  void reset_combinators() { combinators_ = CombinatorCounter{}; }

  // Called after every binary gate's linear combination.
  void set_observer(std::function<void(const CombinationRecord&)> observer) {
    observer_ = std::move(observer);
  }

 protected:
  BitCt eval_binary(GateKind kind, const BitCt& a, const BitCt& b) override;
  BitCt eval_not(const BitCt& a) override;
  BitCt make_constant(bool m) override;
  BitCt make_encryption(bool m, std::optional<PartyId> owner) override;

 private:
  const MkLweCiphertext& unwrap(const BitCt& c) const;

  std::shared_ptr<const RefreshOracle> oracle_;
  std::vector<PartyId> roster_;
  std::mt19937_64 rng_;
  GateConstants constants_;
  CombinatorCounter combinators_;
  std::function<void(const CombinationRecord&)> observer_;
};

}  // namespace mkgc

#endif  // MKGC_GATES_H_
