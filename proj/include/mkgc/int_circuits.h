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

// Two's-complement integer circuits built from bootstrapped gates.
//
// Integers are little-endian vectors of bit ciphertexts; bits[w-1] is the
// sign. All operators work modulo 2^w, like fixed-width machine integers.

#ifndef MKGC_INT_CIRCUITS_H_
#define MKGC_INT_CIRCUITS_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "mkgc/gates.h"
#include "mkgc/mk_lwe.h"

namespace mkgc {

struct IntCiphertext {
  std::vector<BitCt> bits;

  std::size_t width() const { return bits.size(); }
  const BitCt& sign() const { return bits.back(); }
};

std::int64_t min_signed(std::size_t w);
std::int64_t max_signed(std::size_t w);
// Reinterprets the low w bits of v as a w-bit two's-complement value.
std::int64_t wrap_signed(std::int64_t v, std::size_t w);

// Throws std::out_of_range if v does not fit in w bits.
IntCiphertext encode_int(GateBackend& backend, std::int64_t v, std::size_t w,
                         std::optional<PartyId> owner = std::nullopt);
std::int64_t decode_int(const GateBackend& backend, const IntCiphertext& x);
// Noiseless encoding of a public constant.
IntCiphertext constant_int(GateBackend& backend, std::int64_t v, std::size_t w);

// Copies the sign bit upward; no gates.
IntCiphertext sign_extend(const IntCiphertext& x, std::size_t w);
IntCiphertext low_bits(const IntCiphertext& x, std::size_t w);

struct CellOutput {
  BitCt sum;
  BitCt carry;
};

enum class CarryStyle {
  // carry = (a & b) | ((a ^ b) & c), sharing the sum's first XOR: 5 gates
  // per full adder.
  kShared,
  // carry = ((a & b) | (a & c)) | (b & c): 7 gates per full adder.
  kMajority,
};

CellOutput full_adder_cell(GateBackend& backend, const BitCt& a, const BitCt& b,
                           const BitCt& cin,
                           CarryStyle style = CarryStyle::kShared);

// Ripple-carry adder with carry-in 0; the final carry is dropped. 5w gates.
IntCiphertext add_w(GateBackend& backend, const IntCiphertext& a,
                    const IntCiphertext& b,
                    CarryStyle style = CarryStyle::kShared);
// a + b + cin.
IntCiphertext add_with_carry(GateBackend& backend, const IntCiphertext& a,
                             const IntCiphertext& b, const BitCt& cin,
                             CarryStyle style = CarryStyle::kShared);
// a + (~b) + 1, with ~b formed by bootstrapped XOR against 1. 6w gates.
IntCiphertext sub_w(GateBackend& backend, const IntCiphertext& a,
                    const IntCiphertext& b);

// Full-adder variants for inputs of weight -1:
//   kAdder0: a + b + c         = 2*carry + sum
//   kAdder1: -a + b + c        = 2*carry - sum
//   kAdder2: -a - b + c        = -2*carry + sum
enum class AdderCellKind { kAdder0, kAdder1, kAdder2 };

CellOutput homadder_cell(GateBackend& backend, AdderCellKind kind,
                         const BitCt& a, const BitCt& b, const BitCt& c);

// Signed array multiplier, w >= 2: w^2 partial-product ANDs feeding w rows of w-1
// homadder cells (w-1 carry-save rows and a final ripple row). Returns all 2w
// product bits.
IntCiphertext mul_full(GateBackend& backend, const IntCiphertext& a,
                       const IntCiphertext& b);
// Low w bits of mul_full, i.e. the product modulo 2^w.
IntCiphertext mul_w(GateBackend& backend, const IntCiphertext& a,
                    const IntCiphertext& b);

// Controlled adder/subtractor: adds b when p = 0, adds ~b when p = 1 (the
// row's carry-in supplies the +1). Seven gates.
CellOutput cas_cell(GateBackend& backend, const BitCt& a, const BitCt& b,
                    const BitCt& cin, const BitCt& p);

// -x modulo 2^width when s = 1, x otherwise: XOR every bit with s, then
// add s.
IntCiphertext conditional_negate(GateBackend& backend, const IntCiphertext& x,
                                 const BitCt& s);
// Converts between two's complement and sign-magnitude: the magnitude bits
// are conditionally negated by the sign bit, which is kept. Involutive.
IntCiphertext compensate(GateBackend& backend, const IntCiphertext& x);

struct DivResult {
  IntCiphertext quotient;
  IntCiphertext remainder;
  std::size_t layers = 0;  // rows of CAS cells
};

// Signed division of a 2w-bit dividend by a w-bit divisor. The quotient
// truncates toward zero and the remainder takes the dividend's sign.
// The divisor must be non-zero and the quotient must fit in w bits; neither
// can be checked under encryption, so violations give unspecified bits.
DivResult div_w(GateBackend& backend, const IntCiphertext& dividend,
                const IntCiphertext& divisor);
// Divides w-bit values by sign-extending the dividend.
DivResult div_same_width(GateBackend& backend, const IntCiphertext& a,
                         const IntCiphertext& b);

// Single-key encryption outside any backend (participant side).
IntCiphertext encrypt_int(std::int64_t v, std::size_t w,
                          const LweSecretKey& key, const LweParams& params,
                          std::mt19937_64& rng);
std::int64_t decrypt_int(const IntCiphertext& x, const Keyring& keys);
IntCiphertext extend_int(const IntCiphertext& x,
                         std::span<const PartyId> targets);

// "MKIN" | w u16 | w serialized bit ciphertexts.
std::vector<std::uint8_t> serialize_int(const IntCiphertext& x);
IntCiphertext deserialize_int(std::span<const std::uint8_t> bytes,
                              const std::vector<PartyId>& parties);

}  // namespace mkgc

#endif  // MKGC_INT_CIRCUITS_H_
