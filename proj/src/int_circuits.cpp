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

#include "mkgc/int_circuits.h"

#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>

namespace mkgc {
namespace {

constexpr char kIntMagic[4] = {'M', 'K', 'I', 'N'};

void check_width(std::size_t w) {
  if (w < 1 || w > 62) {
    throw std::invalid_argument("integer width must be in [1, 62], got " +
                                std::to_string(w));
  }
}

void check_same_width(const IntCiphertext& a, const IntCiphertext& b) {
  if (a.width() != b.width() || a.width() == 0) {
    throw std::invalid_argument("operand widths differ or are zero");
  }
}

// A bit together with the sign of its weight in the array multiplier.
struct Signal {
  BitCt bit;
  bool negative = false;
};

std::pair<Signal, Signal> signed_cell(GateBackend& backend, Signal x,
                                      Signal y, Signal z) {
  const int negatives = int{x.negative} + int{y.negative} + int{z.negative};
  // Move negative inputs to the front.
  if (!x.negative && y.negative) std::swap(x, y);
  if (!x.negative && z.negative) std::swap(x, z);
  if (!y.negative && z.negative) std::swap(y, z);
  switch (negatives) {
    case 0: {
      auto out = homadder_cell(backend, AdderCellKind::kAdder0, x.bit, y.bit,
                               z.bit);
      return {{out.sum, false}, {out.carry, false}};
    }
    case 1: {
      auto out = homadder_cell(backend, AdderCellKind::kAdder1, x.bit, y.bit,
                               z.bit);
      return {{out.sum, true}, {out.carry, false}};
    }
    case 2: {
      auto out = homadder_cell(backend, AdderCellKind::kAdder2, x.bit, y.bit,
                               z.bit);
      return {{out.sum, false}, {out.carry, true}};
    }
    default:
      throw std::logic_error("multiplier cell with three negative inputs");
  }
}

const MkLweCiphertext& lwe_payload(const BitCt& b) {
  const auto* ct = std::get_if<MkLweCiphertext>(&b.payload);
  if (ct == nullptr) {
    throw std::invalid_argument("bit is not an LWE ciphertext");
  }
  return *ct;
}

}  // namespace

std::int64_t min_signed(std::size_t w) {
  check_width(w);
  return -(std::int64_t{1} << (w - 1));
}

std::int64_t max_signed(std::size_t w) {
  check_width(w);
  return (std::int64_t{1} << (w - 1)) - 1;
}

std::int64_t wrap_signed(std::int64_t v, std::size_t w) {
  check_width(w);
  const std::uint64_t mask = (std::uint64_t{1} << w) - 1;
  std::uint64_t u = static_cast<std::uint64_t>(v) & mask;
  if (u >> (w - 1)) u |= ~mask;
  return static_cast<std::int64_t>(u);
}

IntCiphertext encode_int(GateBackend& backend, std::int64_t v, std::size_t w,
                         std::optional<PartyId> owner) {
  check_width(w);
  if (v < min_signed(w) || v > max_signed(w)) {
    throw std::out_of_range(std::to_string(v) + " does not fit in " +
                            std::to_string(w) + " signed bits");
  }
  const auto u = static_cast<std::uint64_t>(v);
  IntCiphertext out;
  out.bits.reserve(w);
  for (std::size_t i = 0; i < w; ++i) {
    out.bits.push_back(backend.encrypt_bit(((u >> i) & 1) != 0, owner));
  }
  return out;
}

std::int64_t decode_int(const GateBackend& backend, const IntCiphertext& x) {
  check_width(x.width());
  std::uint64_t u = 0;
  for (std::size_t i = 0; i < x.width(); ++i) {
    if (backend.decrypt_bit(x.bits[i])) u |= std::uint64_t{1} << i;
  }
  return wrap_signed(static_cast<std::int64_t>(u), x.width());
}

IntCiphertext constant_int(GateBackend& backend, std::int64_t v,
                           std::size_t w) {
  check_width(w);
  const auto u = static_cast<std::uint64_t>(v);
  IntCiphertext out;
  for (std::size_t i = 0; i < w; ++i) {
    out.bits.push_back(backend.constant_bit(((u >> i) & 1) != 0));
  }
  return out;
}

IntCiphertext sign_extend(const IntCiphertext& x, std::size_t w) {
  if (w < x.width()) throw std::invalid_argument("sign_extend narrows");
  IntCiphertext out = x;
  while (out.width() < w) out.bits.push_back(x.sign());
  return out;
}

IntCiphertext low_bits(const IntCiphertext& x, std::size_t w) {
  if (w > x.width()) throw std::invalid_argument("low_bits widens");
  IntCiphertext out;
  out.bits.assign(x.bits.begin(), x.bits.begin() + static_cast<long>(w));
  return out;
}

CellOutput full_adder_cell(GateBackend& backend, const BitCt& a,
                           const BitCt& b, const BitCt& cin,
                           CarryStyle style) {
  BitCt t = backend.boots_xor(a, b);
  BitCt sum = backend.boots_xor(t, cin);
  if (style == CarryStyle::kShared) {
    BitCt ab = backend.boots_and(a, b);
    BitCt tc = backend.boots_and(t, cin);
    return {std::move(sum), backend.boots_or(ab, tc)};
  }
  BitCt ab = backend.boots_and(a, b);
  BitCt ac = backend.boots_and(a, cin);
  BitCt bc = backend.boots_and(b, cin);
  BitCt carry = backend.boots_or(backend.boots_or(ab, ac), bc);
  return {std::move(sum), std::move(carry)};
}

IntCiphertext add_with_carry(GateBackend& backend, const IntCiphertext& a,
                             const IntCiphertext& b, const BitCt& cin,
                             CarryStyle style) {
  check_same_width(a, b);
  IntCiphertext out;
  out.bits.reserve(a.width());
  BitCt carry = cin;
  for (std::size_t i = 0; i < a.width(); ++i) {
    CellOutput cell = full_adder_cell(backend, a.bits[i], b.bits[i], carry,
                                      style);
    out.bits.push_back(std::move(cell.sum));
    carry = std::move(cell.carry);
  }
  return out;
}

IntCiphertext add_w(GateBackend& backend, const IntCiphertext& a,
                    const IntCiphertext& b, CarryStyle style) {
  return add_with_carry(backend, a, b, backend.constant_bit(false), style);
}

IntCiphertext sub_w(GateBackend& backend, const IntCiphertext& a,
                    const IntCiphertext& b) {
  check_same_width(a, b);
  const BitCt one = backend.constant_bit(true);
  IntCiphertext flipped;
  flipped.bits.reserve(b.width());
  for (const BitCt& bit : b.bits) {
    flipped.bits.push_back(backend.boots_xor(bit, one));
  }
  return add_with_carry(backend, a, flipped, one);
}

CellOutput homadder_cell(GateBackend& backend, AdderCellKind kind,
                         const BitCt& a, const BitCt& b, const BitCt& c) {
  switch (kind) {
    case AdderCellKind::kAdder0:
      return full_adder_cell(backend, a, b, c);
    case AdderCellKind::kAdder1: {
      CellOutput fa = full_adder_cell(backend, backend.hom_not(a), b, c);
      return {backend.hom_not(fa.sum), std::move(fa.carry)};
    }
    case AdderCellKind::kAdder2: {
      CellOutput fa = full_adder_cell(backend, backend.hom_not(a),
                                      backend.hom_not(b), c);
      return {std::move(fa.sum), backend.hom_not(fa.carry)};
    }
  }
  throw std::logic_error("unknown adder cell kind");
}

IntCiphertext mul_full(GateBackend& backend, const IntCiphertext& a,
                       const IntCiphertext& b) {
  check_same_width(a, b);
  const std::size_t k = a.width();
  if (k < 2) throw std::invalid_argument("multiplier width must be >= 2");
  auto pp = [&](std::size_t row, std::size_t col) {
    const bool negative = (row == k - 1) != (col == k - 1);
    return Signal{backend.boots_and(a.bits[col], b.bits[row]), negative};
  };

  std::vector<Signal> product;
  product.reserve(2 * k);
  std::vector<Signal> sums;
  for (std::size_t j = 0; j < k; ++j) sums.push_back(pp(0, j));
  std::vector<Signal> carries(k > 1 ? k - 1 : 0,
                              Signal{backend.constant_bit(false), false});
  product.push_back(sums[0]);

  // Carry-save rows.
  for (std::size_t r = 1; r < k; ++r) {
    std::vector<Signal> next_sums;
    std::vector<Signal> next_carries;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      auto [s, c] = signed_cell(backend, pp(r, j), sums[j + 1], carries[j]);
      next_sums.push_back(std::move(s));
      next_carries.push_back(std::move(c));
    }
    next_sums.push_back(pp(r, k - 1));
    sums = std::move(next_sums);
    carries = std::move(next_carries);
    product.push_back(sums[0]);
  }

  // Ripple row. The zero carry-in is typed negative so that every cell of
  // this row sees two negative inputs.
  Signal carry{backend.constant_bit(false), true};
  for (std::size_t j = 0; j + 1 < k; ++j) {
    auto [s, c] = signed_cell(backend, sums[j + 1], carries[j], carry);
    product.push_back(std::move(s));
    carry = std::move(c);
  }
  product.push_back(carry);

  IntCiphertext out;
  for (std::size_t t = 0; t < product.size(); ++t) {
    const bool want_negative = (t == 2 * k - 1);
    if (product[t].negative != want_negative) {
      throw std::logic_error("multiplier output weight mismatch");
    }
    out.bits.push_back(std::move(product[t].bit));
  }
  return out;
}

IntCiphertext mul_w(GateBackend& backend, const IntCiphertext& a,
                    const IntCiphertext& b) {
  return low_bits(mul_full(backend, a, b), a.width());
}

CellOutput cas_cell(GateBackend& backend, const BitCt& a, const BitCt& b,
                    const BitCt& cin, const BitCt& p) {
  BitCt bp = backend.boots_xor(b, p);
  BitCt sum = backend.boots_xor(a, backend.boots_xor(bp, cin));
  BitCt either = backend.boots_or(a, cin);
  BitCt carry = backend.boots_or(backend.boots_and(either, bp),
                                 backend.boots_and(a, cin));
  return {std::move(sum), std::move(carry)};
}

IntCiphertext conditional_negate(GateBackend& backend, const IntCiphertext& x,
                                 const BitCt& s) {
  IntCiphertext out;
  out.bits.reserve(x.width());
  BitCt carry = s;
  for (std::size_t i = 0; i < x.width(); ++i) {
    BitCt flipped = backend.boots_xor(x.bits[i], s);
    out.bits.push_back(backend.boots_xor(flipped, carry));
    if (i + 1 < x.width()) carry = backend.boots_and(flipped, carry);
  }
  return out;
}

IntCiphertext compensate(GateBackend& backend, const IntCiphertext& x) {
  check_width(x.width());
  const BitCt s = x.sign();
  IntCiphertext out =
      conditional_negate(backend, low_bits(x, x.width() - 1), s);
  out.bits.push_back(s);
  return out;
}

DivResult div_w(GateBackend& backend, const IntCiphertext& dividend,
                const IntCiphertext& divisor) {
  const std::size_t w = divisor.width();
  check_width(w);
  if (dividend.width() != 2 * w) {
    throw std::invalid_argument("dividend must be twice the divisor width");
  }
  const BitCt sa = dividend.sign();
  const BitCt sb = divisor.sign();

  // Magnitudes, read as unsigned.
  const IntCiphertext d = conditional_negate(backend, dividend, sa);
  const IntCiphertext v = conditional_negate(backend, divisor, sb);

  // Non-restoring rows: R <- 2R + d_i, then R - V while the last partial
  // remainder was non-negative, R + V otherwise.
  IntCiphertext rem;
  rem.bits.assign(d.bits.begin() + static_cast<long>(w), d.bits.end());
  BitCt p = backend.constant_bit(true);
  std::vector<BitCt> q(w);
  DivResult result;
  for (std::size_t step = 0; step < w; ++step) {
    const std::size_t i = w - 1 - step;
    std::vector<BitCt> shifted;
    shifted.reserve(w);
    shifted.push_back(d.bits[i]);
    for (std::size_t j = 0; j + 1 < w; ++j) shifted.push_back(rem.bits[j]);

    BitCt carry = p;
    for (std::size_t j = 0; j < w; ++j) {
      CellOutput cell = cas_cell(backend, shifted[j], v.bits[j], carry, p);
      rem.bits[j] = std::move(cell.sum);
      carry = std::move(cell.carry);
    }
    q[i] = backend.hom_not(rem.sign());
    p = q[i];
    ++result.layers;
  }

  // A negative final remainder gets V added back.
  const BitCt negative = rem.sign();
  IntCiphertext addend;
  for (std::size_t j = 0; j < w; ++j) {
    addend.bits.push_back(backend.boots_and(v.bits[j], negative));
  }
  const IntCiphertext rem_mag = add_w(backend, rem, addend);

  IntCiphertext q_mag;
  q_mag.bits = std::move(q);
  const BitCt q_sign = backend.boots_xor(sa, sb);
  result.quotient = conditional_negate(backend, q_mag, q_sign);
  result.remainder = conditional_negate(backend, rem_mag, sa);
  return result;
}

DivResult div_same_width(GateBackend& backend, const IntCiphertext& a,
                         const IntCiphertext& b) {
  check_same_width(a, b);
  return div_w(backend, sign_extend(a, 2 * a.width()), b);
}

IntCiphertext encrypt_int(std::int64_t v, std::size_t w,
                          const LweSecretKey& key, const LweParams& params,
                          std::mt19937_64& rng) {
  check_width(w);
  if (v < min_signed(w) || v > max_signed(w)) {
    throw std::out_of_range(std::to_string(v) + " does not fit in " +
                            std::to_string(w) + " signed bits");
  }
  const auto u = static_cast<std::uint64_t>(v);
  IntCiphertext out;
  for (std::size_t i = 0; i < w; ++i) {
    out.bits.push_back(
        BitCt{sym_enc(key, static_cast<int>((u >> i) & 1), params, rng), 0});
  }
  return out;
}

std::int64_t decrypt_int(const IntCiphertext& x, const Keyring& keys) {
  check_width(x.width());
  std::uint64_t u = 0;
  for (std::size_t i = 0; i < x.width(); ++i) {
    if (sym_dec(lwe_payload(x.bits[i]), keys) != 0) u |= std::uint64_t{1} << i;
  }
  return wrap_signed(static_cast<std::int64_t>(u), x.width());
}

IntCiphertext extend_int(const IntCiphertext& x,
                         std::span<const PartyId> targets) {
  IntCiphertext out;
  out.bits.reserve(x.width());
  for (const BitCt& b : x.bits) {
    out.bits.push_back(BitCt{extend(lwe_payload(b), targets), b.depth});
  }
  return out;
}

std::vector<std::uint8_t> serialize_int(const IntCiphertext& x) {
  check_width(x.width());
  std::vector<std::uint8_t> out(kIntMagic, kIntMagic + 4);
  const auto w = static_cast<std::uint16_t>(x.width());
  out.push_back(static_cast<std::uint8_t>(w & 0xff));
  out.push_back(static_cast<std::uint8_t>(w >> 8));
  for (const BitCt& b : x.bits) serialize_into(lwe_payload(b), out);
  return out;
}

IntCiphertext deserialize_int(std::span<const std::uint8_t> bytes,
                              const std::vector<PartyId>& parties) {
  if (bytes.size() < 6 || std::memcmp(bytes.data(), kIntMagic, 4) != 0) {
    throw std::invalid_argument("not an integer ciphertext");
  }
  const std::size_t w = bytes[4] | (std::size_t{bytes[5]} << 8);
  check_width(w);
  std::size_t offset = 6;
  IntCiphertext out;
  for (std::size_t i = 0; i < w; ++i) {
    out.bits.push_back(BitCt{deserialize_from(bytes, offset, parties), 0});
  }
  if (offset != bytes.size()) {
    throw std::invalid_argument("trailing bytes after integer ciphertext");
  }
  return out;
}

}  // namespace mkgc
