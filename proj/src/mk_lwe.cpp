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

#include "mkgc/mk_lwe.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

namespace mkgc {
namespace {

constexpr std::uint32_t kQuarter = 0x40000000u;
constexpr std::uint32_t kThreeQuarters = 0xC0000000u;

Torus32 uniform_torus(std::mt19937_64& rng) {
  return Torus32(static_cast<std::uint32_t>(rng() >> 32));
}

Torus32 gaussian_torus(double stddev, std::mt19937_64& rng) {
  if (stddev == 0.0) return Torus32(0);
  std::normal_distribution<double> normal(0.0, stddev);
  return torus_from_double(normal(rng));
}

Torus32 dot(std::span<const Torus32> a, const std::vector<std::uint8_t>& s) {
  std::uint32_t acc = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    acc += a[j].raw & (0u - static_cast<std::uint32_t>(s[j]));
  }
  return Torus32(acc);
}

void require_same_layout(const MkLweCiphertext& c1, const MkLweCiphertext& c2,
                         const char* op) {
  if (c1.parties() != c2.parties() || c1.n() != c2.n()) {
    throw PartyMismatchError(std::string(op) +
                             ": ciphertexts have different party lists or "
                             "dimensions; extend them first");
  }
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t& off,
                     int width) {
  if (off + width > bytes.size()) {
    throw std::invalid_argument("deserialize: truncated ciphertext");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(bytes[off + i]) << (8 * i);
  }
  off += width;
  return v;
}

}  // namespace

void LweParams::validate() const {
  if (n < 1) throw std::invalid_argument("LweParams: n must be >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("LweParams: alpha must be >= 0");
}

std::uint64_t LweParams::digest() const {
  // FNV-1a over n and the bit pattern of alpha.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  mix(n, 4);
  mix(std::bit_cast<std::uint64_t>(alpha), 8);
  return h;
}

MissingKeyError::MissingKeyError(PartyId party)
    : std::runtime_error("missing secret key for party " +
                         std::to_string(party)),
      party_(party) {}

NoiseBudgetExceeded::NoiseBudgetExceeded(double variance)
    : std::runtime_error("noise budget exceeded: variance " +
                         std::to_string(variance) +
                         " leaves less than a 6-sigma margin to 1/8"),
      variance_(variance) {}

LweSecretKey keygen(const LweParams& params, PartyId party,
                    std::mt19937_64& rng) {
  params.validate();
  LweSecretKey key;
  key.party = party;
  key.bits.resize(params.n);
  std::uint64_t word = 0;
  for (std::uint32_t j = 0; j < params.n; ++j) {
    if (j % 64 == 0) word = rng();
    key.bits[j] = static_cast<std::uint8_t>((word >> (j % 64)) & 1u);
  }
  return key;
}

Keyring::Keyring(std::vector<LweSecretKey> keys) {
  for (auto& k : keys) insert(std::move(k));
}

void Keyring::insert(LweSecretKey key) {
  const PartyId id = key.party;
  keys_.insert_or_assign(id, std::move(key));
}

const LweSecretKey& Keyring::at(PartyId party) const {
  auto it = keys_.find(party);
  if (it == keys_.end()) throw MissingKeyError(party);
  return it->second;
}

std::vector<PartyId> Keyring::parties() const {
  std::vector<PartyId> out;
  out.reserve(keys_.size());
  for (const auto& [id, key] : keys_) out.push_back(id);
  return out;
}

MkLweCiphertext::MkLweCiphertext(std::vector<PartyId> parties, std::uint32_t n)
    : parties_(std::move(parties)), n_(n), a_(parties_.size() * n) {}

std::span<Torus32> MkLweCiphertext::mask(std::size_t slot) {
  return std::span<Torus32>(a_).subspan(slot * n_, n_);
}

std::span<const Torus32> MkLweCiphertext::mask(std::size_t slot) const {
  return std::span<const Torus32>(a_).subspan(slot * n_, n_);
}

MkLweCiphertext sym_enc(const LweSecretKey& key, int m, const LweParams& params,
                        std::mt19937_64& rng) {
  if (key.bits.size() != params.n) {
    throw std::invalid_argument("sym_enc: key length does not match n");
  }
  MkLweCiphertext ct({key.party}, params.n);
  auto a = ct.mask(0);
  for (auto& x : a) x = uniform_torus(rng);
  ct.set_b(mod_to_t(m) - dot(a, key.bits) + gaussian_torus(params.alpha, rng));
  ct.set_variance(params.alpha * params.alpha);
  return ct;
}

Torus32 phase(const MkLweCiphertext& ct, const Keyring& keys) {
  // Check every key before touching the masks.
  for (PartyId p : ct.parties()) (void)keys.at(p);
  Torus32 acc = ct.b();
  for (std::size_t i = 0; i < ct.party_count(); ++i) {
    const auto& key = keys.at(ct.parties()[i]);
    if (key.bits.size() != ct.n()) {
      throw std::invalid_argument("phase: key length does not match n");
    }
    acc += dot(ct.mask(i), key.bits);
  }
  return acc;
}

int decode_phase(Torus32 ph) {
  return torus_distance(ph, Torus32(kQuarter)) <= torus_distance(ph, Torus32(0))
             ? 1
             : 0;
}

int sym_dec(const MkLweCiphertext& ct, const Keyring& keys) {
  return decode_phase(phase(ct, keys));
}

MkLweCiphertext extend(const MkLweCiphertext& ct,
                       std::span<const PartyId> targets) {
  MkLweCiphertext out(std::vector<PartyId>(targets.begin(), targets.end()),
                      ct.n());
  std::vector<bool> placed(ct.party_count(), false);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    for (std::size_t s = 0; s < ct.party_count(); ++s) {
      if (ct.parties()[s] == targets[t]) {
        auto src = ct.mask(s);
        std::copy(src.begin(), src.end(), out.mask(t).begin());
        placed[s] = true;
        break;
      }
    }
  }
  for (std::size_t s = 0; s < ct.party_count(); ++s) {
    if (!placed[s]) {
      throw PartyMismatchError("extend: party " +
                               std::to_string(ct.parties()[s]) +
                               " is absent from the target set");
    }
  }
  out.set_b(ct.b());
  out.set_variance(ct.variance());
  return out;
}

MkLweCiphertext lwe_add(const MkLweCiphertext& c1, const MkLweCiphertext& c2) {
  require_same_layout(c1, c2, "lwe_add");
  MkLweCiphertext out = c1;
  auto a = out.masks();
  auto a2 = c2.masks();
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += a2[j];
  out.set_b(c1.b() + c2.b());
  out.set_variance(c1.variance() + c2.variance());
  return out;
}

MkLweCiphertext lwe_sub(const MkLweCiphertext& c1, const MkLweCiphertext& c2) {
  require_same_layout(c1, c2, "lwe_sub");
  MkLweCiphertext out = c1;
  auto a = out.masks();
  auto a2 = c2.masks();
  for (std::size_t j = 0; j < a.size(); ++j) a[j] -= a2[j];
  out.set_b(c1.b() - c2.b());
  out.set_variance(c1.variance() + c2.variance());
  return out;
}

MkLweCiphertext lwe_mul_const(const MkLweCiphertext& c1,
                              const MkLweCiphertext& c2, std::int32_t k) {
  require_same_layout(c1, c2, "lwe_mul_const");
  if (k < -16 || k > 16) {
    throw std::invalid_argument("lwe_mul_const: |k| must be <= 16");
  }
  MkLweCiphertext out = c1;
  auto a = out.masks();
  auto a2 = c2.masks();
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += k * a2[j];
  out.set_b(c1.b() + k * c2.b());
  const double k2 = static_cast<double>(k) * static_cast<double>(k);
  out.set_variance(c1.variance() + k2 * c2.variance());
  return out;
}

MkLweCiphertext trivial_ct(Torus32 mu, std::vector<PartyId> parties,
                           std::uint32_t n) {
  MkLweCiphertext out(std::move(parties), n);
  out.set_b(mu);
  return out;
}

bool in_decision_band(Torus32 ph) {
  return ph.raw >= kQuarter && ph.raw < kThreeQuarters;
}

bool within_noise_margin(double variance) {
  return 6.0 * std::sqrt(variance) < 0.125;
}

MkLweCiphertext fresh_multikey_encryption(int m,
                                          std::span<const PartyId> parties,
                                          const Keyring& keys,
                                          const LweParams& params,
                                          std::mt19937_64& rng) {
  MkLweCiphertext out(std::vector<PartyId>(parties.begin(), parties.end()),
                      params.n);
  Torus32 remaining = mod_to_t(m);
  Torus32 b;
  for (std::size_t i = 0; i < parties.size(); ++i) {
    const auto& key = keys.at(parties[i]);
    const Torus32 share =
        i + 1 == parties.size() ? remaining : uniform_torus(rng);
    remaining -= share;
    auto a = out.mask(i);
    for (auto& x : a) x = uniform_torus(rng);
    b += share - dot(a, key.bits) + gaussian_torus(params.alpha, rng);
  }
  out.set_b(b);
  out.set_variance(static_cast<double>(parties.size()) * params.alpha *
                   params.alpha);
  return out;
}

RefreshOracle::RefreshOracle(Keyring keys, LweParams params, std::uint64_t seed)
    : keys_(std::move(keys)), params_(params), rng_(seed) {
  params_.validate();
}

MkLweCiphertext RefreshOracle::refresh(const MkLweCiphertext& ct) const {
  if (!within_noise_margin(ct.variance())) {
    throw NoiseBudgetExceeded(ct.variance());
  }
  const int m = in_decision_band(phase(ct, keys_)) ? 1 : 0;
  refreshes_.fetch_add(1, std::memory_order_relaxed);
  std::lock_guard<std::mutex> lock(rng_mutex_);
  return fresh_multikey_encryption(m, ct.parties(), keys_, params_, rng_);
}

std::size_t serialized_size(std::size_t parties, std::uint32_t n) {
  return kLweHeaderBytes + (1 + parties * n) * 4 + 8;
}

void serialize_into(const MkLweCiphertext& ct, std::vector<std::uint8_t>& out) {
  out.reserve(out.size() + serialized_size(ct.party_count(), ct.n()));
  out.insert(out.end(), {'M', 'K', 'L', 'W'});
  put_u16(out, kLweWireVersion);
  put_u16(out, static_cast<std::uint16_t>(ct.party_count()));
  put_u32(out, ct.n());
  put_u32(out, ct.b().raw);
  for (Torus32 x : ct.masks()) put_u32(out, x.raw);
  put_u64(out, std::bit_cast<std::uint64_t>(ct.variance()));
}

std::vector<std::uint8_t> serialize(const MkLweCiphertext& ct) {
  std::vector<std::uint8_t> out;
  serialize_into(ct, out);
  return out;
}

MkLweCiphertext deserialize_from(std::span<const std::uint8_t> bytes,
                                 std::size_t& offset,
                                 std::vector<PartyId> parties) {
  if (offset + 4 > bytes.size() ||
      std::memcmp(bytes.data() + offset, "MKLW", 4) != 0) {
    throw std::invalid_argument("deserialize: bad MKLW magic");
  }
  offset += 4;
  const auto version = get_le(bytes, offset, 2);
  if (version != kLweWireVersion) {
    throw std::invalid_argument("deserialize: unsupported version " +
                                std::to_string(version));
  }
  const auto p = get_le(bytes, offset, 2);
  const auto n = static_cast<std::uint32_t>(get_le(bytes, offset, 4));
  if (p != parties.size()) {
    throw std::invalid_argument("deserialize: ciphertext has " +
                                std::to_string(p) + " parties, roster has " +
                                std::to_string(parties.size()));
  }
  MkLweCiphertext ct(std::move(parties), n);
  ct.set_b(Torus32(static_cast<std::uint32_t>(get_le(bytes, offset, 4))));
  for (auto& x : ct.masks()) {
    x = Torus32(static_cast<std::uint32_t>(get_le(bytes, offset, 4)));
  }
  ct.set_variance(std::bit_cast<double>(get_le(bytes, offset, 8)));
  return ct;
}

MkLweCiphertext deserialize(std::span<const std::uint8_t> bytes,
                            std::vector<PartyId> parties) {
  std::size_t offset = 0;
  MkLweCiphertext ct = deserialize_from(bytes, offset, std::move(parties));
  if (offset != bytes.size()) {
    throw std::invalid_argument("deserialize: trailing bytes");
  }
  return ct;
}

}  // namespace mkgc
