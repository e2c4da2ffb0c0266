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

// Multi-key LWE samples over Torus32 with tracked noise variance.
//
// A ciphertext for parties (p_1..p_k) is (b, a_1..a_k) with phase
// b + sum_i <a_i, s_i>. Bits are encoded with scaling factor 1/4, so a fresh
// encryption of m has phase m/4 + e.
//
// Gate bootstrapping is modelled by RefreshOracle, a trusted component that
// holds every party's secret key, decrypts the phase exactly and re-encrypts.
// It reproduces the functional contract of a bootstrap (noise reset and
// message banding) but offers no security of its own.

#ifndef MKGC_MK_LWE_H_
#define MKGC_MK_LWE_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mkgc/torus.h"

namespace mkgc {

using PartyId = std::uint16_t;

struct LweParams {
  std::uint32_t n = 560;
  double alpha = 3.05e-5;
  // Bootstrapping/key-switching parameters of the reference deployment.
  // Carried for reporting only; the refresh oracle does not use them.
  std::uint32_t ks_base_bits = 2;    // B' = 2^2
  std::uint32_t ks_length = 8;       // d'
  std::uint32_t ring_degree = 1024;  // N
  double ring_stddev = 3.72e-9;      // beta
  std::uint32_t bk_base_bits = 9;    // B = 2^9
  std::uint32_t bk_length = 3;       // d

  static LweParams standard() { return LweParams{}; }
  void validate() const;
  // Stable 64-bit digest of (n, alpha) used to tag serialized artifacts.
  std::uint64_t digest() const;
};

class MissingKeyError : public std::runtime_error {
 public:
  explicit MissingKeyError(PartyId party);
  PartyId party() const { return party_; }

 private:
  PartyId party_;
};

class PartyMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoiseBudgetExceeded : public std::runtime_error {
 public:
  explicit NoiseBudgetExceeded(double variance);
  double variance() const { return variance_; }

 private:
  double variance_;
};

struct LweSecretKey {
  PartyId party = 0;
  std::vector<std::uint8_t> bits;  // each entry 0 or 1
};

LweSecretKey keygen(const LweParams& params, PartyId party,
                    std::mt19937_64& rng);

// Secret keys indexed by party.
class Keyring {
 public:
  Keyring() = default;
  explicit Keyring(std::vector<LweSecretKey> keys);

  void insert(LweSecretKey key);
  bool contains(PartyId party) const { return keys_.count(party) != 0; }
  // Throws MissingKeyError.
  const LweSecretKey& at(PartyId party) const;
  std::vector<PartyId> parties() const;
  std::size_t size() const { return keys_.size(); }

 private:
  std::map<PartyId, LweSecretKey> keys_;
};

class MkLweCiphertext {
 public:
  MkLweCiphertext() = default;
  // All-zero mask, b = 0, variance 0.
  MkLweCiphertext(std::vector<PartyId> parties, std::uint32_t n);

  const std::vector<PartyId>& parties() const { return parties_; }
  std::size_t party_count() const { return parties_.size(); }
  std::uint32_t n() const { return n_; }

  Torus32 b() const { return b_; }
  void set_b(Torus32 b) { b_ = b; }
  double variance() const { return variance_; }
  void set_variance(double v) { variance_ = v; }

  std::span<Torus32> mask(std::size_t slot);
  std::span<const Torus32> mask(std::size_t slot) const;
  std::span<const Torus32> masks() const { return a_; }
  std::span<Torus32> masks() { return a_; }

  friend bool operator==(const MkLweCiphertext&,
                         const MkLweCiphertext&) = default;

 private:
  std::vector<PartyId> parties_;
  std::uint32_t n_ = 0;
  Torus32 b_;
  std::vector<Torus32> a_;  // party_count() rows of n, in party order
  double variance_ = 0.0;
};

// b = m/4 - <a, s> + e under a single key; variance alpha^2.
MkLweCiphertext sym_enc(const LweSecretKey& key, int m, const LweParams& params,
                        std::mt19937_64& rng);

Torus32 phase(const MkLweCiphertext& ct, const Keyring& keys);

// Nearest message in {0, 1/4}; a tie at distance 1/8 decodes to 1.
int decode_phase(Torus32 phase);
int sym_dec(const MkLweCiphertext& ct, const Keyring& keys);

// Zero-pads the masks of parties absent from ct. `targets` must contain every
// party of ct; the output follows the order of `targets`.
MkLweCiphertext extend(const MkLweCiphertext& ct,
                       std::span<const PartyId> targets);

MkLweCiphertext lwe_add(const MkLweCiphertext& c1, const MkLweCiphertext& c2);
MkLweCiphertext lwe_sub(const MkLweCiphertext& c1, const MkLweCiphertext& c2);
// c1 + k * c2; variance var1 + k^2 * var2. |k| <= 16.
MkLweCiphertext lwe_mul_const(const MkLweCiphertext& c1,
                              const MkLweCiphertext& c2, std::int32_t k);

// Noiseless encryption of mu: zero masks, b = mu, variance 0.
MkLweCiphertext trivial_ct(Torus32 mu, std::vector<PartyId> parties,
                           std::uint32_t n);

// Refreshed phases in [1/4, 3/4) decode to 1.
bool in_decision_band(Torus32 phase);

// Refresh refuses inputs whose tracked noise could reach the 1/8 margin.
bool within_noise_margin(double variance);

class RefreshOracle {
 public:
  RefreshOracle(Keyring keys, LweParams params, std::uint64_t seed);

  const LweParams& params() const { return params_; }
  const Keyring& keys() const { return keys_; }

  // Exact phase -> band decision -> fresh encryption of the bit under all
  // parties of ct, formed as a sum of one fresh share per party. The output
  // variance is party_count * alpha^2. Throws NoiseBudgetExceeded.
  MkLweCiphertext refresh(const MkLweCiphertext& ct) const;

  std::uint64_t refresh_count() const { return refreshes_.load(); }

 private:
  Keyring keys_;
  LweParams params_;
  mutable std::mutex rng_mutex_;
  mutable std::mt19937_64 rng_;
  mutable std::atomic<std::uint64_t> refreshes_{0};
};

// Fresh multi-key encryption of m: one share per party in `parties`, each
// encrypted under that party's key. Variance |parties| * alpha^2.
MkLweCiphertext fresh_multikey_encryption(int m,
                                          std::span<const PartyId> parties,
                                          const Keyring& keys,
                                          const LweParams& params,
                                          std::mt19937_64& rng);

// Wire format, little-endian:
//   "MKLW" | version u16 | p u16 | n u32 | b u32 | p*n a u32 | variance f64
// Party ids are not on the wire; the reader supplies them.
inline constexpr std::uint16_t kLweWireVersion = 1;
inline constexpr std::size_t kLweHeaderBytes = 12;

std::size_t serialized_size(std::size_t parties, std::uint32_t n);
std::vector<std::uint8_t> serialize(const MkLweCiphertext& ct);
void serialize_into(const MkLweCiphertext& ct, std::vector<std::uint8_t>& out);
// Throws std::invalid_argument on malformed input or a roster size mismatch.
MkLweCiphertext deserialize(std::span<const std::uint8_t> bytes,
                            std::vector<PartyId> parties);
// Reads one ciphertext starting at `offset` and advances it.
MkLweCiphertext deserialize_from(std::span<const std::uint8_t> bytes,
                                 std::size_t& offset,
                                 std::vector<PartyId> parties);

}  // namespace mkgc

#endif  // MKGC_MK_LWE_H_
