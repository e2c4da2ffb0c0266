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

// Three-role training flow, simulated in process.
//
// Participants encrypt their rows under their own keys and upload serialized
// bundles. The server extends every ciphertext to the joint roster and
// trains; it never holds a secret key. Refreshing requires keys, so each
// participant also hands its key to the RefreshOracle, the stand-in for a
// bootstrapping key. That hand-off is the trust boundary of this model.
// Decryption needs every party's key.

#ifndef MKGC_PROTOCOL_H_
#define MKGC_PROTOCOL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mkgc/int_circuits.h"
#include "mkgc/linreg.h"
#include "mkgc/mk_lwe.h"

namespace mkgc {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataRow {
  std::int64_t x = 0;
  std::int64_t y = 0;
};

// Serialized single-key ciphertexts, x0 y0 x1 y1 ... Immutable once built.
struct UploadBundle {
  PartyId party = 0;
  std::size_t w = 0;
  std::uint64_t params_digest = 0;
  std::vector<std::vector<std::uint8_t>> values;

  std::size_t rows() const { return values.size() / 2; }
};

// Directory layout: manifest.json plus value_NNNN.mkin per ciphertext.
// Manifest keys: party_id, w, count, params_digest. Throws IoError.
void write_bundle(const UploadBundle& bundle, const std::filesystem::path& dir);
UploadBundle read_bundle(const std::filesystem::path& dir);

class Participant {
 public:
  // Generates the party's key from `seed`.
  Participant(PartyId id, LweParams params, std::uint64_t seed);

  PartyId id() const { return key_.party; }
  // Encrypts each row's x and y at width w. Throws std::out_of_range.
  UploadBundle prepare(const std::vector<DataRow>& rows, std::size_t w);

  // The two places a key leaves its owner.
  const LweSecretKey& key_for_refresh_oracle() const { return key_; }
  const LweSecretKey& key_for_decryption() const { return key_; }

 private:
  LweParams params_;
  LweSecretKey key_;
  std::mt19937_64 rng_;
};

std::shared_ptr<const RefreshOracle> assemble_refresh_oracle(
    std::vector<LweSecretKey> keys, const LweParams& params,
    std::uint64_t seed);

struct StepLogEntry {
  std::string phase;
  std::size_t parties = 0;
  std::uint64_t refreshes = 0;
  double elapsed_ms = 0.0;
  // Phase-specific volume: keys generated, mask words written during
  // extension, or refreshes for training and evaluation.
  std::uint64_t work = 0;
};

inline constexpr const char* kPhaseKeyGen = "KeyGen";
inline constexpr const char* kPhaseExtension = "Ciphertext extension";
inline constexpr const char* kPhaseTraining = "Training";
inline constexpr const char* kPhaseEvaluation = "Evaluation";

std::string step_log_csv(const std::vector<StepLogEntry>& log);

// No secret key anywhere in here.
struct ServerState {
  std::vector<PartyId> roster;  // ascending
  std::map<PartyId, std::vector<IntCiphertext>> received;
  EncryptedDataset dataset;
  std::shared_ptr<const RefreshOracle> oracle;
  std::optional<ModelCiphertext> model;
  std::optional<IntCiphertext> loss;
  std::vector<StepLogEntry> log;
};

// Throws std::invalid_argument on an empty list, duplicate party ids, or
// mismatched widths or parameters.
ServerState server_assemble(const std::vector<UploadBundle>& bundles,
                            std::shared_ptr<const RefreshOracle> oracle);

enum class TrainMethod { kClosedForm, kGd };

struct TrainConfig {
  TrainMethod method = TrainMethod::kClosedForm;
  GdConfig gd;
  std::uint64_t seed = 1;
  bool evaluate = true;  // also compute the encrypted training loss
};

const ModelCiphertext& server_train(ServerState& state, const TrainConfig& cfg);

class DecryptionSession {
 public:
  DecryptionSession(ModelCiphertext model, std::vector<PartyId> roster);

  // Throws std::invalid_argument for parties outside the roster.
  void contribute(LweSecretKey key);
  // Throws MissingKeyError naming the first absent party, before any
  // ciphertext is touched.
  PlainModel decrypt() const;
  std::int64_t decrypt_value(const IntCiphertext& x) const;

 private:
  void require_all_keys() const;

  ModelCiphertext model_;
  std::vector<PartyId> roster_;
  Keyring keys_;
};

PlainModel joint_decrypt(const DecryptionSession& session);

struct ProtocolConfig {
  LweParams params = LweParams::standard();
  std::size_t w = 8;
  TrainConfig train;
  std::uint64_t seed = 1;
};

struct ProtocolResult {
  PlainModel model;
  std::optional<std::int64_t> loss;
  std::vector<StepLogEntry> log;
};

// rows[i] belongs to party i + 1.
ProtocolResult run_protocol(const std::vector<std::vector<DataRow>>& rows,
                            const ProtocolConfig& cfg);

}  // namespace mkgc

#endif  // MKGC_PROTOCOL_H_
