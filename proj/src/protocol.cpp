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

#include "mkgc/protocol.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mkgc {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (std::uint64_t{out[0]} << 32) | out[1];
}

std::string value_file(std::size_t i) {
  char name[32];
  std::snprintf(name, sizeof name, "value_%04zu.mkin", i);
  return name;
}

}  // namespace

void write_bundle(const UploadBundle& bundle,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < bundle.values.size(); ++i) {
    std::ofstream out(dir / value_file(i), std::ios::binary);
    out.write(reinterpret_cast<const char*>(bundle.values[i].data()),
              static_cast<std::streamsize>(bundle.values[i].size()));
    if (!out) throw IoError("cannot write " + (dir / value_file(i)).string());
  }
  nlohmann::json manifest = {
      {"party_id", bundle.party},
      {"w", bundle.w},
      {"count", bundle.values.size()},
      {"params_digest", bundle.params_digest},
  };
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("cannot write manifest in " + dir.string());
}

UploadBundle read_bundle(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("cannot read manifest in " + dir.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  UploadBundle bundle;
  try {
    bundle.party = manifest.at("party_id").get<PartyId>();
    bundle.w = manifest.at("w").get<std::size_t>();
    bundle.params_digest = manifest.at("params_digest").get<std::uint64_t>();
    const auto count = manifest.at("count").get<std::size_t>();
    for (std::size_t i = 0; i < count; ++i) {
      std::ifstream f(dir / value_file(i), std::ios::binary);
      if (!f) throw IoError("cannot read " + (dir / value_file(i)).string());
      bundle.values.emplace_back(std::istreambuf_iterator<char>(f),
                                 std::istreambuf_iterator<char>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  return bundle;
}

Participant::Participant(PartyId id, LweParams params, std::uint64_t seed)
    : params_(std::move(params)), rng_(seed) {
  params_.validate();
  key_ = keygen(params_, id, rng_);
}

UploadBundle Participant::prepare(const std::vector<DataRow>& rows,
                                  std::size_t w) {
  UploadBundle bundle;
  bundle.party = id();
  bundle.w = w;
  bundle.params_digest = params_.digest();
  for (const DataRow& row : rows) {
    for (std::int64_t v : {row.x, row.y}) {
      bundle.values.push_back(
          serialize_int(encrypt_int(v, w, key_, params_, rng_)));
    }
  }
  return bundle;
}

std::shared_ptr<const RefreshOracle> assemble_refresh_oracle(
    std::vector<LweSecretKey> keys, const LweParams& params,
    std::uint64_t seed) {
  return std::make_shared<const RefreshOracle>(Keyring(std::move(keys)),
                                               params, seed);
}

std::string step_log_csv(const std::vector<StepLogEntry>& log) {
  std::ostringstream os;
  os << "phase,parties,refreshes,elapsed_ms,work\n";
  for (const auto& e : log) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", e.elapsed_ms);
    os << e.phase << ',' << e.parties << ',' << e.refreshes << ',' << ms
       << ',' << e.work << '\n';
  }
  return os.str();
}

ServerState server_assemble(const std::vector<UploadBundle>& bundles,
                            std::shared_ptr<const RefreshOracle> oracle) {
  if (bundles.empty()) throw std::invalid_argument("no bundles");
  if (!oracle) throw std::invalid_argument("no refresh oracle");
  const auto start = Clock::now();
  ServerState state;
  state.oracle = std::move(oracle);
  const std::size_t w = bundles.front().w;
  const std::uint64_t digest = state.oracle->params().digest();

  std::set<PartyId> seen;
  for (const auto& b : bundles) {
    if (!seen.insert(b.party).second) {
      throw std::invalid_argument("duplicate party id " +
                                  std::to_string(b.party));
    }
    if (b.w != w) throw std::invalid_argument("bundle widths differ");
    if (b.params_digest != digest) {
      throw std::invalid_argument("bundle parameters differ from the oracle's");
    }
  }
  state.roster.assign(seen.begin(), seen.end());

  // Deserialize single-key ciphertexts, then extend them to the roster.
  std::uint64_t words = 0;
  const std::uint64_t n = state.oracle->params().n;
  state.dataset.w = w;
  for (const auto& b : bundles) {
    auto& mine = state.received[b.party];
    for (const auto& bytes : b.values) {
      mine.push_back(deserialize_int(bytes, {b.party}));
    }
  }
  for (PartyId party : state.roster) {
    const auto& mine = state.received.at(party);
    for (std::size_t i = 0; i + 1 < mine.size(); i += 2) {
      state.dataset.x.push_back(extend_int(mine[i], state.roster));
      state.dataset.y.push_back(extend_int(mine[i + 1], state.roster));
      state.dataset.owners.push_back(party);
      words += 2 * w * state.roster.size() * n;
    }
  }
  state.log.push_back({kPhaseExtension, state.roster.size(), 0,
                       ms_since(start), words});
  return state;
}

const ModelCiphertext& server_train(ServerState& state,
                                    const TrainConfig& cfg) {
  LweBackend backend(state.oracle, state.roster, cfg.seed);
  auto start = Clock::now();
  if (cfg.method == TrainMethod::kClosedForm) {
    state.model = train_closed_form(backend, state.dataset);
  } else {
    state.model = train_gd(backend, state.dataset, cfg.gd);
  }
  const std::uint64_t train_refreshes = backend.counter().bootstrapped();
  state.log.push_back({kPhaseTraining, state.roster.size(), train_refreshes,
                       ms_since(start), train_refreshes});

  if (cfg.evaluate) {
    backend.reset_counter();
    start = Clock::now();
    state.loss = loss(backend, state.dataset, *state.model);
    const std::uint64_t eval_refreshes = backend.counter().bootstrapped();
    state.log.push_back({kPhaseEvaluation, state.roster.size(),
                         eval_refreshes, ms_since(start), eval_refreshes});
  }
  return *state.model;
}

DecryptionSession::DecryptionSession(ModelCiphertext model,
                                     std::vector<PartyId> roster)
    : model_(std::move(model)), roster_(std::move(roster)) {}

void DecryptionSession::contribute(LweSecretKey key) {
  if (std::find(roster_.begin(), roster_.end(), key.party) == roster_.end()) {
    throw std::invalid_argument("party " + std::to_string(key.party) +
                                " is not in the roster");
  }
  keys_.insert(std::move(key));
}

void DecryptionSession::require_all_keys() const {
  for (PartyId p : roster_) {
    if (!keys_.contains(p)) throw MissingKeyError(p);
  }
}

PlainModel DecryptionSession::decrypt() const {
  require_all_keys();
  return {decrypt_int(model_.slope, keys_), decrypt_int(model_.intercept, keys_),
          model_.zoom};
}

std::int64_t DecryptionSession::decrypt_value(const IntCiphertext& x) const {
  require_all_keys();
  return decrypt_int(x, keys_);
}

PlainModel joint_decrypt(const DecryptionSession& session) {
  return session.decrypt();
}

ProtocolResult run_protocol(const std::vector<std::vector<DataRow>>& rows,
                            const ProtocolConfig& cfg) {
  if (rows.empty()) throw std::invalid_argument("no participants");
  ProtocolResult result;

  // Participants generate keys; the oracle is assembled from them.
  auto start = Clock::now();
  std::vector<Participant> parties;
  std::vector<LweSecretKey> oracle_keys;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto id = static_cast<PartyId>(i + 1);
    parties.emplace_back(id, cfg.params, derive_seed(cfg.seed, id));
    oracle_keys.push_back(parties.back().key_for_refresh_oracle());
  }
  auto oracle = assemble_refresh_oracle(std::move(oracle_keys), cfg.params,
                                        derive_seed(cfg.seed, 0x10000));
  const StepLogEntry keygen_entry{kPhaseKeyGen, rows.size(), 0,
                                  ms_since(start), rows.size()};

  // Upload: bytes are the only thing crossing from participant to server.
  std::vector<UploadBundle> bundles;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bundles.push_back(parties[i].prepare(rows[i], cfg.w));
  }

  ServerState state = server_assemble(bundles, oracle);
  state.log.insert(state.log.begin(), keygen_entry);
  TrainConfig train = cfg.train;
  train.seed = derive_seed(cfg.seed, 0x20000);
  server_train(state, train);

  DecryptionSession session(*state.model, state.roster);
  for (const auto& p : parties) session.contribute(p.key_for_decryption());
  result.model = joint_decrypt(session);
  if (state.loss) result.loss = session.decrypt_value(*state.loss);
  result.log = state.log;
  return result;
}

}  // namespace mkgc
