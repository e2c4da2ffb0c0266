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

#include "mkgc/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mkgc/int_circuits.h"
#include "mkgc/linreg.h"
#include "mkgc/metrics.h"
#include "mkgc/protocol.h"

namespace mkgc {
namespace {

namespace fs = std::filesystem;

// Usage problems found after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MKGC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("MKGC_SEED is not an unsigned integer");
    }
  }
  return 1;
}

BackendKind parse_backend(const std::string& name) {
  if (name == "lwe") return BackendKind::kTorusLwe;
  if (name == "clear") return BackendKind::kClear;
  throw UsageError("unknown backend: " + name);
}

// Keys 1..p generated from one seed.
std::vector<LweSecretKey> make_keys(std::size_t p, const LweParams& params,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LweSecretKey> keys;
  for (std::size_t i = 1; i <= p; ++i) {
    keys.push_back(keygen(params, static_cast<PartyId>(i), rng));
  }
  return keys;
}

std::vector<PartyId> roster_of(std::size_t p) {
  std::vector<PartyId> r;
  for (std::size_t i = 1; i <= p; ++i) r.push_back(static_cast<PartyId>(i));
  return r;
}

struct Backend {
  std::unique_ptr<GateBackend> impl;
  PartyId first = 1;
  PartyId last = 1;
};

Backend make_backend(BackendKind kind, std::size_t p, std::uint64_t seed) {
  Backend b;
  if (kind == BackendKind::kClear) {
    b.impl = std::make_unique<ClearBackend>();
    return b;
  }
  const LweParams params = LweParams::standard();
  auto oracle = assemble_refresh_oracle(make_keys(p, params, seed), params,
                                        seed + 1);
  b.impl = std::make_unique<LweBackend>(oracle, roster_of(p), seed + 2);
  b.last = static_cast<PartyId>(p);
  return b;
}

// ---- keygen -------------------------------------------------------------

int cmd_keygen(std::size_t parties, const std::string& out_dir,
               std::uint64_t seed, std::ostream& out) {
  if (parties == 0) throw UsageError("--parties must be at least 1");
  const LweParams params = LweParams::standard();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  for (const LweSecretKey& key : make_keys(parties, params, seed)) {
    std::string bits(key.bits.size(), '0');
    for (std::size_t i = 0; i < key.bits.size(); ++i) {
      if (key.bits[i]) bits[i] = '1';
    }
    const nlohmann::json j = {{"party", key.party},
                              {"n", params.n},
                              {"alpha", params.alpha},
                              {"params_digest", params.digest()},
                              {"bits", bits}};
    const fs::path path =
        fs::path(out_dir) / ("key_" + std::to_string(key.party) + ".json");
    std::ofstream f(path);
    f << j.dump(2) << '\n';
    if (!f) throw IoError("cannot write " + path.string());
    out << path.string() << '\n';
  }
  return kExitOk;
}

// ---- eval ---------------------------------------------------------------

int cmd_eval(const std::string& op_str, std::size_t w, std::int64_t a,
             std::int64_t b, std::size_t parties, BackendKind kind,
             std::uint64_t seed, std::ostream& out, std::ostream& err) {
  if (parties == 0) throw UsageError("--parties must be at least 1");
  OpKind op;
  try {
    op = parse_op(op_str);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Backend backend = make_backend(kind, parties, seed);
  GateBackend& g = *backend.impl;
  const IntCiphertext ca = encode_int(g, a, w, backend.first);
  const IntCiphertext cb = encode_int(g, b, w, backend.last);
  g.reset_counter();

  CostReport report;
  report.op = op;
  report.w = w;
  std::ostringstream result;
  auto depth_of = [](const IntCiphertext& x) {
    std::uint32_t d = 0;
    for (const auto& bit : x.bits) d = std::max(d, bit.depth);
    return d;
  };
  switch (op) {
    case OpKind::kAdd: {
      auto r = add_w(g, ca, cb);
      report.depth = depth_of(r);
      result << decode_int(g, r);
      break;
    }
    case OpKind::kSub: {
      auto r = sub_w(g, ca, cb);
      report.depth = depth_of(r);
      result << decode_int(g, r);
      break;
    }
    case OpKind::kMul: {
      auto r = mul_w(g, ca, cb);
      report.depth = depth_of(r);
      result << decode_int(g, r);
      break;
    }
    case OpKind::kDiv: {
      if (b == 0) {
        err << "warning: divisor zero: undefined output\n";
      } else if (a == min_signed(w) && b == -1) {
        err << "warning: quotient overflow: undefined output\n";
      }
      auto r = div_same_width(g, ca, cb);
      report.depth = std::max(depth_of(r.quotient), depth_of(r.remainder));
      report.layers = r.layers;
      result << "quotient=" << decode_int(g, r.quotient)
             << " remainder=" << decode_int(g, r.remainder);
      break;
    }
  }
  report.gates = g.counter().bootstrapped();
  report.nots = g.counter().nots();
  report.published = published_gate_count(op, w);
  report.match = report.gates == report.published;

  out << result.str() << '\n';
  out << "cost: op=" << op_name(op) << " w=" << w << " gates=" << report.gates
      << " nots=" << report.nots << " depth=" << report.depth
      << " paper_formula=" << report.published
      << " match=" << (report.match ? "yes" : "no");
  if (report.layers) out << " layers=" << *report.layers;
  out << '\n';
  return kExitOk;
}

// ---- train --------------------------------------------------------------

struct CsvRow {
  double x;
  double y;
  std::optional<std::size_t> party;
};

std::vector<CsvRow> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    try {
      if (fields.size() < 2 || fields.size() > 3) throw std::invalid_argument("");
      CsvRow row{std::stod(fields[0]), std::stod(fields[1]), std::nullopt};
      if (fields.size() == 3) row.party = std::stoul(fields[2]);
      rows.push_back(row);
    } catch (const std::invalid_argument&) {
      if (lineno == 1) continue;  // header
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected x,y[,party]");
    }
  }
  if (rows.empty()) throw std::invalid_argument(path + ": no data rows");
  return rows;
}

int cmd_train(const std::string& method, const std::string& data,
              std::size_t parties, std::optional<std::size_t> width,
              const GdConfig& gd_flags, BackendKind kind, std::uint64_t seed,
              const std::string& log_path, std::ostream& out) {
  if (parties == 0) throw UsageError("--parties must be at least 1");
  TrainConfig train;
  if (method == "formula") {
    train.method = TrainMethod::kClosedForm;
  } else if (method == "gd") {
    train.method = TrainMethod::kGd;
  } else {
    throw UsageError("unknown method: " + method);
  }
  const std::size_t w =
      width.value_or(train.method == TrainMethod::kGd ? 16 : 8);
  train.gd = gd_flags;
  train.gd.w = w;

  // Rows without a party column are dealt round-robin.
  std::vector<std::vector<DataRow>> per_party(parties);
  const auto rows = read_dataset(data);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t party = rows[i].party.value_or(i % parties + 1);
    if (party < 1 || party > parties) {
      throw std::invalid_argument("row " + std::to_string(i + 1) +
                                  " names party " + std::to_string(party) +
                                  " outside 1.." + std::to_string(parties));
    }
    per_party[party - 1].push_back(
        {quantize(rows[i].x), quantize(rows[i].y)});
  }

  PlainModel model;
  std::optional<std::int64_t> loss_value;
  std::vector<StepLogEntry> log;
  if (kind == BackendKind::kClear) {
    ClearBackend g;
    std::vector<std::int64_t> xs, ys;
    for (const auto& rs : per_party) {
      for (const auto& r : rs) {
        xs.push_back(r.x);
        ys.push_back(r.y);
      }
    }
    EncryptedDataset ds = encrypt_dataset(g, xs, ys, w);
    ModelCiphertext m = train.method == TrainMethod::kGd
                            ? train_gd(g, ds, train.gd)
                            : train_closed_form(g, ds);
    model = decode_model(g, m);
    loss_value = decode_int(g, loss(g, ds, m));
  } else {
    ProtocolConfig cfg;
    cfg.w = w;
    cfg.train = train;
    cfg.seed = seed;
    ProtocolResult r = run_protocol(per_party, cfg);
    model = r.model;
    loss_value = r.loss;
    log = r.log;
  }

  nlohmann::json j = {{"method", method},
                      {"parties", parties},
                      {"w", w},
                      {"slope", model.slope},
                      {"intercept", model.intercept},
                      {"zoom", model.zoom},
                      {"slope_real", static_cast<double>(model.slope) /
                                         static_cast<double>(model.zoom)},
                      {"intercept_real", static_cast<double>(model.intercept) /
                                             static_cast<double>(model.zoom)}};
  if (loss_value) j["loss"] = *loss_value;
  out << j.dump() << '\n';

  if (!log_path.empty()) {
    std::ofstream f(log_path);
    f << step_log_csv(log);
    if (!f) throw IoError("cannot write " + log_path);
  }
  return kExitOk;
}

// ---- bench --------------------------------------------------------------

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  try {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
      const std::size_t v = std::stoul(s);
      return {v, v};
    }
    return {std::stoul(s.substr(0, dots)), std::stoul(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("--w-range expects LO..HI, got " + s);
  }
}

int cmd_bench(const std::vector<std::string>& ops, const std::string& range,
              const std::string& format, bool naive, std::ostream& out) {
  const auto [lo, hi] = parse_range(range);
  if (lo == 0 || hi < lo || hi > 32) throw UsageError("bad --w-range " + range);
  if (format != "text" && format != "csv") {
    throw UsageError("--format must be text or csv");
  }
  std::vector<CostReport> rows;
  for (const auto& name : ops) {
    OpKind op;
    try {
      op = parse_op(name);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    for (std::size_t w = lo; w <= hi; ++w) {
      if (op == OpKind::kMul && w < 2) continue;
      rows.push_back(measure(op, w));
    }
  }
  if (format == "csv") {
    out << csv_header() << '\n';
    for (const auto& r : rows) out << to_csv_row(r) << '\n';
  } else {
    out << to_text(rows);
    if (naive) out << '\n' << to_text(naive_gate_comparison());
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"mkgc: multi-key homomorphic gate circuits"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::size_t parties = 2;
  std::string backend = "lwe";

  auto* keygen_cmd = app.add_subcommand("keygen", "Generate party keys");
  std::string key_dir;
  keygen_cmd->add_option("--parties,-p", parties, "Number of parties");
  keygen_cmd->add_option("--out", key_dir, "Output directory")->required();
  keygen_cmd->add_option("--seed", seed, "RNG seed (default $MKGC_SEED)");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate one operator");
  std::string op;
  std::size_t w = 8;
  std::int64_t a = 0, b = 0;
  eval_cmd->add_option("--op", op, "add, sub, mul or div")->required();
  eval_cmd->add_option("--w", w, "Operand width in bits");
  eval_cmd->add_option("--a", a, "First operand")->required();
  eval_cmd->add_option("--b", b, "Second operand")->required();
  eval_cmd->add_option("--parties,-p", parties, "Number of parties");
  eval_cmd->add_option("--backend", backend, "lwe or clear");
  eval_cmd->add_option("--seed", seed, "RNG seed (default $MKGC_SEED)");

  auto* train_cmd = app.add_subcommand("train", "Train a linear model");
  std::string method = "formula", data, log_path;
  std::optional<std::size_t> train_w;
  GdConfig gd;
  train_cmd->add_option("--method", method, "formula or gd");
  train_cmd->add_option("--data", data, "CSV of x,y[,party]")->required();
  train_cmd->add_option("--parties,-p", parties, "Number of parties");
  train_cmd->add_option("--w", train_w, "Width (default 8, or 16 for gd)");
  train_cmd->add_option("--zoom", gd.zoom, "Zoom multiple for gd");
  train_cmd->add_option("--lr", gd.learning_rate, "Learning rate for gd");
  train_cmd->add_option("--iters", gd.iterations, "Iterations for gd");
  train_cmd->add_option("--backend", backend, "lwe or clear");
  train_cmd->add_option("--log", log_path, "Write the phase log CSV here");
  train_cmd->add_option("--seed", seed, "RNG seed (default $MKGC_SEED)");

  auto* bench_cmd = app.add_subcommand("bench", "Gate-count report");
  std::vector<std::string> ops = {"add", "sub", "mul", "div"};
  std::string range = "1..8", format = "text";
  bool naive = false;
  bench_cmd->add_option("--ops", ops, "Operators")->delimiter(',');
  bench_cmd->add_option("--w-range", range, "Widths, LO..HI");
  bench_cmd->add_option("--format", format, "text or csv");
  bench_cmd->add_flag("--naive", naive, "Add the NAND-composition table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*keygen_cmd) return cmd_keygen(parties, key_dir, resolve_seed(seed), out);
    if (*eval_cmd) {
      return cmd_eval(op, w, a, b, parties, parse_backend(backend),
                      resolve_seed(seed), out, err);
    }
    if (*train_cmd) {
      return cmd_train(method, data, parties, train_w, gd,
                       parse_backend(backend), resolve_seed(seed), log_path,
                       out);
    }
    if (*bench_cmd) return cmd_bench(ops, range, format, naive, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace mkgc
