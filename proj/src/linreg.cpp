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

#include "mkgc/linreg.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mkgc {
namespace {

void check_dataset(const EncryptedDataset& ds) {
  if (ds.m() == 0 || ds.x.size() != ds.y.size()) {
    throw std::invalid_argument("dataset must hold m >= 1 (x, y) pairs");
  }
  for (std::size_t i = 0; i < ds.m(); ++i) {
    if (ds.x[i].width() != ds.w || ds.y[i].width() != ds.w) {
      throw std::invalid_argument("dataset width mismatch");
    }
  }
}

// Public divisor, trivially encrypted.
IntCiphertext public_constant(GateBackend& g, std::int64_t v, std::size_t w) {
  if (v < min_signed(w) || v > max_signed(w)) {
    throw std::invalid_argument("constant " + std::to_string(v) +
                                " does not fit in " + std::to_string(w) +
                                " bits");
  }
  return constant_int(g, v, w);
}

IntCiphertext divide(GateBackend& g, const IntCiphertext& a,
                     const IntCiphertext& b) {
  return div_same_width(g, a, b).quotient;
}

IntCiphertext sum(GateBackend& g, const std::vector<IntCiphertext>& terms,
                  std::size_t w) {
  IntCiphertext acc = constant_int(g, 0, w);
  for (const auto& t : terms) acc = add_w(g, acc, t);
  return acc;
}

}  // namespace

std::int64_t quantize(double v) { return std::lround(v); }

EncryptedDataset encrypt_dataset(GateBackend& backend,
                                 const std::vector<std::int64_t>& x,
                                 const std::vector<std::int64_t>& y,
                                 std::size_t w,
                                 const std::vector<PartyId>& owners) {
  if (x.size() != y.size()) throw std::invalid_argument("x/y size mismatch");
  if (!owners.empty() && owners.size() != x.size()) {
    throw std::invalid_argument("owner list size mismatch");
  }
  EncryptedDataset ds;
  ds.w = w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::optional<PartyId> owner;
    if (!owners.empty()) owner = owners[i];
    ds.x.push_back(encode_int(backend, x[i], w, owner));
    ds.y.push_back(encode_int(backend, y[i], w, owner));
    ds.owners.push_back(owner.value_or(0));
  }
  return ds;
}

ModelCiphertext train_closed_form(GateBackend& g, const EncryptedDataset& ds) {
  check_dataset(ds);
  const std::size_t w = ds.w;
  const IntCiphertext m = public_constant(g, static_cast<std::int64_t>(ds.m()), w);

  std::vector<IntCiphertext> squares;
  for (const auto& x : ds.x) squares.push_back(mul_w(g, x, x));
  const IntCiphertext sx = sum(g, ds.x, w);
  const IntCiphertext sxx = sum(g, squares, w);
  const IntCiphertext xbar = divide(g, sx, m);

  std::vector<IntCiphertext> cross;
  for (std::size_t i = 0; i < ds.m(); ++i) {
    cross.push_back(mul_w(g, ds.y[i], sub_w(g, ds.x[i], xbar)));
  }
  const IntCiphertext num = sum(g, cross, w);
  const IntCiphertext den = sub_w(g, sxx, divide(g, mul_w(g, sx, sx), m));

  ModelCiphertext model;
  model.w = w;
  model.zoom = 1;
  model.slope = divide(g, num, den);

  std::vector<IntCiphertext> resid;
  for (std::size_t i = 0; i < ds.m(); ++i) {
    resid.push_back(sub_w(g, ds.y[i], mul_w(g, model.slope, ds.x[i])));
  }
  model.intercept = divide(g, sum(g, resid, w), m);
  return model;
}

std::int64_t gd_step_divisor(const GdConfig& cfg, std::size_t m) {
  if (cfg.zoom <= 0 || m == 0 || cfg.learning_rate <= 0) {
    throw std::invalid_argument("zoom, m and learning rate must be positive");
  }
  const double scaled = cfg.learning_rate * static_cast<double>(cfg.zoom);
  const std::int64_t lr_z = std::llround(scaled);
  if (lr_z <= 0 || std::abs(scaled - static_cast<double>(lr_z)) > 1e-9) {
    throw std::invalid_argument("learning_rate * zoom must be an integer");
  }
  const std::int64_t numer = static_cast<std::int64_t>(m) * cfg.zoom;
  if (numer % (2 * lr_z) != 0) {
    throw std::invalid_argument("m * zoom must be divisible by "
                                "2 * learning_rate * zoom");
  }
  const std::int64_t k = numer / (2 * lr_z);
  if (k > max_signed(cfg.w) || cfg.zoom > max_signed(cfg.w)) {
    throw std::invalid_argument("step divisor or zoom exceeds the width");
  }
  return k;
}

ModelCiphertext train_gd(GateBackend& g, const EncryptedDataset& ds,
                         const GdConfig& cfg, const GdObserver& observer) {
  ModelCiphertext start;
  start.w = cfg.w;
  start.zoom = cfg.zoom;
  start.slope = constant_int(g, 0, cfg.w);
  start.intercept = constant_int(g, 0, cfg.w);
  return train_gd_from(g, ds, cfg, std::move(start), observer);
}

ModelCiphertext train_gd_from(GateBackend& g, const EncryptedDataset& ds,
                              const GdConfig& cfg, ModelCiphertext model,
                              const GdObserver& observer) {
  check_dataset(ds);
  if (ds.w != cfg.w || model.w != cfg.w || model.zoom != cfg.zoom) {
    throw std::invalid_argument("dataset, model and config disagree");
  }
  const std::size_t w = cfg.w;
  const IntCiphertext k = public_constant(g, gd_step_divisor(cfg, ds.m()), w);
  const IntCiphertext zoom = public_constant(g, cfg.zoom, w);

  std::vector<IntCiphertext> y_scaled;
  for (const auto& y : ds.y) y_scaled.push_back(mul_w(g, y, zoom));

  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    std::vector<IntCiphertext> steps;
    std::vector<IntCiphertext> weighted;
    for (std::size_t i = 0; i < ds.m(); ++i) {
      const IntCiphertext pred =
          add_w(g, mul_w(g, model.slope, ds.x[i]), model.intercept);
      const IntCiphertext step = divide(g, sub_w(g, y_scaled[i], pred), k);
      weighted.push_back(mul_w(g, step, ds.x[i]));
      steps.push_back(step);
    }
    model.intercept = add_w(g, model.intercept, sum(g, steps, w));
    model.slope = add_w(g, model.slope, sum(g, weighted, w));
    if (observer) observer(it, model);
  }
  return model;
}

IntCiphertext predict(GateBackend& g, const ModelCiphertext& model,
                      const IntCiphertext& x) {
  if (x.width() != model.w) throw std::invalid_argument("width mismatch");
  const IntCiphertext scaled =
      add_w(g, mul_w(g, model.slope, x), model.intercept);
  if (model.zoom == 1) return scaled;
  return divide(g, scaled, public_constant(g, model.zoom, model.w));
}

IntCiphertext loss(GateBackend& g, const EncryptedDataset& ds,
                   const ModelCiphertext& model) {
  check_dataset(ds);
  if (ds.w != model.w) throw std::invalid_argument("width mismatch");
  std::vector<IntCiphertext> sq;
  for (std::size_t i = 0; i < ds.m(); ++i) {
    const IntCiphertext e = sub_w(g, ds.y[i], predict(g, model, ds.x[i]));
    sq.push_back(mul_w(g, e, e));
  }
  return divide(g, sum(g, sq, ds.w),
                public_constant(g, static_cast<std::int64_t>(ds.m()), ds.w));
}

ModelCiphertext encode_model(GateBackend& g, const PlainModel& model,
                             std::size_t w) {
  ModelCiphertext out;
  out.w = w;
  out.zoom = model.zoom;
  out.slope = encode_int(g, model.slope, w);
  out.intercept = encode_int(g, model.intercept, w);
  return out;
}

PlainModel decode_model(const GateBackend& g, const ModelCiphertext& model) {
  return {decode_int(g, model.slope), decode_int(g, model.intercept),
          model.zoom};
}

}  // namespace mkgc
