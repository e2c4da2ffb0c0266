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

// Unary linear regression y ~ slope * x + intercept on encrypted integers.
//
// Every quantity is a w-bit two's-complement integer and every division
// truncates toward zero, so results are bit-identical to a plain integer
// program that wraps at w bits.

#ifndef MKGC_LINREG_H_
#define MKGC_LINREG_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "mkgc/gates.h"
#include "mkgc/int_circuits.h"

namespace mkgc {

struct EncryptedDataset {
  std::size_t w = 0;
  std::vector<IntCiphertext> x;
  std::vector<IntCiphertext> y;
  std::vector<PartyId> owners;  // owner of sample i; informational

  std::size_t m() const { return x.size(); }
};

// slope and intercept are scaled by zoom.
struct ModelCiphertext {
  IntCiphertext slope;
  IntCiphertext intercept;
  std::int64_t zoom = 1;
  std::size_t w = 0;
};

struct PlainModel {
  std::int64_t slope = 0;
  std::int64_t intercept = 0;
  std::int64_t zoom = 1;

  bool operator==(const PlainModel&) const = default;
};

struct GdConfig {
  double learning_rate = 0.001;
  std::int64_t zoom = 10000;
  std::size_t iterations = 10;
  std::size_t w = 16;
};

// Input quantization: round half away from zero.
std::int64_t quantize(double v);

// Encrypts plaintext pairs; owners[i] encrypts sample i (empty: backend
// default). Throws std::out_of_range for values outside w bits.
EncryptedDataset encrypt_dataset(GateBackend& backend,
                                 const std::vector<std::int64_t>& x,
                                 const std::vector<std::int64_t>& y,
                                 std::size_t w,
                                 const std::vector<PartyId>& owners = {});

// Least squares in closed form, zoom 1:
//   xbar  = Sx / m
//   slope = sum y_i (x_i - xbar) / (Sxx - Sx*Sx / m)
//   icpt  = sum (y_i - slope x_i) / m
ModelCiphertext train_closed_form(GateBackend& backend,
                                  const EncryptedDataset& ds);

// The per-sample step divisor K = m / (2 * learning_rate). The update
//   r_i   = y_i Z - (slope x_i + icpt)
//   g_i   = r_i / K
//   icpt += sum g_i
//   slope += sum g_i x_i
// is gradient descent on the mean squared error with slope and intercept
// held in units of 1/Z. Throws std::invalid_argument unless learning_rate*Z
// and K are integers and K, Z fit in w bits.
std::int64_t gd_step_divisor(const GdConfig& cfg, std::size_t m);

using GdObserver = std::function<void(std::size_t iteration,
                                      const ModelCiphertext& model)>;

// Starts from slope = intercept = 0. `observer` sees the model after every
// iteration (1-based).
ModelCiphertext train_gd(GateBackend& backend, const EncryptedDataset& ds,
                         const GdConfig& cfg, const GdObserver& observer = {});
// Runs `cfg.iterations` iterations from an explicit starting model.
ModelCiphertext train_gd_from(GateBackend& backend, const EncryptedDataset& ds,
                              const GdConfig& cfg, ModelCiphertext start,
                              const GdObserver& observer = {});

// (slope x + icpt) / Z.
IntCiphertext predict(GateBackend& backend, const ModelCiphertext& model,
                      const IntCiphertext& x);
// sum (y_i - predict(x_i))^2 / m.
IntCiphertext loss(GateBackend& backend, const EncryptedDataset& ds,
                   const ModelCiphertext& model);

ModelCiphertext encode_model(GateBackend& backend, const PlainModel& model,
                             std::size_t w);
PlainModel decode_model(const GateBackend& backend,
                        const ModelCiphertext& model);

}  // namespace mkgc

#endif  // MKGC_LINREG_H_
