// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 pilotopt contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pilotopt {

// ---------- UNIT CONVERSIONS ----------
// All internal computations use linear power units (mW). Decibel quantities
// appear only at configuration boundaries.

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double x) {
  if (!(x > 0.0))
    throw std::domain_error("linear_to_db: value must be positive, got " + std::to_string(x));
  return 10.0 * std::log10(x);
}

// dBm-valued configuration entries map to linear mW with the same rule.
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

// ---------- COMPENSATED SUMMATION ----------
// Interference sums mix terms spanning ~10 orders of magnitude; Kahan
// compensation keeps the reduction order-insensitive at the 1e-12 level.

class kahan_sum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// ---------- INDEX TYPES ----------

struct user_ref {
  int cell = 0;
  int user = 0;
  friend bool operator==(const user_ref &a, const user_ref &b) {
    return a.cell == b.cell && a.user == b.user;
  }
  friend bool operator!=(const user_ref &a, const user_ref &b) { return !(a == b); }
  friend bool operator<(const user_ref &a, const user_ref &b) {
    return a.cell != b.cell ? a.cell < b.cell : a.user < b.user;
  }
};

// Dense row-major [n0][n1][n2] array of doubles.
class tensor3 {
 public:
  tensor3() = default;
  tensor3(std::size_t n0, std::size_t n1, std::size_t n2, double fill = 0.0)
      : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, fill) {}

  double &operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * n1_ + j) * n2_ + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * n1_ + j) * n2_ + k];
  }
  std::size_t dim0() const { return n0_; }
  std::size_t dim1() const { return n1_; }
  std::size_t dim2() const { return n2_; }
  const std::vector<double> &flat() const { return data_; }
  std::vector<double> &flat() { return data_; }

 private:
  std::size_t n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<double> data_;
};

// ---------- ERROR TYPES ----------

// Layout generation failed (placement or shadowing retry caps exhausted).
class generation_error : public std::runtime_error {
 public:
  explicit generation_error(const std::string &msg) : std::runtime_error(msg) {}
};

// An operation that requires nonzero pilot energy met an all-zero pilot.
class degenerate_pilot_error : public std::runtime_error {
 public:
  explicit degenerate_pilot_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Requested enumeration exceeds the configured cap.
class enumeration_cap_error : public std::runtime_error {
 public:
  explicit enumeration_cap_error(const std::string &msg) : std::runtime_error(msg) {}
};

// A structural combination the library does not support.
class unsupported_structure_error : public std::invalid_argument {
 public:
  explicit unsupported_structure_error(const std::string &msg) : std::invalid_argument(msg) {}
};

// Optimization could not produce a usable result.
class solver_error : public std::runtime_error {
 public:
  explicit solver_error(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace pilotopt
