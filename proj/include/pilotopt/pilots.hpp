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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pilotopt/common.hpp"

namespace pilotopt {

// Continuous pilot description: each user spreads nonnegative power over the
// pilot_len orthonormal basis signals. Powers are stored directly (not their
// square roots); inner products take roots on the fly.
struct pilot_allocation {
  int num_cells = 0;
  int users_per_cell = 0;
  int pilot_len = 0;
  std::vector<double> powers_mw;  // [l][k][b], row-major

  pilot_allocation() = default;
  pilot_allocation(int L, int K, int tau_p, double fill = 0.0)
      : num_cells(L), users_per_cell(K), pilot_len(tau_p),
        powers_mw(static_cast<std::size_t>(L) * K * tau_p, fill) {}

  double &p(int l, int k, int b) {
    return powers_mw[(static_cast<std::size_t>(l) * users_per_cell + k) * pilot_len + b];
  }
  double p(int l, int k, int b) const {
    return powers_mw[(static_cast<std::size_t>(l) * users_per_cell + k) * pilot_len + b];
  }

  // Total pilot energy of one user across the basis.
  double total_power(int l, int k) const {
    double s = 0.0;
    for (int b = 0; b < pilot_len; ++b) s += p(l, k, b);
    return s;
  }

  void validate() const {
    if (num_cells < 1 || users_per_cell < 1 || pilot_len < 1)
      throw std::invalid_argument("pilot_allocation: dimensions must be positive");
    if (powers_mw.size() !=
        static_cast<std::size_t>(num_cells) * users_per_cell * pilot_len)
      throw std::invalid_argument("pilot_allocation: storage size mismatch");
    for (double v : powers_mw)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("pilot_allocation: powers must be finite and nonnegative");
  }
};

// Discrete pilot description: each user transmits one basis signal at a
// scalar energy. Basis indices are 0-based.
struct pilot_assignment {
  int num_cells = 0;
  int users_per_cell = 0;
  std::vector<int> index;      // [l][k], value in [0, users_per_cell)
  std::vector<double> power_mw;  // [l][k], total pilot energy

  pilot_assignment() = default;
  pilot_assignment(int L, int K)
      : num_cells(L), users_per_cell(K),
        index(static_cast<std::size_t>(L) * K, 0),
        power_mw(static_cast<std::size_t>(L) * K, 0.0) {
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k) chi(l, k) = k;
  }

  int &chi(int l, int k) { return index[static_cast<std::size_t>(l) * users_per_cell + k]; }
  int chi(int l, int k) const {
    return index[static_cast<std::size_t>(l) * users_per_cell + k];
  }
  double &power(int l, int k) {
    return power_mw[static_cast<std::size_t>(l) * users_per_cell + k];
  }
  double power(int l, int k) const {
    return power_mw[static_cast<std::size_t>(l) * users_per_cell + k];
  }

  // Each cell must use a permutation: every basis index exactly once.
  void validate() const {
    if (num_cells < 1 || users_per_cell < 1)
      throw std::invalid_argument("pilot_assignment: dimensions must be positive");
    for (int l = 0; l < num_cells; ++l) {
      std::vector<bool> seen(users_per_cell, false);
      for (int k = 0; k < users_per_cell; ++k) {
        int b = chi(l, k);
        if (b < 0 || b >= users_per_cell)
          throw std::invalid_argument("pilot_assignment: index out of range in cell " +
                                      std::to_string(l));
        if (seen[b])
          throw std::invalid_argument("pilot_assignment: duplicate index in cell " +
                                      std::to_string(l));
        seen[b] = true;
      }
    }
    for (double v : power_mw)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("pilot_assignment: powers must be finite and nonnegative");
  }
};

// Inner product of two users' pilot signals: sum over the basis of the
// geometric mean of their per-basis powers. Real and nonnegative.
inline double pilot_inner(const pilot_allocation &alloc, user_ref a, user_ref b) {
  double s = 0.0;
  for (int q = 0; q < alloc.pilot_len; ++q)
    s += std::sqrt(alloc.p(a.cell, a.user, q) * alloc.p(b.cell, b.user, q));
  return s;
}

// Per-user check of the average-power constraint: total energy over the pilot
// phase divided by its length must not exceed max_power_mw. Entries are
// ordered [l * K + k]; 1 = satisfied.
inline std::vector<std::uint8_t> check_power_constraint(const pilot_allocation &alloc,
                                                        double max_power_mw,
                                                        double rel_tol = 1e-9) {
  std::vector<std::uint8_t> ok(static_cast<std::size_t>(alloc.num_cells) *
                               alloc.users_per_cell);
  double cap = max_power_mw * alloc.pilot_len;
  double slack = cap * rel_tol;
  for (int l = 0; l < alloc.num_cells; ++l)
    for (int k = 0; k < alloc.users_per_cell; ++k)
      ok[static_cast<std::size_t>(l) * alloc.users_per_cell + k] =
          alloc.total_power(l, k) <= cap + slack ? 1 : 0;
  return ok;
}

// Expands a discrete assignment into the continuous representation: all of a
// user's energy on its assigned basis signal. Requires pilot_len large enough
// to host every index in use.
inline pilot_allocation from_assignment(const pilot_assignment &assign, int pilot_len) {
  assign.validate();
  if (pilot_len < assign.users_per_cell)
    throw unsupported_structure_error(
        "from_assignment: pilot_len must be at least users_per_cell");
  pilot_allocation alloc(assign.num_cells, assign.users_per_cell, pilot_len);
  for (int l = 0; l < assign.num_cells; ++l)
    for (int k = 0; k < assign.users_per_cell; ++k)
      alloc.p(l, k, assign.chi(l, k)) = assign.power(l, k);
  return alloc;
}

// All users sharing the basis signal of (l, k), including (l, k) itself,
// in (cell, user) lexicographic order.
inline std::vector<user_ref> reuse_set(const pilot_assignment &assign, int l, int k) {
  int b = assign.chi(l, k);
  std::vector<user_ref> out;
  for (int i = 0; i < assign.num_cells; ++i)
    for (int t = 0; t < assign.users_per_cell; ++t)
      if (assign.chi(i, t) == b) out.push_back({i, t});
  return out;
}

namespace detail {

inline std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// Lexicographic unranking of a permutation of {0..n-1} via the factorial
// number system.
inline void unrank_permutation(std::uint64_t rank, int n, std::vector<int> &out) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  out.resize(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t f = factorial_u64(n - 1 - i);
    std::uint64_t d = rank / f;
    rank %= f;
    out[i] = pool[d];
    pool.erase(pool.begin() + static_cast<long>(d));
  }
}

}  // namespace detail

// Random-access stream over the distinct pilot-sharing structures: the first
// cell is pinned to the identity permutation (relabeling the basis cannot
// change any rate), the remaining cells range over all permutations in
// lexicographic order, most significant cell first.
class assignment_enumerator {
 public:
  assignment_enumerator(int num_cells, int users_per_cell, std::uint64_t cap = 1000000)
      : L_(num_cells), K_(users_per_cell) {
    if (L_ < 1 || K_ < 1)
      throw std::invalid_argument("assignment_enumerator: dimensions must be positive");
    if (K_ > 20)
      throw enumeration_cap_error("assignment_enumerator: users_per_cell too large");
    std::uint64_t kfact = detail::factorial_u64(K_);
    size_ = 1;
    for (int c = 1; c < L_; ++c) {
      if (kfact != 0 && size_ > cap / kfact + 1)
        throw enumeration_cap_error("assignment_enumerator: count exceeds cap of " +
                                    std::to_string(cap));
      size_ *= kfact;
      if (size_ > cap)
        throw enumeration_cap_error("assignment_enumerator: count exceeds cap of " +
                                    std::to_string(cap));
    }
  }

  std::uint64_t size() const { return size_; }

  // Assignment number idx; powers are left at zero for the caller to fill.
  pilot_assignment at(std::uint64_t idx) const {
    if (idx >= size_)
      throw std::out_of_range("assignment_enumerator: index " + std::to_string(idx) +
                              " out of range");
    pilot_assignment a(L_, K_);
    std::uint64_t kfact = detail::factorial_u64(K_);
    std::vector<int> perm;
    for (int c = L_ - 1; c >= 1; --c) {
      detail::unrank_permutation(idx % kfact, K_, perm);
      idx /= kfact;
      for (int k = 0; k < K_; ++k) a.chi(c, k) = perm[k];
    }
    return a;
  }

 private:
  int L_, K_;
  std::uint64_t size_ = 1;
};

}  // namespace pilotopt
