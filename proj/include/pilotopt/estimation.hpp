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
#include <string>
#include <vector>

#include "pilotopt/common.hpp"
#include "pilotopt/pilots.hpp"

namespace pilotopt {

// Second-order statistics of a linear channel estimate under uncorrelated
// fading. The estimate of each antenna entry is coef times the projected
// pilot observation; estimate_var + error_var equals the channel gain, and
// the estimate and error are uncorrelated.
struct estimation_stats {
  double coef = 0.0;          // scalar applied to the projected observation
  double estimate_var = 0.0;  // per-antenna variance of the estimate
  double error_var = 0.0;     // per-antenna variance of the estimation error
  bool error_independent = true;  // false when only uncorrelatedness holds
};

struct hardware_config {
  double epsilon = 0.0;  // transmitter distortion share, in [0, 1]
  void validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
      throw std::invalid_argument("hardware_config: epsilon must lie in [0, 1]");
  }
};

namespace detail {

// Denominator of the estimator gain: received pilot-direction power at one
// antenna of BS l when projecting onto the pilot of (l, k).
inline double pilot_obs_power(const tensor3 &beta, const pilot_allocation &alloc,
                              double noise_mw, int l, int k, double own_total) {
  kahan_sum acc;
  for (int i = 0; i < alloc.num_cells; ++i)
    for (int t = 0; t < alloc.users_per_cell; ++t) {
      double c = pilot_inner(alloc, {i, t}, {l, k});
      acc.add(beta(l, i, t) * (c * c));  // association matches the distortion path
    }
  acc.add(noise_mw * own_total);
  return acc.value();
}

}  // namespace detail

// Linear-MMSE estimate statistics at BS l for its user k under ideal
// hardware. Throws when the user has no pilot energy.
inline estimation_stats mmse_stats(const tensor3 &beta, const pilot_allocation &alloc,
                                   double noise_mw, int l, int k) {
  double own_total = alloc.total_power(l, k);
  if (!(own_total > 0.0))
    throw degenerate_pilot_error("mmse_stats: user (" + std::to_string(l) + ", " +
                                 std::to_string(k) + ") has zero pilot energy");
  double b = beta(l, l, k);
  double den = detail::pilot_obs_power(beta, alloc, noise_mw, l, k, own_total);
  estimation_stats st;
  st.coef = b * own_total / den;
  st.estimate_var = b * b * own_total * own_total / den;
  st.error_var = b - st.estimate_var;
  return st;
}

// As mmse_stats, but a zero-energy pilot degrades to a zero estimate
// (estimate_var 0, error_var equal to the channel gain) instead of throwing.
inline estimation_stats mmse_stats_safe(const tensor3 &beta, const pilot_allocation &alloc,
                                        double noise_mw, int l, int k) {
  if (!(alloc.total_power(l, k) > 0.0)) {
    estimation_stats st;
    st.error_var = beta(l, l, k);
    return st;
  }
  return mmse_stats(beta, alloc, noise_mw, l, k);
}

// Same statistics computed from a discrete assignment: only the reuse set of
// (l, k) contributes, with plain products of the scalar energies.
inline estimation_stats mmse_stats_assignment(const tensor3 &beta,
                                              const pilot_assignment &assign,
                                              double noise_mw, int l, int k) {
  double own = assign.power(l, k);
  if (!(own > 0.0))
    throw degenerate_pilot_error("mmse_stats_assignment: user (" + std::to_string(l) +
                                 ", " + std::to_string(k) + ") has zero pilot energy");
  double b = beta(l, l, k);
  kahan_sum acc;
  for (const user_ref &u : reuse_set(assign, l, k))
    acc.add(beta(l, u.cell, u.user) * assign.power(u.cell, u.user));
  double den = acc.value() + noise_mw;
  estimation_stats st;
  st.coef = b / den;
  st.estimate_var = b * b * own / den;
  st.error_var = b - st.estimate_var;
  return st;
}

// Per-user distortion-weighted couplings used by the impaired-hardware
// estimator: kappa[i * K + t] couples user (i, t) into the observation that
// BS l projects for its user k.
struct hw_estimation_stats {
  estimation_stats stats;       // error_independent is false for epsilon > 0
  std::vector<double> kappa;    // [i * users_per_cell + t]
  double obs_power = 0.0;       // denominator of the estimator gain
};

// Linear-MMSE statistics under transmitter distortion: a fraction epsilon^2
// of each transmit power leaks into a memoryless distortion term that is
// uncorrelated across symbols.
inline hw_estimation_stats lmmse_stats_hw(const tensor3 &beta, const pilot_allocation &alloc,
                                          double noise_mw, const hardware_config &hw,
                                          int l, int k) {
  hw.validate();
  double own_total = alloc.total_power(l, k);
  if (!(own_total > 0.0))
    throw degenerate_pilot_error("lmmse_stats_hw: user (" + std::to_string(l) + ", " +
                                 std::to_string(k) + ") has zero pilot energy");
  const double e2 = hw.epsilon * hw.epsilon;
  const int L = alloc.num_cells, K = alloc.users_per_cell;

  hw_estimation_stats out;
  out.kappa.resize(static_cast<std::size_t>(L) * K);
  kahan_sum acc;
  for (int i = 0; i < L; ++i)
    for (int t = 0; t < K; ++t) {
      double c = pilot_inner(alloc, {i, t}, {l, k});
      double dot = 0.0;  // direct power overlap of the two pilots
      for (int b = 0; b < alloc.pilot_len; ++b) dot += alloc.p(i, t, b) * alloc.p(l, k, b);
      double kap = (1.0 - e2) * c * c + e2 * dot;
      out.kappa[static_cast<std::size_t>(i) * K + t] = kap;
      acc.add(beta(l, i, t) * kap);
    }
  acc.add(noise_mw * own_total);
  out.obs_power = acc.value();

  double b = beta(l, l, k);
  double s = std::sqrt(1.0 - e2);
  out.stats.coef = s * b * own_total / out.obs_power;
  out.stats.estimate_var = (1.0 - e2) * b * b * own_total * own_total / out.obs_power;
  out.stats.error_var = b - out.stats.estimate_var;
  out.stats.error_independent = (hw.epsilon == 0.0);
  return out;
}

// Estimator gain for per-antenna estimation under correlated fading when all
// covariance matrices share their diagonal values: identical to the ideal
// uncorrelated gain, exposed separately because the correlated-fading rate
// expressions consume it directly.
inline double elementwise_mmse_coef_corr(const tensor3 &beta, const pilot_allocation &alloc,
                                         double noise_mw, int l, int k) {
  return mmse_stats(beta, alloc, noise_mw, l, k).coef;
}

}  // namespace pilotopt
