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
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "pilotopt/common.hpp"
#include "pilotopt/estimation.hpp"
#include "pilotopt/pilots.hpp"
#include "pilotopt/network.hpp"

namespace pilotopt {

// Effective uplink SINRs of the hardening-based achievable rate under
// maximum-ratio combining. All functions return linear SINR for user k of
// cell l; data powers are indexed [cell * users_per_cell + user] in mW.

enum class sinr_variant { general, assignment, lower_bound, hardware, correlated, asymptotic };

inline const char *to_string(sinr_variant v) {
  switch (v) {
    case sinr_variant::general: return "general";
    case sinr_variant::assignment: return "assignment";
    case sinr_variant::lower_bound: return "lower_bound";
    case sinr_variant::hardware: return "hardware";
    case sinr_variant::correlated: return "correlated";
    case sinr_variant::asymptotic: return "asymptotic";
  }
  return "?";
}

// A SINR that may be unbounded (interference-free limits); value is only
// meaningful when is_infinite is false.
struct sinr_value {
  double value = 0.0;
  bool is_infinite = false;
};

namespace detail {

// Shared denominator pieces of the uncorrelated-fading closed forms.
struct general_parts {
  double own_total = 0.0;   // pilot energy of (l, k)
  double obs_power = 0.0;   // estimator-gain denominator
  double rx_data = 0.0;     // sum of p * beta over all users, plus noise
  double coherent = 0.0;    // sum over co-pilot interferers of p * beta^2 * c^2
};

inline general_parts collect_general_parts(const tensor3 &beta, const pilot_allocation &alloc,
                                           const std::vector<double> &data_mw,
                                           double noise_mw, int l, int k) {
  general_parts g;
  g.own_total = alloc.total_power(l, k);
  kahan_sum obs, rx, coh;
  for (int i = 0; i < alloc.num_cells; ++i)
    for (int t = 0; t < alloc.users_per_cell; ++t) {
      double b = beta(l, i, t);
      double c = pilot_inner(alloc, {i, t}, {l, k});
      double p = data_mw[static_cast<std::size_t>(i) * alloc.users_per_cell + t];
      obs.add(b * c * c);
      rx.add(p * b);
      if (!(i == l && t == k)) coh.add(p * b * b * c * c);
    }
  obs.add(noise_mw * g.own_total);
  rx.add(noise_mw);
  g.obs_power = obs.value();
  g.rx_data = rx.value();
  g.coherent = coh.value();
  return g;
}

}  // namespace detail

// Closed-form effective SINR for an arbitrary pilot allocation under
// uncorrelated fading and ideal hardware.
inline double sinr_general(const tensor3 &beta, const pilot_allocation &alloc,
                           const std::vector<double> &data_mw, double noise_mw,
                           int antennas, int l, int k) {
  double own = alloc.total_power(l, k);
  double p = data_mw[static_cast<std::size_t>(l) * alloc.users_per_cell + k];
  if (!(own > 0.0) || !(p > 0.0)) return 0.0;
  auto g = detail::collect_general_parts(beta, alloc, data_mw, noise_mw, l, k);
  double b = beta(l, l, k);
  double num = antennas * p * b * b * own * own;
  double den = g.obs_power * g.rx_data + antennas * g.coherent;
  return num / den;
}

// Same bound specialized to a discrete assignment: co-pilot terms reduce to
// plain products of the scalar pilot energies.
inline double sinr_assignment(const tensor3 &beta, const pilot_assignment &assign,
                              const std::vector<double> &data_mw, double noise_mw,
                              int antennas, int l, int k) {
  const int K = assign.users_per_cell;
  double own = assign.power(l, k);
  double p = data_mw[static_cast<std::size_t>(l) * K + k];
  if (!(own > 0.0) || !(p > 0.0)) return 0.0;
  double b = beta(l, l, k);
  kahan_sum obs, rx, coh;
  for (const user_ref &u : reuse_set(assign, l, k))
    obs.add(beta(l, u.cell, u.user) * assign.power(u.cell, u.user));
  for (int i = 0; i < assign.num_cells; ++i)
    for (int t = 0; t < K; ++t)
      rx.add(data_mw[static_cast<std::size_t>(i) * K + t] * beta(l, i, t));
  for (const user_ref &u : reuse_set(assign, l, k))
    if (!(u.cell == l && u.user == k)) {
      double bb = beta(l, u.cell, u.user);
      coh.add(data_mw[static_cast<std::size_t>(u.cell) * K + u.user] * bb * bb *
              assign.power(u.cell, u.user));
    }
  double num = antennas * p * b * b * own;
  double den = (obs.value() + noise_mw) * (rx.value() + noise_mw) + antennas * coh.value();
  return num / den;
}

// Monomial lower bound on sinr_general: the squared total pilot energy in the
// numerator is replaced by its weighted geometric-mean bound. Weights must lie
// on the simplex; a zero weight is only allowed where the pilot power is zero,
// and the bound is tight when weights are proportional to the powers.
inline double sinr_lower_bound(const tensor3 &beta, const pilot_allocation &alloc,
                               const std::vector<double> &data_mw, double noise_mw,
                               int antennas, const std::vector<double> &weights,
                               int l, int k) {
  if (static_cast<int>(weights.size()) != alloc.pilot_len)
    throw std::invalid_argument("sinr_lower_bound: weight count must equal pilot_len");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0))
      throw std::invalid_argument("sinr_lower_bound: weights must be nonnegative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("sinr_lower_bound: weights must sum to one");
  double own = alloc.total_power(l, k);
  double p = data_mw[static_cast<std::size_t>(l) * alloc.users_per_cell + k];
  if (!(own > 0.0) || !(p > 0.0)) return 0.0;

  double geo = 1.0;  // squared geometric-mean surrogate of own_total^2
  for (int b = 0; b < alloc.pilot_len; ++b) {
    double pb = alloc.p(l, k, b), w = weights[b];
    if (w == 0.0) {
      if (pb != 0.0)
        throw std::invalid_argument(
            "sinr_lower_bound: zero weight on a basis signal with nonzero power");
      continue;
    }
    geo *= std::pow(pb / w, 2.0 * w);
  }

  auto g = detail::collect_general_parts(beta, alloc, data_mw, noise_mw, l, k);
  double b2 = beta(l, l, k) * beta(l, l, k);
  double num = antennas * p * b2 * geo;
  double den = g.obs_power * g.rx_data + antennas * g.coherent;
  return num / den;
}

// Closed-form effective SINR under transmitter distortion: a share epsilon^2
// of every transmitted power turns into uncorrelated distortion noise.
inline double sinr_hardware(const tensor3 &beta, const pilot_allocation &alloc,
                            const std::vector<double> &data_mw, double noise_mw,
                            int antennas, const hardware_config &hw, int l, int k) {
  hw.validate();
  const int K = alloc.users_per_cell;
  double own = alloc.total_power(l, k);
  double p = data_mw[static_cast<std::size_t>(l) * K + k];
  if (!(own > 0.0) || !(p > 0.0)) return 0.0;
  const double e2 = hw.epsilon * hw.epsilon;
  if (e2 >= 1.0) return 0.0;

  auto st = lmmse_stats_hw(beta, alloc, noise_mw, hw, l, k);
  double b = beta(l, l, k);
  kahan_sum rx, coh;
  for (int i = 0; i < alloc.num_cells; ++i)
    for (int t = 0; t < K; ++t) {
      double pit = data_mw[static_cast<std::size_t>(i) * K + t];
      rx.add(pit * beta(l, i, t));
      if (!(i == l && t == k)) {
        double bb = beta(l, i, t);
        coh.add(pit * bb * bb * st.kappa[static_cast<std::size_t>(i) * K + t]);
      }
    }
  rx.add(noise_mw);
  double sq = 0.0;  // sum of squared per-basis powers of the own pilot
  for (int q = 0; q < alloc.pilot_len; ++q) sq += alloc.p(l, k, q) * alloc.p(l, k, q);

  double self_distortion = e2 * (1.0 - e2) * p * b * b * own * own + e2 * p * b * b * sq;
  double num = antennas * (1.0 - e2) * (1.0 - e2) * p * b * b * own * own;
  double den = st.obs_power * rx.value() + antennas * (coh.value() + self_distortion);
  return num / den;
}

// ---------- CORRELATED FADING ----------

// Exponential covariance model: entry (m, n) of the covariance seen by BS l
// for user (i, t) is beta * rho^|m-n| * exp(j * theta * (m - n)), with
// per-link magnitude rho in [0, 1] and angle theta in radians.
struct correlation_model {
  tensor3 rho;    // [l][i][t]
  tensor3 theta;  // [l][i][t]

  void validate() const {
    for (double r : rho.flat())
      if (!(r >= 0.0 && r <= 1.0))
        throw std::invalid_argument("correlation_model: magnitudes must lie in [0, 1]");
  }
};

// Model with a common magnitude and angles given by the wrapped direction
// from each BS to each user.
inline correlation_model make_correlation_model(const network_realization &net,
                                                double magnitude) {
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  correlation_model cm;
  cm.rho = tensor3(L, L, K, magnitude);
  cm.theta = tensor3(L, L, K, 0.0);
  for (int l = 0; l < L; ++l)
    for (int i = 0; i < L; ++i)
      for (int t = 0; t < K; ++t) {
        position d = wraparound_offset(net.bs_pos[l], net.user(i, t),
                                       net.config.area_side_km);
        cm.theta(l, i, t) = std::atan2(d.y, d.x);
      }
  cm.validate();
  return cm;
}

// tr(R1 * R2) for two exponential-model covariances of size M, in closed
// form. Always real.
inline double trace_product_exp(double beta1, double rho1, double theta1, double beta2,
                                double rho2, double theta2, int antennas) {
  double q = rho1 * rho2;
  double dth = theta1 - theta2;
  double acc = static_cast<double>(antennas);
  if (q > 0.0) {
    double qd = 1.0;
    for (int d = 1; d < antennas; ++d) {
      qd *= q;
      double term = 2.0 * (antennas - d) * qd * std::cos(d * dth);
      acc += term;
      if (qd * antennas < 1e-18) break;  // geometric tail is negligible
    }
  }
  return beta1 * beta2 * acc;
}

// Reference implementation of the same trace via dense matrices.
inline double trace_product_dense(double beta1, double rho1, double theta1, double beta2,
                                  double rho2, double theta2, int antennas) {
  using cplx = std::complex<double>;
  Eigen::MatrixXcd r1(antennas, antennas), r2(antennas, antennas);
  for (int m = 0; m < antennas; ++m)
    for (int n = 0; n < antennas; ++n) {
      int d = m - n;
      r1(m, n) = beta1 * std::pow(rho1, std::abs(d)) *
                 std::exp(cplx(0.0, theta1 * d));
      r2(m, n) = beta2 * std::pow(rho2, std::abs(d)) *
                 std::exp(cplx(0.0, theta2 * d));
    }
  return (r1 * r2).trace().real();
}

// Closed-form effective SINR under exponentially correlated fading with the
// per-antenna estimator whose gain elementwise_mmse_coef_corr provides.
inline double sinr_correlated(const tensor3 &beta, const correlation_model &cm,
                              const pilot_allocation &alloc,
                              const std::vector<double> &data_mw, double noise_mw,
                              int antennas, int l, int k) {
  const int L = alloc.num_cells, K = alloc.users_per_cell;
  double own = alloc.total_power(l, k);
  double p = data_mw[static_cast<std::size_t>(l) * K + k];
  if (!(own > 0.0) || !(p > 0.0)) return 0.0;
  double b = beta(l, l, k);

  const std::size_t n_users = static_cast<std::size_t>(L) * K;
  std::vector<double> c2(n_users), bvec(n_users), pvec(n_users);
  for (int i = 0; i < L; ++i)
    for (int t = 0; t < K; ++t) {
      std::size_t u = static_cast<std::size_t>(i) * K + t;
      double c = pilot_inner(alloc, {i, t}, {l, k});
      c2[u] = c * c;
      bvec[u] = beta(l, i, t);
      pvec[u] = data_mw[u];
    }

  kahan_sum coherent, cross, rx;
  for (int i = 0; i < L; ++i)
    for (int t = 0; t < K; ++t) {
      std::size_t u = static_cast<std::size_t>(i) * K + t;
      rx.add(pvec[u] * bvec[u]);
      if (!(i == l && t == k)) coherent.add(pvec[u] * bvec[u] * bvec[u] * c2[u]);
      kahan_sum inner;
      for (int i2 = 0; i2 < L; ++i2)
        for (int t2 = 0; t2 < K; ++t2) {
          std::size_t u2 = static_cast<std::size_t>(i2) * K + t2;
          if (c2[u2] == 0.0) continue;
          double tr = trace_product_exp(bvec[u2], cm.rho(l, i2, t2), cm.theta(l, i2, t2),
                                        bvec[u], cm.rho(l, i, t), cm.theta(l, i, t),
                                        antennas);
          inner.add(c2[u2] * tr);
        }
      cross.add(pvec[u] * inner.value() / antennas);
    }

  double gain = elementwise_mmse_coef_corr(beta, alloc, noise_mw, l, k);
  double num = antennas * p * b * b * own * own;
  double den = antennas * coherent.value() + cross.value() + noise_mw * own * rx.value() +
               noise_mw * own * b / gain;
  return num / den;
}

// Limit of sinr_general as the antenna count grows: only co-pilot
// interference survives; with none, the SINR is unbounded.
inline sinr_value sinr_asymptotic(const tensor3 &beta, const pilot_allocation &alloc,
                                  const std::vector<double> &data_mw, int l, int k) {
  const int K = alloc.users_per_cell;
  double own = alloc.total_power(l, k);
  double p = data_mw[static_cast<std::size_t>(l) * K + k];
  if (!(own > 0.0) || !(p > 0.0)) return {0.0, false};
  double b = beta(l, l, k);
  kahan_sum coh;
  for (int i = 0; i < alloc.num_cells; ++i)
    for (int t = 0; t < K; ++t) {
      if (i == l && t == k) continue;
      double c = pilot_inner(alloc, {i, t}, {l, k});
      double bb = beta(l, i, t);
      coh.add(data_mw[static_cast<std::size_t>(i) * K + t] * bb * bb * c * c);
    }
  double num = p * b * b * own * own;
  if (coh.value() == 0.0) return {0.0, true};
  return {num / coh.value(), false};
}

// Spectral efficiency of the hardening bound: pilot overhead times
// log2(1 + SINR), in bit/s/Hz.
inline double se_from_sinr(double sinr, int pilot_len, int coherence_len) {
  if (pilot_len < 1 || coherence_len <= pilot_len)
    throw std::invalid_argument("se_from_sinr: need 1 <= pilot_len < coherence_len");
  if (!(sinr >= 0.0))
    throw std::domain_error("se_from_sinr: SINR must be nonnegative");
  double overhead = 1.0 - static_cast<double>(pilot_len) / coherence_len;
  return overhead * std::log2(1.0 + sinr);
}

// Per-user summary of one closed-form evaluation.
struct sinr_report {
  sinr_variant variant = sinr_variant::general;
  int num_cells = 0, users_per_cell = 0;
  std::vector<double> sinr;            // linear, [l * K + k]
  std::vector<std::uint8_t> infinite;  // 1 where the value is unbounded
  std::vector<double> se;              // bit/s/Hz (inf where unbounded)
  double min_sinr = 0.0;
  double min_se = 0.0;
  user_ref min_user{};
  bool any_infinite = false;
};

inline sinr_report make_report(sinr_variant variant, int num_cells, int users_per_cell,
                               const std::vector<double> &sinr,
                               const std::vector<std::uint8_t> &infinite, int pilot_len,
                               int coherence_len) {
  sinr_report r;
  r.variant = variant;
  r.num_cells = num_cells;
  r.users_per_cell = users_per_cell;
  r.sinr = sinr;
  r.infinite = infinite;
  r.se.resize(sinr.size());
  r.min_sinr = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t u = 0; u < sinr.size(); ++u) {
    bool inf = !infinite.empty() && infinite[u] != 0;
    r.any_infinite = r.any_infinite || inf;
    r.se[u] = inf ? std::numeric_limits<double>::infinity()
                  : se_from_sinr(sinr[u], pilot_len, coherence_len);
    if (!inf && (!found || sinr[u] < r.min_sinr)) {
      found = true;
      r.min_sinr = sinr[u];
      r.min_user = {static_cast<int>(u) / users_per_cell,
                    static_cast<int>(u) % users_per_cell};
    }
  }
  if (!found) {  // every user unbounded
    r.min_sinr = std::numeric_limits<double>::infinity();
    r.min_se = std::numeric_limits<double>::infinity();
  } else {
    r.min_se = se_from_sinr(r.min_sinr, pilot_len, coherence_len);
  }
  return r;
}

}  // namespace pilotopt
