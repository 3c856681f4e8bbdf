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
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pilotopt/common.hpp"
#include "pilotopt/estimation.hpp"
#include "pilotopt/network.hpp"
#include "pilotopt/optimize.hpp"
#include "pilotopt/pilots.hpp"
#include "pilotopt/rng.hpp"
#include "pilotopt/se.hpp"
#include "pilotopt/threading.hpp"

namespace pilotopt {

struct mc_config {
  std::uint64_t realizations = 100000;
  std::uint64_t seed = 7;
  objective_mode mode = objective_mode::ideal;
  double epsilon = 0.0;         // hardware mode
  double corr_magnitude = 0.0;  // correlated mode
  int antennas_override = 0;    // 0: use the network's antenna count
  unsigned threads = 1;

  void validate() const {
    if (realizations < 2) throw std::invalid_argument("mc_config: need >= 2 realizations");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
      throw std::invalid_argument("mc_config: epsilon must lie in [0, 1]");
    if (!(corr_magnitude >= 0.0 && corr_magnitude <= 1.0))
      throw std::invalid_argument("mc_config: corr_magnitude must lie in [0, 1]");
    if (antennas_override < 0)
      throw std::invalid_argument("mc_config: antennas_override must be >= 0");
  }
};

// Empirical effective SINR of one user assembled from sample moments of the
// hardening bound, with a delta-method standard error.
struct mc_estimate {
  double sinr = 0.0;
  double std_err = 0.0;
  double signal_re = 0.0, signal_im = 0.0;  // mean combined desired channel
  std::vector<double> interference;         // mean squared coupling per user
  double noise_quad = 0.0;                  // mean squared combiner norm
  bool degenerate = false;                  // zero pilot energy: no estimate
};

namespace mcdetail {

struct block_acc {
  // Per target user: component sums and second-moment sums, index-addressed.
  std::vector<double> sum;    // [user][dim]
  std::vector<double> outer;  // [user][dim][dim]
};

}  // namespace mcdetail

// Simulates the channel-hardening SINR of every user by drawing pilot-phase
// observations, forming the per-mode linear estimate, and averaging the exact
// moment expressions of the bound. Deterministic for a fixed seed; the block
// reduction makes results independent of the thread count.
inline std::vector<mc_estimate> simulate_sinr(const network_realization &net,
                                              const pilot_allocation &alloc,
                                              const std::vector<double> &data_mw,
                                              const mc_config &mc) {
  mc.validate();
  alloc.validate();
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  const int tp = net.config.pilot_len;
  const int M = mc.antennas_override > 0 ? mc.antennas_override : net.config.bs_antennas;
  const int nu = L * K;
  const double noise = net.config.noise_mw;
  const double eps = mc.mode == objective_mode::hardware ? mc.epsilon : 0.0;
  const double s1 = std::sqrt(1.0 - eps * eps);
  const bool corr = mc.mode == objective_mode::correlated;

  // Estimator gains and inner products, fixed over realizations.
  std::vector<double> coef(nu, 0.0);
  std::vector<std::uint8_t> degen(nu, 0);
  std::vector<double> inner(static_cast<std::size_t>(nu) * nu);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      int u = l * K + k;
      for (int i = 0; i < L; ++i)
        for (int t = 0; t < K; ++t)
          inner[static_cast<std::size_t>(u) * nu + i * K + t] =
              pilot_inner(alloc, {i, t}, {l, k});
      if (!(alloc.total_power(l, k) > 0.0)) {
        degen[u] = 1;
        continue;
      }
      switch (mc.mode) {
        case objective_mode::ideal:
          coef[u] = mmse_stats(net.beta, alloc, noise, l, k).coef;
          break;
        case objective_mode::hardware:
          coef[u] = lmmse_stats_hw(net.beta, alloc, noise, {mc.epsilon}, l, k).stats.coef;
          break;
        case objective_mode::correlated:
          coef[u] = elementwise_mmse_coef_corr(net.beta, alloc, noise, l, k);
          break;
      }
    }

  std::vector<double> sqrt_p(static_cast<std::size_t>(nu) * tp);
  for (int i = 0; i < L; ++i)
    for (int t = 0; t < K; ++t)
      for (int b = 0; b < tp; ++b)
        sqrt_p[static_cast<std::size_t>(i * K + t) * tp + b] = std::sqrt(alloc.p(i, t, b));

  // Covariance square roots for correlated draws.
  std::vector<Eigen::MatrixXcd> sqrtm;
  if (corr) {
    correlation_model cm = make_correlation_model(net, mc.corr_magnitude);
    sqrtm.resize(static_cast<std::size_t>(L) * nu);
    for (int l = 0; l < L; ++l)
      for (int i = 0; i < L; ++i)
        for (int t = 0; t < K; ++t) {
          Eigen::MatrixXcd r(M, M);
          double b = net.beta(l, i, t), rho = cm.rho(l, i, t), th = cm.theta(l, i, t);
          for (int m = 0; m < M; ++m)
            for (int n2 = 0; n2 < M; ++n2) {
              int d = m - n2;
              r(m, n2) = b * std::pow(rho, std::abs(d)) *
                         std::exp(std::complex<double>(0.0, th * d));
            }
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
          Eigen::VectorXd ev = eig.eigenvalues();
          Eigen::VectorXd root(M);
          for (int m = 0; m < M; ++m) root[m] = std::sqrt(std::max(ev[m], 0.0));
          sqrtm[static_cast<std::size_t>(l) * nu + i * K + t] =
              eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
        }
  }

  const int dim = nu + 3;  // re, im, per-user coupling, combiner norm
  const std::uint64_t n = mc.realizations;
  const std::uint64_t block_size = 1024;
  const std::uint64_t nblocks = (n + block_size - 1) / block_size;

  std::vector<mcdetail::block_acc> blocks(nblocks);
  using cplx = std::complex<double>;

  parallel_for(nblocks, mc.threads, [&](std::size_t bi) {
    mcdetail::block_acc acc;
    acc.sum.assign(static_cast<std::size_t>(nu) * dim, 0.0);
    acc.outer.assign(static_cast<std::size_t>(nu) * dim * dim, 0.0);

    std::vector<cplx> h(static_cast<std::size_t>(L) * nu * M);
    std::vector<cplx> nz(static_cast<std::size_t>(L) * tp * M);
    std::vector<cplx> eta(static_cast<std::size_t>(nu) * tp);
    std::vector<cplx> g(M), y(M), z(nu);
    std::vector<double> comp(dim);

    std::uint64_t lo = bi * block_size;
    std::uint64_t hi = std::min(n, lo + block_size);
    for (std::uint64_t rix = lo; rix < hi; ++rix) {
      rng rr(derive_seed(mc.seed, rix, 0, 6));

      // Draw order: distortion, channels, receiver noise.
      if (eps > 0.0)
        for (int u = 0; u < nu; ++u)
          for (int b = 0; b < tp; ++b)
            eta[static_cast<std::size_t>(u) * tp + b] =
                rr.cnormal() * (eps * sqrt_p[static_cast<std::size_t>(u) * tp + b]);
      for (int l = 0; l < L; ++l)
        for (int u = 0; u < nu; ++u) {
          cplx *hu = &h[(static_cast<std::size_t>(l) * nu + u) * M];
          if (corr) {
            for (int m = 0; m < M; ++m) g[m] = rr.cnormal();
            const Eigen::MatrixXcd &sq = sqrtm[static_cast<std::size_t>(l) * nu + u];
            for (int m = 0; m < M; ++m) {
              cplx s(0.0, 0.0);
              for (int n2 = 0; n2 < M; ++n2) s += sq(m, n2) * g[n2];
              hu[m] = s;
            }
          } else {
            double sb = std::sqrt(net.beta(l, u / K, u % K));
            for (int m = 0; m < M; ++m) hu[m] = rr.cnormal() * sb;
          }
        }
      double sn = std::sqrt(noise);
      for (std::size_t i2 = 0; i2 < nz.size(); ++i2) nz[i2] = rr.cnormal() * sn;

      for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k) {
          int u0 = l * K + k;
          if (degen[u0]) continue;
          double c0 = coef[u0];

          // Pilot-projected observation for (l, k).
          for (int m = 0; m < M; ++m) {
            cplx s(0.0, 0.0);
            for (int b = 0; b < tp; ++b)
              s += nz[(static_cast<std::size_t>(l) * tp + b) * M + m] *
                   sqrt_p[static_cast<std::size_t>(u0) * tp + b];
            y[m] = s;
          }
          for (int u = 0; u < nu; ++u) {
            cplx w(s1 * inner[static_cast<std::size_t>(u0) * nu + u], 0.0);
            if (eps > 0.0) {
              cplx xi(0.0, 0.0);
              for (int b = 0; b < tp; ++b)
                xi += eta[static_cast<std::size_t>(u) * tp + b] *
                      sqrt_p[static_cast<std::size_t>(u0) * tp + b];
              w += xi;
            }
            if (w == cplx(0.0, 0.0)) continue;
            const cplx *hu = &h[(static_cast<std::size_t>(l) * nu + u) * M];
            for (int m = 0; m < M; ++m) y[m] += w * hu[m];
          }

          double ynorm = 0.0;
          for (int m = 0; m < M; ++m) ynorm += std::norm(y[m]);
          for (int u = 0; u < nu; ++u) {
            const cplx *hu = &h[(static_cast<std::size_t>(l) * nu + u) * M];
            cplx s(0.0, 0.0);
            for (int m = 0; m < M; ++m) s += std::conj(y[m]) * hu[m];
            z[u] = s;
          }

          cplx sig = c0 * z[u0];
          comp[0] = sig.real();
          comp[1] = sig.imag();
          for (int u = 0; u < nu; ++u) comp[2 + u] = c0 * c0 * std::norm(z[u]);
          comp[2 + nu] = c0 * c0 * ynorm;

          double *su = &acc.sum[static_cast<std::size_t>(u0) * dim];
          double *ou = &acc.outer[static_cast<std::size_t>(u0) * dim * dim];
          for (int a = 0; a < dim; ++a) {
            su[a] += comp[a];
            for (int b2 = 0; b2 < dim; ++b2) ou[a * dim + b2] += comp[a] * comp[b2];
          }
        }
    }
    blocks[bi] = std::move(acc);
  });

  // Index-ordered reduction over blocks.
  std::vector<double> total_sum(static_cast<std::size_t>(nu) * dim, 0.0);
  std::vector<double> total_outer(static_cast<std::size_t>(nu) * dim * dim, 0.0);
  for (std::uint64_t bi = 0; bi < nblocks; ++bi) {
    for (std::size_t i2 = 0; i2 < total_sum.size(); ++i2)
      total_sum[i2] += blocks[bi].sum[i2];
    for (std::size_t i2 = 0; i2 < total_outer.size(); ++i2)
      total_outer[i2] += blocks[bi].outer[i2];
  }

  std::vector<mc_estimate> out(nu);
  const double sfac = 1.0 - eps * eps;
  for (int u0 = 0; u0 < nu; ++u0) {
    mc_estimate &e = out[u0];
    e.interference.assign(nu, 0.0);
    if (degen[u0]) {
      e.degenerate = true;
      continue;
    }
    const double *su = &total_sum[static_cast<std::size_t>(u0) * dim];
    const double *ou = &total_outer[static_cast<std::size_t>(u0) * dim * dim];
    std::vector<double> mean(dim);
    for (int a = 0; a < dim; ++a) mean[a] = su[a] / static_cast<double>(n);
    e.signal_re = mean[0];
    e.signal_im = mean[1];
    for (int u = 0; u < nu; ++u) e.interference[u] = mean[2 + u];
    e.noise_quad = mean[2 + nu];

    double p0 = data_mw[u0];
    double num = sfac * p0 * (mean[0] * mean[0] + mean[1] * mean[1]);
    double tot = noise * mean[2 + nu];
    for (int u = 0; u < nu; ++u) tot += data_mw[u] * mean[2 + u];
    double den = tot - num;
    e.sinr = num / den;

    // Delta method: gradient of num/(tot - num) in the component means.
    std::vector<double> grad(dim);
    double d2 = den * den;
    grad[0] = 2.0 * sfac * p0 * mean[0] * tot / d2;
    grad[1] = 2.0 * sfac * p0 * mean[1] * tot / d2;
    for (int u = 0; u < nu; ++u) grad[2 + u] = -num * data_mw[u] / d2;
    grad[2 + nu] = -num * noise / d2;

    double var = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b2 = 0; b2 < dim; ++b2) {
        double cov = (ou[a * dim + b2] -
                      static_cast<double>(n) * mean[a] * mean[b2]) /
                     (static_cast<double>(n) - 1.0);
        var += grad[a] * cov * grad[b2];
      }
    e.std_err = std::sqrt(std::max(var / static_cast<double>(n), 0.0));
  }
  return out;
}

// Sample moments of an uncorrelated M-antenna channel with per-antenna gain
// beta: squared norm and fourth power, with exact references.
struct moment_report {
  double mean_sq = 0.0, se_sq = 0.0, expect_sq = 0.0;
  double mean_quad = 0.0, se_quad = 0.0, expect_quad = 0.0;
};

inline moment_report estimate_channel_moments(int antennas, double beta, std::uint64_t n,
                                              std::uint64_t seed) {
  if (antennas < 1) throw std::invalid_argument("estimate_channel_moments: antennas >= 1");
  if (n < 2) throw std::invalid_argument("estimate_channel_moments: need >= 2 draws");
  kahan_sum s1, s2, q1, q2;
  double sb = std::sqrt(beta);
  for (std::uint64_t r = 0; r < n; ++r) {
    rng rr(derive_seed(seed, r, 0, 7));
    double nrm = 0.0;
    for (int m = 0; m < antennas; ++m) nrm += std::norm(rr.cnormal() * sb);
    double quad = nrm * nrm;
    s1.add(nrm);
    s2.add(nrm * nrm);
    q1.add(quad);
    q2.add(quad * quad);
  }
  auto finish = [n](const kahan_sum &a, const kahan_sum &b, double &mean, double &se) {
    mean = a.value() / static_cast<double>(n);
    double var = (b.value() - static_cast<double>(n) * mean * mean) /
                 (static_cast<double>(n) - 1.0);
    se = std::sqrt(std::max(var / static_cast<double>(n), 0.0));
  };
  moment_report rep;
  finish(s1, s2, rep.mean_sq, rep.se_sq);
  finish(q1, q2, rep.mean_quad, rep.se_quad);
  rep.expect_sq = static_cast<double>(antennas) * beta;
  rep.expect_quad = static_cast<double>(antennas) * (antennas + 1) * beta * beta;
  return rep;
}

// One closed-form-vs-simulation comparison row.
struct cf_row {
  int cell = 0, user = 0;
  sinr_variant variant = sinr_variant::general;
  double closed_form = 0.0;
  double empirical = 0.0;
  double std_err = 0.0;
  double z = 0.0;
  bool pass = false;
};

struct cf_comparison {
  std::vector<cf_row> rows;
  double pass_fraction = 0.0;
  bool all_pass = false;
};

namespace mcdetail {

inline cf_comparison compare(const std::vector<double> &closed, sinr_variant variant,
                             const std::vector<mc_estimate> &est, int K, double z_cap) {
  cf_comparison out;
  int passed = 0;
  for (std::size_t u = 0; u < closed.size(); ++u) {
    cf_row row;
    row.cell = static_cast<int>(u) / K;
    row.user = static_cast<int>(u) % K;
    row.variant = variant;
    row.closed_form = closed[u];
    row.empirical = est[u].sinr;
    row.std_err = est[u].std_err;
    if (est[u].std_err > 0.0)
      row.z = (est[u].sinr - closed[u]) / est[u].std_err;
    else
      row.z = est[u].sinr == closed[u] ? 0.0 : std::numeric_limits<double>::infinity();
    row.pass = std::abs(row.z) <= z_cap;
    passed += row.pass ? 1 : 0;
    out.rows.push_back(row);
  }
  out.pass_fraction = closed.empty() ? 1.0 : static_cast<double>(passed) / closed.size();
  out.all_pass = passed == static_cast<int>(closed.size());
  return out;
}

}  // namespace mcdetail

// Checks the mode-matched closed form against simulation for every user.
inline cf_comparison verify_closed_form(const network_realization &net,
                                        const pilot_allocation &alloc,
                                        const std::vector<double> &data_mw,
                                        const mc_config &mc, double z_cap = 3.0) {
  const int K = net.config.users_per_cell;
  const int M = mc.antennas_override > 0 ? mc.antennas_override : net.config.bs_antennas;
  opt_config oc;
  oc.mode = mc.mode;
  oc.epsilon = mc.epsilon;
  oc.corr_magnitude = mc.corr_magnitude;
  network_realization scaled = net;
  scaled.config.bs_antennas = M;
  std::vector<double> closed = exact_sinrs(scaled, oc, alloc, data_mw);
  sinr_variant variant = mc.mode == objective_mode::hardware    ? sinr_variant::hardware
                         : mc.mode == objective_mode::correlated ? sinr_variant::correlated
                                                                 : sinr_variant::general;
  return mcdetail::compare(closed, variant, simulate_sinr(net, alloc, data_mw, mc), K,
                           z_cap);
}

// Same check against the assignment-structured closed form.
inline cf_comparison verify_closed_form(const network_realization &net,
                                        const pilot_assignment &assign,
                                        const std::vector<double> &data_mw,
                                        const mc_config &mc, double z_cap = 3.0) {
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  const int M = mc.antennas_override > 0 ? mc.antennas_override : net.config.bs_antennas;
  if (mc.mode != objective_mode::ideal)
    throw unsupported_structure_error(
        "verify_closed_form: the assignment form covers ideal hardware only");
  pilot_allocation alloc = from_assignment(assign, net.config.pilot_len);
  std::vector<double> closed(static_cast<std::size_t>(L) * K);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k)
      closed[static_cast<std::size_t>(l) * K + k] =
          sinr_assignment(net.beta, assign, data_mw, net.config.noise_mw, M, l, k);
  return mcdetail::compare(closed, sinr_variant::assignment,
                           simulate_sinr(net, alloc, data_mw, mc), K, z_cap);
}

}  // namespace pilotopt
