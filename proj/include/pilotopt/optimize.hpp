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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pilotopt/common.hpp"
#include "pilotopt/estimation.hpp"
#include "pilotopt/gp.hpp"
#include "pilotopt/network.hpp"
#include "pilotopt/pilots.hpp"
#include "pilotopt/rng.hpp"
#include "pilotopt/se.hpp"

namespace pilotopt {

enum class objective_mode { ideal, hardware, correlated };
enum class power_mode { joint, pilot_only };

inline const char *to_string(objective_mode m) {
  switch (m) {
    case objective_mode::ideal: return "ideal";
    case objective_mode::hardware: return "hardware";
    case objective_mode::correlated: return "correlated";
  }
  return "?";
}

struct opt_config {
  objective_mode mode = objective_mode::ideal;
  double epsilon = 0.0;         // hardware mode
  double corr_magnitude = 0.0;  // correlated mode
  power_mode powers = power_mode::joint;
  int sca_max_iters = 200;
  double sca_rel_tol = 1e-4;
  std::uint64_t init_seed = 1;
  std::uint64_t enumeration_cap = 1000000;
  gp_tolerances gp_tol;

  void validate() const {
    if (sca_max_iters < 1) throw std::invalid_argument("opt_config: sca_max_iters must be >= 1");
    if (!(sca_rel_tol > 0.0)) throw std::invalid_argument("opt_config: sca_rel_tol must be > 0");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
      throw std::invalid_argument("opt_config: epsilon must lie in [0, 1)");
    if (!(corr_magnitude >= 0.0 && corr_magnitude <= 1.0))
      throw std::invalid_argument("opt_config: corr_magnitude must lie in [0, 1]");
  }
};

// Exact per-user effective SINRs for the configured objective mode.
inline std::vector<double> exact_sinrs(const network_realization &net, const opt_config &cfg,
                                       const pilot_allocation &alloc,
                                       const std::vector<double> &data_mw) {
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  const int M = net.config.bs_antennas;
  const double noise = net.config.noise_mw;
  std::vector<double> out(static_cast<std::size_t>(L) * K);
  correlation_model cm;
  if (cfg.mode == objective_mode::correlated)
    cm = make_correlation_model(net, cfg.corr_magnitude);
  hardware_config hw{cfg.epsilon};
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      double v = 0.0;
      switch (cfg.mode) {
        case objective_mode::ideal:
          v = sinr_general(net.beta, alloc, data_mw, noise, M, l, k);
          break;
        case objective_mode::hardware:
          v = sinr_hardware(net.beta, alloc, data_mw, noise, M, hw, l, k);
          break;
        case objective_mode::correlated:
          v = sinr_correlated(net.beta, cm, alloc, data_mw, noise, M, l, k);
          break;
      }
      out[static_cast<std::size_t>(l) * K + k] = v;
    }
  return out;
}

struct opt_result {
  bool success = false;
  std::string message;
  double xi = 0.0;         // exact min SINR of the returned powers
  double xi_solver = 0.0;  // objective value reported by the last solve
  pilot_allocation alloc;
  std::vector<double> data_power_mw;
  std::optional<pilot_assignment> assignment;
  std::vector<double> trace;  // per-candidate or per-iteration objective
  std::vector<gp_status> statuses;
  std::uint64_t best_index = 0;
  int iterations = 0;
};

namespace optdetail {

// Lower bound on every optimized power variable, in mW. Far below any power
// that affects an objective, but high enough that the barrier method treats
// "effectively zero" coordinates as a proper active constraint.
constexpr double kPowerFloorMw = 1e-12;

// ---------- SMALL POSYNOMIAL ALGEBRA ----------

inline monomial mono_mul(monomial a, const monomial &b) {
  a.coef *= b.coef;
  for (const auto &[var, e] : b.expo) a.mul(var, e);
  return a;
}

inline posynomial posy_mul(const posynomial &a, const posynomial &b) {
  posynomial out;
  out.terms.reserve(a.terms.size() * b.terms.size());
  for (const monomial &ma : a.terms)
    for (const monomial &mb : b.terms) out.add(mono_mul(ma, mb));
  return out;
}

inline posynomial posy_add(posynomial a, const posynomial &b) {
  for (const monomial &m : b.terms) a.add(m);
  return a;
}

inline posynomial posy_scale(posynomial a, double s) {
  for (monomial &m : a.terms) m.coef *= s;
  return a;
}

// Multiplies every term by xi and by the reciprocal of a monomial numerator,
// producing the final "<= 1" constraint posynomial.
inline posynomial finish_constraint(const posynomial &den, const monomial &num, int xi_var) {
  posynomial out;
  out.terms.reserve(den.terms.size());
  for (const monomial &m : den.terms) {
    monomial t = m;
    t.coef /= num.coef;
    t.mul(xi_var, 1.0);
    for (const auto &[var, e] : num.expo) t.mul(var, -e);
    // drop exponents that cancelled exactly
    t.expo.erase(std::remove_if(t.expo.begin(), t.expo.end(),
                                [](const auto &p) { return p.second == 0.0; }),
                 t.expo.end());
    out.add(std::move(t));
  }
  return out;
}

// ---------- ASSIGNMENT-STRUCTURE BUILDER ----------

struct assignment_layout {
  int num_cells = 0, users_per_cell = 0;
  power_mode powers = power_mode::joint;
  int xi_var = 0;
  int pilot_var(int l, int k) const { return 1 + l * users_per_cell + k; }
  int data_var(int l, int k) const {
    return 1 + num_cells * users_per_cell + l * users_per_cell + k;
  }
  int num_vars() const {
    int lk = num_cells * users_per_cell;
    return 1 + lk + (powers == power_mode::joint ? lk : 0);
  }
};

// Data-power factor: a variable in joint mode, a fixed level otherwise.
inline monomial data_factor(const assignment_layout &lay, double fixed_mw, int l, int k) {
  monomial m;
  if (lay.powers == power_mode::joint)
    m.mul(lay.data_var(l, k), 1.0);
  else
    m.coef = fixed_mw;
  return m;
}

}  // namespace optdetail

struct assignment_gp {
  gp_problem prob;
  optdetail::assignment_layout layout;
};

// Max-min effective-SINR program for a fixed pilot-sharing structure, in the
// scalar energies: maximize xi (minimize 1/xi) subject to per-user SINR and
// power-cap constraints. SINR constraints come first (user-major), then pilot
// caps, then data caps in joint mode.
inline assignment_gp build_maxmin_gp_assignment(const network_realization &net,
                                                const pilot_assignment &assign,
                                                const opt_config &cfg) {
  cfg.validate();
  assign.validate();
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  const int M = net.config.bs_antennas;
  const double noise = net.config.noise_mw;
  const double pd = net.config.max_data_power_mw;
  if (assign.num_cells != L || assign.users_per_cell != K)
    throw std::invalid_argument("build_maxmin_gp_assignment: assignment/network mismatch");

  assignment_gp out;
  auto &lay = out.layout;
  lay.num_cells = L;
  lay.users_per_cell = K;
  lay.powers = cfg.powers;
  gp_problem &prob = out.prob;
  prob.num_vars = lay.num_vars();
  prob.var_names.resize(prob.num_vars);
  prob.var_names[0] = "xi";
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      prob.var_names[lay.pilot_var(l, k)] =
          "ep_" + std::to_string(l) + "_" + std::to_string(k);
      if (cfg.powers == power_mode::joint)
        prob.var_names[lay.data_var(l, k)] =
            "p_" + std::to_string(l) + "_" + std::to_string(k);
    }
  prob.objective = monomial(1.0, {{lay.xi_var, -1.0}});

  correlation_model cm;
  if (cfg.mode == objective_mode::correlated)
    cm = make_correlation_model(net, cfg.corr_magnitude);
  const double e2 = cfg.epsilon * cfg.epsilon;

  using optdetail::data_factor;
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      const double b = net.beta(l, l, k);
      auto peers = reuse_set(assign, l, k);

      // received-data posynomial: sum of p * beta plus noise
      posynomial rx;
      for (int i = 0; i < L; ++i)
        for (int t = 0; t < K; ++t) {
          monomial m = data_factor(lay, pd, i, t);
          m.coef *= net.beta(l, i, t);
          rx.add(std::move(m));
        }
      rx.add(monomial(noise, {}));

      // co-pilot observation posynomial: sum over the reuse set of beta * energy
      posynomial obs;
      for (const user_ref &u : peers) {
        monomial m(net.beta(l, u.cell, u.user), {});
        m.mul(lay.pilot_var(u.cell, u.user), 1.0);
        obs.add(std::move(m));
      }
      obs.add(monomial(noise, {}));

      posynomial den;
      monomial num;
      if (cfg.mode == objective_mode::correlated) {
        // cross-covariance interference, data-weighted; the shared energy of
        // (l, k) cancels throughout, so pilot_var(l, k) appears only in num.
        den = optdetail::posy_mul(rx, posynomial().add(monomial(noise, {})));
        // ^ sigma^2 * (sum p beta + sigma^2): covers both noise-coupled terms
        for (const user_ref &u : peers) {
          monomial m(noise * net.beta(l, u.cell, u.user), {});
          m.mul(lay.pilot_var(u.cell, u.user), 1.0);
          den.add(std::move(m));
        }
        for (int i = 0; i < L; ++i)
          for (int t = 0; t < K; ++t) {
            for (const user_ref &u : peers) {
              double tr = trace_product_exp(
                  net.beta(l, u.cell, u.user), cm.rho(l, u.cell, u.user),
                  cm.theta(l, u.cell, u.user), net.beta(l, i, t), cm.rho(l, i, t),
                  cm.theta(l, i, t), M);
              monomial m = data_factor(lay, pd, i, t);
              m.coef *= tr / M;
              m.mul(lay.pilot_var(u.cell, u.user), 1.0);
              den.add(std::move(m));
            }
          }
        for (const user_ref &u : peers)
          if (!(u.cell == l && u.user == k)) {
            double bb = net.beta(l, u.cell, u.user);
            monomial m = data_factor(lay, pd, u.cell, u.user);
            m.coef *= M * bb * bb;
            m.mul(lay.pilot_var(u.cell, u.user), 1.0);
            den.add(std::move(m));
          }
        num = monomial(static_cast<double>(M) * b * b, {});
        num = optdetail::mono_mul(num, data_factor(lay, pd, l, k));
        num.mul(lay.pilot_var(l, k), 1.0);
      } else {
        den = optdetail::posy_mul(obs, rx);
        for (const user_ref &u : peers)
          if (!(u.cell == l && u.user == k)) {
            double bb = net.beta(l, u.cell, u.user);
            monomial m = data_factor(lay, pd, u.cell, u.user);
            m.coef *= M * bb * bb;
            m.mul(lay.pilot_var(u.cell, u.user), 1.0);
            den.add(std::move(m));
          }
        double sig = 1.0;
        if (cfg.mode == objective_mode::hardware) {
          sig = (1.0 - e2) * (1.0 - e2);
          // residual self-distortion picked up by the co-pilot projection
          monomial m = data_factor(lay, pd, l, k);
          m.coef *= M * e2 * (2.0 - e2) * b * b;
          m.mul(lay.pilot_var(l, k), 1.0);
          den.add(std::move(m));
        }
        num = monomial(static_cast<double>(M) * sig * b * b, {});
        num = optdetail::mono_mul(num, data_factor(lay, pd, l, k));
        num.mul(lay.pilot_var(l, k), 1.0);
      }
      prob.constraints.push_back(optdetail::finish_constraint(den, num, lay.xi_var));
    }

  const double pilot_cap = net.config.max_pilot_power_mw * net.config.pilot_len;
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k)
      prob.constraints.push_back(
          posynomial().add(monomial(1.0 / pilot_cap, {{lay.pilot_var(l, k), 1.0}})));
  if (cfg.powers == power_mode::joint)
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k)
        prob.constraints.push_back(
            posynomial().add(monomial(1.0 / pd, {{lay.data_var(l, k), 1.0}})));

  // Strictly interior warm start: half-cap powers, objective at 90% of the
  // exact minimum there.
  {
    pilot_assignment half = assign;
    std::vector<double> data(static_cast<std::size_t>(L) * K, pd * 0.5);
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k) half.power(l, k) = pilot_cap * 0.5;
    pilot_allocation alloc = from_assignment(half, net.config.pilot_len);
    std::vector<double> s = exact_sinrs(net, cfg, alloc, data);
    double mn = *std::min_element(s.begin(), s.end());
    if (mn > 0.0) {
      prob.initial_point.assign(prob.num_vars, 0.0);
      prob.initial_point[lay.xi_var] = 0.9 * mn;
      for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k) {
          prob.initial_point[lay.pilot_var(l, k)] = pilot_cap * 0.5;
          if (cfg.powers == power_mode::joint)
            prob.initial_point[lay.data_var(l, k)] = pd * 0.5;
        }
    }
  }
  return out;
}

// ---------- CONTINUOUS (ITERATED) BUILDER ----------

namespace optdetail {

struct sca_layout {
  int num_cells = 0, users_per_cell = 0, pilot_len = 0;
  power_mode powers = power_mode::joint;
  int xi_var = 0;
  int pilot_var(int l, int k, int b) const {
    return 1 + (l * users_per_cell + k) * pilot_len + b;
  }
  int data_var(int l, int k) const {
    return 1 + num_cells * users_per_cell * pilot_len + l * users_per_cell + k;
  }
  int num_vars() const {
    int lk = num_cells * users_per_cell;
    return 1 + lk * pilot_len + (powers == power_mode::joint ? lk : 0);
  }
};

// Posynomial expansion of the squared pilot inner product of users u and w:
// sum over basis pairs of sqrt-power cross terms.
inline posynomial inner_sq(const sca_layout &lay, const pilot_allocation &ref, user_ref u,
                           user_ref w) {
  posynomial out;
  const int tp = lay.pilot_len;
  for (int b = 0; b < tp; ++b)
    for (int b2 = 0; b2 < tp; ++b2) {
      // sqrt(p_u^b p_w^b p_u^b2 p_w^b2); diagonal terms are plain products
      monomial m(1.0, {});
      m.mul(lay.pilot_var(u.cell, u.user, b), 0.5);
      m.mul(lay.pilot_var(w.cell, w.user, b), 0.5);
      m.mul(lay.pilot_var(u.cell, u.user, b2), 0.5);
      m.mul(lay.pilot_var(w.cell, w.user, b2), 0.5);
      out.add(std::move(m));
    }
  (void)ref;
  return out;
}

// Direct power overlap of users u and w: sum_b p_u^b p_w^b.
inline posynomial power_overlap(const sca_layout &lay, user_ref u, user_ref w) {
  posynomial out;
  for (int b = 0; b < lay.pilot_len; ++b) {
    monomial m(1.0, {});
    m.mul(lay.pilot_var(u.cell, u.user, b), 1.0);
    m.mul(lay.pilot_var(w.cell, w.user, b), 1.0);
    out.add(std::move(m));
  }
  return out;
}

// Total pilot energy of user u as a posynomial.
inline posynomial energy(const sca_layout &lay, user_ref u) {
  posynomial out;
  for (int b = 0; b < lay.pilot_len; ++b)
    out.add(monomial(1.0, {{lay.pilot_var(u.cell, u.user, b), 1.0}}));
  return out;
}

}  // namespace optdetail

struct sca_gp {
  gp_problem prob;
  optdetail::sca_layout layout;
  tensor3 weights;  // AM-GM shares per user and basis at the expansion point
};

// One convex subproblem of the iterated continuous design: the squared total
// pilot energy in each numerator is replaced by its monomial bound at the
// expansion point (tight there), every other term is kept exactly.
// Constraint order matches the assignment builder.
inline sca_gp build_maxmin_gp_sca(const network_realization &net,
                                  const pilot_allocation &expansion,
                                  const std::vector<double> &expansion_data,
                                  const opt_config &cfg) {
  cfg.validate();
  expansion.validate();
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  const int tp = net.config.pilot_len;
  const int M = net.config.bs_antennas;
  const double noise = net.config.noise_mw;
  const double pd = net.config.max_data_power_mw;
  if (expansion.num_cells != L || expansion.users_per_cell != K || expansion.pilot_len != tp)
    throw std::invalid_argument("build_maxmin_gp_sca: expansion/network mismatch");

  sca_gp out;
  auto &lay = out.layout;
  lay.num_cells = L;
  lay.users_per_cell = K;
  lay.pilot_len = tp;
  lay.powers = cfg.powers;
  out.weights = tensor3(L, K, tp);
  gp_problem &prob = out.prob;
  prob.num_vars = lay.num_vars();
  prob.var_names.resize(prob.num_vars);
  prob.var_names[0] = "xi";
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      for (int b = 0; b < tp; ++b)
        prob.var_names[lay.pilot_var(l, k, b)] = "q_" + std::to_string(l) + "_" +
                                                 std::to_string(k) + "_" + std::to_string(b);
      if (cfg.powers == power_mode::joint)
        prob.var_names[lay.data_var(l, k)] =
            "p_" + std::to_string(l) + "_" + std::to_string(k);
    }
  prob.objective = monomial(1.0, {{lay.xi_var, -1.0}});

  correlation_model cm;
  if (cfg.mode == objective_mode::correlated)
    cm = make_correlation_model(net, cfg.corr_magnitude);
  const double e2 = cfg.epsilon * cfg.epsilon;

  using namespace optdetail;
  auto data_of = [&](int i, int t) {
    monomial m;
    if (lay.powers == power_mode::joint)
      m.mul(lay.data_var(i, t), 1.0);
    else
      m.coef = pd;
    return m;
  };

  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      const double b = net.beta(l, l, k);
      const user_ref me{l, k};

      // AM-GM bound on the squared total energy of (l, k) at the expansion
      // point: weights are the per-basis power shares.
      double s0 = expansion.total_power(l, k);
      if (!(s0 > 0.0))
        throw degenerate_pilot_error("build_maxmin_gp_sca: expansion user (" +
                                     std::to_string(l) + ", " + std::to_string(k) +
                                     ") has zero pilot energy");
      monomial energy_sq_bound(1.0, {});
      for (int q = 0; q < tp; ++q) {
        double w = expansion.p(l, k, q) / s0;
        out.weights(l, k, q) = w;
        if (w <= 0.0) continue;
        energy_sq_bound.coef *= std::pow(1.0 / w, 2.0 * w);
        energy_sq_bound.mul(lay.pilot_var(l, k, q), 2.0 * w);
      }

      posynomial rx;
      for (int i = 0; i < L; ++i)
        for (int t = 0; t < K; ++t) {
          monomial m = data_of(i, t);
          m.coef *= net.beta(l, i, t);
          rx.add(std::move(m));
        }
      rx.add(monomial(noise, {}));

      posynomial den;
      monomial num;
      if (cfg.mode == objective_mode::correlated) {
        // non-coherent cross-covariance interference
        for (int i = 0; i < L; ++i)
          for (int t = 0; t < K; ++t) {
            posynomial inner_acc;
            for (int i2 = 0; i2 < L; ++i2)
              for (int t2 = 0; t2 < K; ++t2) {
                double tr = trace_product_exp(net.beta(l, i2, t2), cm.rho(l, i2, t2),
                                              cm.theta(l, i2, t2), net.beta(l, i, t),
                                              cm.rho(l, i, t), cm.theta(l, i, t), M);
                inner_acc = posy_add(
                    inner_acc,
                    posy_scale(inner_sq(lay, expansion, {i2, t2}, me), tr / M));
              }
            monomial pm = data_of(i, t);
            posynomial weighted;
            for (const monomial &mm : inner_acc.terms) weighted.add(mono_mul(pm, mm));
            den = posy_add(den, weighted);
          }
        // coherent co-pilot interference
        for (int i = 0; i < L; ++i)
          for (int t = 0; t < K; ++t) {
            if (i == l && t == k) continue;
            double bb = net.beta(l, i, t);
            monomial pm = data_of(i, t);
            for (const monomial &mm : inner_sq(lay, expansion, {i, t}, me).terms)
              den.add(mono_mul(mono_mul(pm, mm), monomial(M * bb * bb, {})));
          }
        // noise-coupled terms: sigma^2 * energy * (rx-data + noise) plus
        // sigma^2 times the channel part of the observation power
        posynomial en = energy(lay, me);
        for (const monomial &ma : en.terms)
          for (const monomial &mb : rx.terms)
            den.add(mono_mul(mono_mul(ma, mb), monomial(noise, {})));
        for (int i = 0; i < L; ++i)
          for (int t = 0; t < K; ++t)
            for (const monomial &mm : inner_sq(lay, expansion, {i, t}, me).terms)
              den.add(mono_mul(mm, monomial(noise * net.beta(l, i, t), {})));

        num = monomial(static_cast<double>(M) * b * b, {});
        num = mono_mul(num, data_of(l, k));
        num = mono_mul(num, energy_sq_bound);
      } else {
        // observation-power posynomial, exact or distortion-weighted
        posynomial obs;
        for (int i = 0; i < L; ++i)
          for (int t = 0; t < K; ++t) {
            posynomial kap;
            if (cfg.mode == objective_mode::hardware) {
              kap = posy_scale(inner_sq(lay, expansion, {i, t}, me), 1.0 - e2);
              kap = posy_add(kap, posy_scale(power_overlap(lay, {i, t}, me), e2));
            } else {
              kap = inner_sq(lay, expansion, {i, t}, me);
            }
            obs = posy_add(obs, posy_scale(kap, net.beta(l, i, t)));
          }
        obs = posy_add(obs, posy_scale(energy(lay, me), noise));
        den = posy_mul(obs, rx);

        for (int i = 0; i < L; ++i)
          for (int t = 0; t < K; ++t) {
            if (i == l && t == k) continue;
            double bb = net.beta(l, i, t);
            posynomial kap;
            if (cfg.mode == objective_mode::hardware) {
              kap = posy_scale(inner_sq(lay, expansion, {i, t}, me), 1.0 - e2);
              kap = posy_add(kap, posy_scale(power_overlap(lay, {i, t}, me), e2));
            } else {
              kap = inner_sq(lay, expansion, {i, t}, me);
            }
            monomial pm = data_of(i, t);
            for (const monomial &mm : kap.terms)
              den.add(mono_mul(mono_mul(pm, mm), monomial(M * bb * bb, {})));
          }

        double sig = 1.0;
        if (cfg.mode == objective_mode::hardware) {
          sig = (1.0 - e2) * (1.0 - e2);
          monomial pm = data_of(l, k);
          for (const monomial &mm : inner_sq(lay, expansion, me, me).terms)
            den.add(mono_mul(mono_mul(pm, mm),
                             monomial(M * e2 * (1.0 - e2) * b * b, {})));
          for (int q = 0; q < tp; ++q) {
            monomial m = mono_mul(pm, monomial(M * e2 * b * b, {}));
            m.mul(lay.pilot_var(l, k, q), 2.0);
            den.add(std::move(m));
          }
        }
        num = monomial(static_cast<double>(M) * sig * b * b, {});
        num = mono_mul(num, data_of(l, k));
        num = mono_mul(num, energy_sq_bound);
      }
      prob.constraints.push_back(finish_constraint(den, num, lay.xi_var));
    }

  const double pilot_cap = net.config.max_pilot_power_mw * tp;
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      posynomial cap;
      for (int q = 0; q < tp; ++q)
        cap.add(monomial(1.0 / pilot_cap, {{lay.pilot_var(l, k, q), 1.0}}));
      prob.constraints.push_back(std::move(cap));
    }
  if (cfg.powers == power_mode::joint)
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k)
        prob.constraints.push_back(
            posynomial().add(monomial(1.0 / pd, {{lay.data_var(l, k), 1.0}})));

  // Explicit power floors: per-basis powers the optimum drives toward zero
  // would otherwise push the barrier method against its log-domain clamp and
  // stall Newton's convergence. The floor is far below any power that
  // matters, so the optimum is unchanged in practice.
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      for (int q = 0; q < tp; ++q)
        prob.constraints.push_back(posynomial().add(
            monomial(kPowerFloorMw, {{lay.pilot_var(l, k, q), -1.0}})));
      if (cfg.powers == power_mode::joint)
        prob.constraints.push_back(
            posynomial().add(monomial(kPowerFloorMw, {{lay.data_var(l, k), -1.0}})));
    }

  // Warm start near the expansion point, pulled 0.1% into the interior so
  // the barrier method does not begin against the power caps. The start
  // point only affects solve time, not the optimum.
  {
    std::vector<double> s = exact_sinrs(net, cfg, expansion, expansion_data);
    double mn = *std::min_element(s.begin(), s.end());
    if (mn > 0.0) {
      const double floor_mw = 10.0 * kPowerFloorMw;
      const double inside = 0.999;
      prob.initial_point.assign(prob.num_vars, 0.0);
      prob.initial_point[lay.xi_var] = 0.9 * mn;
      for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k) {
          for (int q = 0; q < tp; ++q)
            prob.initial_point[lay.pilot_var(l, k, q)] =
                std::max(inside * expansion.p(l, k, q), floor_mw);
          if (cfg.powers == power_mode::joint)
            prob.initial_point[lay.data_var(l, k)] =
                inside * expansion_data[static_cast<std::size_t>(l) * K + k];
        }
    }
  }
  return out;
}

namespace optdetail {

inline bool usable(const gp_solution &sol, const gp_tolerances &tol) {
  return (sol.status == gp_status::optimal || sol.status == gp_status::max_iter) &&
         sol.max_constraint <= 1.0 + 10.0 * tol.feasibility &&
         std::isfinite(sol.objective_value);
}

// Pulls a slightly-interior power profile out of a solution so the next
// subproblem can start strictly feasible.
constexpr double kInteriorNudge = 1.0 - 1e-9;

}  // namespace optdetail

// Extracts the scalar pilot energies and data powers of an assignment-GP
// solution back into the assignment (nudged just inside the caps).
inline void extract_assignment_solution(const gp_solution &sol, const assignment_gp &gp,
                                        const network_realization &net,
                                        pilot_assignment &assign,
                                        std::vector<double> &data_mw) {
  const auto &lay = gp.layout;
  const int L = lay.num_cells, K = lay.users_per_cell;
  const double cap = net.config.max_pilot_power_mw * net.config.pilot_len;
  const double pd = net.config.max_data_power_mw;
  data_mw.assign(static_cast<std::size_t>(L) * K, pd);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      assign.power(l, k) =
          std::min(sol.point[lay.pilot_var(l, k)], cap * optdetail::kInteriorNudge);
      if (lay.powers == power_mode::joint)
        data_mw[static_cast<std::size_t>(l) * K + k] =
            std::min(sol.point[lay.data_var(l, k)], pd * optdetail::kInteriorNudge);
    }
}

// Maximizes the minimum effective SINR over every distinct pilot-sharing
// structure, solving one program per candidate. Infeasible or failed
// candidates are recorded in statuses and skipped.
inline opt_result solve_exhaustive(const network_realization &net, const opt_config &cfg) {
  cfg.validate();
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  if (net.config.pilot_len < K)
    throw unsupported_structure_error(
        "solve_exhaustive: pilot_len must be at least users_per_cell");
  assignment_enumerator en(L, K, cfg.enumeration_cap);

  opt_result res;
  res.trace.assign(en.size(), 0.0);
  res.statuses.resize(en.size());
  double best = -1.0;
  std::uint64_t best_idx = 0;
  gp_solution best_sol;
  bool have_best = false;

  for (std::uint64_t idx = 0; idx < en.size(); ++idx) {
    pilot_assignment cand = en.at(idx);
    assignment_gp gp = build_maxmin_gp_assignment(net, cand, cfg);
    gp_solution sol = solve(gp.prob, cfg.gp_tol);
    res.statuses[idx] = sol.status;
    if (!optdetail::usable(sol, cfg.gp_tol)) continue;
    double xi = sol.point[gp.layout.xi_var];
    res.trace[idx] = xi;
    if (xi > best * (1.0 + 1e-12)) {
      best = xi;
      best_idx = idx;
      best_sol = sol;
      have_best = true;
    }
  }

  if (!have_best) {
    res.message = "every candidate program failed or was infeasible";
    return res;
  }

  pilot_assignment assign = en.at(best_idx);
  assignment_gp gp = build_maxmin_gp_assignment(net, assign, cfg);
  extract_assignment_solution(best_sol, gp, net, assign, res.data_power_mw);
  res.alloc = from_assignment(assign, net.config.pilot_len);
  res.assignment = assign;
  res.best_index = best_idx;
  res.xi_solver = best;
  std::vector<double> s = exact_sinrs(net, cfg, res.alloc, res.data_power_mw);
  res.xi = *std::min_element(s.begin(), s.end());
  res.iterations = static_cast<int>(en.size());
  res.success = true;
  return res;
}

// Iterated convex approximation of the continuous joint design: starting from
// a random feasible pilot profile, repeatedly tightens the monomial bound at
// the previous solution and re-solves. The objective trace is nondecreasing
// up to solver tolerance; iteration stops on relative stagnation.
inline opt_result solve_sca(const network_realization &net, const opt_config &cfg) {
  cfg.validate();
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  const int tp = net.config.pilot_len;
  const double pmax = net.config.max_pilot_power_mw;
  const double pd = net.config.max_data_power_mw;

  // Random interior starting profile; per-user streams keep the draw order
  // independent of loop structure.
  pilot_allocation alloc(L, K, tp);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      rng r(derive_seed(cfg.init_seed, l, k, 4));
      for (int b = 0; b < tp; ++b) alloc.p(l, k, b) = r.uniform(1e-6 * pmax, pmax);
      double tot = alloc.total_power(l, k);
      double cap = pmax * tp * optdetail::kInteriorNudge;
      if (tot > cap)
        for (int b = 0; b < tp; ++b) alloc.p(l, k, b) *= cap / tot;
    }
  std::vector<double> data(static_cast<std::size_t>(L) * K,
                           pd * optdetail::kInteriorNudge);

  opt_result res;
  double prev = -1.0;
  for (int it = 0; it < cfg.sca_max_iters; ++it) {
    sca_gp gp = build_maxmin_gp_sca(net, alloc, data, cfg);
    gp_solution sol = solve(gp.prob, cfg.gp_tol);
    res.statuses.push_back(sol.status);
    if (!optdetail::usable(sol, cfg.gp_tol)) {
      if (res.trace.empty()) {
        res.message = "subproblem failed at iteration " + std::to_string(it) + " (" +
                      to_string(sol.status) + ")";
        return res;
      }
      break;  // keep the last good iterate
    }
    double xi = sol.point[gp.layout.xi_var];
    res.trace.push_back(xi);

    const auto &lay = gp.layout;
    const double cap = pmax * tp * optdetail::kInteriorNudge;
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k) {
        double tot = 0.0;
        for (int b = 0; b < tp; ++b) {
          alloc.p(l, k, b) = sol.point[lay.pilot_var(l, k, b)];
          tot += alloc.p(l, k, b);
        }
        if (tot > cap)
          for (int b = 0; b < tp; ++b) alloc.p(l, k, b) *= cap / tot;
        if (cfg.powers == power_mode::joint)
          data[static_cast<std::size_t>(l) * K + k] =
              std::min(sol.point[lay.data_var(l, k)], pd * optdetail::kInteriorNudge);
      }
    res.iterations = it + 1;
    if (prev >= 0.0 && std::abs(xi - prev) <= cfg.sca_rel_tol * std::max(prev, 1e-12))
      break;
    prev = xi;
  }

  if (res.trace.empty()) {
    res.message = "no subproblem produced a usable point";
    return res;
  }
  res.alloc = alloc;
  res.data_power_mw = data;
  res.xi_solver = res.trace.back();
  std::vector<double> s = exact_sinrs(net, cfg, alloc, data);
  res.xi = *std::min_element(s.begin(), s.end());
  res.success = true;
  return res;
}

// Uniform random per-cell pilot permutations at full power.
inline opt_result baseline_random(const network_realization &net, const opt_config &cfg,
                                  std::uint64_t assignment_seed) {
  cfg.validate();
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  if (net.config.pilot_len < K)
    throw unsupported_structure_error(
        "baseline_random: pilot_len must be at least users_per_cell");
  pilot_assignment assign(L, K);
  rng r(derive_seed(assignment_seed, 0, 0, 5));
  for (int l = 0; l < L; ++l) {
    for (int k = K - 1; k > 0; --k) {
      int j = static_cast<int>(r.next_u64() % static_cast<std::uint64_t>(k + 1));
      std::swap(assign.chi(l, k), assign.chi(l, j));
    }
    for (int k = 0; k < K; ++k)
      assign.power(l, k) = net.config.max_pilot_power_mw * net.config.pilot_len;
  }

  opt_result res;
  res.assignment = assign;
  res.alloc = from_assignment(assign, net.config.pilot_len);
  res.data_power_mw.assign(static_cast<std::size_t>(L) * K, net.config.max_data_power_mw);
  std::vector<double> s = exact_sinrs(net, cfg, res.alloc, res.data_power_mw);
  res.xi = res.xi_solver = *std::min_element(s.begin(), s.end());
  res.success = true;
  return res;
}

// Greedy interference-aware assignment at full power: cells in index order,
// each trying every within-cell permutation of users onto basis signals and
// keeping the one that maximizes the exact worst-user objective of the
// partially assigned network (cells not yet placed carry no power, so they
// neither interfere nor are scored). Ties keep the lexicographically first
// permutation, making the result deterministic.
inline opt_result baseline_smart(const network_realization &net, const opt_config &cfg) {
  cfg.validate();
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  if (net.config.pilot_len < K)
    throw unsupported_structure_error(
        "baseline_smart: pilot_len must be at least users_per_cell");
  const double pilot_full = net.config.max_pilot_power_mw * net.config.pilot_len;
  const double pd = net.config.max_data_power_mw;
  const int M = net.config.bs_antennas;
  const double noise = net.config.noise_mw;

  correlation_model cm;
  if (cfg.mode == objective_mode::correlated)
    cm = make_correlation_model(net, cfg.corr_magnitude);
  hardware_config hw{cfg.epsilon};

  pilot_assignment assign(L, K);  // powers stay zero until a cell is placed
  std::vector<double> data(static_cast<std::size_t>(L) * K, 0.0);
  auto partial_worst = [&](int cells_done) {
    pilot_allocation alloc = from_assignment(assign, net.config.pilot_len);
    double worst = std::numeric_limits<double>::infinity();
    for (int l = 0; l < cells_done; ++l)
      for (int k = 0; k < K; ++k) {
        double v = 0.0;
        switch (cfg.mode) {
          case objective_mode::ideal:
            v = sinr_general(net.beta, alloc, data, noise, M, l, k);
            break;
          case objective_mode::hardware:
            v = sinr_hardware(net.beta, alloc, data, noise, M, hw, l, k);
            break;
          case objective_mode::correlated:
            v = sinr_correlated(net.beta, cm, alloc, data, noise, M, l, k);
            break;
        }
        worst = std::min(worst, v);
      }
    return worst;
  };

  std::vector<int> perm(K), best(K);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) {
      assign.power(l, k) = pilot_full;
      data[static_cast<std::size_t>(l) * K + k] = pd;
    }
    for (int k = 0; k < K; ++k) perm[k] = k;
    double best_score = -1.0;
    do {
      for (int k = 0; k < K; ++k) assign.chi(l, k) = perm[k];
      double score = partial_worst(l + 1);
      if (score > best_score) {
        best_score = score;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int k = 0; k < K; ++k) assign.chi(l, k) = best[k];
  }

  opt_result res;
  res.assignment = assign;
  res.alloc = from_assignment(assign, net.config.pilot_len);
  res.data_power_mw.assign(static_cast<std::size_t>(L) * K, net.config.max_data_power_mw);
  std::vector<double> s = exact_sinrs(net, cfg, res.alloc, res.data_power_mw);
  res.xi = res.xi_solver = *std::min_element(s.begin(), s.end());
  res.success = true;
  return res;
}

}  // namespace pilotopt
