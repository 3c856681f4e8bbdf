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
#include <cstdint>
#include <string>
#include <vector>

#include "pilotopt/common.hpp"
#include "pilotopt/rng.hpp"

namespace pilotopt {

struct position {
  double x = 0.0;  // km
  double y = 0.0;  // km
};

struct network_config {
  int num_cells = 4;        // L
  int users_per_cell = 2;   // K
  int bs_antennas = 300;    // M
  int pilot_len = 2;        // symbols per coherence block spent on pilots
  int coherence_len = 200;  // symbols per coherence block

  double noise_mw = 2.5118864315095795e-10;  // -96 dBm
  double max_pilot_power_mw = 200.0;         // per-symbol average cap
  double max_data_power_mw = 200.0;

  double area_side_km = 1.0;
  double min_bs_distance_km = 0.035;
  double shadow_std_db = 7.0;

  // Distance-based loss in dB: intercept - slope * log10(d_km).
  double pathloss_intercept_db = -148.1;
  double pathloss_slope_db = 37.6;

  void validate() const {
    std::string err;
    auto fail = [&err](const std::string &m) { err += (err.empty() ? "" : "; ") + m; };
    if (num_cells < 1) fail("num_cells must be >= 1");
    if (users_per_cell < 1) fail("users_per_cell must be >= 1");
    if (bs_antennas < 1) fail("bs_antennas must be >= 1");
    if (pilot_len < 1) fail("pilot_len must be >= 1");
    if (coherence_len <= pilot_len) fail("coherence_len must exceed pilot_len");
    if (!(noise_mw > 0.0)) fail("noise_mw must be positive");
    if (!(max_pilot_power_mw > 0.0)) fail("max_pilot_power_mw must be positive");
    if (!(max_data_power_mw > 0.0)) fail("max_data_power_mw must be positive");
    if (!(area_side_km > 0.0)) fail("area_side_km must be positive");
    if (min_bs_distance_km < 0.0) fail("min_bs_distance_km must be nonnegative");
    if (min_bs_distance_km >= 0.5 * area_side_km)
      fail("min_bs_distance_km must be below half the area side");
    if (shadow_std_db < 0.0) fail("shadow_std_db must be nonnegative");
    if (!err.empty()) throw std::invalid_argument("network_config: " + err);
  }
};

// Distance-based loss for the default urban macro model, d in km.
inline double pathloss_db(double distance_km, double intercept_db = -148.1,
                          double slope_db = 37.6) {
  if (!(distance_km > 0.0))
    throw std::domain_error("pathloss_db: distance must be positive");
  return intercept_db - slope_db * std::log10(distance_km);
}

// Shortest displacement from a to b on the wrapped square area (per axis the
// representative in [-side/2, side/2)).
inline position wraparound_offset(const position &a, const position &b, double side_km) {
  auto wrap = [side_km](double d) {
    d = std::fmod(d, side_km);
    if (d < -0.5 * side_km) d += side_km;
    if (d >= 0.5 * side_km) d -= side_km;
    return d;
  };
  return {wrap(b.x - a.x), wrap(b.y - a.y)};
}

inline double wraparound_distance(const position &a, const position &b, double side_km) {
  position d = wraparound_offset(a, b, side_km);
  return std::hypot(d.x, d.y);
}

// Factorization of L into a grid nx * ny with ny the largest divisor <= sqrt(L).
inline void grid_shape(int num_cells, int &nx, int &ny) {
  ny = 1;
  for (int d = static_cast<int>(std::sqrt(static_cast<double>(num_cells))); d >= 1; --d) {
    if (num_cells % d == 0) {
      ny = d;
      break;
    }
  }
  nx = num_cells / ny;
}

struct network_realization {
  network_config config;
  std::uint64_t seed = 0;
  std::vector<position> bs_pos;    // [L]
  std::vector<position> user_pos;  // [l * K + k]
  // Index order is [observing BS l][user cell i][user index t].
  tensor3 beta;       // linear large-scale gain
  tensor3 dist_km;    // wrapped distance
  tensor3 shadow_db;  // accepted shadow realization

  int num_users() const { return config.num_cells * config.users_per_cell; }
  const position &user(int cell, int k) const {
    return user_pos[static_cast<std::size_t>(cell) * config.users_per_cell + k];
  }
};

namespace detail {
constexpr int kShadowRetryCap = 1000;
constexpr long kPlacementRetryCap = 1000000;
}  // namespace detail

// Draws a network layout: base stations on a fixed grid, users uniform in
// their own cell outside the exclusion radius, log-normal shadowing redrawn
// per user until the home link has the largest gain.
inline network_realization generate_layout(const network_config &cfg, std::uint64_t seed) {
  cfg.validate();
  const int L = cfg.num_cells, K = cfg.users_per_cell;
  const double side = cfg.area_side_km;

  network_realization net;
  net.config = cfg;
  net.seed = seed;

  int nx = 1, ny = 1;
  grid_shape(L, nx, ny);
  const double cw = side / nx, ch = side / ny;

  net.bs_pos.resize(L);
  for (int l = 0; l < L; ++l) {
    int cx = l % nx, cy = l / nx;
    net.bs_pos[l] = {(cx + 0.5) * cw, (cy + 0.5) * ch};
  }

  net.user_pos.resize(static_cast<std::size_t>(L) * K);
  net.beta = tensor3(L, L, K);
  net.dist_km = tensor3(L, L, K);
  net.shadow_db = tensor3(L, L, K);

  for (int l = 0; l < L; ++l) {
    int cx = l % nx, cy = l / nx;
    for (int k = 0; k < K; ++k) {
      // Position stream: uniform in the cell, outside the exclusion radius.
      rng pos_rng(derive_seed(seed, l, k, 0));
      position pos{};
      long tries = 0;
      for (;;) {
        if (++tries > detail::kPlacementRetryCap)
          throw generation_error("generate_layout: placement retries exhausted for cell " +
                                 std::to_string(l) + " user " + std::to_string(k));
        pos = {cx * cw + pos_rng.uniform() * cw, cy * ch + pos_rng.uniform() * ch};
        if (wraparound_distance(pos, net.bs_pos[l], side) >= cfg.min_bs_distance_km) break;
      }
      net.user_pos[static_cast<std::size_t>(l) * K + k] = pos;

      std::vector<double> d(L), pl(L);
      for (int i = 0; i < L; ++i) {
        d[i] = wraparound_distance(pos, net.bs_pos[i], side);
        pl[i] = pathloss_db(d[i], cfg.pathloss_intercept_db, cfg.pathloss_slope_db);
      }

      // Shadow stream: redraw the whole vector until the home gain dominates.
      rng sh_rng(derive_seed(seed, l, k, 1));
      std::vector<double> z(L), g(L);
      int attempts = 0;
      for (;;) {
        if (++attempts > detail::kShadowRetryCap)
          throw generation_error("generate_layout: shadowing retries exhausted for cell " +
                                 std::to_string(l) + " user " + std::to_string(k));
        bool home_best = true;
        for (int i = 0; i < L; ++i) {
          z[i] = cfg.shadow_std_db * sh_rng.normal();
          g[i] = db_to_linear(pl[i] + z[i]);
        }
        for (int i = 0; i < L && home_best; ++i)
          if (g[i] > g[l]) home_best = false;
        if (home_best) break;
      }

      for (int i = 0; i < L; ++i) {
        net.beta(i, l, k) = g[i];
        net.dist_km(i, l, k) = d[i];
        net.shadow_db(i, l, k) = z[i];
      }
    }
  }
  return net;
}

}  // namespace pilotopt
