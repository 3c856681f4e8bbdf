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

#include <catch2/catch_amalgamated.hpp>

#include "pilotopt/optimize.hpp"

using namespace pilotopt;
using Catch::Approx;

namespace {

network_realization small_net(std::uint64_t seed, int L = 2, int K = 2, int M = 100) {
  network_config cfg;
  cfg.num_cells = L;
  cfg.users_per_cell = K;
  cfg.bs_antennas = M;
  cfg.pilot_len = K;
  return generate_layout(cfg, seed);
}

// Random interior allocation and data powers for evaluation-only tests.
struct eval_point {
  pilot_allocation alloc;
  std::vector<double> data;
  eval_point(const network_realization &net, std::uint64_t seed) {
    const int L = net.config.num_cells, K = net.config.users_per_cell;
    const int tp = net.config.pilot_len;
    alloc = pilot_allocation(L, K, tp);
    data.resize(static_cast<std::size_t>(L) * K);
    rng r(derive_seed(seed, 0, 0, 40));
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k) {
        for (int b = 0; b < tp; ++b)
          alloc.p(l, k, b) = r.uniform(0.05, 1.0) * net.config.max_pilot_power_mw;
        data[static_cast<std::size_t>(l) * K + k] =
            r.uniform(0.2, 1.0) * net.config.max_data_power_mw;
      }
  }
};

bool is_permutation_per_cell(const pilot_assignment &a) {
  for (int l = 0; l < a.num_cells; ++l) {
    std::vector<int> seen(a.users_per_cell, 0);
    for (int k = 0; k < a.users_per_cell; ++k) seen[a.chi(l, k)] += 1;
    for (int c : seen)
      if (c != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("optimize - configuration validation", "[optimize]") {
  opt_config cfg;
  cfg.sca_max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = opt_config{};
  cfg.sca_rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = opt_config{};
  cfg.epsilon = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = opt_config{};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("optimize - mode dispatch matches the underlying ratios", "[optimize]") {
  network_realization net = small_net(41);
  eval_point pt(net, 41);
  const int L = net.config.num_cells, K = net.config.users_per_cell;
  const int M = net.config.bs_antennas;
  const double noise = net.config.noise_mw;

  opt_config cfg;
  std::vector<double> ideal = exact_sinrs(net, cfg, pt.alloc, pt.data);
  cfg.mode = objective_mode::hardware;
  cfg.epsilon = 0.3;
  std::vector<double> hard = exact_sinrs(net, cfg, pt.alloc, pt.data);
  cfg.mode = objective_mode::correlated;
  cfg.corr_magnitude = 0.5;
  std::vector<double> corr = exact_sinrs(net, cfg, pt.alloc, pt.data);

  hardware_config hw{0.3};
  correlation_model cm = make_correlation_model(net, 0.5);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      std::size_t u = static_cast<std::size_t>(l) * K + k;
      CHECK(ideal[u] == sinr_general(net.beta, pt.alloc, pt.data, noise, M, l, k));
      CHECK(hard[u] == sinr_hardware(net.beta, pt.alloc, pt.data, noise, M, hw, l, k));
      CHECK(corr[u] == sinr_correlated(net.beta, cm, pt.alloc, pt.data, noise, M, l, k));
    }
}

TEST_CASE("optimize - fixed-structure program matches its own optimum", "[optimize]") {
  network_realization net = small_net(43);
  pilot_assignment assign(2, 2);
  assign.chi(1, 0) = 1;
  assign.chi(1, 1) = 0;
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k)
      assign.power(l, k) = net.config.max_pilot_power_mw * net.config.pilot_len;

  opt_config cfg;
  assignment_gp gp = build_maxmin_gp_assignment(net, assign, cfg);
  CHECK_NOTHROW(gp.prob.validate());
  gp_solution sol = solve(gp.prob, cfg.gp_tol);
  REQUIRE(sol.status == gp_status::optimal);
  double xi = sol.point[gp.layout.xi_var];
  CHECK(xi > 0.0);

  // Rebuild the allocation from the solved energies and recompute exactly.
  const double cap = net.config.max_pilot_power_mw * net.config.pilot_len;
  pilot_assignment solved = assign;
  std::vector<double> data(4);
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k) {
      double q = sol.point[gp.layout.pilot_var(l, k)];
      CHECK(q <= cap * (1.0 + 1e-8));
      solved.power(l, k) = std::min(q, cap);
      double p = sol.point[gp.layout.data_var(l, k)];
      CHECK(p <= net.config.max_data_power_mw * (1.0 + 1e-8));
      data[static_cast<std::size_t>(l) * 2 + k] =
          std::min(p, net.config.max_data_power_mw);
    }
  pilot_allocation alloc = from_assignment(solved, net.config.pilot_len);
  std::vector<double> s = exact_sinrs(net, cfg, alloc, data);
  double exact_min = *std::min_element(s.begin(), s.end());
  CHECK(exact_min >= xi * (1.0 - 1e-6));
  CHECK(exact_min == Approx(xi).epsilon(1e-3));
}

TEST_CASE("optimize - enumeration picks the best candidate", "[optimize]") {
  network_realization net = small_net(47, 3, 2, 50);
  opt_config cfg;
  opt_result res = solve_exhaustive(net, cfg);
  REQUIRE(res.success);
  REQUIRE(res.assignment.has_value());
  CHECK(is_permutation_per_cell(*res.assignment));
  CHECK(res.iterations == 4);  // (2!)^(3-1) candidates, first cell pinned
  REQUIRE(res.trace.size() == 4u);

  // Re-solving every candidate by hand must reproduce the trace and the max.
  assignment_enumerator en(3, 2, cfg.enumeration_cap);
  REQUIRE(en.size() == 4u);
  double best = -1.0;
  std::uint64_t best_idx = 0;
  for (std::uint64_t idx = 0; idx < en.size(); ++idx) {
    assignment_gp gp = build_maxmin_gp_assignment(net, en.at(idx), cfg);
    gp_solution sol = solve(gp.prob, cfg.gp_tol);
    REQUIRE(sol.status == gp_status::optimal);
    double xi = sol.point[gp.layout.xi_var];
    CHECK(res.trace[idx] == Approx(xi).epsilon(1e-12));
    if (xi > best * (1.0 + 1e-12)) {
      best = xi;
      best_idx = idx;
    }
  }
  CHECK(res.best_index == best_idx);
  CHECK(res.xi_solver == Approx(best).epsilon(1e-12));
  CHECK(res.xi == Approx(best).epsilon(1e-3));
}

TEST_CASE("optimize - enumeration cap aborts oversized searches", "[optimize]") {
  network_realization net = small_net(53, 4, 2, 50);
  opt_config cfg;
  cfg.enumeration_cap = 2;  // (2!)^3 = 8 candidates exceed this
  CHECK_THROWS_AS(solve_exhaustive(net, cfg), enumeration_cap_error);
}

TEST_CASE("optimize - iterated approximation improves monotonically", "[optimize]") {
  network_realization net = small_net(3);
  opt_config cfg;
  cfg.init_seed = 7;
  opt_result res = solve_sca(net, cfg);
  REQUIRE(res.success);
  REQUIRE(!res.trace.empty());
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i] >= res.trace[i - 1] * (1.0 - 1e-6) - 1e-12);
  CHECK(res.xi == Approx(res.xi_solver).epsilon(1e-3));

  // Returned powers respect the caps.
  auto ok = check_power_constraint(res.alloc, net.config.max_pilot_power_mw);
  for (auto flag : ok) CHECK(flag == 1);
  for (double p : res.data_power_mw) {
    CHECK(p > 0.0);
    CHECK(p <= net.config.max_data_power_mw);
  }
}

TEST_CASE("optimize - pilot-only mode pins the data powers", "[optimize]") {
  network_realization net = small_net(5);
  opt_config cfg;
  cfg.powers = power_mode::pilot_only;
  cfg.init_seed = 9;
  opt_result res = solve_sca(net, cfg);
  REQUIRE(res.success);
  const double expect = net.config.max_data_power_mw * (1.0 - 1e-9);
  for (double p : res.data_power_mw) CHECK(p == expect);
}

TEST_CASE("optimize - seeded searches are reproducible", "[optimize]") {
  network_realization net = small_net(7);
  opt_config cfg;
  cfg.init_seed = 13;
  opt_result a = solve_sca(net, cfg);
  opt_result b = solve_sca(net, cfg);
  REQUIRE(a.success);
  REQUIRE(b.success);
  CHECK(a.xi == b.xi);
  CHECK(a.trace == b.trace);
  CHECK(a.data_power_mw == b.data_power_mw);
  cfg.init_seed = 14;
  opt_result c = solve_sca(net, cfg);
  REQUIRE(c.success);
  CHECK(c.trace.front() != a.trace.front());
}

TEST_CASE("optimize - random baseline draws valid full-power assignments", "[optimize]") {
  network_realization net = small_net(11, 3, 3, 50);
  opt_config cfg;
  opt_result a = baseline_random(net, cfg, 1);
  opt_result b = baseline_random(net, cfg, 1);
  REQUIRE(a.success);
  REQUIRE(a.assignment.has_value());
  CHECK(is_permutation_per_cell(*a.assignment));
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k) {
      CHECK(a.assignment->chi(l, k) == b.assignment->chi(l, k));
      CHECK(a.assignment->power(l, k) ==
            net.config.max_pilot_power_mw * net.config.pilot_len);
    }
  for (double p : a.data_power_mw) CHECK(p == net.config.max_data_power_mw);

  bool differs = false;
  for (std::uint64_t s = 2; s <= 6 && !differs; ++s) {
    opt_result c = baseline_random(net, cfg, s);
    for (int l = 0; l < 3 && !differs; ++l)
      for (int k = 0; k < 3 && !differs; ++k)
        differs = c.assignment->chi(l, k) != a.assignment->chi(l, k);
  }
  CHECK(differs);

  // Reported objective equals the exact recomputation.
  std::vector<double> s = exact_sinrs(net, cfg, a.alloc, a.data_power_mw);
  CHECK(a.xi == *std::min_element(s.begin(), s.end()));
}

TEST_CASE("optimize - greedy baseline is deterministic and valid", "[optimize]") {
  network_realization net = small_net(13, 4, 2, 50);
  opt_config cfg;
  opt_result a = baseline_smart(net, cfg);
  opt_result b = baseline_smart(net, cfg);
  REQUIRE(a.success);
  REQUIRE(a.assignment.has_value());
  CHECK(is_permutation_per_cell(*a.assignment));
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 2; ++k) CHECK(a.assignment->chi(l, k) == b.assignment->chi(l, k));
  std::vector<double> s = exact_sinrs(net, cfg, a.alloc, a.data_power_mw);
  CHECK(a.xi == *std::min_element(s.begin(), s.end()));
}

TEST_CASE("optimize - distortion-aware enumeration stays consistent", "[optimize]") {
  network_realization net = small_net(17, 2, 2, 50);
  opt_config cfg;
  cfg.mode = objective_mode::hardware;
  cfg.epsilon = 0.1;
  opt_result res = solve_exhaustive(net, cfg);
  REQUIRE(res.success);
  CHECK(res.xi == Approx(res.xi_solver).epsilon(1e-3));

  opt_config ideal;
  opt_result clean = solve_exhaustive(net, ideal);
  REQUIRE(clean.success);
  CHECK(res.xi < clean.xi);
}
