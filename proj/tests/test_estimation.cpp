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

#include "pilotopt/estimation.hpp"
#include "pilotopt/network.hpp"
#include "pilotopt/rng.hpp"

using namespace pilotopt;
using Catch::Approx;

namespace {

// Single cell, two users sharing the first basis dimension.
// beta = {2, 0.5}, pilots u0 = [4, 0], u1 = [1, 0], noise 1 mW.
struct shared_pilot_fixture {
  tensor3 beta{1, 1, 2};
  pilot_allocation alloc{1, 2, 2};
  double noise = 1.0;
  shared_pilot_fixture() {
    beta(0, 0, 0) = 2.0;
    beta(0, 0, 1) = 0.5;
    alloc.p(0, 0, 0) = 4.0;
    alloc.p(0, 1, 0) = 1.0;
  }
};

}  // namespace

TEST_CASE("estimation - clean-hardware estimate statistics", "[estimation]") {
  shared_pilot_fixture f;
  // Gain denominator: 2*16 + 0.5*4 + 1*4 = 38.
  estimation_stats st = mmse_stats(f.beta, f.alloc, f.noise, 0, 0);
  CHECK(st.coef == Approx(8.0 / 38.0).epsilon(1e-14));
  CHECK(st.estimate_var == Approx(64.0 / 38.0).epsilon(1e-14));
  CHECK(st.error_var == Approx(12.0 / 38.0).epsilon(1e-14));
  CHECK(st.error_independent);
  // Variances always split the channel gain.
  estimation_stats st1 = mmse_stats(f.beta, f.alloc, f.noise, 0, 1);
  CHECK(st1.estimate_var + st1.error_var == Approx(0.5).epsilon(1e-14));
  CHECK(st1.estimate_var < st.estimate_var);
}

TEST_CASE("estimation - zero pilot energy", "[estimation]") {
  shared_pilot_fixture f;
  f.alloc.p(0, 1, 0) = 0.0;
  CHECK_THROWS_AS(mmse_stats(f.beta, f.alloc, f.noise, 0, 1), degenerate_pilot_error);
  estimation_stats st = mmse_stats_safe(f.beta, f.alloc, f.noise, 0, 1);
  CHECK(st.coef == 0.0);
  CHECK(st.estimate_var == 0.0);
  CHECK(st.error_var == Approx(0.5));
  // The other user is unaffected by the safe path.
  CHECK(mmse_stats_safe(f.beta, f.alloc, f.noise, 0, 0).estimate_var > 0.0);
}

TEST_CASE("estimation - assignment form matches the expanded form", "[estimation]") {
  // Two cells, one user each, both on pilot 0.
  tensor3 beta(2, 2, 1);
  beta(0, 0, 0) = 2.0;
  beta(0, 1, 0) = 0.5;
  beta(1, 0, 0) = 0.1;
  beta(1, 1, 0) = 1.5;
  pilot_assignment assign(2, 1);
  assign.power(0, 0) = 4.0;
  assign.power(1, 0) = 9.0;

  estimation_stats st = mmse_stats_assignment(beta, assign, 1.0, 0, 0);
  // Denominator: 2*4 + 0.5*9 + 1 = 13.5.
  CHECK(st.coef == Approx(2.0 / 13.5).epsilon(1e-14));
  CHECK(st.estimate_var == Approx(16.0 / 13.5).epsilon(1e-14));

  pilot_allocation alloc = from_assignment(assign, 1);
  estimation_stats gen = mmse_stats(beta, alloc, 1.0, 0, 0);
  CHECK(st.estimate_var == Approx(gen.estimate_var).epsilon(1e-12));
  CHECK(st.error_var == Approx(gen.error_var).epsilon(1e-12));
  CHECK(st.coef == Approx(gen.coef).epsilon(1e-12));
}

TEST_CASE("estimation - distorted hardware reduces the estimate", "[estimation]") {
  shared_pilot_fixture f;
  hardware_config hw{0.5};  // epsilon^2 = 0.25
  hw_estimation_stats st = lmmse_stats_hw(f.beta, f.alloc, f.noise, hw, 0, 0);
  // kappa self: 0.75*16 + 0.25*16 = 16; cross: 0.75*4 + 0.25*4 = 4.
  REQUIRE(st.kappa.size() == 2u);
  CHECK(st.kappa[0] == Approx(16.0).epsilon(1e-14));
  CHECK(st.kappa[1] == Approx(4.0).epsilon(1e-14));
  // Observation power: 2*16 + 0.5*4 + 1*4 = 38.
  CHECK(st.obs_power == Approx(38.0).epsilon(1e-14));
  CHECK(st.stats.coef == Approx(std::sqrt(0.75) * 2.0 * 4.0 / 38.0).epsilon(1e-14));
  CHECK(st.stats.estimate_var == Approx(0.75 * 4.0 * 16.0 / 38.0).epsilon(1e-14));
  CHECK_FALSE(st.stats.error_independent);

  // Less estimate power than with clean hardware.
  estimation_stats clean = mmse_stats(f.beta, f.alloc, f.noise, 0, 0);
  CHECK(st.stats.estimate_var < clean.estimate_var);
}

TEST_CASE("estimation - zero distortion is bit-identical to clean hardware",
          "[estimation]") {
  network_config cfg;
  cfg.num_cells = 2;
  cfg.users_per_cell = 2;
  network_realization net = generate_layout(cfg, 3);
  pilot_allocation alloc(2, 2, 2);
  rng r(77);
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k)
      for (int b = 0; b < 2; ++b) alloc.p(l, k, b) = r.uniform(1.0, 200.0);

  hardware_config hw{0.0};
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k) {
      hw_estimation_stats a =
          lmmse_stats_hw(net.beta, alloc, cfg.noise_mw, hw, l, k);
      estimation_stats b = mmse_stats(net.beta, alloc, cfg.noise_mw, l, k);
      CHECK(a.stats.coef == b.coef);
      CHECK(a.stats.estimate_var == b.estimate_var);
      CHECK(a.stats.error_var == b.error_var);
      CHECK(a.stats.error_independent);
    }
}

TEST_CASE("estimation - elementwise gain under correlation", "[estimation]") {
  shared_pilot_fixture f;
  // With uncorrelated antennas the elementwise gain is the scalar gain.
  CHECK(elementwise_mmse_coef_corr(f.beta, f.alloc, f.noise, 0, 0) ==
        Approx(mmse_stats(f.beta, f.alloc, f.noise, 0, 0).coef).epsilon(1e-14));
}
