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

#include "pilotopt/network.hpp"

using namespace pilotopt;
using Catch::Approx;

TEST_CASE("network - distance-based attenuation", "[network]") {
  CHECK(pathloss_db(0.1) == Approx(-110.5));
  CHECK(pathloss_db(1.0) == Approx(-148.1));
  CHECK(pathloss_db(0.035) == Approx(-93.35695846757037).epsilon(1e-12));
  // Custom intercept and slope.
  CHECK(pathloss_db(0.1, -100.0, 20.0) == Approx(-80.0));
}

TEST_CASE("network - wrapped torus distances", "[network]") {
  // Opposite corners of the unit square are close on the torus.
  CHECK(wraparound_distance({0.05, 0.05}, {0.95, 0.95}, 1.0) ==
        Approx(std::hypot(0.1, 0.1)));
  CHECK(wraparound_distance({0.0, 0.0}, {0.5, 0.0}, 1.0) == Approx(0.5));
  CHECK(wraparound_distance({0.1, 0.2}, {0.1, 0.2}, 1.0) == Approx(0.0));
  // Offsets are reported in [-side/2, side/2).
  position d = wraparound_offset({0.0, 0.0}, {0.75, 0.0}, 1.0);
  CHECK(d.x == Approx(-0.25));
  CHECK(d.y == Approx(0.0));
}

TEST_CASE("network - grid factorization", "[network]") {
  int nx = 0, ny = 0;
  grid_shape(4, nx, ny);
  CHECK(nx == 2);
  CHECK(ny == 2);
  grid_shape(2, nx, ny);
  CHECK(nx == 2);
  CHECK(ny == 1);
  grid_shape(6, nx, ny);
  CHECK(nx == 3);
  CHECK(ny == 2);
  grid_shape(9, nx, ny);
  CHECK(nx == 3);
  CHECK(ny == 3);
  grid_shape(5, nx, ny);
  CHECK(nx == 5);
  CHECK(ny == 1);
}

TEST_CASE("network - configuration validation aggregates problems", "[network]") {
  network_config c;
  CHECK_NOTHROW(c.validate());
  c.num_cells = 0;
  c.pilot_len = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  network_config d;
  d.coherence_len = d.pilot_len;  // no data symbols left
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  network_config e;
  e.noise_mw = -1.0;
  CHECK_THROWS_AS(e.validate(), std::invalid_argument);
}

TEST_CASE("network - layout generation is reproducible", "[network]") {
  network_config cfg;
  cfg.num_cells = 4;
  cfg.users_per_cell = 3;
  network_realization a = generate_layout(cfg, 17);
  network_realization b = generate_layout(cfg, 17);
  network_realization c = generate_layout(cfg, 18);
  CHECK(a.beta.flat() == b.beta.flat());
  CHECK(a.shadow_db.flat() == b.shadow_db.flat());
  CHECK(a.beta.flat() != c.beta.flat());
}

TEST_CASE("network - base stations sit on the cell grid", "[network]") {
  network_config cfg;
  cfg.num_cells = 4;
  cfg.area_side_km = 1.0;
  network_realization net = generate_layout(cfg, 1);
  REQUIRE(net.bs_pos.size() == 4u);
  // 2x2 grid of 0.5 km cells: centers at 0.25 and 0.75 on each axis.
  for (const position &p : net.bs_pos) {
    CHECK((p.x == Approx(0.25) || p.x == Approx(0.75)));
    CHECK((p.y == Approx(0.25) || p.y == Approx(0.75)));
  }
}

TEST_CASE("network - users respect the exclusion radius", "[network]") {
  network_config cfg;
  cfg.num_cells = 4;
  cfg.users_per_cell = 8;
  network_realization net = generate_layout(cfg, 23);
  for (int l = 0; l < cfg.num_cells; ++l)
    for (int k = 0; k < cfg.users_per_cell; ++k) {
      CHECK(net.dist_km(l, l, k) >= cfg.min_bs_distance_km);
      // Recorded distance matches the wrapped geometry.
      CHECK(net.dist_km(l, l, k) ==
            Approx(wraparound_distance(net.bs_pos[l], net.user(l, k), cfg.area_side_km)));
    }
}

TEST_CASE("network - home link dominates after shadow redraw", "[network]") {
  network_config cfg;
  cfg.num_cells = 4;
  cfg.users_per_cell = 4;
  network_realization net = generate_layout(cfg, 31);
  for (int i = 0; i < cfg.num_cells; ++i)
    for (int t = 0; t < cfg.users_per_cell; ++t)
      for (int l = 0; l < cfg.num_cells; ++l)
        CHECK(net.beta(i, i, t) >= net.beta(l, i, t));
}

TEST_CASE("network - gains combine attenuation and shadowing", "[network]") {
  network_config cfg;
  cfg.num_cells = 2;
  cfg.users_per_cell = 2;
  network_realization net = generate_layout(cfg, 7);
  for (int l = 0; l < cfg.num_cells; ++l)
    for (int i = 0; i < cfg.num_cells; ++i)
      for (int t = 0; t < cfg.users_per_cell; ++t) {
        double expected =
            db_to_linear(pathloss_db(net.dist_km(l, i, t), cfg.pathloss_intercept_db,
                                     cfg.pathloss_slope_db) +
                         net.shadow_db(l, i, t));
        CHECK(net.beta(l, i, t) == Approx(expected).epsilon(1e-12));
      }
}
