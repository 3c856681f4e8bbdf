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

#include <sstream>

#include "pilotopt/serialize.hpp"

using namespace pilotopt;
using Catch::Approx;

TEST_CASE("serialize - numbers survive a text round trip", "[serialize]") {
  CHECK(format_sig(0.1) == "0.10000000000000001");
  CHECK(format_sig(1.0) == "1");
  // 17 significant digits; parses back to the identical double.
  CHECK(format_sig(2.5118864315095795e-10) == std::string("2.5118864315095794e-10"));
  CHECK(std::stod(format_sig(2.5118864315095795e-10)) == 2.5118864315095795e-10);
  double v = 0.30000000000000004;
  CHECK(std::stod(format_sig(v)) == v);
}

TEST_CASE("serialize - csv rows are comma separated with newline", "[serialize]") {
  std::ostringstream os;
  write_csv_row(os, {"a", "b", "3"});
  write_csv_row(os, {"x"});
  CHECK(os.str() == "a,b,3\nx\n");
}

TEST_CASE("serialize - network configuration round trip", "[serialize]") {
  network_config c;
  c.num_cells = 3;
  c.bs_antennas = 77;
  c.noise_mw = 1.25e-10;
  c.min_bs_distance_km = 0.05;
  network_config d = network_config_from_json(to_json(c));
  CHECK(d.num_cells == c.num_cells);
  CHECK(d.users_per_cell == c.users_per_cell);
  CHECK(d.bs_antennas == c.bs_antennas);
  CHECK(d.pilot_len == c.pilot_len);
  CHECK(d.coherence_len == c.coherence_len);
  CHECK(d.noise_mw == c.noise_mw);
  CHECK(d.max_pilot_power_mw == c.max_pilot_power_mw);
  CHECK(d.min_bs_distance_km == c.min_bs_distance_km);
  CHECK(d.shadow_std_db == c.shadow_std_db);
  CHECK(d.pathloss_intercept_db == c.pathloss_intercept_db);
}

TEST_CASE("serialize - alternative units are accepted on input", "[serialize]") {
  nlohmann::json j = {{"noise_dbm", -96.0}, {"min_bs_distance_m", 35.0}};
  network_config c = network_config_from_json(j);
  CHECK(c.noise_mw == Approx(2.5118864315095795e-10).epsilon(1e-13));
  CHECK(c.min_bs_distance_km == Approx(0.035).epsilon(1e-15));
}

TEST_CASE("serialize - tensor round trip is exact", "[serialize]") {
  tensor3 t(2, 3, 2);
  for (std::size_t i = 0; i < t.flat().size(); ++i)
    t.flat()[i] = 0.1 * static_cast<double>(i) + 1e-10;
  tensor3 u = tensor3_from_json(to_json(t));
  REQUIRE(u.dim0() == 2u);
  REQUIRE(u.dim1() == 3u);
  REQUIRE(u.dim2() == 2u);
  CHECK(u.flat() == t.flat());
}

TEST_CASE("serialize - layout realization round trip", "[serialize]") {
  network_config cfg;
  cfg.num_cells = 2;
  cfg.users_per_cell = 2;
  cfg.bs_antennas = 30;
  cfg.pilot_len = 2;
  network_realization net = generate_layout(cfg, 99);
  network_realization back = network_realization_from_json(to_json(net));
  CHECK(back.seed == net.seed);
  CHECK(back.config.bs_antennas == 30);
  REQUIRE(back.bs_pos.size() == net.bs_pos.size());
  for (std::size_t i = 0; i < net.bs_pos.size(); ++i) {
    CHECK(back.bs_pos[i].x == net.bs_pos[i].x);
    CHECK(back.bs_pos[i].y == net.bs_pos[i].y);
  }
  REQUIRE(back.user_pos.size() == net.user_pos.size());
  CHECK(back.beta.flat() == net.beta.flat());
  CHECK(back.dist_km.flat() == net.dist_km.flat());
  CHECK(back.shadow_db.flat() == net.shadow_db.flat());
}

TEST_CASE("serialize - pilot structures round trip", "[serialize]") {
  pilot_allocation a(2, 2, 3);
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k)
      for (int b = 0; b < 3; ++b) a.p(l, k, b) = l * 100 + k * 10 + b + 0.5;
  pilot_allocation a2 = pilot_allocation_from_json(to_json(a));
  CHECK(a2.num_cells == 2);
  CHECK(a2.pilot_len == 3);
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k)
      for (int b = 0; b < 3; ++b) CHECK(a2.p(l, k, b) == a.p(l, k, b));

  pilot_assignment s(2, 2);
  s.chi(1, 0) = 1;
  s.chi(1, 1) = 0;
  s.power(0, 0) = 40.0;
  s.power(1, 1) = 123.456;
  pilot_assignment s2 = pilot_assignment_from_json(to_json(s));
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k) {
      CHECK(s2.chi(l, k) == s.chi(l, k));
      CHECK(s2.power(l, k) == s.power(l, k));
    }
}

TEST_CASE("serialize - optimizer results export their key fields", "[serialize]") {
  opt_result r;
  r.success = true;
  r.message = "ok";
  r.xi = 1.5;
  r.xi_solver = 1.4999;
  r.alloc = pilot_allocation(1, 1, 2);
  r.alloc.p(0, 0, 0) = 7.0;
  r.data_power_mw = {20.0};
  r.trace = {0.5, 1.0, 1.5};
  r.statuses = {gp_status::optimal, gp_status::optimal};
  r.best_index = 3;
  r.iterations = 3;
  r.assignment = pilot_assignment(1, 1);

  nlohmann::json j = to_json(r);
  CHECK(j.at("success").get<bool>());
  CHECK(j.at("xi").get<double>() == 1.5);
  CHECK(j.at("trace").size() == 3u);
  CHECK(j.at("statuses")[0].get<std::string>() == "optimal");
  CHECK(j.at("best_index").get<std::uint64_t>() == 3u);
  CHECK(j.at("iterations").get<int>() == 3);
  CHECK(j.contains("assignment"));
  CHECK(j.at("alloc").at("powers_mw")[0][0][0].get<double>() == 7.0);

  opt_result plain;
  CHECK(!to_json(plain).contains("assignment"));
}
