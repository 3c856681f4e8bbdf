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

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pilotopt/common.hpp"
#include "pilotopt/network.hpp"
#include "pilotopt/optimize.hpp"
#include "pilotopt/pilots.hpp"

namespace pilotopt {

// All floating-point text output carries 17 significant digits, enough to
// reproduce the exact double on read-back.
inline std::string format_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_csv_row(std::ostream &os, const std::vector<std::string> &cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

inline nlohmann::json to_json(const network_config &c) {
  return {{"num_cells", c.num_cells},
          {"users_per_cell", c.users_per_cell},
          {"bs_antennas", c.bs_antennas},
          {"pilot_len", c.pilot_len},
          {"coherence_len", c.coherence_len},
          {"noise_mw", c.noise_mw},
          {"max_pilot_power_mw", c.max_pilot_power_mw},
          {"max_data_power_mw", c.max_data_power_mw},
          {"area_side_km", c.area_side_km},
          {"min_bs_distance_km", c.min_bs_distance_km},
          {"shadow_std_db", c.shadow_std_db},
          {"pathloss_intercept_db", c.pathloss_intercept_db},
          {"pathloss_slope_db", c.pathloss_slope_db}};
}

inline network_config network_config_from_json(const nlohmann::json &j) {
  network_config c;
  c.num_cells = j.value("num_cells", c.num_cells);
  c.users_per_cell = j.value("users_per_cell", c.users_per_cell);
  c.bs_antennas = j.value("bs_antennas", c.bs_antennas);
  c.pilot_len = j.value("pilot_len", c.pilot_len);
  c.coherence_len = j.value("coherence_len", c.coherence_len);
  c.noise_mw = j.value("noise_mw", c.noise_mw);
  if (j.contains("noise_dbm")) c.noise_mw = dbm_to_mw(j["noise_dbm"].get<double>());
  c.max_pilot_power_mw = j.value("max_pilot_power_mw", c.max_pilot_power_mw);
  c.max_data_power_mw = j.value("max_data_power_mw", c.max_data_power_mw);
  c.area_side_km = j.value("area_side_km", c.area_side_km);
  c.min_bs_distance_km = j.value("min_bs_distance_km", c.min_bs_distance_km);
  if (j.contains("min_bs_distance_m"))
    c.min_bs_distance_km = j["min_bs_distance_m"].get<double>() / 1000.0;
  c.shadow_std_db = j.value("shadow_std_db", c.shadow_std_db);
  c.pathloss_intercept_db = j.value("pathloss_intercept_db", c.pathloss_intercept_db);
  c.pathloss_slope_db = j.value("pathloss_slope_db", c.pathloss_slope_db);
  return c;
}

inline nlohmann::json to_json(const tensor3 &t) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < t.dim0(); ++i) {
    nlohmann::json mid = nlohmann::json::array();
    for (std::size_t j = 0; j < t.dim1(); ++j) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t k = 0; k < t.dim2(); ++k) row.push_back(t(i, j, k));
      mid.push_back(std::move(row));
    }
    out.push_back(std::move(mid));
  }
  return out;
}

inline tensor3 tensor3_from_json(const nlohmann::json &j) {
  std::size_t n0 = j.size();
  std::size_t n1 = n0 ? j[0].size() : 0;
  std::size_t n2 = n1 ? j[0][0].size() : 0;
  tensor3 t(n0, n1, n2);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = 0; b < n2; ++b) t(i, a, b) = j[i][a][b].get<double>();
  return t;
}

inline nlohmann::json to_json(const network_realization &net) {
  nlohmann::json bs = nlohmann::json::array(), us = nlohmann::json::array();
  for (const position &p : net.bs_pos) bs.push_back({p.x, p.y});
  for (const position &p : net.user_pos) us.push_back({p.x, p.y});
  return {{"config", to_json(net.config)}, {"seed", net.seed},
          {"bs_pos", bs},                  {"user_pos", us},
          {"beta", to_json(net.beta)},     {"dist_km", to_json(net.dist_km)},
          {"shadow_db", to_json(net.shadow_db)}};
}

inline network_realization network_realization_from_json(const nlohmann::json &j) {
  network_realization net;
  net.config = network_config_from_json(j.at("config"));
  net.seed = j.value("seed", 0ULL);
  for (const auto &p : j.at("bs_pos"))
    net.bs_pos.push_back({p[0].get<double>(), p[1].get<double>()});
  for (const auto &p : j.at("user_pos"))
    net.user_pos.push_back({p[0].get<double>(), p[1].get<double>()});
  net.beta = tensor3_from_json(j.at("beta"));
  net.dist_km = tensor3_from_json(j.at("dist_km"));
  net.shadow_db = tensor3_from_json(j.at("shadow_db"));
  return net;
}

inline nlohmann::json to_json(const pilot_allocation &a) {
  nlohmann::json powers = nlohmann::json::array();
  for (int l = 0; l < a.num_cells; ++l) {
    nlohmann::json cell = nlohmann::json::array();
    for (int k = 0; k < a.users_per_cell; ++k) {
      nlohmann::json user = nlohmann::json::array();
      for (int b = 0; b < a.pilot_len; ++b) user.push_back(a.p(l, k, b));
      cell.push_back(std::move(user));
    }
    powers.push_back(std::move(cell));
  }
  return {{"num_cells", a.num_cells},
          {"users_per_cell", a.users_per_cell},
          {"pilot_len", a.pilot_len},
          {"powers_mw", powers}};
}

inline pilot_allocation pilot_allocation_from_json(const nlohmann::json &j) {
  pilot_allocation a(j.at("num_cells").get<int>(), j.at("users_per_cell").get<int>(),
                     j.at("pilot_len").get<int>());
  const auto &powers = j.at("powers_mw");
  for (int l = 0; l < a.num_cells; ++l)
    for (int k = 0; k < a.users_per_cell; ++k)
      for (int b = 0; b < a.pilot_len; ++b)
        a.p(l, k, b) = powers[l][k][b].get<double>();
  return a;
}

inline nlohmann::json to_json(const pilot_assignment &a) {
  nlohmann::json idx = nlohmann::json::array(), pw = nlohmann::json::array();
  for (int l = 0; l < a.num_cells; ++l) {
    nlohmann::json ri = nlohmann::json::array(), rp = nlohmann::json::array();
    for (int k = 0; k < a.users_per_cell; ++k) {
      ri.push_back(a.chi(l, k));
      rp.push_back(a.power(l, k));
    }
    idx.push_back(std::move(ri));
    pw.push_back(std::move(rp));
  }
  return {{"num_cells", a.num_cells},
          {"users_per_cell", a.users_per_cell},
          {"index", idx},
          {"power_mw", pw}};
}

inline pilot_assignment pilot_assignment_from_json(const nlohmann::json &j) {
  pilot_assignment a(j.at("num_cells").get<int>(), j.at("users_per_cell").get<int>());
  for (int l = 0; l < a.num_cells; ++l)
    for (int k = 0; k < a.users_per_cell; ++k) {
      a.chi(l, k) = j.at("index")[l][k].get<int>();
      a.power(l, k) = j.at("power_mw")[l][k].get<double>();
    }
  return a;
}

inline nlohmann::json to_json(const opt_result &r) {
  nlohmann::json statuses = nlohmann::json::array();
  for (gp_status s : r.statuses) statuses.push_back(to_string(s));
  nlohmann::json out = {{"success", r.success},
                        {"message", r.message},
                        {"xi", r.xi},
                        {"xi_solver", r.xi_solver},
                        {"alloc", to_json(r.alloc)},
                        {"data_power_mw", r.data_power_mw},
                        {"trace", r.trace},
                        {"statuses", statuses},
                        {"best_index", r.best_index},
                        {"iterations", r.iterations}};
  if (r.assignment) out["assignment"] = to_json(*r.assignment);
  return out;
}

}  // namespace pilotopt
