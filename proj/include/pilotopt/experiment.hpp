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
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pilotopt/common.hpp"
#include "pilotopt/montecarlo.hpp"
#include "pilotopt/network.hpp"
#include "pilotopt/optimize.hpp"
#include "pilotopt/serialize.hpp"
#include "pilotopt/threading.hpp"

namespace pilotopt {

// Process exit codes shared by the command-line front end.
constexpr int exit_ok = 0;
constexpr int exit_spec_error = 2;
constexpr int exit_solver_error = 3;
constexpr int exit_validation_failure = 4;

struct sweep_axis {
  std::string name;  // antennas, users_per_cell, pilot_len, epsilon, corr_magnitude
  std::vector<double> values;
};

struct experiment_spec {
  network_config network;
  opt_config opt;
  mc_config mc;
  std::vector<std::string> methods = {"random", "smart", "sca_joint"};
  int realizations = 50;       // independent layout draws per sweep point
  int random_assignments = 5;  // extra draws for the random baseline
  std::vector<sweep_axis> sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const {
    network.validate();
    opt.validate();
    if (realizations < 1)
      throw std::invalid_argument("experiment_spec: realizations must be >= 1");
    if (random_assignments < 1)
      throw std::invalid_argument("experiment_spec: random_assignments must be >= 1");
    if (methods.empty()) throw std::invalid_argument("experiment_spec: no methods listed");
    for (const std::string &m : methods)
      if (m != "random" && m != "smart" && m != "exhaustive_pilot_only" &&
          m != "exhaustive_joint" && m != "sca_pilot_only" && m != "sca_joint")
        throw std::invalid_argument("experiment_spec: unknown method '" + m + "'");
    for (const sweep_axis &ax : sweep) {
      if (ax.name != "antennas" && ax.name != "users_per_cell" && ax.name != "pilot_len" &&
          ax.name != "epsilon" && ax.name != "corr_magnitude")
        throw std::invalid_argument("experiment_spec: unknown sweep axis '" + ax.name + "'");
      if (ax.values.empty())
        throw std::invalid_argument("experiment_spec: empty sweep axis '" + ax.name + "'");
    }
  }
};

namespace expdetail {

inline std::string trim(const std::string &s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

inline double to_double(const std::string &s, const std::string &key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw std::invalid_argument("spec: cannot parse number '" + s + "' for " + key);
  }
}

inline objective_mode mode_from_string(const std::string &s) {
  if (s == "ideal") return objective_mode::ideal;
  if (s == "hardware") return objective_mode::hardware;
  if (s == "correlated") return objective_mode::correlated;
  throw std::invalid_argument("spec: unknown mode '" + s + "'");
}

// Minimal INI reader: [section] headers, key = value lines, # or ; comments.
inline std::map<std::string, std::map<std::string, std::string>> parse_ini(
    const std::string &text) {
  std::map<std::string, std::map<std::string, std::string>> out;
  std::string section = "";
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("spec: bad section header at line " +
                                    std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("spec: expected key = value at line " +
                                  std::to_string(lineno));
    out[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

inline void apply_network(network_config &c,
                          const std::map<std::string, std::string> &kv) {
  for (const auto &[key, val] : kv) {
    if (key == "cells" || key == "num_cells")
      c.num_cells = static_cast<int>(to_double(val, key));
    else if (key == "users_per_cell")
      c.users_per_cell = static_cast<int>(to_double(val, key));
    else if (key == "antennas" || key == "bs_antennas")
      c.bs_antennas = static_cast<int>(to_double(val, key));
    else if (key == "pilot_len")
      c.pilot_len = static_cast<int>(to_double(val, key));
    else if (key == "coherence_len")
      c.coherence_len = static_cast<int>(to_double(val, key));
    else if (key == "noise_dbm")
      c.noise_mw = dbm_to_mw(to_double(val, key));
    else if (key == "noise_mw")
      c.noise_mw = to_double(val, key);
    else if (key == "max_pilot_power_mw")
      c.max_pilot_power_mw = to_double(val, key);
    else if (key == "max_data_power_mw")
      c.max_data_power_mw = to_double(val, key);
    else if (key == "area_side_km")
      c.area_side_km = to_double(val, key);
    else if (key == "min_bs_distance_m")
      c.min_bs_distance_km = to_double(val, key) / 1000.0;
    else if (key == "min_bs_distance_km")
      c.min_bs_distance_km = to_double(val, key);
    else if (key == "shadow_std_db")
      c.shadow_std_db = to_double(val, key);
    else if (key == "pathloss_intercept_db")
      c.pathloss_intercept_db = to_double(val, key);
    else if (key == "pathloss_slope_db")
      c.pathloss_slope_db = to_double(val, key);
    else
      throw std::invalid_argument("spec: unknown network key '" + key + "'");
  }
}

inline void apply_opt(opt_config &c, const std::map<std::string, std::string> &kv) {
  for (const auto &[key, val] : kv) {
    if (key == "mode")
      c.mode = mode_from_string(val);
    else if (key == "epsilon")
      c.epsilon = to_double(val, key);
    else if (key == "corr_magnitude")
      c.corr_magnitude = to_double(val, key);
    else if (key == "sca_max_iters")
      c.sca_max_iters = static_cast<int>(to_double(val, key));
    else if (key == "sca_rel_tol")
      c.sca_rel_tol = to_double(val, key);
    else if (key == "enumeration_cap")
      c.enumeration_cap = static_cast<std::uint64_t>(to_double(val, key));
    else
      throw std::invalid_argument("spec: unknown optimize key '" + key + "'");
  }
}

inline void apply_mc(mc_config &c, const std::map<std::string, std::string> &kv) {
  for (const auto &[key, val] : kv) {
    if (key == "realizations")
      c.realizations = static_cast<std::uint64_t>(to_double(val, key));
    else if (key == "seed")
      c.seed = static_cast<std::uint64_t>(to_double(val, key));
    else if (key == "mode")
      c.mode = mode_from_string(val);
    else if (key == "epsilon")
      c.epsilon = to_double(val, key);
    else if (key == "corr_magnitude")
      c.corr_magnitude = to_double(val, key);
    else if (key == "antennas")
      c.antennas_override = static_cast<int>(to_double(val, key));
    else
      throw std::invalid_argument("spec: unknown mc key '" + key + "'");
  }
}

inline void apply_experiment(experiment_spec &spec,
                             const std::map<std::string, std::string> &kv) {
  for (const auto &[key, val] : kv) {
    if (key == "methods") {
      spec.methods = split(val, ',');
      spec.methods.erase(std::remove(spec.methods.begin(), spec.methods.end(), ""),
                         spec.methods.end());
    } else if (key == "realizations")
      spec.realizations = static_cast<int>(to_double(val, key));
    else if (key == "random_assignments")
      spec.random_assignments = static_cast<int>(to_double(val, key));
    else if (key == "seed")
      spec.seed = static_cast<std::uint64_t>(to_double(val, key));
    else if (key == "threads")
      spec.threads = static_cast<unsigned>(to_double(val, key));
    else if (key == "output_dir")
      spec.output_dir = val;
    else
      throw std::invalid_argument("spec: unknown experiment key '" + key + "'");
  }
}

}  // namespace expdetail

inline experiment_spec load_spec_text(const std::string &text) {
  experiment_spec spec;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  bool is_json = first != std::string::npos && text[first] == '{';
  if (is_json) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.contains("network")) spec.network = network_config_from_json(j["network"]);
    if (j.contains("optimize")) {
      const auto &o = j["optimize"];
      if (o.contains("mode"))
        spec.opt.mode = expdetail::mode_from_string(o["mode"].get<std::string>());
      spec.opt.epsilon = o.value("epsilon", spec.opt.epsilon);
      spec.opt.corr_magnitude = o.value("corr_magnitude", spec.opt.corr_magnitude);
      spec.opt.sca_max_iters = o.value("sca_max_iters", spec.opt.sca_max_iters);
      spec.opt.sca_rel_tol = o.value("sca_rel_tol", spec.opt.sca_rel_tol);
      spec.opt.enumeration_cap = o.value("enumeration_cap", spec.opt.enumeration_cap);
    }
    if (j.contains("mc")) {
      const auto &o = j["mc"];
      spec.mc.realizations = o.value("realizations", spec.mc.realizations);
      spec.mc.seed = o.value("seed", spec.mc.seed);
      if (o.contains("mode"))
        spec.mc.mode = expdetail::mode_from_string(o["mode"].get<std::string>());
      spec.mc.epsilon = o.value("epsilon", spec.mc.epsilon);
      spec.mc.corr_magnitude = o.value("corr_magnitude", spec.mc.corr_magnitude);
      spec.mc.antennas_override = o.value("antennas", spec.mc.antennas_override);
    }
    if (j.contains("experiment")) {
      const auto &o = j["experiment"];
      if (o.contains("methods"))
        spec.methods = o["methods"].get<std::vector<std::string>>();
      spec.realizations = o.value("realizations", spec.realizations);
      spec.random_assignments = o.value("random_assignments", spec.random_assignments);
      spec.seed = o.value("seed", spec.seed);
      spec.threads = o.value("threads", spec.threads);
      spec.output_dir = o.value("output_dir", spec.output_dir);
    }
    if (j.contains("sweep"))
      for (const auto &[name, vals] : j["sweep"].items())
        spec.sweep.push_back({name, vals.get<std::vector<double>>()});
  } else {
    auto ini = expdetail::parse_ini(text);
    for (const auto &[section, kv] : ini) {
      if (section == "network")
        expdetail::apply_network(spec.network, kv);
      else if (section == "optimize")
        expdetail::apply_opt(spec.opt, kv);
      else if (section == "mc")
        expdetail::apply_mc(spec.mc, kv);
      else if (section == "experiment")
        expdetail::apply_experiment(spec, kv);
      else if (section == "sweep")
        for (const auto &[name, val] : kv) {
          sweep_axis ax{name, {}};
          for (const std::string &v : expdetail::split(val, ','))
            ax.values.push_back(expdetail::to_double(v, "sweep." + name));
          spec.sweep.push_back(std::move(ax));
        }
      else
        throw std::invalid_argument("spec: unknown section '" + section + "'");
    }
  }
  spec.validate();
  return spec;
}

inline experiment_spec load_spec(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_spec: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_spec_text(ss.str());
}

// Empirical CDF points (value, fraction <= value) from a sample set.
inline std::vector<std::pair<double, double>> make_cdf(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out.emplace_back(samples[i], static_cast<double>(i + 1) / samples.size());
  return out;
}

inline void emit_cdf(const std::vector<double> &samples, std::ostream &os) {
  os << "min_se,cdf\n";
  for (const auto &[x, f] : make_cdf(samples))
    write_csv_row(os, {format_sig(x), format_sig(f)});
}

namespace expdetail {

struct sweep_point {
  std::vector<double> values;  // aligned with spec.sweep
};

inline std::vector<sweep_point> cartesian(const std::vector<sweep_axis> &axes) {
  std::vector<sweep_point> pts{{}};
  for (const sweep_axis &ax : axes) {
    std::vector<sweep_point> next;
    for (const sweep_point &p : pts)
      for (double v : ax.values) {
        sweep_point q = p;
        q.values.push_back(v);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

// Applies one sweep point; sweeping users_per_cell keeps pilot_len equal to
// it when the base spec had them equal.
inline void apply_point(const experiment_spec &spec, const sweep_point &pt,
                        network_config &net, opt_config &opt) {
  net = spec.network;
  opt = spec.opt;
  bool coupled = spec.network.pilot_len == spec.network.users_per_cell;
  for (std::size_t a = 0; a < spec.sweep.size(); ++a) {
    const std::string &name = spec.sweep[a].name;
    double v = pt.values[a];
    if (name == "antennas")
      net.bs_antennas = static_cast<int>(v);
    else if (name == "users_per_cell") {
      net.users_per_cell = static_cast<int>(v);
      if (coupled) net.pilot_len = static_cast<int>(v);
    } else if (name == "pilot_len")
      net.pilot_len = static_cast<int>(v);
    else if (name == "epsilon")
      opt.epsilon = v;
    else if (name == "corr_magnitude")
      opt.corr_magnitude = v;
  }
}

struct run_sample {
  std::string method;
  int outer = 0, inner = 0;
  double min_sinr = 0.0, min_se = 0.0;
  double wall_ms = 0.0;
  bool ok = false;
  std::string status;
};

inline std::vector<run_sample> run_method(const network_realization &net,
                                          const opt_config &base, const std::string &method,
                                          std::uint64_t seed, int outer,
                                          int random_assignments) {
  std::vector<run_sample> out;
  auto clock = []() { return std::chrono::steady_clock::now(); };
  auto record = [&](int inner, const opt_result &r, double ms) {
    run_sample s;
    s.method = method;
    s.outer = outer;
    s.inner = inner;
    s.min_sinr = r.xi;
    s.min_se = se_from_sinr(r.xi, net.config.pilot_len, net.config.coherence_len);
    s.wall_ms = ms;
    s.ok = r.success;
    s.status = r.success ? "ok" : r.message;
    out.push_back(std::move(s));
  };

  opt_config cfg = base;
  if (method == "random") {
    for (int j = 0; j < random_assignments; ++j) {
      auto t0 = clock();
      opt_result r = baseline_random(net, cfg, derive_seed(seed, outer, j, 9));
      record(j, r, std::chrono::duration<double, std::milli>(clock() - t0).count());
    }
    return out;
  }
  auto t0 = clock();
  opt_result r;
  if (method == "smart") {
    r = baseline_smart(net, cfg);
  } else if (method == "exhaustive_joint" || method == "exhaustive_pilot_only") {
    cfg.powers = method == "exhaustive_joint" ? power_mode::joint : power_mode::pilot_only;
    r = solve_exhaustive(net, cfg);
  } else {
    cfg.powers = method == "sca_joint" ? power_mode::joint : power_mode::pilot_only;
    cfg.init_seed = derive_seed(seed, outer, 0, 10);
    r = solve_sca(net, cfg);
  }
  record(0, r, std::chrono::duration<double, std::milli>(clock() - t0).count());
  return out;
}

inline std::string axis_suffix(const std::vector<sweep_axis> &axes, const sweep_point &pt) {
  std::string s;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    std::ostringstream os;
    os << "_" << axes[a].name << pt.values[a];
    s += os.str();
  }
  return s;
}

}  // namespace expdetail

// Runs every (sweep point, layout realization, method) combination, writing
// samples.csv, per-method CDF files, and summary.json into the output
// directory. Returns exit_ok, or exit_solver_error if any optimizer run
// failed (outputs are still written).
inline int run_experiment(const experiment_spec &spec) {
  spec.validate();
  namespace fs = std::filesystem;
  fs::create_directories(spec.output_dir);

  std::vector<expdetail::sweep_point> points = expdetail::cartesian(spec.sweep);
  std::ofstream samples_csv(fs::path(spec.output_dir) / "samples.csv");
  std::vector<std::string> header = {"method"};
  for (const sweep_axis &ax : spec.sweep) header.push_back(ax.name);
  for (const char *c : {"outer", "inner", "min_sinr", "min_se", "wall_ms", "status"})
    header.push_back(c);
  write_csv_row(samples_csv, header);

  nlohmann::json summary;
  summary["seed"] = spec.seed;
  summary["threads"] = spec.threads;
  summary["realizations"] = spec.realizations;
  summary["methods"] = spec.methods;
  summary["notes"] = {
      {"random", "averaged over layout realizations and assignment draws"},
      {"smart", "sequential greedy; cells placed in index order at full power"}};
  nlohmann::json point_summaries = nlohmann::json::array();
  bool any_failed = false;

  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    network_config net_cfg;
    opt_config opt_cfg;
    expdetail::apply_point(spec, points[pi], net_cfg, opt_cfg);
    net_cfg.validate();
    opt_cfg.validate();

    // Per-realization work items, reduced in index order.
    std::vector<std::vector<expdetail::run_sample>> results(spec.realizations);
    parallel_for(spec.realizations, spec.threads, [&](std::size_t r) {
      network_realization net =
          generate_layout(net_cfg, derive_seed(spec.seed, pi, r, 8));
      std::vector<expdetail::run_sample> rows;
      for (const std::string &method : spec.methods) {
        auto part = expdetail::run_method(net, opt_cfg, method, spec.seed,
                                          static_cast<int>(r), spec.random_assignments);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      results[r] = std::move(rows);
    });

    std::map<std::string, std::vector<double>> se_samples;
    std::map<std::string, std::vector<double>> wall;
    std::map<std::string, int> failures;
    for (int r = 0; r < spec.realizations; ++r)
      for (const expdetail::run_sample &s : results[r]) {
        std::vector<std::string> row = {s.method};
        for (double v : points[pi].values) row.push_back(format_sig(v));
        row.push_back(std::to_string(s.outer));
        row.push_back(std::to_string(s.inner));
        row.push_back(format_sig(s.min_sinr));
        row.push_back(format_sig(s.min_se));
        row.push_back(format_sig(s.wall_ms));
        row.push_back(s.ok ? "ok" : "failed");
        write_csv_row(samples_csv, row);
        if (s.ok) {
          se_samples[s.method].push_back(s.min_se);
          wall[s.method].push_back(s.wall_ms);
        } else {
          failures[s.method] += 1;
          any_failed = true;
        }
      }

    nlohmann::json psum;
    for (std::size_t a = 0; a < spec.sweep.size(); ++a)
      psum[spec.sweep[a].name] = points[pi].values[a];
    nlohmann::json per_method;
    for (const std::string &method : spec.methods) {
      const auto &se = se_samples[method];
      nlohmann::json m;
      m["count"] = se.size();
      m["failures"] = failures.count(method) ? failures[method] : 0;
      if (!se.empty()) {
        double mean = 0.0;
        for (double v : se) mean += v;
        mean /= static_cast<double>(se.size());
        std::vector<double> sorted = se;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i05 = static_cast<std::size_t>(0.05 * (sorted.size() - 1));
        double wmean = 0.0;
        for (double v : wall[method]) wmean += v;
        wmean /= static_cast<double>(wall[method].size());
        m["mean_min_se"] = mean;
        m["p05_min_se"] = sorted[i05];
        m["mean_wall_ms"] = wmean;

        std::string suffix = expdetail::axis_suffix(spec.sweep, points[pi]);
        std::ofstream cdf(fs::path(spec.output_dir) /
                          ("cdf_" + method + suffix + ".csv"));
        emit_cdf(se, cdf);
      }
      per_method[method] = std::move(m);
    }
    psum["per_method"] = std::move(per_method);
    point_summaries.push_back(std::move(psum));
  }

  summary["points"] = std::move(point_summaries);
  std::ofstream sj(fs::path(spec.output_dir) / "summary.json");
  sj << summary.dump(2) << "\n";
  return any_failed ? exit_solver_error : exit_ok;
}

// Closed-form-versus-simulation audit plus a monotonicity audit of the
// iterated design, written to validation.csv. Returns exit_ok when at least
// 95% of comparisons agree within three standard errors and every audited
// objective trace is nondecreasing.
inline int run_validation(const experiment_spec &spec) {
  spec.validate();
  namespace fs = std::filesystem;
  fs::create_directories(spec.output_dir);
  std::ofstream csv(fs::path(spec.output_dir) / "validation.csv");
  write_csv_row(csv, {"check", "mode", "cell", "user", "closed_form", "empirical",
                      "std_err", "z", "pass"});

  network_realization net = generate_layout(spec.network, spec.seed);
  const int L = spec.network.num_cells, K = spec.network.users_per_cell;
  const int tp = spec.network.pilot_len;

  // Seeded interior operating point.
  pilot_allocation alloc(L, K, tp);
  std::vector<double> data(static_cast<std::size_t>(L) * K);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      rng r(derive_seed(spec.seed, l, k, 11));
      for (int b = 0; b < tp; ++b)
        alloc.p(l, k, b) = r.uniform(0.05, 1.0) * spec.network.max_pilot_power_mw;
      data[static_cast<std::size_t>(l) * K + k] =
          r.uniform(0.2, 1.0) * spec.network.max_data_power_mw;
    }

  int total = 0, passed = 0;
  auto absorb = [&](const cf_comparison &cmp, const std::string &mode_name) {
    for (const cf_row &row : cmp.rows) {
      ++total;
      passed += row.pass ? 1 : 0;
      write_csv_row(csv, {"closed_form", mode_name, std::to_string(row.cell),
                          std::to_string(row.user), format_sig(row.closed_form),
                          format_sig(row.empirical), format_sig(row.std_err),
                          format_sig(row.z), row.pass ? "1" : "0"});
    }
  };

  mc_config mc = spec.mc;
  mc.threads = spec.threads;
  mc.mode = objective_mode::ideal;
  absorb(verify_closed_form(net, alloc, data, mc), "ideal");
  mc.mode = objective_mode::hardware;
  absorb(verify_closed_form(net, alloc, data, mc), "hardware");
  mc.mode = objective_mode::correlated;
  absorb(verify_closed_form(net, alloc, data, mc), "correlated");

  // Assignment-form audit at full power.
  {
    pilot_assignment assign(L, K);
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k) {
        assign.chi(l, k) = (k + l) % K;
        assign.power(l, k) = spec.network.max_pilot_power_mw * tp;
      }
    mc.mode = objective_mode::ideal;
    absorb(verify_closed_form(net, assign, data, mc), "assignment");
  }

  // Monotonicity audit of the iterated continuous design.
  bool monotone_ok = true;
  {
    opt_config oc = spec.opt;
    oc.mode = objective_mode::ideal;
    for (int audit = 0; audit < 5; ++audit) {
      network_config small = spec.network;
      small.bs_antennas = std::min(small.bs_antennas, 100);
      network_realization anet = generate_layout(small, derive_seed(spec.seed, 99, audit, 12));
      oc.init_seed = derive_seed(spec.seed, audit, 0, 13);
      opt_result r = solve_sca(anet, oc);
      bool ok = r.success;
      for (std::size_t i = 1; ok && i < r.trace.size(); ++i)
        if (r.trace[i] < r.trace[i - 1] * (1.0 - 1e-6) - 1e-12) ok = false;
      monotone_ok = monotone_ok && ok;
      write_csv_row(csv, {"sca_monotone", "ideal", std::to_string(audit), "-",
                          format_sig(r.success ? r.trace.back() : 0.0), "-", "-", "-",
                          ok ? "1" : "0"});
    }
  }

  double frac = total > 0 ? static_cast<double>(passed) / total : 0.0;
  bool pass = frac >= 0.95 && monotone_ok;
  csv << "# pass_fraction=" << format_sig(frac) << " monotone=" << (monotone_ok ? 1 : 0)
      << "\n";
  return pass ? exit_ok : exit_validation_failure;
}

}  // namespace pilotopt
