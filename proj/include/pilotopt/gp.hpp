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
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pilotopt/common.hpp"

namespace pilotopt {

// c * prod_i x_i^(e_i) with positive coefficient; exponents may be any reals
// and are stored sparsely as (variable, exponent) pairs with unique variables.
struct monomial {
  double coef = 1.0;
  std::vector<std::pair<int, double>> expo;

  monomial() = default;
  monomial(double c, std::vector<std::pair<int, double>> e) : coef(c), expo(std::move(e)) {}

  monomial &mul(int var, double exponent) {
    for (auto &p : expo)
      if (p.first == var) {
        p.second += exponent;
        return *this;
      }
    expo.emplace_back(var, exponent);
    return *this;
  }
};

// Sum of monomials; every generalized-geometric-programming expression this
// library needs is either one of these or a ratio handled at build time.
struct posynomial {
  std::vector<monomial> terms;

  posynomial &add(monomial m) {
    terms.push_back(std::move(m));
    return *this;
  }
};

inline double evaluate(const monomial &m, const std::vector<double> &x) {
  if (!(m.coef > 0.0)) throw std::domain_error("evaluate: monomial coefficient must be positive");
  double v = m.coef;
  for (const auto &[var, e] : m.expo) {
    double xv = x.at(static_cast<std::size_t>(var));
    if (!(xv > 0.0)) throw std::domain_error("evaluate: variables must be positive");
    v *= std::pow(xv, e);
  }
  return v;
}

inline double evaluate(const posynomial &f, const std::vector<double> &x) {
  kahan_sum s;
  for (const monomial &m : f.terms) s.add(evaluate(m, x));
  return s.value();
}

// Weighted geometric-mean lower bound on a posynomial: with weights w_j equal
// to each term's share at the expansion point, g(x) = prod_j (f_j(x)/w_j)^w_j
// satisfies g <= f everywhere and g(x0) = f(x0).
struct monomial_bound {
  monomial bound;
  std::vector<double> weights;  // per-term shares at the expansion point
};

inline monomial_bound amgm_monomial_bound(const posynomial &f, const std::vector<double> &x0) {
  if (f.terms.empty()) throw std::invalid_argument("amgm_monomial_bound: empty posynomial");
  double total = evaluate(f, x0);
  monomial_bound out;
  out.weights.resize(f.terms.size());
  double log_coef = 0.0;
  std::vector<double> dense;  // accumulated exponents
  for (std::size_t j = 0; j < f.terms.size(); ++j) {
    double w = evaluate(f.terms[j], x0) / total;
    out.weights[j] = w;
    if (w <= 0.0) continue;
    log_coef += w * (std::log(f.terms[j].coef) - std::log(w));
    for (const auto &[var, e] : f.terms[j].expo) {
      if (dense.size() <= static_cast<std::size_t>(var)) dense.resize(var + 1, 0.0);
      dense[var] += w * e;
    }
  }
  out.bound.coef = std::exp(log_coef);
  for (std::size_t v = 0; v < dense.size(); ++v)
    if (dense[v] != 0.0) out.bound.expo.emplace_back(static_cast<int>(v), dense[v]);
  return out;
}

enum class gp_status { optimal, infeasible, max_iter, unbounded };

inline const char *to_string(gp_status s) {
  switch (s) {
    case gp_status::optimal: return "optimal";
    case gp_status::infeasible: return "infeasible";
    case gp_status::max_iter: return "max_iter";
    case gp_status::unbounded: return "unbounded";
  }
  return "?";
}

struct gp_problem {
  int num_vars = 0;
  std::vector<std::string> var_names;      // optional, for dumps
  monomial objective;                      // minimized
  std::vector<posynomial> constraints;     // each <= 1
  std::vector<double> initial_point;       // optional strictly feasible start

  void validate() const {
    if (num_vars < 1) throw std::invalid_argument("gp_problem: num_vars must be positive");
    auto check_mono = [this](const monomial &m) {
      if (!(m.coef > 0.0) || !std::isfinite(m.coef))
        throw std::invalid_argument("gp_problem: coefficients must be positive and finite");
      for (const auto &[var, e] : m.expo) {
        if (var < 0 || var >= num_vars)
          throw std::invalid_argument("gp_problem: exponent on unknown variable");
        if (!std::isfinite(e))
          throw std::invalid_argument("gp_problem: exponents must be finite");
      }
    };
    check_mono(objective);
    for (const posynomial &f : constraints) {
      if (f.terms.empty())
        throw std::invalid_argument("gp_problem: empty constraint posynomial");
      for (const monomial &m : f.terms) check_mono(m);
    }
    if (!initial_point.empty() && static_cast<int>(initial_point.size()) != num_vars)
      throw std::invalid_argument("gp_problem: initial point has wrong dimension");
  }
};

struct gp_tolerances {
  double feasibility = 1e-8;  // accepted constraint violation, relative to 1
  double kkt = 1e-7;          // target on the scaled stationarity residual
  double duality_gap = 1e-7;  // barrier stop: constraints / t
  double barrier_growth = 50.0;
  int newton_max = 200;        // per barrier stage
  double log_floor = -40.0;    // variables clamped to exp(log_floor)
  double log_ceiling = 46.0;   // beyond this the problem is declared unbounded
};

struct gp_solution {
  std::vector<double> point;  // linear domain
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  gp_status status = gp_status::max_iter;
  double kkt_residual = std::numeric_limits<double>::quiet_NaN();
  double max_constraint = std::numeric_limits<double>::quiet_NaN();
  int barrier_stages = 0;
  int newton_steps = 0;
  bool phase1_used = false;
};

namespace gpdetail {

// One constraint in log variables: F(y) = log sum_j exp(a_j . y + b_j).
struct log_constraint {
  std::vector<double> b;                                 // log coefficients
  std::vector<std::vector<std::pair<int, double>>> a;    // sparse rows

  double value(const Eigen::VectorXd &y, std::vector<double> &z) const {
    z.resize(b.size());
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      double s = b[j];
      for (const auto &[var, e] : a[j]) s += e * y[var];
      z[j] = s;
      mx = std::max(mx, s);
    }
    double acc = 0.0;
    for (double v : z) acc += std::exp(v - mx);
    return mx + std::log(acc);
  }

  // Softmax weights, mean exponent vector, and exponent covariance.
  void derivatives(const Eigen::VectorXd &y, double &val, Eigen::VectorXd &grad,
                   Eigen::MatrixXd &cov, std::vector<double> &z) const {
    const int n = static_cast<int>(y.size());
    val = value(y, z);
    grad.setZero(n);
    cov.setZero(n, n);
    std::vector<double> w(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) w[j] = std::exp(z[j] - val);
    for (std::size_t j = 0; j < b.size(); ++j)
      for (const auto &[var, e] : a[j]) grad[var] += w[j] * e;
    for (std::size_t j = 0; j < b.size(); ++j)
      for (const auto &[v1, e1] : a[j])
        for (const auto &[v2, e2] : a[j]) cov(v1, v2) += w[j] * e1 * e2;
    cov.noalias() -= grad * grad.transpose();
  }
};

inline Eigen::VectorXd solve_spd(Eigen::MatrixXd h, const Eigen::VectorXd &g, bool &ok) {
  double ridge = 0.0;
  double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::MatrixXd hr = h;
    if (ridge > 0.0) hr.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hr);
    if (ldlt.info() == Eigen::Success) {
      Eigen::VectorXd d = ldlt.solve(-g);
      if (d.allFinite() && g.dot(d) < 0.0) {
        ok = true;
        return d;
      }
    }
    ridge = ridge == 0.0 ? 1e-10 * scale : ridge * 10.0;
  }
  ok = false;
  return -g;  // gradient fallback
}

}  // namespace gpdetail

// Interior-point solver in log variables. Deterministic; no randomness and no
// dependence on iteration order beyond the problem description itself.
inline gp_solution solve(const gp_problem &prob, const gp_tolerances &tol = {}) {
  prob.validate();
  const int n = prob.num_vars;
  const int m = static_cast<int>(prob.constraints.size());

  // Log-space forms.
  std::vector<gpdetail::log_constraint> cons(m);
  for (int i = 0; i < m; ++i) {
    const posynomial &f = prob.constraints[i];
    cons[i].b.resize(f.terms.size());
    cons[i].a.resize(f.terms.size());
    for (std::size_t j = 0; j < f.terms.size(); ++j) {
      cons[i].b[j] = std::log(f.terms[j].coef);
      cons[i].a[j] = f.terms[j].expo;
    }
  }
  Eigen::VectorXd a0 = Eigen::VectorXd::Zero(n);
  for (const auto &[var, e] : prob.objective.expo) a0[var] += e;

  gp_solution sol;
  std::vector<double> scratch;
  auto feas_margin = [&](const Eigen::VectorXd &y) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto &c : cons) worst = std::max(worst, c.value(y, scratch));
    return worst;  // negative means strictly feasible
  };

  Eigen::VectorXd y(n);
  if (!prob.initial_point.empty()) {
    for (int v = 0; v < n; ++v) {
      double xv = prob.initial_point[v];
      y[v] = xv > 0.0 ? std::log(xv) : tol.log_floor;
    }
  } else {
    y.setZero();
  }
  y = y.cwiseMax(tol.log_floor);

  // ---------- PHASE 1 ----------
  // Minimize s subject to F_i(y) <= s; accept as soon as s is clearly
  // negative, declare infeasibility when it converges nonnegative.
  if (m > 0 && feas_margin(y) >= -1e-10) {
    sol.phase1_used = true;
    double s = feas_margin(y) + 1.0;
    Eigen::VectorXd g(n + 1), step(n + 1), yext(n + 1);
    Eigen::MatrixXd h(n + 1, n + 1);
    Eigen::VectorXd cg(n);
    Eigen::MatrixXd ccov(n, n);
    std::vector<double> gap0;
    bool feasible_found = false;
    for (double t = 1.0; t <= 1e9; t *= tol.barrier_growth) {
      for (int it = 0; it < 60; ++it) {
        g.setZero();
        h.setZero();
        g[n] = t;
        double val;
        for (const auto &c : cons) {
          c.derivatives(y, val, cg, ccov, scratch);
          double gap = s - val;
          if (!(gap > 0.0)) gap = 1e-300;
          double inv = 1.0 / gap, inv2 = inv * inv;
          g.head(n) += inv * cg;
          g[n] -= inv;
          h.topLeftCorner(n, n) += inv2 * cg * cg.transpose() + inv * ccov;
          h.col(n).head(n) -= inv2 * cg;
          h.row(n).head(n) -= inv2 * cg.transpose();
          h(n, n) += inv2;
        }
        bool ok;
        step = gpdetail::solve_spd(h, g, ok);
        double decr = -g.dot(step);
        if (!ok || decr < 1e-12) break;
        // Armijo on the merit *change*; the absolute merit carries a t-scaled
        // term whose rounding would mask small decreases once t is large.
        gap0.resize(cons.size());
        for (std::size_t ci = 0; ci < cons.size(); ++ci)
          gap0[ci] = s - cons[ci].value(y, scratch);
        double alpha = 1.0;
        for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
          Eigen::VectorXd yn = y + alpha * step.head(n);
          double sn = s + alpha * step[n];
          double dmerit = t * (sn - s);
          bool interior = true;
          for (std::size_t ci = 0; ci < cons.size(); ++ci) {
            double gap = sn - cons[ci].value(yn, scratch);
            if (!(gap > 0.0)) {
              interior = false;
              break;
            }
            dmerit += std::log(gap0[ci] / gap);
          }
          if (interior && dmerit <= -0.25 * alpha * decr) {
            y = yn;
            s = sn;
            break;
          }
        }
        ++sol.newton_steps;
        if (feas_margin(y) < -1e-8) {
          feasible_found = true;
          break;
        }
      }
      if (feasible_found || 1.0 / t < 1e-10) break;
    }
    if (!feasible_found && feas_margin(y) >= -1e-12) {
      sol.status = gp_status::infeasible;
      sol.point.resize(n);
      for (int v = 0; v < n; ++v) sol.point[v] = std::exp(y[v]);
      sol.max_constraint = std::exp(feas_margin(y));
      return sol;
    }
  }

  // ---------- MAIN BARRIER LOOP ----------
  Eigen::VectorXd g(n), step(n), cg(n);
  Eigen::MatrixXd h(n, n), ccov(n, n);
  std::vector<double> neg0;
  double t = 1.0;
  double final_decr = std::numeric_limits<double>::infinity();
  bool unbounded = false;
  while (true) {
    ++sol.barrier_stages;
    for (int it = 0; it < tol.newton_max; ++it) {
      g = t * a0;
      h.setZero();
      double val;
      for (const auto &c : cons) {
        c.derivatives(y, val, cg, ccov, scratch);
        double inv = 1.0 / (-val);  // val < 0 in the interior
        if (!(val < 0.0)) inv = 1e300;
        g += inv * cg;
        h += inv * inv * cg * cg.transpose() + inv * ccov;
      }
      bool ok;
      step = gpdetail::solve_spd(h, g, ok);
      double decr = -g.dot(step);
      final_decr = decr;
      if (!ok || decr < 1e-12) break;

      // Armijo on the merit *change*: the t-scaled objective term would lose
      // the small late-stage decreases to rounding if compared absolutely.
      neg0.resize(cons.size());
      for (std::size_t ci = 0; ci < cons.size(); ++ci) neg0[ci] = -cons[ci].value(y, scratch);
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        Eigen::VectorXd yn = (y + alpha * step).cwiseMax(tol.log_floor);
        double dmerit = t * a0.dot(yn - y);
        bool interior = true;
        for (std::size_t ci = 0; ci < cons.size(); ++ci) {
          double vn = cons[ci].value(yn, scratch);
          if (!(vn < 0.0)) {
            interior = false;
            break;
          }
          dmerit += std::log(neg0[ci] / (-vn));
        }
        if (interior && dmerit <= -0.25 * alpha * decr) {
          y = yn;
          moved = true;
          break;
        }
      }
      ++sol.newton_steps;
      if (!moved) break;
      if (y.maxCoeff() > tol.log_ceiling) {
        unbounded = true;
        break;
      }
    }
    if (unbounded || m == 0 || static_cast<double>(m) / t <= tol.duality_gap) break;
    t *= tol.barrier_growth;
    if (t > 1e14) break;
  }

  sol.point.resize(n);
  for (int v = 0; v < n; ++v) sol.point[v] = std::exp(y[v]);
  sol.objective_value = evaluate(prob.objective, sol.point);
  sol.max_constraint = 0.0;
  for (const posynomial &f : prob.constraints)
    sol.max_constraint = std::max(sol.max_constraint, evaluate(f, sol.point));

  // Scaled stationarity residual with the barrier multipliers.
  {
    Eigen::VectorXd r = a0;
    double val;
    for (const auto &c : cons) {
      c.derivatives(y, val, cg, ccov, scratch);
      double lambda = val < 0.0 ? 1.0 / (t * (-val)) : 1e300;
      r += lambda * cg;
    }
    double scale = std::max(1.0, a0.cwiseAbs().maxCoeff());
    sol.kkt_residual = std::max(r.cwiseAbs().maxCoeff() / scale,
                                m > 0 ? static_cast<double>(m) / t : 0.0);
  }

  // A near-centered point (small Newton decrement) at the final barrier
  // parameter is optimal to within ~m/t regardless of the stationarity
  // residual, whose evaluation is noise-floored once active gaps reach the
  // rounding error of the log-domain constraint values.
  const double gap_measure = m > 0 ? static_cast<double>(m) / t : 0.0;
  const bool centered = final_decr <= 1e-4 && gap_measure <= tol.duality_gap;
  if (unbounded) {
    sol.status = gp_status::unbounded;
  } else if (sol.max_constraint > 1.0 + tol.feasibility) {
    sol.status = gp_status::max_iter;
  } else if (sol.kkt_residual <= std::max(tol.kkt, 10.0 * tol.duality_gap) || centered) {
    sol.status = gp_status::optimal;
  } else {
    sol.status = gp_status::max_iter;
  }
  return sol;
}

inline void dump(const gp_problem &prob, std::ostream &os) {
  auto name = [&prob](int v) {
    return v < static_cast<int>(prob.var_names.size()) ? prob.var_names[v]
                                                       : "x" + std::to_string(v);
  };
  auto write_mono = [&](const monomial &m) {
    os << m.coef;
    for (const auto &[var, e] : m.expo) os << " * " << name(var) << "^" << e;
  };
  os << "minimize ";
  write_mono(prob.objective);
  os << "\n";
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    os << "  s.t. [" << i << "] ";
    for (std::size_t j = 0; j < prob.constraints[i].terms.size(); ++j) {
      if (j) os << " + ";
      write_mono(prob.constraints[i].terms[j]);
    }
    os << " <= 1\n";
  }
}

}  // namespace pilotopt
