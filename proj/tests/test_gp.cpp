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

#include "pilotopt/gp.hpp"
#include "pilotopt/rng.hpp"

using namespace pilotopt;
using Catch::Approx;

TEST_CASE("gp - monomial and posynomial evaluation", "[gp]") {
  monomial m(2.0, {{0, 1.0}, {1, -0.5}});
  CHECK(evaluate(m, {3.0, 4.0}) == Approx(3.0));  // 2 * 3 / 2
  m.mul(0, 1.0);                                  // exponent merges to 2
  CHECK(evaluate(m, {3.0, 4.0}) == Approx(9.0));
  CHECK(m.expo.size() == 2u);

  posynomial f;
  f.add(monomial(1.0, {{0, 1.0}})).add(monomial(1.0, {{0, -1.0}}));
  CHECK(evaluate(f, {2.0}) == Approx(2.5));
  CHECK_THROWS_AS(evaluate(f, {0.0}), std::domain_error);
  CHECK_THROWS_AS(evaluate(f, {-1.0}), std::domain_error);
  CHECK_THROWS_AS(evaluate(monomial(-1.0, {}), {1.0}), std::domain_error);
}

TEST_CASE("gp - geometric-mean surrogate of a sum", "[gp]") {
  // f = x + 2y at (1, 1): shares 1/3 and 2/3.
  posynomial f;
  f.add(monomial(1.0, {{0, 1.0}})).add(monomial(2.0, {{1, 1.0}}));
  monomial_bound b = amgm_monomial_bound(f, {1.0, 1.0});
  CHECK(b.weights[0] == Approx(1.0 / 3.0));
  CHECK(b.weights[1] == Approx(2.0 / 3.0));
  // Tight at the expansion point.
  CHECK(evaluate(b.bound, {1.0, 1.0}) == Approx(3.0).epsilon(1e-12));
  // Never above the true value elsewhere.
  CHECK(evaluate(b.bound, {2.0, 1.0}) == Approx(3.0 * std::pow(2.0, 1.0 / 3.0)));
  CHECK(evaluate(b.bound, {2.0, 1.0}) <= evaluate(f, {2.0, 1.0}));

  // Randomized dominance check across dimensions and exponents.
  rng r(21);
  for (int rep = 0; rep < 200; ++rep) {
    int n = 1 + static_cast<int>(r.uniform(0.0, 4.0));
    int terms = 1 + static_cast<int>(r.uniform(0.0, 6.0));
    posynomial g;
    for (int j = 0; j < terms; ++j) {
      monomial m(r.uniform(0.1, 5.0), {});
      for (int v = 0; v < n; ++v)
        if (r.uniform() < 0.7) m.mul(v, r.uniform(-2.0, 2.0));
      g.add(std::move(m));
    }
    std::vector<double> x0(n), x1(n);
    for (int v = 0; v < n; ++v) {
      x0[v] = r.uniform(0.2, 5.0);
      x1[v] = r.uniform(0.2, 5.0);
    }
    monomial_bound mb = amgm_monomial_bound(g, x0);
    CHECK(evaluate(mb.bound, x0) == Approx(evaluate(g, x0)).epsilon(1e-10));
    CHECK(evaluate(mb.bound, x1) <= evaluate(g, x1) * (1.0 + 1e-10));
  }
}

TEST_CASE("gp - one-variable problem with a known optimum", "[gp]") {
  // minimize x subject to 2/x <= 1  =>  x* = 2.
  gp_problem p;
  p.num_vars = 1;
  p.objective = monomial(1.0, {{0, 1.0}});
  p.constraints.push_back(posynomial().add(monomial(2.0, {{0, -1.0}})));
  gp_solution s = solve(p, {});
  CHECK(s.status == gp_status::optimal);
  CHECK(s.objective_value == Approx(2.0).epsilon(1e-6));
  CHECK(s.point[0] == Approx(2.0).epsilon(1e-6));
  CHECK(s.max_constraint <= 1.0 + 1e-8);
}

TEST_CASE("gp - separable two-variable problem", "[gp]") {
  // minimize 1/(x y) subject to x <= 2, y <= 3  =>  optimum 1/6 at (2, 3).
  gp_problem p;
  p.num_vars = 2;
  p.objective = monomial(1.0, {{0, -1.0}, {1, -1.0}});
  p.constraints.push_back(posynomial().add(monomial(0.5, {{0, 1.0}})));
  p.constraints.push_back(posynomial().add(monomial(1.0 / 3.0, {{1, 1.0}})));
  gp_solution s = solve(p, {});
  CHECK(s.status == gp_status::optimal);
  CHECK(s.objective_value == Approx(1.0 / 6.0).epsilon(1e-6));
  CHECK(s.point[0] == Approx(2.0).epsilon(1e-5));
  CHECK(s.point[1] == Approx(3.0).epsilon(1e-5));
}

TEST_CASE("gp - epigraph of a nonmonomial objective", "[gp]") {
  // minimize x + 1/x via epigraph t: (x + 1/x)/t <= 1  =>  t* = 2 at x = 1.
  gp_problem p;
  p.num_vars = 2;  // x = var 0, t = var 1
  p.objective = monomial(1.0, {{1, 1.0}});
  posynomial c;
  c.add(monomial(1.0, {{0, 1.0}, {1, -1.0}}));
  c.add(monomial(1.0, {{0, -1.0}, {1, -1.0}}));
  p.constraints.push_back(std::move(c));
  gp_solution s = solve(p, {});
  CHECK(s.status == gp_status::optimal);
  CHECK(s.objective_value == Approx(2.0).epsilon(1e-6));
  CHECK(s.point[0] == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("gp - infeasible and unbounded detection", "[gp]") {
  // x <= 0.5 and x >= 2 cannot hold together.
  gp_problem p;
  p.num_vars = 1;
  p.objective = monomial(1.0, {{0, 1.0}});
  p.constraints.push_back(posynomial().add(monomial(2.0, {{0, 1.0}})));
  p.constraints.push_back(posynomial().add(monomial(2.0, {{0, -1.0}})));
  gp_solution s = solve(p, {});
  CHECK(s.status == gp_status::infeasible);

  // minimize 1/x with only a lower bound on x: drives x to infinity.
  gp_problem q;
  q.num_vars = 1;
  q.objective = monomial(1.0, {{0, -1.0}});
  q.constraints.push_back(posynomial().add(monomial(0.1, {{0, -1.0}})));
  gp_solution u = solve(q, {});
  CHECK(u.status == gp_status::unbounded);
}

TEST_CASE("gp - problem validation rejects malformed input", "[gp]") {
  gp_problem p;
  p.num_vars = 1;
  p.objective = monomial(1.0, {{0, 1.0}});
  p.constraints.push_back(posynomial().add(monomial(-2.0, {{0, -1.0}})));
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  gp_problem q;
  q.num_vars = 1;
  q.objective = monomial(1.0, {{1, 1.0}});  // unknown variable
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);

  gp_problem r;
  r.num_vars = 1;
  r.objective = monomial(1.0, {{0, 1.0}});
  r.constraints.push_back(posynomial());  // empty constraint
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("gp - warm start reaches the same optimum", "[gp]") {
  gp_problem p;
  p.num_vars = 2;
  p.objective = monomial(1.0, {{0, -1.0}, {1, -2.0}});
  p.constraints.push_back(
      posynomial().add(monomial(0.25, {{0, 1.0}})).add(monomial(0.2, {{1, 1.0}})));
  gp_solution cold = solve(p, {});
  p.initial_point = {0.5, 1.0};
  gp_solution warm = solve(p, {});
  REQUIRE(cold.status == gp_status::optimal);
  REQUIRE(warm.status == gp_status::optimal);
  CHECK(warm.objective_value == Approx(cold.objective_value).epsilon(1e-7));
}

TEST_CASE("gp - randomized problems against a grid oracle", "[gp]") {
  // Small version of the exhaustive oracle: 2-variable problems, grid search
  // over the feasible box, solver must not be beaten by more than 2%.
  rng r(31);
  for (int rep = 0; rep < 10; ++rep) {
    gp_problem p;
    p.num_vars = 2;
    p.objective = monomial(std::exp(r.uniform(-1.0, 1.0)), {});
    for (int v = 0; v < 2; ++v) p.objective.mul(v, r.uniform(0.25, 2.0));
    // Box 0.5 <= x <= 4 plus one random posynomial constraint normalized to
    // hold with slack at the box center.
    for (int v = 0; v < 2; ++v) {
      p.constraints.push_back(posynomial().add(monomial(0.25, {{v, 1.0}})));
      p.constraints.push_back(posynomial().add(monomial(0.5, {{v, -1.0}})));
    }
    posynomial g;
    for (int j = 0; j < 3; ++j) {
      monomial m(r.uniform(0.1, 2.0), {});
      for (int v = 0; v < 2; ++v) m.mul(v, r.uniform(-1.5, 1.5));
      g.add(std::move(m));
    }
    std::vector<double> center{1.4142135623730951, 1.4142135623730951};
    double gc = evaluate(g, center);
    for (monomial &m : g.terms) m.coef /= 2.0 * gc;
    p.constraints.push_back(g);

    gp_solution s = solve(p, {});
    REQUIRE(s.status == gp_status::optimal);
    CHECK(s.max_constraint <= 1.0 + 1e-8);

    double best = std::numeric_limits<double>::infinity();
    const int grid = 300;
    std::vector<double> x(2);
    for (int i = 0; i <= grid; ++i) {
      x[0] = 0.5 * std::pow(8.0, static_cast<double>(i) / grid);
      for (int j = 0; j <= grid; ++j) {
        x[1] = 0.5 * std::pow(8.0, static_cast<double>(j) / grid);
        bool feas = true;
        for (const posynomial &c : p.constraints)
          if (evaluate(c, x) > 1.0) {
            feas = false;
            break;
          }
        if (feas) best = std::min(best, evaluate(p.objective, x));
      }
    }
    REQUIRE(std::isfinite(best));
    CHECK(s.objective_value <= best * (1.0 + 1e-6));
    CHECK(s.objective_value >= best * (1.0 - 0.02));
  }
}
