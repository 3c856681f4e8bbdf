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

#include "pilotopt/common.hpp"

using namespace pilotopt;
using Catch::Approx;

TEST_CASE("common - decibel conversions", "[common]") {
  CHECK(db_to_linear(0.0) == Approx(1.0));
  CHECK(db_to_linear(10.0) == Approx(10.0));
  CHECK(db_to_linear(-30.0) == Approx(1e-3));
  CHECK(linear_to_db(100.0) == Approx(20.0));
  CHECK(linear_to_db(db_to_linear(-7.3)) == Approx(-7.3));
  CHECK_THROWS_AS(linear_to_db(0.0), std::domain_error);
  CHECK_THROWS_AS(linear_to_db(-1.0), std::domain_error);
}

TEST_CASE("common - dBm to milliwatt", "[common]") {
  CHECK(dbm_to_mw(0.0) == Approx(1.0));
  CHECK(dbm_to_mw(30.0) == Approx(1000.0));
  // -96 dBm, the default receiver noise level.
  CHECK(dbm_to_mw(-96.0) == Approx(2.511886431509582e-10).epsilon(1e-13));
  CHECK(mw_to_dbm(dbm_to_mw(-96.0)) == Approx(-96.0));
  CHECK(mw_to_dbm(200.0) == Approx(23.0102999566398119521).epsilon(1e-12));
}

TEST_CASE("common - compensated summation keeps small increments", "[common]") {
  // Naive accumulation loses every unit added onto 1e16 and ends at 0.
  kahan_sum s;
  s.add(1e16);
  for (int i = 0; i < 100; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 100.0);

  kahan_sum t;
  for (int i = 0; i < 16; ++i) t.add(0.1);
  CHECK(t.value() == 1.6);  // naive: 1.6000000000000003
}

TEST_CASE("common - tensor3 layout and access", "[common]") {
  tensor3 t(2, 3, 4);
  CHECK(t.dim0() == 2u);
  CHECK(t.dim1() == 3u);
  CHECK(t.dim2() == 4u);
  CHECK(t.flat().size() == 24u);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 4; ++k) t(i, j, k) = 100 * i + 10 * j + k;
  CHECK(t(1, 2, 3) == Approx(123.0));
  CHECK(t(0, 0, 0) == Approx(0.0));
  // Row-major flat order: last index fastest.
  CHECK(t.flat()[1] == Approx(1.0));
  CHECK(t.flat()[4] == Approx(10.0));
  CHECK(t.flat()[12] == Approx(100.0));
}

TEST_CASE("common - user reference ordering", "[common]") {
  user_ref a{0, 1}, b{1, 0}, c{0, 1};
  CHECK(a == c);
  CHECK(a != b);
  CHECK(a < b);
  CHECK_FALSE(b < a);
  CHECK_FALSE(a < c);
}
