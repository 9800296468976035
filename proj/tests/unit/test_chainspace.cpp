// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "fockkit/chainspace.hpp"
#include "fockkit/random.hpp"

using namespace fockkit;

TEST_CASE("chain enumeration is the power set in size-then-lex order") {
  CHECK(enumerate_chains(PointSpace::uniform(0, 1.0)).size() == 1);
  CHECK(enumerate_chains(PointSpace::uniform(5, 1.0)).size() == 32);

  const auto chains = enumerate_chains(PointSpace::uniform(2, 1.0));
  REQUIRE(chains.size() == 4);
  CHECK(chains[0] == 0);
  CHECK(chains[1] == chain_from_indices({0}));
  CHECK(chains[2] == chain_from_indices({1}));
  CHECK(chains[3] == chain_from_indices({0, 1}));
}

TEST_CASE("table enumeration has 5^n entries, all valid") {
  CHECK(enumerate_tables(PointSpace::uniform(0, 1.0)).size() == 1);
  CHECK(enumerate_tables(PointSpace::uniform(1, 1.0)).size() == 5);
  const auto tables = enumerate_tables(PointSpace::uniform(3, 1.0));
  CHECK(tables.size() == 125);
  for (const Table& t : tables) CHECK(t.valid());
}

TEST_CASE("chain weights multiply point weights, empty chain has unit mass") {
  PointSpace sp({0.5, 1.0}, {0.5, 0.25}, {1, 1}, 1);
  CHECK(sp.chain_weight(0) == 1.0);
  CHECK(sp.chain_weight(chain_from_indices({0})) == 0.5);
  CHECK(sp.chain_weight(chain_from_indices({0, 1})) == doctest::Approx(0.125));
}

TEST_CASE("measure_sum basics") {
  PointSpace sp = PointSpace::uniform(1, 1.0);
  auto delta_empty = [](ChainMask m) { return m == 0 ? cplx(1.0) : cplx(0.0); };
  CHECK(measure_sum(sp, delta_empty).real() == doctest::Approx(1.0));
  CHECK(measure_sum(sp, [](ChainMask) { return cplx(1.0); }).real() == doctest::Approx(2.0));
}

TEST_CASE("measure_sum of a product function factorizes") {
  const int n = 4;
  PointSpace sp = PointSpace::uniform(n, 2.0);
  const cplx c{0.3, -0.2};
  cplx sum = measure_sum(sp, [&](ChainMask m) {
    cplx p = 1.0;
    for (int i = 0; i < chain_size(m); ++i) p *= c;
    return p;
  });
  cplx expect = 1.0;
  for (int i = 0; i < n; ++i) expect *= (1.0 + c * sp.weight(i));
  CHECK(std::abs(sum - expect) < 1e-14);
}

TEST_CASE("measure_sum restricted to chains disjoint from a chain") {
  PointSpace sp = PointSpace::uniform(2, 2.0);
  const cplx all = measure_sum(sp, [](ChainMask) { return cplx(1.0); });
  const cplx off = measure_sum(sp, [](ChainMask) { return cplx(1.0); },
                               disjoint_from(chain_from_indices({0})));
  CHECK(all.real() == doctest::Approx(4.0));
  CHECK(off.real() == doctest::Approx(2.0));
}

TEST_CASE("fubini identity: trivial cases") {
  PointSpace sp = PointSpace::uniform(1, 1.0);
  CHECK(fubini_residual(sp, [](ChainMask, ChainMask) { return cplx(1.0); }) < 1e-15);

  // f(u, k) = delta_empty(u) g(k) gives the plain integral on both sides.
  PointSpace sp3 = PointSpace::uniform(3, 1.5);
  auto g = [](ChainMask k) { return cplx(0.7 * chain_size(k), -0.1); };
  CHECK(fubini_residual(sp3, [&](ChainMask u, ChainMask k) {
          return u == 0 ? g(k) : cplx(0.0);
        }) < 1e-14);
}

TEST_CASE("fubini identity: random complex f on n=4, exhaustive") {
  PointSpace sp = PointSpace::uniform(4, 1.0);
  Rng rng(99);
  std::vector<cplx> vals(16 * 16);
  for (auto& v : vals) v = rng.disc(1.0);
  CHECK(fubini_residual(sp, [&](ChainMask u, ChainMask k) { return vals[u * 16 + k]; }) < 1e-12);
}

TEST_CASE("restrict splits a chain at a time cut") {
  PointSpace sp = PointSpace::uniform(3, 3.0);  // times 1, 2, 3
  ChainMask full = chain_from_indices({0, 1, 2});
  CHECK(restrict_chain(sp, full, 0.5, Side::Before) == 0);
  CHECK(restrict_chain(sp, full, 0.5, Side::From) == full);
  CHECK(restrict_chain(sp, full, 9.0, Side::Before) == full);
  // cut exactly at t(x1): strict inequality puts x1 on the From side
  CHECK(restrict_chain(sp, full, 2.0, Side::Before) == chain_from_indices({0}));
  CHECK(restrict_chain(sp, full, 2.0, Side::From) == chain_from_indices({1, 2}));
  CHECK((restrict_chain(sp, full, 2.0, Side::Before) |
         restrict_chain(sp, full, 2.0, Side::From)) == full);
}

TEST_CASE("next_time is the first strictly later context time") {
  PointSpace sp = PointSpace::uniform(4, 4.0);
  CHECK(next_time(sp, 0, ChainMask{0}) == std::numeric_limits<double>::infinity());
  CHECK(next_time(sp, 0, chain_from_indices({2})) == doctest::Approx(3.0));
  CHECK(next_time(sp, 1, chain_from_indices({0, 1, 3})) == doctest::Approx(4.0));
}

TEST_CASE("table key round trip and atomic tables") {
  Table t;
  t[Role::Scalar] = chain_from_indices({0});
  t[Role::Gauge] = chain_from_indices({2, 3});
  CHECK(Table::from_key(t.key()) == t);
  CHECK(t.valid());
  t[Role::Ann] = chain_from_indices({0});
  CHECK(!t.valid());

  Table a = Table::atomic(Role::Cre, 1);
  CHECK(a[Role::Cre] == chain_from_indices({1}));
  CHECK(a.union_mask() == chain_from_indices({1}));
  CHECK(a.role_of(1) == Role::Cre);
}

TEST_CASE("point space validation") {
  CHECK_THROWS_AS(PointSpace({1.0, 1.0}, {1, 1}, {1, 1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(PointSpace({1.0, 2.0}, {1, 0}, {1, 1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(PointSpace({1.0}, {1}, {0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(PointSpace({1.0}, {1}, {1}, 0), std::invalid_argument);
}
