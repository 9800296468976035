// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "fockkit/calculus.hpp"
#include "fockkit/random.hpp"

using namespace fockkit;

namespace {
PointSpace mixed_space() { return PointSpace({1, 2, 3}, {0.4, 0.6, 0.3}, {1, 2, 1}, 2); }
}

TEST_CASE("epsilon of the unit kernel is the identity, exactly") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  CHECK(frobenius_distance(epsilon(basis, unit_kernel(sp)),
                           Matrix::Identity(basis.dim(), basis.dim())) == 0.0);
}

TEST_CASE("ampliation kernel represents A tensor identity") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  Matrix a = Matrix::Random(2, 2);
  Kernel k0(sp);
  k0.set_block(Table::empty(), a);
  const Matrix rep = epsilon(basis, mobius_transform(k0, QField::identity(sp)));
  Matrix expect = Matrix::Zero(basis.dim(), basis.dim());
  for (ChainMask m : basis.chains()) {
    const int kd = sp.chain_kdim(m);
    expect.block(basis.offset(m), basis.offset(m), kd * 2, kd * 2) =
        kron(Matrix::Identity(kd, kd), a);
  }
  CHECK(frobenius_distance(rep, expect) < 1e-14);
}

TEST_CASE("all-empty-table kernel acts on the vacuum sector only") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  Matrix a = Matrix::Random(2, 2);
  Kernel k0(sp);
  k0.set_block(Table::empty(), a);
  const Matrix rep = epsilon(basis, k0);
  Vector chi = random_vector(basis, 3);
  Vector out = rep * chi;
  CHECK((out.segment(0, 2) - a * chi.segment(0, 2)).norm() < 1e-14);
  CHECK(out.segment(2, basis.dim() - 2).norm() == 0.0);
}

TEST_CASE("adjoint law: epsilon(star) equals the operator adjoint") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  CHECK(epsilon_adjoint_residual(basis, unit_kernel(sp)) == 0.0);
  for (int seed = 0; seed < 30; ++seed) {
    const Kernel t = random_kernel(sp, 300 + seed, 0.6, 1.0);
    CHECK(epsilon_adjoint_residual(basis, t) < 1e-12);
  }
}

TEST_CASE("homomorphism law over mixed multiplicities") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const Kernel unit = unit_kernel(sp);
  CHECK(epsilon_homomorphism_residual(basis, unit, unit) < 1e-14);
  for (int seed = 0; seed < 30; ++seed) {
    const Kernel x = random_kernel(sp, 400 + seed, 0.6, 1.0);
    const Kernel y = random_kernel(sp, 500 + seed, 0.6, 1.0);
    CHECK(epsilon_homomorphism_residual(basis, x, y) < 1e-10);
    CHECK(epsilon_homomorphism_residual(basis, x, star_adjoint(x)) < 1e-10);
  }
}

TEST_CASE("epsilon is linear, exactly") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const Kernel x = random_kernel(sp, 600, 0.6, 1.0);
  const Kernel y = random_kernel(sp, 601, 0.6, 1.0);
  const cplx a{0.5, -1.0}, b{2.0, 0.25};
  Kernel combo = a * Kernel(x);
  combo += b * Kernel(y);
  CHECK(frobenius_distance(epsilon(basis, combo),
                           a * epsilon(basis, x) + b * epsilon(basis, y)) < 1e-13);
}

TEST_CASE("representation norm bound against the projective norm") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  for (int seed = 0; seed < 20; ++seed) {
    const Kernel t = random_kernel(sp, 700 + seed, 0.5, 1.0);
    const WeightFunction q = random_weight(sp, 800 + seed, 1.0, 2.5);
    const WeightFunction r = random_weight(sp, 900 + seed, 0.4, 2.0);
    WeightFunction p(sp.size());
    for (int i = 0; i < sp.size(); ++i) p[i] = q[i] + 1.0 / r[i];
    CHECK(weighted_operator_norm(basis, epsilon(basis, t), p) <=
          projective_norm(t, q, r) * (1 + 1e-12) + 1e-13);
  }
}

TEST_CASE("vacuum-adapted integrand reproduces the representation") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const Kernel t = random_kernel(sp, 1000, 0.6, 1.0);
  const IntegrandKernel m = tensor_q_integrand(t, QField::zero(sp));
  CHECK(frobenius_distance(multiple_qs_integral(basis, m, sp.full_mask()), epsilon(basis, t)) <
        1e-12);
}

TEST_CASE("reduced point actions recombine into the full representation") {
  // the point's measure weight relates epsilon restricted to x-sectors and
  // the stripped reduced operators
  PointSpace sp({1, 2}, {0.7, 0.4}, {2, 1}, 1);
  FockBasis basis(sp);
  const int x = 0;
  FockBasis red(sp, x);
  const Kernel t = random_kernel(sp, 1100, 0.8, 1.0);
  const Matrix full = epsilon(basis, t);
  const Matrix ea = epsilon_point(red, point_split(t, Role::Ann, x), Role::Ann, x);
  const double root = std::sqrt(sp.weight(x));

  // block of the full matrix from (chain containing x) to (chain without x)
  for (ChainMask a : red.chains())
    for (ChainMask b : red.chains()) {
      if (!red.has_chain(b)) continue;
      const ChainMask bx = b | chain_bit(x);
      const int dx = sp.dim(x);
      for (int kx = 0; kx < dx; ++kx)
        for (int i = 0; i < red.block_dim(a); ++i)
          for (int j = 0; j < red.block_dim(b); ++j) {
            // full-basis column index of (bx; kx major at x's slot)
            const int stride = basis.stride_after(bx, x);
            const int pref_cols = j / stride, rest = j % stride;
            const int col = basis.offset(bx) + (pref_cols * dx + kx) * stride + rest;
            const cplx lhs = full(basis.offset(a) + i, col);
            const cplx rhs = root * ea(red.offset(a) + i, kx * red.dim() + red.offset(b) + j);
            CHECK(std::abs(lhs - rhs) < 1e-13);
          }
    }
}
