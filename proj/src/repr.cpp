// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fockkit/repr.hpp"

#include <cmath>

namespace fockkit {

Matrix epsilon(const FockBasis& basis, const Kernel& k) {
  const PointSpace& sp = basis.space();
  Matrix g = Matrix::Zero(basis.dim(), basis.dim());
  for (const auto& [key, b] : k.blocks()) {
    const Table t = Table::from_key(key);
    const ChainMask out = t.out_mask(), in = t.in_mask();
    const double coef = std::sqrt(sp.chain_weight(t[Role::Cre]) * sp.chain_weight(t[Role::Ann])) *
                        sp.chain_weight(t[Role::Scalar]);
    g.block(basis.offset(out), basis.offset(in), b.rows(), b.cols()) += coef * b;
  }
  return g;
}

Matrix epsilon_point(const FockBasis& reduced, const Kernel& k, Role role, int x) {
  const PointSpace& sp = reduced.space();
  if (reduced.excluded_point() != x)
    throw std::invalid_argument("reduced basis excludes wrong point");
  const int n = reduced.dim(), dx = sp.dim(x);
  const ChainMask xbit = chain_bit(x);

  int rows = n, cols = n;
  if (role == Role::Cre || role == Role::Gauge) rows = dx * n;
  if (role == Role::Ann || role == Role::Gauge) cols = dx * n;
  Matrix e = Matrix::Zero(rows, cols);

  for (const auto& [key, b] : k.blocks()) {
    const Table t = Table::from_key(key);
    if (!chain_contains(t[role], x)) continue;
    const ChainMask out = t.out_mask(), in = t.in_mask();
    const ChainMask out_red = out & ~xbit, in_red = in & ~xbit;
    double coef = std::sqrt(sp.chain_weight(t[Role::Cre] & ~xbit) *
                            sp.chain_weight(t[Role::Ann] & ~xbit)) *
                  sp.chain_weight(t[Role::Scalar] & ~xbit);
    const int roff = reduced.offset(out_red), coff = reduced.offset(in_red);

    if (role == Role::Scalar) {
      e.block(roff, coff, b.rows(), b.cols()) += coef * b;
      continue;
    }
    const int out_stride = reduced.stride_after(out, x), out_pref = reduced.prefix_dim(out, x);
    const int in_stride = reduced.stride_after(in, x), in_pref = reduced.prefix_dim(in, x);
    switch (role) {
      case Role::Ann:
        for (int a = 0; a < in_pref; ++a)
          for (int kx = 0; kx < dx; ++kx)
            for (int bb = 0; bb < in_stride; ++bb)
              e.block(roff, kx * n + coff + a * in_stride + bb, b.rows(), 1) +=
                  coef * b.col((a * dx + kx) * in_stride + bb);
        break;
      case Role::Cre:
        for (int a = 0; a < out_pref; ++a)
          for (int kx = 0; kx < dx; ++kx)
            for (int bb = 0; bb < out_stride; ++bb)
              e.block(kx * n + roff + a * out_stride + bb, coff, 1, b.cols()) +=
                  coef * b.row((a * dx + kx) * out_stride + bb);
        break;
      case Role::Gauge:
        for (int ar = 0; ar < out_pref; ++ar)
          for (int kr = 0; kr < dx; ++kr)
            for (int br = 0; br < out_stride; ++br)
              for (int ac = 0; ac < in_pref; ++ac)
                for (int kc = 0; kc < dx; ++kc)
                  for (int bc = 0; bc < in_stride; ++bc)
                    e(kr * n + roff + ar * out_stride + br,
                      kc * n + coff + ac * in_stride + bc) +=
                        coef * b((ar * dx + kr) * out_stride + br, (ac * dx + kc) * in_stride + bc);
        break;
      default:
        break;
    }
  }
  return e;
}

Matrix epsilon_corner(const FockBasis& reduced, const Kernel& k, int x) {
  const PointSpace& sp = reduced.space();
  if (reduced.excluded_point() != x)
    throw std::invalid_argument("reduced basis excludes wrong point");
  Matrix e = Matrix::Zero(reduced.dim(), reduced.dim());
  for (const auto& [key, b] : k.blocks()) {
    const Table t = Table::from_key(key);
    if (t.contains(x)) continue;
    const double coef = std::sqrt(sp.chain_weight(t[Role::Cre]) * sp.chain_weight(t[Role::Ann])) *
                        sp.chain_weight(t[Role::Scalar]);
    e.block(reduced.offset(t.out_mask()), reduced.offset(t.in_mask()), b.rows(), b.cols()) +=
        coef * b;
  }
  return e;
}

double epsilon_adjoint_residual(const FockBasis& basis, const Kernel& k) {
  return frobenius_distance(epsilon(basis, k).adjoint(), epsilon(basis, star_adjoint(k)));
}

double epsilon_homomorphism_residual(const FockBasis& basis, const Kernel& x, const Kernel& y) {
  return frobenius_distance(epsilon(basis, x) * epsilon(basis, y),
                            epsilon(basis, kernel_product(x, y)));
}

}  // namespace fockkit
