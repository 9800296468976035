// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "fockkit/chainspace.hpp"

namespace fockkit {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Vectors and operators are stored in the orthonormal coordinates obtained by
// scaling the chain component psi(theta) with sqrt(w(theta)). Plain Euclidean
// inner products and conjugate transposes are then the Hilbert-space pairing
// and adjoint of the measure-weighted space; coefficient accessors convert
// back to psi(theta).
//
// Within a chain block, tensor factors are ordered by ascending time with the
// initial space as the last (fastest-varying) factor.

class FockBasis {
 public:
  explicit FockBasis(const PointSpace& space);
  /// Basis of the sector of chains omitting `excluded_point` (reduced space).
  FockBasis(const PointSpace& space, int excluded_point);

  const PointSpace& space() const { return *space_; }
  int dim() const { return dim_; }
  int excluded_point() const { return excluded_; }
  const std::vector<ChainMask>& chains() const { return chains_; }

  bool has_chain(ChainMask m) const;
  int offset(ChainMask m) const;
  /// kdim(m) * d_h, the size of the chain's coefficient block.
  int block_dim(ChainMask m) const;

  /// Product of d(p) over points of `m` strictly after x, times d_h:
  /// the flattening stride of x's factor within chain m's block.
  int stride_after(ChainMask m, int x) const;
  /// Product of d(p) over points of `m` strictly before x.
  int prefix_dim(ChainMask m, int x) const;

  Vector zero_vector() const { return Vector::Zero(dim_); }

 private:
  void build();
  const PointSpace* space_;
  int excluded_ = -1;
  std::vector<ChainMask> chains_;
  std::vector<int> offset_by_mask_;
  int dim_ = 0;
};

/// Positive per-point weight function q(x); products over chains via
/// weight_product. q(empty chain) = 1.
using WeightFunction = std::vector<double>;

WeightFunction constant_weight(const PointSpace& space, double value);
double weight_product(const PointSpace& space, const WeightFunction& q, ChainMask m);

/// Per-point d(x) x d(x) complex matrix field.
struct QField {
  std::vector<Matrix> q;

  static QField identity(const PointSpace& space);
  static QField zero(const PointSpace& space);
  static QField scalar(const PointSpace& space, cplx c);
  void validate(const PointSpace& space) const;
};

/// Coefficient accessors: `flat` indexes the chain block (local k indices in
/// ascending time order, initial index fastest).
void set_coefficient(const FockBasis& basis, Vector& v, ChainMask m, int flat, cplx value);
cplx coefficient(const FockBasis& basis, const Vector& v, ChainMask m, int flat);
/// Unit vector supported on the empty chain with initial index h.
Vector vacuum_unit(const FockBasis& basis, int h);

/// ( sum_theta w(theta) q(theta) |psi(theta)|^2 )^(1/2).
double weighted_norm(const FockBasis& basis, const Vector& v, const WeightFunction& q);

/// sup ||A chi||(1/p) / ||chi||(p), the largest singular value of
/// D(p)^-1 A D(p)^-1 with D(q) = diag sqrt(q(theta)).
double weighted_operator_norm(const FockBasis& basis, const Matrix& a, const WeightFunction& p);

/// Block-diagonal second quantisation of the field: acts as the tensor
/// product of Q(x) over the chain, identity on the initial space.
Matrix q_tensor(const FockBasis& basis, const QField& field);

/// Projector onto the empty-chain sector (q_tensor of the zero field).
Matrix vacuum_projector(const FockBasis& basis);

/// chi(. join x) as a vector over k_x tensor (reduced space), the local k_x
/// index major. Coefficient semantics: the reduced coefficients equal the
/// original coefficients on chains containing x.
Vector point_evaluation(const FockBasis& basis, const FockBasis& reduced, const Vector& v, int x);

/// Restriction to the sector of chains omitting the reduced basis' excluded
/// point (amplitudes copied).
Vector restrict_to(const FockBasis& basis, const FockBasis& reduced, const Vector& v);

double frobenius_distance(const Matrix& a, const Matrix& b);
double spectral_norm(const Matrix& a);

/// Kronecker product, first factor major.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace fockkit
