// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>

#include <nlohmann/json.hpp>

#include "fockkit/fock.hpp"

namespace fockkit {

int block_rows(const PointSpace& space, const Table& t);
int block_cols(const PointSpace& space, const Table& t);

/// A triangular operator-valued kernel: a sparse map from tables to complex
/// blocks. The block at a table maps the (ann|gauge) factor space tensor the
/// initial space into the (gauge|cre) one, factors in ascending time order,
/// initial space last. Absent table means zero block.
class Kernel {
 public:
  /// Unbound kernel; binds to a space on first assignment or +=.
  Kernel() = default;
  explicit Kernel(const PointSpace& space) : space_(&space) {}

  const PointSpace& space() const {
    if (!space_) throw std::logic_error("kernel not bound to a space");
    return *space_;
  }
  const std::map<std::uint64_t, Matrix>& blocks() const { return blocks_; }
  std::size_t support_size() const { return blocks_.size(); }

  void set_block(const Table& t, Matrix m);
  void add_block(const Table& t, const Matrix& m);
  /// nullptr when the table carries a zero block.
  const Matrix* block(const Table& t) const;

  Kernel& operator+=(const Kernel& o);
  Kernel& operator-=(const Kernel& o);
  Kernel& operator*=(cplx c);
  friend Kernel operator+(Kernel a, const Kernel& b) { return a += b; }
  friend Kernel operator-(Kernel a, const Kernel& b) { return a -= b; }
  friend Kernel operator*(cplx c, Kernel a) { return a *= c; }

  /// Square root of the summed squared Frobenius norms of all blocks.
  double total_frobenius() const;
  /// Largest spectral block norm.
  double max_block_norm() const;
  /// Drop blocks of Frobenius norm <= tol.
  void prune(double tol = 0.0);

  bool same_space(const Kernel& o) const { return space_ == o.space_; }

 private:
  void check_shape(const Table& t, const Matrix& m) const;
  const PointSpace* space_ = nullptr;
  std::map<std::uint64_t, Matrix> blocks_;
};

double kernel_distance(const Kernel& a, const Kernel& b);

/// Identity blocks on tables whose only nonempty chain is the gauge one.
Kernel unit_kernel(const PointSpace& space);

/// The star adjoint: swaps the ann and cre chains and conjugate-transposes
/// each block. An involution, represented by the operator adjoint.
Kernel star_adjoint(const Kernel& k);

/// The associative kernel product. On this finite space the composition at a
/// shared point carries the point's measure weight whenever a creation or
/// scalar leg of the left factor meets a scalar or annihilation leg of the
/// right one; these weighted terms vanish in a nonatomic continuum but are
/// required here for the representation to be exactly multiplicative.
Kernel kernel_product(const Kernel& x, const Kernel& y);

/// Per-point nonnegative weights for the four roles.
struct WeightQuadruple {
  std::array<WeightFunction, 4> comp;

  WeightFunction& operator[](Role r) { return comp[static_cast<int>(r)]; }
  const WeightFunction& operator[](Role r) const { return comp[static_cast<int>(r)]; }
  static WeightQuadruple constant(const PointSpace& space, double s, double a, double c, double g);
  double table_product(const PointSpace& space, const Table& t) const;
};

/// The quadruple composition matching kernel_product: the triangular-matrix
/// product of the per-point 3x3 arrays plus the same measure-weighted
/// composition terms.
WeightQuadruple quadruple_product(const PointSpace& space, const WeightQuadruple& a,
                                  const WeightQuadruple& g);
/// The zero-width limit: the plain per-point триangular matrix product.
WeightQuadruple triangular_quadruple_product(const PointSpace& space, const WeightQuadruple& a,
                                             const WeightQuadruple& g);

/// max over tables of ||block|| / prod of quadruple factors; +infinity when a
/// factor vanishes on a table with a nonzero block.
double relative_norm(const Kernel& k, const WeightQuadruple& alpha);

/// sum over scalar chains of w * ( sum over cre/ann chains (disjoint) of
/// w w max over gauge chains { ||block|| / q(gauge) }^2 r(cre|ann) )^(1/2).
double projective_norm(const Kernel& k, const WeightFunction& q, const WeightFunction& r);

/// norm_alpha * exp( sum_x w(x) (alpha_s(x) + r(x)(alpha_c(x)^2 + alpha_a(x)^2)/2) ),
/// requires alpha_gauge <= q pointwise.
double exponential_bound(double norm_alpha, const WeightQuadruple& alpha,
                         const WeightFunction& r, const WeightFunction& q,
                         const PointSpace& space);

/// Scalar product kernel: block at a table is the product of the quadruple
/// factors times the initial-space identity. Requires multiplicity 1
/// everywhere.
Kernel exponential_kernel(const PointSpace& space, const WeightQuadruple& alpha);

/// Tensor extra gauge points (with per-point matrices) into a block,
/// interleaving the new factors at their time positions on both sides.
Matrix insert_gauge_factors(const PointSpace& space, const Table& base, const Matrix& block,
                            ChainMask extra, const std::vector<Matrix>& mats);

/// Flat record list; blocks row-major, numbers round-trip bit-exactly.
nlohmann::ordered_json kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const PointSpace& space, const nlohmann::json& j);

}  // namespace fockkit
