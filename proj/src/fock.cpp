// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fockkit/fock.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace fockkit {

FockBasis::FockBasis(const PointSpace& space) : space_(&space) { build(); }

FockBasis::FockBasis(const PointSpace& space, int excluded_point)
    : space_(&space), excluded_(excluded_point) {
  if (excluded_point < 0 || excluded_point >= space.size())
    throw std::invalid_argument("excluded point out of range");
  build();
}

void FockBasis::build() {
  offset_by_mask_.assign(std::size_t(1) << space_->size(), -1);
  for (ChainMask m : enumerate_chains(*space_)) {
    if (excluded_ >= 0 && chain_contains(m, excluded_)) continue;
    chains_.push_back(m);
    offset_by_mask_[m] = dim_;
    dim_ += space_->chain_kdim(m) * space_->initial_dim();
  }
}

bool FockBasis::has_chain(ChainMask m) const { return offset_by_mask_[m] >= 0; }

int FockBasis::offset(ChainMask m) const {
  int o = offset_by_mask_.at(m);
  if (o < 0) throw std::invalid_argument("chain not in basis sector");
  return o;
}

int FockBasis::block_dim(ChainMask m) const {
  return space_->chain_kdim(m) * space_->initial_dim();
}

int FockBasis::stride_after(ChainMask m, int x) const {
  int s = space_->initial_dim();
  for (int p : chain_indices(m))
    if (p > x) s *= space_->dim(p);
  return s;
}

int FockBasis::prefix_dim(ChainMask m, int x) const {
  int s = 1;
  for (int p : chain_indices(m))
    if (p < x) s *= space_->dim(p);
  return s;
}

WeightFunction constant_weight(const PointSpace& space, double value) {
  return WeightFunction(space.size(), value);
}

double weight_product(const PointSpace& space, const WeightFunction& q, ChainMask m) {
  if (static_cast<int>(q.size()) != space.size())
    throw std::invalid_argument("weight function size mismatch");
  double p = 1.0;
  for (int i : chain_indices(m)) p *= q[i];
  return p;
}

QField QField::identity(const PointSpace& space) {
  QField f;
  for (int i = 0; i < space.size(); ++i)
    f.q.push_back(Matrix::Identity(space.dim(i), space.dim(i)));
  return f;
}

QField QField::zero(const PointSpace& space) {
  QField f;
  for (int i = 0; i < space.size(); ++i)
    f.q.push_back(Matrix::Zero(space.dim(i), space.dim(i)));
  return f;
}

QField QField::scalar(const PointSpace& space, cplx c) {
  QField f;
  for (int i = 0; i < space.size(); ++i)
    f.q.push_back(c * Matrix::Identity(space.dim(i), space.dim(i)));
  return f;
}

void QField::validate(const PointSpace& space) const {
  if (static_cast<int>(q.size()) != space.size())
    throw std::invalid_argument("Q field size mismatch");
  for (int i = 0; i < space.size(); ++i)
    if (q[i].rows() != space.dim(i) || q[i].cols() != space.dim(i))
      throw std::invalid_argument("Q field shape mismatch at point " + std::to_string(i));
}

void set_coefficient(const FockBasis& basis, Vector& v, ChainMask m, int flat, cplx value) {
  if (v.size() != basis.dim()) throw std::invalid_argument("vector dimension mismatch");
  v[basis.offset(m) + flat] = value * std::sqrt(basis.space().chain_weight(m));
}

cplx coefficient(const FockBasis& basis, const Vector& v, ChainMask m, int flat) {
  if (v.size() != basis.dim()) throw std::invalid_argument("vector dimension mismatch");
  return v[basis.offset(m) + flat] / std::sqrt(basis.space().chain_weight(m));
}

Vector vacuum_unit(const FockBasis& basis, int h) {
  Vector v = basis.zero_vector();
  set_coefficient(basis, v, 0, h, 1.0);
  return v;
}

double weighted_norm(const FockBasis& basis, const Vector& v, const WeightFunction& q) {
  if (v.size() != basis.dim()) throw std::invalid_argument("vector dimension mismatch");
  double acc = 0.0;
  for (ChainMask m : basis.chains()) {
    double qm = weight_product(basis.space(), q, m);
    acc += qm * v.segment(basis.offset(m), basis.block_dim(m)).squaredNorm();
  }
  return std::sqrt(acc);
}

double weighted_operator_norm(const FockBasis& basis, const Matrix& a, const WeightFunction& p) {
  if (a.rows() != basis.dim() || a.cols() != basis.dim())
    throw std::invalid_argument("operator dimension mismatch");
  for (double v : p)
    if (!(v > 0.0)) throw std::invalid_argument("operator norm weight must be positive");
  Vector d(basis.dim());
  for (ChainMask m : basis.chains()) {
    double s = 1.0 / std::sqrt(weight_product(basis.space(), p, m));
    d.segment(basis.offset(m), basis.block_dim(m)).setConstant(s);
  }
  Matrix scaled = d.asDiagonal() * a * d.asDiagonal();
  return spectral_norm(scaled);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix q_tensor(const FockBasis& basis, const QField& field) {
  field.validate(basis.space());
  Matrix out = Matrix::Zero(basis.dim(), basis.dim());
  const int dh = basis.space().initial_dim();
  for (ChainMask m : basis.chains()) {
    Matrix block = Matrix::Identity(1, 1);
    for (int p : chain_indices(m)) block = kron(block, field.q[p]);
    block = kron(block, Matrix::Identity(dh, dh));
    out.block(basis.offset(m), basis.offset(m), block.rows(), block.cols()) = block;
  }
  return out;
}

Matrix vacuum_projector(const FockBasis& basis) {
  return q_tensor(basis, QField::zero(basis.space()));
}

Vector point_evaluation(const FockBasis& basis, const FockBasis& reduced, const Vector& v, int x) {
  if (reduced.excluded_point() != x) throw std::invalid_argument("reduced basis excludes wrong point");
  if (v.size() != basis.dim()) throw std::invalid_argument("vector dimension mismatch");
  const PointSpace& sp = basis.space();
  const int dx = sp.dim(x);
  const double root = std::sqrt(sp.weight(x));
  Vector out = Vector::Zero(dx * reduced.dim());
  for (ChainMask m : basis.chains()) {
    if (!chain_contains(m, x)) continue;
    ChainMask red = m & ~chain_bit(x);
    const int stride = basis.stride_after(m, x);
    const int pref = basis.prefix_dim(m, x);
    const int off = basis.offset(m), roff = reduced.offset(red);
    for (int a = 0; a < pref; ++a)
      for (int k = 0; k < dx; ++k)
        for (int b = 0; b < stride; ++b)
          out[k * reduced.dim() + roff + a * stride + b] =
              v[off + (a * dx + k) * stride + b] / root;
  }
  return out;
}

Vector restrict_to(const FockBasis& basis, const FockBasis& reduced, const Vector& v) {
  if (v.size() != basis.dim()) throw std::invalid_argument("vector dimension mismatch");
  Vector out = Vector::Zero(reduced.dim());
  for (ChainMask m : reduced.chains())
    out.segment(reduced.offset(m), reduced.block_dim(m)) =
        v.segment(basis.offset(m), basis.block_dim(m));
  return out;
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix dimension mismatch");
  return (a - b).norm();
}

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace fockkit
