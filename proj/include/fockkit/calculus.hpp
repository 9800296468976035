// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fockkit/repr.hpp"

namespace fockkit {

/// Sparse integrand: a map from disjoint table pairs (u, k) to blocks. A
/// block is stored in the layout of the union table u | k, so counting
/// integrals are direct block sums.
class IntegrandKernel {
 public:
  explicit IntegrandKernel(const PointSpace& space) : space_(&space) {}

  const PointSpace& space() const { return *space_; }
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  const std::map<Key, Matrix>& blocks() const { return blocks_; }

  void set_block(const Table& u, const Table& k, Matrix m);
  void add_block(const Table& u, const Table& k, const Matrix& m);
  const Matrix* block(const Table& u, const Table& k) const;

  IntegrandKernel& operator+=(const IntegrandKernel& o);
  IntegrandKernel& operator-=(const IntegrandKernel& o);
  double total_frobenius() const;

 private:
  const PointSpace* space_;
  std::map<Key, Matrix> blocks_;
};

/// Multiple counting integral: sum over sub-table assignments whose u part
/// lies inside `premask`, weight-free.
Kernel counting_integral(const IntegrandKernel& m, ChainMask premask);

/// A kernel process sampled at the n+1 cuts; cut k is any time with exactly
/// the first k points strictly in the past.
class KernelProcess {
 public:
  static KernelProcess from_integrand(const IntegrandKernel& m);
  static KernelProcess constant(const Kernel& k);
  static KernelProcess from_kernels(const PointSpace& space, std::vector<Kernel> at_cut);

  const PointSpace& space() const { return *space_; }
  int cuts() const { return static_cast<int>(at_cut_.size()); }
  const Kernel& at_cut(int k) const { return at_cut_.at(k); }
  const Kernel& at_time(double t) const;

 private:
  KernelProcess(const PointSpace& space, std::vector<Kernel> k)
      : space_(&space), at_cut_(std::move(k)) {}
  const PointSpace* space_;
  std::vector<Kernel> at_cut_;
};

/// Restriction to tables carrying x in the given role. Blocks keep the
/// point's factor, so the result re-enters counting sums unchanged.
Kernel point_split(const Kernel& k, Role role, int x);
/// Restriction to tables not containing x at all.
Kernel restrict_point_free(const Kernel& k, int x);
/// Adjoin a multiplicity-1 point to every support table in `role`; the
/// kernel must not already touch x.
Kernel embed_point_scalar(const Kernel& k, Role role, int x);

/// M(u) = sum over gauge subsets of T(u with gauge -> subset) tensor
/// (-Q) on the removed points.
Kernel meyer_transform(const Kernel& t, const QField& q);
/// The inverse subset sum with +Q factors.
Kernel mobius_transform(const Kernel& m, const QField& q);
/// The integrand (u, k) -> M(u) tensor Q(k) supported on gauge-only k.
IntegrandKernel tensor_q_integrand(const Kernel& m, const QField& q);

struct QMeyerTransform {
  std::vector<Kernel> at_cut;
  bool time_dependent = false;
};
QMeyerTransform q_meyer_process_transform(const KernelProcess& proc, const QField& q);

/// True when every counting integral of the integrand vanishes at every cut.
bool is_null_integrand(const IntegrandKernel& m, double tol = 1e-12);

struct AdaptednessReport {
  bool adapted = true;
  Table witness{};
  std::string reason;
};

/// Blocks must vanish when a non-gauge point lies at or after the cut, and
/// post-cut gauge points must act as tensor factors Q(x) on the pre-cut
/// block.
AdaptednessReport is_q_adapted(const Kernel& k, const QField& q, ChainMask premask,
                               double tol = 1e-10);
AdaptednessReport is_q_adapted(const KernelProcess& proc, const QField& q, double tol = 1e-10);

/// Role- and point-indexed single-integral integrand; each entry is a kernel
/// supported on tables carrying the point in the role.
class PointIntegrand {
 public:
  explicit PointIntegrand(const PointSpace& space) : space_(&space) {}
  const PointSpace& space() const { return *space_; }
  void set(Role role, int x, Kernel k);
  const Kernel* get(Role role, int x) const;
  const std::map<int, Kernel>& entries(Role role) const { return d_[static_cast<int>(role)]; }

 private:
  const PointSpace* space_;
  std::array<std::map<int, Kernel>, 4> d_;
};

/// Single counting integral: the plain sum of the entry kernels over points
/// strictly before the cut.
Kernel single_counting_integral(const PointIntegrand& d, ChainMask premask);

/// Kernel of the canonical integrator measure for one role over a window.
Kernel canonical_measure_kernel(const PointIntegrand& d, Role role, double t0, double t1);
/// Its representation.
Matrix canonical_measure(const FockBasis& basis, const PointIntegrand& d, Role role, double t0,
                         double t1);

/// epsilon of the counting integral.
Matrix multiple_qs_integral(const FockBasis& basis, const IntegrandKernel& m, ChainMask premask);
/// The same operator assembled by the nested chain-split sums of the
/// operator-valued multiple integral; an independent code path used to check
/// the commuting-square identity.
Matrix multiple_qs_integral_direct(const FockBasis& basis, const IntegrandKernel& m,
                                   ChainMask premask);

/// For a process T = counting integral of M, the difference of the point
/// splits across the cut at x equals this partial counting sum; supported on
/// tables carrying x in the role.
Kernel integrand_point_derivative(const IntegrandKernel& m, Role role, int x, ChainMask premask);

struct Lemma2Report {
  bool hypothesis_ok = false;
  double c = 0.0;
  double lhs = 0.0;
  bool pass = false;
};

/// Counting-integral norm bound: when every pair block obeys
/// ||M(u,k)|| <= c beta(u) gamma(k), the integral up to the cut is bounded
/// relative to alpha = beta (before the cut) + gamma. c <= 0 means derive
/// the smallest admissible constant.
Lemma2Report lemma2_norm_bound(const IntegrandKernel& m, const WeightQuadruple& beta,
                               const WeightQuadruple& gamma, ChainMask premask, double c = 0.0);

/// || (T chi)(. join x) - (Q(x) tensor T_reduced) chi(. join x) ||.
double q_commutator_residual(const FockBasis& basis, const FockBasis& reduced, const Kernel& t,
                             const QField& q, int x, const Vector& chi);

}  // namespace fockkit
