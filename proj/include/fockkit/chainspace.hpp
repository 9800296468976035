// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockkit {

using cplx = std::complex<double>;

/// A chain (finite subset of the point space) as a bitmask over point indices.
/// Bit i set means point i is a member; points are ordered by strictly
/// increasing time, so ascending bit order is ascending time order.
using ChainMask = std::uint32_t;

inline int chain_size(ChainMask m) { return std::popcount(m); }
inline bool chain_contains(ChainMask m, int x) { return (m >> x) & 1u; }
inline ChainMask chain_bit(int x) { return ChainMask{1} << x; }

std::vector<int> chain_indices(ChainMask m);
ChainMask chain_from_indices(const std::vector<int>& idx);

/// Iterate all subsets of `m`, including the empty set and `m` itself.
template <typename F>
void for_each_subset(ChainMask m, F&& f) {
  ChainMask s = m;
  while (true) {
    f(s);
    if (s == 0) break;
    s = (s - 1) & m;
  }
}

/// The finite, totally ordered measure space carrying the calculus: n points
/// with strictly increasing times t(x), positive measure weights w(x), local
/// multiplicities d(x) = dim k_x, and an initial space of dimension d_h.
class PointSpace {
 public:
  PointSpace(std::vector<double> times, std::vector<double> weights,
             std::vector<int> multiplicities, int initial_dim);

  /// n equally spaced points on (0, horizon], each of weight horizon/n.
  static PointSpace uniform(int n, double horizon, int multiplicity = 1,
                            int initial_dim = 1);

  int size() const { return static_cast<int>(times_.size()); }
  double time(int x) const { return times_.at(x); }
  double weight(int x) const { return weights_.at(x); }
  int dim(int x) const { return dims_.at(x); }
  int initial_dim() const { return initial_dim_; }

  ChainMask full_mask() const { return size() == 32 ? ~ChainMask{0} : (chain_bit(size()) - 1); }

  /// Product of point weights over the chain; 1 for the empty chain.
  double chain_weight(ChainMask m) const;
  /// Product of multiplicities over the chain; 1 for the empty chain.
  int chain_kdim(ChainMask m) const;

  /// Points with time strictly before t.
  ChainMask premask(double t) const;
  /// Points with t0 <= time < t1.
  ChainMask window_mask(double t0, double t1) const;
  /// Mask of the first k points (the k earliest times).
  ChainMask prefix_mask(int k) const;

 private:
  std::vector<double> times_;
  std::vector<double> weights_;
  std::vector<int> dims_;
  int initial_dim_;
};

/// Roles a point can occupy in a kernel argument. The pair (row, column) of
/// the triangular structure: Scalar = (-,+), Ann = (-,o), Cre = (o,+),
/// Gauge = (o,o).
enum class Role : int { Scalar = 0, Ann = 1, Cre = 2, Gauge = 3 };
constexpr std::array<Role, 4> kRoles{Role::Scalar, Role::Ann, Role::Cre, Role::Gauge};
char role_char(Role r);
Role role_from_char(char c);

/// A quadruple of pairwise disjoint chains, the argument of every kernel.
struct Table {
  std::array<ChainMask, 4> slot{0, 0, 0, 0};  // indexed by Role

  ChainMask& operator[](Role r) { return slot[static_cast<int>(r)]; }
  ChainMask operator[](Role r) const { return slot[static_cast<int>(r)]; }

  bool valid() const;
  ChainMask union_mask() const { return slot[0] | slot[1] | slot[2] | slot[3]; }
  /// Input chain of the kernel block at this table: ann | gauge.
  ChainMask in_mask() const { return slot[1] | slot[3]; }
  /// Output chain: gauge | cre.
  ChainMask out_mask() const { return slot[3] | slot[2]; }

  bool contains(int x) const { return chain_contains(union_mask(), x); }
  Role role_of(int x) const;

  /// Componentwise intersection with a point mask.
  Table restricted(ChainMask keep) const;

  std::uint64_t key() const;
  static Table from_key(std::uint64_t k);
  static Table atomic(Role r, int x);
  static Table empty() { return Table{}; }

  bool operator==(const Table& o) const { return slot == o.slot; }
  bool operator<(const Table& o) const { return key() < o.key(); }
};

struct AtomicTable {
  Role role;
  int point;
  Table table() const { return Table::atomic(role, point); }
};

/// All 2^n chains, ordered by size then lexicographically on the index lists.
std::vector<ChainMask> enumerate_chains(const PointSpace& space);

/// All 5^n tables (every point absent or in one of the four roles), in
/// base-5 counter order with point 0 as the least significant digit.
std::vector<Table> enumerate_tables(const PointSpace& space);

double chain_weight(const PointSpace& space, ChainMask m);

/// Discrete measure integral: sum over all chains of w(chain) * f(chain),
/// optionally restricted by a predicate.
cplx measure_sum(const PointSpace& space, const std::function<cplx(ChainMask)>& f,
                 const std::function<bool(ChainMask)>& support = nullptr);

/// Convenience predicate: chains disjoint from `avoid`.
std::function<bool(ChainMask)> disjoint_from(ChainMask avoid);

/// | sum_theta w(theta) sum_{v subset theta} f(v, theta\v)
///   - sum over disjoint pairs w(v) w(k) f(v, k) |.
double fubini_residual(const PointSpace& space,
                       const std::function<cplx(ChainMask, ChainMask)>& f);

enum class Side { Before, From };

/// Members with t(x) < t (Before) or t(x) >= t (From).
ChainMask restrict_chain(const PointSpace& space, ChainMask m, double t, Side side);

/// Smallest context time strictly after t(x); +infinity when none.
double next_time(const PointSpace& space, int x, ChainMask context);
double next_time(const PointSpace& space, int x, const Table& context);

}  // namespace fockkit
