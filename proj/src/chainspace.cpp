// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fockkit/chainspace.hpp"

#include <algorithm>
#include <cmath>

namespace fockkit {

std::vector<int> chain_indices(ChainMask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

ChainMask chain_from_indices(const std::vector<int>& idx) {
  ChainMask m = 0;
  for (int i : idx) {
    if (i < 0 || i >= 32) throw std::invalid_argument("chain index out of range");
    if (chain_contains(m, i)) throw std::invalid_argument("duplicate chain index");
    m |= chain_bit(i);
  }
  return m;
}

PointSpace::PointSpace(std::vector<double> times, std::vector<double> weights,
                       std::vector<int> multiplicities, int initial_dim)
    : times_(std::move(times)), weights_(std::move(weights)),
      dims_(std::move(multiplicities)), initial_dim_(initial_dim) {
  const std::size_t n = times_.size();
  if (n > 20) throw std::invalid_argument("point space too large (n > 20)");
  if (weights_.size() != n || dims_.size() != n)
    throw std::invalid_argument("times/weights/multiplicities length mismatch");
  if (initial_dim_ < 1) throw std::invalid_argument("initial_dim must be >= 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && !(times_[i] < times_[i + 1]))
      throw std::invalid_argument("times must be strictly increasing");
    if (!(weights_[i] > 0.0)) throw std::invalid_argument("weights must be positive");
    if (dims_[i] < 1) throw std::invalid_argument("multiplicities must be >= 1");
  }
}

PointSpace PointSpace::uniform(int n, double horizon, int multiplicity, int initial_dim) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (n > 0 && !(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  std::vector<double> t(n), w(n, n > 0 ? horizon / n : 0.0);
  std::vector<int> d(n, multiplicity);
  for (int i = 0; i < n; ++i) t[i] = horizon * (i + 1) / n;
  return PointSpace(std::move(t), std::move(w), std::move(d), initial_dim);
}

double PointSpace::chain_weight(ChainMask m) const {
  double p = 1.0;
  for (int i : chain_indices(m)) p *= weights_[i];
  return p;
}

int PointSpace::chain_kdim(ChainMask m) const {
  int p = 1;
  for (int i : chain_indices(m)) p *= dims_[i];
  return p;
}

ChainMask PointSpace::premask(double t) const {
  ChainMask m = 0;
  for (int i = 0; i < size(); ++i)
    if (times_[i] < t) m |= chain_bit(i);
  return m;
}

ChainMask PointSpace::window_mask(double t0, double t1) const {
  ChainMask m = 0;
  for (int i = 0; i < size(); ++i)
    if (times_[i] >= t0 && times_[i] < t1) m |= chain_bit(i);
  return m;
}

ChainMask PointSpace::prefix_mask(int k) const {
  if (k < 0 || k > size()) throw std::invalid_argument("cut index out of range");
  return k == 0 ? 0 : (chain_bit(k) - 1);
}

char role_char(Role r) {
  switch (r) {
    case Role::Scalar: return 's';
    case Role::Ann: return 'a';
    case Role::Cre: return 'c';
    case Role::Gauge: return 'g';
  }
  throw std::logic_error("bad role");
}

Role role_from_char(char c) {
  switch (c) {
    case 's': return Role::Scalar;
    case 'a': return Role::Ann;
    case 'c': return Role::Cre;
    case 'g': return Role::Gauge;
  }
  throw std::invalid_argument(std::string("bad role character: ") + c);
}

bool Table::valid() const {
  ChainMask seen = 0;
  for (ChainMask s : slot) {
    if (s & seen) return false;
    seen |= s;
  }
  return true;
}

Role Table::role_of(int x) const {
  for (Role r : kRoles)
    if (chain_contains((*this)[r], x)) return r;
  throw std::invalid_argument("point not in table");
}

Table Table::restricted(ChainMask keep) const {
  Table t;
  for (int i = 0; i < 4; ++i) t.slot[i] = slot[i] & keep;
  return t;
}

std::uint64_t Table::key() const {
  return std::uint64_t(slot[0]) | (std::uint64_t(slot[1]) << 16) |
         (std::uint64_t(slot[2]) << 32) | (std::uint64_t(slot[3]) << 48);
}

Table Table::from_key(std::uint64_t k) {
  Table t;
  for (int i = 0; i < 4; ++i) t.slot[i] = ChainMask((k >> (16 * i)) & 0xffffu);
  return t;
}

Table Table::atomic(Role r, int x) {
  Table t;
  t[r] = chain_bit(x);
  return t;
}

std::vector<ChainMask> enumerate_chains(const PointSpace& space) {
  const int n = space.size();
  std::vector<ChainMask> out;
  out.reserve(std::size_t(1) << n);
  for (ChainMask m = 0; m < (ChainMask{1} << n); ++m) out.push_back(m);
  std::stable_sort(out.begin(), out.end(), [](ChainMask a, ChainMask b) {
    if (chain_size(a) != chain_size(b)) return chain_size(a) < chain_size(b);
    return chain_indices(a) < chain_indices(b);
  });
  return out;
}

std::vector<Table> enumerate_tables(const PointSpace& space) {
  const int n = space.size();
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) count *= 5;
  std::vector<Table> out;
  out.reserve(count);
  std::vector<int> digit(n, 0);
  for (std::size_t c = 0; c < count; ++c) {
    Table t;
    for (int i = 0; i < n; ++i)
      if (digit[i] > 0) t.slot[digit[i] - 1] |= chain_bit(i);
    out.push_back(t);
    for (int i = 0; i < n; ++i) {
      if (++digit[i] < 5) break;
      digit[i] = 0;
    }
  }
  return out;
}

double chain_weight(const PointSpace& space, ChainMask m) { return space.chain_weight(m); }

cplx measure_sum(const PointSpace& space, const std::function<cplx(ChainMask)>& f,
                 const std::function<bool(ChainMask)>& support) {
  cplx acc = 0.0;
  ChainMask full = space.full_mask();
  for (ChainMask m = 0;; ++m) {
    if (!support || support(m)) acc += space.chain_weight(m) * f(m);
    if (m == full) break;
  }
  return acc;
}

std::function<bool(ChainMask)> disjoint_from(ChainMask avoid) {
  return [avoid](ChainMask m) { return (m & avoid) == 0; };
}

double fubini_residual(const PointSpace& space,
                       const std::function<cplx(ChainMask, ChainMask)>& f) {
  ChainMask full = space.full_mask();
  cplx lhs = 0.0, rhs = 0.0;
  for (ChainMask m = 0;; ++m) {
    const double wm = space.chain_weight(m);
    for_each_subset(m, [&](ChainMask u) { lhs += wm * f(u, m & ~u); });
    for_each_subset(full & ~m, [&](ChainMask k) {
      rhs += space.chain_weight(m) * space.chain_weight(k) * f(m, k);
    });
    if (m == full) break;
  }
  return std::abs(lhs - rhs);
}

ChainMask restrict_chain(const PointSpace& space, ChainMask m, double t, Side side) {
  ChainMask pre = space.premask(t);
  return side == Side::Before ? (m & pre) : (m & ~pre);
}

double next_time(const PointSpace& space, int x, ChainMask context) {
  double best = std::numeric_limits<double>::infinity();
  for (int i : chain_indices(context))
    if (space.time(i) > space.time(x)) best = std::min(best, space.time(i));
  return best;
}

double next_time(const PointSpace& space, int x, const Table& context) {
  return next_time(space, x, context.union_mask());
}

}  // namespace fockkit
