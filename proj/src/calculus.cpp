// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fockkit/calculus.hpp"

#include <cmath>

namespace fockkit {

namespace {
Table table_union(const Table& a, const Table& b) {
  Table u;
  for (int i = 0; i < 4; ++i) u.slot[i] = a.slot[i] | b.slot[i];
  return u;
}

std::vector<Matrix> field_on(const QField& q, ChainMask m, cplx scale) {
  std::vector<Matrix> mats;
  for (int p : chain_indices(m)) mats.push_back(scale * q.q[p]);
  return mats;
}
}  // namespace

void IntegrandKernel::set_block(const Table& u, const Table& k, Matrix m) {
  if (!u.valid() || !k.valid() || (u.union_mask() & k.union_mask()))
    throw std::invalid_argument("integrand tables are not disjoint");
  Table whole = table_union(u, k);
  if (m.rows() != block_rows(*space_, whole) || m.cols() != block_cols(*space_, whole))
    throw std::invalid_argument("integrand block shape does not match the union table");
  blocks_[{u.key(), k.key()}] = std::move(m);
}

void IntegrandKernel::add_block(const Table& u, const Table& k, const Matrix& m) {
  auto it = blocks_.find(Key{u.key(), k.key()});
  if (it == blocks_.end())
    set_block(u, k, m);
  else
    it->second += m;
}

const Matrix* IntegrandKernel::block(const Table& u, const Table& k) const {
  auto it = blocks_.find(Key{u.key(), k.key()});
  return it == blocks_.end() ? nullptr : &it->second;
}

IntegrandKernel& IntegrandKernel::operator+=(const IntegrandKernel& o) {
  if (space_ != o.space_) throw std::invalid_argument("integrands on different spaces");
  for (const auto& [key, b] : o.blocks_) {
    auto it = blocks_.find(key);
    if (it == blocks_.end())
      blocks_[key] = b;
    else
      it->second += b;
  }
  return *this;
}

IntegrandKernel& IntegrandKernel::operator-=(const IntegrandKernel& o) {
  if (space_ != o.space_) throw std::invalid_argument("integrands on different spaces");
  for (const auto& [key, b] : o.blocks_) {
    auto it = blocks_.find(key);
    if (it == blocks_.end())
      blocks_[key] = -b;
    else
      it->second -= b;
  }
  return *this;
}

double IntegrandKernel::total_frobenius() const {
  double acc = 0.0;
  for (const auto& [key, b] : blocks_) acc += b.squaredNorm();
  return std::sqrt(acc);
}

Kernel counting_integral(const IntegrandKernel& m, ChainMask premask) {
  Kernel out(m.space());
  for (const auto& [key, b] : m.blocks()) {
    Table u = Table::from_key(key.first);
    if (u.union_mask() & ~premask) continue;
    out.add_block(table_union(u, Table::from_key(key.second)), b);
  }
  out.prune();
  return out;
}

KernelProcess KernelProcess::from_integrand(const IntegrandKernel& m) {
  const PointSpace& sp = m.space();
  std::vector<Kernel> cuts;
  for (int k = 0; k <= sp.size(); ++k) cuts.push_back(counting_integral(m, sp.prefix_mask(k)));
  return KernelProcess(sp, std::move(cuts));
}

KernelProcess KernelProcess::constant(const Kernel& k) {
  return KernelProcess(k.space(), std::vector<Kernel>(k.space().size() + 1, k));
}

KernelProcess KernelProcess::from_kernels(const PointSpace& space, std::vector<Kernel> at_cut) {
  if (static_cast<int>(at_cut.size()) != space.size() + 1)
    throw std::invalid_argument("a process needs one kernel per cut (n+1)");
  return KernelProcess(space, std::move(at_cut));
}

const Kernel& KernelProcess::at_time(double t) const {
  return at_cut_.at(chain_size(space_->premask(t)));
}

Kernel point_split(const Kernel& k, Role role, int x) {
  Kernel out(k.space());
  for (const auto& [key, b] : k.blocks()) {
    Table t = Table::from_key(key);
    if (chain_contains(t[role], x)) out.set_block(t, b);
  }
  return out;
}

Kernel restrict_point_free(const Kernel& k, int x) {
  Kernel out(k.space());
  for (const auto& [key, b] : k.blocks()) {
    Table t = Table::from_key(key);
    if (!t.contains(x)) out.set_block(t, b);
  }
  return out;
}

Kernel embed_point_scalar(const Kernel& k, Role role, int x) {
  if (k.space().dim(x) != 1)
    throw std::invalid_argument("scalar embedding requires multiplicity 1 at the point");
  Kernel out(k.space());
  for (const auto& [key, b] : k.blocks()) {
    Table t = Table::from_key(key);
    if (t.contains(x)) throw std::invalid_argument("kernel already touches the embedded point");
    t[role] |= chain_bit(x);
    out.set_block(t, b);
  }
  return out;
}

namespace {
Kernel gauge_spread(const Kernel& k, const QField& q, cplx scale) {
  q.validate(k.space());
  const PointSpace& sp = k.space();
  Kernel out(sp);
  for (const auto& [key, b] : k.blocks()) {
    const Table t = Table::from_key(key);
    const ChainMask free = sp.full_mask() & ~t.union_mask();
    for_each_subset(free, [&](ChainMask e) {
      Table big = t;
      big[Role::Gauge] |= e;
      out.add_block(big, e == 0 ? b : insert_gauge_factors(sp, t, b, e, field_on(q, e, scale)));
    });
  }
  out.prune();
  return out;
}
}  // namespace

Kernel meyer_transform(const Kernel& t, const QField& q) { return gauge_spread(t, q, -1.0); }

Kernel mobius_transform(const Kernel& m, const QField& q) { return gauge_spread(m, q, 1.0); }

IntegrandKernel tensor_q_integrand(const Kernel& m, const QField& q) {
  q.validate(m.space());
  const PointSpace& sp = m.space();
  IntegrandKernel out(sp);
  for (const auto& [key, b] : m.blocks()) {
    const Table t = Table::from_key(key);
    const ChainMask free = sp.full_mask() & ~t.union_mask();
    for_each_subset(free, [&](ChainMask e) {
      Table gauge_only;
      gauge_only[Role::Gauge] = e;
      out.add_block(t, gauge_only,
                    e == 0 ? b : insert_gauge_factors(sp, t, b, e, field_on(q, e, 1.0)));
    });
  }
  return out;
}

QMeyerTransform q_meyer_process_transform(const KernelProcess& proc, const QField& q) {
  QMeyerTransform out;
  for (int k = 0; k < proc.cuts(); ++k) {
    out.at_cut.push_back(meyer_transform(proc.at_cut(k), q));
    if (k > 0 && kernel_distance(out.at_cut[k], out.at_cut[k - 1]) > 1e-12)
      out.time_dependent = true;
  }
  return out;
}

bool is_null_integrand(const IntegrandKernel& m, double tol) {
  const double scale = std::max(1.0, m.total_frobenius());
  for (int k = 0; k <= m.space().size(); ++k)
    if (counting_integral(m, m.space().prefix_mask(k)).total_frobenius() > tol * scale)
      return false;
  return true;
}

AdaptednessReport is_q_adapted(const Kernel& k, const QField& q, ChainMask premask, double tol) {
  q.validate(k.space());
  const PointSpace& sp = k.space();
  if (sp.size() > 8) throw std::invalid_argument("adaptedness scan limited to n <= 8");
  const double scale = std::max(1.0, k.max_block_norm());
  for (const Table& t : enumerate_tables(sp)) {
    const ChainMask post_nongauge =
        (t[Role::Scalar] | t[Role::Ann] | t[Role::Cre]) & ~premask;
    const ChainMask post_gauge = t[Role::Gauge] & ~premask;
    const Matrix* b = k.block(t);
    if (post_nongauge) {
      if (b && b->norm() > tol * scale)
        return {false, t, "nonzero block with a non-gauge point past the cut"};
      continue;
    }
    if (!post_gauge) continue;
    const Table base = t.restricted(premask);
    const Matrix* base_block = k.block(base);
    Matrix expected = Matrix::Zero(block_rows(sp, t), block_cols(sp, t));
    if (base_block)
      expected =
          insert_gauge_factors(sp, base, *base_block, post_gauge, field_on(q, post_gauge, 1.0));
    const Matrix actual = b ? *b : Matrix::Zero(expected.rows(), expected.cols());
    if ((actual - expected).norm() > tol * scale)
      return {false, t, "post-cut gauge points do not factor through Q"};
  }
  return {};
}

AdaptednessReport is_q_adapted(const KernelProcess& proc, const QField& q, double tol) {
  for (int k = 0; k < proc.cuts(); ++k) {
    AdaptednessReport r = is_q_adapted(proc.at_cut(k), q, proc.space().prefix_mask(k), tol);
    if (!r.adapted) {
      r.reason += " (cut " + std::to_string(k) + ")";
      return r;
    }
  }
  return {};
}

void PointIntegrand::set(Role role, int x, Kernel k) {
  for (const auto& [key, b] : k.blocks())
    if (!chain_contains(Table::from_key(key)[role], x))
      throw std::invalid_argument("point integrand entry must carry its point in its role");
  d_[static_cast<int>(role)].insert_or_assign(x, std::move(k));
}

const Kernel* PointIntegrand::get(Role role, int x) const {
  auto it = d_[static_cast<int>(role)].find(x);
  return it == d_[static_cast<int>(role)].end() ? nullptr : &it->second;
}

Kernel single_counting_integral(const PointIntegrand& d, ChainMask premask) {
  Kernel out(d.space());
  for (Role r : kRoles)
    for (const auto& [x, k] : d.entries(r))
      if (chain_contains(premask, x)) out += k;
  out.prune();
  return out;
}

Kernel canonical_measure_kernel(const PointIntegrand& d, Role role, double t0, double t1) {
  Kernel out(d.space());
  for (const auto& [x, k] : d.entries(role)) {
    const double t = d.space().time(x);
    if (t >= t0 && t < t1) out += k;
  }
  return out;
}

Matrix canonical_measure(const FockBasis& basis, const PointIntegrand& d, Role role, double t0,
                         double t1) {
  return epsilon(basis, canonical_measure_kernel(d, role, t0, t1));
}

Matrix multiple_qs_integral(const FockBasis& basis, const IntegrandKernel& m, ChainMask premask) {
  return epsilon(basis, counting_integral(m, premask));
}

Matrix multiple_qs_integral_direct(const FockBasis& basis, const IntegrandKernel& m,
                                   ChainMask premask) {
  const PointSpace& sp = basis.space();
  const ChainMask full = sp.full_mask();
  Matrix g = Matrix::Zero(basis.dim(), basis.dim());
  for (ChainMask a : basis.chains()) {
    for_each_subset(a & premask, [&](ChainMask ug) {
      for_each_subset((a & ~ug) & premask, [&](ChainMask uc) {
        const ChainMask rest = a & ~ug & ~uc;
        for_each_subset((full & ~a) & premask, [&](ChainMask ua) {
          for_each_subset((full & ~a & ~ua) & premask, [&](ChainMask us) {
            Table u;
            u[Role::Scalar] = us;
            u[Role::Ann] = ua;
            u[Role::Cre] = uc;
            u[Role::Gauge] = ug;
            for_each_subset(rest, [&](ChainMask kg) {
              const ChainMask kc = rest & ~kg;
              for_each_subset(full & ~a & ~ua & ~us, [&](ChainMask ka) {
                for_each_subset(full & ~a & ~ua & ~us & ~ka, [&](ChainMask ks) {
                  Table kt;
                  kt[Role::Scalar] = ks;
                  kt[Role::Ann] = ka;
                  kt[Role::Cre] = kc;
                  kt[Role::Gauge] = kg;
                  const Matrix* b = m.block(u, kt);
                  if (!b) return;
                  const ChainMask bchain = ug | ua | kg | ka;
                  const double coef = std::sqrt(sp.chain_weight(uc | kc) *
                                                sp.chain_weight(ua | ka)) *
                                      sp.chain_weight(us) * sp.chain_weight(ks);
                  g.block(basis.offset(a), basis.offset(bchain), b->rows(), b->cols()) +=
                      coef * (*b);
                });
              });
            });
          });
        });
      });
    });
  }
  return g;
}

Kernel integrand_point_derivative(const IntegrandKernel& m, Role role, int x, ChainMask premask) {
  Kernel out(m.space());
  const ChainMask xbit = chain_bit(x);
  for (const auto& [key, b] : m.blocks()) {
    const Table u = Table::from_key(key.first);
    if (!chain_contains(u[role], x)) continue;
    if ((u.union_mask() & ~xbit) & ~premask) continue;
    out.add_block(table_union(u, Table::from_key(key.second)), b);
  }
  out.prune();
  return out;
}

Lemma2Report lemma2_norm_bound(const IntegrandKernel& m, const WeightQuadruple& beta,
                               const WeightQuadruple& gamma, ChainMask premask, double c) {
  Lemma2Report rep;
  const PointSpace& sp = m.space();
  double min_c = 0.0;
  bool bounded = true;
  for (const auto& [key, b] : m.blocks()) {
    const double nb = spectral_norm(b);
    if (nb == 0.0) continue;
    const double denom = beta.table_product(sp, Table::from_key(key.first)) *
                         gamma.table_product(sp, Table::from_key(key.second));
    if (denom == 0.0) {
      bounded = false;
      break;
    }
    min_c = std::max(min_c, nb / denom);
  }
  if (!bounded) return rep;
  rep.c = c > 0.0 ? c : min_c;
  rep.hypothesis_ok = rep.c >= min_c * (1.0 - 1e-12);
  if (!rep.hypothesis_ok) return rep;

  WeightQuadruple alpha = WeightQuadruple::constant(sp, 0, 0, 0, 0);
  for (Role r : kRoles)
    for (int i = 0; i < sp.size(); ++i)
      alpha[r][i] = (chain_contains(premask, i) ? beta[r][i] : 0.0) + gamma[r][i];
  rep.lhs = relative_norm(counting_integral(m, premask), alpha);
  rep.pass = rep.lhs <= rep.c * (1.0 + 1e-12) + 1e-15;
  return rep;
}

double q_commutator_residual(const FockBasis& basis, const FockBasis& reduced, const Kernel& t,
                             const QField& q, int x, const Vector& chi) {
  q.validate(t.space());
  const Vector lhs = point_evaluation(basis, reduced, epsilon(basis, t) * chi, x);
  const Matrix tred = epsilon_corner(reduced, t, x);
  const Vector rhs = kron(q.q[x], tred) * point_evaluation(basis, reduced, chi, x);
  return (lhs - rhs).norm();
}

}  // namespace fockkit
