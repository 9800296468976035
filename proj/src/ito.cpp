// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fockkit/ito.hpp"

#include <cmath>

namespace fockkit {

Role entry_role(int i, int j) {
  if (i == 0 && j == 1) return Role::Ann;
  if (i == 0 && j == 2) return Role::Scalar;
  if (i == 1 && j == 1) return Role::Gauge;
  if (i == 1 && j == 2) return Role::Cre;
  throw std::invalid_argument("not a stochastic germ entry");
}

GermKernel GermKernel::zero(const PointSpace& space, int x) {
  GermKernel g;
  g.space = &space;
  g.point = x;
  for (auto& row : g.e)
    for (auto& k : row) k = Kernel(space);
  return g;
}

GermKernel process_germ(const KernelProcess& proc, int x, bool plus) {
  const Kernel& t = proc.at_cut(x + (plus ? 1 : 0));
  GermKernel g = GermKernel::zero(proc.space(), x);
  g.e[0][0] = g.e[2][2] = restrict_point_free(t, x);
  for (auto [i, j] : kStochasticEntries) g.e[i][j] = point_split(t, entry_role(i, j), x);
  return g;
}

GermKernel germ_difference(const GermKernel& plus, const GermKernel& minus) {
  return plus - minus;
}

GermKernel operator+(const GermKernel& a, const GermKernel& b) {
  GermKernel c = a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.e[i][j] += b.e[i][j];
  return c;
}

GermKernel operator-(const GermKernel& a, const GermKernel& b) {
  GermKernel c = a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.e[i][j] -= b.e[i][j];
  return c;
}

GermKernel germ_product(const GermKernel& a, const GermKernel& b, bool corrected) {
  GermKernel c = GermKernel::zero(*a.space, a.point);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      for (int k = i; k <= j; ++k) c.e[i][j] += kernel_product(a.e[i][k], b.e[k][j]);
      if (corrected && !(i == j && (i == 0 || i == 2)))
        c.e[i][j] += kernel_product(a.e[i][2], b.e[0][j]);
      c.e[i][j].prune();
    }
  return c;
}

GermOperator germ_product(const GermOperator& a, const GermOperator& b, bool corrected) {
  GermOperator c;
  c.point = a.point;
  const Eigen::Index n = a.e[0][0].rows();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      c.e[i][j] = Matrix::Zero(n, n);
      if (j < i) continue;
      for (int k = i; k <= j; ++k) c.e[i][j] += a.e[i][k] * b.e[k][j];
      if (corrected && !(i == j && (i == 0 || i == 2))) c.e[i][j] += a.e[i][2] * b.e[0][j];
    }
  return c;
}

GermKernel dagger(const GermKernel& a) {
  GermKernel c = GermKernel::zero(*a.space, a.point);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.e[i][j] = star_adjoint(a.e[2 - j][2 - i]);
  return c;
}

GermOperator dagger(const GermOperator& a) {
  GermOperator c;
  c.point = a.point;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.e[i][j] = a.e[2 - j][2 - i].adjoint();
  return c;
}

GermOperator epsilon_germ(const FockBasis& basis, const GermKernel& g) {
  GermOperator o;
  o.point = g.point;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) o.e[i][j] = epsilon(basis, g.e[i][j]);
  return o;
}

KernelProcess star_process(const KernelProcess& proc) {
  std::vector<Kernel> cuts;
  for (int k = 0; k < proc.cuts(); ++k) cuts.push_back(star_adjoint(proc.at_cut(k)));
  return KernelProcess::from_kernels(proc.space(), std::move(cuts));
}

bool residual_within(double residual, double scale, double abs_tol) {
  return residual <= abs_tol || (scale > 1.0 && residual <= 10.0 * abs_tol * scale);
}

ItoReport verify_strong_ito(const FockBasis& basis, const KernelProcess& proc, double t,
                            double tol) {
  const PointSpace& sp = basis.space();
  const ChainMask pre = sp.premask(t);

  const Matrix tt = epsilon(basis, proc.at_time(t));
  const Matrix t0 = epsilon(basis, proc.at_cut(0));
  const Matrix lhs = tt * tt.adjoint() - t0 * t0.adjoint();

  Kernel acc1(sp), acc2(sp);
  for (int x : chain_indices(pre)) {
    const GermKernel g = process_germ(proc, x, false);
    const GermKernel gp = process_germ(proc, x, true);
    const GermKernel d = gp - g;
    const GermKernel gd = dagger(g), dd = dagger(d);
    const GermKernel p1 = germ_product(g, dd) + germ_product(d, gd) + germ_product(d, dd);
    const GermKernel p2 = germ_product(gp, dagger(gp)) - germ_product(g, gd);
    for (auto [i, j] : kStochasticEntries) {
      acc1 += p1.e[i][j];
      acc2 += p2.e[i][j];
    }
  }
  const Matrix r1 = epsilon(basis, acc1);
  const Matrix r2 = epsilon(basis, acc2);

  ItoReport rep;
  rep.suite = "strong_ito";
  rep.tolerance = tol;
  const double scale = lhs.norm();
  rep.residual = (lhs - r1).norm();
  rep.metrics["residual"] = rep.residual;
  rep.metrics["forms_residual"] = (r1 - r2).norm();
  rep.metrics["scale"] = scale;
  rep.pass = residual_within(rep.residual, scale, tol) &&
             residual_within(rep.metrics["forms_residual"], scale, tol / 10.0);
  return rep;
}

ItoReport verify_weak_ito(const FockBasis& basis, const KernelProcess& proc, double t,
                          const Vector& chi, double tol) {
  const PointSpace& sp = basis.space();
  const ChainMask pre = sp.premask(t);

  const double lhs = (epsilon(basis, proc.at_time(t)) * chi).squaredNorm() -
                     (epsilon(basis, proc.at_cut(0)) * chi).squaredNorm();
  double rhs = 0.0, rhs_continuum = 0.0;
  for (int x : chain_indices(pre)) {
    const double w = sp.weight(x);
    const FockBasis red(sp, x);
    const Kernel& tx = proc.at_cut(x);
    const GermKernel g = process_germ(proc, x, false);
    const GermKernel d = process_germ(proc, x, true) - g;

    const Matrix es = epsilon_point(red, d.e[0][2], Role::Scalar, x);
    const Matrix ea = epsilon_point(red, d.e[0][1], Role::Ann, x);
    const Matrix ec = epsilon_point(red, d.e[1][2], Role::Cre, x);
    const Matrix eg = epsilon_point(red, d.e[1][1], Role::Gauge, x);
    const Matrix tc = epsilon_corner(red, tx, x);
    const Matrix ts = epsilon_point(red, g.e[0][2], Role::Scalar, x);
    const Matrix ta = epsilon_point(red, g.e[0][1], Role::Ann, x);

    const Vector chi_p = restrict_to(basis, red, chi);
    const Vector chi_x = point_evaluation(basis, red, chi, x);
    const Vector grad_t_chi = point_evaluation(basis, red, epsilon(basis, tx) * chi, x);

    const Vector va = es * chi_p + ea * chi_x;
    const Vector vb = ec * chi_p + eg * chi_x;

    const double group1 = 2.0 * (Vector(tc * chi_p).dot(va)).real();
    const double group2 = vb.squaredNorm();
    const double group3 = 2.0 * grad_t_chi.dot(vb).real();
    const double corr =
        w * (2.0 * (Vector(ts * chi_p + ta * chi_x)).dot(va).real() + va.squaredNorm());
    rhs += w * (group1 + group2 + group3 + corr);
    rhs_continuum += w * (group1 + group2 + group3);
  }

  ItoReport rep;
  rep.suite = "weak_ito";
  rep.tolerance = tol;
  rep.residual = std::abs(lhs - rhs);
  const double scale = std::abs(lhs);
  rep.metrics["residual"] = rep.residual;
  rep.metrics["continuum_residual"] = std::abs(lhs - rhs_continuum);
  rep.metrics["scale"] = scale;
  rep.pass = residual_within(rep.residual, scale, tol);
  return rep;
}

double proposition_table_residual(const FockBasis& basis, const KernelProcess& proc, int x) {
  const GermOperator g = epsilon_germ(basis, process_germ(proc, x, false));
  const GermOperator gp = epsilon_germ(basis, process_germ(proc, x, true));
  GermOperator d;
  d.point = x;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d.e[i][j] = gp.e[i][j] - g.e[i][j];

  auto add = [](const GermOperator& a, const GermOperator& b) {
    GermOperator c = a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c.e[i][j] += b.e[i][j];
    return c;
  };
  const GermOperator lhs = add(add(germ_product(dagger(d), g, false),
                                   germ_product(dagger(g), d, false)),
                               germ_product(dagger(d), d, false));

  const Matrix &t = g.e[0][0], &ta = g.e[0][1], &ts = g.e[0][2], &tg = g.e[1][1],
               &tc = g.e[1][2];
  const Matrix &da = d.e[0][1], &ds = d.e[0][2], &dg = d.e[1][1], &dc = d.e[1][2];

  // The three displayed factors of Dd T + Td D + Dd D, assembled literally.
  Matrix m01 = t.adjoint() * da + dc.adjoint() * tg + tc.adjoint() * dg + dc.adjoint() * dg;
  Matrix m02 = t.adjoint() * ds + ds.adjoint() * t + dc.adjoint() * tc + tc.adjoint() * dc +
               dc.adjoint() * dc;
  Matrix m11 = dg.adjoint() * tg + tg.adjoint() * dg + dg.adjoint() * dg;
  Matrix m12 = dg.adjoint() * tc + tg.adjoint() * dc + da.adjoint() * t + dg.adjoint() * dc;

  double res = 0.0, scale = 1.0;
  res = std::max(res, (lhs.e[0][1] - m01).norm());
  res = std::max(res, (lhs.e[0][2] - m02).norm());
  res = std::max(res, (lhs.e[1][1] - m11).norm());
  res = std::max(res, (lhs.e[1][2] - m12).norm());
  for (auto [i, j] : kStochasticEntries) scale = std::max(scale, lhs.e[i][j].norm());
  return res / scale;
}

ItoReport verify_q_adapted_ito(const FockBasis& basis, const KernelProcess& proc, const QField& q,
                               double t, double tol) {
  ItoReport rep;
  rep.suite = "q_adapted_ito";
  rep.tolerance = tol;

  const AdaptednessReport adapted = is_q_adapted(proc, q);
  if (!adapted.adapted) {
    rep.skipped = true;
    rep.note = "process is not Q-adapted: " + adapted.reason;
    return rep;
  }

  const PointSpace& sp = basis.space();
  const ChainMask pre = sp.premask(t);
  const Matrix tt = epsilon(basis, proc.at_time(t));
  const Matrix t0 = epsilon(basis, proc.at_cut(0));
  const Matrix lhs = tt.adjoint() * tt - t0.adjoint() * t0;

  Kernel acc(sp);
  for (int x : chain_indices(pre)) {
    const GermKernel gp = process_germ(proc, x, true);
    const GermKernel prod = germ_product(dagger(gp), gp);

    const Kernel& tx = proc.at_cut(x);
    const Kernel s = kernel_product(star_adjoint(tx), tx);
    const Kernel s_free = restrict_point_free(s, x);
    GermKernel g0 = GermKernel::zero(sp, x);
    g0.e[0][0] = g0.e[2][2] = s_free;
    const Matrix qhq = q.q[x].adjoint() * q.q[x];
    for (const auto& [key, b] : s_free.blocks()) {
      const Table base = Table::from_key(key);
      Table big = base;
      big[Role::Gauge] |= chain_bit(x);
      g0.e[1][1].add_block(big, insert_gauge_factors(sp, base, b, chain_bit(x), {qhq}));
    }

    for (auto [i, j] : kStochasticEntries) {
      acc += prod.e[i][j];
      acc -= g0.e[i][j];
    }
  }
  const Matrix rhs = epsilon(basis, acc);
  const double scale = lhs.norm();
  rep.residual = (lhs - rhs).norm();
  rep.metrics["residual"] = rep.residual;
  rep.metrics["scale"] = scale;
  rep.pass = residual_within(rep.residual, scale, tol);
  return rep;
}

namespace {
Matrix wiener_field_mask(const FockBasis& basis, ChainMask window) {
  const PointSpace& sp = basis.space();
  Kernel field(sp);
  const Kernel unit = unit_kernel(sp);
  for (int x : chain_indices(window)) {
    if (sp.dim(x) != 1) throw std::invalid_argument("field operator requires multiplicity 1");
    const Kernel free = restrict_point_free(unit, x);
    field += embed_point_scalar(free, Role::Cre, x);
    field += embed_point_scalar(free, Role::Ann, x);
  }
  return epsilon(basis, field);
}
}  // namespace

Matrix wiener_field(const FockBasis& basis, double t0, double t1) {
  return wiener_field_mask(basis, basis.space().window_mask(t0, t1));
}

WienerChecks wiener_checks(const FockBasis& basis, const KernelProcess& proc,
                           const std::map<int, Kernel>& d_kernels, const Vector& chi) {
  const PointSpace& sp = basis.space();
  const int n = sp.size();
  WienerChecks out;

  // Disjoint-window fields commute.
  const std::array<ChainMask, 3> windows{sp.prefix_mask(n / 3) & sp.full_mask(),
                                         sp.prefix_mask(2 * n / 3) & ~sp.prefix_mask(n / 3),
                                         sp.full_mask() & ~sp.prefix_mask(2 * n / 3)};
  std::array<Matrix, 3> fields;
  for (int i = 0; i < 3; ++i) fields[i] = wiener_field_mask(basis, windows[i]);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      out.commutator_residual = std::max(
          out.commutator_residual, (fields[i] * fields[j] - fields[j] * fields[i]).norm());

  for (int x = 0; x < n; ++x) {
    const double w = sp.weight(x);
    const FockBasis red(sp, x);
    const Kernel& tx = proc.at_cut(x);
    const Kernel& dk = d_kernels.at(x);

    const Kernel dan = embed_point_scalar(dk, Role::Ann, x);
    const Kernel dcr = embed_point_scalar(dk, Role::Cre, x);
    const Matrix ea = epsilon_point(red, dan, Role::Ann, x);
    const Matrix ec = epsilon_point(red, dcr, Role::Cre, x);
    const Matrix tc = epsilon_corner(red, tx, x);
    const Matrix ts = epsilon_point(red, point_split(tx, Role::Scalar, x), Role::Scalar, x);
    const Matrix ta = epsilon_point(red, point_split(tx, Role::Ann, x), Role::Ann, x);

    const Vector chi_p = restrict_to(basis, red, chi);
    const Vector chi_x = point_evaluation(basis, red, chi, x);
    const Matrix tx_op = epsilon(basis, tx);
    const Vector grad_t_chi = point_evaluation(basis, red, tx_op * chi, x);

    const Vector va = ea * chi_x;
    const Vector vb = ec * chi_p;

    const Vector dchi = (epsilon(basis, proc.at_cut(x + 1)) - tx_op) * chi;
    const double term1_direct = 2.0 * Vector(tx_op * chi).dot(dchi).real();

    const double adapted = 2.0 * (Vector(tc * chi_p).dot(va).real() +
                                  Vector(tc * chi_x).dot(vb).real());
    const Vector partial_chi = grad_t_chi - tc * chi_x;
    const double partial = 2.0 * partial_chi.dot(vb).real();
    const double corr = w * 2.0 * Vector(ts * chi_p + ta * chi_x).dot(va).real();

    out.partial_term_max = std::max(out.partial_term_max, std::abs(partial));
    out.correction_term_max = std::max(out.correction_term_max, std::abs(corr));
    out.decomposition_residual = std::max(
        out.decomposition_residual, std::abs(term1_direct - w * (adapted + partial + corr)));
    out.ito_term_residual = std::max(
        out.ito_term_residual,
        std::abs(dchi.squaredNorm() - w * (vb.squaredNorm() + w * va.squaredNorm())));
  }
  return out;
}

}  // namespace fockkit
