// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "fockkit/ito.hpp"
#include "fockkit/random.hpp"

using namespace fockkit;

namespace {
PointSpace mixed_space() { return PointSpace({1, 2, 3}, {0.4, 0.6, 0.3}, {1, 2, 1}, 2); }

KernelProcess seeded_process(const PointSpace& sp, std::uint64_t seed, int pairs = 25) {
  return KernelProcess::from_integrand(random_integrand(sp, seed, pairs, 1.0));
}

Kernel conjugate_initial(const Kernel& k, const Matrix& u) {
  Kernel out(k.space());
  const PointSpace& sp = k.space();
  for (const auto& [key, b] : k.blocks()) {
    const Table t = Table::from_key(key);
    const int rows_k = sp.chain_kdim(t.out_mask()), cols_k = sp.chain_kdim(t.in_mask());
    out.set_block(t, kron(Matrix::Identity(rows_k, rows_k), u).adjoint() * b *
                         kron(Matrix::Identity(cols_k, cols_k), u));
  }
  return out;
}
}  // namespace

TEST_CASE("germ of a constant process has zero difference") {
  PointSpace sp = mixed_space();
  const KernelProcess proc = KernelProcess::constant(random_kernel(sp, 1, 0.6, 1.0));
  for (int x = 0; x < sp.size(); ++x) {
    const GermKernel d = process_germ(proc, x, true) - process_germ(proc, x, false);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(d.e[i][j].total_frobenius() == 0.0);
  }
}

TEST_CASE("germ corners coincide and equal the point-free restriction") {
  PointSpace sp = mixed_space();
  const KernelProcess proc = seeded_process(sp, 2);
  for (int x = 0; x < sp.size(); ++x) {
    const GermKernel g = process_germ(proc, x, false);
    CHECK(kernel_distance(g.e[0][0], g.e[2][2]) == 0.0);
    CHECK(kernel_distance(g.e[0][0], restrict_point_free(proc.at_cut(x), x)) == 0.0);
    const GermKernel gp = process_germ(proc, x, true);
    // the right limit does not move the corner: T jumps at x only on tables
    // containing x
    CHECK(kernel_distance(gp.e[0][0], g.e[0][0]) == 0.0);
  }
}

TEST_CASE("dagger is an involution and intertwines the star process") {
  PointSpace sp = mixed_space();
  const KernelProcess proc = seeded_process(sp, 3);
  const KernelProcess sproc = star_process(proc);
  for (int x = 0; x < sp.size(); ++x) {
    const GermKernel g = process_germ(proc, x, false);
    const GermKernel dd = dagger(dagger(g));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(kernel_distance(dd.e[i][j], g.e[i][j]) == 0.0);

    const GermKernel gs = process_germ(sproc, x, false);
    const GermKernel gd = dagger(g);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(kernel_distance(gs.e[i][j], gd.e[i][j]) < 1e-14);
  }
}

TEST_CASE("dagger is antimultiplicative over the germ product") {
  PointSpace sp = mixed_space();
  const KernelProcess pa = seeded_process(sp, 4), pb = seeded_process(sp, 5);
  const GermKernel a = process_germ(pa, 1, false);
  const GermKernel b = process_germ(pb, 1, true);
  const GermKernel lhs = dagger(germ_product(a, b));
  const GermKernel rhs = germ_product(dagger(b), dagger(a));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(kernel_distance(lhs.e[i][j], rhs.e[i][j]) < 1e-12);
}

TEST_CASE("germ product identity: point splits of a kernel product") {
  PointSpace sp = mixed_space();
  const Kernel x = random_kernel(sp, 6, 0.6, 1.0);
  const Kernel y = random_kernel(sp, 7, 0.6, 1.0);
  const Kernel p = kernel_product(x, y);
  const KernelProcess px = KernelProcess::constant(x), py = KernelProcess::constant(y);
  for (int pt = 0; pt < sp.size(); ++pt) {
    const GermKernel prod = germ_product(process_germ(px, pt, false), process_germ(py, pt, false));
    for (auto [i, j] : kStochasticEntries)
      CHECK(kernel_distance(prod.e[i][j], point_split(p, entry_role(i, j), pt)) < 1e-12);
    CHECK(kernel_distance(prod.e[0][0], restrict_point_free(p, pt)) < 1e-12);
  }
}

TEST_CASE("identity germ is a unit for the germ product") {
  PointSpace sp = mixed_space();
  const GermKernel a = process_germ(seeded_process(sp, 8), 1, false);
  const GermKernel unit = process_germ(KernelProcess::constant(unit_kernel(sp)), 1, false);
  const GermKernel p = germ_product(a, unit);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(kernel_distance(p.e[i][j], a.e[i][j]) < 1e-13);
}

TEST_CASE("entrywise representation intertwines the two germ product flavours") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const KernelProcess pa = seeded_process(sp, 9), pb = seeded_process(sp, 10);
  const GermKernel a = process_germ(pa, 2, false);
  const GermKernel b = process_germ(pb, 2, true);
  const GermOperator lhs = epsilon_germ(basis, germ_product(a, b));
  const GermOperator rhs = germ_product(epsilon_germ(basis, a), epsilon_germ(basis, b));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(frobenius_distance(lhs.e[i][j], rhs.e[i][j]) < 1e-10);
}

TEST_CASE("difference identity: T Dd + D Td + D Dd equals Gplus Gplusd - G Gd") {
  PointSpace sp = mixed_space();
  const KernelProcess proc = seeded_process(sp, 11);
  const GermKernel g = process_germ(proc, 1, false);
  const GermKernel gp = process_germ(proc, 1, true);
  const GermKernel d = gp - g;
  const GermKernel lhs =
      germ_product(g, dagger(d)) + germ_product(d, dagger(g)) + germ_product(d, dagger(d));
  const GermKernel rhs = germ_product(gp, dagger(gp)) - germ_product(g, dagger(g));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(kernel_distance(lhs.e[i][j], rhs.e[i][j]) < 1e-12);
}

TEST_CASE("strong product formula: constant and seeded processes") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);

  const ItoReport ct =
      verify_strong_ito(basis, KernelProcess::constant(random_kernel(sp, 12, 0.5, 1.0)), 10.0);
  CHECK(ct.residual == 0.0);
  CHECK(ct.pass);

  for (int seed = 0; seed < 10; ++seed) {
    const ItoReport rep = verify_strong_ito(basis, seeded_process(sp, 100 + seed), 10.0);
    CHECK(rep.pass);
    CHECK(rep.residual < 1e-9);
    CHECK(rep.metrics.at("forms_residual") < 1e-10);
  }
}

TEST_CASE("strong residual is invariant under unitary conjugation of the initial space") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const IntegrandKernel m = random_integrand(sp, 13, 25, 1.0);
  const KernelProcess proc = KernelProcess::from_integrand(m);

  Matrix g = Matrix::Random(2, 2);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix u = qr.householderQ();

  std::vector<Kernel> cuts;
  for (int k = 0; k < proc.cuts(); ++k) cuts.push_back(conjugate_initial(proc.at_cut(k), u));
  const KernelProcess cproc = KernelProcess::from_kernels(sp, std::move(cuts));

  const double r1 = verify_strong_ito(basis, proc, 10.0).residual;
  const double r2 = verify_strong_ito(basis, cproc, 10.0).residual;
  CHECK(std::abs(r1 - r2) < 1e-10);
}

TEST_CASE("weak form: zero-derivative and seeded processes") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const Vector chi = random_vector(basis, 14);

  const ItoReport zero =
      verify_weak_ito(basis, KernelProcess::constant(random_kernel(sp, 15, 0.5, 1.0)), 10.0, chi);
  CHECK(zero.residual < 1e-14);

  for (int seed = 0; seed < 10; ++seed) {
    const ItoReport rep = verify_weak_ito(basis, seeded_process(sp, 200 + seed), 10.0,
                                          random_vector(basis, 300 + seed));
    CHECK(rep.pass);
  }
}

TEST_CASE("strong and weak forms are consistent through the star process") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const KernelProcess proc = seeded_process(sp, 16);
  const Vector chi = random_vector(basis, 17);

  const Matrix tt = epsilon(basis, proc.at_cut(sp.size()));
  const Matrix t0 = epsilon(basis, proc.at_cut(0));
  const cplx quad = chi.dot((tt * tt.adjoint() - t0 * t0.adjoint()) * chi);

  // the weak form of the star process has this quadratic form as its left side
  const Matrix st = epsilon(basis, star_adjoint(proc.at_cut(sp.size())));
  const Matrix s0 = epsilon(basis, star_adjoint(proc.at_cut(0)));
  const double lhs_star = (st * chi).squaredNorm() - (s0 * chi).squaredNorm();
  CHECK(std::abs(quad.real() - lhs_star) < 1e-11);
  CHECK(std::abs(quad.imag()) < 1e-11);
  CHECK(verify_weak_ito(basis, star_process(proc), 10.0, chi).pass);
}

TEST_CASE("proposition multiplication table matches the germ products") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const KernelProcess proc = seeded_process(sp, 18);
  for (int x = 0; x < sp.size(); ++x)
    CHECK(proposition_table_residual(basis, proc, x) < 1e-12);
}

TEST_CASE("q-adapted strong form for identity, projector and scalar fields") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const std::vector<QField> fields = {QField::identity(sp), random_projector_field(sp, 19, 1),
                                      QField::scalar(sp, 2.0)};
  for (const QField& q : fields) {
    const KernelProcess proc =
        KernelProcess::from_integrand(random_q_integrand(sp, 20, 0.4, 1.0, q));
    const ItoReport rep = verify_q_adapted_ito(basis, proc, q, 10.0);
    CHECK(!rep.skipped);
    CHECK(rep.pass);
  }

  // non-adapted process: precondition fails, reported as skipped
  const ItoReport skip = verify_q_adapted_ito(basis, seeded_process(sp, 21),
                                              random_projector_field(sp, 22, 1), 10.0);
  CHECK(skip.skipped);
}

TEST_CASE("product of Q-adapted processes stays adapted only for projector fields") {
  PointSpace sp = mixed_space();
  for (bool projector : {true, false}) {
    const QField q = projector ? random_projector_field(sp, 23, 1) : QField::scalar(sp, 2.0);
    const KernelProcess proc =
        KernelProcess::from_integrand(random_q_integrand(sp, 24, 0.5, 1.0, q));
    std::vector<Kernel> cuts;
    for (int k = 0; k < proc.cuts(); ++k)
      cuts.push_back(kernel_product(star_adjoint(proc.at_cut(k)), proc.at_cut(k)));
    const AdaptednessReport rep =
        is_q_adapted(KernelProcess::from_kernels(sp, std::move(cuts)), q);
    CHECK(rep.adapted == projector);
  }
}

TEST_CASE("disjoint-window field operators commute exactly") {
  PointSpace sp = PointSpace::uniform(4, 1.0);
  FockBasis basis(sp);
  const Matrix w1 = wiener_field(basis, 0.0, 0.5);
  const Matrix w2 = wiener_field(basis, 0.5, 2.0);
  CHECK((w1 * w2 - w2 * w1).norm() < 1e-13);
  CHECK((w1 - Matrix(w1.adjoint())).norm() < 1e-14);
}

TEST_CASE("wiener checks on a seeded scalar single-integrand process") {
  PointSpace sp = PointSpace::uniform(4, 1.0);
  FockBasis basis(sp);

  std::map<int, Kernel> dks;
  std::vector<Kernel> cuts{random_kernel(sp, 25, 0.4, 1.0)};
  for (int x = 0; x < sp.size(); ++x) {
    dks.emplace(x, random_point_free_kernel(sp, 26 + x, 0.4, 1.0, x));
    Kernel next = cuts.back();
    next += embed_point_scalar(dks.at(x), Role::Ann, x);
    next += embed_point_scalar(dks.at(x), Role::Cre, x);
    cuts.push_back(std::move(next));
  }
  const KernelProcess proc = KernelProcess::from_kernels(sp, std::move(cuts));
  const Vector chi = random_vector(basis, 30);

  const WienerChecks c = wiener_checks(basis, proc, dks, chi);
  CHECK(c.commutator_residual < 1e-12);
  CHECK(c.ito_term_residual < 1e-10);
  CHECK(c.decomposition_residual < 1e-10);
  // a generic non-adapted process has a visible Malliavin commutator term
  CHECK(c.partial_term_max > 1e-6);
}
