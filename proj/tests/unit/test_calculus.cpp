// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "fockkit/ito.hpp"
#include "fockkit/random.hpp"

using namespace fockkit;

namespace {
PointSpace mixed_space() { return PointSpace({1, 2, 3}, {0.4, 0.6, 0.3}, {1, 2, 1}, 2); }
PointSpace scalar_space(int n) { return PointSpace::uniform(n, 1.0, 1, 1); }
}

TEST_CASE("counting integral: early cut keeps only the empty sub-table") {
  PointSpace sp = mixed_space();
  const IntegrandKernel m = random_integrand(sp, 5, 30, 1.0);
  const Kernel t0 = counting_integral(m, 0);
  for (const auto& [key, b] : t0.blocks()) {
    const Table tab = Table::from_key(key);
    const Matrix* direct = m.block(Table::empty(), tab);
    REQUIRE(direct != nullptr);
    CHECK(frobenius_distance(b, *direct) == 0.0);
  }
}

TEST_CASE("integrand supported on an empty u part gives a constant process") {
  PointSpace sp = mixed_space();
  IntegrandKernel m(sp);
  const Kernel src = random_kernel(sp, 6, 0.4, 1.0);
  for (const auto& [key, b] : src.blocks())
    m.add_block(Table::empty(), Table::from_key(key), b);
  const KernelProcess proc = KernelProcess::from_integrand(m);
  for (int k = 1; k < proc.cuts(); ++k)
    CHECK(kernel_distance(proc.at_cut(k), proc.at_cut(0)) == 0.0);
}

TEST_CASE("point split of the unit kernel adjoins the point to the gauge chain") {
  PointSpace sp = mixed_space();
  const Kernel unit = unit_kernel(sp);
  const Kernel split = point_split(unit, Role::Gauge, 1);
  for (const auto& [key, b] : split.blocks()) {
    const Table t = Table::from_key(key);
    CHECK(chain_contains(t[Role::Gauge], 1));
    CHECK(t[Role::Scalar] == 0);
    CHECK(b.isIdentity(0.0));
  }
  CHECK(point_split(unit, Role::Ann, 1).support_size() == 0);
}

TEST_CASE("malliavin split of the represented action") {
  // (epsilon(T) chi)(. join x) = E_cre(T) chi_restricted + E_gauge(T) chi(. join x)
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const Kernel t = random_kernel(sp, 7, 0.6, 1.0);
  const Vector chi = random_vector(basis, 8);
  for (int x = 0; x < sp.size(); ++x) {
    FockBasis red(sp, x);
    const Vector lhs = point_evaluation(basis, red, epsilon(basis, t) * chi, x);
    const Vector rhs =
        epsilon_point(red, point_split(t, Role::Cre, x), Role::Cre, x) *
            restrict_to(basis, red, chi) +
        epsilon_point(red, point_split(t, Role::Gauge, x), Role::Gauge, x) *
            point_evaluation(basis, red, chi, x);
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("meyer transform with the zero field is the identity map") {
  PointSpace sp = mixed_space();
  const Kernel t = random_kernel(sp, 9, 0.5, 1.0);
  CHECK(kernel_distance(meyer_transform(t, QField::zero(sp)), t) == 0.0);
  CHECK(kernel_distance(mobius_transform(t, QField::zero(sp)), t) == 0.0);
}

TEST_CASE("meyer and mobius transforms invert each other for every field kind") {
  PointSpace sp = mixed_space();
  const std::vector<QField> fields = {QField::identity(sp), QField::scalar(sp, 2.0),
                                      random_projector_field(sp, 11, 1), random_qfield(sp, 12)};
  for (const QField& q : fields) {
    const Kernel t = random_kernel(sp, 13, 0.5, 1.0);
    CHECK(kernel_distance(mobius_transform(meyer_transform(t, q), q), t) < 1e-12);
    const Kernel m = random_kernel(sp, 14, 0.5, 1.0);
    CHECK(kernel_distance(meyer_transform(mobius_transform(m, q), q), m) < 1e-12);
  }
}

TEST_CASE("meyer transform with Q = I on a one-gauge-point table is a two-term sum") {
  PointSpace sp = scalar_space(2);
  Kernel t(sp);
  Table full;
  full[Role::Gauge] = chain_from_indices({1});
  Matrix b1 = Matrix::Random(1, 1), b0 = Matrix::Random(1, 1);
  t.set_block(full, b1);
  t.set_block(Table::empty(), b0);
  const Kernel m = meyer_transform(t, QField::identity(sp));
  // M(table with gauge {1}) = T(gauge {1}) - T(empty) (x) I
  const Matrix* got = m.block(full);
  REQUIRE(got != nullptr);
  CHECK(frobenius_distance(*got, b1 - b0) < 1e-15);
}

TEST_CASE("mobius transform with a scalar field on two gauge points is a four-term sum") {
  PointSpace sp = scalar_space(2);
  const cplx q0{0.5, 1.0};
  Kernel m = random_kernel(sp, 15, 1.0, 1.0);
  const Kernel t = mobius_transform(m, QField::scalar(sp, q0));
  Table gg;
  gg[Role::Gauge] = chain_from_indices({0, 1});
  auto val = [&](const Kernel& k, const Table& tab) {
    const Matrix* b = k.block(tab);
    return b ? (*b)(0, 0) : cplx(0.0);
  };
  Table g0, g1;
  g0[Role::Gauge] = chain_from_indices({0});
  g1[Role::Gauge] = chain_from_indices({1});
  const cplx expect = val(m, gg) + q0 * (val(m, g0) + val(m, g1)) + q0 * q0 * val(m, Table::empty());
  CHECK(std::abs(val(t, gg) - expect) < 1e-14);
}

TEST_CASE("q-meyer process transform reconstructs a Q-adapted process at every cut") {
  PointSpace sp = mixed_space();
  const QField q = random_projector_field(sp, 16, 1);
  const KernelProcess proc =
      KernelProcess::from_integrand(random_q_integrand(sp, 17, 0.4, 1.0, q));
  const QMeyerTransform qm = q_meyer_process_transform(proc, q);
  for (int k = 0; k < proc.cuts(); ++k) {
    const Kernel rec =
        counting_integral(tensor_q_integrand(qm.at_cut[k], q), sp.prefix_mask(k));
    CHECK(kernel_distance(rec, proc.at_cut(k)) < 1e-12);
  }
}

TEST_CASE("null integrands") {
  PointSpace sp = mixed_space();
  CHECK(is_null_integrand(IntegrandKernel(sp)));
  const IntegrandKernel n = random_null_integrand(sp, 18, 1.0);
  CHECK(n.blocks().size() > 0);
  CHECK(is_null_integrand(n));

  IntegrandKernel single(sp);
  Table u = Table::atomic(Role::Gauge, 1);
  single.add_block(u, Table::empty(), Matrix::Random(block_rows(sp, u), block_cols(sp, u)));
  CHECK(!is_null_integrand(single));
}

TEST_CASE("two integrands with equal counting integrals differ by a null integrand") {
  PointSpace sp = mixed_space();
  const QField q = random_projector_field(sp, 19, 1);
  IntegrandKernel m1 = random_q_integrand(sp, 20, 0.4, 1.0, q);
  IntegrandKernel m2 = m1;
  m2 += random_null_integrand(sp, 21, 1.0);
  for (int k = 0; k <= sp.size(); ++k)
    CHECK(kernel_distance(counting_integral(m1, sp.prefix_mask(k)),
                          counting_integral(m2, sp.prefix_mask(k))) < 1e-13);
  IntegrandKernel diff = m2;
  diff -= m1;
  CHECK(is_null_integrand(diff));
}

TEST_CASE("adaptedness predicate") {
  PointSpace sp = mixed_space();
  const QField q = random_projector_field(sp, 22, 1);
  const KernelProcess proc =
      KernelProcess::from_integrand(random_q_integrand(sp, 23, 0.4, 1.0, q));
  CHECK(is_q_adapted(proc, q).adapted);

  // ordinary adaptedness is the identity-field case
  const KernelProcess proc_i = KernelProcess::from_integrand(
      random_q_integrand(sp, 24, 0.4, 1.0, QField::identity(sp)));
  CHECK(is_q_adapted(proc_i, QField::identity(sp)).adapted);

  // a post-cut scalar point breaks adaptedness
  Kernel bad(sp);
  Table t = Table::atomic(Role::Scalar, 2);
  bad.set_block(t, Matrix::Random(block_rows(sp, t), block_cols(sp, t)));
  const AdaptednessReport rep = is_q_adapted(bad, q, sp.prefix_mask(1));
  CHECK(!rep.adapted);
  CHECK(rep.witness == t);
}

TEST_CASE("canonical measures: empty window, additivity, single-integral representation") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  PointIntegrand d(sp);
  for (int x = 0; x < sp.size(); ++x)
    for (Role role : kRoles)
      d.set(role, x,
            point_split(random_kernel(sp, 100 + 8 * x + static_cast<int>(role), 0.5, 1.0), role,
                        x));

  for (Role role : kRoles)
    CHECK(canonical_measure(basis, d, role, 5.0, 9.0).norm() == 0.0);

  for (Role role : kRoles) {
    const Matrix whole = canonical_measure(basis, d, role, 0.0, 10.0);
    const Matrix split = canonical_measure(basis, d, role, 0.0, 2.5) +
                         canonical_measure(basis, d, role, 2.5, 10.0);
    CHECK(frobenius_distance(whole, split) < 1e-13);
  }

  Matrix sum = Matrix::Zero(basis.dim(), basis.dim());
  for (Role role : kRoles) sum += canonical_measure(basis, d, role, 0.0, 10.0);
  CHECK(frobenius_distance(epsilon(basis, single_counting_integral(d, sp.full_mask())), sum) <
        1e-13);
}

TEST_CASE("single counting integral vanishes for a zero integrand and localizes in time") {
  PointSpace sp = mixed_space();
  PointIntegrand d(sp);
  CHECK(single_counting_integral(d, sp.full_mask()).support_size() == 0);

  d.set(Role::Scalar, 1, point_split(random_kernel(sp, 25, 0.6, 1.0), Role::Scalar, 1));
  CHECK(single_counting_integral(d, sp.prefix_mask(1)).support_size() == 0);
  const Kernel later = single_counting_integral(d, sp.prefix_mask(2));
  for (const auto& [key, b] : later.blocks())
    CHECK(chain_contains(Table::from_key(key)[Role::Scalar], 1));
}

TEST_CASE("multiple integral of the unit integrand is the identity at every cut") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  IntegrandKernel m(sp);
  const Kernel unit = unit_kernel(sp);
  for (const auto& [key, b] : unit.blocks())
    m.add_block(Table::empty(), Table::from_key(key), b);
  for (int k = 0; k <= sp.size(); ++k)
    CHECK(frobenius_distance(multiple_qs_integral(basis, m, sp.prefix_mask(k)),
                             Matrix::Identity(basis.dim(), basis.dim())) == 0.0);
}

TEST_CASE("direct multiple integral agrees with the kernel route at every cut") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const IntegrandKernel m = random_integrand(sp, 26, 25, 1.0);
  for (int k = 0; k <= sp.size(); ++k) {
    const ChainMask pre = sp.prefix_mask(k);
    CHECK(frobenius_distance(multiple_qs_integral(basis, m, pre),
                             multiple_qs_integral_direct(basis, m, pre)) < 1e-12);
  }
}

TEST_CASE("Q-tensored integrand represents the mobius transform of its kernel part") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const QField q = random_qfield(sp, 27);
  const Kernel m = random_kernel(sp, 28, 0.5, 1.0);
  CHECK(frobenius_distance(
            multiple_qs_integral(basis, tensor_q_integrand(m, q), sp.full_mask()),
            epsilon(basis, mobius_transform(m, q))) < 1e-12);
}

TEST_CASE("integrand point derivative matches the germ difference of the process") {
  PointSpace sp = mixed_space();
  const IntegrandKernel m = random_integrand(sp, 29, 30, 1.0);
  const KernelProcess proc = KernelProcess::from_integrand(m);
  for (int x = 0; x < sp.size(); ++x) {
    const GermKernel diff = process_germ(proc, x, true) - process_germ(proc, x, false);
    for (auto [i, j] : kStochasticEntries) {
      Kernel expect = integrand_point_derivative(m, entry_role(i, j), x, sp.prefix_mask(x));
      Kernel got = diff.e[i][j];
      got.prune(1e-15);
      expect.prune(1e-15);
      CHECK(kernel_distance(got, expect) < 1e-13);
    }
  }
}

TEST_CASE("lemma-2 style counting bound") {
  PointSpace sp = mixed_space();

  // integrand supported on the empty u part, cut at zero: exact equality
  IntegrandKernel m0(sp);
  Table k0 = Table::atomic(Role::Gauge, 0);
  Matrix b = Matrix::Identity(block_rows(sp, k0), block_cols(sp, k0));
  m0.add_block(Table::empty(), k0, 3.0 * b);
  const WeightQuadruple ones = WeightQuadruple::constant(sp, 1, 1, 1, 1);
  const Lemma2Report r0 = lemma2_norm_bound(m0, ones, ones, 0);
  CHECK(r0.hypothesis_ok);
  CHECK(r0.lhs == doctest::Approx(r0.c));
  CHECK(r0.pass);

  for (int seed = 0; seed < 10; ++seed) {
    const IntegrandKernel m = random_integrand(sp, 400 + seed, 25, 1.0);
    const WeightQuadruple beta = random_quadruple(sp, 500 + seed, 0.2, 1.5);
    const WeightQuadruple gamma = random_quadruple(sp, 600 + seed, 0.2, 1.5);
    CHECK(lemma2_norm_bound(m, beta, gamma, sp.prefix_mask(2)).pass);
    // cut at zero: the gamma quadruple alone suffices
    const Lemma2Report rz = lemma2_norm_bound(m, WeightQuadruple::constant(sp, 0, 0, 0, 0),
                                              gamma, 0);
    CHECK(rz.lhs <= rz.c * (1 + 1e-12) + 1e-15);
  }
}

TEST_CASE("Q-commutator vanishes on Q-adapted processes and not otherwise") {
  PointSpace sp = mixed_space();
  FockBasis basis(sp);
  const QField q = random_projector_field(sp, 30, 1);
  const KernelProcess proc =
      KernelProcess::from_integrand(random_q_integrand(sp, 31, 0.4, 1.0, q));
  const Vector chi = random_vector(basis, 32);
  for (int x = 0; x < sp.size(); ++x) {
    FockBasis red(sp, x);
    CHECK(q_commutator_residual(basis, red, proc.at_cut(x), q, x, chi) < 1e-10);
  }

  // generic non-adapted kernel: generically nonzero (reported, not asserted)
  const Kernel t = random_kernel(sp, 33, 0.6, 1.0);
  FockBasis red(sp, 1);
  CHECK(q_commutator_residual(basis, red, t, q, 1, chi) >= 0.0);
}
