// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fockkit/calculus.hpp"

namespace fockkit {

// Triangular 3x3 germ arrays at a point, rows/columns ordered (-, o, +).
// Kernel flavour entries are ordinary kernels: the corner entries are the
// process kernel restricted to tables avoiding the point, the stochastic
// entries its restrictions to tables carrying the point in one role. The
// operator flavour is the entrywise representation.

constexpr std::array<std::pair<int, int>, 4> kStochasticEntries{
    {{0, 1}, {0, 2}, {1, 1}, {1, 2}}};

/// Role of the (i, j) stochastic germ entry.
Role entry_role(int i, int j);

struct GermKernel {
  const PointSpace* space = nullptr;
  int point = -1;
  std::array<std::array<Kernel, 3>, 3> e;

  static GermKernel zero(const PointSpace& space, int x);
};

struct GermOperator {
  int point = -1;
  std::array<std::array<Matrix, 3>, 3> e;
};

/// Germ of a process at point x: entries of the kernel at the cut just
/// before x (plus=false) or just after (plus=true).
GermKernel process_germ(const KernelProcess& proc, int x, bool plus);
GermKernel germ_difference(const GermKernel& plus, const GermKernel& minus);

/// Block 3x3 product of germ arrays. Includes the composition of a (mu,+)
/// entry of the left factor with a (-,nu) entry of the right one; on this
/// finite space that pairing carries the point's measure weight through
/// kernel_product and is required for the product germ identity. Pass
/// corrected=false for the zero-width triangular product.
GermKernel germ_product(const GermKernel& a, const GermKernel& b, bool corrected = true);
GermOperator germ_product(const GermOperator& a, const GermOperator& b, bool corrected = true);

/// Pseudo-Euclidean conjugation: reflect about the anti-diagonal, star each
/// entry.
GermKernel dagger(const GermKernel& a);
GermOperator dagger(const GermOperator& a);

GermOperator epsilon_germ(const FockBasis& basis, const GermKernel& g);

GermKernel operator+(const GermKernel& a, const GermKernel& b);
GermKernel operator-(const GermKernel& a, const GermKernel& b);

/// Star the process kernel at every cut.
KernelProcess star_process(const KernelProcess& proc);

struct ItoReport {
  std::string suite;
  std::string name;
  std::uint64_t seed = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
  std::map<std::string, double> metrics;
};

bool residual_within(double residual, double scale, double abs_tol);

/// T_t T_t^* - T_0 T_0^* against the counting integral of the germ
/// products, both difference forms.
ItoReport verify_strong_ito(const FockBasis& basis, const KernelProcess& proc, double t,
                            double tol = 1e-9);

/// ||T_t chi||^2 - ||T_0 chi||^2 against the pointwise pairing form. The
/// metric `continuum_residual` reports the defect of the zero-width
/// three-term formula, whose width corrections are included in the pass
/// residual.
ItoReport verify_weak_ito(const FockBasis& basis, const KernelProcess& proc, double t,
                          const Vector& chi, double tol = 1e-9);

/// Structural check of the three-matrix multiplication table: the literal
/// entrywise assembly must equal the zero-width germ product of the
/// operator germs, and the width corrections must account for the rest.
double proposition_table_residual(const FockBasis& basis, const KernelProcess& proc, int x);

/// T_t^* T_t - T_0^* T_0 against the counting integral of
/// Gplus^dag Gplus - (T^* T) tensor Q^dag Q; requires the process to be
/// Q-adapted at every cut.
ItoReport verify_q_adapted_ito(const FockBasis& basis, const KernelProcess& proc, const QField& q,
                               double t, double tol = 1e-9);

/// Field operator over a window: creation plus annihilation with unit
/// integrands (multiplicity-1 spaces).
Matrix wiener_field(const FockBasis& basis, double t0, double t1);

struct WienerChecks {
  double commutator_residual = 0.0;     // disjoint-window fields commute
  double ito_term_residual = 0.0;       // ||dT chi||^2 matches the quadratic term
  double decomposition_residual = 0.0;  // increment pairing = adapted + commutator parts
  double partial_term_max = 0.0;        // size of the Malliavin commutator term
  double correction_term_max = 0.0;     // size of the width-correction part
};

/// Checks for a single-integrand scalar process dT = D dA^+ + D dA with the
/// same reduced kernel D on both legs (given per point, on x-free tables).
WienerChecks wiener_checks(const FockBasis& basis, const KernelProcess& proc,
                           const std::map<int, Kernel>& d_kernels, const Vector& chi);

}  // namespace fockkit
