// Copyright (c) 2026 fockkit contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fockkit/kernel.hpp"

namespace fockkit {

/// The representation of a kernel as a dense operator: the block at each
/// table is routed from the (ann|gauge) input chain to the (gauge|cre)
/// output chain with weight sqrt(w(cre) w(ann)) w(scalar); the scalar chain
/// is integrated out. Linear in the kernel, multiplicative for
/// kernel_product, and star-to-adjoint.
Matrix epsilon(const FockBasis& basis, const Kernel& k);

/// The действие of a kernel restricted to tables carrying `x` in `role`,
/// as an operator between the reduced sector and its k_x extension, with the
/// point's own measure weight stripped (densities against the explicit
/// per-point sum). Shapes: Scalar: N x N, Ann: N x (d_x N),
/// Cre: (d_x N) x N, Gauge: (d_x N) x (d_x N), with N the reduced dimension
/// and the k_x index major.
Matrix epsilon_point(const FockBasis& reduced, const Kernel& k, Role role, int x);

/// The reduced action of the x-free part of a kernel (tables containing x
/// are skipped).
Matrix epsilon_corner(const FockBasis& reduced, const Kernel& k, int x);

double epsilon_adjoint_residual(const FockBasis& basis, const Kernel& k);
double epsilon_homomorphism_residual(const FockBasis& basis, const Kernel& x, const Kernel& y);

}  // namespace fockkit
