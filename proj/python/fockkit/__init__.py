# Copyright (c) 2026 fockkit contributors.
# SPDX-License-Identifier: Apache-2.0
"""Finite Guichardet-Fock kernel calculus: python surface over the C++ core."""

from ._core import (  # noqa: F401
    FockBasis,
    Kernel,
    PointSpace,
    QField,
    epsilon,
    epsilon_adjoint_residual,
    epsilon_homomorphism_residual,
    kernel_distance,
    kernel_from_json,
    kernel_product,
    meyer_transform,
    mobius_transform,
    projective_norm,
    qfield,
    random_kernel,
    relative_norm,
    run_harness,
    star_adjoint,
    suite_names,
    unit_kernel,
    verify_strong_ito,
    weighted_operator_norm,
)

__all__ = [
    "FockBasis",
    "Kernel",
    "PointSpace",
    "QField",
    "epsilon",
    "epsilon_adjoint_residual",
    "epsilon_homomorphism_residual",
    "kernel_distance",
    "kernel_from_json",
    "kernel_product",
    "meyer_transform",
    "mobius_transform",
    "projective_norm",
    "qfield",
    "random_kernel",
    "relative_norm",
    "run_harness",
    "star_adjoint",
    "suite_names",
    "unit_kernel",
    "verify_strong_ito",
    "weighted_operator_norm",
]
