# Copyright (c) 2026 fockkit contributors.
# SPDX-License-Identifier: Apache-2.0

import json

import numpy as np
import pytest

import fockkit as fk


@pytest.fixture(scope="module")
def space():
    return fk.PointSpace.uniform(3, 1.0, multiplicity=1, initial_dim=2)


@pytest.fixture(scope="module")
def basis(space):
    return fk.FockBasis(space)


def test_dimensions(space, basis):
    assert space.size == 3
    assert basis.dim == 2 * 2 ** 3


def test_unit_kernel_represents_identity(space, basis):
    rep = fk.epsilon(basis, fk.unit_kernel(space))
    assert np.allclose(rep, np.eye(basis.dim), atol=0.0)


def test_adjoint_and_homomorphism(space, basis):
    x = fk.random_kernel(space, 11, density=0.6)
    y = fk.random_kernel(space, 12, density=0.6)
    assert fk.epsilon_adjoint_residual(basis, x) < 1e-12
    assert fk.epsilon_homomorphism_residual(basis, x, y) < 1e-10
    prod = fk.epsilon(basis, fk.kernel_product(x, y))
    assert np.linalg.norm(fk.epsilon(basis, x) @ fk.epsilon(basis, y) - prod) < 1e-10


def test_star_is_involution(space):
    x = fk.random_kernel(space, 13)
    assert fk.kernel_distance(fk.star_adjoint(fk.star_adjoint(x)), x) == 0.0


def test_meyer_mobius_roundtrip(space):
    q = fk.qfield(space, "projector", seed=5)
    t = fk.random_kernel(space, 14, density=0.5)
    back = fk.mobius_transform(fk.meyer_transform(t, q), q)
    assert fk.kernel_distance(back, t) < 1e-12


def test_serialization_roundtrip(space):
    t = fk.random_kernel(space, 15, density=0.4)
    back = fk.kernel_from_json(space, t.to_json())
    assert fk.kernel_distance(back, t) == 0.0


def test_block_access(space):
    k = fk.Kernel(space)
    block = np.array([[1.0 + 2.0j, 0.0], [0.5, -1.0j]])
    k.set_block("g--", block)  # point 0 in the gauge role
    got = k.block("g--")
    assert np.allclose(got, block)
    assert k.block("c--") is None


def test_strong_ito_via_q_integrand(space, basis):
    q = fk.qfield(space, "identity")
    mk = fk.random_kernel(space, 16, density=0.4)
    residual, ok = fk.verify_strong_ito(basis, mk, q, 10.0)
    assert ok and residual < 1e-9


def test_harness_run_and_determinism():
    cfg = json.dumps(
        {
            "n_points": 2,
            "initial_dim": 1,
            "seed_count": 2,
            "suites": ["fubini", "epsilon_homomorphism"],
            "threads": 1,
        }
    )
    a = json.loads(fk.run_harness(cfg))
    b = json.loads(fk.run_harness(cfg))
    assert a["pass"] is True
    for rec_a, rec_b in zip(a["suites"][0]["records"], b["suites"][0]["records"]):
        assert rec_a == rec_b
    assert set(s["suite"] for s in a["suites"]) == {"fubini", "epsilon_homomorphism"}


def test_suite_names_exposed():
    names = fk.suite_names()
    assert "strong_ito" in names and "wiener" in names
