"""Float linear-algebra helpers used by the numeric verification suites."""

import numpy as np

from splitdec.floatlin import (
    kernel_basis,
    max_abs,
    oblique_projector,
    orth_basis,
    orth_complement_within,
    projector_onto,
    rel_residual,
    same_subspace,
    subspace_intersect,
    subspace_sum,
)

RNG = np.random.default_rng(7)


def test_orth_basis_rank_and_orthonormality():
    A = RNG.normal(size=(6, 3))
    A = np.hstack([A, A @ RNG.normal(size=(3, 2))])  # rank stays 3
    Q = orth_basis(A)
    assert Q.shape == (6, 3)
    assert max_abs(Q.conj().T @ Q - np.eye(3)) < 1e-12


def test_kernel_basis():
    A = np.array([[1.0, 1.0, 1.0]])
    K = kernel_basis(A)
    assert K.shape == (3, 2)
    assert max_abs(A @ K) < 1e-12


def test_projector_onto():
    Q = orth_basis(RNG.normal(size=(5, 2)))
    P = projector_onto(Q)
    assert max_abs(P @ P - P) < 1e-12
    assert max_abs(P.conj().T - P) < 1e-12
    v = Q @ np.array([2.0, -1.0])
    assert max_abs(P @ v - v) < 1e-12


def test_oblique_projector_blocks():
    C = RNG.normal(size=(5, 5)) + np.eye(5)
    P = oblique_projector(C, range(2))
    assert max_abs(P @ P - P) < 1e-9
    assert max_abs(P @ C[:, :2] - C[:, :2]) < 1e-9
    assert max_abs(P @ C[:, 2:]) < 1e-9


def test_sum_and_intersection():
    e = np.eye(4)
    plane1 = e[:, :2]
    plane2 = np.hstack([e[:, 1:2] + e[:, 0:1], e[:, 2:3]])
    S = subspace_sum(plane1, plane2)
    assert S.shape[1] == 3
    I = subspace_intersect(plane1, plane2)
    assert I.shape[1] == 1
    # the intersection is spanned by e0 + e1
    target = (e[:, 0] + e[:, 1]) / np.sqrt(2)
    assert min(
        max_abs(I[:, 0] - target), max_abs(I[:, 0] + target)
    ) < 1e-12


def test_orth_complement_within():
    e = np.eye(3)
    W = e[:, :2]
    U = e[:, :1]
    Cmp = orth_complement_within(U, W)
    assert Cmp.shape[1] == 1
    assert abs(abs(Cmp[1, 0]) - 1.0) < 1e-12
    assert abs(Cmp[0, 0]) < 1e-12


def test_complement_of_zero_is_whole_space():
    W = orth_basis(RNG.normal(size=(4, 2)))
    Z = np.zeros((4, 0))
    assert same_subspace(orth_complement_within(Z, W), W)


def test_same_subspace():
    B = orth_basis(RNG.normal(size=(5, 2)))
    M = B @ RNG.normal(size=(2, 2))  # same span, different basis
    assert same_subspace(B, orth_basis(M))
    other = orth_basis(RNG.normal(size=(5, 2)))
    assert not same_subspace(B, other)


def test_residual_conventions():
    A = RNG.normal(size=(3, 3))
    assert rel_residual(A - A, (A,)) == 0.0
    assert rel_residual(np.array([[2.0]]), ()) == 2.0
    big = 100.0 * np.eye(2)
    assert rel_residual(np.eye(2), (big,)) == 0.01
    assert max_abs(np.zeros((0, 3))) == 0.0
