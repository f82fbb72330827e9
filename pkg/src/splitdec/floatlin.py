"""Float (complex128) counterparts of the exact linear algebra.

These mirrors serve two purposes: an independent numerical route for
cross-checking the exact engine at small sizes, and the fast backend for
large verifications where the exact route would be wasteful.  All routines
work on numpy complex128 arrays; exact matrices enter via ``Mat.to_complex``.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-8


def orth_basis(A: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column space (SVD rank cut at tol * smax)."""
    A = np.asarray(A, dtype=np.complex128)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=np.complex128)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((A.shape[0], 0), dtype=np.complex128)
    r = int(np.sum(s > tol * s[0]))
    return U[:, :r]


def kernel_basis(A: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the right null space."""
    A = np.asarray(A, dtype=np.complex128)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if m == 0:
        return np.eye(n, dtype=np.complex128)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return Vh[r:].conj().T


def projector_onto(Q: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the span of an orthonormal basis Q."""
    return Q @ Q.conj().T


def oblique_projector(C: np.ndarray, block: range) -> np.ndarray:
    """Projector onto the given column block of C along the other columns."""
    n = C.shape[0]
    Cinv = np.linalg.inv(C)
    return C[:, block] @ Cinv[block, :]


def subspace_sum(*bases: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    return orth_basis(np.hstack(bases), tol)


def subspace_intersect(B1: np.ndarray, B2: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Intersection via the kernel of [B1 | -B2]."""
    if B1.shape[1] == 0 or B2.shape[1] == 0:
        return np.zeros((B1.shape[0], 0), dtype=np.complex128)
    K = kernel_basis(np.hstack([B1, -B2]), tol)
    if K.shape[1] == 0:
        return np.zeros((B1.shape[0], 0), dtype=np.complex128)
    return orth_basis(B1 @ K[: B1.shape[1]], tol)


def orth_complement_within(U: np.ndarray, W: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """{w in col(W) : <u, w> = 0 for all u in col(U)} (orthonormal basis)."""
    if U.shape[1] == 0:
        return orth_basis(W, tol)
    K = kernel_basis(U.conj().T @ W, tol)
    if K.shape[1] == 0:
        return np.zeros((U.shape[0], 0), dtype=np.complex128)
    return orth_basis(W @ K, tol)


def max_abs(A: np.ndarray) -> float:
    return float(np.max(np.abs(A))) if A.size else 0.0


def rel_residual(X: np.ndarray, scale_refs: tuple = ()) -> float:
    """max|X| divided by the largest magnitude among the reference matrices
    (at least 1), the residual convention used by the float check suites."""
    scale = 1.0
    for R in scale_refs:
        scale = max(scale, max_abs(R))
    return max_abs(X) / scale


def same_subspace(B1: np.ndarray, B2: np.ndarray, tol: float = 1e-7) -> bool:
    """Do two (orthonormal) bases span the same subspace, numerically?"""
    if B1.shape[1] != B2.shape[1]:
        return False
    if B1.shape[1] == 0:
        return True
    P1 = projector_onto(orth_basis(B1, tol))
    P2 = projector_onto(orth_basis(B2, tol))
    return max_abs(P1 - P2) <= tol
