"""Subspaces of the standard module, represented by canonical exact bases.

A :class:`Subspace` of Q(q)^n stores the unique reduced-column-echelon basis
of its span, so two subspaces are equal iff their stored bases are equal.
The inner product is ``<u, v> = u^T conj(v)`` (conjugation is the identity
for b > 0 and negates the q-part for b < 0), which is the restriction of the
standard Hermitian form under the complex embedding.
"""

from __future__ import annotations

from typing import Sequence

from .errors import AmbientMismatch, NotADirectSum, SingularMatrix
from .field import GroundField
from .matrix import Mat, hstack, inverse, kernel, rcef


class Subspace:
    """An exact subspace of Q(q)^n with a canonical basis."""

    __slots__ = ("field", "ambient", "basis", "pivot_rows")

    def __init__(self, field: GroundField, ambient: int, basis: Mat, pivot_rows):
        self.field = field
        self.ambient = ambient
        self.basis = basis  # ambient x dim, reduced column echelon
        self.pivot_rows = tuple(pivot_rows)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_spanning(cls, M: Mat) -> "Subspace":
        """Span of the columns of M."""
        B, pivot_rows = rcef(M)
        return cls(M.field, M.rows, B, pivot_rows)

    @classmethod
    def from_canonical(cls, M: Mat, pivot_rows) -> "Subspace":
        """Trusted constructor: M is already a canonical basis."""
        return cls(M.field, M.rows, M, pivot_rows)

    @classmethod
    def zero(cls, field: GroundField, ambient: int) -> "Subspace":
        return cls(field, ambient, Mat.zeros(field, ambient, 0), ())

    @classmethod
    def full(cls, field: GroundField, ambient: int) -> "Subspace":
        return cls(field, ambient, Mat.identity(field, ambient), range(ambient))

    # -- basic queries -------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.cols

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        self._check(other)
        return self.basis == other.basis

    def __hash__(self):
        raise TypeError("Subspace is not hashable")

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient or self.field != other.field:
            raise AmbientMismatch(
                f"ambient {self.ambient}/{self.field} vs {other.ambient}/{other.field}"
            )

    def contains_vector(self, v: Mat) -> bool:
        """v an ambient x 1 column."""
        if v.rows != self.ambient:
            raise AmbientMismatch(f"vector in dim {v.rows}, ambient {self.ambient}")
        if self.dim == 0:
            return v.is_zero()
        coords = v.take_rows(self.pivot_rows)
        return self.basis @ coords == v

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        if other.dim == 0:
            return True
        if other.dim > self.dim:
            return False
        coords = other.basis.take_rows(self.pivot_rows)
        return self.basis @ coords == other.basis

    # -- lattice operations --------------------------------------------------

    def add(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0:
            return other
        if other.dim == 0:
            return self
        return Subspace.from_spanning(hstack([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        # u = B1 x = B2 y  <=>  [B1 | -B2] (x, y) = 0
        K = kernel(hstack([self.basis, -other.basis]))
        if K.cols == 0:
            return Subspace.zero(self.field, self.ambient)
        X = K.take_rows(range(self.dim))
        return Subspace.from_spanning(self.basis @ X)

    def orth_complement_within(self, big: "Subspace") -> "Subspace":
        """{w in big : <u, w> = 0 for all u in self}."""
        self._check(big)
        if self.dim == 0:
            return big
        if big.dim == 0:
            return big
        G = self.basis.conj_transpose() @ big.basis
        K = kernel(G)
        if K.cols == 0:
            return Subspace.zero(self.field, self.ambient)
        return Subspace.from_spanning(big.basis @ K)

    def is_orthogonal_to(self, other: "Subspace") -> bool:
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return True
        return (self.basis.conj_transpose() @ other.basis).is_zero()


def coordinate_subspace(field: GroundField, ambient: int, indices) -> Subspace:
    """Span of the standard basis vectors e_i, i in indices (canonical)."""
    idx = sorted(set(int(i) for i in indices))
    if idx and (idx[0] < 0 or idx[-1] >= ambient):
        raise AmbientMismatch(f"indices {idx} outside ambient {ambient}")
    k = len(idx)
    entries = [field.zero] * (ambient * k)
    for a, i in enumerate(idx):
        entries[i * k + a] = field.one
    return Subspace.from_canonical(Mat(field, ambient, k, entries), idx)


def direct_sum_basis(parts: Sequence[Subspace]):
    """Concatenate bases of the parts; returns (C, blocks).

    blocks[k] is the range of columns of C belonging to parts[k].
    """
    if not parts:
        raise NotADirectSum("no parts")
    first = parts[0]
    cols = []
    blocks = []
    at = 0
    for S in parts:
        first._check(S)
        cols.append(S.basis)
        blocks.append(range(at, at + S.dim))
        at += S.dim
    return hstack(cols), blocks


def projector_from_direct_sum(parts: Sequence[Subspace], onto: int) -> Mat:
    """Projector onto parts[onto] along the rest; the parts must decompose
    the ambient space as a direct sum."""
    C, blocks = direct_sum_basis(parts)
    n = C.rows
    if C.cols != n:
        raise NotADirectSum(f"total dimension {C.cols} != ambient {n}")
    try:
        Cinv = inverse(C)
    except SingularMatrix as exc:
        raise NotADirectSum("concatenated bases are dependent") from exc
    blk = blocks[onto]
    return C.take_cols(blk) @ Cinv.take_rows(blk)


def all_projectors_from_direct_sum(parts: Sequence[Subspace]) -> list[Mat]:
    """All projectors of the direct sum, sharing one inverse."""
    C, blocks = direct_sum_basis(parts)
    n = C.rows
    if C.cols != n:
        raise NotADirectSum(f"total dimension {C.cols} != ambient {n}")
    try:
        Cinv = inverse(C)
    except SingularMatrix as exc:
        raise NotADirectSum("concatenated bases are dependent") from exc
    return [C.take_cols(blk) @ Cinv.take_rows(blk) for blk in blocks]
