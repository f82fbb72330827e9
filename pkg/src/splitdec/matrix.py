"""Dense exact matrices over a :class:`~splitdec.field.GroundField`.

Elimination is fraction-free (Bareiss) over Z[q] followed by a normalization
pass, so reduced echelon forms are canonical field matrices.  Large inputs are
routed to the certified multi-modular engine in :mod:`splitdec.modular`; both
engines produce the same canonical outputs.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from .errors import (
    FieldMismatch,
    ScalarParseError,
    ShapeMismatch,
    SingularMatrix,
)
from .field import GroundField, Scalar, as_scalar

# Entry-count thresholds for routing eliminations / matmuls to the modular
# engine.  Pure Bareiss stays the reference implementation below them.
ELIM_MODULAR_THRESHOLD = 12_000
MATMUL_PURE_LIMIT = 300_000


class Mat:
    """Immutable dense matrix of :class:`Scalar` entries (row-major)."""

    __slots__ = ("field", "rows", "cols", "_e", "_irep")

    def __init__(self, field: GroundField, rows: int, cols: int, entries):
        self.field = field
        self.rows = rows
        self.cols = cols
        self._e = entries  # flat list, len rows*cols
        self._irep = None
        if len(entries) != rows * cols:
            raise ShapeMismatch(f"{rows}x{cols} needs {rows * cols} entries")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols, [field.zero] * (rows * cols))

    @classmethod
    def identity(cls, field, n):
        e = [field.zero] * (n * n)
        for i in range(n):
            e[i * n + i] = field.one
        return cls(field, n, n, e)

    @classmethod
    def from_rows(cls, field, rows):
        rows = [[as_scalar(field, x) for x in row] for row in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("ragged rows")
        return cls(field, len(rows), ncols, [x for row in rows for x in row])

    @classmethod
    def diag(cls, field, values):
        values = [as_scalar(field, v) for v in values]
        n = len(values)
        e = [field.zero] * (n * n)
        for i, v in enumerate(values):
            e[i * n + i] = v
        return cls(field, n, n, e)

    @classmethod
    def col_vector(cls, field, values):
        return cls(field, len(values), 1, [as_scalar(field, v) for v in values])

    @classmethod
    def from_int_array(cls, field, arr):
        """Build from a 2-D array of Python ints / Fractions."""
        arr = np.asarray(arr, dtype=object)
        rows, cols = arr.shape
        sc = field.scalar
        return cls(field, rows, cols, [sc(arr[i, j]) for i in range(rows) for j in range(cols)])

    # -- access --------------------------------------------------------------

    def __getitem__(self, key):
        i, j = key
        return self._e[i * self.cols + j]

    def row(self, i):
        return self._e[i * self.cols:(i + 1) * self.cols]

    def col(self, j):
        return self._e[j::self.cols]

    def submatrix(self, row_idx, col_idx):
        row_idx = list(row_idx)
        col_idx = list(col_idx)
        e = []
        for i in row_idx:
            base = i * self.cols
            e.extend(self._e[base + j] for j in col_idx)
        return Mat(self.field, len(row_idx), len(col_idx), e)

    def take_cols(self, col_idx):
        return self.submatrix(range(self.rows), col_idx)

    def take_rows(self, row_idx):
        row_idx = list(row_idx)
        e = []
        for i in row_idx:
            e.extend(self._e[i * self.cols:(i + 1) * self.cols])
        return Mat(self.field, len(row_idx), self.cols, e)

    # -- structure -----------------------------------------------------------

    def transpose(self):
        e = [None] * (self.rows * self.cols)
        for i in range(self.rows):
            base = i * self.cols
            for j in range(self.cols):
                e[j * self.rows + i] = self._e[base + j]
        return Mat(self.field, self.cols, self.rows, e)

    def conj(self):
        if self.field.b > 0:
            return self
        return Mat(self.field, self.rows, self.cols, [x.conj() for x in self._e])

    def conj_transpose(self):
        return self.conj().transpose()

    def sigma(self):
        return Mat(self.field, self.rows, self.cols, [x.sigma() for x in self._e])

    def map(self, fn):
        return Mat(self.field, self.rows, self.cols, [fn(x) for x in self._e])

    # -- arithmetic ----------------------------------------------------------

    def _check_same(self, other):
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if (other.rows, other.cols) != (self.rows, self.cols):
            raise ShapeMismatch(
                f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __add__(self, other):
        self._check_same(other)
        return Mat(
            self.field, self.rows, self.cols,
            [a + b for a, b in zip(self._e, other._e)],
        )

    def __sub__(self, other):
        self._check_same(other)
        return Mat(
            self.field, self.rows, self.cols,
            [a - b for a, b in zip(self._e, other._e)],
        )

    def __neg__(self):
        return Mat(self.field, self.rows, self.cols, [-a for a in self._e])

    def scale(self, s):
        s = as_scalar(self.field, s)
        if s == self.field.one:
            return self
        return Mat(self.field, self.rows, self.cols, [s * a for a in self._e])

    def __mul__(self, other):
        if isinstance(other, Mat):
            raise TypeError("use @ for matrix products, hadamard() for entrywise")
        return self.scale(other)

    __rmul__ = __mul__

    def hadamard(self, other):
        self._check_same(other)
        return Mat(
            self.field, self.rows, self.cols,
            [a * b for a, b in zip(self._e, other._e)],
        )

    def __matmul__(self, other):
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        flops = self.rows * self.cols * other.cols
        if flops > MATMUL_PURE_LIMIT:
            from . import modular

            out = modular.matmul(self, other)
            if out is not None:
                return out
        return self._matmul_pure(other)

    def _matmul_pure(self, other):
        n, k, m = self.rows, self.cols, other.cols
        zero = self.field.zero
        out = [zero] * (n * m)
        oe = other._e
        for i in range(n):
            base = i * k
            obase = i * m
            for t in range(k):
                a = self._e[base + t]
                if a.is_zero:
                    continue
                rbase = t * m
                for j in range(m):
                    bviz = oe[rbase + j]
                    if bviz.is_zero:
                        continue
                    out[obase + j] = out[obase + j] + a * bviz
        return Mat(self.field, n, m, out)

    def trace(self):
        if self.rows != self.cols:
            raise ShapeMismatch("trace of a non-square matrix")
        t = self.field.zero
        for i in range(self.rows):
            t = t + self._e[i * self.cols + i]
        return t

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return all(x.is_zero for x in self._e)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if other.field != self.field or (other.rows, other.cols) != (self.rows, self.cols):
            return False
        return all(a == b for a, b in zip(self._e, other._e))

    def __hash__(self):
        raise TypeError("Mat is not hashable")

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols} over {self.field})"

    # -- conversions ---------------------------------------------------------

    def int_rep(self):
        """Return (U, V, den): self == (U + q*V) / den with integer arrays.

        V is None when every entry is rational.  Cached (Mat is immutable).
        """
        if self._irep is not None:
            return self._irep
        den = 1
        for x in self._e:
            den = lcm(den, x.a0.denominator)
            if x.a1:
                den = lcm(den, x.a1.denominator)
        U = np.empty((self.rows, self.cols), dtype=object)
        has_q = any(x.a1 for x in self._e)
        V = np.empty((self.rows, self.cols), dtype=object) if has_q else None
        k = 0
        for i in range(self.rows):
            for j in range(self.cols):
                x = self._e[k]
                k += 1
                U[i, j] = int(x.a0 * den)
                if V is not None:
                    V[i, j] = int(x.a1 * den)
        self._irep = (U, V, den)
        return self._irep

    @classmethod
    def from_int_rep(cls, field, U, V, den):
        rows, cols = U.shape
        d = Fraction(1, den) if den != 1 else None
        e = []
        for i in range(rows):
            for j in range(cols):
                a0 = Fraction(int(U[i, j]))
                a1 = Fraction(int(V[i, j])) if V is not None else Fraction(0)
                if d is not None:
                    a0 *= d
                    a1 *= d
                e.append(field.scalar(a0, a1))
        return cls(field, rows, cols, e)

    def to_complex(self):
        out = np.empty((self.rows, self.cols), dtype=complex)
        k = 0
        for i in range(self.rows):
            for j in range(self.cols):
                out[i, j] = self._e[k].to_complex()
                k += 1
        return out

    def to_real(self):
        c = self.to_complex()
        return c.real.copy()

    # -- text format ---------------------------------------------------------

    def encode(self) -> str:
        """Dump: header ``rows cols b mode qsign``, then one line per row."""
        lines = [
            f"{self.rows} {self.cols} {self.field.b} {self.field.mode} {self.field.qsign}"
        ]
        for i in range(self.rows):
            lines.append(" ".join(x.encode() for x in self.row(i)))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Mat":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ScalarParseError("empty matrix dump")
        head = lines[0].split()
        if len(head) != 5:
            raise ScalarParseError(f"bad header {lines[0]!r}")
        try:
            rows, cols, b = int(head[0]), int(head[1]), int(head[2])
            qsign = int(head[4])
        except ValueError as exc:
            raise ScalarParseError(f"bad header {lines[0]!r}") from exc
        field = GroundField(b, qsign)
        if field.mode != head[3]:
            raise ScalarParseError(
                f"header mode {head[3]!r} does not match b={b} ({field.mode})"
            )
        if len(lines) != rows + 1:
            raise ScalarParseError(f"expected {rows} rows, found {len(lines) - 1}")
        entries = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != cols:
                raise ScalarParseError(f"expected {cols} entries in row {ln!r}")
            entries.extend(field.parse_scalar(p) for p in parts)
        return cls(field, rows, cols, entries)


def hstack(mats):
    mats = [m for m in mats]
    if not mats:
        raise ShapeMismatch("hstack of nothing")
    field, rows = mats[0].field, mats[0].rows
    for m in mats:
        if m.field != field:
            raise FieldMismatch("mixed fields in hstack")
        if m.rows != rows:
            raise ShapeMismatch("mixed row counts in hstack")
    cols = sum(m.cols for m in mats)
    e = []
    for i in range(rows):
        for m in mats:
            e.extend(m.row(i))
    return Mat(field, rows, cols, e)


def vstack(mats):
    mats = [m for m in mats]
    if not mats:
        raise ShapeMismatch("vstack of nothing")
    field, cols = mats[0].field, mats[0].cols
    e = []
    for m in mats:
        if m.field != field:
            raise FieldMismatch("mixed fields in vstack")
        if m.cols != cols:
            raise ShapeMismatch("mixed column counts in vstack")
        e.extend(m._e)
    return Mat(field, sum(m.rows for m in mats), cols, e)


# ---------------------------------------------------------------------------
# Fraction-free elimination (reference engine)
# ---------------------------------------------------------------------------


def _pair_swap(U, V, a, b):
    U[[a, b], :] = U[[b, a], :]
    if V is not None:
        V[[a, b], :] = V[[b, a], :]


def _exact_div(arr, d):
    q = arr // d
    if (arr - q * d).any():
        raise ArithmeticError("inexact division in fraction-free elimination")
    return q


def _bareiss_forward(U, V, b):
    """In-place fraction-free row echelon; returns pivot column list.

    U, V are object arrays (V may be None); matrix is (U + q V) with q^2 = b.
    """
    rows, cols = U.shape
    r = 0
    prev_u, prev_v = 1, 0
    pivots = []
    for c in range(cols):
        if r >= rows:
            break
        sel = None
        for i in range(r, rows):
            if U[i, c] or (V is not None and V[i, c]):
                sel = i
                break
        if sel is None:
            continue
        if sel != r:
            _pair_swap(U, V, r, sel)
        pu = U[r, c]
        pv = V[r, c] if V is not None else 0
        if r + 1 < rows:
            blk_u = U[r + 1:, :]
            col_u = U[r + 1:, c:c + 1]
            row_u = U[r:r + 1, :]
            if V is None:
                new_u = blk_u * pu - col_u * row_u
                if prev_u != 1:
                    new_u = _exact_div(new_u, prev_u)
                U[r + 1:, :] = new_u
            else:
                blk_v = V[r + 1:, :]
                col_v = V[r + 1:, c:c + 1]
                row_v = V[r:r + 1, :]
                new_u = blk_u * pu + b * (blk_v * pv) - (col_u * row_u + b * (col_v * row_v))
                new_v = blk_u * pv + blk_v * pu - (col_u * row_v + col_v * row_u)
                if prev_u != 1 or prev_v != 0:
                    # divide by the pair (prev_u + q prev_v): multiply by its
                    # conjugate and divide by the integer norm
                    norm = prev_u * prev_u - b * prev_v * prev_v
                    t_u = new_u * prev_u - b * (new_v * prev_v)
                    t_v = new_v * prev_u - new_u * prev_v
                    new_u = _exact_div(t_u, norm)
                    new_v = _exact_div(t_v, norm)
                U[r + 1:, :] = new_u
                V[r + 1:, :] = new_v
        pivots.append(c)
        prev_u, prev_v = pu, pv
        r += 1
    return pivots


def _rref_pure(M: Mat):
    """Canonical reduced row echelon form: (R, rank, pivot columns)."""
    field = M.field
    if M.rows == 0 or M.cols == 0:
        return M, 0, ()
    U, V, _den = M.int_rep()
    U = U.copy()
    V = V.copy() if V is not None else None
    pivots = _bareiss_forward(U, V, field.b)
    rank = len(pivots)
    # normalize pivot rows to field scalars and back-eliminate above pivots
    rows = []
    for i in range(rank):
        c = pivots[i]
        pu = Fraction(int(U[i, c]))
        pv = Fraction(int(V[i, c])) if V is not None else Fraction(0)
        pinv = field.scalar(pu, pv).inverse()
        row = []
        for j in range(M.cols):
            if j < c:
                row.append(field.zero)
            else:
                a0 = Fraction(int(U[i, j]))
                a1 = Fraction(int(V[i, j])) if V is not None else Fraction(0)
                row.append(field.scalar(a0, a1) * pinv)
        rows.append(row)
    for i in range(rank - 1, -1, -1):
        c = pivots[i]
        for e in range(i):
            f = rows[e][c]
            if f.is_zero:
                continue
            re, ri = rows[e], rows[i]
            for j in range(c, M.cols):
                re[j] = re[j] - f * ri[j]
    entries = [x for row in rows for x in row]
    entries.extend([field.zero] * ((M.rows - rank) * M.cols))
    R = Mat(field, M.rows, M.cols, entries)
    return R, rank, tuple(pivots)


def _kernel_from_rref(R: Mat, rank: int, pivots):
    """Kernel basis (cols x k) from a reduced row echelon form."""
    field = R.field
    n = R.cols
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    k = len(free)
    e = [field.zero] * (n * k)
    for a, f in enumerate(free):
        e[f * k + a] = field.one
        for i, c in enumerate(pivots):
            v = R[i, f]
            if not v.is_zero:
                e[c * k + a] = -v
    return Mat(field, n, k, e)


def rref(M: Mat):
    """Reduced row echelon form: returns (R, rank, pivot columns)."""
    if M.rows * M.cols > ELIM_MODULAR_THRESHOLD:
        from . import modular

        out = modular.rref(M)
        if out is not None:
            return out
    return _rref_pure(M)


def rref_rank_kernel(M: Mat):
    """(R, rank, kernel): RREF, its rank, and a canonical kernel basis."""
    R, rank, pivots = rref(M)
    K = _kernel_from_rref(R, rank, pivots)
    K = rcef(K)[0] if K.cols else K
    return R, rank, K


def kernel(M: Mat) -> Mat:
    """Canonical basis (reduced column echelon) of the right kernel."""
    if M.rows * M.cols > ELIM_MODULAR_THRESHOLD:
        from . import modular

        out = modular.kernel(M)
        if out is not None:
            return out
    R, rank, pivots = _rref_pure(M)
    K = _kernel_from_rref(R, rank, pivots)
    if K.cols:
        K = _rcef_pure(K)[0]
    return K


def rank(M: Mat) -> int:
    return rref(M)[1]


def _rcef_pure(M: Mat):
    R, r, pivots = _rref_pure(M.transpose())
    return R.take_rows(range(r)).transpose(), tuple(pivots)


def rcef(M: Mat):
    """Canonical column-space basis: returns (B, pivot_rows).

    B's transpose is in reduced row echelon form, so B is the unique
    canonical basis of the column space of M.
    """
    if M.rows * M.cols > ELIM_MODULAR_THRESHOLD:
        from . import modular

        out = modular.rcef(M)
        if out is not None:
            return out
    return _rcef_pure(M)


def inverse(M: Mat) -> Mat:
    if M.rows != M.cols:
        raise ShapeMismatch("inverse of a non-square matrix")
    if M.rows * M.cols > ELIM_MODULAR_THRESHOLD:
        from . import modular

        out = modular.inverse(M)
        if out is not None:
            return out
    aug = hstack([M, Mat.identity(M.field, M.rows)])
    R, rank_, pivots = _rref_pure(aug)
    if rank_ < M.rows or any(p >= M.rows for p in pivots):
        raise SingularMatrix(f"matrix of rank {rank_} < {M.rows}")
    return R.take_cols(range(M.rows, 2 * M.rows))


def solve(M: Mat, B: Mat) -> Mat:
    """Solve M X = B for square nonsingular M."""
    if M.rows != M.cols:
        raise ShapeMismatch("solve needs a square matrix")
    if M.rows != B.rows:
        raise ShapeMismatch("incompatible right-hand side")
    if M.rows * (M.cols + B.cols) > ELIM_MODULAR_THRESHOLD:
        from . import modular

        out = modular.solve(M, B)
        if out is not None:
            return out
    aug = hstack([M, B])
    R, rank_, pivots = _rref_pure(aug)
    if rank_ < M.rows or any(p >= M.rows for p in pivots):
        raise SingularMatrix(f"matrix of rank {rank_} < {M.rows}")
    return R.take_cols(range(M.rows, M.cols + B.cols))
