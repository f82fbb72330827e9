"""The four (mu, nu)-split decompositions of the standard module.

For mu, nu in {down, up} (written ``d`` / ``u``) and a base vertex x, the
grid subspace V^{mu nu}_{i,j} is the intersection of an E*-prefix (a
coordinate subspace: vertices at distance <= i from x for mu = d, or
>= D - i for mu = u) with an E-prefix column space (the sum of the first
j + 1 eigenspaces in the Q-polynomial ordering for nu = d, or the last
j + 1 for nu = u).  The tilde cells

    tilde V_{i,j} = (V_{i-1,j} + V_{i,j-1})^perp  intersect  V_{i,j}

decompose the standard module; the grid's change-of-basis matrix C
(tilde bases concatenated in row-major (i,j) order) yields the oblique
projectors E^{mu nu}_{i,j} = C 1_block C^{-1}, and the displacement
projectors phi_eta / psi_zeta are diagonal sums of the dd / du grids.

Everything is exact.  A cell intersection never multiplies projectors:
since the E*-prefix is a coordinate subspace, V_{i,j} is the kernel of
the complementary spectral projector restricted to the support columns.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    CrossExpressionMismatch,
    IndexOutOfRange,
    NotADirectSum,
    SingularMatrix,
)
from .matrix import Mat, hstack, inverse, kernel, rcef, solve
from .scheme import DualData, SchemeData
from .subspace import Subspace, coordinate_subspace

__all__ = [
    "GRID_LABELS",
    "SplitGrid",
    "SplitSystem",
    "split_cell",
    "split_decomposition",
    "displacement_projectors",
    "verify_split_suite",
    "cell_components",
]

GRID_LABELS = ("dd", "ud", "du", "uu")


# ---------------------------------------------------------------------------
# grid subspaces
# ---------------------------------------------------------------------------


def _support_vertices(scheme: SchemeData, x: int, mu: str, i: int):
    """Vertices in the E*-prefix: distance <= i (mu=d) or >= D-i (mu=u)."""
    row = scheme.dd.dist[x]
    if mu == "d":
        keep = row <= i
    else:
        keep = row >= scheme.D - i
    return [int(v) for v in np.flatnonzero(keep)]


def _complement_values(scheme: SchemeData, nu: str, j: int):
    """Entry values (per distance h) of I minus the E-prefix projector.

    The prefix is positions 0..j of the Q-polynomial ordering for nu=d,
    positions D-j..D for nu=u; the complement is the remaining E's.
    """
    D = scheme.D
    sig = scheme.ordering
    if nu == "d":
        positions = range(j + 1, D + 1)
    else:
        positions = range(0, D - j)
    vals = []
    for h in range(D + 1):
        s = scheme.field.zero
        for t in positions:
            s = s + scheme.gamma[sig[t]][h]
        vals.append(s)
    return vals


def _embed_from_support(field, n, support, B: Mat, pivots_local) -> Subspace:
    """Lift a canonical basis on the support coordinates to the ambient
    space (zero off-support); canonical form is preserved because the
    support list is strictly increasing."""
    k = B.cols
    entries = [field.zero] * (n * k)
    for a, r in enumerate(support):
        row = B.row(a)
        base = r * k
        for c in range(k):
            entries[base + c] = row[c]
    pivots = tuple(support[p] for p in pivots_local)
    return Subspace.from_canonical(Mat(field, n, k, entries), pivots)


def split_cell(
    scheme: SchemeData, dual: DualData, mu: str, nu: str, i: int, j: int
) -> Subspace:
    """The grid subspace V^{mu nu}_{i,j}; i or j equal to -1 gives 0."""
    if mu not in ("d", "u") or nu not in ("d", "u"):
        raise IndexOutOfRange(f"mu/nu must be 'd' or 'u', got {mu!r}{nu!r}")
    D, n, field = scheme.D, scheme.n, scheme.field
    if not (-1 <= i <= D and -1 <= j <= D):
        raise IndexOutOfRange(f"cell ({i},{j}) outside -1..{D}")
    if i == -1 or j == -1:
        return Subspace.zero(field, n)
    support = _support_vertices(scheme, dual.x, mu, i)
    if not support:
        return Subspace.zero(field, n)
    vals = _complement_values(scheme, nu, j)
    if all(v.is_zero for v in vals):
        # the E-prefix is everything: V_{i,j} is the coordinate subspace
        return coordinate_subspace(field, n, support)
    dist = scheme.dd.dist
    m = len(support)
    entries = [field.zero] * (n * m)
    for r in range(n):
        drow = dist[r]
        base = r * m
        for c, y in enumerate(support):
            entries[base + c] = vals[int(drow[y])]
    K = kernel(Mat(field, n, m, entries))
    if K.cols == 0:
        return Subspace.zero(field, n)
    B, piv = rcef(K)
    return _embed_from_support(field, n, support, B, piv)


# ---------------------------------------------------------------------------
# grids and the assembled system
# ---------------------------------------------------------------------------


class SplitGrid:
    """One (mu, nu) grid: tilde cells, change of basis, lazy projectors."""

    __slots__ = ("mu", "nu", "field", "n", "D", "tilde", "C", "blocks",
                 "_cinv", "_proj")

    def __init__(self, scheme: SchemeData, dual: DualData, mu: str, nu: str):
        self.mu, self.nu = mu, nu
        self.field, self.n, self.D = scheme.field, scheme.n, scheme.D
        D = self.D
        V = {}
        for i in range(-1, D + 1):
            for j in range(-1, D + 1):
                V[i, j] = split_cell(scheme, dual, mu, nu, i, j)
        tilde = [[None] * (D + 1) for _ in range(D + 1)]
        for i in range(D + 1):
            for j in range(D + 1):
                below = V[i - 1, j].add(V[i, j - 1])
                tilde[i][j] = below.orth_complement_within(V[i, j])
        self.tilde = tilde
        total = sum(tilde[i][j].dim for i in range(D + 1) for j in range(D + 1))
        if total != self.n:
            raise NotADirectSum(
                f"grid {mu}{nu}: tilde dimensions sum to {total}, not {self.n}"
            )
        cols = []
        blocks = [[None] * (D + 1) for _ in range(D + 1)]
        at = 0
        for i in range(D + 1):
            for j in range(D + 1):
                S = tilde[i][j]
                blocks[i][j] = range(at, at + S.dim)
                at += S.dim
                if S.dim:
                    cols.append(S.basis)
        self.C = hstack(cols)
        self.blocks = blocks
        self._cinv = None
        self._proj = {}

    @classmethod
    def from_parts(cls, field, n, D, mu, nu, C, pivot_rows, cinv=None):
        """Rebuild a grid from its stored change-of-basis matrix.

        ``pivot_rows[i][j]`` lists the pivot rows of tilde cell (i, j); the
        cell's basis is the corresponding block of columns of ``C``.  The
        direct-sum property is re-checked via the column count.
        """
        self = cls.__new__(cls)
        self.mu, self.nu = mu, nu
        self.field, self.n, self.D = field, n, D
        if C.rows != n:
            raise NotADirectSum(f"grid {mu}{nu}: basis has {C.rows} rows, not {n}")
        tilde = [[None] * (D + 1) for _ in range(D + 1)]
        blocks = [[None] * (D + 1) for _ in range(D + 1)]
        at = 0
        for i in range(D + 1):
            for j in range(D + 1):
                piv = tuple(pivot_rows[i][j])
                blocks[i][j] = range(at, at + len(piv))
                tilde[i][j] = Subspace.from_canonical(
                    C.take_cols(blocks[i][j]), piv
                )
                at += len(piv)
        if at != n or C.cols != n:
            raise NotADirectSum(
                f"grid {mu}{nu}: tilde dimensions sum to {at}, not {n}"
            )
        self.tilde = tilde
        self.C = C
        self.blocks = blocks
        self._cinv = cinv
        self._proj = {}
        return self

    @property
    def label(self) -> str:
        return self.mu + self.nu

    def dims(self):
        """Tilde dimension grid as a (D+1) x (D+1) nested list."""
        return [[self.tilde[i][j].dim for j in range(self.D + 1)]
                for i in range(self.D + 1)]

    @property
    def Cinv(self) -> Mat:
        if self._cinv is None:
            try:
                self._cinv = inverse(self.C)
            except SingularMatrix as exc:
                raise NotADirectSum(
                    f"grid {self.label}: concatenated tilde bases are singular"
                ) from exc
        return self._cinv

    def projector(self, i: int, j: int) -> Mat:
        """E^{mu nu}_{i,j}: projection onto tilde cell (i,j) along the rest."""
        key = (i, j)
        if key not in self._proj:
            blk = self.blocks[i][j]
            if len(blk) == 0:
                self._proj[key] = Mat.zeros(self.field, self.n, self.n)
            else:
                self._proj[key] = self.C.take_cols(blk) @ self.Cinv.take_rows(blk)
        return self._proj[key]

    def weighted_sum(self, weight) -> Mat:
        """C diag(weight(i,j) per cell) C^{-1}, built block-by-block."""
        cols = []
        for i in range(self.D + 1):
            for j in range(self.D + 1):
                blk = self.blocks[i][j]
                if len(blk):
                    cols.append(self.C.take_cols(blk) * weight(i, j))
        return hstack(cols) @ self.Cinv


class SplitSystem:
    """All four grids plus the displacement projectors phi_eta, psi_zeta."""

    __slots__ = ("scheme", "dual", "grids", "_phi", "_psi")

    def __init__(self, scheme: SchemeData, dual: DualData):
        self.scheme = scheme
        self.dual = dual
        self.grids = {}
        for mu in ("d", "u"):
            for nu in ("d", "u"):
                self.grids[mu + nu] = SplitGrid(scheme, dual, mu, nu)
        self._phi = None
        self._psi = None

    @classmethod
    def from_grids(cls, scheme: SchemeData, dual: DualData, grids) -> "SplitSystem":
        """Assemble a system from prebuilt grids (e.g. reloaded from disk)."""
        if sorted(grids) != sorted(GRID_LABELS):
            raise IndexOutOfRange(f"need grids {GRID_LABELS}, got {sorted(grids)}")
        self = cls.__new__(cls)
        self.scheme = scheme
        self.dual = dual
        self.grids = dict(grids)
        self._phi = None
        self._psi = None
        return self

    @property
    def field(self):
        return self.scheme.field

    @property
    def n(self) -> int:
        return self.scheme.n

    @property
    def D(self) -> int:
        return self.scheme.D

    def grid(self, label: str) -> SplitGrid:
        if label not in self.grids:
            raise IndexOutOfRange(f"grid label {label!r} not in {GRID_LABELS}")
        return self.grids[label]

    def tilde(self, label: str, i: int, j: int) -> Subspace:
        g = self.grid(label)
        if not (0 <= i <= self.D and 0 <= j <= self.D):
            raise IndexOutOfRange(f"tilde cell ({i},{j}) outside 0..{self.D}")
        return g.tilde[i][j]

    def _diag_sum(self, label: str, total: int) -> Mat:
        g = self.grid(label)
        out = Mat.zeros(self.field, self.n, self.n)
        for i in range(self.D + 1):
            j = total - i
            if 0 <= j <= self.D and g.tilde[i][j].dim:
                out = out + g.projector(i, j)
        return out

    def phi(self, eta: int) -> Mat:
        """phi_eta = sum of E^{dd}_{i,j} over i + j = D + eta (0 <= eta <= D),
        cross-checked against the uu grid at i + j = D - eta."""
        if not (0 <= eta <= self.D):
            raise IndexOutOfRange(f"eta {eta} outside 0..{self.D}")
        if self._phi is None:
            self._phi = {}
        if eta not in self._phi:
            down = self._diag_sum("dd", self.D + eta)
            up = self._diag_sum("uu", self.D - eta)
            if down != up:
                raise CrossExpressionMismatch(
                    f"phi_{eta}: dd-grid and uu-grid expressions disagree"
                )
            self._phi[eta] = down
        return self._phi[eta]

    def psi(self, zeta: int) -> Mat:
        """psi_zeta = sum of E^{du}_{i,j} over i + j = D + zeta
        (-D <= zeta <= D), cross-checked against the ud grid at D - zeta."""
        if not (-self.D <= zeta <= self.D):
            raise IndexOutOfRange(f"zeta {zeta} outside -D..D")
        if self._psi is None:
            self._psi = {}
        if zeta not in self._psi:
            down = self._diag_sum("du", self.D + zeta)
            up = self._diag_sum("ud", self.D - zeta)
            if down != up:
                raise CrossExpressionMismatch(
                    f"psi_{zeta}: du-grid and ud-grid expressions disagree"
                )
            self._psi[zeta] = down
        return self._psi[zeta]


def split_decomposition(scheme: SchemeData, dual: DualData) -> SplitSystem:
    """Build all four split grids at the dual base vertex."""
    return SplitSystem(scheme, dual)


def displacement_projectors(system: SplitSystem):
    """(phi_0..phi_D, psi_{-D}..psi_D); raises CrossExpressionMismatch if the
    down-grid and up-grid expressions of any projector disagree."""
    D = system.D
    phis = [system.phi(eta) for eta in range(D + 1)]
    psis = [system.psi(zeta) for zeta in range(-D, D + 1)]
    return phis, psis


def cell_components(system: SplitSystem, label: str, v: Mat):
    """Decompose the columns of v into tilde-cell components by solving
    against the concatenated basis (the projector-free oracle route).

    Returns a dict {(i, j): Mat} with one component per nonzero cell.
    """
    g = system.grid(label)
    x = solve(g.C, v)
    out = {}
    for i in range(system.D + 1):
        for j in range(system.D + 1):
            blk = g.blocks[i][j]
            if len(blk):
                out[(i, j)] = g.C.take_cols(blk) @ x.take_rows(blk)
    return out


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------


def _check(name, anchor, ok, witness=None):
    entry = {
        "name": name,
        "paper_anchor": anchor,
        "status": "pass" if ok else "fail",
        "max_residual": "0" if ok else None,
    }
    if witness is not None:
        entry["witness"] = witness
    return entry


def _nonzero_cells(grid: SplitGrid):
    for i in range(grid.D + 1):
        for j in range(grid.D + 1):
            if grid.tilde[i][j].dim:
                yield i, j


def verify_split_suite(system: SplitSystem, materialize_limit: int = 64):
    """Run the exact split-decomposition checks; returns a list of check
    dicts (name, paper_anchor, status, max_residual, witness).

    For n <= materialize_limit the projector identities are verified on
    literal materialized matrices; above it they are certified through
    the exact identity C C^{-1} = I (the projectors are C 1_block C^{-1}
    by construction, so partition and mutual annihilation reduce to it).
    """
    checks = []
    D, n, field = system.D, system.n, system.field
    scheme = system.scheme
    small = n <= materialize_limit

    # (a) partition of identity + mutual annihilation, all four grids
    for label in GRID_LABELS:
        g = system.grid(label)
        if small:
            ident = Mat.identity(field, n)
            total = Mat.zeros(field, n, n)
            cells = list(_nonzero_cells(g))
            projs = {c: g.projector(*c) for c in cells}
            bad = None
            for c in cells:
                total = total + projs[c]
            if total != ident:
                bad = {"grid": label, "identity": "sum"}
            else:
                for c1 in cells:
                    for c2 in cells:
                        prod = projs[c1] @ projs[c2]
                        want = projs[c1] if c1 == c2 else None
                        if want is None and not prod.is_zero():
                            bad = {"grid": label, "cells": [c1, c2]}
                            break
                        if want is not None and prod != want:
                            bad = {"grid": label, "cells": [c1, c2]}
                            break
                    if bad:
                        break
            checks.append(_check(
                f"partition_annihilation_{label}",
                "sum_{i,j} E_{i,j} = I and E_{i,j} E_{r,s} = "
                "delta_{ir} delta_{js} E_{i,j}",
                bad is None, bad,
            ))
        else:
            ok = g.C @ g.Cinv == Mat.identity(field, n)
            checks.append(_check(
                f"partition_annihilation_{label}",
                "sum_{i,j} E_{i,j} = I and E_{i,j} E_{r,s} = "
                "delta_{ir} delta_{js} E_{i,j} (certified via C C^-1 = I)",
                ok, None if ok else {"grid": label},
            ))

    # (b) vanishing pattern
    bad = None
    for i in range(D + 1):
        for j in range(D + 1):
            if i + j < D and system.tilde("dd", i, j).dim:
                bad = {"grid": "dd", "cell": [i, j]}
            if i + j > D and system.tilde("uu", i, j).dim:
                bad = {"grid": "uu", "cell": [i, j]}
    checks.append(_check(
        "vanishing_pattern",
        "tilde V^{dd}_{i,j} = 0 if i+j < D; tilde V^{uu}_{i,j} = 0 if i+j > D",
        bad is None, bad,
    ))

    # (c) transpose dualities between grids
    bad = None
    for g1, g2 in (("dd", "uu"), ("du", "ud")):
        a, b = system.grid(g1), system.grid(g2)
        for i in range(D + 1):
            for j in range(D + 1):
                if a.tilde[i][j].dim != b.tilde[D - i][D - j].dim:
                    bad = {"grids": [g1, g2], "cell": [i, j], "kind": "dim"}
                    continue
                if a.tilde[i][j].dim == 0:
                    continue
                if a.projector(i, j).transpose() != b.projector(D - i, D - j):
                    bad = {"grids": [g1, g2], "cell": [i, j]}
    checks.append(_check(
        "transpose_duality",
        "(E^{dd}_{i,j})^t = E^{uu}_{D-i,D-j} and (E^{du}_{i,j})^t = "
        "E^{ud}_{D-i,D-j}",
        bad is None, bad,
    ))

    # (d) orthogonality between dual grids
    bad = None
    for g1, g2 in (("dd", "uu"), ("du", "ud")):
        a, b = system.grid(g1), system.grid(g2)
        for (i, j) in _nonzero_cells(a):
            for (r, s) in _nonzero_cells(b):
                if i + r == D and j + s == D:
                    continue
                if not a.tilde[i][j].is_orthogonal_to(b.tilde[r][s]):
                    bad = {"grids": [g1, g2], "cells": [[i, j], [r, s]]}
    checks.append(_check(
        "duality_orthogonality",
        "<tilde V^{dd}_{i,j}, tilde V^{uu}_{r,s}> = 0 unless i+r = D and "
        "j+s = D (and the du/ud analogue)",
        bad is None, bad,
    ))

    # (e) dimension tables: row sums = dim E*_i V, column sums = dim E_j V
    sphere = scheme.sphere
    sig = scheme.ordering
    bad = None
    for label in GRID_LABELS:
        g = system.grid(label)
        dims = g.dims()
        for i in range(D + 1):
            want = sphere[i] if g.mu == "d" else sphere[D - i]
            if sum(dims[i]) != want:
                bad = {"grid": label, "row": i, "sum": sum(dims[i]),
                       "want": want}
        for j in range(D + 1):
            pos = j if g.nu == "d" else D - j
            want = scheme.m[sig[pos]]
            got = sum(dims[i][j] for i in range(D + 1))
            if got != want:
                bad = {"grid": label, "col": j, "sum": got, "want": want}
    checks.append(_check(
        "dimension_tables",
        "row sums of tilde dims = dim E*_i V; column sums = dim E_j V",
        bad is None, bad,
    ))

    # (f) conjugate stability of every tilde cell
    bad = None
    for label in GRID_LABELS:
        g = system.grid(label)
        for (i, j) in _nonzero_cells(g):
            S = g.tilde[i][j]
            conj_basis = S.basis.conj()
            Sc = Subspace.from_canonical(conj_basis, S.pivot_rows)
            if not S.contains(Sc):
                bad = {"grid": label, "cell": [i, j]}
    checks.append(_check(
        "conjugate_stability",
        "v in tilde V^{mu nu}_{i,j} iff conj(v) in tilde V^{mu nu}_{i,j}",
        bad is None, bad,
    ))

    # (g) displacement projectors
    try:
        phis, psis = displacement_projectors(system)
    except CrossExpressionMismatch as exc:
        checks.append(_check(
            "displacement_projectors",
            "phi_eta (dd at i+j=D+eta) = phi_eta (uu at i+j=D-eta); "
            "psi analogously",
            False, {"error": str(exc)},
        ))
        return checks
    checks.append(_check(
        "displacement_cross_expressions",
        "phi_eta (dd at i+j=D+eta) = phi_eta (uu at i+j=D-eta); "
        "psi analogously",
        True,
    ))
    ident = Mat.identity(field, n)
    bad = None
    for name, fam in (("phi", phis), ("psi", psis)):
        total = Mat.zeros(field, n, n)
        for P in fam:
            total = total + P
            if P.transpose() != P:
                bad = {"family": name, "kind": "not symmetric"}
            if P.conj() != P:
                bad = {"family": name, "kind": "not real"}
        if total != ident:
            bad = {"family": name, "kind": "partition"}
        for aidx, P in enumerate(fam):
            for bidx, Q in enumerate(fam):
                prod = P @ Q
                want = P if aidx == bidx else None
                if want is None and not prod.is_zero():
                    bad = {"family": name, "kind": "annihilation",
                           "pair": [aidx, bidx]}
                elif want is not None and prod != want:
                    bad = {"family": name, "kind": "idempotent",
                           "index": aidx}
        checks.append(_check(
            f"{name}_family",
            f"{name} projectors are real, symmetric, idempotent, mutually "
            "annihilating, and sum to I",
            bad is None, bad,
        ))
        bad = None
    return checks
