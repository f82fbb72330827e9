"""Decomposition of the standard module into irreducible T-modules.

T is the subalgebra of Mat_X(K) generated by the adjacency matrix A_1
and the dual adjacency matrix A*_1 at the base vertex.  The standard
module V = K^X is an orthogonal direct sum of irreducible T-modules;
each module W carries an endpoint rho, dual endpoint tau, diameter d,
and the two displacements eta = rho + tau + d - D and zeta = rho - tau.

The decomposition peels modules off V: close the first vector of the
lowest nonzero shell of the remainder under A_1 and A*_1, certify the
result irreducible (the commutant of the restricted pair has dimension
one), and recurse on the orthogonal complement.  A summand that fails
the certificate is split by a seeded pseudo-random self-adjoint element
of its commutant — the documented schedule draws coefficients from
``random.Random(_SEED_SCHEDULE[t])`` — whose eigenspaces over the ground
field are extracted exactly; after the budget of draws the remainder is
reported through NotFullySplit with the partial decomposition attached.

Exact mode is intended for n <= 64; float mode (eigenvalue clustering
tolerance 1e-7) scales to n = 512 but its results are float-certified
only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np
import sympy

from .errors import (
    ConfigError,
    NonContiguousSupport,
    NotFullySplit,
    PropertyViolation,
)
from .field import QUADRATIC
from .matrix import Mat, hstack, inverse, kernel
from .scheme import DualData, SchemeData
from .subspace import Subspace

__all__ = [
    "TModule",
    "decompose",
    "module_stats",
    "check_module_cells",
    "displacement_cross_check",
    "verify_tmodule_suite",
    "module_inventory",
    "commutant_dimension",
    "CLUSTER_TOL",
]

_SEED_SCHEDULE = tuple(range(101, 109))  # one seed per draw, 8 draws
CLUSTER_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class TModule:
    """An irreducible T-module: basis plus its numeric invariants."""

    basis: object  # Subspace (exact) or ndarray with orthonormal columns
    rho: int
    tau: int
    d: int
    D: int
    mode: str = "exact"

    def __post_init__(self):
        rho, tau, d, D = self.rho, self.tau, self.d, self.D
        if min(rho, tau, d) < 0:
            raise PropertyViolation("module invariants", "negative rho/tau/d")
        if rho + d > D or tau + d > D:
            raise PropertyViolation("module invariants", "rho+d or tau+d > D")
        if 2 * rho + d < D or 2 * tau + d < D:
            raise PropertyViolation("module invariants", "2rho+d or 2tau+d < D")
        if not 0 <= self.eta <= D:
            raise PropertyViolation("module invariants", "eta outside 0..D")
        if abs(self.zeta) > D:
            raise PropertyViolation("module invariants", "|zeta| > D")

    @property
    def eta(self) -> int:
        return self.rho + self.tau + self.d - self.D

    @property
    def zeta(self) -> int:
        return self.rho - self.tau

    @property
    def dim(self) -> int:
        if isinstance(self.basis, Subspace):
            return self.basis.dim
        return self.basis.shape[1]


def module_inventory(modules):
    """Report table: one {dim, rho, tau, d, eta, zeta} row per module."""
    return [
        {"dim": w.dim, "rho": w.rho, "tau": w.tau, "d": w.d,
         "eta": w.eta, "zeta": w.zeta}
        for w in modules
    ]


# ---------------------------------------------------------------------------
# shared scheme-side helpers
# ---------------------------------------------------------------------------


class _Context:
    """Operators and shell data shared by one decomposition run."""

    def __init__(self, scheme: SchemeData, dual: DualData):
        self.scheme = scheme
        self.dual = dual
        self.field = scheme.field
        self.n = scheme.n
        self.D = scheme.D
        self.shells = scheme.dd.dist[dual.x]
        self.A1 = Mat.from_int_array(self.field, scheme.dd.A[1])
        self.As1 = dual.astar(1)
        sig = scheme.ordering
        self._E = [scheme.idempotent(sig[t]) for t in range(self.D + 1)]

    def E(self, pos: int) -> Mat:
        """Primitive idempotent at Q-polynomial position pos."""
        return self._E[pos]


def _shell_rows(ctx: _Context, i: int):
    return [int(v) for v in np.flatnonzero(ctx.shells == i)]


def _estar_image(ctx: _Context, S: Subspace, i: int) -> Subspace:
    """E*_i S: keep the shell-i rows of the basis, zero the rest."""
    keep = set(_shell_rows(ctx, i))
    B = S.basis
    zero = ctx.field.zero
    entries = []
    for r in range(B.rows):
        row = B.row(r)
        if r in keep:
            entries.extend(row)
        else:
            entries.extend([zero] * B.cols)
    return Subspace.from_spanning(Mat(ctx.field, B.rows, B.cols, entries))


def _closure(ctx: _Context, v: Mat) -> Subspace:
    """T-closure of the columns of v under A_1 and A*_1."""
    S = Subspace.from_spanning(v)
    while True:
        B = S.basis
        S2 = Subspace.from_spanning(hstack([B, ctx.A1 @ B, ctx.As1 @ B]))
        if S2.dim == S.dim:
            return S2
        S = S2


def _restrict(op: Mat, S: Subspace) -> Mat:
    """Matrix of op on the invariant subspace S in its canonical basis."""
    img = op @ S.basis
    M = img.take_rows(S.pivot_rows)
    if S.basis @ M != img:
        raise PropertyViolation("invariance", "subspace not op-invariant")
    return M


def _commutant_basis(field, ops):
    """Basis of {M : M X = X M for all X in ops} as a list of d x d Mats."""
    d = ops[0].rows
    rows = []
    for X in ops:
        for i in range(d):
            for j in range(d):
                coeff = [field.zero] * (d * d)
                for k in range(d):
                    # (M X - X M)[i, j]: + M[i,k] X[k,j]  - X[i,k] M[k,j]
                    coeff[i * d + k] = coeff[i * d + k] + X[k, j]
                    coeff[k * d + j] = coeff[k * d + j] - X[i, k]
                rows.extend(coeff)
    K = kernel(Mat(field, len(ops) * d * d, d * d, rows))
    out = []
    for c in range(K.cols):
        out.append(Mat(field, d, d, list(K.col(c))))
    return out


def commutant_dimension(scheme: SchemeData, dual: DualData) -> int:
    """dim of {M : M A_1 = A_1 M, M A*_1 = A*_1 M} over the ground field,
    solved as one linear system (oracle; intended for small n)."""
    ctx = _Context(scheme, dual)
    return len(_commutant_basis(ctx.field, [ctx.A1, ctx.As1]))


# ---------------------------------------------------------------------------
# exact eigensplitting of a commutant element
# ---------------------------------------------------------------------------


def _annihilator(field, z: Mat, v: Mat):
    """Monic minimal polynomial of z at the vector v, lowest degree."""
    cols = [v]
    for k in range(1, z.rows + 2):
        cols.append(z @ cols[-1])
        K = kernel(hstack(cols))
        if K.cols:
            w = K.col(0)
            inv = w[k].inverse()
            return [w[t] * inv for t in range(k + 1)]
    raise PropertyViolation("annihilator", "no dependence found")


def _poly_mul(field, p, q):
    out = [field.zero] * (len(p) + len(q) - 1)
    for a, pa in enumerate(p):
        for b, qb in enumerate(q):
            out[a + b] = out[a + b] + pa * qb
    return out


def _field_roots(field, poly):
    """All roots in the ground field of a monic polynomial over it.

    The norm of the polynomial (times its sigma-conjugate in quadratic
    mode) has rational coefficients; factor it over the rationals and
    keep the linear roots plus the roots of quadratic factors whose
    discriminant is b times a rational square.
    """
    if field.mode == QUADRATIC:
        conj = [c.sigma() for c in poly]
        norm = _poly_mul(field, poly, conj)
    else:
        norm = poly
    x = sympy.Symbol("x")
    expr = sympy.Integer(0)
    for k, c in enumerate(norm):
        if c.a1 != 0:
            raise PropertyViolation("field roots", "norm not rational")
        expr += sympy.Rational(c.a0.numerator, c.a0.denominator) * x**k
    roots = []
    for fac, _mult in sympy.Poly(expr, x).factor_list()[1]:
        fac = fac.monic()
        if fac.degree() == 1:
            r = -fac.nth(0)
            roots.append(field.scalar(sympy.Rational(r)))
        elif fac.degree() == 2 and field.mode == QUADRATIC:
            p = sympy.Rational(fac.nth(1))
            u = sympy.Rational(fac.nth(0))
            disc = p * p - 4 * u
            t2 = sympy.Rational(disc, field.b)
            if t2 >= 0 and sympy.sqrt(t2).is_rational:
                t = sympy.sqrt(t2)
                half = field.scalar(sympy.Rational(1, 2))
                mp = field.scalar(-p)
                tq = field.scalar(0, sympy.Rational(t))
                roots.append((mp + tq) * half)
                roots.append((mp - tq) * half)
    uniq = []
    for r in roots:
        if not any(r == s for s in uniq):
            uniq.append(r)
    return uniq


def _split_by_element(field, z: Mat, seed: int):
    """Exact eigenspaces of z over the ground field: a list of coordinate
    kernel matrices of z - lambda, one per field eigenvalue lambda found.
    They need not exhaust the space (the caller handles the leftover)."""
    d = z.rows
    rng = random.Random(seed)
    v = Mat.col_vector(field, [rng.randint(-9, 9) for _ in range(d)])
    if v.is_zero():
        v = Mat.col_vector(field, [1] * d)
    ann = _annihilator(field, z, v)
    pieces = []
    for lam in _field_roots(field, ann):
        shifted = z - Mat.identity(field, d) * lam
        K = kernel(shifted)
        if K.cols:
            pieces.append(K)
    return pieces


# ---------------------------------------------------------------------------
# exact decomposition
# ---------------------------------------------------------------------------


def _irreducible_exact(ctx: _Context, W: Subspace) -> bool:
    A1w = _restrict(ctx.A1, W)
    As1w = _restrict(ctx.As1, W)
    return len(_commutant_basis(ctx.field, [A1w, As1w])) == 1


def _lowest_shell_vector(ctx: _Context, S: Subspace, which: int = 0):
    for i in range(ctx.D + 1):
        L = _estar_image(ctx, S, i)
        if L.dim:
            return L.basis.take_cols([min(which, L.dim - 1)])
    raise PropertyViolation("peel", "nonzero module with empty shell support")


def _ensure_irreducible_exact(ctx: _Context, W: Subspace, sink, budget: int):
    """Append irreducible summands of W to sink, splitting as needed."""
    if W.dim == 0:
        return
    if W.dim == 1 or _irreducible_exact(ctx, W):
        sink.append(W)
        return
    A1w = _restrict(ctx.A1, W)
    As1w = _restrict(ctx.As1, W)
    cbasis = _commutant_basis(ctx.field, [A1w, As1w])
    # adjoint with respect to the ambient form: the canonical basis is not
    # orthonormal, so conjugate-transposition goes through the Gram matrix
    gram = W.basis.conj_transpose() @ W.basis
    gram_inv = inverse(gram)
    half = ctx.field.scalar(sympy.Rational(1, 2))
    for t in range(budget):
        seed = _SEED_SCHEDULE[t % len(_SEED_SCHEDULE)]
        rng = random.Random(seed + 13 * t)
        z = Mat.zeros(ctx.field, W.dim, W.dim)
        for B in cbasis:
            z = z + B * ctx.field.scalar(rng.randint(-9, 9))
        z = (z + gram_inv @ z.conj_transpose() @ gram) * half
        pieces = _split_by_element(ctx.field, z, seed)
        if not pieces:
            continue
        parts = [Subspace.from_spanning(W.basis @ K) for K in pieces]
        covered = parts[0]
        for p in parts[1:]:
            covered = covered.add(p)
        if covered.dim != sum(p.dim for p in parts):
            continue  # eigenspaces not independent: bad draw
        if covered.dim < W.dim:
            # the leftover (in the ambient form) is again a T-module
            parts.append(covered.orth_complement_within(W))
        if len(parts) <= 1:
            continue
        for part in parts:
            _ensure_irreducible_exact(ctx, part, sink, budget)
        return
    # draw budget exhausted: try closures of other lowest-shell vectors
    for i in range(ctx.D + 1):
        L = _estar_image(ctx, W, i)
        for which in range(L.dim):
            sub = _closure(ctx, L.basis.take_cols([which]))
            if 0 < sub.dim < W.dim:
                rest = sub.orth_complement_within(W)
                _ensure_irreducible_exact(ctx, sub, sink, budget)
                _ensure_irreducible_exact(ctx, rest, sink, budget)
                return
        if L.dim:
            break
    raise NotFullySplit(
        f"cannot split a reducible {W.dim}-dimensional summand over the "
        "ground field",
        partial=sink,
    )


def _decompose_exact(scheme, dual, budget):
    ctx = _Context(scheme, dual)
    raw = []
    R = Subspace.full(ctx.field, ctx.n)
    while R.dim:
        v = _lowest_shell_vector(ctx, R)
        W = _closure(ctx, v)
        _ensure_irreducible_exact(ctx, W, raw, budget)
        covered = raw[0]
        for S in raw[1:]:
            covered = covered.add(S)
        R = covered.orth_complement_within(Subspace.full(ctx.field, ctx.n))
    modules = [
        TModule(W, *module_stats(scheme, dual, W), D=ctx.D, mode="exact")
        for W in raw
    ]
    modules.sort(key=lambda w: (w.rho, w.tau, w.d, w.dim))
    return modules


# ---------------------------------------------------------------------------
# float decomposition
# ---------------------------------------------------------------------------


def _float_ops(ctx: _Context):
    A1 = ctx.scheme.dd.A[1].astype(np.complex128)
    theta_star = [s.to_complex() for s in ctx.dual.theta_star]
    As1 = np.diag([theta_star[int(i)] for i in ctx.shells])
    return A1, As1


def _orth(B, tol):
    from .floatlin import orth_basis

    return orth_basis(B, tol)


def _closure_float(A1, As1, v, tol):
    S = _orth(v, tol)
    while True:
        S2 = _orth(np.hstack([S, A1 @ S, As1 @ S]), tol)
        if S2.shape[1] == S.shape[1]:
            return S2
        S = S2


def _commutant_basis_float(ops, tol):
    d = ops[0].shape[0]
    rows = []
    for X in ops:
        eye = np.eye(d)
        rows.append(np.kron(eye, X.T) - np.kron(X, eye))
    from .floatlin import kernel_basis

    return kernel_basis(np.vstack(rows), tol)


def _ensure_irreducible_float(ctx, A1, As1, W, sink, budget, tol):
    d = W.shape[1]
    if d == 0:
        return
    A1w = W.conj().T @ A1 @ W
    As1w = W.conj().T @ As1 @ W
    cb = _commutant_basis_float([A1w, As1w], tol)
    if d == 1 or cb.shape[1] == 1:
        sink.append(W)
        return
    for t in range(budget):
        rng = random.Random(_SEED_SCHEDULE[t % len(_SEED_SCHEDULE)] + 13 * t)
        coeffs = [rng.randint(-9, 9) for _ in range(cb.shape[1])]
        z = sum(c * cb[:, k].reshape(d, d) for k, c in enumerate(coeffs))
        z = (z + z.conj().T) / 2
        vals, vecs = np.linalg.eigh(z)
        groups = []
        start = 0
        for k in range(1, d + 1):
            if k == d or vals[k] - vals[start] > CLUSTER_TOL * max(
                1.0, abs(vals[-1]), abs(vals[0])
            ):
                groups.append(range(start, k))
                start = k
        if len(groups) <= 1:
            continue
        for g in groups:
            _ensure_irreducible_float(
                ctx, A1, As1, W @ vecs[:, list(g)], sink, budget, tol
            )
        return
    raise NotFullySplit(
        f"cannot split a reducible {d}-dimensional summand (float mode)",
        partial=sink,
    )


def _decompose_float(scheme, dual, budget, tol):
    ctx = _Context.__new__(_Context)
    ctx.scheme, ctx.dual = scheme, dual
    ctx.field, ctx.n, ctx.D = scheme.field, scheme.n, scheme.D
    ctx.shells = scheme.dd.dist[dual.x]
    A1, As1 = _float_ops(ctx)
    n = ctx.n
    raw = []
    basis_R = np.eye(n, dtype=np.complex128)
    while basis_R.shape[1]:
        # first vector of the lowest nonzero shell of the remainder
        picked = None
        for i in range(ctx.D + 1):
            mask = np.zeros(n)
            mask[ctx.shells == i] = 1.0
            L = basis_R * mask[:, None]
            # absolute gate: basis_R is orthonormal, so a genuine shell
            # component has entries far above tol while a noise slice
            # would still look full-rank to a relative cutoff
            if np.abs(L).max() <= 100 * tol:
                continue
            L = _orth(L, tol)
            if L.shape[1]:
                picked = L[:, :1]
                break
        if picked is None:
            raise PropertyViolation("peel", "remainder with no shell support")
        W = _closure_float(A1, As1, picked, tol)
        _ensure_irreducible_float(ctx, A1, As1, W, raw, budget, tol)
        done = np.hstack(raw)
        proj = basis_R - done @ (done.conj().T @ basis_R)
        if np.abs(proj).max() <= 100 * tol:
            break
        basis_R = _orth(proj, tol)
    modules = []
    for W in raw:
        stats = _module_stats_float(scheme, dual, W, tol)
        modules.append(TModule(W, *stats, D=ctx.D, mode="float"))
    modules.sort(key=lambda w: (w.rho, w.tau, w.d, w.dim))
    return modules


# ---------------------------------------------------------------------------
# statistics and contract checks
# ---------------------------------------------------------------------------


def _interval_from_support(support, what):
    lo, hi = min(support), max(support)
    if sorted(support) != list(range(lo, hi + 1)):
        raise NonContiguousSupport(f"{what} support {sorted(support)}")
    return lo, hi


def module_stats(scheme: SchemeData, dual: DualData, W) -> tuple:
    """(rho, tau, d) of a module given as a Subspace, verifying that both
    supports are intervals and that diameter equals dual diameter."""
    ctx = _Context(scheme, dual)
    est_support = [
        i for i in range(ctx.D + 1) if _estar_image(ctx, W, i).dim
    ]
    if not est_support:
        raise NonContiguousSupport("empty E* support")
    rho, hi = _interval_from_support(est_support, "E*")
    d = hi - rho
    e_support = [
        t for t in range(ctx.D + 1) if not (ctx.E(t) @ W.basis).is_zero()
    ]
    if not e_support:
        raise NonContiguousSupport("empty E support")
    tau, ehi = _interval_from_support(e_support, "E")
    if ehi - tau != d:
        raise NonContiguousSupport(
            f"diameter {d} != dual diameter {ehi - tau}"
        )
    return rho, tau, d


def _module_stats_float(scheme, dual, W, tol) -> tuple:
    ctx = _Context.__new__(_Context)
    ctx.scheme, ctx.dual = scheme, dual
    ctx.field, ctx.n, ctx.D = scheme.field, scheme.n, scheme.D
    ctx.shells = scheme.dd.dist[dual.x]
    sig = scheme.ordering
    scale = max(1.0, float(np.abs(W).max()))
    est = []
    for i in range(ctx.D + 1):
        mask = (ctx.shells == i).astype(float)
        if np.abs(W * mask[:, None]).max() > tol * scale:
            est.append(i)
    rho, hi = _interval_from_support(est, "E*")
    gam = scheme.gamma
    esup = []
    for t in range(ctx.D + 1):
        vals = [gam[sig[t]][h].to_complex() for h in range(ctx.D + 1)]
        EW = np.zeros_like(W)
        for h in range(ctx.D + 1):
            EW += vals[h] * (scheme.dd.A[h].astype(float) @ W)
        if np.abs(EW).max() > tol * scale:
            esup.append(t)
    tau, ehi = _interval_from_support(esup, "E")
    if ehi - tau != hi - rho:
        raise NonContiguousSupport(
            f"diameter {hi - rho} != dual diameter {ehi - tau}"
        )
    return rho, tau, hi - rho


def decompose(scheme: SchemeData, dual: DualData, backend: str = "exact",
              budget: int = 8, tol: float = 1e-8):
    """Split the standard module into irreducible T-modules.

    Returns TModule objects, pairwise orthogonal with dimensions summing
    to n, sorted by (rho, tau, d, dim).  Raises NotFullySplit (with the
    partial decomposition attached) if the seeded draw schedule cannot
    finish within the budget.
    """
    if backend == "exact":
        return _decompose_exact(scheme, dual, budget)
    if backend == "f64":
        return _decompose_float(scheme, dual, budget, tol)
    raise ConfigError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------------------
# W-cells and report checks
# ---------------------------------------------------------------------------


def _entry(name, anchor, ok, witness=None):
    e = {
        "name": name,
        "paper_anchor": anchor,
        "status": "pass" if ok else "fail",
        "max_residual": "0" if ok else None,
    }
    if witness is not None:
        e["witness"] = witness
    return e


def _wcells_exact(ctx: _Context, w: TModule, mu: str, nu: str):
    """W^{mu nu}_h for h = 0..d, by partial-sum intersections inside W."""
    W: Subspace = w.basis
    rho, tau, d = w.rho, w.tau, w.d
    est = [_estar_image(ctx, W, rho + a) for a in range(d + 1)]
    ev = [Subspace.from_spanning(ctx.E(tau + b) @ W.basis) for b in range(d + 1)]

    def prefix(parts, lo, hi):
        acc = parts[lo]
        for k in range(lo + 1, hi + 1):
            acc = acc.add(parts[k])
        return acc

    cells = []
    for h in range(d + 1):
        left = prefix(est, 0, h) if mu == "d" else prefix(est, d - h, d)
        right = prefix(ev, 0, d - h) if nu == "d" else prefix(ev, h, d)
        cells.append(left.intersect(right))
    return cells


def _predicted_cell(w: TModule, mu: str, nu: str, h: int):
    D = w.D
    i = w.rho + h if mu == "d" else D - w.rho - w.d + h
    j = w.tau + w.d - h if nu == "d" else D - w.tau - h
    return i, j


def check_module_cells(scheme, dual, w: TModule, system, tag: str = "") -> list:
    """Verify the four W-cell families of one module against the split
    system: direct sum, and the containment biconditional per cell.

    ``tag`` (e.g. ``"_m2"``) disambiguates check names when the suite
    runs over every module of a decomposition."""
    ctx = _Context(scheme, dual)
    checks = []
    for mu in ("d", "u"):
        for nu in ("d", "u"):
            label = mu + nu
            cells = _wcells_exact(ctx, w, mu, nu)
            total = sum(c.dim for c in cells)
            direct = cells[0]
            for c in cells[1:]:
                direct = direct.add(c)
            ok = (
                total == w.dim
                and direct.dim == w.dim
                and direct == w.basis
                and all(c.dim > 0 for c in cells)
            )
            checks.append(_entry(
                f"wcells_direct_sum_{label}{tag}",
                "W = sum_h W^{mu nu}_h (direct sum), every cell nonzero",
                ok,
                None if ok else {
                    "module": module_inventory([w])[0], "grid": label,
                    "cell_dims": [c.dim for c in cells],
                },
            ))
            bad = None
            grid = system.grid(label)
            for h, cell in enumerate(cells):
                want = _predicted_cell(w, mu, nu, h)
                for i in range(w.D + 1):
                    for j in range(w.D + 1):
                        tilde = grid.tilde[i][j]
                        inside = tilde.dim and tilde.contains(cell)
                        if ((i, j) == want) != bool(inside):
                            bad = {"grid": label, "h": h, "cell": [i, j],
                                   "predicted": list(want)}
            checks.append(_entry(
                f"wcells_containment_{label}{tag}",
                "W^{mu nu}_h lies in the tilde cell the endpoint data "
                "predicts, and in no other",
                bad is None, bad,
            ))
    return checks


def displacement_cross_check(modules, system) -> list:
    """rank phi_eta = sum of dims of modules with displacement eta, and
    the psi_zeta analogue; ranks read off exactly as projector traces."""
    D = system.D
    checks = []
    for name, rng_, key, proj in (
        ("phi", range(D + 1), "eta", system.phi),
        ("psi", range(-D, D + 1), "zeta", system.psi),
    ):
        got = {k: int(proj(k).trace().a0) for k in rng_}
        want = {k: 0 for k in rng_}
        for w in modules:
            want[getattr(w, key)] += w.dim
        ok = got == want
        checks.append(_entry(
            f"rank_{name}_vs_displacement",
            f"rank {name}_k = total dimension of modules with "
            f"{key} = k, for every k",
            ok, None if ok else {"got": got, "want": want},
        ))
    return checks


def verify_tmodule_suite(scheme, dual, system, modules) -> list:
    """All module-level checks: orthogonal decomposition, invariance,
    closure certificates, W-cells, displacement action and rank sums."""
    ctx = _Context(scheme, dual)
    n = ctx.n
    checks = []

    total = sum(w.dim for w in modules)
    bad = None if total == n else {"total": total, "n": n}
    if bad is None:
        for a in range(len(modules)):
            for b in range(a + 1, len(modules)):
                if not modules[a].basis.is_orthogonal_to(modules[b].basis):
                    bad = {"pair": [a, b]}
    checks.append(_entry(
        "orthogonal_decomposition",
        "V is an orthogonal direct sum of the returned modules",
        bad is None, bad,
    ))

    bad = None
    for k, w in enumerate(modules):
        B = w.basis.basis
        for op in (ctx.A1, ctx.As1):
            if not w.basis.contains(Subspace.from_spanning(op @ B)):
                bad = {"module": k}
    checks.append(_entry(
        "invariance",
        "A_1 W <= W and A*_1 W <= W for every module",
        bad is None, bad,
    ))

    bad = None
    for k, w in enumerate(modules):
        for i in range(ctx.D + 1):
            L = _estar_image(ctx, w.basis, i)
            for which in range(L.dim):
                cl = _closure(ctx, L.basis.take_cols([which]))
                if cl != w.basis:
                    bad = {"module": k, "shell": i}
    checks.append(_entry(
        "irreducibility_closure",
        "the T-closure of any single vector of each nonzero E*_i W "
        "equals W",
        bad is None, bad,
    ))

    for k, w in enumerate(modules):
        checks.extend(check_module_cells(scheme, dual, w, system,
                                         tag=f"_m{k}"))

    bad = None
    for k, w in enumerate(modules):
        B = w.basis.basis
        for eta in range(ctx.D + 1):
            img = system.phi(eta) @ B
            want = B if eta == w.eta else None
            if want is None and not img.is_zero():
                bad = {"module": k, "eta": eta}
            if want is not None and img != want:
                bad = {"module": k, "eta": eta}
        for zeta in range(-ctx.D, ctx.D + 1):
            img = system.psi(zeta) @ B
            want = B if zeta == w.zeta else None
            if want is None and not img.is_zero():
                bad = {"module": k, "zeta": zeta}
            if want is not None and img != want:
                bad = {"module": k, "zeta": zeta}
    checks.append(_entry(
        "displacement_action",
        "phi_eta acts as the identity on a module with displacement eta "
        "and annihilates the others; psi_zeta likewise",
        bad is None, bad,
    ))

    checks.extend(displacement_cross_check(modules, system))
    return checks
