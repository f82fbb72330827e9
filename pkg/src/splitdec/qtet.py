"""Classical parameters with alpha = b - 1 and the q-tetrahedron action.

A distance-regular graph has *classical parameters* ``(D, b, alpha, beta)``
with ``alpha = b - 1`` when its intersection numbers satisfy

    c_i = b^(i-1) (b^i - 1)/(b - 1),
    b_i = (beta + 1 - b^i) (b^D - b^i)/(b - 1),

with ``b`` an integer, ``b`` not in ``{0, 1, -1}``.  Such a graph is
formally self-dual and its eigenvalues and dual eigenvalues share the
shape ``theta_i = theta*_i = alpha0 + alpha1 q^(D-2i)`` where ``q^2 = b``.

This module

* detects those parameters from an intersection array alone
  (:func:`detect_classical`),
* builds the eight matrices ``A, A*, B, B*, K, K*, Phi, Psi`` attached
  to the split decomposition (:func:`build_AAstar`, :func:`build_six`,
  :func:`build_qtet_system`),
* realizes the eight q-tetrahedron generators ``x_ij`` as factor chains
  (:func:`build_generators`), and
* verifies the defining relations, transpose table, and conjugation
  behaviour (:func:`verify_qtet_suite` and the ``check_*`` functions).

Verification runs in a hybrid mode: identities that cost only O(n^2)
exact operations (transposes, conjugation, diagonal commutation) are
checked exactly and in full; identities that would cost dense n^3 exact
products (inverse formulas, centrality with A_1, the q-tetrahedron
relations) are checked by a float full-basis sweep *plus* exact probes
on seeded integer vectors, batched as one block.  The cell-action table
is validated exactly, one matrix product per matrix, when the system is
built.

The ``twist`` argument selects the other square root ``q' = -q`` while
keeping every scalar expressed over the original ground field: a weight
``q^e`` becomes ``(-1)^e q^e``.  Primed systems (written ``S'``) are
built this way, so ``conj(S) = S'`` and parity laws like
``A' = (-1)^D A`` are exact entrywise comparisons.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .errors import (
    AlphaFitFailure,
    AmbiguousClassical,
    BEqualsOne,
    ConfigError,
    NotClassical,
    SingularFactor,
    SpectralMismatch,
    TableViolation,
)
from .field import GroundField, Scalar
from .matrix import Mat, hstack
from .scheme import DualData, SchemeData, eigenvalues_A1

GENERATOR_NAMES = ("x01", "x12", "x23", "x30", "x02", "x20", "x13", "x31")

MATRIX_NAMES = ("A", "Astar", "B", "Bstar", "K", "Kstar", "Phi", "Psi")

#: grid label and exponent of q on tilde cell (i, j), for each of the six
#: matrices defined cell-by-cell (A and A* are defined spectrally instead).
SIX_DEFS = {
    "B": ("du", lambda i, j, D: i - j),
    "Bstar": ("ud", lambda i, j, D: j - i),
    "K": ("dd", lambda i, j, D: i - j),
    "Kstar": ("uu", lambda i, j, D: i - j),
    "Phi": ("dd", lambda i, j, D: i + j - D),
    "Psi": ("du", lambda i, j, D: i + j - D),
}

#: closed-form inverses: same recipe on the transpose-dual grid.
INVERSE_DEFS = {
    "K": ("dd", lambda i, j, D: j - i),
    "Kstar": ("uu", lambda i, j, D: j - i),
    "Phi": ("uu", lambda i, j, D: i + j - D),
    "Psi": ("ud", lambda i, j, D: i + j - D),
}


# ---------------------------------------------------------------------------
# classical-parameter detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClassicalParams:
    """Detected classical parameters (D, b, alpha, beta) with alpha = b - 1.

    ``theta`` is the eigenvalue sequence in Q-polynomial position order,
    satisfying ``theta[i] = alpha0 + alpha1 q^(D-2i)``.  ``candidates``
    records every integer root of ``x^2 + x - c_2`` that was considered,
    with the acceptance decision and, for rejected roots, the reason.
    """

    D: int
    b: int
    beta: Fraction
    field: GroundField
    alpha0: Scalar
    alpha1: Scalar
    theta: tuple
    candidates: tuple

    @property
    def alpha(self) -> int:
        return self.b - 1

    def describe(self) -> dict:
        return {
            "D": self.D,
            "b": self.b,
            "alpha": self.alpha,
            "beta": str(self.beta),
            "alpha0": self.alpha0.encode(),
            "alpha1": self.alpha1.encode(),
            "qsign": self.field.qsign,
            "candidates": [dict(c) for c in self.candidates],
        }


def _candidate_roots(c2: int):
    """Integer roots of x^2 + x - c2 = 0, in ascending order."""
    disc = 1 + 4 * c2
    s = isqrt(disc)
    if s * s != disc or s % 2 == 0:
        return []
    return sorted({(-1 - s) // 2, (-1 + s) // 2})


def _b_equals_one_matches(c, bs, D) -> bool:
    """Whether the array matches the b -> 1 limit c_i = i, b_i = beta(D-i)."""
    if any(c[i] != i for i in range(D + 1)):
        return False
    beta = Fraction(bs[0], D)
    return all(Fraction(bs[i]) == beta * (D - i) for i in range(D + 1))


def _closed_form_reason(cand: int, beta: Fraction, c, bs, D: int):
    """None when the whole array matches the closed forms, else the reason."""
    for i in range(D + 1):
        want = Fraction(cand) ** (i - 1) * Fraction(cand**i - 1, cand - 1)
        if Fraction(c[i]) != want:
            return f"c_{i} = {c[i]} but the closed form gives {want}"
    for i in range(D + 1):
        want = (beta + 1 - cand**i) * Fraction(cand**D - cand**i, cand - 1)
        if Fraction(bs[i]) != want:
            return f"b_{i} = {bs[i]} but the closed form gives {want}"
    return None


def _fit_alpha(field: GroundField, theta_multiset, D: int):
    """Solve theta_i = alpha0 + alpha1 q^(D-2i) from the eigenvalue multiset.

    theta_0 is pinned to the valency (the largest eigenvalue); every other
    eigenvalue is tried as theta_1, and a candidate pair (alpha0, alpha1)
    is kept when the predicted sequence reproduces the multiset.  Exactly
    one pair must survive.
    """
    k = theta_multiset[0]
    denom = field.qpow(D) - field.qpow(D - 2)
    want = sorted(s.encode() for s in theta_multiset)
    fits = []
    for t in theta_multiset[1:]:
        a1 = (k - t) / denom
        a0 = k - a1 * field.qpow(D)
        pred = [a0 + a1 * field.qpow(D - 2 * i) for i in range(D + 1)]
        if sorted(s.encode() for s in pred) == want:
            key = (a0.encode(), a1.encode())
            if all(key != f[0] for f in fits):
                fits.append((key, a0, a1, tuple(pred)))
    if not fits:
        raise AlphaFitFailure(
            "no ordering of the eigenvalues fits the shape "
            "alpha0 + alpha1 q^(D-2i)"
        )
    if len(fits) > 1:
        raise AlphaFitFailure(
            "ambiguous eigenvalue shape: "
            + " vs ".join(f"alpha0={f[1]}, alpha1={f[2]}" for f in fits)
        )
    _, a0, a1, pred = fits[0]
    return a0, a1, pred


def detect_classical(inter, qsign: int = 1) -> ClassicalParams:
    """Detect classical parameters (D, b, b-1, beta) from an intersection array.

    Tries both integer roots of ``x^2 + x - c_2``; a root is accepted only
    when every ``c_i`` and ``b_i`` matches its closed form and ``b`` is not
    in ``{0, 1, -1}``.  Raises:

    * :class:`BEqualsOne` when the array is classical but only with b = 1;
    * :class:`AmbiguousClassical` when two roots survive;
    * :class:`NotClassical` when no root survives;
    * :class:`AlphaFitFailure` when the eigenvalues do not fit the shape
      ``alpha0 + alpha1 q^(D-2i)``.
    """
    c = [int(v) for v in inter.c]
    bs = [int(v) for v in inter.b_seq]
    D = len(c) - 1
    if D < 3:
        raise NotClassical(f"diameter {D} is below 3")
    if c[1] != 1:
        raise NotClassical(f"c_1 = {c[1]} differs from 1")
    records = []
    survivors = []
    b_one_matches = False
    for cand in _candidate_roots(c[2]):
        rec = {"b": cand, "accepted": False}
        if cand in (0, -1):
            rec["reason"] = f"b = {cand} is excluded"
        elif cand == 1:
            if _b_equals_one_matches(c, bs, D):
                b_one_matches = True
                rec["reason"] = "b = 1 is excluded (array matches the b = 1 forms)"
            else:
                rec["reason"] = "b = 1 is excluded"
        else:
            beta = Fraction(bs[0] * (cand - 1), cand**D - 1)
            reason = _closed_form_reason(cand, beta, c, bs, D)
            if reason is None:
                rec["accepted"] = True
                rec["beta"] = str(beta)
                survivors.append((cand, beta))
            else:
                rec["reason"] = reason
        records.append(rec)
    if len(survivors) > 1:
        raise AmbiguousClassical(
            "two parameter sets match: "
            + " and ".join(
                f"(D, b, alpha, beta) = ({D}, {b}, {b - 1}, {beta})"
                for b, beta in survivors
            )
        )
    if not survivors:
        if b_one_matches:
            raise BEqualsOne(
                "the array is classical only with b = 1, which is excluded",
                candidates=records,
            )
        detail = "; ".join(
            f"b = {r['b']}: {r['reason']}" for r in records
        ) or "x^2 + x - c_2 has no integer roots"
        raise NotClassical(
            f"no classical parameters with alpha = b - 1 ({detail})",
            candidates=records,
        )
    b, beta = survivors[0]
    field = GroundField(b, qsign)
    theta = eigenvalues_A1(inter, field)
    alpha0, alpha1, pred = _fit_alpha(field, theta, D)
    return ClassicalParams(
        D=D,
        b=b,
        beta=beta,
        field=field,
        alpha0=alpha0,
        alpha1=alpha1,
        theta=tuple(pred),
        candidates=tuple(records),
    )


# ---------------------------------------------------------------------------
# the eight matrices
# ---------------------------------------------------------------------------


def _qpow(field: GroundField, e: int, twist: int = 1) -> Scalar:
    """q^e, or (q')^e = (-1)^e q^e when twist is -1."""
    s = field.qpow(e)
    if twist == -1 and e % 2:
        s = -s
    return s


def _alpha1_twisted(params: ClassicalParams, twist: int) -> Scalar:
    """alpha1 for the primed system: theta_i = alpha0 + alpha1' (q')^(D-2i)."""
    if twist == 1 or params.D % 2 == 0:
        return params.alpha1
    return -params.alpha1


def _from_distance_values(field: GroundField, dist, vals) -> Mat:
    """The Bose-Mesner element sum_d vals[d] A_d, as a dense matrix."""
    n = len(dist)
    return Mat(field, n, n, [vals[int(d)] for d in dist.flat])


def _spectral_failures(params: ClassicalParams, scheme: SchemeData,
                       dual: DualData, twist: int = 1):
    """Exact residuals of A = sum q^(D-2i) E_i and A* = sum q^(D-2i) E*_i.

    Both identities are verified coefficient-wise: for A in the basis of
    distance matrices A_d (the A_d are linearly independent, so equality of
    coefficients is equality of matrices), for A* on the diagonal values
    per sphere.  Returns (failures_A, failures_Astar) as lists of strings.
    """
    field = params.field
    D = params.D
    a0 = params.alpha0
    a1t = _alpha1_twisted(params, twist)
    fail_a = []
    for d in range(D + 1):
        want = field.zero
        for t in range(D + 1):
            want = want + _qpow(field, D - 2 * t, twist) * scheme.gamma[scheme.ordering[t]][d]
        direct = -a0 / a1t if d == 0 else (field.one / a1t if d == 1 else field.zero)
        if want != direct:
            fail_a.append(
                f"coefficient on A_{d}: (A_1 - alpha0 I)/alpha1 gives "
                f"{direct} but the idempotent sum gives {want}"
            )
    fail_astar = []
    asv = dual.astar_value[1]
    for d in range(D + 1):
        direct = (asv[d] - a0) / a1t
        want = _qpow(field, D - 2 * d, twist)
        if direct != want:
            fail_astar.append(
                f"diagonal on sphere {d}: (A*_1 - alpha0 I)/alpha1 gives "
                f"{direct} but the shape requires {want}"
            )
    return fail_a, fail_astar


def build_AAstar(params: ClassicalParams, scheme: SchemeData, dual: DualData,
                 twist: int = 1):
    """A = (A_1 - alpha0 I)/alpha1 and A* = (A*_1 - alpha0 I)/alpha1.

    Verifies exactly that A equals the spectral sum over the idempotents
    and that A* has diagonal value q^(D-2d) on the sphere at distance d;
    raises :class:`SpectralMismatch` otherwise.
    """
    field = params.field
    D = params.D
    fail_a, fail_astar = _spectral_failures(params, scheme, dual, twist)
    if fail_a:
        raise SpectralMismatch("A != sum_i q^(D-2i) E_i: " + fail_a[0])
    if fail_astar:
        raise SpectralMismatch("A* != sum_i q^(D-2i) E*_i: " + fail_astar[0])
    a0 = params.alpha0
    a1t = _alpha1_twisted(params, twist)
    vals = [-a0 / a1t if d == 0 else (field.one / a1t if d == 1 else field.zero)
            for d in range(D + 1)]
    A = _from_distance_values(field, scheme.dd.dist, vals)
    svals = [_qpow(field, D - 2 * d, twist) for d in range(D + 1)]
    n = scheme.n
    row = scheme.dd.dist[dual.x]
    e = [field.zero] * (n * n)
    for y in range(n):
        e[y * n + y] = svals[int(row[y])]
    Astar = Mat(field, n, n, e)
    return A, Astar


def build_six(params: ClassicalParams, split, twist: int = 1,
              validate: bool = True) -> dict:
    """The six matrices B, B*, K, K*, Phi, Psi from the split grids.

    Each is the weighted sum of its grid's cell projectors with weight a
    power of q.  When ``validate`` is set, the defining cell-action table
    is re-verified exactly — for each matrix M with law q^e(i,j), the
    product of M with the tilde basis of every cell of its grid must
    equal the basis scaled by q^e(i,j) — raising :class:`TableViolation`
    on any mismatch.
    """
    field = params.field
    D = params.D
    six = {}
    for name, (label, expo) in SIX_DEFS.items():
        grid = split.grid(label)
        six[name] = grid.weighted_sum(
            lambda i, j, _e=expo: _qpow(field, _e(i, j, D), twist)
        )
    if validate:
        for name, (label, expo) in SIX_DEFS.items():
            _validate_table_exact(six[name], name, split.grid(label), label,
                                  field, D, expo, twist)
    return six


def _validate_table_exact(M: Mat, name: str, grid, label: str,
                          field: GroundField, D: int, expo, twist: int):
    """Check (M - q^e I) kills every tilde cell of the grid, exactly."""
    P = M @ grid.C
    for i in range(D + 1):
        for j in range(D + 1):
            blk = grid.blocks[i][j]
            if not len(blk):
                continue
            w = _qpow(field, expo(i, j, D), twist)
            if P.take_cols(blk) != grid.C.take_cols(blk) * w:
                raise TableViolation(
                    f"{name} does not act as q^{expo(i, j, D)} on the "
                    f"tilde cell ({i},{j}) of grid '{label}'"
                )


class QTetSystem:
    """The eight matrices over a split system, with closed-form inverses.

    ``twist = -1`` selects the primed system (built with q' = -q but
    expressed over the same ground field).  Inverses of K, K*, Phi, Psi
    come from the closed-form weighted sums, not from matrix inversion,
    and are materialized lazily.  ``generators`` builds and caches the
    eight q-tetrahedron factor chains.
    """

    __slots__ = ("params", "scheme", "dual", "split", "twist",
                 "A", "Astar", "B", "Bstar", "K", "Kstar", "Phi", "Psi",
                 "_inverses", "_generators", "_float")

    def __init__(self, params, scheme, dual, split, twist, A, Astar, six):
        self.params = params
        self.scheme = scheme
        self.dual = dual
        self.split = split
        self.twist = twist
        self.A = A
        self.Astar = Astar
        self.B = six["B"]
        self.Bstar = six["Bstar"]
        self.K = six["K"]
        self.Kstar = six["Kstar"]
        self.Phi = six["Phi"]
        self.Psi = six["Psi"]
        self._inverses = {}
        self._generators = None
        self._float = None

    @property
    def field(self) -> GroundField:
        return self.params.field

    @property
    def n(self) -> int:
        return self.scheme.n

    def matrices(self) -> dict:
        return {name: getattr(self, name) for name in MATRIX_NAMES}

    def inverse_of(self, name: str) -> Mat:
        """K^-1, (K*)^-1, Phi^-1, or Psi^-1 from its closed-form sum."""
        if name not in INVERSE_DEFS:
            raise ConfigError(f"no closed-form inverse for {name!r}")
        if name not in self._inverses:
            label, expo = INVERSE_DEFS[name]
            grid = self.split.grid(label)
            D = self.params.D
            self._inverses[name] = grid.weighted_sum(
                lambda i, j: _qpow(self.field, expo(i, j, D), self.twist)
            )
        return self._inverses[name]

    @property
    def Kinv(self) -> Mat:
        return self.inverse_of("K")

    @property
    def Kstarinv(self) -> Mat:
        return self.inverse_of("Kstar")

    @property
    def Phiinv(self) -> Mat:
        return self.inverse_of("Phi")

    @property
    def Psiinv(self) -> Mat:
        return self.inverse_of("Psi")

    @property
    def generators(self) -> dict:
        if self._generators is None:
            self._generators = build_generators(self)
        return self._generators

    def __repr__(self):
        tag = "" if self.twist == 1 else ", primed"
        p = self.params
        return (f"QTetSystem(D={p.D}, b={p.b}, beta={p.beta}, "
                f"n={self.n}{tag})")


def build_qtet_system(scheme: SchemeData, dual: DualData, split,
                      params: ClassicalParams, twist: int = 1,
                      validate: bool = True) -> QTetSystem:
    """Assemble the eight matrices into a :class:`QTetSystem`."""
    if twist not in (1, -1):
        raise ConfigError(f"twist must be 1 or -1, got {twist!r}")
    A, Astar = build_AAstar(params, scheme, dual, twist)
    six = build_six(params, split, twist, validate=validate)
    return QTetSystem(params, scheme, dual, split, twist, A, Astar, six)


# ---------------------------------------------------------------------------
# generators as factor chains
# ---------------------------------------------------------------------------


class FactorChain:
    """An ordered product of matrices, applied without forcing the product.

    ``apply`` multiplies a vector block by the factors right-to-left;
    ``dense`` materializes (and caches) the full product for the checks
    that need entrywise access.
    """

    __slots__ = ("name", "factors", "recipe", "_dense")

    def __init__(self, name: str, factors, recipe: str = ""):
        self.name = name
        self.factors = tuple(factors)
        self.recipe = recipe
        self._dense = None

    @property
    def dense(self) -> Mat:
        if self._dense is None:
            M = self.factors[0]
            for f in self.factors[1:]:
                M = M @ f
            self._dense = M
        return self._dense

    def apply(self, block: Mat) -> Mat:
        for f in reversed(self.factors):
            block = f @ block
        return block

    def __repr__(self):
        return f"FactorChain({self.name}, {len(self.factors)} factors)"


def build_generators(sys: QTetSystem) -> dict:
    """The eight generator actions as factor chains.

    ====  ==================
    x01   A Phi Psi^-1
    x12   B Phi^-1
    x23   A* Phi Psi
    x30   B* Phi^-1
    x02   K Psi^-1
    x20   Psi K^-1
    x13   K* Psi
    x31   Psi^-1 (K*)^-1
    ====  ==================

    Each closed-form inverse factor is probed on a seeded vector before
    use; :class:`SingularFactor` is raised when the probe fails, since a
    failed round trip means the would-be inverse is not one.
    """
    field = sys.field
    n = sys.n
    rng = random.Random(7)
    v = Mat(field, n, 1, [field.scalar(rng.randint(-9, 9)) for _ in range(n)])
    for name in ("K", "Kstar", "Phi", "Psi"):
        M = getattr(sys, name)
        Minv = sys.inverse_of(name)
        if M @ (Minv @ v) != v:
            raise SingularFactor(
                f"the closed-form inverse of {name} fails its round trip"
            )
    chains = {
        "x01": ((sys.A, sys.Phi, sys.Psiinv), "A Phi Psi^-1"),
        "x12": ((sys.B, sys.Phiinv), "B Phi^-1"),
        "x23": ((sys.Astar, sys.Phi, sys.Psi), "A* Phi Psi"),
        "x30": ((sys.Bstar, sys.Phiinv), "B* Phi^-1"),
        "x02": ((sys.K, sys.Psiinv), "K Psi^-1"),
        "x20": ((sys.Psi, sys.Kinv), "Psi K^-1"),
        "x13": ((sys.Kstar, sys.Psi), "K* Psi"),
        "x31": ((sys.Psiinv, sys.Kstarinv), "Psi^-1 (K*)^-1"),
    }
    return {
        name: FactorChain(name, chains[name][0], chains[name][1])
        for name in GENERATOR_NAMES
    }


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Probe:
    """Exact-probe configuration: 'full' sweeps the identity block, 'sample'
    uses ``count`` seeded random integer vectors."""

    kind: str = "sample"
    count: int = 32
    seed: int = 42


DEFAULT_PROBE = Probe()


def parse_probe(text: str) -> Probe:
    """Parse 'full' or 'sample:<count>:<seed>'."""
    if text == "full":
        return Probe("full")
    parts = text.split(":")
    if parts[0] == "sample" and len(parts) == 3:
        try:
            count, seed = int(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"bad probe spec {text!r}") from None
        if count <= 0:
            raise ConfigError(f"probe count must be positive, got {count}")
        return Probe("sample", count, seed)
    raise ConfigError(
        f"bad probe spec {text!r}: expected 'full' or 'sample:<count>:<seed>'"
    )


def _probe_block(field: GroundField, n: int, probe: Probe) -> Mat:
    if probe.kind == "full":
        return Mat.identity(field, n)
    rng = random.Random(probe.seed)
    entries = [field.scalar(rng.randint(-9, 9))
               for _ in range(n * probe.count)]
    return Mat(field, n, probe.count, entries)


# ---------------------------------------------------------------------------
# relation instances
# ---------------------------------------------------------------------------


def _gname(i: int, j: int) -> str:
    return f"x{i % 4}{j % 4}"


def relation_instances() -> dict:
    """All instances of the three defining relation families.

    * ``inverse``: x_ij x_ji = 1 for the four ordered pairs with j - i = 2;
    * ``weyl``: (q x_hi x_ij - q^-1 x_ij x_hi)/(q - q^-1) = 1 for
      (i - h, j - i) in {(1,1), (1,2), (2,1)}, twelve instances;
    * ``serre``: x_hi^3 x_jk - [3]_q x_hi^2 x_jk x_hi
      + [3]_q x_hi x_jk x_hi^2 - x_jk x_hi^3 = 0 for
      i - h = j - i = k - j = 1, four instances.

    Each instance is the ordered pair of generator names involved.
    """
    inverse = [(_gname(h, h + 2), _gname(h + 2, h)) for h in range(4)]
    weyl = []
    for h in range(4):
        for di, dj in ((1, 1), (1, 2), (2, 1)):
            i = h + di
            weyl.append((_gname(h, i), _gname(i, i + dj)))
    serre = [(_gname(h, h + 1), _gname(h + 2, h + 3)) for h in range(4)]
    return {"inverse": inverse, "weyl": weyl, "serre": serre}


# ---------------------------------------------------------------------------
# float mirror
# ---------------------------------------------------------------------------


class _FloatPack:
    """Lazily-converted complex128 mirrors of the system's matrices."""

    def __init__(self, sys: QTetSystem):
        self.sys = sys
        self._mats = {}
        self._gens = {}
        self._grids = {}
        self._a1 = None

    def mat(self, name: str) -> np.ndarray:
        if name not in self._mats:
            if name in MATRIX_NAMES:
                self._mats[name] = getattr(self.sys, name).to_complex()
            else:
                base = name[:-3]
                self._mats[name] = self.sys.inverse_of(base).to_complex()
        return self._mats[name]

    def gen(self, name: str) -> np.ndarray:
        if name not in self._gens:
            self._gens[name] = self.sys.generators[name].dense.to_complex()
        return self._gens[name]

    def grid_C(self, label: str) -> np.ndarray:
        if label not in self._grids:
            self._grids[label] = self.sys.split.grid(label).C.to_complex()
        return self._grids[label]

    @property
    def A1(self) -> np.ndarray:
        if self._a1 is None:
            self._a1 = self.sys.scheme.dd.A[1].astype(np.complex128)
        return self._a1


def _float_pack(sys: QTetSystem) -> _FloatPack:
    if sys._float is None:
        sys._float = _FloatPack(sys)
    return sys._float


def _relmax(L: np.ndarray, R) -> float:
    """Max |L - R| relative to 1 + max |R| (R may be a scalar multiple of I)."""
    if np.isscalar(R):
        R = R * np.eye(L.shape[0], dtype=complex)
    dval = float(np.abs(L - R).max())
    return dval / (1.0 + float(np.abs(R).max()))


def _fmt(x: float) -> str:
    return f"{x:.3e}"


# ---------------------------------------------------------------------------
# check helpers
# ---------------------------------------------------------------------------


def _entry(name, anchor, ok, residual="0", mode="exact", witness=None):
    d = {
        "name": name,
        "paper_anchor": anchor,
        "status": "pass" if ok else "fail",
        "max_residual": residual,
        "mode": mode,
    }
    if witness is not None:
        d["witness"] = witness
    return d


def _first_bad_column(Delta: Mat):
    for j in range(Delta.cols):
        if any(not Delta._e[i * Delta.cols + j].is_zero
               for i in range(Delta.rows)):
            return j
    return None


def _hybrid_entry(name, anchor, float_resid, exact_delta, tol, extra=None):
    """Combine a float full-sweep residual with an exact probe difference."""
    ok_float = float_resid <= tol
    ok_exact = exact_delta.is_zero()
    witness = {"exact_probe_residual": "0" if ok_exact else "nonzero"}
    if extra:
        witness.update(extra)
    if not ok_exact:
        witness["probe_column"] = _first_bad_column(exact_delta)
    return _entry(name, anchor, ok_float and ok_exact,
                  residual=_fmt(float_resid), mode="float+probes",
                  witness=witness)


# ---------------------------------------------------------------------------
# check suites
# ---------------------------------------------------------------------------


def check_spectral(sys: QTetSystem) -> list:
    """A and A* equal their spectral sums (exact, coefficient-wise)."""
    fail_a, fail_astar = _spectral_failures(
        sys.params, sys.scheme, sys.dual, sys.twist
    )
    return [
        _entry("qtet_spectral_sum_A", "A = sum_i q^(D-2i) E_i",
               not fail_a, witness={"detail": fail_a[0]} if fail_a else None),
        _entry("qtet_spectral_sum_Astar", "A* = sum_i q^(D-2i) E*_i",
               not fail_astar,
               witness={"detail": fail_astar[0]} if fail_astar else None),
    ]


def check_table(sys: QTetSystem, tol: float = 1e-8) -> list:
    """Float residuals of the cell-action table (exact check ran at build)."""
    fp = _float_pack(sys)
    field = sys.field
    D = sys.params.D
    out = []
    for name, (label, expo) in SIX_DEFS.items():
        Cf = fp.grid_C(label)
        Pf = fp.mat(name) @ Cf
        grid = sys.split.grid(label)
        worst = 0.0
        for i in range(D + 1):
            for j in range(D + 1):
                blk = grid.blocks[i][j]
                if not len(blk):
                    continue
                w = complex(_qpow(field, expo(i, j, D), sys.twist).to_complex())
                cols = list(blk)
                worst = max(worst, _relmax(Pf[:, cols], Cf[:, cols] * w))
        out.append(_entry(
            f"qtet_table_{name}",
            f"{name} - q^e I vanishes on every tilde cell of its grid",
            worst <= tol, residual=_fmt(worst), mode="float+probes",
            witness={"exact_construction_check": "pass"},
        ))
    return out


def _diag_commutes_exactly(M: Mat, diag_vals) -> bool:
    """Whether M commutes with diag(diag_vals), checked entrywise."""
    n = M.rows
    for i in range(n):
        di = diag_vals[i]
        base = i * n
        for j in range(n):
            if not ((di - diag_vals[j]) * M._e[base + j]).is_zero:
                return False
    return True


def check_transpose_suite(sys: QTetSystem, probe: Probe = None,
                          tol: float = 1e-8) -> list:
    """Transposes, closed-form inverses, and centrality of Phi and Psi."""
    probe = probe or DEFAULT_PROBE
    field = sys.field
    n = sys.n
    fp = _float_pack(sys)
    out = []

    transposes = [
        ("qtet_transpose_A", "A^t = A", sys.A, sys.A),
        ("qtet_transpose_Astar", "A*^t = A*", sys.Astar, sys.Astar),
        ("qtet_transpose_B", "B^t = B*", sys.B, sys.Bstar),
        ("qtet_transpose_K", "K^t = (K*)^-1", sys.K, sys.Kstarinv),
        ("qtet_transpose_Phi", "Phi^t = Phi", sys.Phi, sys.Phi),
        ("qtet_transpose_Psi", "Psi^t = Psi", sys.Psi, sys.Psi),
    ]
    for name, anchor, M, target in transposes:
        out.append(_entry(name, anchor, M.transpose() == target))

    V = _probe_block(field, n, probe)
    eye = np.eye(n, dtype=complex)
    inverses = [
        ("qtet_inverse_formula_Phi",
         "Phi^-1 = sum q^(i+j-D) over the up-up grid", "Phi"),
        ("qtet_inverse_formula_Psi",
         "Psi^-1 = sum q^(i+j-D) over the up-down grid", "Psi"),
        ("qtet_inverse_formula_K",
         "K^-1 = sum q^(j-i) over the down-down grid", "K"),
        ("qtet_inverse_formula_Kstar",
         "(K*)^-1 = sum q^(j-i) over the up-up grid", "Kstar"),
    ]
    for name, anchor, mname in inverses:
        M = getattr(sys, mname)
        Minv = sys.inverse_of(mname)
        fres = _relmax(fp.mat(mname) @ fp.mat(mname + "inv"), eye)
        delta = M @ (Minv @ V) - V
        out.append(_hybrid_entry(name, anchor, fres, delta, tol,
                                 extra={"probes": V.cols}))

    A1m = Mat.from_int_array(field, sys.scheme.dd.A[1])
    dist_row = sys.scheme.dd.dist[sys.dual.x]
    astar_diag = [sys.Astar._e[y * n + y] for y in range(n)]
    for cname, M, Mf_name in (("Phi", sys.Phi, "Phi"), ("Psi", sys.Psi, "Psi")):
        Mf = fp.mat(Mf_name)
        fres = _relmax(Mf @ fp.A1, fp.A1 @ Mf)
        delta = M @ (A1m @ V) - A1m @ (M @ V)
        out.append(_hybrid_entry(
            f"qtet_central_{cname}_A1", f"{cname} commutes with A_1",
            fres, delta, tol, extra={"probes": V.cols}))
        out.append(_entry(
            f"qtet_central_{cname}_Astar1",
            f"{cname} commutes with A*_1",
            _diag_commutes_exactly(M, astar_diag),
        ))
    fres = _relmax(fp.mat("Phi") @ fp.mat("Psi"), fp.mat("Psi") @ fp.mat("Phi"))
    delta = sys.Phi @ (sys.Psi @ V) - sys.Psi @ (sys.Phi @ V)
    out.append(_hybrid_entry("qtet_commute_Phi_Psi", "Phi Psi = Psi Phi",
                             fres, delta, tol, extra={"probes": V.cols}))
    return out


def check_conjugate_suite(sys: QTetSystem, sys_prime: QTetSystem = None,
                          tol: float = 1e-8) -> list:
    """Realness (b > 1) or conj(S) = S' (b < -1), plus the parity laws.

    The parity laws A' = (-1)^D A and A*' = (-1)^D A* hold for either sign
    of b and are checked against an independently built primed pair.
    """
    b = sys.params.b
    D = sys.params.D
    out = []
    if b > 1:
        for name in MATRIX_NAMES:
            M = getattr(sys, name)
            ok = all(x.is_real for x in M._e)
            out.append(_entry(f"qtet_real_{name}",
                              f"{name} is real when b > 1", ok))
    else:
        if sys_prime is None:
            sys_prime = build_qtet_system(sys.scheme, sys.dual, sys.split,
                                          sys.params, twist=-sys.twist,
                                          validate=False)
        for name in MATRIX_NAMES:
            M = getattr(sys, name)
            Mp = getattr(sys_prime, name)
            out.append(_entry(f"qtet_conjugate_{name}",
                              f"conj({name}) = {name}' when b < -1",
                              M.conj() == Mp))
    Ap, Astarp = build_AAstar(sys.params, sys.scheme, sys.dual,
                              twist=-sys.twist)
    sign = sys.field.one if D % 2 == 0 else -sys.field.one
    out.append(_entry("qtet_parity_A", "A' = (-1)^D A",
                      Ap == sys.A * sign))
    out.append(_entry("qtet_parity_Astar", "A*' = (-1)^D A*",
                      Astarp == sys.Astar * sign))
    return out


def check_chains(sys: QTetSystem, tol: float = 1e-8, count: int = 10,
                 seed: int = 314) -> list:
    """Factor chains reproduce their dense products on seeded vectors."""
    field = sys.field
    n = sys.n
    rng = random.Random(seed)
    V = Mat(field, n, count,
            [field.scalar(rng.randint(-9, 9)) for _ in range(n * count)])
    fp = _float_pack(sys)
    out = []
    for name in GENERATOR_NAMES:
        chain = sys.generators[name]
        delta = chain.apply(V) - chain.dense @ V
        Ff = None
        for f in reversed(chain.factors):
            Mf = f.to_complex()
            Ff = Mf if Ff is None else Mf @ Ff
        fres = _relmax(Ff, fp.gen(name))
        out.append(_hybrid_entry(
            f"qtet_chain_dense_{name}",
            f"{name} = {chain.recipe}",
            fres, delta, tol, extra={"probes": count}))
    return out


def check_boxtimes_relations(sys: QTetSystem, probe: Probe = None,
                             tol: float = 1e-8) -> list:
    """The three defining relation families of the q-tetrahedron algebra.

    Float mode verifies each relation as a dense matrix identity; exact
    mode applies the factor chains to the probe block.  One check entry
    per relation instance, in a fixed enumeration order.
    """
    probe = probe or DEFAULT_PROBE
    field = sys.field
    n = sys.n
    gens = sys.generators
    fp = _float_pack(sys)
    V = _probe_block(field, n, probe)
    eye = np.eye(n, dtype=complex)

    q = field.q
    qinv = q.inverse()
    wdenom = (q - qinv).inverse()
    three = (field.qpow(3) - field.qpow(-3)) / (field.qpow(1) - field.qpow(-1))
    qc = complex(q.to_complex())
    qcinv = 1.0 / qc
    threec = complex(three.to_complex())

    inst = relation_instances()
    out = []

    for a, bname in inst["inverse"]:
        fres = _relmax(fp.gen(a) @ fp.gen(bname), eye)
        delta = gens[a].apply(gens[bname].apply(V)) - V
        out.append(_hybrid_entry(
            f"boxtimes_inverse_{a}_{bname}", f"{a} {bname} = 1",
            fres, delta, tol, extra={"probes": V.cols}))

    for a, bname in inst["weyl"]:
        Xf, Yf = fp.gen(a), fp.gen(bname)
        Lf = (qc * Xf @ Yf - qcinv * Yf @ Xf) / (qc - qcinv)
        fres = _relmax(Lf, eye)
        XY = gens[a].apply(gens[bname].apply(V))
        YX = gens[bname].apply(gens[a].apply(V))
        delta = (XY * q - YX * qinv) * wdenom - V
        out.append(_hybrid_entry(
            f"boxtimes_qweyl_{a}_{bname}",
            f"(q {a} {bname} - q^-1 {bname} {a})/(q - q^-1) = 1",
            fres, delta, tol, extra={"probes": V.cols}))

    for a, bname in inst["serre"]:
        Xf, Yf = fp.gen(a), fp.gen(bname)
        X2f = Xf @ Xf
        X3f = X2f @ Xf
        Lf = (X3f @ Yf - threec * X2f @ Yf @ Xf
              + threec * Xf @ Yf @ X2f - Yf @ X3f)
        scale = max(float(np.abs(X3f @ Yf).max()), 1.0)
        fres = float(np.abs(Lf).max()) / (1.0 + scale)
        x, y = gens[a], gens[bname]
        u1 = x.apply(V)
        u2 = x.apply(u1)
        u3 = x.apply(u2)
        t1 = x.apply(x.apply(x.apply(y.apply(V))))
        t2 = x.apply(x.apply(y.apply(u1)))
        t3 = x.apply(y.apply(u2))
        t4 = y.apply(u3)
        delta = t1 - t2 * three + t3 * three - t4
        out.append(_hybrid_entry(
            f"boxtimes_qserre_{a}_{bname}",
            f"{a}^3 {bname} - [3]_q {a}^2 {bname} {a} "
            f"+ [3]_q {a} {bname} {a}^2 - {bname} {a}^3 = 0",
            fres, delta, tol, extra={"probes": V.cols}))
    return out


#: generator transpose table: x_ij^t equals this generator.
GEN_TRANSPOSE = {
    "x01": "x01", "x12": "x30", "x23": "x23", "x30": "x12",
    "x02": "x31", "x20": "x13", "x13": "x20", "x31": "x02",
}


def check_generator_symmetries(sys: QTetSystem, sys_prime: QTetSystem = None,
                               tol: float = 1e-8) -> list:
    """Transpose table and conjugation behaviour of the eight generators."""
    b = sys.params.b
    gens = sys.generators
    out = []
    for name in GENERATOR_NAMES:
        target = GEN_TRANSPOSE[name]
        out.append(_entry(
            f"qtet_gen_transpose_{name}", f"{name}^t = {target}",
            gens[name].dense.transpose() == gens[target].dense))
    if b > 1:
        for name in GENERATOR_NAMES:
            M = gens[name].dense
            out.append(_entry(
                f"qtet_gen_conjugate_{name}",
                f"conj({name}) = {name} when b > 1",
                M.conj() == M))
    else:
        if sys_prime is None:
            sys_prime = build_qtet_system(sys.scheme, sys.dual, sys.split,
                                          sys.params, twist=-sys.twist,
                                          validate=False)
        pgens = sys_prime.generators
        for name in GENERATOR_NAMES:
            out.append(_entry(
                f"qtet_gen_conjugate_{name}",
                f"conj({name}) = {name}' when b < -1",
                gens[name].dense.conj() == pgens[name].dense))
    return out


def verify_qtet_suite(sys: QTetSystem, probe: Probe = None,
                      tol: float = 1e-8) -> list:
    """Run every q-tetrahedron check and return the list of check entries.

    Order: spectral sums, cell-action table, transposes/inverses/centrality,
    conjugation and parity, chain-vs-dense agreement, defining relations,
    generator symmetries.  For b < -1 the primed system is built once and
    shared between the conjugation and generator-symmetry checks.
    """
    probe = probe or DEFAULT_PROBE
    checks = []
    checks += check_spectral(sys)
    checks += check_table(sys, tol)
    checks += check_transpose_suite(sys, probe, tol)
    sys_prime = None
    if sys.params.b < -1:
        sys_prime = build_qtet_system(sys.scheme, sys.dual, sys.split,
                                      sys.params, twist=-sys.twist,
                                      validate=False)
    checks += check_conjugate_suite(sys, sys_prime, tol)
    checks += check_chains(sys, tol)
    checks += check_boxtimes_relations(sys, probe, tol)
    checks += check_generator_symmetries(sys, sys_prime, tol)
    return checks
