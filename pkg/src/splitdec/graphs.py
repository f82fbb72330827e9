"""Graph families, distance data, and intersection numbers.

Vertices are ordered lexicographically by label, so every construction is
deterministic; for the forms graphs, vertex 0 is the zero matrix.  Distance
regularity is verified exhaustively (every vertex pair), never sampled:
downstream exact computations assume it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ConfigError,
    DegenerateParameters,
    Disconnected,
    LoopOrMultiEdge,
    NotDistanceRegular,
    ParseError,
    UnsupportedFieldOrder,
)


# ---------------------------------------------------------------------------
# finite fields by exhaustive tables
# ---------------------------------------------------------------------------

# modulus polynomials, little-endian coefficient tuples of t^k = -(...)
_REDUCTIONS = {
    4: (2, (1, 1)),  # GF(4) = GF(2)[t]/(t^2 + t + 1):  t^2 = t + 1
    8: (2, (1, 1, 0)),  # GF(8) = GF(2)[t]/(t^3 + t + 1):  t^3 = t + 1
    9: (3, (2, 0)),  # GF(9) = GF(3)[t]/(t^2 + 1):      t^2 = -1 = 2
}
_SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)


class FiniteField:
    """GF(order) with dense add/mul/inv tables; elements are 0..order-1.

    Element i has base-p digits equal to the coefficients of its polynomial
    representative (little-endian), so 0 is the zero element and 1 the one.
    """

    __slots__ = ("order", "p", "k", "add", "sub", "mul", "inv", "neg", "frob")

    def __init__(self, order: int):
        if order not in _SUPPORTED_ORDERS:
            raise UnsupportedFieldOrder(f"GF({order}) not in table {_SUPPORTED_ORDERS}")
        self.order = order
        if order in _REDUCTIONS:
            p, red = _REDUCTIONS[order]
            k = len(red)
        else:
            p, k, red = order, 1, None
        self.p, self.k = p, k

        def digits(x):
            out = []
            for _ in range(k):
                out.append(x % p)
                x //= p
            return out

        def undigits(ds):
            x = 0
            for c in reversed(ds):
                x = x * p + c
            return x

        def polymul(a, b):
            # multiply, then fold degrees >= k using t^k = red
            prod = [0] * (2 * k - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        prod[i + j] = (prod[i + j] + ai * bj) % p
            for deg in range(2 * k - 2, k - 1, -1):
                c = prod[deg]
                if c:
                    prod[deg] = 0
                    for j, rj in enumerate(red):
                        prod[deg - k + j] = (prod[deg - k + j] + c * rj) % p
            return prod[:k]

        n = order
        add = [[0] * n for _ in range(n)]
        mul = [[0] * n for _ in range(n)]
        for x in range(n):
            dx = digits(x)
            for y in range(x, n):
                dy = digits(y)
                s = undigits([(a + b) % p for a, b in zip(dx, dy)])
                add[x][y] = add[y][x] = s
                m = undigits(polymul(dx, dy)) if red else (x * y) % p
                mul[x][y] = mul[y][x] = m
        self.add = add
        self.mul = mul
        self.neg = [add[x].index(0) for x in range(n)]
        self.sub = [[add[x][self.neg[y]] for y in range(n)] for x in range(n)]
        inv = [0] * n
        for x in range(1, n):
            inv[x] = mul[x].index(1)
        self.inv = inv
        # Frobenius x -> x^p
        self.frob = [self.pow(x, p) for x in range(n)]

    def pow(self, x: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self.mul[out][x]
        return out

    def conj(self, x: int) -> int:
        """x -> x^r for GF(r^2); identity on prime fields (k=1)."""
        if self.k == 1:
            return x
        r = int(round(self.order ** 0.5))
        if r * r != self.order:
            raise UnsupportedFieldOrder(f"GF({self.order}) is not a square order")
        return self.pow(x, r)

    def fixed_by_conj(self):
        return [x for x in range(self.order) if self.conj(x) == x]

    def rank(self, flat: Sequence[int], rows: int, cols: int) -> int:
        """Rank of a rows x cols matrix given as a flat label sequence."""
        M = [list(flat[i * cols:(i + 1) * cols]) for i in range(rows)]
        mul, sub, inv = self.mul, self.sub, self.inv
        r = 0
        for c in range(cols):
            piv = next((i for i in range(r, rows) if M[i][c]), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            iv = inv[M[r][c]]
            M[r] = [mul[iv][v] for v in M[r]]
            for i in range(rows):
                if i != r and M[i][c]:
                    f = M[i][c]
                    M[i] = [sub[a][mul[f][b]] for a, b in zip(M[i], M[r])]
            r += 1
            if r == rows:
                break
        return r


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


class Graph:
    """Finite simple connected graph with a deterministic vertex order."""

    __slots__ = ("n", "adj", "labels", "name")

    def __init__(self, name: str, adj: np.ndarray, labels=None, check_connected=True):
        adj = np.asarray(adj, dtype=np.uint8)
        n = adj.shape[0]
        if adj.shape != (n, n) or not (adj == adj.T).all():
            raise ValueError("adjacency must be square and symmetric")
        if adj.diagonal().any():
            raise LoopOrMultiEdge("nonzero diagonal")
        if not np.isin(adj, (0, 1)).all():
            raise LoopOrMultiEdge("entries must be 0/1")
        self.n = int(n)
        self.adj = adj
        self.labels = labels
        self.name = name
        if check_connected and n and _bfs_layers_count(adj) != n:
            raise Disconnected(f"graph {name!r} is not connected")

    def adjacency(self, fieldK) -> "object":
        """The adjacency matrix as an exact Mat over the given GroundField."""
        from .matrix import Mat

        return Mat.from_int_array(fieldK, self.adj.astype(object))

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def __repr__(self):
        return f"Graph({self.name!r}, n={self.n})"


def _bfs_layers_count(adj: np.ndarray) -> int:
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = np.zeros(n, dtype=bool)
    frontier[0] = True
    A = adj.astype(bool)
    while frontier.any():
        frontier = (A[frontier].any(axis=0)) & ~seen
        seen |= frontier
    return int(seen.sum())


def hamming(D: int, n: int) -> Graph:
    """H(D, n): words of length D over an n-set, adjacent iff they differ
    in exactly one coordinate."""
    if D < 1 or n < 2:
        raise DegenerateParameters(f"H({D},{n}) needs D >= 1 and n >= 2")
    labels = list(itertools.product(range(n), repeat=D))
    idx = {lab: i for i, lab in enumerate(labels)}
    N = len(labels)
    adj = np.zeros((N, N), dtype=np.uint8)
    for i, lab in enumerate(labels):
        for pos in range(D):
            for v in range(n):
                if v != lab[pos]:
                    j = idx[lab[:pos] + (v,) + lab[pos + 1:]]
                    adj[i, j] = 1
    return Graph(f"hamming:{D},{n}", adj, labels)


def johnson(n: int, d: int) -> Graph:
    """J(n, d): d-subsets of an n-set, adjacent iff they share d-1 points."""
    if not (1 <= d <= n - 1):
        raise DegenerateParameters(f"J({n},{d}) needs 1 <= d <= n-1")
    if min(d, n - d) < 1:
        raise DegenerateParameters(f"J({n},{d}) has diameter 0")
    labels = list(itertools.combinations(range(n), d))
    N = len(labels)
    adj = np.zeros((N, N), dtype=np.uint8)
    sets = [set(lab) for lab in labels]
    for i in range(N):
        for j in range(i + 1, N):
            if len(sets[i] & sets[j]) == d - 1:
                adj[i, j] = adj[j, i] = 1
    return Graph(f"johnson:{n},{d}", adj, labels)


def cycle(n: int) -> Graph:
    """C_n for n >= 3."""
    if n < 3:
        raise DegenerateParameters(f"C_{n} needs n >= 3")
    adj = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        adj[i, (i + 1) % n] = adj[(i + 1) % n, i] = 1
    return Graph(f"cycle:{n}", adj, list(range(n)))


def _forms_graph(name, K: FiniteField, labels, rows, cols) -> Graph:
    """Adjacency u ~ v iff rank(label_u - label_v) = 1 over K.

    The label set is closed under subtraction, so the rank of every possible
    difference is computed once by Gaussian elimination and the full pair
    table is filled exhaustively.
    """
    labels = sorted(labels)
    if labels[0] != tuple([0] * (rows * cols)):
        raise AssertionError("vertex 0 must be the zero matrix")
    sub = K.sub
    rank1 = {lab for lab in labels if K.rank(lab, rows, cols) == 1}
    N = len(labels)
    adj = np.zeros((N, N), dtype=np.uint8)
    for i, u in enumerate(labels):
        for j in range(i + 1, N):
            v = labels[j]
            diff = tuple(sub[a][b] for a, b in zip(u, v))
            if diff in rank1:
                adj[i, j] = adj[j, i] = 1
    return Graph(name, adj, labels)


def bilinear_forms(d: int, e: int, r: int) -> Graph:
    """Bil(d x e, r): all d x e matrices over GF(r), adjacent iff the
    difference has rank 1."""
    if d < 1 or e < 1 or min(d, e) < 1:
        raise DegenerateParameters(f"Bil({d}x{e},{r})")
    K = FiniteField(r)
    labels = itertools.product(range(r), repeat=d * e)
    return _forms_graph(f"bilinear:{d},{e},{r}", K, labels, d, e)


def hermitian_forms(d: int, r: int) -> Graph:
    """Her(d, r): d x d Hermitian matrices over GF(r^2) (conjugation x -> x^r),
    adjacent iff the difference has rank 1."""
    if d < 1:
        raise DegenerateParameters(f"Her({d},{r})")
    K = FiniteField(r * r)
    diag_choices = K.fixed_by_conj()
    upper = [(i, j) for i in range(d) for j in range(i + 1, d)]
    labels = []
    for diag in itertools.product(diag_choices, repeat=d):
        for vals in itertools.product(range(K.order), repeat=len(upper)):
            M = [[0] * d for _ in range(d)]
            for i in range(d):
                M[i][i] = diag[i]
            for (i, j), v in zip(upper, vals):
                M[i][j] = v
                M[j][i] = K.conj(v)
            labels.append(tuple(x for row in M for x in row))
    return _forms_graph(f"hermitian:{d},{r}", K, labels, d, d)


# ---------------------------------------------------------------------------
# distance data and intersection numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistanceData:
    D: int
    dist: np.ndarray  # n x n int32
    A: list  # D+1 distance matrices, np.uint8

    def sphere_sizes(self, x: int = 0):
        return tuple(int((self.dist[x] == i).sum()) for i in range(self.D + 1))


def distance_data(g: Graph) -> DistanceData:
    """All-pairs distances by layered BFS; raises Disconnected."""
    n = g.n
    A = g.adj.astype(np.float64)
    dist = np.full((n, n), -1, dtype=np.int32)
    np.fill_diagonal(dist, 0)
    reached = np.eye(n, dtype=bool)
    frontier = np.eye(n)
    d = 0
    while True:
        nxt = ((frontier @ A) > 0) & ~reached
        if not nxt.any():
            break
        d += 1
        dist[nxt] = d
        reached |= nxt
        frontier = nxt.astype(np.float64)
    if not reached.all():
        raise Disconnected(f"graph {g.name!r} is not connected")
    mats = [(dist == i).astype(np.uint8) for i in range(d + 1)]
    return DistanceData(D=d, dist=dist, A=mats)


@dataclass(frozen=True)
class IntersectionData:
    p: np.ndarray  # (D+1, D+1, D+1) int64, p[h, i, j] = p^h_{ij}
    c: tuple
    a: tuple
    b_seq: tuple

    @property
    def array(self):
        """Intersection array ({b_0..b_{D-1}}, {c_1..c_D})."""
        D = len(self.c) - 1
        return tuple(self.b_seq[:D]), tuple(self.c[1:])


def intersection_numbers(g: Graph, dd: DistanceData) -> IntersectionData:
    """p^h_{ij} with exhaustive independence verification over all pairs."""
    D = dd.D
    n = g.n
    counts = np.empty((D + 1, D + 1, D + 1), dtype=np.int64)
    masks = [dd.dist == h for h in range(D + 1)]
    Af = [a.astype(np.float64) for a in dd.A]
    for i in range(D + 1):
        for j in range(i, D + 1):
            P = np.rint(Af[i] @ Af[j]).astype(np.int64)
            for h in range(D + 1):
                vals = P[masks[h]]
                vmin, vmax = int(vals.min()), int(vals.max())
                if vmin != vmax:
                    flat = np.flatnonzero(masks[h])
                    lo = flat[int(np.argmin(vals))]
                    hi = flat[int(np.argmax(vals))]
                    witness = {
                        "h": h,
                        "i": i,
                        "j": j,
                        "pair_low": (int(lo) // n, int(lo) % n, vmin),
                        "pair_high": (int(hi) // n, int(hi) % n, vmax),
                    }
                    raise NotDistanceRegular(
                        f"p^{h}_{{{i},{j}}} not constant: {vmin} != {vmax}",
                        witness=witness,
                    )
                counts[h, i, j] = counts[h, j, i] = vmin
    c = tuple(int(counts[i, 1, i - 1]) if i >= 1 else 0 for i in range(D + 1))
    a = tuple(int(counts[i, 1, i]) for i in range(D + 1))
    b_seq = tuple(int(counts[i, 1, i + 1]) if i < D else 0 for i in range(D + 1))
    k = int(g.degrees()[0])
    for i in range(D + 1):
        if c[i] + a[i] + b_seq[i] != k:
            raise NotDistanceRegular(
                f"c_{i}+a_{i}+b_{i} = {c[i]+a[i]+b_seq[i]} != valency {k}",
                witness={"i": i},
            )
    return IntersectionData(p=counts, c=c, a=a, b_seq=b_seq)


# ---------------------------------------------------------------------------
# file format and spec strings
# ---------------------------------------------------------------------------


def parse_graph_text(text: str, name: str = "file") -> Graph:
    """Edge-list format: line 1 is n; then `u v` lines; comments with #."""
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise ParseError("expected a single vertex count", line=lineno)
            try:
                n = int(parts[0])
            except ValueError:
                raise ParseError(f"bad vertex count {parts[0]!r}", line=lineno) from None
            if n < 1:
                raise ParseError(f"vertex count {n} must be positive", line=lineno)
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {line!r}", line=lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"endpoint out of range in {line!r}", line=lineno)
        if u == v:
            raise LoopOrMultiEdge(f"loop at vertex {u} (line {lineno})")
        key = (min(u, v), max(u, v))
        if key in edges:
            raise LoopOrMultiEdge(f"duplicate edge {u} {v} (line {lineno})")
        edges.add(key)
    if n is None:
        raise ParseError("empty graph file", line=1)
    adj = np.zeros((n, n), dtype=np.uint8)
    for u, v in edges:
        adj[u, v] = adj[v, u] = 1
    return Graph(name, adj, list(range(n)))


def graph_from_file(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_graph_text(text, name=f"file:{path}")


parse_graph_file = graph_from_file


def graph_from_spec(spec: str) -> Graph:
    """Build a graph from a spec string like ``hamming:3,2`` or ``file:PATH``."""
    if ":" not in spec:
        raise ConfigError(f"graph spec {spec!r} must look like name:params")
    name, _, params = spec.partition(":")
    name = name.strip().lower()
    if name == "file":
        return graph_from_file(params)
    try:
        nums = [int(x) for x in params.split(",")] if params else []
    except ValueError:
        raise ConfigError(f"non-integer parameters in graph spec {spec!r}") from None
    builders = {
        "hamming": (hamming, 2),
        "hypercube": (lambda D: hamming(D, 2), 1),
        "johnson": (johnson, 2),
        "cycle": (cycle, 1),
        "bilinear": (bilinear_forms, 3),
        "hermitian": (hermitian_forms, 2),
    }
    if name not in builders:
        raise ConfigError(f"unknown graph family {name!r}")
    fn, arity = builders[name]
    if len(nums) != arity:
        raise ConfigError(f"{name} takes {arity} parameters, got {len(nums)}")
    return fn(*nums)
