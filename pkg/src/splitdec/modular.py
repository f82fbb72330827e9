"""Certified multi-modular acceleration for exact linear algebra.

Big eliminations, inverses, and products are computed modulo a deterministic
stream of word-size primes (vectorized int64/float64 arithmetic), recombined
by CRT and rational reconstruction, and then *verified exactly*:

* products use an a-priori entry bound, so the CRT lift is exact by
  construction;
* kernels are certified by ``M @ K == 0`` (an exact, bound-driven product)
  plus a mod-p rank lower bound that pins the kernel dimension;
* inverses are certified by ``M @ X == I``;
* canonical column-echelon bases are certified by their echelon structure
  plus one exact product showing the original columns lie in the new span.

Failures (unlucky primes, reconstruction misses) grow the prime batch and
eventually return ``None`` so callers fall back to the pure fraction-free
engine; every returned object is exact and canonical.

Quadratic fields Q(q), q^2 = b, are handled by evaluating at both square
roots of b mod p, which separates the rational and q-components.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np
from sympy import prevprime
from sympy.ntheory.residue_ntheory import sqrt_mod

from .errors import SingularMatrix

PRIME_CEILING = 2 ** 20  # keeps float64 BLAS products exact for inner dim <= 2048
_MAX_INNER = 2048
_MAX_BATCH = 64


# ---------------------------------------------------------------------------
# primes and reductions
# ---------------------------------------------------------------------------


def _prime_stream(b: int, need_root: bool, avoid: int = 1):
    p = PRIME_CEILING
    while True:
        p = prevprime(p)
        if p < 10_000:
            return
        if avoid % p == 0:
            continue
        if need_root:
            if b % p == 0:
                continue
            root = sqrt_mod(b % p, p)
            if root is None:
                continue
            yield p, int(root)
        else:
            yield p, 0


def _to_i64(obj_arr, p):
    return (obj_arr % p).astype(np.int64)


def _reduce_eval(U, V, den, p, root):
    """(U + root*V)/den mod p as int64 (root evaluation of the q-part)."""
    A = _to_i64(U, p)
    if V is not None and root:
        A = (A + root * _to_i64(V, p)) % p
    if den % p == 0:
        raise ZeroDivisionError("denominator vanishes mod p")
    if den != 1:
        A = (A * pow(den % p, p - 2, p)) % p
    return A


def _matmul_mod(A, B, p):
    n, inner = A.shape
    m = B.shape[1]
    if inner == 0 or n == 0 or m == 0:
        return np.zeros((n, m), dtype=np.int64)
    out = np.zeros((n, m), dtype=np.int64)
    Af = A.astype(np.float64)
    Bf = B.astype(np.float64)
    for lo in range(0, inner, _MAX_INNER):
        hi = min(lo + _MAX_INNER, inner)
        out = (out + np.rint(Af[:, lo:hi] @ Bf[lo:hi, :]).astype(np.int64)) % p
    return out


def _rref_mod(A, p):
    """Reduced row echelon form mod p (in a copy); returns (R, pivots)."""
    A = A % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        s = r + int(nz[0])
        if s != r:
            A[[r, s]] = A[[s, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = (A[r, c:] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            A[nzr, c:] = (A[nzr, c:] - col[nzr, None] * A[r, c:][None, :]) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _kernel_mod(R, pivots, cols, p):
    """Kernel basis mod p (free-row-identity shape) from a reduced form."""
    pivset = set(pivots)
    free = [j for j in range(cols) if j not in pivset]
    K = np.zeros((cols, len(free)), dtype=np.int64)
    for a, f in enumerate(free):
        K[f, a] = 1
        for i, c in enumerate(pivots):
            v = int(R[i, f])
            if v:
                K[c, a] = (-v) % p
    return K, free


# ---------------------------------------------------------------------------
# CRT + rational reconstruction
# ---------------------------------------------------------------------------


class _Crt:
    def __init__(self):
        self.X = None
        self.m = 1

    def add(self, R, p):
        if self.X is None:
            self.X = R.astype(object)
            self.m = int(p)
            return
        inv = pow(self.m % p, p - 2, p)
        cur = (self.X % p).astype(np.int64)
        t = ((R - cur) * inv) % p
        self.X = self.X + self.m * t.astype(object)
        self.m *= int(p)

    def centered(self):
        half = self.m // 2
        return np.where(self.X > half, self.X - self.m, self.X)


def _ratrec(x: int, m: int):
    """Wang rational reconstruction: n/d == x mod m with |n|, d <= sqrt(m/2)."""
    bound = isqrt(m // 2)
    a, b = m, x % m
    p0, p1 = 0, 1
    while b > bound:
        q = a // b
        a, b = b, a - q * b
        p0, p1 = p1, p0 - q * p1
    if p1 == 0:
        return None
    n, d = (b, p1) if p1 > 0 else (-b, -p1)
    if d > bound or gcd(n, d) != 1 or gcd(d, m) != 1:
        return None
    return Fraction(n, d)


def _fractions_from_crt(crt: _Crt, shape):
    """Reconstruct a Fraction array from CRT residues, or None."""
    if crt.X is None:
        return np.zeros(shape, dtype=object) if 0 in shape else None
    m = crt.m
    X = crt.X
    out = np.empty(X.shape, dtype=object)
    den = 1
    half = m // 2
    bound = isqrt(m // 2)
    for idx in np.ndindex(X.shape):
        x = int(X[idx]) % m
        y = (x * den) % m
        if y > half:
            y -= m
        if abs(y) <= bound and den <= bound:
            out[idx] = Fraction(y, den)
            continue
        f = _ratrec(x, m)
        if f is None:
            return None
        out[idx] = f
        den = den * f.denominator // gcd(den, f.denominator)
    return out


# ---------------------------------------------------------------------------
# public operations (all return exact, verified results or None)
# ---------------------------------------------------------------------------


def _maxabs(arr):
    if arr is None or arr.size == 0:
        return 0
    return int(max(abs(int(v)) for v in arr.flat))


def matmul(A, B):
    """Exact product via bound-driven CRT (no reconstruction gamble)."""
    from .matrix import Mat

    field = A.field
    n, inner, m = A.rows, A.cols, B.cols
    if n == 0 or m == 0 or inner == 0:
        return Mat.zeros(field, n, m)
    UA, VA, dA = A.int_rep()
    UB, VB, dB = B.int_rep()
    pair = VA is not None or VB is not None
    b = field.b
    mua, mva = _maxabs(UA), _maxabs(VA)
    mub, mvb = _maxabs(UB), _maxabs(VB)
    bound_u = inner * (mua * mub + abs(b) * mva * mvb)
    bound_v = inner * (mua * mvb + mva * mub)
    target = 2 * max(bound_u, bound_v, 1) + 1
    crt_u, crt_v = _Crt(), _Crt()
    for p, root in _prime_stream(b, pair, avoid=2):
        if pair:
            va = _to_i64(VA, p) if VA is not None else None
            vb = _to_i64(VB, p) if VB is not None else None
            ua, ub = _to_i64(UA, p), _to_i64(UB, p)
            ap = ua if va is None else (ua + root * va) % p
            am = ua if va is None else (ua - root * va) % p
            bp = ub if vb is None else (ub + root * vb) % p
            bm = ub if vb is None else (ub - root * vb) % p
            Pp = _matmul_mod(ap, bp, p)
            Pm = _matmul_mod(am, bm, p)
            inv2 = pow(2, p - 2, p)
            invr = pow((2 * root) % p, p - 2, p)
            crt_u.add(((Pp + Pm) * inv2) % p, p)
            crt_v.add((((Pp - Pm) % p) * invr) % p, p)
        else:
            crt_u.add(_matmul_mod(_to_i64(UA, p), _to_i64(UB, p), p), p)
        if crt_u.m > target:
            break
    else:
        return None
    U = crt_u.centered()
    V = crt_v.centered() if pair else None
    return Mat.from_int_rep(field, U, V, dA * dB)


def _dual_eval_residues(U, V, den, p, root, fn):
    """Apply fn to the +root and -root evaluations; return (u, v) residues."""
    if V is None:
        A = _reduce_eval(U, None, den, p, 0)
        out = fn(A)
        if out is None:
            return None
        return out, None
    Ap = _reduce_eval(U, V, den, p, root)
    Am = _reduce_eval(U, V, den, p, p - root)
    op = fn(Ap)
    om = fn(Am)
    if op is None or om is None:
        return None
    inv2 = pow(2, p - 2, p)
    invr = pow((2 * root) % p, p - 2, p)
    u = ((op + om) * inv2) % p
    v = (((op - om) % p) * invr) % p
    return u, v


def _mat_from_fraction_arrays(field, F0, F1):
    from .matrix import Mat

    rows, cols = F0.shape
    e = []
    for i in range(rows):
        for j in range(cols):
            a1 = F1[i, j] if F1 is not None else 0
            e.append(field.scalar(F0[i, j], a1))
    return Mat(field, rows, cols, e)


def _kernel_core(M):
    """Raw kernel (free-row-identity form) with pivots: (Kraw, pivots) or None.

    Verified: Kraw's free rows are exactly the identity, M @ Kraw == 0, and a
    mod-p rank lower bound certifies the kernel dimension.
    """
    from .matrix import Mat

    field = M.field
    U, V, _den = M.int_rep()
    pair = V is not None
    cols = M.cols

    collected = {}  # pivot pattern -> list of (p, Ku, Kv)
    stream = _prime_stream(field.b, pair, avoid=2)
    batch = 6
    used = 0
    while used < _MAX_BATCH:
        for p, root in stream:
            used += 1

            def run(A, _p=p):
                R, piv = _rref_mod(A, _p)
                return R, tuple(piv)

            if pair:
                Ap = _reduce_eval(U, V, 1, p, root)
                Am = _reduce_eval(U, V, 1, p, p - root)
                R1, piv1 = run(Ap)
                R2, piv2 = run(Am)
                if piv1 != piv2:
                    continue
                K1, _ = _kernel_mod(R1, piv1, cols, p)
                K2, _ = _kernel_mod(R2, piv2, cols, p)
                inv2 = pow(2, p - 2, p)
                invr = pow((2 * root) % p, p - 2, p)
                Ku = ((K1 + K2) * inv2) % p
                Kv = (((K1 - K2) % p) * invr) % p
                collected.setdefault(piv1, []).append((p, Ku, Kv))
            else:
                A = _reduce_eval(U, None, 1, p, 0)
                R1, piv1 = run(A)
                Ku, _ = _kernel_mod(R1, piv1, cols, p)
                collected.setdefault(piv1, []).append((p, Ku, None))
            if used >= batch:
                break
        else:
            return None  # stream exhausted
        if not collected:
            return None
        # true pattern: maximal rank, then lexicographically smallest pivots
        best = sorted(collected, key=lambda piv: (-len(piv), piv))[0]
        group = collected[best]
        crt_u, crt_v = _Crt(), _Crt()
        for p, Ku, Kv in group:
            crt_u.add(Ku, p)
            if Kv is not None:
                crt_v.add(Kv, p)
        k = cols - len(best)
        if k == 0:
            return Mat.zeros(field, cols, 0), best
        F0 = _fractions_from_crt(crt_u, (cols, k))
        F1 = _fractions_from_crt(crt_v, (cols, k)) if pair else None
        if F0 is not None and (not pair or F1 is not None):
            K = _mat_from_fraction_arrays(field, F0, F1)
            if _verify_kernel(M, K, best):
                return K, best
        batch *= 2
    return None


def _verify_kernel(M, K, pivots):
    from .matrix import Mat

    field = M.field
    pivset = set(pivots)
    free = [j for j in range(M.cols) if j not in pivset]
    one, zero = field.one, field.zero
    for a, f in enumerate(free):
        for jj in range(K.cols):
            want = one if jj == a else zero
            if K[f, jj] != want:
                return False
    prod = matmul(M, K)
    return prod is not None and prod.is_zero()


def kernel(M):
    """Canonical (reduced column echelon) kernel basis, exact, or None."""
    core = _kernel_core(M)
    if core is None:
        return None
    Kraw, _pivots = core
    if Kraw.cols == 0:
        return Kraw
    out = _canonical_spanning(Kraw)
    if out is None:
        return None
    return out[0]


def rref(M):
    """(R, rank, pivots): canonical reduced row echelon form, or None."""
    from .matrix import Mat

    core = _kernel_core(M)
    if core is None:
        return None
    Kraw, pivots = core
    field = M.field
    rank = len(pivots)
    pivset = set(pivots)
    free = [j for j in range(M.cols) if j not in pivset]
    e = [field.zero] * (M.rows * M.cols)
    for i, c in enumerate(pivots):
        e[i * M.cols + c] = field.one
        for a, f in enumerate(free):
            v = -Kraw[c, a]
            if f < c and not v.is_zero:
                return None  # not echelon-shaped: pivot guess was wrong
            e[i * M.cols + f] = v
    return Mat(field, M.rows, M.cols, e), rank, tuple(pivots)


def _canonical_spanning(S):
    """Canonical column-space basis of S: (B, pivot_rows), exact, or None."""
    from .matrix import inverse as mat_inverse

    field = S.field
    if S.cols == 0:
        return S, ()
    U, V, den = S.int_rep()
    pair = V is not None
    tries = 0
    for p, root in _prime_stream(field.b, pair, avoid=2):
        if den % p == 0:
            continue
        tries += 1
        if tries > 10:
            return None
        A = _reduce_eval(U, V, den, p, root)
        _, colpiv = _rref_mod(A, p)
        _, rowpiv = _rref_mod(A[:, colpiv].T.copy(), p)
        if len(rowpiv) != len(colpiv):
            continue
        S1 = S.take_cols(colpiv)
        G = S1.take_rows(rowpiv)
        try:
            Ginv = mat_inverse(G)
        except SingularMatrix:
            continue
        B = S1 @ Ginv
        ok = True
        for a, pr in enumerate(rowpiv):
            for r in range(pr):
                if not B[r, a].is_zero:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        coords = S.take_rows(rowpiv)
        prod = B @ coords
        if prod == S:
            return B, tuple(rowpiv)
    return None


def rcef(M):
    return _canonical_spanning(M)


def _solve_core(M, rhs_reducer, rhs_width, check, extra_pair=False):
    """Shared engine for inverse/solve: per-prime Gauss-Jordan on [A | rhs],
    CRT + reconstruction, exact verification via `check`."""
    field = M.field
    n = M.rows
    U, V, den = M.int_rep()
    pair = V is not None or extra_pair

    def sol_mod(A, rhs, p):
        R, piv = _rref_mod(np.hstack([A, rhs]), p)
        if len(piv) < n or any(c >= n for c in piv[:n]):
            return None
        return R[:n, n:]

    residues = []
    stream = _prime_stream(field.b, pair, avoid=2)
    batch = 6
    used = 0
    singular_seen = 0
    while used < _MAX_BATCH:
        for p, root in stream:
            if den % p == 0:
                continue
            used += 1
            try:
                rp, rm = rhs_reducer(p, root)
            except ZeroDivisionError:
                continue
            if pair:
                Ap = _reduce_eval(U, V, den, p, root)
                Am = _reduce_eval(U, V, den, p, p - root)
                op = sol_mod(Ap, rp, p)
                om = sol_mod(Am, rm, p)
                if op is None or om is None:
                    out = None
                else:
                    inv2 = pow(2, p - 2, p)
                    invr = pow((2 * root) % p, p - 2, p)
                    out = (((op + om) * inv2) % p, (((op - om) % p) * invr) % p)
            else:
                A = _reduce_eval(U, None, den, p, 0)
                op = sol_mod(A, rp, p)
                out = None if op is None else (op, None)
            if out is None:
                singular_seen += 1
                if singular_seen >= 3:
                    K = kernel(M)
                    if K is not None and K.cols > 0:
                        raise SingularMatrix(f"kernel has dimension {K.cols}")
                    if K is not None:
                        singular_seen = 0  # certified nonsingular; bad primes
                continue
            residues.append((p, out[0], out[1]))
            if used >= batch:
                break
        else:
            return None
        crt_u, crt_v = _Crt(), _Crt()
        for p, u, v in residues:
            crt_u.add(u, p)
            if v is not None:
                crt_v.add(v, p)
        if crt_u.X is not None:
            F0 = _fractions_from_crt(crt_u, (n, rhs_width))
            F1 = _fractions_from_crt(crt_v, (n, rhs_width)) if pair and crt_v.X is not None else None
            if F0 is not None and (not pair or F1 is not None):
                X = _mat_from_fraction_arrays(field, F0, F1)
                if check(X):
                    return X
        batch *= 2
    return None


def inverse(M):
    """Exact inverse (verified M @ X == I), raises SingularMatrix when the
    kernel is certified nonzero, returns None to request pure fallback."""
    from .matrix import Mat

    field = M.field
    n = M.rows
    if n == 0:
        return Mat.identity(field, 0)
    ident_res = np.eye(n, dtype=np.int64)
    ident = Mat.identity(field, n)

    def rhs_reducer(p, root):
        return ident_res, ident_res

    def check(X):
        prod = matmul(M, X)
        return prod is not None and prod == ident

    return _solve_core(M, rhs_reducer, n, check)


def solve(M, B):
    """Exact solution X of M X = B (verified), or None for pure fallback."""
    from .matrix import Mat

    field = M.field
    n = M.rows
    if n == 0 or B.cols == 0:
        return Mat.zeros(field, n, B.cols)
    UB, VB, denB = B.int_rep()

    def rhs_reducer(p, root):
        rp = _reduce_eval(UB, VB, denB, p, root)
        rm = _reduce_eval(UB, VB, denB, p, p - root) if VB is not None else rp
        return rp, rm

    def check(X):
        prod = matmul(M, X)
        return prod is not None and prod == B

    return _solve_core(M, rhs_reducer, B.cols, check, extra_pair=VB is not None)
