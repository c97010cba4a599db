"""Exact linear algebra over Q, accelerated by arithmetic modulo word-size primes.

Modular results are only ever used as guesses or as one-sided bounds:

* rows that are independent modulo p are independent over Q, so a modular
  rank is a lower bound for the rational rank;
* every rational answer (solutions, reduced echelon forms, membership in a
  span) is confirmed by an integer identity that is checked modulo enough
  primes to exceed an explicit bound on its entries.

Modular matrix products run in float64 BLAS.  With primes below 2**21 and the
inner dimension chunked to 2048, every partial sum stays below 2**53 and is
therefore exact.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

PRIMES: tuple[int, ...] = (
    2097143, 2097133, 2097131, 2097097, 2097091, 2097083, 2097047, 2097041,
    2097031, 2097023, 2097013, 2096993, 2096987, 2096971, 2096959, 2096957,
    2096947, 2096923, 2096911, 2096909, 2096893, 2096881, 2096873, 2096867,
    2096851, 2096837, 2096807, 2096791, 2096789, 2096777, 2096761, 2096741,
    2096737, 2096713, 2096693, 2096687, 2096681, 2096639, 2096629, 2096621,
)
P0 = PRIMES[0]
_CHUNK = 2048
_INT64_SAFE = 2 ** 62


class ExactnessError(RuntimeError):
    """Raised when exact certification fails with every available prime."""


def fmod_p(x: np.ndarray, p: int) -> np.ndarray:
    """x mod p for integral float64 arrays with |x| < 2**52."""
    y = x - np.floor(x * (1.0 / p)) * p
    y[y < 0] += p
    y[y >= p] -= p
    return y


def as_residues(a, p: int) -> np.ndarray:
    """Reduce an integer array (int64 or object) modulo p into float64."""
    a = np.asarray(a)
    if a.dtype == object:
        return np.mod(a, p).astype(np.float64)
    return np.mod(a, p).astype(np.float64)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two residue matrices (float64 entries in [0, p))."""
    k = a.shape[1]
    if k <= _CHUNK:
        return fmod_p(a @ b, p)
    out = np.zeros((a.shape[0], b.shape[1]))
    for s in range(0, k, _CHUNK):
        out += fmod_p(a[:, s:s + _CHUNK] @ b[s:s + _CHUNK], p)
    return fmod_p(out, p)


def _rref_small(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r, c:] = fmod_p(a[r, c:] * inv, p)
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = fmod_p(a[hit, c:] - np.outer(col[hit], a[r, c:]), p)
        pivots.append(c)
        r += 1
    return a[:r], pivots


_PANEL = 64


def rref_mod(a: np.ndarray, p: int, copy: bool = True) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a residue matrix; returns (nonzero rows, pivots)."""
    a = np.array(a, dtype=np.float64, copy=copy)
    if a.shape[0] <= _PANEL:
        return _rref_small(a, p)
    span = ModSpan(a.shape[1], p)
    span.add_residues(a)
    order = np.argsort(span.pivots, kind="stable")
    return span.basis[order], [span.pivots[i] for i in order]


def rank_mod(a, p: int = P0) -> int:
    a = as_residues(a, p)
    if a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref_mod(a, p, copy=False)[1])


def independent_rows_mod(a: np.ndarray, p: int, seed: int = 0) -> list[int]:
    """Greedy subset of rows independent modulo p (hence over Q).

    Rows are first compressed by a random sketch, so the subset may be short
    of a full basis; callers reduce the remaining rows and try again.
    """
    n, m = a.shape
    if n == 0:
        return []
    if m > n + 16:
        rng = np.random.default_rng(seed)
        sketch = rng.integers(0, p, size=(m, n + 16)).astype(np.float64)
        a = matmul_mod(a, sketch, p)
    return rref_mod(a.T, p, copy=True)[1]


class ModSpan:
    """Incrementally maintained row space modulo p, kept in reduced echelon form."""

    def __init__(self, ncols: int, p: int = P0):
        self.p = p
        self.ncols = ncols
        self.basis = np.zeros((0, ncols))
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, x: np.ndarray) -> np.ndarray:
        if not self.pivots:
            return x
        return fmod_p(x - matmul_mod(x[:, self.pivots], self.basis, self.p), self.p)

    def _merge(self, y: np.ndarray) -> None:
        if y.shape[0] > _PANEL:
            for s in range(0, y.shape[0], _PANEL):
                self._merge(self.reduce(y[s:s + _PANEL]))
            return
        new, piv = _rref_small(y, self.p)
        if not piv:
            return
        if self.pivots:
            self.basis = fmod_p(self.basis - matmul_mod(self.basis[:, piv], new, self.p), self.p)
        self.basis = np.vstack([self.basis, new])
        self.pivots = self.pivots + piv

    def add_residues(self, x: np.ndarray) -> None:
        for s in range(0, x.shape[0], _PANEL):
            blk = self.reduce(x[s:s + _PANEL])
            live = np.flatnonzero(blk.any(axis=1))
            if live.size:
                self._merge(blk[live])

    def add(self, x, select: bool = False, stop_at: int | None = None) -> list[int]:
        """Insert the rows of x.  With select=True, return indices of rows that
        enlarged the span (a genuine basis extension, in input order)."""
        x = as_residues(x, self.p)
        if x.shape[0] == 0:
            return []
        if not select:
            self.add_residues(x)
            return []
        x = self.reduce(x)
        chosen: list[int] = []
        live = np.flatnonzero(x.any(axis=1))
        seed = 0
        while live.size and (stop_at is None or self.rank < stop_at):
            sel = [int(live[i]) for i in independent_rows_mod(x[live], self.p, seed)]
            seed += 1
            if stop_at is not None:
                sel = sel[: stop_at - self.rank]
            self._merge(x[sel].copy())
            chosen.extend(sel)
            rest = np.setdiff1d(live, sel)
            if rest.size == 0:
                break
            x[rest] = self.reduce(x[rest])
            live = rest[x[rest].any(axis=1)]
        return sorted(chosen)


def crt_pair(r1, m1: int, r2, m2: int):
    """Combine residue arrays r1 mod m1 and r2 mod m2 (coprime moduli)."""
    inv = pow(m1, -1, m2)
    big = m1 * m2 >= _INT64_SAFE
    if big:
        r1 = np.asarray(r1, dtype=object)
        r2 = np.asarray(r2, dtype=object)
    else:
        r1 = np.asarray(r1, dtype=np.int64)
        r2 = np.asarray(r2, dtype=np.int64)
    t = np.mod((r2 - r1) % m2 * inv, m2)
    return r1 + m1 * t, m1 * m2


def _ratrecon_scalar(a: int, m: int, bound: int) -> tuple[int, int] | None:
    r0, r1, t0, t1 = m, a, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    if math.gcd(r1, t1) != 1:
        return None
    return r1, t1


def rational_reconstruct(res, m: int) -> tuple[np.ndarray, np.ndarray] | None:
    """Recover fractions n/d from residues modulo m, with |n|, d <= sqrt(m/2).

    Returns (numerators, denominators) arrays, or None if any entry fails.
    """
    bound = math.isqrt(m // 2)
    res = np.asarray(res)
    if m < _INT64_SAFE:
        a = res.astype(np.int64).ravel()
        r0 = np.full(a.shape, m, dtype=np.int64)
        r1 = a.copy()
        t0 = np.zeros_like(a)
        t1 = np.ones_like(a)
        act = r1 > bound
        while act.any():
            idx = np.flatnonzero(act)
            q = r0[idx] // r1[idx]
            nr = r0[idx] - q * r1[idx]
            nt = t0[idx] - q * t1[idx]
            r0[idx], t0[idx] = r1[idx], t1[idx]
            r1[idx], t1[idx] = nr, nt
            act[idx] = nr > bound
        if np.any(t1 == 0) or np.any(np.abs(t1) > bound):
            return None
        neg = t1 < 0
        r1[neg] = -r1[neg]
        t1[neg] = -t1[neg]
        if np.any(np.gcd(r1, t1) != 1):
            return None
        return r1.reshape(res.shape), t1.reshape(res.shape)
    flat = [int(v) for v in res.ravel()]
    nums, dens = [], []
    for v in flat:
        got = _ratrecon_scalar(v, m, bound)
        if got is None:
            return None
        nums.append(got[0])
        dens.append(got[1])
    return (np.array(nums, dtype=object).reshape(res.shape),
            np.array(dens, dtype=object).reshape(res.shape))


def max_abs(a) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.ravel())
    return int(np.abs(a).max())


def _shrink(a: np.ndarray) -> np.ndarray:
    """Use int64 storage when every entry is small enough."""
    if a.dtype == object and (a.size == 0 or max_abs(a) < _INT64_SAFE):
        return a.astype(np.int64)
    return a


def products_agree(a, b, c, scale: int = 1) -> bool:
    """Exactly decide whether a @ b == scale * c for integer matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    c = np.asarray(c)
    inner = a.shape[1] if a.ndim == 2 else 1
    bound = max_abs(a) * max_abs(b) * max(inner, 1) + abs(scale) * max_abs(c)
    modulus = 1
    for p in PRIMES:
        lhs = matmul_mod(as_residues(a, p), as_residues(b, p), p)
        rhs = fmod_p(as_residues(c, p) * (scale % p), p)
        if not np.array_equal(lhs, rhs):
            return False
        modulus *= p
        if modulus > 2 * bound:
            return True
    raise ExactnessError("bound exceeds the prime table")


def solve_exact(g, b) -> tuple[np.ndarray, int]:
    """Solve g @ x = b for a nonsingular integer matrix g.

    Returns (x_num, den) with g @ x_num == den * b exactly.
    """
    g = np.asarray(g)
    b = np.asarray(b)
    n = g.shape[0]
    if n == 0:
        return np.zeros((0, b.shape[1]), dtype=np.int64), 1
    acc = None
    modulus = 1
    for p in PRIMES:
        aug = np.hstack([as_residues(g, p), as_residues(b, p)])
        red, piv = rref_mod(aug, p, copy=False)
        if piv[:n] != list(range(n)) or len(piv) < n:
            continue
        xp = red[:n, n:].astype(np.int64)
        if acc is None:
            acc, modulus = xp, p
        else:
            acc, modulus = crt_pair(acc, modulus, xp, p)
        rec = rational_reconstruct(acc, modulus)
        if rec is None:
            continue
        num, den = rec
        lcm = 1
        for d in set(int(v) for v in np.unique(den.astype(object) if den.dtype == object else den)):
            lcm = lcm * d // math.gcd(lcm, d)
        scaled = num.astype(object) * (lcm // den.astype(object))
        scaled = _shrink(scaled)
        if products_agree(g, scaled, b, lcm):
            return scaled, lcm
    raise ExactnessError("no prime certified the solution")


def exact_rref(a, p: int = P0) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Reduced row echelon form of an integer matrix over Q.

    Returns (num, den, pivots): row i of the echelon form is num[i] / den[i].
    The result is certified by checking that every input row lies in the span
    of the returned rows, whose count equals a proven lower bound on the rank.
    """
    a = np.asarray(a)
    n, m = a.shape
    for q in [p] + [x for x in PRIMES if x != p]:
        res = as_residues(a, q)
        _, piv = rref_mod(res, q)
        k = len(piv)
        if k == 0:
            if max_abs(a) == 0:
                return np.zeros((0, m), dtype=np.int64), np.zeros(0, dtype=np.int64), []
            continue
        rows = rref_mod(res[:, piv].T, q)[1]
        sub = a[rows]
        x, den = solve_exact(sub[:, piv], sub)
        if not products_agree(a[:, piv], x, a, den):
            continue
        return _normalize_rows(x, den) + (piv,)
    raise ExactnessError("no prime certified the echelon form")


def _normalize_rows(x: np.ndarray, den: int) -> tuple[np.ndarray, np.ndarray]:
    """Split a common-denominator matrix into per-row reduced numerators."""
    num = np.asarray(x, dtype=object)
    rows = []
    dens = []
    for row in num:
        g = den
        for v in row:
            if v:
                g = math.gcd(g, int(v))
        rows.append([int(v) // g for v in row])
        dens.append(den // g)
    out = np.array(rows, dtype=object).reshape(num.shape)
    return _shrink(out), _shrink(np.array(dens, dtype=object))


def exact_rank(a) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(exact_rref(a)[2])


def in_row_span(num, den, pivots, rows) -> np.ndarray:
    """Boolean mask: which integer rows lie in the span of an exact RREF."""
    rows = np.asarray(rows)
    out = np.zeros(rows.shape[0], dtype=bool)
    if rows.shape[0] == 0:
        return out
    lcm = 1
    for d in np.asarray(den, dtype=object):
        lcm = lcm * int(d) // math.gcd(lcm, int(d))
    scaled = _shrink(np.asarray(num, dtype=object) * np.array([lcm // int(d) for d in den], dtype=object)[:, None]) \
        if len(pivots) else np.zeros((0, rows.shape[1]), dtype=np.int64)
    for i in range(rows.shape[0]):
        r = rows[i:i + 1]
        if len(pivots) == 0:
            out[i] = max_abs(r) == 0
        else:
            out[i] = products_agree(r[:, pivots], scaled, r, lcm)
    return out


def fraction_rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Plain Fraction Gauss-Jordan elimination, used for small matrices."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Right nullspace basis of a small rational matrix."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, piv = fraction_rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def integer_row(values: Iterable) -> list[int]:
    """Scale a rational vector to a primitive integer vector with the same span."""
    vals = [Fraction(v) for v in values]
    lcm = 1
    for v in vals:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in vals]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints
