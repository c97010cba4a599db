"""Multilinear identities of a finite-dimensional algebra and consequences of generator sets.

A multilinear polynomial vanishes on the algebra exactly when it vanishes on
every tuple of component-basis elements.  Evaluating all words of a
signature on all such tuples gives the evaluation matrix; identities form its
left kernel.

The full matrix has one column block per tuple and quickly becomes too wide,
so the column space is computed from one tuple per orbit of the renaming
group (tuples up to reordering same-kind variables), closed under a
generating set of that group, and then certified exactly.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebra import AlgebraSpec, Element, homogeneous_basis
from .free import Kind, Mode, Polynomial, Variable, format_polynomial, star_poly
from .linalg import (P0, PRIMES, ExactnessError, ModSpan, as_residues, exact_rref, in_row_span,
                     independent_rows_mod, max_abs, products_agree, solve_exact)
from .multilinear import MultilinearBasis, Signature, check_cap, signatures

_INT_LIMIT = 2 ** 62


class DecorationError(ValueError):
    """The algebra lacks the grading or involution that a mode requires."""


class GeneratorNotIdentity(ValueError):
    def __init__(self, generator: Polynomial, witness: dict):
        self.generator = generator
        self.witness = witness
        shown = {repr(v): list(map(str, e.coeffs)) for v, e in witness.items()}
        super().__init__("generator %s is not an identity; nonzero at %s" % (generator, shown))


def default_mode(spec: AlgebraSpec) -> Mode:
    graded = spec.grading is not None and any(spec.grading)
    if spec.involution is not None:
        return Mode.GRADED_INVOLUTION if graded else Mode.INVOLUTION
    return Mode.GRADED if graded else Mode.UNGRADED


def component_basis(spec: AlgebraSpec, kind: Kind, mode: Mode) -> list[Element]:
    """Basis of the component that variables of this kind range over."""
    if kind not in mode.kinds:
        raise DecorationError("kind %s is not used in %s mode" % (kind.name, mode.value))
    if mode.uses_grading and spec.grading is None:
        raise DecorationError("%s mode needs a graded algebra" % mode.value)
    if mode.uses_involution and spec.involution is None:
        raise DecorationError("%s mode needs an algebra with involution" % mode.value)
    degree = int(kind.odd) if mode.uses_grading else None
    sign = ("-" if kind.skew else "+") if mode.uses_involution else None
    return homogeneous_basis(spec, degree, sign)


def _int_vectors(elems: Sequence[Element], dim: int | None = None) -> tuple[np.ndarray, int]:
    dim = len(elems[0].coeffs) if elems else (dim or 0)
    den = 1
    for e in elems:
        for c in e.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
    rows = [[int(c * den) for c in e.coeffs] for e in elems]
    return np.array(rows, dtype=np.int64).reshape(len(elems), dim), den


class _Evaluator:
    """Integer evaluation of words on the algebra (structure constants scaled to integers)."""

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        c, self.scale = spec.integer_constants
        self.c = np.asarray(c)
        self.cmax = max(max_abs(self.c), 1)

    def right_mult(self, vecs: np.ndarray) -> np.ndarray:
        """Matrices of right multiplication by each row vector: R[v] with x @ R[v] = x * v."""
        if vecs.dtype == object or self.c.dtype == object:
            return np.einsum("vk,ikl->vil", vecs.astype(object), self.c.astype(object))
        return np.einsum("vk,ikl->vil", vecs, self.c)

    def words(self, words: np.ndarray, vecs: np.ndarray) -> np.ndarray:
        """Evaluate each row of words (ids into vecs) to a coordinate vector.

        vecs has shape (n_vars, dim) or (points, n_vars, dim) for batched
        evaluation; the result has shape (rows, dim) or (points, rows, dim).
        """
        batched = vecs.ndim == 3
        if not batched:
            vecs = vecs[None]
        pts, nv, dim = vecs.shape
        L = words.shape[1]
        bound = max(max_abs(vecs), 1) ** L * (self.cmax * dim * dim) ** max(L - 1, 0)
        if bound >= _INT_LIMIT:
            vecs = vecs.astype(object)
        rm = np.stack([self.right_mult(vecs[p]) for p in range(pts)])  # (pts, nv, dim, dim)
        out = vecs[:, words[:, 0], :]
        for j in range(1, L):
            out = np.einsum("pri,prij->prj", out, rm[:, words[:, j]])
        return out if batched else out[0]


# ---------------------------------------------------------------- column space

@dataclass
class ColumnSpace:
    """A certified basis of the column space of the evaluation matrix.

    columns: integer matrix (words x rank); every column of the full
    evaluation matrix is a rational combination of these, and they are
    independent.  pivot_rows index rows on which the columns are already
    independent.  tuples[j] records which component-basis tuple and which
    coordinate produced column j.
    """

    basis: MultilinearBasis
    columns: np.ndarray
    pivot_rows: list[int]
    tuples: list[tuple[tuple[int, ...], int]]

    @property
    def rank(self) -> int:
        return self.columns.shape[1]

    def image(self, vecs) -> np.ndarray:
        """Quotient coordinates: rows of vecs times the column basis (exact integers)."""
        vecs = np.asarray(vecs)
        if vecs.dtype != object and self.rank and max_abs(vecs) * max_abs(self.columns) * vecs.shape[-1] < _INT_LIMIT:
            return vecs @ self.columns
        return vecs.astype(object) @ self.columns.astype(object)

    def vanishes(self, vecs) -> np.ndarray:
        vecs = np.atleast_2d(np.asarray(vecs))
        if self.rank == 0:
            return np.ones(vecs.shape[0], dtype=bool)
        out = np.zeros(vecs.shape[0], dtype=bool)
        zero = np.zeros((1, self.rank), dtype=np.int64)
        for i in range(vecs.shape[0]):
            out[i] = products_agree(vecs[i:i + 1], self.columns, zero)
        return out


def _orbit_representatives(sizes: list[int], groups: list[list[int]], n: int) -> list[tuple[int, ...]]:
    """One tuple of basis indices per orbit: sorted choices within each kind group."""
    per_group = [list(itertools.combinations_with_replacement(range(sizes[g[0]]), len(g))) for g in groups]
    reps = []
    for choice in itertools.product(*per_group):
        t = [0] * n
        for g, vals in zip(groups, choice):
            for var, val in zip(g, vals):
                t[var] = val
        reps.append(tuple(t))
    return reps


@lru_cache(maxsize=64)
def _column_space_cached(spec: AlgebraSpec, signature: Signature) -> ColumnSpace:
    return _compute_column_space(spec, signature)


def column_space(spec: AlgebraSpec, signature: Signature) -> ColumnSpace:
    return _column_space_cached(spec, signature)


def _component_vectors(spec: AlgebraSpec, basis: MultilinearBasis) -> list[np.ndarray]:
    mode = basis.signature.mode
    out = []
    for v in basis.variables:
        vecs, _ = _int_vectors(component_basis(spec, v.kind, mode), spec.dim)
        out.append(vecs)
    return out


def _compute_column_space(spec: AlgebraSpec, signature: Signature) -> ColumnSpace:
    basis = MultilinearBasis(signature)
    n, N, dim = basis.n, basis.size, spec.dim
    comp = _component_vectors(spec, basis)
    if n == 0 or any(len(c) == 0 for c in comp):
        return ColumnSpace(basis, np.zeros((N, 0), dtype=np.int64), [], [])
    ev = _Evaluator(spec)
    groups = basis.kind_groups()
    reps = _orbit_representatives([len(c) for c in comp], groups, n)
    blocks, labels = [], []
    for t in reps:
        vecs = np.stack([comp[v][t[v]] for v in range(n)])
        blocks.append(ev.words(basis.words, vecs))
        labels.extend((t, k) for k in range(dim))
    rep_cols = np.concatenate(blocks, axis=1)
    if rep_cols.dtype == object:
        rep_cols = _maybe_int(rep_cols)
    live = np.flatnonzero(np.any(rep_cols != 0, axis=0))
    rep_cols, labels = rep_cols[:, live], [labels[i] for i in live]
    if rep_cols.shape[1] == 0:
        return ColumnSpace(basis, np.zeros((N, 0), dtype=np.int64), [], [])
    _, first = np.unique(rep_cols.T, axis=0, return_index=True)
    first = np.sort(first)
    rep_cols, labels = rep_cols[:, first], [labels[i] for i in first]

    gens = basis.group_generators()
    gen_maps = [_perm_to_mapping(basis, g) for g in gens]
    for p in PRIMES:
        span = ModSpan(N, p)
        chosen = span.add(rep_cols.T, select=True)
        cols = [rep_cols[:, i] for i in chosen]
        tags = [labels[i] for i in chosen]
        frontier = list(range(len(cols)))
        while frontier and gens:
            cand, cand_tags = [], []
            for j in frontier:
                for g, mp in zip(gens, gen_maps):
                    cand.append(cols[j][g])
                    t, k = tags[j]
                    cand_tags.append((tuple(t[mp[v]] for v in range(n)), k))
            cand_mat = np.stack(cand)
            new = span.add(cand_mat.T if False else cand_mat, select=True)
            frontier = []
            for i in new:
                frontier.append(len(cols))
                cols.append(cand_mat[i])
                tags.append(cand_tags[i])
        B = np.stack(cols, axis=1)
        piv = independent_rows_mod(as_residues(B, p), p)
        if len(piv) != B.shape[1]:
            continue
        tests = [rep_cols] + [B[g, :] for g in gens]
        T = np.concatenate(tests, axis=1)
        if _in_column_span(B, piv, T):
            return ColumnSpace(basis, B, sorted(piv), tags)
    raise ExactnessError("column space certification failed for %s" % (signature,))


def _perm_to_mapping(basis: MultilinearBasis, perm: np.ndarray) -> list[int]:
    """Recover the variable renaming j -> mapping[j] behind a word permutation."""
    # the identity word 0..n-1 is sent to the word mapping[0..n-1]
    return [int(x) for x in basis.words[perm[0]]]


def _in_column_span(B: np.ndarray, piv: list[int], T: np.ndarray) -> bool:
    G = B[piv, :]
    try:
        x, den = solve_exact(G, T[piv, :])
    except ExactnessError:
        return False
    return products_agree(B, x, T, den)


def _maybe_int(a: np.ndarray) -> np.ndarray:
    if a.size == 0 or max_abs(a) < _INT_LIMIT:
        return a.astype(np.int64)
    return a


def evaluation_matrix(spec: AlgebraSpec, signature: Signature) -> np.ndarray:
    """Full evaluation matrix: one row per word, one column per (tuple, coordinate).

    Tuples run over the product of component bases in lexicographic order.
    Entries are integers when the structure constants are; otherwise Fractions.
    """
    basis = MultilinearBasis(signature)
    comp = _component_vectors(spec, basis)
    ev = _Evaluator(spec)
    if basis.n == 0 or any(len(c) == 0 for c in comp):
        return np.zeros((basis.size, 0), dtype=np.int64)
    blocks = []
    for t in itertools.product(*[range(len(c)) for c in comp]):
        vecs = np.stack([comp[v][t[v]] for v in range(basis.n)])
        blocks.append(ev.words(basis.words, vecs))
    out = np.concatenate(blocks, axis=1)
    if ev.scale != 1:
        out = np.vectorize(lambda x: Fraction(int(x), ev.scale ** (basis.n - 1)), otypes=[object])(out)
    return out


# ---------------------------------------------------------------- subspaces

class SubspaceBasis:
    """Reduced row echelon basis of a subspace of a multilinear space.

    Rows are rational vectors in word coordinates, given as integer rows with
    one denominator each.  A kernel-backed instance computes its rows lazily
    from the complementary evaluation image.
    """

    def __init__(self, ambient: MultilinearBasis, num=None, den=None, pivots=None,
                 kernel_of: ColumnSpace | None = None):
        self.ambient = ambient
        self._num = num
        self._den = den
        self._pivots = pivots
        self._kernel_of = kernel_of
        if kernel_of is not None:
            self.dim = ambient.size - kernel_of.rank
        else:
            self.dim = 0 if num is None else int(np.asarray(num).shape[0])

    def _materialize(self) -> None:
        if self._num is not None:
            return
        cs = self._kernel_of
        N = self.ambient.size
        if cs.rank == 0:
            self._num = np.eye(N, dtype=np.int64)
            self._den = np.ones(N, dtype=np.int64)
            self._pivots = list(range(N))
            return
        # echelonize with reversed word order; the kernel rows it yields are
        # then in reduced echelon form for the natural order
        a = np.ascontiguousarray(cs.columns.T[:, ::-1])
        num, den, piv = exact_rref(a)
        piv_set = set(piv)
        free = [j for j in range(N) if j not in piv_set]
        rows, dens, leads = [], [], []
        for j in sorted(free, key=lambda j: N - 1 - j):
            row = [0] * N
            lcm = 1
            for i in range(len(piv)):
                lcm = lcm * int(den[i]) // math.gcd(lcm, int(den[i])) if num[i, j] else lcm
            row[N - 1 - j] = lcm
            for i, pc in enumerate(piv):
                if num[i, j]:
                    row[N - 1 - pc] = -int(num[i, j]) * (lcm // int(den[i]))
            rows.append(row)
            dens.append(lcm)
            leads.append(N - 1 - j)
        self._num = _maybe_int(np.array(rows, dtype=object).reshape(len(rows), N))
        self._den = np.array(dens, dtype=object)
        self._pivots = leads

    @property
    def pivots(self) -> list[int]:
        self._materialize()
        return list(self._pivots)

    def rows(self) -> tuple[np.ndarray, np.ndarray]:
        """(num, den): row i equals num[i] / den[i]."""
        self._materialize()
        return self._num, self._den

    def polynomials(self) -> list[Polynomial]:
        num, den = self.rows()
        return [self.ambient.polynomial(num[i], int(den[i])) for i in range(self.dim)]

    def contains(self, p: Polynomial) -> bool:
        vec, _ = self.ambient.coordinates(p)
        if self._kernel_of is not None:
            return bool(self._kernel_of.vanishes(vec)[0])
        if self.dim == 0:
            return not vec.any()
        return bool(in_row_span(self._num, self._den, self._pivots, vec[None])[0])

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return "SubspaceBasis(signature=%s, dim=%d of %d)" % (self.ambient.signature, self.dim, self.ambient.size)


def identity_space(spec: AlgebraSpec, signature: Signature) -> SubspaceBasis:
    cs = column_space(spec, signature)
    return SubspaceBasis(cs.basis, kernel_of=cs)


def quotient_dim(spec: AlgebraSpec, signature: Signature) -> int:
    return column_space(spec, signature).rank


# ---------------------------------------------------------------- identity test

@dataclass
class IdentityCheck:
    holds: bool
    witness: dict | None = None
    value: Element | None = None

    def __bool__(self) -> bool:
        return self.holds


_GRID_LIMIT = 400_000


def is_identity(spec: AlgebraSpec, p: Polynomial, mode: Mode | None = None) -> IdentityCheck:
    """Decide exactly whether p vanishes on the algebra.

    Multilinear p is tested on all tuples of component-basis elements.  For
    other p, each variable of degree d ranges over integer coefficient
    vectors in {0..d}^k of its component; a polynomial of degree at most d in
    each coordinate that vanishes on such a grid is zero.  A failing check
    returns the first nonvanishing substitution.
    """
    mode = default_mode(spec) if mode is None else mode
    if p.is_zero():
        return IdentityCheck(True)
    vs = p.variables()
    for v in vs:
        if v.kind not in mode.kinds:
            raise DecorationError("variable %r does not fit %s mode" % (v, mode.value))
    comps = {v: component_basis(spec, v.kind, mode) for v in vs}
    if any(not comps[v] for v in vs):
        return IdentityCheck(True)
    degs = {v: max(m.count(v) for m in p.terms) for v in vs}
    multilinear = p.is_multilinear()
    if multilinear:
        points_per_var = {v: [tuple(int(i == j) for i in range(len(comps[v]))) for j in range(len(comps[v]))]
                          for v in vs}
    else:
        points_per_var = {v: list(itertools.product(range(degs[v] + 1), repeat=len(comps[v]))) for v in vs}
    total = math.prod(len(points_per_var[v]) for v in vs)
    if multilinear and total * len(p.terms) > _GRID_LIMIT * 8:
        return _is_identity_via_columns(spec, p, mode)
    if total > _GRID_LIMIT:
        raise ValueError("substitution grid of %d points is too large" % total)
    return _grid_check(spec, p, vs, comps, points_per_var)


def _grid_check(spec, p, vs, comps, points_per_var) -> IdentityCheck:
    ev = _Evaluator(spec)
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    elem_vecs = []
    for v in vs:
        basis_int, _ = _int_vectors(comps[v])
        coeffs = np.array(points_per_var[v], dtype=np.int64)
        elem_vecs.append(coeffs @ basis_int)
    pts = list(itertools.product(*[range(len(points_per_var[v])) for v in vs]))
    vid = {v: i for i, v in enumerate(vs)}
    chunk = 4096
    for s in range(0, len(pts), chunk):
        idx = np.array(pts[s:s + chunk], dtype=np.int64).reshape(-1, len(vs))
        vecs = np.stack([elem_vecs[i][idx[:, i]] for i in range(len(vs))], axis=1)  # (pts, nv, dim)
        acc = None
        by_len: dict[int, list] = {}
        for m, c in p.terms.items():
            by_len.setdefault(len(m), []).append((m, int(c * den)))
        for L, items in by_len.items():
            words = np.array([[vid[x] for x in m] for m, _ in items], dtype=np.int64).reshape(len(items), L)
            coef = np.array([c for _, c in items], dtype=object if max(abs(c) for _, c in items) > 2 ** 20 else np.int64)
            if L == 0:
                val = np.zeros((vecs.shape[0], spec.dim), dtype=np.int64)
                unit = spec.unit
                if unit is None:
                    raise ValueError("constant term needs a unital algebra")
                uvec, uden = _int_vectors([Element(unit)])
                val = val + int(coef.sum()) * uvec[0]
            else:
                vals = ev.words(words, vecs)  # (pts, terms, dim)
                if vals.dtype == object or coef.dtype == object:
                    val = np.einsum("ptk,t->pk", vals.astype(object), coef.astype(object))
                else:
                    val = np.einsum("ptk,t->pk", vals, coef)
            acc = val if acc is None else acc + val
        bad = np.flatnonzero(np.any(acc != 0, axis=1))
        if bad.size:
            i = int(bad[0])
            witness = {}
            for k, v in enumerate(vs):
                coeffs = points_per_var[v][idx[i, k]]
                e = [Fraction(0)] * spec.dim
                for cf, b in zip(coeffs, comps[v]):
                    for d_ in range(spec.dim):
                        e[d_] += cf * b.coeffs[d_]
                witness[v] = Element(tuple(e))
            value = Element(tuple(Fraction(int(x), den * ev.scale ** max(p.degree() - 1, 0)) for x in acc[i]))
            return IdentityCheck(False, witness, value)
    return IdentityCheck(True)


def _is_identity_via_columns(spec, p, mode) -> IdentityCheck:
    sig = Signature.of(p, mode)
    cs = column_space(spec, sig)
    vec, _ = cs.basis.coordinates(p)
    if cs.rank == 0:
        return IdentityCheck(True)
    img = cs.image(vec[None])[0]
    nz = np.flatnonzero(img)
    if nz.size == 0:
        return IdentityCheck(True)
    t, _ = cs.tuples[int(nz[0])]
    comps = [component_basis(spec, v.kind, mode) for v in cs.basis.variables]
    witness = {v: comps[i][t[i]] for i, v in enumerate(cs.basis.variables)}
    return IdentityCheck(False, witness)


# ---------------------------------------------------------------- consequences

@dataclass(frozen=True)
class _Generator:
    slots: tuple[Kind, ...]
    terms: tuple[tuple[int, tuple[int, ...]], ...]


def _prepare(g: Polynomial) -> _Generator:
    if not g.is_multilinear():
        raise ValueError("generator %s is not multilinear" % g)
    vs = g.variables()
    vid = {v: i for i, v in enumerate(vs)}
    den = 1
    for c in g.terms.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    terms = tuple((int(c * den), tuple(vid[x] for x in m)) for m, c in g.items())
    return _Generator(tuple(v.kind for v in vs), terms)


def _shapes(n: int, k: int, min_len: Sequence[int]) -> list[tuple[int, ...]]:
    """Lengths (outer left, slot 1..k, outer right) summing to n."""
    out = []
    free = n - sum(min_len)
    if free < 0:
        return out
    for extra in itertools.product(range(free + 1), repeat=k + 1):
        if sum(extra) > free:
            continue
        inner = [min_len[i] + extra[i + 1] for i in range(k)]
        left = extra[0]
        right = n - left - sum(inner)
        if right >= 0:
            out.append((left, *inner, right))
    return sorted(out)


class _ConsequenceStream:
    """Dense batches of consequence rows for one signature."""

    def __init__(self, generators: Sequence[Polynomial], signature: Signature,
                 allow_unit: bool = False, seed: int = 0):
        self.basis = MultilinearBasis(signature)
        self.mode = signature.mode
        gens = list(generators)
        if self.mode.uses_involution:
            for g in list(gens):
                s = star_poly(g)
                if s != g and s != -g:
                    gens.append(s)
        self.gens = []
        for g in gens:
            for v in g.variables():
                if v.kind not in self.mode.kinds:
                    raise ValueError("generator %s does not fit %s mode" % (format_polynomial(g), self.mode.value))
            self.gens.append(_prepare(g))
        self.allow_unit = allow_unit
        self.rng = np.random.default_rng(seed)

    def batches(self) -> Iterable[np.ndarray]:
        b = self.basis
        n, N = b.n, b.size
        words = b.words.astype(np.int64)
        # renaming same-kind variables permutes consequences among themselves,
        # so one word per kind pattern suffices; the span is closed afterwards
        where = np.argsort(words, axis=1)
        canon = np.ones(N, dtype=bool)
        for ids in b.kind_groups():
            for a, c in zip(ids, ids[1:]):
                canon &= where[:, a] < where[:, c]
        words = words[canon]
        skew = b.skew_mask[words]
        odd = b.odd_mask[words]
        N_rows = words.shape[0]
        for gen in self.gens:
            k = len(gen.slots)
            min_len = [0 if (self.allow_unit and s is Kind.EVEN_SYM) else 1 for s in gen.slots]
            for shape in _shapes(n, k, min_len):
                starts = np.cumsum((0,) + shape)
                segs = [(int(starts[i + 1]), int(starts[i + 2])) for i in range(k)]
                keep = np.ones(N_rows, dtype=bool)
                if self.mode.uses_grading:
                    for (a, e), kind in zip(segs, gen.slots):
                        keep &= (odd[:, a:e].sum(axis=1) % 2) == int(kind.odd)
                rows = np.flatnonzero(keep)
                if rows.size == 0:
                    continue
                U = words[rows]
                seg_sign = [np.where(skew[rows, a:e].sum(axis=1) % 2, -1, 1) for a, e in segs]
                patterns = itertools.product((0, 1), repeat=k) if self.mode.uses_involution else [(0,) * k]
                mat = np.zeros((rows.size, N), dtype=np.int64)
                flat = mat.reshape(-1)
                base = np.arange(rows.size, dtype=np.int64) * N
                left = list(range(shape[0]))
                right = list(range(n - shape[-1], n))
                for pat in patterns:
                    sign = np.ones(rows.size, dtype=np.int64)
                    for i, starred in enumerate(pat):
                        if starred:
                            slot_sign = -1 if gen.slots[i].skew else 1
                            sign = sign * seg_sign[i] * slot_sign
                    for coef, order in gen.terms:
                        pos = list(left)
                        for s in order:
                            a, e = segs[s]
                            piece = list(range(a, e))
                            pos.extend(reversed(piece) if pat[s] else piece)
                        pos.extend(right)
                        idx = b.rank(U[:, pos])
                        np.add.at(flat, base + idx, coef * sign)
                live = np.any(mat != 0, axis=1)
                if live.any():
                    mat = mat[live]
                    yield mat[self.rng.permutation(mat.shape[0])]


def _stream_rank(stream: _ConsequenceStream, target: int | None, p: int) -> tuple[int, np.ndarray]:
    span = ModSpan(stream.basis.size, p)
    kept = []
    done = lambda: target is not None and span.rank >= target  # noqa: E731
    gens = stream.basis.group_generators()
    for mat in stream.batches():
        frontier = mat[span.add(mat, select=True, stop_at=target)]
        # close the new rows under renaming before drawing more seeds
        while frontier.shape[0]:
            kept.append(frontier)
            if done() or not gens:
                break
            cand = np.concatenate([frontier[:, g] for g in gens])
            frontier = cand[span.add(cand, select=True, stop_at=target)]
        if done():
            break
    rows = np.concatenate(kept) if kept else np.zeros((0, stream.basis.size), dtype=np.int64)
    return span.rank, rows


def consequence_space(generators: Sequence[Polynomial], signature: Signature,
                      allow_unit: bool = False) -> SubspaceBasis:
    """Multilinear part, in this signature, of the ideal generated by substitutions into the generators.

    Slots receive monomials of the right parity; in involution modes
    symmetric slots receive m + m* and skew slots m - m*.  With allow_unit,
    even symmetric slots may also receive the unit.
    """
    check_cap(signature.total)
    stream = _ConsequenceStream(generators, signature, allow_unit)
    _, rows = _stream_rank(stream, None, P0)
    if rows.shape[0] == 0:
        return SubspaceBasis(stream.basis, np.zeros((0, stream.basis.size), dtype=np.int64),
                             np.zeros(0, dtype=np.int64), [])
    num, den, piv = exact_rref(rows)
    return SubspaceBasis(stream.basis, num, den, piv)


# ---------------------------------------------------------------- verification

@dataclass
class SignatureRecord:
    signature: Signature
    dimP: int
    dimId: int
    dimCons: int
    verdict: str
    sound: bool = True

    def as_dict(self) -> dict:
        return {"signature": list(self.signature.counts), "dimP": self.dimP, "dimId": self.dimId,
                "dimCons": self.dimCons, "verdict": self.verdict}


@dataclass
class BasisReport:
    algebra: str
    mode: Mode
    max_degree: int
    records: list[SignatureRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.verdict == "pass" for r in self.records)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def failures(self) -> list[SignatureRecord]:
        return [r for r in self.records if r.verdict != "pass"]

    def to_json(self) -> str:
        return json.dumps({"algebra": self.algebra, "mode": self.mode.value, "max_degree": self.max_degree,
                           "verdict": self.verdict, "records": [r.as_dict() for r in self.records]},
                          indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["signature", "dimP", "dimId", "dimCons", "verdict"])
        for r in self.records:
            w.writerow([str(r.signature), r.dimP, r.dimId, r.dimCons, r.verdict])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = ["%-16s %8s %8s %8s  %s" % ("signature", "dimP", "dimId", "dimCons", "verdict")]
        for r in self.records:
            lines.append("%-16s %8d %8d %8d  %s" % (r.signature, r.dimP, r.dimId, r.dimCons, r.verdict))
        if self.passed:
            lines.append("basis verified through degree %d" % self.max_degree)
        else:
            bad = ", ".join(str(r.signature) for r in self.failures())
            lines.append("basis NOT verified: consequences fall short at %s" % bad)
        return "\n".join(lines) + "\n"


def verify_basis(spec: AlgebraSpec, generators: Sequence[Polynomial], max_total_degree: int,
                 mode: Mode | None = None, allow_unit: bool | None = None,
                 only: Iterable[Signature] | None = None) -> BasisReport:
    """Compare consequences of the generators with all identities, signature by signature.

    Every generator must be an identity.  A signature passes when the
    consequence rank reaches the identity dimension; the consequence rows
    found are checked exactly to be identities, and rows independent modulo a
    prime are independent over Q, so a pass is exact.
    """
    mode = default_mode(spec) if mode is None else mode
    check_cap(max_total_degree)
    if allow_unit is None:
        allow_unit = spec.unit is not None
    for g in generators:
        res = is_identity(spec, g, mode)
        if not res:
            raise GeneratorNotIdentity(g, res.witness)
    report = BasisReport(spec.name, mode, max_total_degree)
    sigs = list(only) if only is not None else signatures(mode, max_total_degree)
    for sig in sigs:
        report.records.append(_verify_signature(spec, generators, sig, allow_unit))
    return report


def _verify_signature(spec, generators, sig, allow_unit) -> SignatureRecord:
    cs = column_space(spec, sig)
    N = cs.basis.size
    target = N - cs.rank
    if target == 0:
        return SignatureRecord(sig, N, 0, 0, "pass")
    stream = _ConsequenceStream(generators, sig, allow_unit)
    k, rows = _stream_rank(stream, target, P0)
    sound = bool(cs.rank == 0 or products_agree(rows, cs.columns, np.zeros((rows.shape[0], cs.rank), dtype=np.int64)))
    if not sound:
        raise ExactnessError("a consequence row of signature %s is not an identity" % (sig,))
    if k < target:
        k2, _ = _stream_rank(_ConsequenceStream(generators, sig, allow_unit), target, PRIMES[1])
        k = max(k, k2)
    return SignatureRecord(sig, N, target, k, "pass" if k == target else "fail", sound)
