"""Symmetric-group side: partitions, tableaux, Young symmetrizers, cocharacter multiplicities.

Permutations act on polynomials by renaming variables of one kind:
sigma . f(x_1, ..., x_n) = f(x_sigma(1), ..., x_sigma(n)).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .algebra import AlgebraSpec, builtin
from .free import Kind, Mode, Polynomial, Variable, permutation_sign, rename
from .identities import column_space, default_mode, is_identity
from .linalg import P0, as_residues, exact_rank, independent_rows_mod
from .multilinear import Signature


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("parts must be positive and weakly decreasing: %r" % (parts,))
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def height(self) -> int:
        return len(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for x in self.parts if x > j) for j in range(self.parts[0])))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "()"


def partitions(n: int) -> list[Partition]:
    """Partitions of n, in decreasing lexicographic order."""
    out: list[Partition] = []

    def rec(rest: int, cap: int, acc: list[int]) -> None:
        if rest == 0:
            out.append(Partition(tuple(acc)))
            return
        for k in range(min(rest, cap), 0, -1):
            acc.append(k)
            rec(rest - k, k, acc)
            acc.pop()

    rec(n, n, [])
    return out


def hook_length(shape: Partition) -> int:
    """Number of standard tableaux of the shape."""
    conj = shape.conjugate().parts
    prod = 1
    for i, row in enumerate(shape.parts):
        for j in range(row):
            prod *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(shape.size) // prod


@dataclass(frozen=True)
class StandardTableau:
    """Filling of a shape by labels, increasing along rows and down columns.

    Label order is the order of the label list the tableau was built from.
    """

    shape: Partition
    rows: tuple[tuple, ...]

    @cached_property
    def columns(self) -> tuple[tuple, ...]:
        if not self.rows:
            return ()
        return tuple(tuple(r[j] for r in self.rows if len(r) > j) for j in range(len(self.rows[0])))

    @property
    def labels(self) -> list:
        return [x for r in self.rows for x in r]

    def __str__(self) -> str:
        return " / ".join(" ".join(map(repr, r)) for r in self.rows)


def standard_tableaux(shape: Partition, labels: Sequence) -> list[StandardTableau]:
    """All standard fillings, labels placed in list order by backtracking."""
    labels = list(labels)
    if len(labels) != shape.size:
        raise ValueError("shape %s has %d cells but %d labels were given" % (shape, shape.size, len(labels)))
    out: list[StandardTableau] = []
    rows: list[list] = [[] for _ in shape.parts]

    def rec(k: int) -> None:
        if k == len(labels):
            out.append(StandardTableau(shape, tuple(tuple(r) for r in rows)))
            return
        for i, cap in enumerate(shape.parts):
            if len(rows[i]) < cap and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(labels[k])
                rec(k + 1)
                rows[i].pop()

    rec(0)
    return out


def row_tableau(shape: Partition, labels: Sequence) -> StandardTableau:
    """The standard tableau filled row by row."""
    labels = list(labels)
    if len(labels) != shape.size:
        raise ValueError("shape %s has %d cells but %d labels were given" % (shape, shape.size, len(labels)))
    rows, k = [], 0
    for r in shape.parts:
        rows.append(tuple(labels[k:k + r]))
        k += r
    return StandardTableau(shape, tuple(rows))


def _subgroup(blocks: Sequence[Sequence], signed: bool) -> list[tuple[dict, int]]:
    """Elements of the product of symmetric groups on the blocks, as (mapping, sign)."""
    per = []
    for b in blocks:
        b = list(b)
        per.append([({b[i]: b[perm[i]] for i in range(len(b))}, permutation_sign(perm) if signed else 1)
                    for perm in itertools.permutations(range(len(b)))])
    out = []
    for choice in itertools.product(*per):
        m: dict = {}
        s = 1
        for mp, sg in choice:
            m.update(mp)
            s *= sg
        out.append((m, s))
    return out


def symmetrizer_elements(tab: StandardTableau) -> list[tuple[dict, int]]:
    """e_T = (sum over row group) (signed sum over column group), as (mapping, coefficient)."""
    rows = _subgroup(tab.rows, signed=False)
    cols = _subgroup(tab.columns, signed=True)
    out = []
    for sigma, _ in rows:
        for tau, sg in cols:
            comp = {x: sigma.get(tau.get(x, x), tau.get(x, x)) for x in set(sigma) | set(tau)}
            out.append((comp, sg))
    return out


def symmetrizer_apply(tabs: Sequence[StandardTableau], p: Polynomial) -> Polynomial:
    """Apply the product of the Young symmetrizers of the tableaux to p.

    Labels must be variables of p; tableaux of different kinds commute.
    """
    present = set(p.variables())
    for t in tabs:
        kinds = {v.kind for v in t.labels}
        if len(kinds) > 1:
            raise ValueError("a tableau must be filled with variables of one kind")
        if not set(t.labels) <= present:
            raise ValueError("tableau labels %s are not variables of the polynomial" % t.labels)
    out = p
    for t in tabs:
        acc = Polynomial()
        for mapping, coef in symmetrizer_elements(t):
            acc = acc + coef * rename(out, mapping)
        out = acc
    return out


# ---------------------------------------------------------------- multiplicities

@dataclass
class MultiplicityResult:
    shapes: tuple[Partition, ...]
    multiplicity: int
    witness: list[np.ndarray]
    signature: Signature
    tableaux: tuple[StandardTableau, ...] = ()

    @property
    def degree(self) -> int:
        return math.prod(hook_length(s) for s in self.shapes)


def _kind_variables(sig: Signature) -> list[list[Variable]]:
    return [[Variable(k, i + 1) for i in range(c)] for k, c in zip(sig.mode.kinds, sig.counts)]


def _shapes_signature(shapes: Sequence[Partition], mode: Mode) -> Signature:
    shapes = tuple(Partition(tuple(s)) if not isinstance(s, Partition) else s for s in shapes)
    if len(shapes) != len(mode.kinds):
        raise ValueError("%s mode takes %d shapes" % (mode.value, len(mode.kinds)))
    return Signature(mode, tuple(s.size for s in shapes))


def multiplicity(spec: AlgebraSpec, shapes: Sequence, mode: Mode | None = None,
                 choice: Sequence[int] | None = None) -> MultiplicityResult:
    """Multiplicity of the irreducible indexed by shapes in the cocharacter.

    One standard tableau per kind is fixed (choice selects its position in
    standard_tableaux order; default the row-filled one).  The symmetrizer is
    applied to quotient representatives and the rank of the images, in
    evaluation coordinates, is the multiplicity.
    """
    mode = default_mode(spec) if mode is None else mode
    shapes = tuple(Partition(tuple(s)) if not isinstance(s, Partition) else s for s in shapes)
    sig = _shapes_signature(shapes, mode)
    cs = column_space(spec, sig)
    tabs = []
    for k, (shape, vs) in enumerate(zip(shapes, _kind_variables(sig))):
        if choice is None:
            tabs.append(row_tableau(shape, vs))
        else:
            tabs.append(standard_tableaux(shape, vs)[choice[k]])
    tabs = tuple(tabs)
    if cs.rank == 0:
        return MultiplicityResult(shapes, 0, [], sig, tabs)
    basis = cs.basis
    W = basis.words[cs.pivot_rows].astype(np.int64)
    img = np.zeros((len(cs.pivot_rows), cs.rank), dtype=np.int64)
    per_kind = [symmetrizer_elements(t) for t in tabs if t.rows]
    cols = cs.columns.astype(np.int64)
    for combo in itertools.product(*per_kind):
        g = np.arange(basis.n)
        s = 1
        for mapping, coef in combo:
            for a, b in mapping.items():
                g[basis.var_id(a)] = basis.var_id(b)
            s *= coef
        img += s * cols[basis.rank(g[W])]
    mult = exact_rank(img)
    rows = independent_rows_mod(as_residues(img, P0), P0) if mult else []
    return MultiplicityResult(shapes, mult, [img[i] for i in rows[:mult]], sig, tabs)


def shape_tuples(sig: Signature) -> list[tuple[Partition, ...]]:
    return [tuple(c) for c in itertools.product(*[partitions(n) for n in sig.counts])]


@dataclass
class CocharacterTable:
    signature: Signature
    quotient_dim: int
    results: list[MultiplicityResult]

    @property
    def decomposition_dim(self) -> int:
        return sum(r.multiplicity * r.degree for r in self.results)

    @property
    def consistent(self) -> bool:
        return self.decomposition_dim == self.quotient_dim


def cocharacter(spec: AlgebraSpec, sig: Signature) -> CocharacterTable:
    mode = sig.mode
    res = [multiplicity(spec, shapes, mode) for shapes in shape_tuples(sig)]
    return CocharacterTable(sig, column_space(spec, sig).rank, res)


def _two_rows(shape: Partition) -> tuple[int, int] | None:
    """(p, q) with shape = (p+q, p), or None when the shape has more than two rows."""
    if shape.height > 2:
        return None
    if shape.height == 0:
        return 0, 0
    second = shape.parts[1] if shape.height == 2 else 0
    return second, shape.parts[0] - second


def expected_multiplicity(algebra: str, shapes: Sequence[Partition]) -> int | None:
    """Closed-form multiplicities for the algebras where they are known; None otherwise."""
    key = algebra.replace("-", "").replace("_", "").lower()
    shapes = tuple(Partition(tuple(s)) for s in shapes)
    if key == "a1":
        lam, mu = shapes
        if mu.size == 0:
            return 1 if lam.height <= 1 and lam.size > 0 else 0
        if mu.size > 2:
            return 0
        pq = _two_rows(lam)
        return 0 if pq is None else pq[1] + 1
    if key == "a1star":
        lam, skew_even, sym_odd, skew_odd = shapes
        if skew_even.size > 0 or sym_odd.height > 1 or skew_odd.height > 1:
            return 0
        odd = sym_odd.size + skew_odd.size
        if odd == 0:
            return 1 if lam.height == 1 else 0
        if odd > 2:
            return 0
        pq = _two_rows(lam)
        return 0 if pq is None else pq[1] + 1
    return None


# ---------------------------------------------------------------- highest weight vectors

HWV_KINDS = ("n1case", "n2sym", "n2mixed")


def hwv_family(kind: str, p: int, q: int, i: int, mode: Mode = Mode.GRADED) -> Polynomial:
    """Linearized highest weight vector: y1^i, p alternating pairs around z, y1^(q-i).

    Even variables 1..p form the alternating first members, p+1..p+q the
    free first-row letters (i of them before the block, q-i after), and
    p+q+1..2p+q the second members placed after z.  n2sym appends a second
    odd variable symmetrized with the first; n2mixed appends one alternated
    with it.  The result is e_T applied to that word, T the row-filled
    tableau, which equals the complete linearization.
    """
    if kind not in HWV_KINDS:
        raise ValueError("kind must be one of %s" % (HWV_KINDS,))
    if p < 0 or q < 0:
        raise ValueError("p and q must be nonnegative")
    if not 0 <= i <= q:
        raise ValueError("i must lie in 0..q")
    even = Kind.EVEN_SYM
    odd = Kind.ODD_SYM
    y = lambda j: Variable(even, j)  # noqa: E731
    z = lambda j: Variable(odd, j)  # noqa: E731
    word = [y(p + 1 + k) for k in range(i)] + [y(k + 1) for k in range(p)] + [z(1)]
    word += [y(p + q + 1 + k) for k in range(p)] + [y(p + 1 + k) for k in range(i, q)]
    odd_count = 1
    if kind != "n1case":
        word.append(z(2))
        odd_count = 2
    lam = Partition((p + q, p) if p else ((q,) if q else ()))
    tab_y = row_tableau(lam, [y(k + 1) for k in range(2 * p + q)])
    mu = Partition((2,)) if kind == "n2sym" else Partition((1, 1)) if kind == "n2mixed" else Partition((1,))
    tab_z = row_tableau(mu, [z(k + 1) for k in range(odd_count)])
    tabs = [t for t in (tab_y, tab_z) if t.rows]
    out = symmetrizer_apply(tabs, Polynomial.monomial(*word))
    if mode is not Mode.GRADED:
        out = _to_mode(out, mode)
    return out


def _to_mode(p: Polynomial, mode: Mode) -> Polynomial:
    if mode is not Mode.GRADED_INVOLUTION:
        raise ValueError("highest weight vectors are available in graded and graded-involution modes")
    # even -> even symmetric and odd -> odd symmetric, which keep their kinds
    return p


# ---------------------------------------------------------------- binomial rewrite

def binomial_rewrite_sides(p: int, i1: int, i2: int,
                           coefficients: Sequence[int] | None = None) -> tuple[Polynomial, Polynomial]:
    """Both sides of the rewrite of an alternating word into a binomial sum.

    Left: p alternating pairs of y1/y2, the first members at the start and
    the second at the end, with y1^(i1-p) z y1^(i2-p) in between.  Right:
    sum_j (-1)^j c_j y1^(i1-j) y2^j z y1^(i2-p+j) y2^(p-j), with c_j the
    binomial coefficients unless overridden.
    """
    if p < 1 or i1 < p or i2 < p:
        raise ValueError("need i1, i2 >= p >= 1")
    if coefficients is None:
        coefficients = [math.comb(p, j) for j in range(p + 1)]
    if len(coefficients) != p + 1:
        raise ValueError("expected %d coefficients" % (p + 1))
    y1, y2 = Variable(Kind.EVEN_SYM, 1), Variable(Kind.EVEN_SYM, 2)
    z = Variable(Kind.ODD_SYM, 1)
    middle = [y1] * (i1 - p) + [z] + [y1] * (i2 - p)
    lhs_terms = []
    for swapped in itertools.product((0, 1), repeat=p):
        left = [y2 if s else y1 for s in swapped]
        right = [y1 if s else y2 for s in swapped]
        lhs_terms.append((tuple(left + middle + right), (-1) ** sum(swapped)))
    rhs_terms = []
    for j in range(p + 1):
        word = [y1] * (i1 - j) + [y2] * j + [z] + [y1] * (i2 - p + j) + [y2] * (p - j)
        rhs_terms.append((tuple(word), (-1) ** j * coefficients[j]))
    return Polynomial(lhs_terms), Polynomial(rhs_terms)


def verify_binomial_rewrite(p: int, i1: int, i2: int, spec: AlgebraSpec | None = None,
                            coefficients: Sequence[int] | None = None) -> bool:
    """True when the two sides agree on the algebra (the graded-involution one by default)."""
    lhs, rhs = binomial_rewrite_sides(p, i1, i2, coefficients)
    spec = builtin("A1-star") if spec is None else spec
    return bool(is_identity(spec, lhs - rhs, Mode.GRADED_INVOLUTION))
