"""Idempotent diagonalization and elementary gradings of the algebra of patterned 3x3 matrices."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from .algebra import GRADINGS, LABELS, AlgebraSpec, Element, builtin, from_matrix, matmul3, multiply, to_matrix
from .linalg import fraction_rref


@lru_cache(maxsize=1)
def _base() -> AlgebraSpec:
    return builtin("A-star")


def _is_pattern(m) -> bool:
    return (m[1][0] == m[2][0] == m[2][1] == m[1][0] == 0) and m[0][0] == m[2][2]


def _identity3():
    return [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]


def unitriangular_inverse(q) -> list[list[Fraction]]:
    """Inverse of an upper unitriangular 3x3 matrix."""
    a, c, b = Fraction(q[0][1]), Fraction(q[0][2]), Fraction(q[1][2])
    if any(q[i][i] != 1 for i in range(3)) or q[1][0] or q[2][0] or q[2][1]:
        raise ValueError("matrix is not upper unitriangular")
    return [[Fraction(1), -a, a * b - c], [Fraction(0), Fraction(1), -b], [Fraction(0), Fraction(0), Fraction(1)]]


DIAGONAL_IDEMPOTENTS = {
    "e22": (0, 1, 0, 0, 0),
    "e11+e33": (1, 0, 0, 0, 0),
    "E": (1, 1, 0, 0, 0),
}


@dataclass(frozen=True)
class Diagonalization:
    q: Element
    d: Element
    q_inverse: Element
    case: str


def diagonalize_idempotent(e: Element, spec: AlgebraSpec | None = None) -> Diagonalization:
    """Find invertible q with q e q^-1 diagonal, for a nonzero idempotent e.

    e = x(e11+e33) + y e22 + a e12 + b e23 + c e13 forces x, y in {0, 1}.
    For (x, y) = (0, 1), q = E - a e12 + b e23 sends e to e22; for (1, 0),
    q = E + a e12 - b e23 sends it to e11+e33; E is already diagonal.
    """
    if e.is_zero():
        raise ValueError("the zero element is excluded")
    em = to_matrix(e.coeffs)
    if spec is None:
        if matmul3(em, em) != em:
            raise ValueError("element is not idempotent")
    elif multiply(spec, e, e) != e:
        raise ValueError("element is not idempotent")
    x, y, a, b, _ = e.coeffs
    if (x, y) == (0, 1):
        q = [[1, -a, 0], [0, 1, b], [0, 0, 1]]
        case = "e22"
    elif (x, y) == (1, 0):
        q = [[1, a, 0], [0, 1, -b], [0, 0, 1]]
        case = "e11+e33"
    else:
        q = _identity3()
        case = "E"
    q = [[Fraction(v) for v in row] for row in q]
    qi = unitriangular_inverse(q)
    d = matmul3(matmul3(q, em), qi)
    if not _is_pattern(d):
        raise AssertionError("conjugate left the algebra")
    d_el = Element(from_matrix(d))
    if d_el.coeffs != tuple(Fraction(v) for v in DIAGONAL_IDEMPOTENTS[case]):
        raise AssertionError("conjugate is not the expected diagonal idempotent")
    return Diagonalization(Element(from_matrix(q)), d_el, Element(from_matrix(qi)), case)


def idempotent_from_parameters(x: int, y: int, a, b) -> Element:
    """The idempotent with diagonal (x, y, x) and off-diagonal entries a, b (x + y = 1), or E."""
    a, b = Fraction(a), Fraction(b)
    if (x, y) == (0, 1):
        return Element((Fraction(0), Fraction(1), a, b, a * b))
    if (x, y) == (1, 0):
        return Element((Fraction(1), Fraction(0), a, b, -a * b))
    if (x, y) == (1, 1):
        return Element((Fraction(1), Fraction(1), Fraction(0), Fraction(0), Fraction(0)))
    raise ValueError("no nonzero idempotent has diagonal (%s, %s)" % (x, y))


# ---------------------------------------------------------------- gradings

@dataclass(frozen=True)
class GroupTriple:
    """Three elements of a finite abelian group, a product of cyclic factors.

    orders lists the factor orders, e.g. (2,) for Z2 or (2, 2) for Z2 x Z2.
    Elements are tuples of residues, one per factor.
    """

    labels: tuple[tuple[int, ...], ...]
    orders: tuple[int, ...] = (2,)

    def __post_init__(self):
        labels = tuple(tuple(g) if isinstance(g, (tuple, list)) else (g,) for g in self.labels)
        if len(labels) != 3:
            raise ValueError("a triple has three entries")
        for g in labels:
            if len(g) != len(self.orders) or any(not 0 <= x < m for x, m in zip(g, self.orders)):
                raise ValueError("%r is not an element of %s" % (g, self.group_name))
        object.__setattr__(self, "labels", labels)

    @property
    def group_name(self) -> str:
        return " x ".join("Z%d" % m for m in self.orders)

    def difference(self, i: int, j: int) -> tuple[int, ...]:
        """g_i^-1 g_j, written additively."""
        return tuple((b - a) % m for a, b, m in zip(self.labels[i], self.labels[j], self.orders))


def elementary_grading(triple: GroupTriple) -> tuple[tuple[int, ...], ...]:
    """Degrees of (e11+e33, e22, e12, e23, e13) for the elementary grading of the triple."""
    zero = tuple(0 for _ in triple.orders)
    degs = (zero, zero, triple.difference(0, 1), triple.difference(1, 2), triple.difference(0, 2))
    _check_closure(degs, triple.orders)
    return degs


def _check_closure(degs, orders) -> None:
    spec = _base()
    for i, j in itertools.product(range(5), repeat=2):
        prod = spec.structure_constants[i][j]
        want = tuple((x + y) % m for x, y, m in zip(degs[i], degs[j], orders))
        for k, c in enumerate(prod):
            if c and degs[k] != want:
                raise AssertionError("degree map is not closed under multiplication")


def z2_degrees(triple: GroupTriple) -> tuple[int, ...]:
    if triple.orders != (2,):
        raise ValueError("only Z2 gradings feed the identity engine")
    return tuple(g[0] for g in elementary_grading(triple))


def graded_algebra(triple: GroupTriple, name: str = "") -> AlgebraSpec:
    base = _base()
    return AlgebraSpec(base.dim, base.basis_labels, base.structure_constants, base.unit,
                       z2_degrees(triple), None, name or "elementary%s" % (tuple(g[0] for g in triple.labels),))


def _span_dim(vectors: Sequence[Sequence[Fraction]]) -> int:
    vectors = [v for v in vectors if any(v)]
    return len(fraction_rref(vectors)[1]) if vectors else 0


def grading_invariants(degrees: Sequence[int]) -> tuple[int, int, int, int]:
    """(dim A1, dim A1 A1, dim J0 A1, dim A1 J0) with J the span of the off-diagonal units.

    These are preserved by graded isomorphisms and separate the four Z2 gradings.
    """
    spec = _base()
    odd = [spec.basis_element(i) for i in range(5) if degrees[i] == 1]
    j0 = [spec.basis_element(i) for i in (2, 3, 4) if degrees[i] == 0]
    def products(xs, ys):
        return [multiply(spec, x, y).coeffs for x in xs for y in ys]
    return (len(odd), _span_dim(products(odd, odd)), _span_dim(products(j0, odd)), _span_dim(products(odd, j0)))


@dataclass(frozen=True)
class GradingClass:
    name: str
    degrees: tuple[int, ...]
    triples: tuple[tuple[int, int, int], ...]
    invariants: tuple[int, int, int, int]


def classify_z2() -> list[GradingClass]:
    """Group the eight Z2 triples by the degree map they induce."""
    classes: dict[tuple[int, ...], list] = {}
    for t in itertools.product((0, 1), repeat=3):
        classes.setdefault(z2_degrees(GroupTriple(t)), []).append(t)
    names = {tuple(v): k for k, v in GRADINGS.items()}
    out = []
    for degs in sorted(classes, key=lambda d: (sum(d), d)):
        name = names.get(degs, "unnamed")
        if name == "A-trivial":
            name = "trivial"
        out.append(GradingClass(name, degs, tuple(classes[degs]), grading_invariants(degs)))
    if len({c.invariants for c in out}) != len(out):
        raise AssertionError("invariants fail to separate the gradings")
    return out


def classification_table() -> str:
    lines = ["%-8s %-22s %-28s %s" % ("grading", "odd basis elements", "triples", "invariants")]
    for c in classify_z2():
        odd = ",".join(LABELS[i] for i in range(5) if c.degrees[i]) or "-"
        triples = " ".join("".join(map(str, t)) for t in c.triples)
        lines.append("%-8s %-22s %-28s %s" % (c.name, odd, triples, c.invariants))
    return "\n".join(lines) + "\n"
