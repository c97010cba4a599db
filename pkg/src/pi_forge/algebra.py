"""Finite-dimensional algebras given by structure constants.

An algebra carries optional decorations: a unit, a Z2-grading of its basis and
an involution.  The involution matrix uses the row convention: row i holds the
coordinates of the image of basis element i, so x* = x @ I for a coordinate row
vector x.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .linalg import fraction_rref, integer_row, nullspace


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    return Fraction(value)


def _frac_tuple(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


@dataclass(frozen=True)
class AlgebraSpec:
    dim: int
    basis_labels: tuple[str, ...]
    structure_constants: tuple
    unit: tuple[Fraction, ...] | None = None
    grading: tuple[int, ...] | None = None
    involution: tuple | None = None
    name: str = ""

    def __post_init__(self):
        d = self.dim
        if d <= 0:
            raise ValueError("dimension must be positive")
        labels = tuple(self.basis_labels)
        if len(labels) != d:
            raise ValueError("expected %d basis labels, got %d" % (d, len(labels)))
        sc = self.structure_constants
        if len(sc) != d or any(len(row) != d for row in sc) or any(len(v) != d for row in sc for v in row):
            raise ValueError("structure constants must have shape (dim, dim, dim)")
        sc = tuple(tuple(_frac_tuple(v) for v in row) for row in sc)
        object.__setattr__(self, "basis_labels", labels)
        object.__setattr__(self, "structure_constants", sc)
        if self.unit is not None:
            if len(self.unit) != d:
                raise ValueError("unit vector has wrong length")
            object.__setattr__(self, "unit", _frac_tuple(self.unit))
        if self.grading is not None:
            g = tuple(int(x) for x in self.grading)
            if len(g) != d or any(x not in (0, 1) for x in g):
                raise ValueError("grading must assign 0 or 1 to every basis element")
            object.__setattr__(self, "grading", g)
        if self.involution is not None:
            inv = self.involution
            if len(inv) != d or any(len(r) != d for r in inv):
                raise ValueError("involution must be a dim x dim matrix")
            object.__setattr__(self, "involution", tuple(_frac_tuple(r) for r in inv))

    def basis_element(self, i: int) -> "Element":
        return Element(tuple(Fraction(int(k == i)) for k in range(self.dim)))

    def element(self, coeffs: Sequence) -> "Element":
        e = Element(_frac_tuple(coeffs))
        _conform(self, e)
        return e

    def zero(self) -> "Element":
        return Element((Fraction(0),) * self.dim)

    def star(self, x: "Element") -> "Element":
        if self.involution is None:
            raise ValueError("algebra %r has no involution" % self.name)
        _conform(self, x)
        return Element(tuple(sum((x.coeffs[i] * self.involution[i][k] for i in range(self.dim)), Fraction(0))
                             for k in range(self.dim)))

    @cached_property
    def integer_constants(self) -> tuple[np.ndarray, int]:
        """Structure constants scaled to integers: (array, common denominator)."""
        lcm = 1
        for row in self.structure_constants:
            for v in row:
                for c in v:
                    lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        arr = np.array([[[int(c * lcm) for c in v] for v in row] for row in self.structure_constants],
                       dtype=object)
        if all(abs(int(x)) < 2 ** 31 for x in arr.ravel()):
            arr = arr.astype(np.int64)
        return arr, lcm


@dataclass(frozen=True)
class Element:
    coeffs: tuple[Fraction, ...]

    def __add__(self, other: "Element") -> "Element":
        _same_length(self, other)
        return Element(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Element") -> "Element":
        _same_length(self, other)
        return Element(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Element":
        return Element(tuple(-a for a in self.coeffs))

    def __rmul__(self, scalar) -> "Element":
        s = to_fraction(scalar)
        return Element(tuple(s * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        return "Element(%s)" % ", ".join(str(c) for c in self.coeffs)


def _same_length(x: Element, y: Element) -> None:
    if len(x.coeffs) != len(y.coeffs):
        raise ValueError("dimension mismatch")


def _conform(spec: AlgebraSpec, x: Element) -> None:
    if len(x.coeffs) != spec.dim:
        raise ValueError("element of length %d does not conform to dimension %d" % (len(x.coeffs), spec.dim))


def multiply(spec: AlgebraSpec, x: Element, y: Element) -> Element:
    _conform(spec, x)
    _conform(spec, y)
    d = spec.dim
    out = [Fraction(0)] * d
    c = spec.structure_constants
    for i, xi in enumerate(x.coeffs):
        if not xi:
            continue
        for j, yj in enumerate(y.coeffs):
            if not yj:
                continue
            s = xi * yj
            for k, v in enumerate(c[i][j]):
                if v:
                    out[k] += s * v
    return Element(tuple(out))


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, axiom: str) -> AxiomCheck:
        for c in self.checks:
            if c.axiom == axiom:
                return c
        raise KeyError(axiom)


def validate(spec: AlgebraSpec) -> ValidationReport:
    d = spec.dim
    basis = [spec.basis_element(i) for i in range(d)]
    prod = [[multiply(spec, basis[i], basis[j]) for j in range(d)] for i in range(d)]
    checks = []

    witness = None
    for i in range(d):
        for j in range(d):
            for k in range(d):
                if multiply(spec, prod[i][j], basis[k]) != multiply(spec, basis[i], prod[j][k]):
                    witness = (i, j, k)
                    break
            if witness:
                break
        if witness:
            break
    checks.append(AxiomCheck("associativity", witness is None, witness,
                             "" if witness is None else "(b%d b%d) b%d != b%d (b%d b%d)" % (witness * 2)))

    if spec.unit is not None:
        e = Element(spec.unit)
        bad = next((i for i in range(d)
                    if multiply(spec, e, basis[i]) != basis[i] or multiply(spec, basis[i], e) != basis[i]), None)
        checks.append(AxiomCheck("unit", bad is None, None if bad is None else (bad,)))

    if spec.grading is not None:
        g = spec.grading
        bad = None
        for i in range(d):
            for j in range(d):
                target = (g[i] + g[j]) % 2
                if any(c and g[k] != target for k, c in enumerate(prod[i][j].coeffs)):
                    bad = (i, j)
                    break
            if bad:
                break
        checks.append(AxiomCheck("grading closure", bad is None, bad))

    if spec.involution is not None:
        star = [spec.star(b) for b in basis]
        bad = next((i for i in range(d) if spec.star(star[i]) != basis[i]), None)
        checks.append(AxiomCheck("involution order 2", bad is None, None if bad is None else (bad,)))
        bad = None
        for i in range(d):
            for j in range(d):
                if spec.star(prod[i][j]) != multiply(spec, star[j], star[i]):
                    bad = (i, j)
                    break
            if bad:
                break
        checks.append(AxiomCheck("involution antihomomorphism", bad is None, bad))
        if spec.grading is not None:
            g = spec.grading
            bad = next((i for i in range(d)
                        if any(c and g[k] != g[i] for k, c in enumerate(star[i].coeffs))), None)
            checks.append(AxiomCheck("involution preserves components", bad is None,
                                     None if bad is None else (bad,)))
    return ValidationReport(tuple(checks))


# ---------------------------------------------------------------- components

def _normalized(vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
    ints = integer_row(vec)
    lead = next((v for v in ints if v), 1)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(Fraction(v) for v in ints)


def homogeneous_basis(spec: AlgebraSpec, degree: int | None = None, sign: str | None = None) -> list[Element]:
    """Basis of A_degree, of A^sign, or of A_degree^sign.

    sign is '+' (symmetric) or '-' (skew).  Vectors are primitive integral with
    positive leading coefficient.
    """
    d = spec.dim
    if degree is not None:
        if spec.grading is None:
            raise ValueError("degree requested but algebra %r has no grading" % spec.name)
        if degree not in (0, 1):
            raise ValueError("degree must be 0 or 1")
        support = [i for i in range(d) if spec.grading[i] == degree]
    else:
        support = list(range(d))
    if sign is None:
        return [spec.basis_element(i) for i in support]
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if spec.involution is None:
        raise ValueError("sign requested but algebra %r has no involution" % spec.name)
    eps = 1 if sign == "+" else -1
    inv = spec.involution
    # unknowns x_i for i in support; x @ I = eps * x on every coordinate
    eqs = []
    for k in range(d):
        eqs.append([inv[i][k] - (eps if i == k else 0) for i in support])
    out = []
    for v in nullspace(eqs):
        full = [Fraction(0)] * d
        for i, val in zip(support, v):
            full[i] = val
        out.append(Element(_normalized(full)))
    return _sorted_by_support(out)


def _sorted_by_support(elems: list[Element]) -> list[Element]:
    def key(e: Element):
        return next(i for i, c in enumerate(e.coeffs) if c)
    return sorted(elems, key=key)


# ---------------------------------------------------------------- the algebra of the 3x3 pattern

LABELS = ("u", "d", "a", "b", "c")

# matrix positions (row, col) carrying each basis element; u spans e11 + e33
_PATTERN = {
    "u": ((0, 0), (2, 2)),
    "d": ((1, 1),),
    "a": ((0, 1),),
    "b": ((1, 2),),
    "c": ((0, 2),),
}


def to_matrix(x: Sequence) -> list[list[Fraction]]:
    """3x3 upper triangular matrix of an element given in the basis (u, d, a, b, c)."""
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for label, coef in zip(LABELS, x):
        for (r, c) in _PATTERN[label]:
            m[r][c] += to_fraction(coef)
    return m


def from_matrix(m: Sequence[Sequence]) -> tuple[Fraction, ...]:
    m = [[to_fraction(v) for v in row] for row in m]
    if m[0][0] != m[2][2] or m[1][0] or m[2][0] or m[2][1]:
        raise ValueError("matrix is not in the subalgebra")
    return (m[0][0], m[1][1], m[0][1], m[1][2], m[0][2])


def matmul3(x, y):
    return [[sum((x[i][k] * y[k][j] for k in range(3)), Fraction(0)) for j in range(3)] for i in range(3)]


def _basis_matrices():
    return [to_matrix([int(i == k) for k in range(5)]) for i in range(5)]


def _pattern_constants():
    mats = _basis_matrices()
    return [[list(from_matrix(matmul3(mats[i], mats[j]))) for j in range(5)] for i in range(5)]


def _reflection():
    # reflection along the secondary diagonal: m[i][j] -> m[2-j][2-i]
    rows = []
    for m in _basis_matrices():
        r = [[m[2 - j][2 - i] for j in range(3)] for i in range(3)]
        rows.append(list(from_matrix(r)))
    return rows


GRADINGS = {
    "A1": (0, 0, 1, 1, 0),
    "A2": (0, 0, 0, 1, 1),
    "A3": (0, 0, 1, 0, 1),
    "A-trivial": (0, 0, 0, 0, 0),
}


def _make(name: str, grading=None, involution: bool = False) -> AlgebraSpec:
    return AlgebraSpec(
        dim=5,
        basis_labels=LABELS,
        structure_constants=_pattern_constants(),
        unit=(1, 1, 0, 0, 0),
        grading=grading,
        involution=_reflection() if involution else None,
        name=name,
    )


BUILTIN_NAMES = ("A1", "A2", "A3", "A-star", "A1-star", "A-trivial")


def _key(name: str) -> str:
    return name.replace("-", "").replace("_", "").replace(" ", "").lower()


def builtin(name: str) -> AlgebraSpec:
    key = _key(name)
    for canon in BUILTIN_NAMES:
        if _key(canon) == key:
            break
    else:
        raise KeyError("unknown built-in algebra %r; choose from %s" % (name, ", ".join(BUILTIN_NAMES)))
    if canon == "A-star":
        return _make(canon, involution=True)
    if canon == "A1-star":
        return _make(canon, GRADINGS["A1"], involution=True)
    return _make(canon, GRADINGS[canon])


# ---------------------------------------------------------------- file format

def _frac_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else "%d/%d" % (v.numerator, v.denominator)


def spec_to_dict(spec: AlgebraSpec) -> dict:
    out = {
        "dim": spec.dim,
        "labels": list(spec.basis_labels),
        "mult": [[[_frac_str(c) for c in v] for v in row] for row in spec.structure_constants],
    }
    if spec.name:
        out["name"] = spec.name
    if spec.unit is not None:
        out["unit"] = [_frac_str(c) for c in spec.unit]
    if spec.grading is not None:
        out["grading"] = list(spec.grading)
    if spec.involution is not None:
        out["involution"] = [[_frac_str(c) for c in r] for r in spec.involution]
    return out


def spec_from_dict(data: dict) -> AlgebraSpec:
    try:
        dim = int(data["dim"])
        labels = data.get("labels") or ["b%d" % i for i in range(dim)]
        return AlgebraSpec(
            dim=dim,
            basis_labels=tuple(labels),
            structure_constants=data["mult"],
            unit=data.get("unit"),
            grading=data.get("grading"),
            involution=data.get("involution"),
            name=data.get("name", ""),
        )
    except KeyError as exc:
        raise ValueError("algebra spec is missing field %s" % exc) from None


def load_spec(path: str | Path) -> AlgebraSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


def dump_spec(spec: AlgebraSpec, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_dict(spec), fh, indent=1)
        fh.write("\n")
