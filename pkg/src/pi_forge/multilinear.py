"""Multilinear spaces: one basis monomial per arrangement of the declared variables."""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .free import Kind, Mode, Polynomial, Variable, commutator, variables_of
from .linalg import P0, ModSpan

DEFAULT_MAX_DEGREE = 8


class DegreeCapError(ValueError):
    pass


def degree_cap() -> int:
    raw = os.environ.get("PI_FORGE_MAX_DEGREE")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise DegreeCapError("PI_FORGE_MAX_DEGREE must be an integer, got %r" % raw) from None
    return DEFAULT_MAX_DEGREE


def check_cap(total: int, cap: int | None = None) -> None:
    cap = degree_cap() if cap is None else cap
    if total > cap:
        raise DegreeCapError("total degree %d exceeds the cap %d" % (total, cap))


@dataclass(frozen=True, order=True)
class Signature:
    """Variable counts per kind, in the kind order of the mode."""

    mode: Mode
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if len(counts) != len(self.mode.kinds):
            raise ValueError("%s signatures have %d counts, got %d"
                             % (self.mode.value, len(self.mode.kinds), len(counts)))
        if any(c < 0 for c in counts):
            raise ValueError("counts must be nonnegative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def variables(self) -> list[Variable]:
        return variables_of(self.mode, self.counts)

    def count(self, kind: Kind) -> int:
        return self.counts[self.mode.kinds.index(kind)] if kind in self.mode.kinds else 0

    def sort_key(self) -> tuple:
        return (self.total, self.counts)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.counts) + ")"

    @classmethod
    def of(cls, p: Polynomial, mode: Mode) -> "Signature":
        vs = p.variables()
        for v in vs:
            if v.kind not in mode.kinds:
                raise ValueError("variable %r is not admissible in %s mode" % (v, mode.value))
        return cls(mode, tuple(sum(1 for v in vs if v.kind == k) for k in mode.kinds))


def signatures(mode: Mode, max_degree: int, min_degree: int = 1) -> list[Signature]:
    """All signatures with total degree in [min_degree, max_degree], by degree then counts."""
    out = []
    k = len(mode.kinds)
    for total in range(max(min_degree, 0), max_degree + 1):
        for counts in itertools.product(range(total + 1), repeat=k):
            if sum(counts) == total:
                out.append(Signature(mode, counts))
    return sorted(out, key=Signature.sort_key)


def lehmer_rank(words: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each row, a permutation of 0..n-1."""
    words = np.asarray(words)
    m, n = words.shape
    out = np.zeros(m, dtype=np.int64)
    for i in range(n - 1):
        smaller = (words[:, i + 1:] < words[:, i:i + 1]).sum(axis=1)
        out += smaller * math.factorial(n - 1 - i)
    return out


class MultilinearBasis:
    """All (sum of counts)! words using each declared variable once.

    Variables get ids 0..n-1 in (kind rank, index) order; the basis lists the
    permutations of the ids lexicographically, so a word's position is its
    Lehmer rank.
    """

    def __init__(self, signature: Signature, cap: int | None = None):
        check_cap(signature.total, cap)
        self.signature = signature
        self.variables: list[Variable] = sorted(signature.variables, key=Variable.sort_key)
        self.n = len(self.variables)
        self.size = math.factorial(self.n)
        self._id = {v: i for i, v in enumerate(self.variables)}

    def __len__(self) -> int:
        return self.size

    @cached_property
    def words(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros((1, 0), dtype=np.int8)
        return np.array(list(itertools.permutations(range(self.n))), dtype=np.int8)

    @cached_property
    def monomials(self) -> list[tuple[Variable, ...]]:
        vs = self.variables
        return [tuple(vs[i] for i in w) for w in self.words]

    @cached_property
    def kind_ranks(self) -> np.ndarray:
        return np.array([v.kind.rank for v in self.variables], dtype=np.int8)

    @cached_property
    def skew_mask(self) -> np.ndarray:
        return np.array([v.kind.skew for v in self.variables], dtype=bool)

    @cached_property
    def odd_mask(self) -> np.ndarray:
        return np.array([v.kind.odd for v in self.variables], dtype=bool)

    def var_id(self, v: Variable) -> int:
        return self._id[v]

    def rank(self, words: np.ndarray) -> np.ndarray:
        if self.n == 0:
            return np.zeros(len(words), dtype=np.int64)
        return lehmer_rank(words)

    def index(self, monomial: Sequence[Variable]) -> int:
        ids = [self._id[v] for v in monomial]
        if sorted(ids) != list(range(self.n)):
            raise ValueError("monomial is not multilinear in this signature")
        return int(self.rank(np.array([ids]))[0])

    def id_permutation(self, mapping: Sequence[int]) -> np.ndarray:
        """perm[w] = position of the word obtained by renaming id j to mapping[j]."""
        mapping = np.asarray(mapping)
        return self.rank(mapping[self.words])

    def kind_groups(self) -> list[list[int]]:
        groups: dict[Kind, list[int]] = {}
        for i, v in enumerate(self.variables):
            groups.setdefault(v.kind, []).append(i)
        return list(groups.values())

    def group_generators(self) -> list[np.ndarray]:
        """Renaming permutations generating the product of symmetric groups on each kind."""
        gens = []
        for ids in self.kind_groups():
            if len(ids) < 2:
                continue
            swap = list(range(self.n))
            swap[ids[0]], swap[ids[1]] = ids[1], ids[0]
            gens.append(self.id_permutation(swap))
            if len(ids) > 2:
                cyc = list(range(self.n))
                for a, b in zip(ids, ids[1:] + ids[:1]):
                    cyc[a] = b
                gens.append(self.id_permutation(cyc))
        return gens

    def coordinates(self, p: Polynomial) -> tuple[np.ndarray, int]:
        """Integer coefficient vector and a common denominator."""
        terms = p.terms
        den = 1
        for c in terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        vec = np.zeros(self.size, dtype=np.int64)
        for m, c in terms.items():
            vec[self.index(m)] += int(c * den)
        return vec, den

    def polynomial(self, vec, den: int = 1) -> Polynomial:
        vec = np.asarray(vec)
        nz = np.flatnonzero(vec)
        mons = self.words[nz]
        vs = self.variables
        return Polynomial((tuple(vs[i] for i in w), Fraction(int(vec[j]), int(den)))
                          for j, w in zip(nz, mons))


def enumerate_basis(signature: Signature, cap: int | None = None) -> MultilinearBasis:
    return MultilinearBasis(signature, cap)


# ---------------------------------------------------------------- proper polynomials

def gamma_dim(n_sym: int, n_other: int) -> int:
    """Dimension of the proper multilinear subspace.

    Multilinear words split uniquely into a symmetric product of free
    symmetric variables times a proper part, so the full space has dimension
    sum_k C(n_sym, k) * gamma(n_sym - k); inverting the binomial transform
    gives the proper dimension.
    """
    return sum((-1) ** k * math.comb(n_sym, k) * math.factorial(n_sym - k + n_other)
               for k in range(n_sym + 1))


@dataclass(frozen=True)
class ProperBasis:
    signature: Signature
    polynomials: tuple[Polynomial, ...]
    structures: tuple[tuple[tuple[Variable, ...], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.polynomials)


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _preferred_orders(block: list[int]) -> Iterator[tuple[int, ...]]:
    """Entry orders i1 > i2 < i3 < ... < ik: second entry minimal, tail increasing."""
    lo = min(block)
    others = sorted(b for b in block if b != lo)
    for first in others:
        tail = [b for b in others if b != first]
        yield (first, lo, *tail)


def _expand_block(order: tuple[int, ...]) -> list[tuple[int, tuple[int, ...]]]:
    if len(order) == 1:
        return [(1, order)]
    acc = [(1, (order[0],))]
    for x in order[1:]:
        nxt = []
        for s, w in acc:
            nxt.append((s, w + (x,)))
            nxt.append((-s, (x,) + w))
        acc = nxt
    return acc


def _candidates(basis: MultilinearBasis, tier: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    skew = basis.skew_mask
    ids = list(range(basis.n))
    for part in _set_partitions(ids):
        if any(len(b) == 1 and not skew[b[0]] for b in part):
            continue
        part = sorted(part, key=min)
        per_block = []
        for b in part:
            if len(b) == 1:
                per_block.append([tuple(b)])
            elif tier < 3:
                per_block.append(list(_preferred_orders(b)))
            else:
                per_block.append(list(itertools.permutations(sorted(b))))
        block_orders = [tuple(range(len(part)))] if tier == 1 else itertools.permutations(range(len(part)))
        for order in block_orders:
            for choice in itertools.product(*per_block):
                yield tuple(choice[i] for i in order)


def _structure_vector(basis: MultilinearBasis, blocks: tuple[tuple[int, ...], ...]) -> np.ndarray:
    terms = [(1, ())]
    for b in blocks:
        exp = _expand_block(b)
        terms = [(s1 * s2, w1 + w2) for s1, w1 in terms for s2, w2 in exp]
    vec = np.zeros(basis.size, dtype=np.int64)
    idx = basis.rank(np.array([w for _, w in terms], dtype=np.int8))
    np.add.at(vec, idx, np.array([s for s, _ in terms], dtype=np.int64))
    return vec


def proper_basis(signature: Signature, cap: int | None = None) -> ProperBasis:
    """Basis of the proper multilinear polynomials, built from commutator blocks and skew singletons.

    Candidates are tried in a preference order; each is kept only if it
    raises the modular rank, which certifies independence over Q.  Search
    stops when the rank reaches the known dimension.
    """
    if signature.mode is not Mode.INVOLUTION:
        raise ValueError("proper bases are defined for involution signatures")
    basis = MultilinearBasis(signature, cap)
    n_sym, n_skew = signature.counts
    target = gamma_dim(n_sym, n_skew)
    span = ModSpan(basis.size, P0)
    kept: list[tuple[tuple[int, ...], ...]] = []
    seen: set = set()
    for tier in (1, 2, 3):
        if span.rank >= target:
            break
        batch: list = []
        for cand in _candidates(basis, tier):
            if cand in seen:
                continue
            seen.add(cand)
            batch.append(cand)
            if len(batch) == 64:
                _absorb(basis, span, batch, kept, target)
                batch = []
                if span.rank >= target:
                    break
        if batch and span.rank < target:
            _absorb(basis, span, batch, kept, target)
    if span.rank != target:
        raise RuntimeError("proper basis search reached rank %d of %d" % (span.rank, target))
    vs = basis.variables
    polys = []
    for blocks in kept:
        acc = Polynomial.one()
        for b in blocks:
            entries = [Polynomial.var(vs[i]) for i in b]
            acc = acc * (entries[0] if len(b) == 1 else commutator(*entries))
        polys.append(acc)
    structures = tuple(tuple(tuple(vs[i] for i in b) for b in blocks) for blocks in kept)
    return ProperBasis(signature, tuple(polys), structures)


def _absorb(basis, span, batch, kept, target) -> None:
    mat = np.array([_structure_vector(basis, c) for c in batch])
    chosen = span.add(mat, select=True, stop_at=target)
    kept.extend(batch[i] for i in chosen)
