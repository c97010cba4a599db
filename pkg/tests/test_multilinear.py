import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pi_forge.free import Kind, Mode, Polynomial, Variable
from pi_forge.linalg import fraction_rref, nullspace
from pi_forge.multilinear import (DegreeCapError, MultilinearBasis, Signature, degree_cap, enumerate_basis,
                                  gamma_dim, lehmer_rank, proper_basis, signatures)

y1, y2 = Variable(Kind.EVEN_SYM, 1), Variable(Kind.EVEN_SYM, 2)
z1, z2 = Variable(Kind.ODD_SYM, 1), Variable(Kind.ODD_SYM, 2)


def test_graded_bases():
    b = enumerate_basis(Signature(Mode.GRADED, (1, 1)))
    assert set(b.monomials) == {(y1, z1), (z1, y1)} and b.size == 2
    assert enumerate_basis(Signature(Mode.GRADED, (2, 1))).size == 6


def test_graded_involution_basis():
    b = enumerate_basis(Signature(Mode.GRADED_INVOLUTION, (1, 0, 1, 0)))
    assert b.monomials == [(y1, z1), (z1, y1)]


def test_index_is_position():
    b = enumerate_basis(Signature(Mode.GRADED, (2, 2)))
    for i, m in enumerate(b.monomials):
        assert b.index(m) == i


def test_non_multilinear_monomial_is_rejected():
    with pytest.raises(ValueError):
        enumerate_basis(Signature(Mode.GRADED, (2, 0))).index((y1, y1))


def test_degree_cap(monkeypatch):
    with pytest.raises(DegreeCapError):
        MultilinearBasis(Signature(Mode.UNGRADED, (9,)))
    monkeypatch.setenv("PI_FORGE_MAX_DEGREE", "10")
    assert degree_cap() == 10


def test_signatures_listing():
    sigs = signatures(Mode.GRADED, 2)
    assert [s.counts for s in sigs] == [(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]


@given(st.permutations(range(5)))
def test_lehmer_rank_matches_lexicographic_order(perm):
    import numpy as np
    everything = sorted(itertools.permutations(range(5)))
    assert int(lehmer_rank(np.array([perm]))[0]) == everything.index(tuple(perm))


@given(st.integers(0, 2), st.integers(0, 2), st.lists(st.integers(-3, 3), min_size=24, max_size=24))
def test_coordinates_round_trip(a, b, values):
    basis = enumerate_basis(Signature(Mode.GRADED, (a, b)))
    p = Polynomial((m, Fraction(c, 2)) for m, c in zip(basis.monomials, values))
    vec, den = basis.coordinates(p)
    assert basis.polynomial(vec, den) == p


def proper_dimension_oracle(n_sym: int, n_skew: int) -> int:
    """Proper polynomials are those killed by deleting any symmetric letter (set it to 1)."""
    sig = Signature(Mode.INVOLUTION, (n_sym, n_skew))
    basis = enumerate_basis(sig)
    sym = [v for v in basis.variables if v.kind is Kind.EVEN_SYM]
    rows = []
    for v in sym:
        smaller = list(itertools.permutations([w for w in basis.variables if w != v]))
        pos = {m: i for i, m in enumerate(smaller)}
        block = [[0] * basis.size for _ in smaller]
        for j, m in enumerate(basis.monomials):
            block[pos[tuple(x for x in m if x != v)]][j] += 1
        rows.extend(block)
    if not rows:
        return basis.size
    return len(nullspace(rows))


@pytest.mark.parametrize("n_sym,n_skew", [(2, 0), (0, 2), (2, 1), (3, 0), (3, 1), (2, 2), (4, 0), (1, 3)])
def test_proper_dimension_matches_oracle(n_sym, n_skew):
    expected = proper_dimension_oracle(n_sym, n_skew)
    assert gamma_dim(n_sym, n_skew) == expected
    assert proper_basis(Signature(Mode.INVOLUTION, (n_sym, n_skew))).dim == expected


def test_small_proper_bases():
    (lone,) = proper_basis(Signature(Mode.INVOLUTION, (2, 0))).polynomials
    s1, s2 = Variable(Kind.EVEN_SYM, 1), Variable(Kind.EVEN_SYM, 2)
    assert lone in (Polynomial([((s1, s2), 1), ((s2, s1), -1)]), Polynomial([((s1, s2), -1), ((s2, s1), 1)]))
    assert proper_basis(Signature(Mode.INVOLUTION, (0, 2))).dim == 2


def test_proper_basis_elements_are_independent_and_proper():
    sig = Signature(Mode.INVOLUTION, (3, 1))
    pb = proper_basis(sig)
    basis = enumerate_basis(sig)
    vecs = [[Fraction(int(x), d) for x in vec] for vec, d in (basis.coordinates(p) for p in pb.polynomials)]
    assert len(fraction_rref(vecs)[1]) == pb.dim
    sym = [v for v in basis.variables if v.kind is Kind.EVEN_SYM]
    for p in pb.polynomials:
        for v in sym:
            deleted = Polynomial((tuple(x for x in m if x != v), c) for m, c in p.terms.items())
            assert deleted.is_zero()


def test_gamma_without_symmetric_letters_is_factorial():
    assert [gamma_dim(0, n) for n in range(5)] == [math.factorial(n) for n in range(5)]
