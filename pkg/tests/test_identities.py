import itertools
from fractions import Fraction

import numpy as np
import pytest

from pi_forge.algebra import builtin
from pi_forge.free import Kind, Mode, Polynomial, Variable, commutator, parse_polynomial
from pi_forge.identities import (DecorationError, GeneratorNotIdentity, component_basis, consequence_space,
                                 evaluation_matrix, identity_space, is_identity, quotient_dim, verify_basis)
from pi_forge.linalg import nullspace
from pi_forge.multilinear import Signature, enumerate_basis

y = [None] + [Variable(Kind.EVEN_SYM, i) for i in range(1, 6)]
z = [None] + [Variable(Kind.ODD_SYM, i) for i in range(1, 6)]


def v(x):
    return Polynomial.var(x)


# oracle: the five basis elements as 3x3 matrices, products by numpy
MATS = [np.array(m) for m in (
    [[1, 0, 0], [0, 0, 0], [0, 0, 1]], [[0, 0, 0], [0, 1, 0], [0, 0, 0]], [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 0, 0]], [[0, 0, 1], [0, 0, 0], [0, 0, 0]])]


def as_matrix(e):
    return sum(Fraction(c) * MATS[i].astype(object) for i, c in enumerate(e.coeffs))


def oracle_identity_dim(spec, sig):
    """Left kernel of the brute-force evaluation matrix built from explicit matrix products."""
    basis = enumerate_basis(sig)
    comps = [[as_matrix(e) for e in component_basis(spec, x.kind, sig.mode)] for x in basis.variables]
    cols = []
    for choice in itertools.product(*comps):
        vals = []
        for w in basis.words:
            m = np.eye(3, dtype=object)
            for i in w:
                m = m.dot(choice[i])
            vals.append(list(m.ravel()))
        cols.extend(zip(*vals))
    if not cols:
        return basis.size
    return len(nullspace([list(c) for c in cols]))


@pytest.mark.parametrize("name,mode,counts", [
    ("A1", Mode.GRADED, (2, 1)), ("A1", Mode.GRADED, (1, 2)), ("A2", Mode.GRADED, (1, 2)),
    ("A3", Mode.GRADED, (2, 2)), ("A-star", Mode.INVOLUTION, (1, 2)), ("A-star", Mode.INVOLUTION, (2, 2)),
    ("A1-star", Mode.GRADED_INVOLUTION, (1, 0, 1, 1)), ("A-trivial", Mode.UNGRADED, (3,)),
])
def test_identity_dimension_matches_matrix_oracle(name, mode, counts):
    spec, sig = builtin(name), Signature(mode, counts)
    assert identity_space(spec, sig).dim == oracle_identity_dim(spec, sig)


def test_odd_cube_has_zero_evaluations():
    m = evaluation_matrix(builtin("A1"), Signature(Mode.GRADED, (0, 3)))
    assert m.shape[0] == 6 and not np.any(m)


def test_even_pair_evaluation_rank():
    spec = builtin("A1")
    sig = Signature(Mode.GRADED, (2, 0))
    m = evaluation_matrix(spec, sig)
    assert (m[0] == m[1]).all()
    assert quotient_dim(spec, sig) == 1


def test_single_ungraded_variable():
    assert quotient_dim(builtin("A-trivial"), Signature(Mode.UNGRADED, (1,))) == 1


def test_identity_space_rows_are_identities():
    spec = builtin("A3")
    space = identity_space(spec, Signature(Mode.GRADED, (2, 1)))
    for p in space.polynomials():
        assert is_identity(spec, p, Mode.GRADED)
        assert space.contains(p)


def test_is_identity_multilinear():
    spec = builtin("A1")
    assert is_identity(spec, commutator(v(y[1]), v(y[2])))
    assert is_identity(spec, v(z[1]) * v(z[2]) * v(z[3]))
    res = is_identity(spec, commutator(v(y[1]), v(z[1])))
    assert not res and set(res.witness) == {y[1], z[1]}


def test_is_identity_non_multilinear_uses_exact_grid():
    spec = builtin("A1")
    assert is_identity(spec, v(z[1]) * v(z[1]) * v(z[1]))
    res = is_identity(spec, v(z[1]) * v(z[1]))
    assert not res and res.value is not None and not res.value.is_zero()


def test_involution_mode_needs_an_involution():
    with pytest.raises(DecorationError):
        is_identity(builtin("A1"), parse_polynomial("y1 z1", Mode.INVOLUTION), Mode.INVOLUTION)


def brute_consequence_dim(n: int) -> int:
    """Span of u [m1, m2] w over words u, m1, m2, w that use y1..yn exactly once in total."""
    basis = enumerate_basis(Signature(Mode.GRADED, (n, 0)))
    rows = []
    for word in basis.monomials:
        for cut in itertools.combinations(range(n + 1), 3):
            a, b, c = cut
            if a == b or b == c:
                continue
            u, m1, m2, w = word[:a], word[a:b], word[b:c], word[c:]
            p = Polynomial.monomial(*u) * commutator(Polynomial.monomial(*m1), Polynomial.monomial(*m2)) \
                * Polynomial.monomial(*w)
            vec, _ = basis.coordinates(p)
            rows.append([int(x) for x in vec])
    return basis.size - len(nullspace(rows)) if rows else 0


def test_commutator_consequences_in_degree_three():
    assert brute_consequence_dim(3) == 5
    sig = Signature(Mode.GRADED, (3, 0))
    cons = consequence_space([commutator(v(y[1]), v(y[2]))], sig)
    assert cons.dim == 5 == identity_space(builtin("A1"), sig).dim


def test_odd_cube_generates_everything():
    cons = consequence_space([v(z[1]) * v(z[2]) * v(z[3])], Signature(Mode.GRADED, (0, 3)))
    assert cons.dim == 6


@pytest.mark.parametrize("counts", [(0, 1, 0, 0), (1, 1, 0, 0), (0, 1, 1, 0), (1, 1, 0, 1)])
def test_even_skew_letter_generates_everything(counts):
    sig = Signature(Mode.GRADED_INVOLUTION, counts)
    gen = v(Variable(Kind.EVEN_SKEW, 1))
    assert consequence_space([gen], sig).dim == enumerate_basis(sig).size


def test_consequences_are_identities():
    spec = builtin("A1")
    gens = [parse_polynomial(t, Mode.GRADED) for t in ("[y1,y2]", "z1 z2 z3")]
    sig = Signature(Mode.GRADED, (2, 2))
    ids = identity_space(spec, sig)
    assert 0 < ids.dim < enumerate_basis(sig).size
    cons = consequence_space(gens, sig)
    assert cons.dim == ids.dim
    for p in cons.polynomials():
        assert ids.contains(p)


def test_verify_first_grading_through_degree_four():
    spec = builtin("A1")
    gens = [commutator(v(y[1]), v(y[2])), v(z[1]) * v(z[2]) * v(z[3])]
    report = verify_basis(spec, gens, 4)
    assert report.passed
    assert all(r.dimCons == r.dimId for r in report.records)
    assert "basis verified through degree 4" in report.to_text()


def test_missing_generator_is_reported():
    report = verify_basis(builtin("A1"), [commutator(v(y[1]), v(y[2]))], 3)
    assert not report.passed
    assert [str(r.signature) for r in report.failures()] == ["(0,3)"]
    assert report.failures()[0].dimCons < report.failures()[0].dimId


def test_non_identity_generator_is_refused():
    with pytest.raises(GeneratorNotIdentity):
        verify_basis(builtin("A1"), [commutator(v(y[1]), v(z[1]))], 2)


def test_report_formats():
    report = verify_basis(builtin("A1"), [commutator(v(y[1]), v(y[2]))], 2)
    import json
    data = json.loads(report.to_json())
    assert set(data["records"][0]) == {"signature", "dimP", "dimId", "dimCons", "verdict"}
    assert report.to_csv().splitlines()[0] == "signature,dimP,dimId,dimCons,verdict"


def test_even_odd_product_commutator_is_redundant():
    # [y1, z1 z2] is an identity of A1 and already a consequence of [y1, y2]
    gen = parse_polynomial("[y1, z1 z2]", Mode.GRADED)
    assert is_identity(builtin("A1"), gen)
    cons = consequence_space([commutator(v(y[1]), v(y[2]))], Signature(Mode.GRADED, (1, 2)))
    assert cons.contains(gen)
