from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pi_forge.algebra import (BUILTIN_NAMES, AlgebraSpec, Element, builtin, dump_spec, homogeneous_basis,
                              load_spec, multiply, validate)

U, D, A, B, C = range(5)

# matrix-unit oracle: the five basis elements as explicit 3x3 integer matrices
MATS = {
    U: np.array([[1, 0, 0], [0, 0, 0], [0, 0, 1]]),
    D: np.array([[0, 0, 0], [0, 1, 0], [0, 0, 0]]),
    A: np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]),
    B: np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]]),
    C: np.array([[0, 0, 1], [0, 0, 0], [0, 0, 0]]),
}


def to_mat(e: Element) -> np.ndarray:
    return sum(int(c) * MATS[i] for i, c in enumerate(e.coeffs))


def unit(i):
    return builtin("A-star").basis_element(i)


def test_e12_times_e23_is_e13():
    assert multiply(builtin("A-star"), unit(A), unit(B)) == unit(C)


def test_e23_times_e12_vanishes():
    assert multiply(builtin("A-star"), unit(B), unit(A)).is_zero()


def test_outer_idempotent_acts_on_the_left_only():
    spec = builtin("A-star")
    assert multiply(spec, unit(U), unit(A)) == unit(A)
    assert multiply(spec, unit(A), unit(U)).is_zero()


def test_structure_constants_match_matrix_products():
    spec = builtin("A-star")
    for i in range(5):
        for j in range(5):
            got = to_mat(multiply(spec, unit(i), unit(j)))
            assert (got == MATS[i] @ MATS[j]).all()


coeff = st.integers(-4, 4)
element = st.tuples(coeff, coeff, coeff, coeff, coeff).map(lambda t: Element(tuple(Fraction(x) for x in t)))


@given(element, element)
def test_multiplication_agrees_with_matrices(x, y):
    assert (to_mat(multiply(builtin("A-star"), x, y)) == to_mat(x) @ to_mat(y)).all()


@given(element, element)
def test_involution_is_an_antihomomorphism(x, y):
    spec = builtin("A-star")
    assert spec.star(multiply(spec, x, y)) == multiply(spec, spec.star(y), spec.star(x))
    assert spec.star(spec.star(x)) == x


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_validate(name):
    report = validate(builtin(name))
    assert report.ok, [c for c in report.checks if not c.passed]


def test_star_builtin_passes_antihomomorphism():
    assert validate(builtin("A-star"))["involution antihomomorphism"].passed


def test_perturbed_constants_break_associativity():
    base = builtin("A-star")
    sc = [[list(v) for v in row] for row in base.structure_constants]
    sc[U][A][A] = Fraction(2)  # (uu)a = 2a but u(ua) = 4a
    bad = AlgebraSpec(5, base.basis_labels, sc, None, None, None, "perturbed")
    check = validate(bad)["associativity"]
    assert not check.passed and check.witness is not None


def test_odd_component_of_first_grading():
    assert homogeneous_basis(builtin("A1"), degree=1) == [unit(A), unit(B)]


def test_skew_part_under_reflection():
    (e,) = homogeneous_basis(builtin("A-star"), sign="-")
    assert e == Element((0, 0, 1, -1, 0)) or e == Element((0, 0, -1, 1, 0))


def test_even_skew_component_is_empty():
    assert homogeneous_basis(builtin("A1-star"), degree=0, sign="-") == []


def test_decoration_errors():
    with pytest.raises(ValueError):
        homogeneous_basis(builtin("A1"), sign="-")
    with pytest.raises(ValueError):
        homogeneous_basis(builtin("A-star"), degree=0)


def test_dimension_mismatch_is_rejected():
    with pytest.raises(ValueError):
        multiply(builtin("A1"), Element((1, 0)), unit(A))


def test_spec_file_round_trip(tmp_path):
    spec = builtin("A1-star")
    path = tmp_path / "a.json"
    dump_spec(spec, path)
    again = load_spec(path)
    assert again.structure_constants == spec.structure_constants
    assert again.grading == spec.grading and again.involution == spec.involution and again.unit == spec.unit


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin("B7")
