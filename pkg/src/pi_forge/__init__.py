"""Exact polynomial-identity computations for small patterned matrix algebras."""
from .algebra import AlgebraSpec, Element, builtin, load_spec, multiply
from .bases import load_basis
from .free import Kind, Mode, Polynomial, Variable, format_polynomial, parse_generic, parse_polynomial
from .gradings import classify_z2, diagonalize_idempotent, elementary_grading
from .identities import consequence_space, identity_space, is_identity, quotient_dim, verify_basis
from .multilinear import Signature, enumerate_basis, proper_basis, signatures
from .representation import cocharacter, multiplicity

__all__ = [
    "AlgebraSpec", "Element", "builtin", "load_spec", "multiply", "load_basis",
    "Kind", "Mode", "Polynomial", "Variable", "format_polynomial", "parse_generic", "parse_polynomial",
    "classify_z2", "diagonalize_idempotent", "elementary_grading",
    "consequence_space", "identity_space", "is_identity", "quotient_dim", "verify_basis",
    "Signature", "enumerate_basis", "proper_basis", "signatures", "cocharacter", "multiplicity",
]
__version__ = "0.1.0"
