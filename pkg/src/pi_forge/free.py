"""Free associative algebras on typed variables.

A variable has a kind (parity and symmetry) and a positive index.  Monomials
are tuples of variables; polynomials map monomials to nonzero rationals.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence


class Kind(Enum):
    EVEN_SYM = 0
    EVEN_SKEW = 1
    ODD_SYM = 2
    ODD_SKEW = 3

    @property
    def rank(self) -> int:
        return self.value

    @property
    def odd(self) -> bool:
        return self in (Kind.ODD_SYM, Kind.ODD_SKEW)

    @property
    def skew(self) -> bool:
        return self in (Kind.EVEN_SKEW, Kind.ODD_SKEW)


class Mode(Enum):
    UNGRADED = "ungraded"
    GRADED = "graded"
    INVOLUTION = "involution"
    GRADED_INVOLUTION = "graded-involution"

    @property
    def kinds(self) -> tuple[Kind, ...]:
        return _MODE_KINDS[self]

    @property
    def letters(self) -> dict[Kind, str]:
        return _MODE_LETTERS[self]

    @property
    def uses_involution(self) -> bool:
        return self in (Mode.INVOLUTION, Mode.GRADED_INVOLUTION)

    @property
    def uses_grading(self) -> bool:
        return self in (Mode.GRADED, Mode.GRADED_INVOLUTION)

    @classmethod
    def parse(cls, text: str) -> "Mode":
        key = text.strip().lower().replace("_", "-")
        aliases = {"gr-inv": "graded-involution", "graded-star": "graded-involution",
                   "star": "involution", "trivial": "ungraded"}
        return cls(aliases.get(key, key))


_MODE_KINDS = {
    Mode.UNGRADED: (Kind.EVEN_SYM,),
    Mode.GRADED: (Kind.EVEN_SYM, Kind.ODD_SYM),
    Mode.INVOLUTION: (Kind.EVEN_SYM, Kind.EVEN_SKEW),
    Mode.GRADED_INVOLUTION: (Kind.EVEN_SYM, Kind.EVEN_SKEW, Kind.ODD_SYM, Kind.ODD_SKEW),
}

_MODE_LETTERS = {
    Mode.UNGRADED: {Kind.EVEN_SYM: "x"},
    Mode.GRADED: {Kind.EVEN_SYM: "y", Kind.ODD_SYM: "z"},
    Mode.INVOLUTION: {Kind.EVEN_SYM: "y", Kind.EVEN_SKEW: "z"},
    Mode.GRADED_INVOLUTION: {Kind.EVEN_SYM: "yp", Kind.EVEN_SKEW: "ym",
                             Kind.ODD_SYM: "zp", Kind.ODD_SKEW: "zm"},
}

# letters standing for a variable whose kind ranges over several options
_GENERIC = {
    Mode.GRADED: {"x": (Kind.EVEN_SYM, Kind.ODD_SYM)},
    Mode.INVOLUTION: {"x": (Kind.EVEN_SYM, Kind.EVEN_SKEW)},
    Mode.GRADED_INVOLUTION: {"y": (Kind.EVEN_SYM, Kind.EVEN_SKEW),
                             "z": (Kind.ODD_SYM, Kind.ODD_SKEW),
                             "x": (Kind.EVEN_SYM, Kind.EVEN_SKEW, Kind.ODD_SYM, Kind.ODD_SKEW)},
    Mode.UNGRADED: {},
}


class Variable(NamedTuple):
    kind: Kind
    index: int

    def sort_key(self) -> tuple[int, int]:
        return (self.kind.rank, self.index)

    def __repr__(self) -> str:
        return _letter_for(self.kind, None) + str(self.index)


Monomial = tuple  # tuple[Variable, ...]


def monomial_key(m: Monomial) -> tuple:
    return tuple(v.sort_key() for v in m)


def _letter_for(kind: Kind, mode: Mode | None) -> str:
    if mode is not None:
        return mode.letters[kind]
    return {Kind.EVEN_SYM: "y", Kind.EVEN_SKEW: "ym", Kind.ODD_SYM: "z", Kind.ODD_SKEW: "zm"}[kind]


def infer_mode(kinds: Iterable[Kind]) -> Mode:
    ks = set(kinds)
    if Kind.ODD_SKEW in ks or (Kind.EVEN_SKEW in ks and Kind.ODD_SYM in ks):
        return Mode.GRADED_INVOLUTION
    if Kind.EVEN_SKEW in ks:
        return Mode.INVOLUTION
    return Mode.GRADED


class Polynomial:
    """Finite rational combination of monomials, kept without zero terms."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]] = ()):
        acc: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            c = Fraction(c)
            if c:
                m = tuple(m)
                acc[m] = acc.get(m, Fraction(0)) + c
        self._terms = {m: c for m, c in acc.items() if c}

    @classmethod
    def monomial(cls, *word: Variable, coef=1) -> "Polynomial":
        return cls({tuple(word): coef})

    @classmethod
    def var(cls, v: Variable) -> "Polynomial":
        return cls({(v,): 1})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls({(): 1})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: (len(t[0]), monomial_key(t[0])))

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def variables(self) -> list[Variable]:
        return sorted({v for m in self._terms for v in m}, key=Variable.sort_key)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def is_multilinear(self) -> bool:
        """Every monomial uses the same variables, each exactly once."""
        sets = {frozenset(m) for m in self._terms}
        if len(sets) > 1:
            return False
        return all(len(set(m)) == len(m) for m in self._terms)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(itertools.chain(self._terms.items(), _as_poly(other)._terms.items()))

    def __radd__(self, other):
        if other == 0:
            return self
        return self + other

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-_as_poly(other))

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            out: dict[Monomial, Fraction] = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    m = m1 + m2
                    out[m] = out.get(m, Fraction(0)) + c1 * c2
            return Polynomial(out)
        s = Fraction(other)
        return Polynomial({m: c * s for m, c in self._terms.items()})

    def __rmul__(self, other) -> "Polynomial":
        return Polynomial({m: c * Fraction(other) for m, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return format_polynomial(self)


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial({(): x})


# ---------------------------------------------------------------- operations

def commutator(*args: Polynomial) -> Polynomial:
    """Left-normed commutator [a, b, c, ...] = [[a, b], c] ..."""
    if len(args) < 2:
        raise ValueError("a commutator needs at least two entries")
    acc = _as_poly(args[0])
    for nxt in args[1:]:
        nxt = _as_poly(nxt)
        acc = acc * nxt - nxt * acc
    return acc


def circ(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b + b * a


def expand_commutator(expr) -> Polynomial:
    """Expand a nested bracket expression.

    expr is a Variable, a Polynomial, a list/tuple of sub-expressions (read as a
    left-normed commutator), or a string in the plain-text syntax.
    """
    if isinstance(expr, str):
        return parse_polynomial(expr)
    if isinstance(expr, Variable):
        return Polynomial.var(expr)
    if isinstance(expr, Polynomial):
        return expr
    if isinstance(expr, (list, tuple)):
        if len(expr) < 2:
            raise ValueError("malformed commutator: fewer than two entries")
        return commutator(*[expand_commutator(e) for e in expr])
    raise ValueError("malformed commutator expression: %r" % (expr,))


def rename(p: Polynomial, mapping: Mapping[Variable, Variable]) -> Polynomial:
    return Polynomial((tuple(mapping.get(v, v) for v in m), c) for m, c in p.terms.items())


def alternate(p: Polynomial, varset: Sequence[Variable]) -> Polynomial:
    """Sum over permutations of varset, each renaming weighted by its sign."""
    varset = list(varset)
    if len({v.kind for v in varset}) > 1:
        raise ValueError("alternated variables must share a kind")
    present = set(p.variables())
    missing = [v for v in varset if v not in present]
    if missing:
        raise ValueError("variables %s do not occur" % missing)
    out = Polynomial()
    for perm in itertools.permutations(range(len(varset))):
        mapping = {varset[i]: varset[perm[i]] for i in range(len(varset))}
        out = out + permutation_sign(perm) * rename(p, mapping)
    return out


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def star(m: Monomial) -> tuple[int, Monomial]:
    """Involution on a monomial: reversal, with a sign per skew letter."""
    sign = -1 if sum(v.kind.skew for v in m) % 2 else 1
    return sign, tuple(reversed(m))


def star_poly(p: Polynomial) -> Polynomial:
    out = []
    for m, c in p.terms.items():
        s, r = star(m)
        out.append((r, s * c))
    return Polynomial(out)


def graded_degree(m: Monomial) -> int:
    return sum(v.kind.odd for v in m) % 2


def substitute(p: Polynomial, assignment: Mapping[Variable, Polynomial], check: bool = True) -> Polynomial:
    """Endomorphic image of p: each variable is replaced by its assigned polynomial.

    With check=True the assignment must respect kinds: the image of an odd
    (even) variable is homogeneous of odd (even) degree, and the image of a
    symmetric (skew) variable is symmetric (skew) under the involution.
    """
    if check:
        for v, img in assignment.items():
            _check_kind(v, img)
    out = Polynomial()
    cache = {v: _as_poly(img) for v, img in assignment.items()}
    for m, c in p.terms.items():
        acc = Polynomial.one() * c
        for v in m:
            acc = acc * cache.get(v, Polynomial.var(v))
        out = out + acc
    return out


def _check_kind(v: Variable, img) -> None:
    img = _as_poly(img)
    degs = {graded_degree(m) for m in img.terms}
    if degs and degs != {int(v.kind.odd)}:
        raise ValueError("image of %r is not homogeneous of degree %d" % (v, int(v.kind.odd)))
    if any(x.kind.skew for m in img.terms for x in m) or v.kind.skew:
        want = -img if v.kind.skew else img
        if star_poly(img) != want:
            raise ValueError("image of %r is not %s" % (v, "skew" if v.kind.skew else "symmetric"))


def multilinearize(p: Polynomial, fresh: Callable[[Variable, int], Variable] | None = None) -> Polynomial:
    """Full linearization: each variable of degree k is split into k new ones.

    The result sums, over every monomial, all ways of distributing the new
    variables among the old occurrences.  By default the copies of a variable
    of kind K get consecutive fresh indices of kind K in variable order.
    """
    degs: dict[Variable, int] = {}
    for m in p.terms:
        for v in set(m):
            degs[v] = max(degs.get(v, 0), m.count(v))
    if fresh is None:
        counters: dict[Kind, int] = {}
        table: dict[tuple[Variable, int], Variable] = {}
        for v in sorted(degs, key=Variable.sort_key):
            for j in range(degs[v]):
                counters[v.kind] = counters.get(v.kind, 0) + 1
                table[(v, j)] = Variable(v.kind, counters[v.kind])
        fresh = lambda v, j: table[(v, j)]  # noqa: E731
    out: dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        if any(m.count(v) != degs[v] for v in degs):
            continue
        slots: dict[Variable, list[int]] = {}
        for pos, v in enumerate(m):
            slots.setdefault(v, []).append(pos)
        pieces = [[(v, perm) for perm in itertools.permutations(range(degs[v]))] for v in slots]
        for choice in itertools.product(*pieces):
            word = list(m)
            for v, perm in choice:
                for k, pos in enumerate(slots[v]):
                    word[pos] = fresh(v, perm[k])
            w = tuple(word)
            out[w] = out.get(w, Fraction(0)) + c
    return Polynomial(out)


def multihomogeneous_components(p: Polynomial) -> list[Polynomial]:
    groups: dict[tuple, dict] = {}
    for m, c in p.terms.items():
        key = tuple(sorted(((v.kind.rank, v.index), m.count(v)) for v in set(m)))
        groups.setdefault(key, {})[m] = c
    return [Polynomial(g) for _, g in sorted(groups.items())]


def standard_polynomial(vars_: Sequence[Variable]) -> Polynomial:
    out = []
    for perm in itertools.permutations(range(len(vars_))):
        out.append((tuple(vars_[i] for i in perm), permutation_sign(perm)))
    return Polynomial(out)


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\s*(?:(?P<var>(?:yp|ym|zp|zm|x|y|z)\d+)|(?P<num>\d+(?:/\d+)?)|(?P<fn>std|s)\(|"
                    r"(?P<op>[()\[\],+\-*])|(?P<circ>o))")


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected input at %r" % text[pos:pos + 10])
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


@dataclass
class _Node:
    op: str
    args: list
    value: object = None


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError("expected %r, found %r" % (value, tok[1]))
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.i != len(self.toks):
            raise ParseError("trailing input starting at %r" % (self.toks[self.i][1],))
        return node

    def expr(self):
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        terms = [(sign, self.circ())]
        while self.peek()[1] in ("+", "-"):
            s = -1 if self.take()[1] == "-" else 1
            terms.append((s, self.circ()))
        return _Node("sum", terms)

    def circ(self):
        node = self.product()
        while self.peek()[0] == "circ":
            self.take()
            node = _Node("circ", [node, self.product()])
        return node

    def product(self):
        factors = []
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                continue
            if kind in ("var", "num", "fn") or (kind == "op" and val in ("(", "[")):
                factors.append(self.factor())
            else:
                break
        if not factors:
            raise ParseError("expected a factor, found %r" % (self.peek()[1],))
        return _Node("prod", factors)

    def factor(self):
        kind, val = self.take()
        if kind == "var":
            return _Node("var", [], val)
        if kind == "num":
            return _Node("num", [], Fraction(val))
        if kind == "fn":
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.take(")")
            return _Node(val, args)
        if val == "(":
            node = self.expr()
            self.take(")")
            return node
        if val == "[":
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.take("]")
            if len(args) < 2:
                raise ParseError("a commutator needs at least two entries")
            return _Node("comm", args)
        raise ParseError("unexpected %r" % val)


def _split_name(name: str) -> tuple[str, int]:
    m = re.fullmatch(r"([a-z]+)(\d+)", name)
    return m.group(1), int(m.group(2))


def _names(node: _Node, acc: set) -> set:
    if node.op == "var":
        acc.add(node.value)
    for a in node.args:
        if isinstance(a, tuple):
            _names(a[1], acc)
        else:
            _names(a, acc)
    return acc


def _evaluate(node: _Node, env: Mapping[str, Variable]) -> Polynomial:
    op = node.op
    if op == "var":
        return Polynomial.var(env[node.value])
    if op == "num":
        return Polynomial({(): node.value})
    if op == "sum":
        out = Polynomial()
        for s, t in node.args:
            out = out + s * _evaluate(t, env)
        return out
    if op == "prod":
        acc = Polynomial.one()
        for f in node.args:
            acc = acc * _evaluate(f, env)
        return acc
    if op == "circ":
        return circ(_evaluate(node.args[0], env), _evaluate(node.args[1], env))
    if op == "comm":
        return commutator(*[_evaluate(a, env) for a in node.args])
    if op == "std":
        vs = []
        for a in node.args:
            p = _evaluate(a, env)
            vs_ = p.variables()
            if len(p.terms) != 1 or len(vs_) != 1:
                raise ParseError("std() takes variables")
            vs.append(vs_[0])
        return standard_polynomial(vs)
    if op == "s":
        if len(node.args) != 2:
            raise ParseError("s() takes two variables")
        kinds = []
        for a in node.args:
            p = _evaluate(a, env)
            if len(p.variables()) != 1:
                raise ParseError("s() takes variables")
            kinds.append(p.variables()[0].kind)
        # [u, v] is symmetric exactly when one entry is skew and the other is not
        mixed = kinds[0].skew != kinds[1].skew
        return Polynomial({(): -1 if mixed else 1})
    raise ParseError("unknown operation %r" % op)


def _resolve(name: str, mode: Mode) -> Variable | tuple[Kind, ...]:
    letter, idx = _split_name(name)
    for kind, lt in mode.letters.items():
        if lt == letter:
            return Variable(kind, idx)
    generic = _GENERIC[mode].get(letter)
    if generic is None:
        raise ParseError("variable %r is not admissible in %s mode" % (name, mode.value))
    return generic


def parse_generic(text: str, mode: Mode) -> list[Polynomial]:
    """Parse text and expand generic letters over every admissible kind.

    Each assignment of kinds yields one polynomial; zero results are dropped.
    """
    tree = _Parser(_tokenize(text)).parse()
    names = sorted(_names(tree, set()))
    fixed: dict[str, Variable] = {}
    open_: dict[str, tuple[Kind, ...]] = {}
    for n in names:
        r = _resolve(n, mode)
        if isinstance(r, Variable):
            fixed[n] = r
        else:
            open_[n] = r
    out = []
    keys = list(open_)
    for choice in itertools.product(*[open_[k] for k in keys]):
        env = dict(fixed)
        for k, kind in zip(keys, choice):
            v = Variable(kind, _split_name(k)[1])
            if v in env.values():
                raise ParseError("generic %s collides with an explicit variable" % k)
            env[k] = v
        p = _evaluate(tree, env)
        if not p.is_zero() and p not in out:
            out.append(p)
    return out


def parse_polynomial(text: str, mode: Mode | None = None) -> Polynomial:
    """Parse a single polynomial; generic letters are not allowed here."""
    if mode is None:
        mode = _guess_mode(text)
    polys = parse_generic(text, mode)
    tree = _Parser(_tokenize(text)).parse()
    if any(not isinstance(_resolve(n, mode), Variable) for n in _names(tree, set())):
        raise ParseError("generic variables need parse_generic")
    return polys[0] if polys else Polynomial()


def _guess_mode(text: str) -> Mode:
    names = {_split_name(t[1])[0] for t in _tokenize(text) if t[0] == "var"}
    if names & {"yp", "ym", "zp", "zm"}:
        return Mode.GRADED_INVOLUTION
    if names == {"x"}:
        return Mode.UNGRADED
    return Mode.GRADED


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def format_monomial(m: Monomial, mode: Mode | None = None) -> str:
    if not m:
        return "1"
    if mode is None:
        mode = infer_mode(v.kind for v in m)
    return " ".join(_letter_for(v.kind, mode) + str(v.index) for v in m)


def format_polynomial(p: Polynomial, mode: Mode | None = None) -> str:
    if p.is_zero():
        return "0"
    if mode is None:
        mode = infer_mode(v.kind for v in p.variables())
    parts = []
    for i, (m, c) in enumerate(p.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_monomial(m, mode)
        if not m:
            text = _frac_text(a)
        elif a == 1:
            text = body
        else:
            text = _frac_text(a) + " " + body
        if i == 0:
            parts.append(("-" if sign == "-" else "") + text)
        else:
            parts.append(sign + " " + text)
    return " ".join(parts)


def variables_of(mode: Mode, counts: Sequence[int]) -> list[Variable]:
    if len(counts) != len(mode.kinds):
        raise ValueError("%s mode takes %d counts" % (mode.value, len(mode.kinds)))
    return [Variable(k, i + 1) for k, n in zip(mode.kinds, counts) for i in range(n)]


def iter_words(vars_: Sequence[Variable]) -> Iterator[Monomial]:
    yield from itertools.permutations(sorted(vars_, key=Variable.sort_key))
