"""Exact multivariate polynomials over the rationals.

Variables are plain strings.  ``d`` stands for the derivation ∂; ``l``, ``m``,
``g``, ``l1`` .. ``l4`` and ``t`` are the usual slot / deformation variables.
Fresh slot names (``_1``, ``_2``, ...) come from :func:`fresh`.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from fractions import Fraction
from functools import lru_cache
from typing import Union

Monomial = tuple  # tuple[tuple[str, int], ...], sorted by variable name

DERIV = "d"
KNOWN_VARS = ("d", "l", "l1", "l2", "l3", "l4", "m", "g", "t")

_fresh_counter = itertools.count(1)


def fresh(prefix: str = "_") -> str:
    """Return a variable name never handed out before."""
    return f"{prefix}{next(_fresh_counter)}"


@lru_cache(maxsize=65536)
def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Poly:
    """Immutable polynomial: a mapping monomial -> nonzero Fraction."""

    __slots__ = ("_hash", "_terms")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = _to_fraction(c)
                if c:
                    mono = tuple(sorted((v, e) for v, e in mono if e))
                    clean[mono] = clean.get(mono, 0) + c
                    if not clean[mono]:
                        del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> Poly:
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> Poly:
        c = _to_fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> Poly:
        if power < 0:
            raise ValueError("negative exponent")
        return cls._raw({((name, power),) if power else (): Fraction(1)})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def variables(self) -> set[str]:
        return {v for mono in self._terms for v, _ in mono}

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e for _, e in mono) for mono in self._terms)
        return max(dict(mono).get(var, 0) for mono in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def is_constant(self) -> bool:
        return all(mono == () for mono in self._terms)

    def coefficients(self, variables: Iterable[str]) -> dict[Monomial, Poly]:
        """Split by monomials in ``variables``; values are polys in the rest."""
        vs = set(variables)
        out: dict = {}
        for mono, c in self._terms.items():
            inner = tuple(x for x in mono if x[0] in vs)
            rest = tuple(x for x in mono if x[0] not in vs)
            out.setdefault(inner, {})[rest] = c
        return {k: Poly._raw(v) for k, v in out.items()}

    def coefficient(self, mono: Mapping[str, int]) -> Fraction:
        key = tuple(sorted((v, e) for v, e in mono.items() if e))
        return self._terms.get(key, Fraction(0))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> Poly:
        other = as_poly(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-as_poly(other))

    def __rsub__(self, other) -> Poly:
        return as_poly(other) - self

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = as_poly(other)
        if not self._terms or not other._terms:
            return ZERO
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(out)

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        c = _to_fraction(c)
        if not c:
            return ZERO
        return Poly._raw({m: v * c for m, v in self._terms.items()})

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- substitution -----------------------------------------------------
    def subs(self, assignments: Mapping[str, object]) -> Poly:
        """Simultaneous substitution of variables by polynomials."""
        if not self._terms:
            return self
        present = self.variables()
        mapping = {v: as_poly(p) for v, p in assignments.items() if v in present}
        if not mapping:
            return self
        powers: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                powers[key] = mapping[v] ** e
            return powers[key]

        out: dict = {}
        for mono, c in self._terms.items():
            kept = []
            factor = None
            for v, e in mono:
                if v in mapping:
                    p = power(v, e)
                    factor = p if factor is None else factor * p
                else:
                    kept.append((v, e))
            if factor is None:
                piece = {tuple(kept): c}
            else:
                piece = {}
                kept = tuple(kept)
                for m2, c2 in factor._terms.items():
                    m = _mono_mul(kept, m2)
                    piece[m] = piece.get(m, 0) + c * c2
            for m, v in piece.items():
                s = out.get(m, 0) + v
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    def rename(self, mapping: Mapping[str, str]) -> Poly:
        return self.subs({a: Poly.var(b) for a, b in mapping.items()})

    # -- rendering --------------------------------------------------------
    def sorted_terms(self):
        def key(item):
            mono, _ = item
            return (-sum(e for _, e in mono), tuple((v, -e) for v, e in mono))

        return sorted(self._terms.items(), key=key)

    def render(self) -> str:
        """Render in the DSL syntax, e.g. ``d + 3/2*l``."""
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = [v if e == 1 else f"{v}^{e}" for v, e in mono]
            mag = abs(c)
            coef = str(mag) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if factors:
                body = "*".join(factors if mag == 1 else [coef] + factors)
            else:
                body = coef
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Poly({self.render()!r})"


ZERO = Poly._raw({})
ONE = Poly._raw({(): Fraction(1)})
D = Poly.var(DERIV)

PolyLike = Union[Poly, int, Fraction, str]


def as_poly(x) -> Poly:
    """Coerce ints, Fractions and variable names to :class:`Poly`."""
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    if isinstance(x, str):
        return Poly.var(x)
    raise TypeError(f"cannot coerce {x!r} to Poly")


def arith(p: PolyLike, q: PolyLike, op: str) -> Poly:
    p, q = as_poly(p), as_poly(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op in ("mul", "scalar_mul"):
        if op == "scalar_mul" and not q.is_constant():
            raise ValueError("scalar_mul expects a constant right operand")
        return p * q
    raise ValueError(f"unknown op {op!r}")


def substitute(p: PolyLike, assignments: Mapping[str, PolyLike]) -> Poly:
    return as_poly(p).subs(assignments)


def is_zero(p: PolyLike) -> bool:
    return as_poly(p).is_zero()


def parse_poly(text: str, allowed: Iterable[str] | None = None) -> Poly:
    """Parse the textual syntax (``d + 3/2*l1``) into a polynomial."""
    from lcs._expr import parse_expression

    combo = parse_expression(text, symbols={}, variables=allowed)
    if set(combo) - {None}:
        raise ValueError("generator symbol in polynomial expression")
    return combo.get(None, ZERO)
