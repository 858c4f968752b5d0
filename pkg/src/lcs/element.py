"""Elements of free C[∂]-modules, possibly depending on extra slot variables."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from lcs.errors import ParityError
from lcs.poly import ONE, D, Poly, as_poly

EVEN, ODD = 0, 1


@dataclass(frozen=True)
class Generator:
    name: str
    parity: int  # 0 even, 1 odd

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise ParityError(f"parity of {self.name} must be 0 or 1")


def parity_name(p: int) -> str:
    return "odd" if p else "even"


def ksign(p: int, q: int) -> int:
    """Koszul sign (-1)^{pq}."""
    return -1 if (p & q & 1) else 1


class Element:
    """Finite sum ``Σ c_g · g`` with ``c_g`` polynomials in ``d`` and slot variables."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[str, object] | None = None):
        c = {}
        if coeffs:
            for name, p in coeffs.items():
                p = as_poly(p)
                if not p.is_zero():
                    c[name] = p
        self._c = c

    @classmethod
    def _raw(cls, c: dict) -> Element:
        e = cls.__new__(cls)
        e._c = c
        return e

    @classmethod
    def gen(cls, name: str, coeff=ONE) -> Element:
        return cls({name: coeff})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def get(self, name: str) -> Poly:
        return self._c.get(name, Poly())

    def names(self) -> set[str]:
        return set(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for p in self._c.values():
            out |= p.variables()
        return out

    def __add__(self, other: Element) -> Element:
        if not other._c:
            return self
        out = dict(self._c)
        for k, v in other._c.items():
            s = out[k] + v if k in out else v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return Element._raw(out)

    def __neg__(self) -> Element:
        return Element._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def mul(self, p) -> Element:
        """Multiply every coefficient by the polynomial (or scalar) ``p``."""
        p = as_poly(p)
        out = {}
        for k, v in self._c.items():
            q = v * p
            if not q.is_zero():
                out[k] = q
        return Element._raw(out)

    __rmul__ = mul

    def __mul__(self, p) -> Element:
        return self.mul(p)

    def scale(self, c) -> Element:
        return self.mul(Poly.const(Fraction(c)))

    def partial(self) -> Element:
        """Apply ∂."""
        return self.mul(D)

    def subs(self, assignments: Mapping[str, object]) -> Element:
        out = {}
        for k, v in self._c.items():
            q = v.subs(assignments)
            if not q.is_zero():
                out[k] = q
        return Element._raw(out)

    def rename_generators(self, mapping: Mapping[str, str]) -> Element:
        return Element({mapping.get(k, k): v for k, v in self._c.items()})

    def flatten(self) -> dict:
        """``{(generator, monomial): coefficient}`` view used to build linear systems."""
        out = {}
        for k, p in self._c.items():
            for mono, c in p.items():
                out[(k, mono)] = c
        return out

    def coefficients_in(self, variables: Iterable[str]) -> dict:
        """Split into ``{monomial in variables: Element}``."""
        vs = tuple(variables)
        out: dict = {}
        for k, p in self._c.items():
            for mono, q in p.coefficients(vs).items():
                out.setdefault(mono, {})[k] = q
        return {m: Element._raw(c) for m, c in out.items()}

    def parity(self, parities: Mapping[str, int]) -> int | None:
        """Common parity of the terms; ``None`` for zero.  Mixed -> ParityError."""
        ps = {parities[k] for k in self._c}
        if len(ps) > 1:
            raise ParityError(f"element {self.render()} is not parity-homogeneous")
        return ps.pop() if ps else None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def render(self, order: Iterable[str] | None = None) -> str:
        if not self._c:
            return "0"
        names = [n for n in order if n in self._c] if order is not None else []
        names += sorted(n for n in self._c if n not in names)
        parts = []
        for n in names:
            p = self._c[n]
            if p == ONE:
                parts.append(n)
            elif p == -ONE:
                parts.append(f"-{n}")
            elif p.is_constant():
                parts.append(f"{p.render()} {n}")
            else:
                parts.append(f"({p.render()}) {n}")
        text = parts[0]
        for part in parts[1:]:
            text += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return text

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Element({self.render()!r})"


ZERO_ELEMENT = Element()


def as_element(x) -> Element:
    if isinstance(x, Element):
        return x
    if isinstance(x, str):
        return Element.gen(x)
    raise TypeError(f"cannot coerce {x!r} to Element")
