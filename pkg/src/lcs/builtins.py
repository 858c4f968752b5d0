"""Catalog of standard algebras."""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction

from lcs.algebra import (
    ConformalSuperalgebra,
    LieRepresentation,
    LieSuperalgebraData,
    current_algebra,
)
from lcs.element import EVEN, ODD, Element, Generator
from lcs.errors import LCSError
from lcs.poly import Poly, parse_poly


def _e(**coeffs) -> Element:
    return Element({k: parse_poly(v) if isinstance(v, str) else v for k, v in coeffs.items()})


def _rational(value) -> Fraction:
    if isinstance(value, Poly):
        if not value.is_constant():
            raise LCSError(f"parameter must be a rational number, got {value.render()}")
        return value.constant_term()
    try:
        return Fraction(value)
    except (TypeError, ValueError):
        raise LCSError(f"parameter must be a rational number, got {value!r}") from None


def _poly_in(value, allowed: set[str], what: str) -> Poly:
    p = value if isinstance(value, Poly) else parse_poly(str(value), allowed=allowed)
    extra = p.variables() - allowed
    if extra:
        raise LCSError(f"{what} may only use {sorted(allowed)}, found {sorted(extra)}")
    return p


def neveu_schwarz() -> ConformalSuperalgebra:
    return ConformalSuperalgebra(
        [Generator("L", EVEN), Generator("G", ODD)],
        {("L", "L"): _e(L="d + 2*l"), ("L", "G"): _e(G="d + 3/2*l"), ("G", "G"): _e(L=1)},
        name="NS",
    )


def example_le() -> ConformalSuperalgebra:
    """NS-type algebra with an odd generator E bracketing to zero with itself."""
    return ConformalSuperalgebra(
        [Generator("L", EVEN), Generator("E", ODD)],
        {("L", "L"): _e(L="d + 2*l"), ("L", "E"): _e(E="d + 3/2*l"), ("E", "E"): Element()},
        name="EX22",
    )


_XY = [Generator("x", EVEN), Generator("y", ODD)]


def r1(p="d^3") -> ConformalSuperalgebra:
    p = _poly_in(p, {"d"}, "p")
    return ConformalSuperalgebra(_XY, {("y", "y"): Element({"x": p})}, name="R1")


def r2(q="1 + l") -> ConformalSuperalgebra:
    q = _poly_in(q, {"l"}, "q")
    return ConformalSuperalgebra(_XY, {("x", "y"): Element({"y": q}), ("y", "y"): Element()}, name="R2")


def r3() -> ConformalSuperalgebra:
    return ConformalSuperalgebra(_XY, {("x", "x"): _e(x="d + 2*l"), ("y", "y"): Element()}, name="R3")


def r4(beta="5/2") -> ConformalSuperalgebra:
    beta = _rational(beta)
    return ConformalSuperalgebra(
        _XY,
        {("x", "x"): _e(x="d + 2*l"), ("x", "y"): _e(y=Poly.var("d") + Poly.var("l").scale(beta)),
         ("y", "y"): Element()},
        name="R4",
    )


def r5(alpha=3) -> ConformalSuperalgebra:
    alpha = _rational(alpha)
    return ConformalSuperalgebra(
        _XY,
        {("x", "x"): _e(x="d + 2*l"), ("x", "y"): _e(y="d + 3/2*l"), ("y", "y"): Element({"x": Poly.const(alpha)})},
        name="R5",
    )


def gl11() -> LieSuperalgebraData:
    basis = [Generator("E11", EVEN), Generator("E22", EVEN), Generator("E12", ODD), Generator("E21", ODD)]
    return LieSuperalgebraData(
        basis,
        {
            ("E11", "E12"): {"E12": 1},
            ("E11", "E21"): {"E21": -1},
            ("E22", "E12"): {"E12": -1},
            ("E22", "E21"): {"E21": 1},
            ("E12", "E21"): {"E11": 1, "E22": 1},
        },
        name="gl11",
    )


def gl11_defining() -> LieRepresentation:
    """Matrix units acting on C^{1|1}: E_ij v_j = v_i."""
    g = gl11()
    module = [Generator("v1", EVEN), Generator("v2", ODD)]
    action = {}
    for i in (1, 2):
        for j in (1, 2):
            action[(f"E{i}{j}", f"v{j}")] = {f"v{i}": 1}
    return LieRepresentation(g, module, action, name="V")


def abelian_lie(name: str = "J", parity: int = EVEN) -> LieSuperalgebraData:
    return LieSuperalgebraData([Generator(name, parity)], {}, name="ab1")


def scalar_rep(lie: LieSuperalgebraData, c=1, vector: str = "w") -> LieRepresentation:
    """One-dimensional even module on which every even basis element acts by ``c``."""
    action = {(a, vector): {vector: c} for a in lie.names if lie.parities[a] == EVEN}
    return LieRepresentation(lie, [Generator(vector, EVEN)], action, name="C")


def cur_gl11() -> ConformalSuperalgebra:
    return current_algebra(gl11(), name="Curgl11")


def vir_current(lie: LieSuperalgebraData | None = None, name: str = "VirCur") -> ConformalSuperalgebra:
    """C[∂]L ⊕ Cur g with [L_λ L] = (∂+2λ)L and [L_λ a] = (∂+λ)a."""
    lie = lie or abelian_lie()
    if "L" in lie.names:
        raise LCSError("basis of g must not contain 'L'")
    gens = [Generator("L", EVEN)] + list(lie.basis)
    table = {("L", "L"): _e(L="d + 2*l")}
    for a in lie.names:
        table[("L", a)] = Element({a: parse_poly("d + l")})
    for (a, b), v in lie.table.items():
        if a <= b or (b, a) not in lie.table:
            table[(a, b)] = Element({k: Poly.const(c) for k, c in v.items()})
    for a in lie.names:
        if lie.parities[a] == ODD and (a, a) not in table:
            table[(a, a)] = Element()
    return ConformalSuperalgebra(gens, table, name=name)


# name -> (factory, parameter name or None)
ALGEBRAS: dict[str, tuple[Callable, str | None]] = {
    "NS": (neveu_schwarz, None),
    "EX22": (example_le, None),
    "R1": (r1, "p"),
    "R2": (r2, "q"),
    "R3": (r3, None),
    "R4": (r4, "beta"),
    "R5": (r5, "alpha"),
    "Curgl11": (cur_gl11, None),
    "VirCur": (vir_current, None),
}

LIE_ALGEBRAS = {"gl11": gl11, "ab1": abelian_lie}


def builtin_algebra(name: str, **params) -> ConformalSuperalgebra:
    if name not in ALGEBRAS:
        raise LCSError(f"unknown builtin algebra {name!r}")
    factory, pname = ALGEBRAS[name]
    if params:
        if pname is None or set(params) != {pname}:
            raise LCSError(f"{name} takes {'no parameters' if pname is None else 'parameter ' + pname}")
        return factory(params[pname])
    return factory()


def builtins() -> dict[str, ConformalSuperalgebra]:
    return {name: builtin_algebra(name) for name in ALGEBRAS}
