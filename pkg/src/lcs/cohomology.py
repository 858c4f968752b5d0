"""Cochains, the differential, deformations and Nijenhuis operators.

An n-cochain is stored on canonical (non-decreasing in declaration order)
generator tuples; values are module elements with coefficients in ``d`` and
``l1 .. ln``.  Evaluation is conformally antilinear (∂ in argument i becomes
``-λ_i``) and resolves other orderings by super skew-symmetry.

Nijenhuis operators are even conformal maps ``f_λ(g) = F_g(∂, λ)``.  Applied
to a general element they act coefficientwise, ``f_s(Σ X_k k) = Σ X_k F_k(∂, s)``;
``f_{-∂}`` is ``f_ν`` followed by ``ν -> -∂``.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from lcs.algebra import (
    SLOT,
    ConformalSuperalgebra,
    Representation,
    Witness,
    adjoint,
    check_axioms,
    eval_bracket,
)
from lcs.confmap import ConformalMap, random_poly
from lcs.element import Element, ksign
from lcs.errors import LCSError, ParityError, UnknownGenerator
from lcs.poly import D, Poly

MAX_ARITY = 4
L = Poly.var("l")
M = Poly.var("m")
T = Poly.var("t")


def slot_var(i: int) -> str:
    return f"l{i + 1}"


def _perm_sign(parities: Sequence[int], order: Sequence[int]) -> int:
    """Sign of moving arguments into ``order`` (each transposition costs -(-1)^{|a||b|})."""
    s = 1
    n = len(order)
    for x in range(n):
        for y in range(x + 1, n):
            if order[x] > order[y]:
                s *= -ksign(parities[order[x]], parities[order[y]])
    return s


class Cochain:
    """Skew-supersymmetric conformally antilinear map R^n -> M[λ1..λn]."""

    def __init__(self, algebra: ConformalSuperalgebra, module: Representation, arity: int, parity: int,
                 values: Mapping[tuple, Element] | None = None, name: str = "", check: bool = True):
        if arity < 0 or arity > MAX_ARITY:
            raise LCSError(f"arity must be between 0 and {MAX_ARITY}")
        self.algebra = algebra
        self.module = module
        self.arity = arity
        self.parity = parity % 2
        self.name = name
        self._index = {g: n for n, g in enumerate(algebra.names)}
        self.values: dict = {}
        allowed = {"d"} | {slot_var(i) for i in range(arity)}
        for key, v in (values or {}).items():
            key = tuple(key)
            if len(key) != arity:
                raise LCSError(f"{name or 'cochain'}: tuple {key} has the wrong arity")
            for g in key:
                if g not in self._index:
                    raise UnknownGenerator(g)
            canon = self.canonical(key)
            if canon != key:
                raise LCSError(f"{name or 'cochain'}: value given on non-canonical tuple {key}")
            if check:
                extra = v.variables() - allowed
                if extra:
                    raise LCSError(f"{name or 'cochain'}{key}: unexpected variables {sorted(extra)}")
                p = module.elem_parity(v)
                want = (self.parity + sum(algebra.parities[g] for g in key)) % 2
                if p is not None and p != want:
                    raise ParityError(f"{name or 'cochain'}{key} has the wrong parity")
            if not v.is_zero():
                self.values[key] = v

    def canonical(self, key: Sequence[str]) -> tuple:
        return tuple(sorted(key, key=self._index.__getitem__))

    def canonical_tuples(self) -> list[tuple]:
        return list(itertools.combinations_with_replacement(self.algebra.names, self.arity))

    def stored(self, key: tuple) -> Element:
        return self.values.get(key, Element())

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.arity == other.arity and self.parity == other.parity and self.values == other.values

    def __repr__(self) -> str:
        return f"Cochain(arity={self.arity}, {self.values})"


def eval_on_generators(gamma: Cochain, gens: Sequence[str], slots: Sequence) -> Element:
    """γ_{slots}(g1, ..., gn) for generators in any order."""
    n = gamma.arity
    if len(gens) != n or len(slots) != n:
        raise LCSError(f"cochain of arity {n} evaluated on {len(gens)} arguments")
    if n == 0:
        return gamma.stored(())
    order = sorted(range(n), key=lambda i: gamma._index[gens[i]])
    key = tuple(gens[i] for i in order)
    val = gamma.stored(key)
    if val.is_zero():
        return val
    pars = [gamma.algebra.parities[g] for g in gens]
    sign = _perm_sign(pars, order)
    sub = {slot_var(k): Poly.var(slots[i]) if isinstance(slots[i], str) else slots[i] for k, i in enumerate(order)}
    return val.subs(sub).scale(sign)


def eval_cochain(gamma: Cochain, args: Sequence, slots: Sequence) -> Element:
    """Multilinear, conformally antilinear evaluation on arbitrary elements."""
    n = gamma.arity
    if len(args) != n or len(slots) != n:
        raise LCSError(f"cochain of arity {n} evaluated on {len(args)} arguments")
    args = [a if isinstance(a, Element) else Element.gen(a) for a in args]
    slot_polys = [Poly.var(s) if isinstance(s, str) else s for s in slots]
    if n == 0:
        return gamma.stored(())
    out = Element()
    terms = [[(g, p.subs({"d": -slot_polys[i]})) for g, p in a.items()] for i, a in enumerate(args)]
    for combo in itertools.product(*terms):
        coeff = Poly.const(1)
        for _, p in combo:
            coeff = coeff * p
        if coeff.is_zero():
            continue
        val = eval_on_generators(gamma, [g for g, _ in combo], slot_polys)
        if not val.is_zero():
            out = out + val.mul(coeff)
    return out


def _koszul_prefix(pars: Sequence[int], i: int) -> int:
    return sum(pars[:i]) * pars[i]


def differential_value(gamma: Cochain, gens: Sequence[str]) -> Element:
    """(dγ)_{λ1..λ_{n+1}}(a1..a_{n+1}) on generators, slots named l1, l2, ..."""
    A, rep = gamma.algebra, gamma.module
    n1 = len(gens)
    pars = [A.parities[g] for g in gens]
    slots = [Poly.var(slot_var(i)) for i in range(n1)]
    out = Element()
    for i in range(n1):
        rest = [g for k, g in enumerate(gens) if k != i]
        rest_slots = [s for k, s in enumerate(slots) if k != i]
        inner = eval_on_generators(gamma, rest, rest_slots)
        if inner.is_zero():
            continue
        sign = (-1) ** i * ksign(1, (gamma.parity + sum(pars[:i])) * pars[i])
        out = out + rep.act(Element.gen(gens[i]), inner, slots[i]).scale(sign)
    for i in range(n1):
        for j in range(i + 1, n1):
            br = eval_bracket(A, gens[i], gens[j], slots[i])
            if br.is_zero():
                continue
            rest = [g for k, g in enumerate(gens) if k not in (i, j)]
            rest_slots = [s for k, s in enumerate(slots) if k not in (i, j)]
            e = _koszul_prefix(pars, i) + _koszul_prefix(pars, j) + pars[i] * pars[j]
            sign = (-1) ** (i + j) * ksign(1, e)
            val = eval_cochain(gamma, [br] + [Element.gen(g) for g in rest], [slots[i] + slots[j]] + rest_slots)
            out = out + val.scale(sign)
    return out


def differential(gamma: Cochain) -> Cochain:
    if gamma.arity + 1 > MAX_ARITY:
        raise LCSError(f"differential output arity exceeds {MAX_ARITY}")
    out = Cochain(gamma.algebra, gamma.module, gamma.arity + 1, gamma.parity, {}, check=False)
    vals = {}
    for key in out.canonical_tuples():
        v = differential_value(gamma, key)
        if not v.is_zero():
            vals[key] = v
    out.values = vals
    return out


def check_cochain(gamma: Cochain) -> list:
    """Repeated-generator consistency; returns failing (tuple, i, j) triples."""
    bad = []
    for key, val in gamma.values.items():
        for i in range(gamma.arity):
            for j in range(i + 1, gamma.arity):
                if key[i] != key[j]:
                    continue
                p = gamma.algebra.parities[key[i]]
                swapped = val.subs({slot_var(i): Poly.var(slot_var(j)), slot_var(j): Poly.var(slot_var(i))})
                if swapped.scale(-ksign(p, p)) != val:
                    bad.append((key, i, j))
    return bad


def is_cochain(gamma: Cochain) -> bool:
    return not check_cochain(gamma)


def symmetrize(gamma_values: dict, algebra: ConformalSuperalgebra, arity: int) -> dict:
    """Project raw values onto the repeated-generator consistency subspace."""
    out = {}
    for key, val in gamma_values.items():
        groups: dict = {}
        for pos, g in enumerate(key):
            groups.setdefault(g, []).append(pos)
        perms = [list(itertools.permutations(ps)) for ps in groups.values()]
        total = Element()
        count = 0
        for choice in itertools.product(*perms):
            sign = 1
            sub = {}
            for ps, img in zip(groups.values(), choice):
                p = algebra.parities[key[ps[0]]]
                inv = sum(1 for x in range(len(img)) for y in range(x + 1, len(img)) if img[x] > img[y])
                if p == 0:
                    sign *= (-1) ** inv
                for a, b in zip(ps, img):
                    sub[slot_var(a)] = Poly.var(slot_var(b))
            total = total + val.subs(sub).scale(sign)
            count += 1
        total = total.scale(Fraction(1, count))
        if not total.is_zero():
            out[key] = total
    return out


def random_cochain(rng: random.Random, algebra: ConformalSuperalgebra, module: Representation, arity: int,
                   parity: int, degree: int = 2, density: float = 0.35) -> Cochain:
    vals = {}
    proto = Cochain(algebra, module, arity, parity, {}, check=False)
    for key in proto.canonical_tuples():
        want = (parity + sum(algebra.parities[g] for g in key)) % 2
        degs = {"d": degree}
        degs.update({slot_var(i): degree for i in range(arity)})
        e = Element()
        for m in module.names:
            if module.parities[m] == want:
                e = e + Element.gen(m, random_poly(rng, degs, density))
        vals[key] = e
    return Cochain(algebra, module, arity, parity, symmetrize(vals, algebra, arity))


def cochain_from_map(f: ConformalMap, algebra: ConformalSuperalgebra, module: Representation | None = None) -> Cochain:
    """Read a map's generator values as an (antilinear) 1-cochain."""
    module = module or adjoint(algebra)
    vals = {(g,): f.value(g).subs({SLOT: Poly.var("l1")}) for g in algebra.names}
    return Cochain(algebra, module, 1, f.parity, vals)


def element_cochain(algebra: ConformalSuperalgebra, module: Representation, m: Element) -> Cochain:
    p = module.elem_parity(m) or 0
    return Cochain(algebra, module, 0, p, {(): m})


# -- Nijenhuis operators ---------------------------------------------------------

def nij_apply(f: ConformalMap, slot, x: Element) -> Element:
    """f_slot(x) with f acting on coefficients without shifting ∂."""
    s = Poly.var(slot) if isinstance(slot, str) else slot
    out = Element()
    for g, p in x.items():
        v = f.value(g)
        if not v.is_zero():
            out = out + v.subs({SLOT: s}).mul(p)
    return out


def _even(f: ConformalMap) -> None:
    if f.parity != 0:
        raise ParityError("Nijenhuis operators must be even")


def nijenhuis_bracket(A: ConformalSuperalgebra, f: ConformalMap, a: str, b: str) -> Element:
    """[a_λ b]_N = [(f_λ a)_λ b] + [a_λ f_{-∂}(b)] - f_{-∂}([a_λ b])."""
    fa = nij_apply(f, L, Element.gen(a))
    fb = nij_apply(f, -D, Element.gen(b))
    t1 = eval_bracket(A, fa, Element.gen(b), L)
    t2 = eval_bracket(A, Element.gen(a), fb, L)
    t3 = nij_apply(f, -D, eval_bracket(A, a, b, L))
    return t1 + t2 - t3


def nijenhuis_residual(A: ConformalSuperalgebra, f: ConformalMap) -> dict:
    """{(a, b): [(f_λ a)_λ (f_μ b)] - f_{λ+μ}([a_λ b]_N)}, nonzero entries only."""
    _even(f)
    out = {}
    for a in A.names:
        for b in A.names:
            lhs = eval_bracket(A, nij_apply(f, L, Element.gen(a)), nij_apply(f, M, Element.gen(b)), L)
            rhs = nij_apply(f, L + M, nijenhuis_bracket(A, f, a, b))
            if lhs != rhs:
                out[(a, b)] = lhs - rhs
    return out


def is_nijenhuis(A: ConformalSuperalgebra, f: ConformalMap) -> bool:
    return not nijenhuis_residual(A, f)


def nijenhuis_minus_d_residual(A: ConformalSuperalgebra, f: ConformalMap) -> dict:
    """[(f_λ a)_λ f_{-∂}(b)] - f_{-∂}([a_λ b]_N)."""
    _even(f)
    out = {}
    for a in A.names:
        for b in A.names:
            lhs = eval_bracket(A, nij_apply(f, L, Element.gen(a)), nij_apply(f, -D, Element.gen(b)), L)
            rhs = nij_apply(f, -D, nijenhuis_bracket(A, f, a, b))
            if lhs != rhs:
                out[(a, b)] = lhs - rhs
    return out


# -- deformations ------------------------------------------------------------

@dataclass
class DeformationReport:
    skew_ok: bool = True
    defor1_ok: bool = True
    defor2_ok: bool = True
    jacobi_t_ok: bool = True
    cocycle_ok: bool | None = None
    trivial_ok: bool | None = None
    nijenhuis_ok: bool | None = None
    n2_ok: bool | None = None
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        flags = [self.skew_ok, self.defor1_ok, self.defor2_ok, self.jacobi_t_ok]
        flags += [x for x in (self.cocycle_ok, self.trivial_ok, self.nijenhuis_ok, self.n2_ok) if x is not None]
        return all(flags)

    def as_dict(self) -> dict:
        return {
            "skew_ok": self.skew_ok, "defor1_ok": self.defor1_ok, "defor2_ok": self.defor2_ok,
            "jacobi_t_ok": self.jacobi_t_ok, "cocycle_ok": self.cocycle_ok, "trivial_ok": self.trivial_ok,
            "nijenhuis_ok": self.nijenhuis_ok, "n2_ok": self.n2_ok,
        }


def deformed_algebra(A: ConformalSuperalgebra, psi_table: Mapping[tuple, Element]) -> ConformalSuperalgebra:
    """Table [a_λ b] + t ψ(a, b) on every ordered generator pair."""
    table = {}
    for a in A.names:
        for b in A.names:
            table[(a, b)] = A.bracket(a, b) + psi_table.get((a, b), Element()).mul(T)
    return ConformalSuperalgebra.from_full_table(A.generators, table, name=f"{A.name}_t")


def psi_table_from_cochain(psi: Cochain) -> dict:
    A = psi.algebra
    return {(a, b): eval_on_generators(psi, [a, b], [L, -D - L]) for a in A.names for b in A.names}


def _split_t(e: Element) -> dict:
    out = {}
    for mono, part in e.coefficients_in(["t"]).items():
        out[dict(mono).get("t", 0)] = part
    return out


def deformation_table_check(A: ConformalSuperalgebra, psi_table: Mapping[tuple, Element]) -> DeformationReport:
    At = deformed_algebra(A, psi_table)
    rep = DeformationReport()
    axioms = check_axioms(At)
    for w in axioms.witnesses:
        if w.kind == "skew":
            rep.skew_ok = False
            rep.witnesses.append(w)
        elif w.kind == "jacobi":
            rep.jacobi_t_ok = False
            for power, part in _split_t(w.residual).items():
                if power == 1:
                    rep.defor1_ok = False
                elif power == 2:
                    rep.defor2_ok = False
                rep.witnesses.append(Witness(f"jacobi_t{power}", w.generators, part))
        else:
            rep.skew_ok = False
            rep.witnesses.append(w)
    return rep


def deformation_check(psi: Cochain) -> DeformationReport:
    if psi.arity != 2:
        raise LCSError("deformation cochain must have arity 2")
    if psi.parity != 0:
        raise ParityError("deformation cochain must be even")
    bad = check_cochain(psi)
    if bad:
        raise LCSError(f"not a cochain: inconsistent on {bad[0][0]}")
    rep = deformation_table_check(psi.algebra, psi_table_from_cochain(psi))
    rep.cocycle_ok = differential(psi).is_zero()
    return rep


def intertwining_residual(A: ConformalSuperalgebra, f: ConformalMap) -> dict:
    """T_{t,-∂}([a_λ b]_t) - [(T_{t,λ} a)_λ T_{t,-∂} b] with T_t = id + t f."""
    out = {}
    for a in A.names:
        for b in A.names:
            bt = A.bracket(a, b) + nijenhuis_bracket(A, f, a, b).mul(T)
            lhs = bt + nij_apply(f, -D, bt).mul(T)
            ta = Element.gen(a) + nij_apply(f, L, Element.gen(a)).mul(T)
            tb = Element.gen(b) + nij_apply(f, -D, Element.gen(b)).mul(T)
            rhs = eval_bracket(A, ta, tb, L)
            if lhs != rhs:
                out[(a, b)] = lhs - rhs
    return out


def check_trivial_deformation(A: ConformalSuperalgebra, f: ConformalMap) -> DeformationReport:
    _even(f)
    nres = nijenhuis_residual(A, f)
    psi = {(a, b): nijenhuis_bracket(A, f, a, b) for a in A.names for b in A.names}
    rep = deformation_table_check(A, psi)
    rep.nijenhuis_ok = not nres
    for (a, b), r in nres.items():
        rep.witnesses.append(Witness("nijenhuis", (a, b), r))
    inter = intertwining_residual(A, f)
    rep.trivial_ok = not nres and not inter
    for (a, b), r in inter.items():
        rep.witnesses.append(Witness("intertwining", (a, b), r))
    # ψ = d̂f read at (λ, -∂-λ) must agree with the Nijenhuis bracket
    dhat = differential(cochain_from_map(f, A))
    dpsi = psi_table_from_cochain(dhat)
    rep.n2_ok = all(dpsi[k] == psi[k] for k in psi)
    rep.cocycle_ok = differential(dhat).is_zero()
    return rep
