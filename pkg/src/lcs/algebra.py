"""Lie conformal superalgebras, their modules, and standard constructions.

Brackets are stored as polynomials in ``d`` (∂) and the slot variable ``l``.
For a slot expression ``s`` the bilinear extension is

    [p(∂)g _s q(∂)h] = p(-s) q(∂+s) [g_s h],

and substituting a slot such as ``μ -> -∂-λ`` is plain polynomial substitution,
because ∂ commutes with every slot variable in this representation.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from lcs.element import ODD, Element, Generator, ksign, parity_name
from lcs.errors import (
    AxiomError,
    LCSError,
    ParityError,
    RepresentationError,
    SlotCollision,
    UnknownGenerator,
)
from lcs.exactla import SolutionSpace, nullspace
from lcs.poly import KNOWN_VARS, D, Poly, as_poly

SLOT = "l"
RESERVED = frozenset(KNOWN_VARS)

Table = dict  # dict[(str, str), Element]


def _check_names(gens: Sequence[Generator], what: str) -> None:
    seen = set()
    for g in gens:
        if g.name in RESERVED or g.name.startswith("_"):
            raise LCSError(f"{what} name {g.name!r} is reserved for polynomial variables")
        if g.name in seen:
            raise LCSError(f"duplicate {what} {g.name!r}")
        seen.add(g.name)


def _slot_poly(slot, *args: Element) -> Poly:
    if isinstance(slot, str):
        for a in args:
            if slot in a.variables():
                raise SlotCollision(f"slot {slot!r} already occurs in {a.render()}")
        return Poly.var(slot)
    return as_poly(slot)


def pair(table: Table, a: Element, b: Element, slot, known_left=None, known_right=None) -> Element:
    """Bilinear sesquilinear pairing driven by a generator table."""
    s = _slot_poly(slot, a, b)
    left = {"d": -s}
    right = {"d": D + s}
    lam = {SLOT: s}
    out = Element()
    for g, p in a.items():
        if known_left is not None and g not in known_left:
            raise UnknownGenerator(g)
        pg = p.subs(left)
        if pg.is_zero():
            continue
        for h, q in b.items():
            if known_right is not None and h not in known_right:
                raise UnknownGenerator(h)
            entry = table.get((g, h))
            if entry is None or entry.is_zero():
                continue
            coeff = pg * q.subs(right)
            if coeff.is_zero():
                continue
            out = out + entry.subs(lam).mul(coeff)
    return out


def skew_transpose(value: Element, pg: int, ph: int) -> Element:
    """[h_λ g] from [g_λ h]: -(-1)^{|g||h|} [g_{-∂-λ} h]."""
    return value.subs({SLOT: -D - Poly.var(SLOT)}).scale(-ksign(pg, ph))


@dataclass
class Witness:
    kind: str
    generators: tuple
    residual: Element

    def as_dict(self, order=None) -> dict:
        return {"kind": self.kind, "generators": list(self.generators), "residual": self.residual.render(order)}


@dataclass
class AxiomReport:
    skew_ok: bool = True
    jacobi_ok: bool = True
    parity_ok: bool = True
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.skew_ok and self.jacobi_ok and self.parity_ok


class ConformalSuperalgebra:
    """Finitely generated free Lie conformal superalgebra given by a λ-bracket table."""

    def __init__(self, generators: Iterable[Generator], table: Mapping | None = None, name: str = "",
                 derive: bool = True):
        self.name = name
        self.generators = tuple(generators)
        _check_names(self.generators, "generator")
        self.parities = {g.name: g.parity for g in self.generators}
        self.names = tuple(g.name for g in self.generators)
        supplied = {}
        for (g, h), v in (table or {}).items():
            for x in (g, h):
                if x not in self.parities:
                    raise UnknownGenerator(f"{x} in bracket [{g},{h}]")
            v = v if isinstance(v, Element) else Element(v)
            for k in v.names():
                if k not in self.parities:
                    raise UnknownGenerator(f"{k} in value of [{g},{h}]")
            supplied[(g, h)] = v
        self._check_parity(supplied)
        if derive:
            self.table = self._complete(supplied)
        else:
            self.table = {k: v for k, v in supplied.items() if not v.is_zero()}
        self.supplied = supplied
        self._cache: dict = {}

    def _check_parity(self, table) -> None:
        for (g, h), v in table.items():
            want = (self.parities[g] + self.parities[h]) % 2
            for k in v.names():
                if self.parities[k] != want:
                    raise ParityError(
                        f"[{g},{h}] contains {k} ({parity_name(self.parities[k])}), "
                        f"expected {parity_name(want)}"
                    )

    def _complete(self, supplied) -> Table:
        full = {}
        for (g, h), v in supplied.items():
            full[(g, h)] = v
        for (g, h), v in supplied.items():
            if g == h:
                continue
            t = skew_transpose(v, self.parities[g], self.parities[h])
            if (h, g) in supplied:
                if supplied[(h, g)] != t:
                    raise AxiomError(f"[{h},{g}] is inconsistent with skew-symmetry of [{g},{h}]")
            else:
                full[(h, g)] = t
        return {k: v for k, v in full.items() if not v.is_zero()}

    @classmethod
    def from_full_table(cls, generators, table, name: str = "") -> ConformalSuperalgebra:
        """Use the table verbatim on every ordered pair (no skew completion)."""
        return cls(generators, table, name=name, derive=False)

    def bracket(self, g: str, h: str) -> Element:
        return self.table.get((g, h), Element())

    def parity(self, name: str) -> int:
        try:
            return self.parities[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    def elem_parity(self, e: Element) -> int | None:
        for k in e.names():
            self.parity(k)
        return e.parity(self.parities)

    def ordered_pairs(self):
        return [(g, h) for g in self.names for h in self.names]

    def canonical_table(self) -> Table:
        """Entries for pairs i <= j in declaration order (what the DSL prints)."""
        out = {}
        for i, g in enumerate(self.names):
            for h in self.names[i:]:
                v = self.bracket(g, h)
                if not v.is_zero() or (g == h and self.parities[g] == ODD):
                    out[(g, h)] = v
        return out

    def __repr__(self) -> str:
        return f"ConformalSuperalgebra({self.name!r}, {list(self.names)})"

    def same_table(self, other: ConformalSuperalgebra) -> bool:
        return self.generators == other.generators and self.table == other.table


def eval_bracket(A: ConformalSuperalgebra, a, b, slot=SLOT) -> Element:
    """[a_slot b] for elements whose coefficients may carry other slot variables."""
    a = a if isinstance(a, Element) else Element.gen(a)
    b = b if isinstance(b, Element) else Element.gen(b)
    return pair(A.table, a, b, slot, A.parities, A.parities)


def check_axioms(A: ConformalSuperalgebra) -> AxiomReport:
    rep = AxiomReport()
    P = A.parities
    for (g, h), v in A.table.items():
        want = (P[g] + P[h]) % 2
        if any(P[k] != want for k in v.names()):
            rep.parity_ok = False
            rep.witnesses.append(Witness("parity", (g, h), v))
    mu_to = {"m": -D - Poly.var(SLOT)}
    for g, h in A.ordered_pairs():
        left = A.bracket(g, h)
        right = eval_bracket(A, h, g, "m").subs(mu_to).scale(ksign(P[g], P[h]))
        res = left + right
        if not res.is_zero():
            rep.skew_ok = False
            rep.witnesses.append(Witness("skew", (g, h), res))
    lm = Poly.var("l") + Poly.var("m")
    for g in A.names:
        for h in A.names:
            gh = eval_bracket(A, g, h, "l")
            s = ksign(P[g], P[h])
            for k in A.names:
                t1 = eval_bracket(A, Element.gen(g), eval_bracket(A, h, k, "m"), "l")
                t2 = eval_bracket(A, gh, Element.gen(k), lm)
                t3 = eval_bracket(A, Element.gen(h), eval_bracket(A, g, k, "l"), "m")
                res = t1 - t2 - t3.scale(s)
                if not res.is_zero():
                    rep.jacobi_ok = False
                    rep.witnesses.append(Witness("jacobi", (g, h, k), res))
    return rep


def check_homomorphism(phi: Mapping[str, Element], A: ConformalSuperalgebra, B: ConformalSuperalgebra) -> bool:
    for g in A.names:
        if g not in phi:
            raise UnknownGenerator(f"no image given for {g}")
        img = phi[g]
        p = B.elem_parity(img)
        if p is not None and p != A.parity(g):
            raise ParityError(f"image of {g} has the wrong parity")

    def apply(e: Element) -> Element:
        out = Element()
        for g, c in e.items():
            out = out + phi[g].mul(c)
        return out

    for g, h in A.ordered_pairs():
        if apply(A.bracket(g, h)) != eval_bracket(B, phi[g], phi[h], SLOT):
            return False
    return True


# -- Lie superalgebras and the current construction ---------------------------

class LieSuperalgebraData:
    """Finite-dimensional Lie superalgebra by structure constants ``[a,b] = Σ c k``."""

    def __init__(self, basis: Iterable[Generator], brackets: Mapping | None = None, name: str = "",
                 derive: bool = True):
        self.name = name
        self.basis = tuple(basis)
        _check_names(self.basis, "basis element")
        self.parities = {g.name: g.parity for g in self.basis}
        self.names = tuple(g.name for g in self.basis)
        table = {}
        for (a, b), v in (brackets or {}).items():
            for x in (a, b, *v):
                if x not in self.parities:
                    raise UnknownGenerator(x)
            v = {k: Fraction(c) for k, c in v.items() if c}
            want = (self.parities[a] + self.parities[b]) % 2
            for k in v:
                if self.parities[k] != want:
                    raise ParityError(f"[{a},{b}] contains {k} of the wrong parity")
            table[(a, b)] = v
        if derive:
            for (a, b), v in list(table.items()):
                s = -ksign(self.parities[a], self.parities[b])
                t = {k: s * c for k, c in v.items()}
                if (b, a) in table and a != b:
                    if table[(b, a)] != t:
                        raise AxiomError(f"[{b},{a}] is inconsistent with super-antisymmetry")
                elif a != b:
                    table[(b, a)] = t
        self.table = {k: v for k, v in table.items() if v}

    def bracket(self, x: Mapping[str, Fraction], y: Mapping[str, Fraction]) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for k, c in self.table.get((a, b), {}).items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return {k: v for k, v in out.items() if v}

    def check(self) -> list[str]:
        """Names the failing identities; empty list means valid."""
        problems = []
        P = self.parities
        for a in self.names:
            for b in self.names:
                ab = self.bracket({a: 1}, {b: 1})
                ba = self.bracket({b: 1}, {a: 1})
                s = ksign(P[a], P[b])
                if {k: v for k, v in ((k, ab.get(k, 0) + s * ba.get(k, 0)) for k in set(ab) | set(ba)) if v}:
                    problems.append(f"antisymmetry ({a},{b})")
                for c in self.names:
                    lhs = self.bracket({a: 1}, self.bracket({b: 1}, {c: 1}))
                    r1 = self.bracket(ab, {c: 1})
                    r2 = self.bracket({b: 1}, self.bracket({a: 1}, {c: 1}))
                    keys = set(lhs) | set(r1) | set(r2)
                    if any(lhs.get(k, 0) - r1.get(k, 0) - s * r2.get(k, 0) for k in keys):
                        problems.append(f"jacobi ({a},{b},{c})")
        return problems


def current_algebra(L: LieSuperalgebraData, validate: bool = True, name: str | None = None) -> ConformalSuperalgebra:
    if validate:
        problems = L.check()
        if problems:
            raise AxiomError("invalid structure constants: " + ", ".join(problems[:5]))
    table = {k: Element({g: Poly.const(c) for g, c in v.items()}) for k, v in L.table.items()}
    return ConformalSuperalgebra.from_full_table(L.basis, table, name=name or f"Cur {L.name}".strip())


# -- modules --------------------------------------------------------------

class Representation:
    """Conformal module structure ρ(g)_λ m on a free C[∂]-module."""

    def __init__(self, algebra: ConformalSuperalgebra, module: Iterable[Generator], table: Mapping | None = None,
                 name: str = ""):
        self.algebra = algebra
        self.name = name
        self.module = tuple(module)
        seen = set()
        for m in self.module:
            if m.name in seen:
                raise LCSError(f"duplicate module generator {m.name!r}")
            if m.name in RESERVED or m.name.startswith("_"):
                raise LCSError(f"module generator name {m.name!r} is reserved")
            seen.add(m.name)
        self.parities = {m.name: m.parity for m in self.module}
        self.names = tuple(m.name for m in self.module)
        self.table: Table = {}
        for (a, m), v in (table or {}).items():
            if a not in algebra.parities:
                raise UnknownGenerator(f"{a} is not a generator of {algebra.name}")
            if m not in self.parities:
                raise UnknownGenerator(f"{m} is not a module generator")
            v = v if isinstance(v, Element) else Element(v)
            want = (algebra.parities[a] + self.parities[m]) % 2
            for k in v.names():
                if k not in self.parities:
                    raise UnknownGenerator(f"{k} is not a module generator")
                if self.parities[k] != want:
                    raise ParityError(f"action of {a} on {m} contains {k} of the wrong parity")
            if not v.is_zero():
                self.table[(a, m)] = v

    def act(self, a, m, slot=SLOT) -> Element:
        """ρ(a)_slot m."""
        a = a if isinstance(a, Element) else Element.gen(a)
        m = m if isinstance(m, Element) else Element.gen(m)
        return pair(self.table, a, m, slot, self.algebra.parities, self.parities)

    def elem_parity(self, e: Element) -> int | None:
        for k in e.names():
            if k not in self.parities:
                raise UnknownGenerator(k)
        return e.parity(self.parities)


@dataclass
class RepresentationReport:
    commutator_ok: bool = True
    sesquilinear_ok: bool = True
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.commutator_ok and self.sesquilinear_ok


def check_representation(rep: Representation) -> RepresentationReport:
    A = rep.algebra
    out = RepresentationReport()
    lm = Poly.var("l") + Poly.var("m")
    for a in A.names:
        for m in rep.names:
            lhs = rep.act(Element.gen(a).partial(), m, "l")
            rhs = rep.act(a, m, "l").mul(-Poly.var("l"))
            if lhs != rhs:
                out.sesquilinear_ok = False
                out.witnesses.append(Witness("sesquilinear", (a, m), lhs - rhs))
    for a in A.names:
        for b in A.names:
            s = ksign(A.parities[a], A.parities[b])
            ab = eval_bracket(A, a, b, "l")
            for m in rep.names:
                t1 = rep.act(Element.gen(a), rep.act(b, m, "m"), "l")
                t2 = rep.act(Element.gen(b), rep.act(a, m, "l"), "m")
                t3 = rep.act(ab, Element.gen(m), lm)
                res = t1 - t2.scale(s) - t3
                if not res.is_zero():
                    out.commutator_ok = False
                    out.witnesses.append(Witness("commutator", (a, b, m), res))
    return out


def adjoint(A: ConformalSuperalgebra) -> Representation:
    return Representation(A, A.generators, A.table, name=f"ad {A.name}".strip())


def zero_module(A: ConformalSuperalgebra, module: Iterable[Generator]) -> Representation:
    return Representation(A, module, {}, name="trivial")


def _rename_module(A_names, module: Sequence[Generator]) -> dict:
    taken = set(A_names)
    mapping = {}
    for m in module:
        new = m.name
        while new in taken:
            new += "_m"
        taken.add(new)
        mapping[m.name] = new
    return mapping


def semidirect(rep: Representation, validate: bool = True, name: str | None = None) -> ConformalSuperalgebra:
    """R ⋉ M; module generators colliding with algebra names get a ``_m`` suffix."""
    A = rep.algebra
    if validate:
        report = check_representation(rep)
        if not report.ok:
            raise RepresentationError(f"not a representation: {report.witnesses[0].kind} "
                                      f"{report.witnesses[0].generators}")
    ren = _rename_module(A.names, rep.module)
    gens = list(A.generators) + [Generator(ren[m.name], m.parity) for m in rep.module]
    table = dict(A.table)
    flip = {SLOT: -D - Poly.var(SLOT)}
    for (r, m), v in rep.table.items():
        vv = v.rename_generators(ren)
        table[(r, ren[m])] = vv
        s = -ksign(A.parities[r], rep.parities[m])
        table[(ren[m], r)] = vv.subs(flip).scale(s)
    return ConformalSuperalgebra.from_full_table(gens, table, name=name or f"{A.name}x{rep.name}")


def semidirect_split(rep: Representation) -> dict:
    """Module generator name -> its name inside ``semidirect(rep)``."""
    return _rename_module(rep.algebra.names, rep.module)


# -- finite-dimensional data for the current construction ----------------------

class LieRepresentation:
    """π: g -> gl(V); ``action[(a, v)]`` is π(a)v as ``{basis vector: coefficient}``."""

    def __init__(self, lie: LieSuperalgebraData, module: Iterable[Generator], action: Mapping | None = None,
                 name: str = ""):
        self.lie = lie
        self.name = name
        self.module = tuple(module)
        self.parities = {m.name: m.parity for m in self.module}
        self.names = tuple(m.name for m in self.module)
        self.action = {}
        for (a, v), out in (action or {}).items():
            if a not in lie.parities or v not in self.parities:
                raise UnknownGenerator(f"({a},{v})")
            out = {k: Fraction(c) for k, c in out.items() if c}
            want = (lie.parities[a] + self.parities[v]) % 2
            for k in out:
                if k not in self.parities:
                    raise UnknownGenerator(k)
                if self.parities[k] != want:
                    raise ParityError(f"π({a}){v} contains {k} of the wrong parity")
            if out:
                self.action[(a, v)] = out

    def apply(self, x: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for w, cw in v.items():
                for k, c in self.action.get((a, w), {}).items():
                    out[k] = out.get(k, 0) + ca * cw * c
        return {k: c for k, c in out.items() if c}

    def check(self) -> list[str]:
        problems = []
        P = self.lie.parities
        for a in self.lie.names:
            for b in self.lie.names:
                ab = self.lie.bracket({a: 1}, {b: 1})
                s = ksign(P[a], P[b])
                for v in self.names:
                    lhs = self.apply({a: 1}, self.apply({b: 1}, {v: 1}))
                    r = self.apply({b: 1}, self.apply({a: 1}, {v: 1}))
                    t = self.apply(ab, {v: 1})
                    keys = set(lhs) | set(r) | set(t)
                    if any(lhs.get(k, 0) - s * r.get(k, 0) - t.get(k, 0) for k in keys):
                        problems.append(f"({a},{b},{v})")
        return problems


def current_module(L: LieSuperalgebraData, pi: LieRepresentation, cur: ConformalSuperalgebra | None = None
                   ) -> Representation:
    """C[∂]⊗V as a module over Cur g: ρ(a)_λ v = π(a)v."""
    cur = cur or current_algebra(L)
    table = {k: Element({w: Poly.const(c) for w, c in out.items()}) for k, out in pi.action.items()}
    return Representation(cur, pi.module, table, name=pi.name or "V")


def lie_semidirect(L: LieSuperalgebraData, pi: LieRepresentation) -> LieSuperalgebraData:
    ren = _rename_module(L.names, pi.module)
    basis = list(L.basis) + [Generator(ren[m.name], m.parity) for m in pi.module]
    table = {k: dict(v) for k, v in L.table.items()}
    for (a, v), out in pi.action.items():
        out = {ren[k]: c for k, c in out.items()}
        table[(a, ren[v])] = out
        s = -ksign(L.parities[a], pi.parities[v])
        table[(ren[v], a)] = {k: s * c for k, c in out.items()}
    return LieSuperalgebraData(basis, table, name=f"{L.name}x{pi.name}", derive=False)


@dataclass
class EmbeddingReport:
    ok: bool
    mismatches: list


def check_cur_embedding(L: LieSuperalgebraData, pi: LieRepresentation) -> EmbeddingReport:
    problems = L.check() + pi.check()
    if problems:
        raise AxiomError("invalid input: " + ", ".join(problems[:5]))
    left = current_algebra(lie_semidirect(L, pi))
    cur = current_algebra(L)
    right = semidirect(current_module(L, pi, cur))
    mismatches = []
    if left.names != right.names:
        return EmbeddingReport(False, [("generators", left.names, right.names)])
    for g, h in left.ordered_pairs():
        if left.bracket(g, h) != right.bracket(g, h):
            mismatches.append((g, h))
    return EmbeddingReport(not mismatches, mismatches)


# -- center ---------------------------------------------------------------

@dataclass
class CenterResult:
    ddeg: int
    columns: list  # (generator, ∂-power)
    space: SolutionSpace
    elements: list

    @property
    def dim(self) -> int:
        return len(self.elements)


def center(A: ConformalSuperalgebra, ddeg: int = 4) -> CenterResult:
    """Elements r with ∂-degree <= ddeg and [r_λ g] = 0 for every generator g."""
    if ddeg < 0:
        raise ValueError("degree bound must be nonnegative")
    columns = [(g, i) for g in A.names for i in range(ddeg + 1)]
    rows: dict = {}
    for c, (g, i) in enumerate(columns):
        unit = Element.gen(g, D ** i)
        for h in A.names:
            for key, val in eval_bracket(A, unit, Element.gen(h), SLOT).flatten().items():
                rows.setdefault((h, key), {})[c] = val
    space = nullspace(list(rows.values()), len(columns))
    elements = []
    for v in space.basis:
        e = Element()
        for (g, i), x in zip(columns, v):
            if x:
                e = e + Element.gen(g, (D ** i).scale(x))
        elements.append(e)
    return CenterResult(ddeg, columns, space, elements)


class FreeModule:
    """Bare free C[∂]-module with homogeneous generators."""

    def __init__(self, generators: Iterable[Generator], name: str = ""):
        self.generators = tuple(generators)
        _check_names(self.generators, "module generator")
        self.name = name
        self.parities = {g.name: g.parity for g in self.generators}
        self.names = tuple(g.name for g in self.generators)
