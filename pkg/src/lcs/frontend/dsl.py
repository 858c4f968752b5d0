"""Text format for algebras, Lie superalgebras, modules, maps and cochains.

Example::

    algebra NS {
      generator L even;
      generator G odd;
      bracket [L,L] = (d + 2*l) L;
      bracket [L,G] = (d + 3/2*l) G;
      bracket [G,G] = L;
    }
    map f even on NS { f(L) = 2 L; }
    cochain psi arity 2 even on NS { psi(L,L) = (l1 - l2) L; }

Declarations may also name a builtin: ``algebra R = R5(alpha=1);``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from lcs._expr import ExprParser, Token, TokenStream, tokenize
from lcs.algebra import (
    RESERVED,
    ConformalSuperalgebra,
    LieRepresentation,
    LieSuperalgebraData,
    Representation,
    adjoint,
)
from lcs.builtins import LIE_ALGEBRAS, builtin_algebra, gl11_defining
from lcs.cohomology import Cochain, check_cochain, slot_var
from lcs.confmap import ConformalMap
from lcs.element import EVEN, ODD, Element, Generator, parity_name
from lcs.errors import LCSError, ParseError, SemanticError
from lcs.poly import Poly

PARITIES = {"even": EVEN, "odd": ODD}
LIE_REPS = {"V": gl11_defining}


@dataclass
class Catalog:
    algebras: dict = field(default_factory=dict)
    lie: dict = field(default_factory=dict)
    reps: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)  # name -> (ConformalMap, algebra)
    cochains: dict = field(default_factory=dict)
    order: list = field(default_factory=list)  # (kind, name) in declaration order

    def names(self) -> set:
        return {n for _, n in self.order}

    def algebra(self, name: str) -> ConformalSuperalgebra:
        if name in self.algebras:
            return self.algebras[name]
        return resolve_algebra(name)

    def lie_algebra(self, name: str) -> LieSuperalgebraData:
        if name in self.lie:
            return self.lie[name]
        if name in LIE_ALGEBRAS:
            return LIE_ALGEBRAS[name]()
        raise LCSError(f"unknown Lie superalgebra {name!r}")

    def rep(self, name: str):
        if name in self.reps:
            return self.reps[name]
        if name in LIE_REPS:
            return LIE_REPS[name]()
        raise LCSError(f"unknown module {name!r}")


def _sem(message: str, tok: Token) -> SemanticError:
    return SemanticError(message, tok.line, tok.col)


def _reference(s: TokenStream) -> tuple[Token, str, dict]:
    """NAME or NAME(param = expr)."""
    tok = s.expect_kind("ident", "a name")
    params = {}
    if s.at("("):
        s.next()
        key = s.expect_kind("ident", "parameter name")
        s.expect("=")
        combo = ExprParser(s, (), {"d", "l"}).parse()
        if set(combo) - {None}:
            raise _sem("parameter must be a scalar or polynomial", key)
        params[key.text] = combo.get(None, Poly())
        s.expect(")")
    return tok, tok.text, params


def resolve_algebra(text_or_name: str, **params) -> ConformalSuperalgebra:
    """Builtin algebra from ``NAME`` or ``NAME(param=value)``."""
    if params or "(" not in text_or_name:
        return builtin_algebra(text_or_name.strip(), **params)
    s = TokenStream(tokenize(text_or_name))
    _, name, params = _reference(s)
    if s.peek.kind != "eof":
        raise s.error(f"unexpected {s.peek.text!r}")
    return builtin_algebra(name, **params)


class _Parser:
    def __init__(self, text: str, catalog: Catalog | None = None):
        self.s = TokenStream(tokenize(text))
        self.cat = catalog or Catalog()
        self.last_algebra: str | None = None

    # -- helpers --------------------------------------------------------------

    def _declare(self, kind: str, tok: Token) -> None:
        if tok.text in self.cat.names():
            raise _sem(f"duplicate name {tok.text!r}", tok)
        self.cat.order.append((kind, tok.text))

    def _parity(self) -> int:
        tok = self.s.expect_kind("ident", "'even' or 'odd'")
        if tok.text not in PARITIES:
            raise _sem(f"expected 'even' or 'odd', found {tok.text!r}", tok)
        return PARITIES[tok.text]

    def _generators(self, gens: list, seen: dict) -> None:
        s = self.s
        toks = [s.expect_kind("ident", "generator name")]
        while s.at(","):
            s.next()
            toks.append(s.expect_kind("ident", "generator name"))
        p = self._parity()
        s.expect(";")
        for t in toks:
            if t.text in seen:
                raise _sem(f"duplicate generator {t.text!r}", t)
            if t.text in RESERVED or t.text in PARITIES or t.text.startswith("_"):
                raise _sem(f"{t.text!r} is reserved", t)
            seen[t.text] = t
            gens.append(Generator(t.text, p))

    def _value(self, symbols, variables) -> tuple[Token, Element]:
        tok = self.s.peek
        combo = ExprParser(self.s, symbols, variables).parse()
        if combo.get(None) is not None and not combo[None].is_zero():
            raise _sem("value must be a combination of generators (a bare scalar is only allowed as 0)", tok)
        return tok, Element({k: v for k, v in combo.items() if k is not None})

    def _check_parity(self, value: Element, parities: dict, want: int, tok: Token, what: str) -> None:
        for k in value.names():
            if parities[k] != want:
                raise _sem(f"parity clash in {what}: {k} is {parity_name(parities[k])}, "
                           f"expected {parity_name(want)}", tok)

    def _pair(self) -> tuple[Token, str, str]:
        s = self.s
        open_tok = s.expect("[")
        a = s.expect_kind("ident", "generator name")
        s.expect(",")
        b = s.expect_kind("ident", "generator name")
        s.expect("]")
        return open_tok, a, b

    def _on(self):
        s = self.s
        if s.at("on"):
            s.next()
            tok, name, params = _reference(s)
            return tok, name, params
        if self.last_algebra is None:
            raise s.error("missing 'on ALGEBRA'")
        return s.peek, self.last_algebra, {}

    def _lookup_algebra(self, tok: Token, name: str, params: dict):
        if not params and name in self.cat.algebras:
            return self.cat.algebras[name]
        try:
            return builtin_algebra(name, **params)
        except LCSError as exc:
            raise _sem(str(exc), tok) from None

    # -- declarations ---------------------------------------------------------

    def parse(self) -> Catalog:
        s = self.s
        while s.peek.kind != "eof":
            tok = s.peek
            if tok.kind != "ident":
                raise s.error(f"expected a declaration, found {tok.text!r}")
            handler = {
                "algebra": self.algebra, "liealg": self.liealg, "rep": self.rep,
                "map": self.map, "cochain": self.cochain,
            }.get(tok.text)
            if handler is None:
                raise s.error(f"unknown declaration {tok.text!r}")
            s.next()
            handler()
        return self.cat

    def algebra(self) -> None:
        s = self.s
        name = s.expect_kind("ident", "algebra name")
        self._declare("algebra", name)
        if s.at("="):
            s.next()
            ref_tok, ref, params = _reference(s)
            s.expect(";")
            A = self._lookup_algebra(ref_tok, ref, params)
            A = ConformalSuperalgebra(A.generators, A.canonical_table(), name=name.text)
        else:
            gens, table = self._bracket_block("bracket", (name.text, "algebra"), lie=False)
            try:
                A = ConformalSuperalgebra(gens, table, name=name.text)
            except LCSError as exc:
                raise _sem(str(exc), name) from None
        self.cat.algebras[name.text] = A
        self.last_algebra = name.text

    def _bracket_block(self, keyword: str, owner, lie: bool):
        s = self.s
        s.expect("{")
        gens: list = []
        seen: dict = {}
        table: dict = {}
        variables = () if lie else ("d", "l")
        while not s.at("}"):
            kw = s.expect_kind("ident", f"'generator' or '{keyword}'")
            if kw.text == "generator":
                self._generators(gens, seen)
            elif kw.text == keyword:
                open_tok, a, b = self._pair()
                parities = {g.name: g.parity for g in gens}
                for t in (a, b):
                    if t.text not in parities:
                        raise _sem(f"unknown generator {t.text!r}", t)
                if (a.text, b.text) in table:
                    raise _sem(f"duplicate bracket [{a.text},{b.text}]", open_tok)
                s.expect("=")
                vtok, value = self._value(parities, variables)
                s.expect(";")
                self._check_parity(value, parities, (parities[a.text] + parities[b.text]) % 2, vtok,
                                   f"[{a.text},{b.text}]")
                table[(a.text, b.text)] = value
            else:
                raise _sem(f"expected 'generator' or '{keyword}', found {kw.text!r}", kw)
        s.expect("}")
        for g in gens:
            if g.parity == ODD and (g.name, g.name) not in table:
                raise _sem(f"bracket [{g.name},{g.name}] of an odd generator must be given (write '= 0')",
                           seen[g.name])
        return gens, table

    def liealg(self) -> None:
        name = self.s.expect_kind("ident", "Lie superalgebra name")
        self._declare("liealg", name)
        gens, table = self._bracket_block("bracket", (name.text, "liealg"), lie=True)
        consts = {k: {g: p.constant_term() for g, p in v.items()} for k, v in table.items()}
        try:
            lie = LieSuperalgebraData(gens, consts, name=name.text)
        except LCSError as exc:
            raise _sem(str(exc), name) from None
        self.cat.lie[name.text] = lie

    def rep(self) -> None:
        s = self.s
        name = s.expect_kind("ident", "module name")
        self._declare("rep", name)
        s.expect("on")
        ref_tok, ref, params = _reference(s)
        if s.at("module"):
            s.next()
        lie = None
        if not params and ref in self.cat.lie:
            lie = self.cat.lie[ref]
        elif not params and ref not in self.cat.algebras and ref in LIE_ALGEBRAS:
            lie = LIE_ALGEBRAS[ref]()
        base = lie if lie is not None else self._lookup_algebra(ref_tok, ref, params)
        s.expect("{")
        gens: list = []
        seen: dict = {}
        table: dict = {}
        variables = () if lie is not None else ("d", "l")
        while not s.at("}"):
            kw = s.expect_kind("ident", "'generator' or 'action'")
            if kw.text == "generator":
                self._generators(gens, seen)
                continue
            if kw.text != "action":
                raise _sem(f"expected 'generator' or 'action', found {kw.text!r}", kw)
            open_tok, a, m = self._pair()
            mpar = {g.name: g.parity for g in gens}
            if a.text not in base.parities:
                raise _sem(f"unknown generator {a.text!r} of {ref}", a)
            if m.text not in mpar:
                raise _sem(f"unknown module generator {m.text!r}", m)
            if (a.text, m.text) in table:
                raise _sem(f"duplicate action [{a.text},{m.text}]", open_tok)
            s.expect("=")
            vtok, value = self._value(mpar, variables)
            s.expect(";")
            self._check_parity(value, mpar, (base.parities[a.text] + mpar[m.text]) % 2, vtok,
                               f"[{a.text},{m.text}]")
            table[(a.text, m.text)] = value
        s.expect("}")
        try:
            if lie is not None:
                consts = {k: {g: p.constant_term() for g, p in v.items()} for k, v in table.items()}
                R = LieRepresentation(lie, gens, consts, name=name.text)
            else:
                R = Representation(base, gens, table, name=name.text)
        except LCSError as exc:
            raise _sem(str(exc), name) from None
        self.cat.reps[name.text] = R

    def map(self) -> None:
        s = self.s
        name = s.expect_kind("ident", "map name")
        self._declare("map", name)
        parity = self._parity()
        A = self._lookup_algebra(*self._on())
        s.expect("{")
        values: dict = {}
        while not s.at("}"):
            fn = s.expect_kind("ident", "map name")
            if fn.text != name.text:
                raise _sem(f"expected {name.text}(...), found {fn.text!r}", fn)
            s.expect("(")
            g = s.expect_kind("ident", "generator name")
            s.expect(")")
            if g.text not in A.parities:
                raise _sem(f"unknown generator {g.text!r} of {A.name}", g)
            if g.text in values:
                raise _sem(f"duplicate value for {name.text}({g.text})", g)
            s.expect("=")
            vtok, value = self._value(A.parities, ("d", "l"))
            s.expect(";")
            self._check_parity(value, A.parities, (parity + A.parities[g.text]) % 2, vtok,
                               f"{name.text}({g.text})")
            values[g.text] = value
        s.expect("}")
        self.cat.maps[name.text] = (ConformalMap(parity, values, A.names, name=name.text), A)

    def cochain(self) -> None:
        s = self.s
        name = s.expect_kind("ident", "cochain name")
        self._declare("cochain", name)
        s.expect("arity")
        ntok = s.expect_kind("num", "arity")
        n = int(ntok.text)
        parity = self._parity()
        A = self._lookup_algebra(*self._on())
        module = adjoint(A)
        if s.at("with"):
            s.next()
            mt = s.expect_kind("ident", "module name")
            module = self.cat.reps.get(mt.text)
            if not isinstance(module, Representation) or module.algebra.names != A.names:
                raise _sem(f"{mt.text!r} is not a module over {A.name}", mt)
        s.expect("{")
        index = {g: i for i, g in enumerate(A.names)}
        variables = ("d",) + tuple(slot_var(i) for i in range(n))
        values: dict = {}
        while not s.at("}"):
            fn = s.expect_kind("ident", "cochain name")
            if fn.text != name.text:
                raise _sem(f"expected {name.text}(...), found {fn.text!r}", fn)
            s.expect("(")
            args = []
            while not s.at(")"):
                if args:
                    s.expect(",")
                args.append(s.expect_kind("ident", "generator name"))
            close = s.expect(")")
            if len(args) != n:
                raise _sem(f"{name.text} takes {n} arguments, got {len(args)}", close)
            for t in args:
                if t.text not in index:
                    raise _sem(f"unknown generator {t.text!r} of {A.name}", t)
            key = tuple(t.text for t in args)
            if list(key) != sorted(key, key=index.__getitem__):
                raise _sem(f"arguments must follow declaration order of {A.name}", fn)
            if key in values:
                raise _sem(f"duplicate value for {name.text}{key}", fn)
            s.expect("=")
            vtok, value = self._value(module.parities, variables)
            s.expect(";")
            want = (parity + sum(A.parities[g] for g in key)) % 2
            self._check_parity(value, module.parities, want, vtok, f"{name.text}({', '.join(key)})")
            values[key] = value
        s.expect("}")
        if n == 0 and () not in values:
            values[()] = Element()
        try:
            c = Cochain(A, module, n, parity, values, name=name.text)
        except LCSError as exc:
            raise _sem(str(exc), name) from None
        bad = check_cochain(c)
        if bad:
            key = bad[0][0]
            raise _sem(f"{name.text}({', '.join(key)}) is not skew-symmetric in its repeated arguments", name)
        self.cat.cochains[name.text] = c


def parse(text: str, catalog: Catalog | None = None) -> Catalog:
    """Parse a document; raises :class:`ParseError` with line and column."""
    return _Parser(text, catalog).parse()


def parse_algebra(text: str) -> ConformalSuperalgebra:
    cat = parse(text)
    if len(cat.algebras) != 1:
        raise ParseError(f"expected exactly one algebra, found {len(cat.algebras)}")
    return next(iter(cat.algebras.values()))


# -- rendering ----------------------------------------------------------------


def ident(name: str, default: str) -> str:
    """Make ``name`` usable as a declaration name."""
    text = re.sub(r"\W+", "_", name or "").strip("_")
    return text if text and not text[0].isdigit() else default


def _gen_lines(gens) -> list[str]:
    return [f"  generator {g.name} {parity_name(g.parity)};" for g in gens]


def render_algebra(A: ConformalSuperalgebra, name: str | None = None) -> str:
    lines = [f"algebra {ident(name or A.name, 'A')} {{"] + _gen_lines(A.generators)
    for (a, b), v in A.canonical_table().items():
        lines.append(f"  bracket [{a},{b}] = {v.render(A.names)};")
    lines.append("}")
    return "\n".join(lines)


def _const_render(v: dict, order) -> str:
    return Element({k: Poly.const(Fraction(c)) for k, c in v.items()}).render(order)


def render_lie(lie: LieSuperalgebraData, name: str | None = None) -> str:
    lines = [f"liealg {ident(name or lie.name, 'g')} {{"] + _gen_lines(lie.basis)
    for i, a in enumerate(lie.names):
        for b in lie.names[i:]:
            v = lie.table.get((a, b), {})
            if v or (a == b and lie.parities[a] == ODD):
                lines.append(f"  bracket [{a},{b}] = {_const_render(v, lie.names)};")
    lines.append("}")
    return "\n".join(lines)


def render_rep(R, name: str | None = None, base: str | None = None) -> str:
    if isinstance(R, LieRepresentation):
        base = base or R.lie.name
        entries = [((a, m), _const_render(v, R.names)) for (a, m), v in R.action.items()]
    else:
        base = base or R.algebra.name
        entries = [((a, m), v.render(R.names)) for (a, m), v in R.table.items()]
    lines = [f"rep {ident(name or R.name, 'M')} on {ident(base, 'A')} {{"] + _gen_lines(R.module)
    for (a, m), text in entries:
        lines.append(f"  action [{a},{m}] = {text};")
    lines.append("}")
    return "\n".join(lines)


def render_map(f: ConformalMap, A: ConformalSuperalgebra, name: str | None = None) -> str:
    name = ident(name or f.name, "f")
    lines = [f"map {name} {parity_name(f.parity)} on {ident(A.name, 'A')} {{"]
    for g in A.names:
        v = f.value(g)
        if not v.is_zero():
            lines.append(f"  {name}({g}) = {v.render(A.names)};")
    lines.append("}")
    return "\n".join(lines)


def render_cochain(c: Cochain, name: str | None = None, module: str | None = None) -> str:
    name = ident(name or c.name, "c")
    head = f"cochain {name} arity {c.arity} {parity_name(c.parity)} on {ident(c.algebra.name, 'A')}"
    if module:
        head += f" with {module}"
    lines = [head + " {"]
    for key in c.canonical_tuples():
        v = c.stored(key)
        if not v.is_zero():
            lines.append(f"  {name}({', '.join(key)}) = {v.render(c.module.names)};")
    lines.append("}")
    return "\n".join(lines)


def render(cat: Catalog) -> str:
    blocks = []
    for kind, name in cat.order:
        if kind == "algebra":
            blocks.append(render_algebra(cat.algebras[name], name))
        elif kind == "liealg":
            blocks.append(render_lie(cat.lie[name], name))
        elif kind == "rep":
            blocks.append(render_rep(cat.reps[name], name))
        elif kind == "map":
            f, A = cat.maps[name]
            blocks.append(render_map(f, A, name))
        elif kind == "cochain":
            c = cat.cochains[name]
            mod = c.module.name if c.module.name in cat.reps else None
            blocks.append(render_cochain(c, name, mod))
    return "\n\n".join(blocks) + "\n"


__all__ = [
    "Catalog",
    "parse",
    "parse_algebra",
    "render",
    "render_algebra",
    "render_cochain",
    "render_lie",
    "render_map",
    "render_rep",
    "resolve_algebra",
]
