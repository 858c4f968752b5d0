"""Independent reference computations used by the tests.

Nothing here calls the library's bracket, map or solver code; tables are only
read as data.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import sympy as sp

# -- n-product calculus ----------------------------------------------------------
#
# [a_λ b] = Σ_n λ^n/n! a_(n) b.  Elements are dicts {(generator, ∂-power): c}.


def _falling(n: int, k: int) -> int:
    return factorial(n) // factorial(n - k) if 0 <= k <= n else 0


def _add(acc: dict, x: dict, c=1) -> None:
    for k, v in x.items():
        s = acc.get(k, 0) + c * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def _dpow(x: dict, j: int) -> dict:
    return {(g, i + j): c for (g, i), c in x.items()}


class NProducts:
    def __init__(self, names, parities, table):
        """``table[(g, h)]`` is a dict ``{k: {(dpow, lpow): c}}``."""
        self.names = list(names)
        self.par = dict(parities)
        self.prod = {}
        self.top = 0
        for (g, h), val in table.items():
            for k, coeffs in val.items():
                for (i, j), c in coeffs.items():
                    slot = self.prod.setdefault((g, h, j), {})
                    _add(slot, {(k, i): Fraction(c) * factorial(j)})
                    self.top = max(self.top, i + j)

    def gen_prod(self, g: str, n: int, h: str) -> dict:
        return dict(self.prod.get((g, h, n), {}))

    def nprod(self, a: dict, n: int, b: dict) -> dict:
        out: dict = {}
        for (g, i), ca in a.items():
            # (∂^i g)_(n) X = (-1)^i [n]_i g_(n-i) X
            f = _falling(n, i)
            if not f:
                continue
            m = n - i
            for (h, j), cb in b.items():
                # g_(m)(∂^j h) = Σ_k C(j,k) [m]_k ∂^{j-k} (g_(m-k) h)
                for k in range(min(j, m) + 1):
                    w = comb(j, k) * _falling(m, k)
                    _add(out, _dpow(self.gen_prod(g, m - k, h), j - k), (-1) ** i * f * w * ca * cb)
        return out

    def sign(self, g: str, h: str) -> int:
        return -1 if self.par[g] and self.par[h] else 1

    def skew_failures(self) -> list:
        bad = []
        for g in self.names:
            for h in self.names:
                for n in range(self.top + 2):
                    lhs = self.gen_prod(h, n, g)
                    rhs: dict = {}
                    for j in range(self.top + 2):
                        term = _dpow(self.gen_prod(g, n + j, h), j)
                        _add(rhs, term, Fraction(-self.sign(g, h) * (-1) ** (n + j), factorial(j)))
                    if lhs != rhs:
                        bad.append(("skew", g, h, n))
        return bad

    def jacobi_failures(self) -> list:
        bound = 2 * self.top + 3
        bad = []
        for a in self.names:
            for b in self.names:
                for c in self.names:
                    A, B, C = {(a, 0): 1}, {(b, 0): 1}, {(c, 0): 1}
                    for m in range(bound):
                        for n in range(bound):
                            lhs = self.nprod(A, m, self.nprod(B, n, C))
                            _add(lhs, self.nprod(B, n, self.nprod(A, m, C)), -self.sign(a, b))
                            rhs: dict = {}
                            for j in range(m + 1):
                                _add(rhs, self.nprod(self.nprod(A, j, B), m + n - j, C), comb(m, j))
                            if lhs != rhs:
                                bad.append(("jacobi", a, b, c, m, n))
        return bad

    def is_lie_conformal(self) -> bool:
        return not self.skew_failures() and not self.jacobi_failures()


def nproducts_of(A) -> NProducts:
    """Read an algebra's full ordered table as raw coefficient data."""
    table = {}
    for (g, h), v in A.table.items():
        entry = {}
        for k, p in v.items():
            coeffs = {}
            for mono, c in p.items():
                e = dict(mono)
                coeffs[(e.get("d", 0), e.get("l", 0))] = c
            entry[k] = coeffs
        table[(g, h)] = entry
    return NProducts(A.names, A.parities, table)


# -- gl(1|1) from 2x2 supermatrices ----------------------------------------------


def _unit(i: int, j: int) -> list:
    m = [[Fraction(0)] * 2 for _ in range(2)]
    m[i][j] = Fraction(1)
    return m


def _mm(x, y):
    return [[sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def gl11_matrix_constants() -> dict:
    """{(a, b): {c: coeff}} from [X, Y] = XY - (-1)^{|X||Y|} YX."""
    basis = {f"E{i + 1}{j + 1}": (_unit(i, j), int(i != j)) for i in range(2) for j in range(2)}
    out = {}
    for a, (X, pa) in basis.items():
        for b, (Y, pb) in basis.items():
            s = -1 if pa and pb else 1
            xy, yx = _mm(X, Y), _mm(Y, X)
            br = [[xy[i][j] - s * yx[i][j] for j in range(2)] for i in range(2)]
            coeffs = {f"E{i + 1}{j + 1}": br[i][j] for i in range(2) for j in range(2) if br[i][j]}
            if coeffs:
                out[(a, b)] = coeffs
    return out


# -- sympy λ-bracket expansion -------------------------------------------------------

dd, lam, mu = sp.symbols("d lam mu")


class SymAlgebra:
    """λ-brackets with sympy coefficients, expanded from the defining rules.

    Elements are dicts {generator: sympy expr in d and slot symbols}.
    """

    def __init__(self, names, parities, table):
        self.names = list(names)
        self.par = dict(parities)
        self.table = table  # (g, h) -> {k: sympy expr in d, lam}

    def bracket(self, a: dict, b: dict, s) -> dict:
        """[a_s b] = Σ p(-s) q(d + s) [g_s h]."""
        out: dict = {}
        for g, p in a.items():
            for h, q in b.items():
                for k, r in self.table.get((g, h), {}).items():
                    term = p.subs(dd, -s) * q.subs(dd, dd + s) * r.subs(lam, s)
                    out[k] = sp.expand(out.get(k, 0) + term)
        return {k: v for k, v in out.items() if v != 0}


def sym_of(A) -> SymAlgebra:
    table = {}
    for (g, h), v in A.table.items():
        table[(g, h)] = {k: _sym_poly(p) for k, p in v.items()}
    return SymAlgebra(A.names, A.parities, table)


def _sym_poly(p) -> sp.Expr:
    text = p.render().replace("^", "**")
    return sp.sympify(text, locals={"d": dd, "l": lam, "m": mu})


def to_sym(e) -> dict:
    return {g: _sym_poly(p) for g, p in e.items()}


def sym_equal(x: dict, y: dict) -> bool:
    keys = set(x) | set(y)
    return all(sp.expand(x.get(k, 0) - y.get(k, 0)) == 0 for k in keys)


# -- derivation spaces by undetermined coefficients ------------------------------------


def sym_apply(F: dict, s, x: dict) -> dict:
    """f_s(Σ p_g(∂) g) = Σ p_g(∂+s) F_g(∂, s)."""
    out: dict = {}
    for g, p in x.items():
        for k, r in F.get(g, {}).items():
            term = p.subs(dd, dd + s) * r.subs(lam, s)
            out[k] = out.get(k, 0) + term
    return {k: sp.expand(v) for k, v in out.items()}


def _scale(x: dict, c) -> dict:
    return {k: c * v for k, v in x.items()}


def _plus(*xs) -> dict:
    out: dict = {}
    for x in xs:
        for k, v in x.items():
            out[k] = out.get(k, 0) + v
    return {k: sp.expand(v) for k, v in out.items()}


def der_residuals(S: SymAlgebra, F: dict, theta: int) -> list:
    """All coefficient expressions of f_λ[a_μ b] - [(f_λ a)_{λ+μ} b] - (-1)^{θ|a|}[a_μ f_λ b]."""
    out = []
    one = sp.Integer(1)
    for a in S.names:
        for b in S.names:
            lhs = sym_apply(F, lam, S.bracket({a: one}, {b: one}, mu))
            t1 = S.bracket(sym_apply(F, lam, {a: one}), {b: one}, lam + mu)
            sign = -1 if theta and S.par[a] else 1
            t2 = S.bracket({a: one}, sym_apply(F, lam, {b: one}), mu)
            res = _plus(lhs, _scale(t1, -1), _scale(t2, -sign))
            for v in res.values():
                out.extend(sp.Poly(v, dd, lam, mu).coeffs())
    return out


def der_dimension(A, parity: int, ddeg: int, ldeg: int) -> int:
    S = sym_of(A)
    unknowns = []
    F: dict = {}
    for g in A.names:
        for k in A.names:
            if (A.parities[g] + parity) % 2 != A.parities[k]:
                continue
            expr = 0
            for i in range(ddeg + 1):
                for j in range(ldeg + 1):
                    c = sp.Symbol(f"c_{g}_{k}_{i}_{j}")
                    unknowns.append(c)
                    expr += c * dd ** i * lam ** j
            F.setdefault(g, {})[k] = expr
    eqs = der_residuals(S, F, parity)
    if not eqs:
        return len(unknowns)
    M, _ = sp.linear_eq_to_matrix(eqs, unknowns)
    return len(unknowns) - M.rank()


# -- Nijenhuis identity, coefficientwise reading ---------------------------------------


def nij_sym(F: dict, s, x: dict) -> dict:
    """f_s(Σ X_k k) = Σ X_k F_k(∂, s); no shift of ∂."""
    out: dict = {}
    for k, X in x.items():
        for t, r in F.get(k, {}).items():
            out[t] = out.get(t, 0) + X * r.subs(lam, s)
    return {k: sp.expand(v) for k, v in out.items()}


def nijenhuis_ok(S: SymAlgebra, F: dict) -> bool:
    """[(f_λ a)_λ (f_μ b)] = f_{λ+μ}([a_λ b]_N) on every generator pair."""
    one = sp.Integer(1)
    for a in S.names:
        for b in S.names:
            A_, B_ = {a: one}, {b: one}
            n = _plus(
                S.bracket(nij_sym(F, lam, A_), B_, lam),
                S.bracket(A_, nij_sym(F, -dd, B_), lam),
                _scale(nij_sym(F, -dd, S.bracket(A_, B_, lam)), -1),
            )
            lhs = S.bracket(nij_sym(F, lam, A_), nij_sym(F, mu, B_), lam)
            if not sym_equal(lhs, nij_sym(F, lam + mu, n)):
                return False
    return True


# -- d on an even 1-cochain, adjoint coefficients ------------------------------------------

l1, l2 = sp.symbols("l1 l2")


def d_one_cochain(S: SymAlgebra, G: dict, a: str, b: str) -> dict:
    """(dγ)_{λ1,λ2}(a, b) for an even 1-cochain with γ_s(g) = G_g(∂, s).

    ρ(a)_{λ1} γ_{λ2}(b) - (-1)^{|a||b|} ρ(b)_{λ2} γ_{λ1}(a) - γ_{λ1+λ2}([a_{λ1} b]),
    with γ_s(p(∂) g) = p(-s) G_g(∂, s).
    """
    one = sp.Integer(1)

    def gamma(s, x):
        out: dict = {}
        for g, p in x.items():
            for k, r in G.get(g, {}).items():
                out[k] = out.get(k, 0) + p.subs(dd, -s) * r.subs(lam, s)
        return {k: sp.expand(v) for k, v in out.items()}

    sign = -1 if S.par[a] and S.par[b] else 1
    return _plus(
        S.bracket({a: one}, gamma(l2, {b: one}), l1),
        _scale(S.bracket({b: one}, gamma(l1, {a: one}), l2), -sign),
        _scale(gamma(l1 + l2, S.bracket({a: one}, {b: one}, l1)), -1),
    )
