import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import (
    d_one_cochain,
    nijenhuis_ok,
    sym_equal,
    sym_of,
    to_sym,
)

from lcs.algebra import adjoint, current_algebra, current_module
from lcs.builtins import gl11, gl11_defining, neveu_schwarz, r2, r3
from lcs.cohomology import (
    Cochain,
    check_cochain,
    check_trivial_deformation,
    cochain_from_map,
    deformation_check,
    deformed_algebra,
    differential,
    differential_value,
    element_cochain,
    eval_cochain,
    eval_on_generators,
    is_cochain,
    is_nijenhuis,
    nijenhuis_bracket,
    nijenhuis_minus_d_residual,
    nijenhuis_residual,
    psi_table_from_cochain,
    random_cochain,
)
from lcs.confmap import ConformalMap, identity_map, random_map, zero_map
from lcs.element import Element
from lcs.errors import LCSError, ParityError
from lcs.poly import D, Poly, parse_poly

NS = neveu_schwarz()
ADJ = adjoint(NS)
L1, L2 = Poly.var("l1"), Poly.var("l2")
L = Poly.var("l")


def e(text_by_gen):
    return Element({g: parse_poly(t) for g, t in text_by_gen.items()})


# -- evaluation --------------------------------------------------------------------


def test_zero_cochain_ignores_slots():
    g = element_cochain(NS, ADJ, Element.gen("L"))
    assert eval_cochain(g, [], []) == Element.gen("L")


def test_one_cochain_antilinearity():
    g = cochain_from_map(random_map(random.Random(1), NS, NS, 0), NS)
    base = eval_cochain(g, ["L"], ["l1"])
    assert eval_cochain(g, [Element.gen("L", D)], ["l1"]) == base.mul(-L1)


def test_two_cochain_skew_rule():
    v = Element.gen("G", L1 * L1 + D * L2)
    g = Cochain(NS, ADJ, 2, 0, {("L", "G"): v})
    swapped = v.subs({"l1": L2, "l2": L1})
    # -(-1)^{|L||G|} = -1
    assert eval_on_generators(g, ["G", "L"], ["l1", "l2"]) == swapped.scale(-1)


def test_cochain_validation():
    with pytest.raises(LCSError):
        Cochain(NS, ADJ, 2, 0, {("G", "L"): Element.gen("G")})
    with pytest.raises(ParityError):
        Cochain(NS, ADJ, 1, 0, {("L",): Element.gen("G")})
    with pytest.raises(LCSError):
        Cochain(NS, ADJ, 1, 0, {("L",): Element.gen("L", L2)})
    with pytest.raises(LCSError):
        eval_cochain(Cochain(NS, ADJ, 1, 0), [], [])


def test_check_cochain():
    assert is_cochain(element_cochain(NS, ADJ, Element.gen("G")))
    assert is_cochain(cochain_from_map(identity_map(NS), NS))
    # an even repeated pair must be antisymmetric under λ1 <-> λ2
    bad = Cochain(NS, ADJ, 2, 0, {("L", "L"): Element.gen("L", L1 + L2)})
    assert check_cochain(bad) == [(("L", "L"), 0, 1)]
    good = Cochain(NS, ADJ, 2, 0, {("L", "L"): Element.gen("L", L1 - L2)})
    assert is_cochain(good)
    # an odd repeated pair must be symmetric
    assert is_cochain(Cochain(NS, ADJ, 2, 0, {("G", "G"): Element.gen("L", L1 + L2)}))


# -- the differential ----------------------------------------------------------------


def test_differential_of_element():
    g = element_cochain(NS, ADJ, Element.gen("L"))
    assert differential_value(g, ("G",)) == e({"G": "1/2*d + 3/2*l1"})
    assert differential(differential(g)).is_zero()


def test_differential_of_identity():
    psi = differential(cochain_from_map(identity_map(NS), NS))
    table = psi_table_from_cochain(psi)
    for a in NS.names:
        for b in NS.names:
            assert table[(a, b)] == NS.bracket(a, b)


@pytest.mark.parametrize("seed", range(4))
def test_differential_of_one_cochain_matches_formula(seed):
    f = random_map(random.Random(seed), NS, NS, 0, 1, 1)
    g = cochain_from_map(f, NS)
    S = sym_of(NS)
    G = {k: to_sym(f.value(k)) for k in NS.names}
    for a, b in itertools.product(NS.names, repeat=2):
        got = eval_on_generators(differential(g), [a, b], ["l1", "l2"])
        assert sym_equal(to_sym(got), d_one_cochain(S, G, a, b))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2), st.integers(0, 1))
def test_d_squared_vanishes(seed, arity, parity):
    g = random_cochain(random.Random(seed), NS, ADJ, arity, parity, degree=2)
    dg = differential(g)
    assert is_cochain(dg)
    assert differential(dg).is_zero()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_d_squared_on_current_module(seed):
    rep = current_module(gl11(), gl11_defining())
    g = random_cochain(random.Random(seed), rep.algebra, rep, 1, seed % 2, degree=1)
    assert differential(differential(g)).is_zero()


def test_differential_arity_cap():
    g = Cochain(NS, ADJ, 4, 0)
    with pytest.raises(LCSError):
        differential(g)


# -- Nijenhuis operators --------------------------------------------------------------------


@pytest.mark.parametrize("f", [identity_map(NS), zero_map(NS)], ids=["id", "zero"])
def test_trivial_nijenhuis_on_ns(f):
    assert nijenhuis_residual(NS, f) == {}
    assert nijenhuis_minus_d_residual(NS, f) == {}
    rep = check_trivial_deformation(NS, f)
    assert rep.ok and rep.trivial_ok and rep.n2_ok and rep.cocycle_ok


def test_identity_nijenhuis_bracket():
    for a, b in itertools.product(NS.names, repeat=2):
        assert nijenhuis_bracket(NS, identity_map(NS), a, b) == NS.bracket(a, b)


def test_odd_map_rejected():
    with pytest.raises(ParityError):
        nijenhuis_residual(NS, zero_map(NS, 1))


def _r2_map(a0, a1, b0, b1):
    A = r2()
    return ConformalMap(0, {"x": Element.gen("x", Poly.const(a0) + D.scale(a1)),
                            "y": Element.gen("y", Poly.const(b0) + D.scale(b1))}, A.names)


GRID = list(itertools.product([-1, 0, 2], repeat=4))


def test_r2_search_agrees_with_expansion():
    A = r2()
    S = sym_of(A)
    found = []
    for c in GRID:
        f = _r2_map(*c)
        F = {k: to_sym(f.value(k)) for k in A.names}
        lib = is_nijenhuis(A, f)
        assert lib == nijenhuis_ok(S, F), c
        if lib:
            found.append(c)
    assert found and any(c[1] != 0 for c in found)
    assert all(c[3] == 0 for c in found)


def test_r2_nontrivial_nijenhuis_gives_trivial_deformation():
    A = r2()
    f = _r2_map(2, -1, -1, 0)
    assert is_nijenhuis(A, f)
    assert nijenhuis_minus_d_residual(A, f) == {}
    rep = check_trivial_deformation(A, f)
    assert rep.ok and rep.trivial_ok


def test_non_nijenhuis_is_reported():
    A = r2()
    rep = check_trivial_deformation(A, _r2_map(0, 0, 0, 1))
    assert rep.nijenhuis_ok is False and not rep.trivial_ok
    assert any(w.kind == "nijenhuis" for w in rep.witnesses)


@pytest.mark.parametrize("A", [NS, r3(), current_algebra(gl11())], ids=lambda A: A.name)
def test_scalar_multiples_of_identity(A):
    f = identity_map(A).scale(3)
    assert is_nijenhuis(A, f)
    assert check_trivial_deformation(A, f).trivial_ok


# -- deformations --------------------------------------------------------------------------


def test_zero_deformation():
    rep = deformation_check(Cochain(NS, ADJ, 2, 0))
    assert rep.ok and rep.cocycle_ok


def test_bracket_as_deformation():
    psi = differential(cochain_from_map(identity_map(NS), NS))
    rep = deformation_check(psi)
    assert rep.ok and rep.defor1_ok and rep.defor2_ok and rep.cocycle_ok


def test_coboundary_may_fail_second_order():
    hits = 0
    for seed in range(10):
        f = random_map(random.Random(seed), NS, NS, 0, 1, 1)
        rep = deformation_check(differential(cochain_from_map(f, NS)))
        assert rep.cocycle_ok and rep.defor1_ok
        hits += rep.defor2_ok is False
    assert hits


def test_deformation_argument_checks():
    with pytest.raises(LCSError):
        deformation_check(Cochain(NS, ADJ, 1, 0))
    with pytest.raises(ParityError):
        deformation_check(Cochain(NS, ADJ, 2, 1))
    bad = Cochain(NS, ADJ, 2, 0, {("L", "L"): Element.gen("L", L1 + L2)})
    with pytest.raises(LCSError):
        deformation_check(bad)


def test_deformed_bracket_by_expansion():
    # with ψ = [·_λ·] the deformed bracket is (1+t)[a_λ b]
    psi = psi_table_from_cochain(differential(cochain_from_map(identity_map(NS), NS)))
    At = deformed_algebra(NS, psi)
    t = Poly.var("t")
    for a, b in itertools.product(NS.names, repeat=2):
        assert At.bracket(a, b) == NS.bracket(a, b).mul(t + Poly.const(1))
