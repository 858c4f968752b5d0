"""Single-coefficient mutations of bracket tables."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from lcs.algebra import AxiomReport, ConformalSuperalgebra, check_axioms
from lcs.element import Element
from lcs.poly import D, Poly

L = Poly.var("l")


@dataclass
class Mutation:
    pair: tuple
    target: str
    monomial: tuple  # (∂-power, λ-power)
    delta: Fraction
    mode: str  # "raw": only this ordered entry changes; "skew": transpose re-derived

    def describe(self) -> str:
        i, j = self.monomial
        return (f"[{self.pair[0]},{self.pair[1]}] += {self.delta}*d^{i}*l^{j} {self.target} ({self.mode})")


def mutate(A: ConformalSuperalgebra, rng: random.Random, max_deg: int = 2) -> tuple[ConformalSuperalgebra, Mutation]:
    g = rng.choice(A.names)
    h = rng.choice(A.names)
    want = (A.parities[g] + A.parities[h]) % 2
    targets = [k for k in A.names if A.parities[k] == want]
    k = rng.choice(targets)
    i, j = rng.randint(0, max_deg), rng.randint(0, max_deg)
    delta = Fraction(0)
    while not delta:
        delta = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    bump = Element.gen(k, ((D ** i) * (L ** j)).scale(delta))
    mode = rng.choice(["raw", "skew"])
    if mode == "raw":
        table = dict(A.table)
        table[(g, h)] = A.bracket(g, h) + bump
        mutant = ConformalSuperalgebra.from_full_table(A.generators, table, name=f"{A.name}*")
    else:
        table = {key: v for key, v in A.canonical_table().items() if {key[0], key[1]} != {g, h}}
        table[(g, h)] = A.bracket(g, h) + bump
        mutant = ConformalSuperalgebra(A.generators, table, name=f"{A.name}*")
    return mutant, Mutation((g, h), k, (i, j), delta, mode)


@dataclass
class FuzzRecord:
    source: str
    mutation: Mutation
    mutant: ConformalSuperalgebra
    report: AxiomReport


def fuzz(algebras, count: int, seed: int = 0, max_deg: int = 2) -> list[FuzzRecord]:
    rng = random.Random(seed)
    out = []
    for n in range(count):
        A = algebras[n % len(algebras)]
        mutant, mut = mutate(A, rng, max_deg)
        out.append(FuzzRecord(A.name, mut, mutant, check_axioms(mutant)))
    return out
