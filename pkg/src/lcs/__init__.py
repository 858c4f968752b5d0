"""Exact symbolic computations with finitely generated Lie conformal superalgebras."""

from lcs.algebra import (
    ConformalSuperalgebra,
    LieRepresentation,
    LieSuperalgebraData,
    Representation,
    adjoint,
    center,
    check_axioms,
    check_cur_embedding,
    check_representation,
    current_algebra,
    eval_bracket,
    semidirect,
)
from lcs.builtins import builtin_algebra, builtins
from lcs.cohomology import Cochain, differential, is_nijenhuis
from lcs.confmap import (
    Bounds,
    ConformalMap,
    compare_inner,
    solve_derivations,
    solve_generalized,
)
from lcs.element import EVEN, ODD, Element, Generator
from lcs.errors import LCSError, ParseError, SemanticError
from lcs.poly import Poly, parse_poly

__all__ = [
    "EVEN",
    "ODD",
    "Bounds",
    "Cochain",
    "ConformalMap",
    "ConformalSuperalgebra",
    "Element",
    "Generator",
    "LCSError",
    "LieRepresentation",
    "LieSuperalgebraData",
    "ParseError",
    "Poly",
    "Representation",
    "SemanticError",
    "adjoint",
    "builtin_algebra",
    "builtins",
    "center",
    "check_axioms",
    "check_cur_embedding",
    "check_representation",
    "compare_inner",
    "current_algebra",
    "differential",
    "eval_bracket",
    "is_nijenhuis",
    "parse_poly",
    "semidirect",
    "solve_derivations",
    "solve_generalized",
]
