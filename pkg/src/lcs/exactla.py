"""Exact linear algebra over the rationals.

Rows are kept sparse (``{column: Fraction}``) internally; dense list input is
accepted everywhere.  Reduction always produces the reduced row echelon form,
which is unique, so returned bases do not depend on input row order.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from lcs.errors import DimensionMismatch

Vector = tuple  # tuple[Fraction, ...]


def _sparse(row) -> dict:
    if isinstance(row, dict):
        return {c: Fraction(v) for c, v in row.items() if v}
    return {i: Fraction(v) for i, v in enumerate(row) if v}


class RowReducer:
    """Incrementally maintained reduced row echelon form."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}

    def reduce(self, row: dict) -> dict:
        """Return ``row`` with all pivot columns eliminated."""
        row = dict(row)
        for c in [c for c in row if c in self.pivots]:
            coef = row.get(c)
            if not coef:
                continue
            for k, v in self.pivots[c].items():
                s = row.get(k, 0) - coef * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
        return row

    def add(self, row) -> bool:
        """Insert a row; return True if it raised the rank."""
        row = self.reduce(_sparse(row))
        if not row:
            return False
        for c in row:
            if c >= self.ncols or c < 0:
                raise DimensionMismatch(f"column {c} outside 0..{self.ncols - 1}")
        p = min(row)
        inv = 1 / row[p]
        row = {k: v * inv for k, v in row.items()}
        for prow in self.pivots.values():
            coef = prow.get(p)
            if coef:
                for k, v in row.items():
                    s = prow.get(k, 0) - coef * v
                    if s:
                        prow[k] = s
                    else:
                        del prow[k]
        self.pivots[p] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rows(self) -> list[dict]:
        return [self.pivots[c] for c in sorted(self.pivots)]

    def nullspace_vectors(self) -> list[Vector]:
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for p, prow in self.pivots.items():
                coef = prow.get(f)
                if coef:
                    v[p] = -coef
            basis.append(tuple(v))
        return basis


@dataclass(frozen=True)
class SolutionSpace:
    dim: int
    basis: tuple = field(default_factory=tuple)

    def __post_init__(self):
        fixed = []
        for v in self.basis:
            v = tuple(Fraction(x) for x in v)
            if len(v) != self.dim:
                raise DimensionMismatch(f"basis vector of length {len(v)} in dimension {self.dim}")
            fixed.append(v)
        object.__setattr__(self, "basis", tuple(fixed))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return contains(self, v)


def as_rows(matrix) -> list[dict]:
    return [_sparse(r) for r in matrix]


def rref(matrix, ncols: int) -> RowReducer:
    red = RowReducer(ncols)
    for row in matrix:
        red.add(row)
    return red


def rank(matrix, ncols: int) -> int:
    return rref(matrix, ncols).rank


def nullspace(matrix, ncols: int | None = None) -> SolutionSpace:
    """Exact basis of ``{v : M v = 0}``.

    ``matrix`` is a sequence of dense rows or ``{col: value}`` dicts; ``ncols``
    is required when rows are sparse or the matrix has no rows.
    """
    matrix = list(matrix)
    if ncols is None:
        if not matrix or isinstance(matrix[0], dict):
            raise ValueError("ncols required for sparse or empty matrices")
        ncols = len(matrix[0])
    for row in matrix:
        if not isinstance(row, dict) and len(row) != ncols:
            raise DimensionMismatch("ragged matrix")
    return SolutionSpace(ncols, tuple(rref(matrix, ncols).nullspace_vectors()))


def mat_vec(matrix, v: Sequence) -> list[Fraction]:
    out = []
    for row in matrix:
        row = _sparse(row)
        out.append(sum((c * v[k] for k, c in row.items()), Fraction(0)))
    return out


def span(vectors: Iterable[Sequence], dim: int) -> SolutionSpace:
    """Independent basis (reduced echelon rows) of the span of ``vectors``."""
    red = RowReducer(dim)
    for v in vectors:
        if len(v) != dim:
            raise DimensionMismatch(f"vector of length {len(v)} in dimension {dim}")
        red.add(v)
    return SolutionSpace(dim, tuple(_dense(r, dim) for r in red.rows()))


def _dense(row: dict, dim: int) -> Vector:
    v = [Fraction(0)] * dim
    for k, x in row.items():
        v[k] = x
    return tuple(v)


def contains(space: SolutionSpace, v: Sequence) -> bool:
    if len(v) != space.dim:
        raise DimensionMismatch(f"vector of length {len(v)} against dimension {space.dim}")
    red = rref(space.basis, space.dim)
    return not red.reduce(_sparse(v))


def sum_and_intersect(s1: SolutionSpace, s2: SolutionSpace) -> tuple[SolutionSpace, SolutionSpace]:
    if s1.dim != s2.dim:
        raise DimensionMismatch(f"dimensions {s1.dim} and {s2.dim} differ")
    dim = s1.dim
    b1 = span(s1.basis, dim).basis
    b2 = span(s2.basis, dim).basis
    total = span(b1 + b2, dim)
    # a in ker [B1 | -B2] (columns are basis vectors) gives sum a_i u_i in both
    k1, k2 = len(b1), len(b2)
    rows = []
    for coord in range(dim):
        row = {}
        for i, u in enumerate(b1):
            if u[coord]:
                row[i] = u[coord]
        for j, w in enumerate(b2):
            if w[coord]:
                row[k1 + j] = -w[coord]
        rows.append(row)
    kernel = nullspace(rows, k1 + k2)
    vecs = []
    for a in kernel.basis:
        vecs.append(tuple(sum((a[i] * b1[i][c] for i in range(k1)), Fraction(0)) for c in range(dim)))
    return total, span(vecs, dim)
