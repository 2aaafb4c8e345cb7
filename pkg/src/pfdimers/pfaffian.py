"""Skew-symmetric matrices, their Pfaffians, and the adjacency construction.

Two backends share one elimination scheme.  The exact backend works over
Gaussian rationals and pivots on the first nonzero entry for determinism;
the float backend works over complex floats with partial pivoting and warns
when a pivot falls below the conditioning threshold.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .errors import (
    IllConditionedWarning,
    LoopEdge,
    NotBlockForm,
    OddDimension,
    TooLarge,
)
from .exactnum import GR_ZERO, GaussianRational, i_power
from .kasteleyn import Orientation
from .surface_graph import CombinatorialMap

EXPANSION_DIM_BOUND = 12
PIVOT_THRESHOLD = 1e-12

Scalar = Union[GaussianRational, complex]


@dataclass(frozen=True)
class SkewMatrix:
    entries: Tuple[Tuple[Scalar, ...], ...]
    exact: bool

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: Tuple[int, int]) -> Scalar:
        return self.entries[ij[0]][ij[1]]

    def to_float(self) -> "SkewMatrix":
        if not self.exact:
            return self
        rows = tuple(tuple(x.to_complex() for x in row) for row in self.entries)
        return SkewMatrix(rows, exact=False)

    def principal_minor(self, keep: Sequence[int]) -> "SkewMatrix":
        rows = tuple(tuple(self.entries[i][j] for j in keep) for i in keep)
        return SkewMatrix(rows, exact=self.exact)


def _check_skew(rows: Sequence[Sequence[Scalar]], exact: bool) -> None:
    n = len(rows)
    for i in range(n):
        for j in range(n):
            a, b = rows[i][j], rows[j][i]
            if exact:
                if not (a + b).is_zero():
                    raise ValueError("matrix is not skew-symmetric")
            else:
                if abs(a + b) > 1e-9 * (1.0 + abs(a)):
                    raise ValueError("matrix is not skew-symmetric")


def skew_matrix(rows: Sequence[Sequence[Scalar]], exact: bool) -> SkewMatrix:
    _check_skew(rows, exact)
    return SkewMatrix(tuple(tuple(r) for r in rows), exact)


def build_adjacency(m: CombinatorialMap, K: Orientation,
                    omega: Optional[int] = None,
                    backend: str = "exact") -> SkewMatrix:
    """Weighted skew adjacency matrix of (graph, orientation, omega).

    Entry (j, k) sums, over the edges between j and k, the weight signed by
    the orientation and multiplied by i for omega = 1 edges.
    """
    om = m.twist_bits() if omega is None else omega
    n = m.vertex_count
    exact = backend == "exact"
    zero: Scalar = GR_ZERO if exact else 0j
    rows: List[List[Scalar]] = [[zero] * n for _ in range(n)]
    for e, edge in enumerate(m.edges):
        if edge.u == edge.v:
            raise LoopEdge(f"edge {e} is a loop; remove loops before building")
        a, b = K.arrow(m, e)
        if exact:
            w = GaussianRational.of(Fraction(edge.weight)) * i_power((om >> e) & 1)
        else:
            w = complex(edge.weight) * (1j if (om >> e) & 1 else 1.0)
        rows[a][b] = rows[a][b] + w
        rows[b][a] = rows[b][a] - w
    return SkewMatrix(tuple(tuple(r) for r in rows), exact)


# ---------------------------------------------------------------------------
# Pfaffian evaluation
# ---------------------------------------------------------------------------

def pfaffian(matrix: SkewMatrix) -> Scalar:
    """Pfaffian by skew Gaussian elimination, O(n^3)."""
    n = matrix.dimension
    if n % 2:
        raise OddDimension(f"dimension {n} is odd")
    if n == 0:
        return GaussianRational.of(1) if matrix.exact else 1.0 + 0j
    return _pf_exact(matrix) if matrix.exact else _pf_float(matrix)


def _pf_exact(matrix: SkewMatrix) -> GaussianRational:
    n = matrix.dimension
    a = [list(row) for row in matrix.entries]
    sign = 1
    result = GaussianRational.of(1)
    for col in range(0, n, 2):
        piv = next((r for r in range(col + 1, n) if not a[col][r].is_zero()), -1)
        if piv < 0:
            return GR_ZERO
        if piv != col + 1:
            _swap(a, piv, col + 1)
            sign = -sign
        p = a[col][col + 1]
        result = result * p
        inv_rows = range(col + 2, n)
        for r in inv_rows:
            if not a[col][r].is_zero():
                f = a[col][r] / p
                for c in range(col, n):
                    a[r][c] = a[r][c] - f * a[col + 1][c]
                for c in range(col, n):
                    a[c][r] = a[c][r] - f * a[c][col + 1]
    return result.scale(sign)


def _pf_float(matrix: SkewMatrix) -> complex:
    n = matrix.dimension
    a = [list(row) for row in matrix.entries]
    scale = max((abs(x) for row in a for x in row), default=0.0)
    if scale == 0.0:
        return 0j
    sign = 1
    result = 1.0 + 0j
    for col in range(0, n, 2):
        piv = max(range(col + 1, n), key=lambda r: abs(a[col][r]))
        if abs(a[col][piv]) == 0.0:
            return 0j
        if abs(a[col][piv]) < PIVOT_THRESHOLD * scale:
            warnings.warn("pivot below conditioning threshold",
                          IllConditionedWarning)
        if piv != col + 1:
            _swap(a, piv, col + 1)
            sign = -sign
        p = a[col][col + 1]
        result *= p
        for r in range(col + 2, n):
            if a[col][r] != 0:
                f = a[col][r] / p
                for c in range(col, n):
                    a[r][c] -= f * a[col + 1][c]
                for c in range(col, n):
                    a[c][r] -= f * a[c][col + 1]
    return sign * result


def _swap(a: List[List[Scalar]], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]
    for row in a:
        row[i], row[j] = row[j], row[i]


def pfaffian_expansion(matrix: SkewMatrix) -> Scalar:
    """Defining sum over matchings of the index set; cross-check oracle."""
    n = matrix.dimension
    if n % 2:
        raise OddDimension(f"dimension {n} is odd")
    if n > EXPANSION_DIM_BOUND:
        raise TooLarge(f"dimension {n} exceeds expansion bound {EXPANSION_DIM_BOUND}")
    one: Scalar = GaussianRational.of(1) if matrix.exact else 1.0 + 0j

    def rec(indices: Tuple[int, ...]) -> Scalar:
        if not indices:
            return one
        i = indices[0]
        rest = indices[1:]
        total = None
        for pos, j in enumerate(rest):
            term = matrix[i, j] * rec(rest[:pos] + rest[pos + 1:])
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        return total

    return rec(tuple(range(n)))


def determinant(matrix: SkewMatrix) -> Scalar:
    """Determinant via LU elimination (same backends as the Pfaffian)."""
    n = matrix.dimension
    a = [list(row) for row in matrix.entries]
    if n == 0:
        return GaussianRational.of(1) if matrix.exact else 1.0 + 0j
    sign = 1
    if matrix.exact:
        det = GaussianRational.of(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if not a[r][col].is_zero()), -1)
            if piv < 0:
                return GR_ZERO
            if piv != col:
                a[piv], a[col] = a[col], a[piv]
                sign = -sign
            det = det * a[col][col]
            for r in range(col + 1, n):
                if not a[r][col].is_zero():
                    f = a[r][col] / a[col][col]
                    for c in range(col, n):
                        a[r][c] = a[r][c] - f * a[col][c]
        return det.scale(sign)
    det_f = 1.0 + 0j
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) == 0.0:
            return 0j
        if piv != col:
            a[piv], a[col] = a[col], a[piv]
            sign = -sign
        det_f *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return sign * det_f


def _general_det(rows: Sequence[Sequence[Scalar]], exact: bool) -> Scalar:
    return determinant(SkewMatrix(tuple(tuple(r) for r in rows), exact))


def bipartite_pfaffian(matrix: SkewMatrix, k: Optional[int] = None) -> Scalar:
    """Pfaffian of a block matrix [[0, M], [-M^T, 0]] via det(M).

    ``k`` is the size of the first colour class (defaults to n/2).
    """
    n = matrix.dimension
    if n % 2:
        raise OddDimension(f"dimension {n} is odd")
    k = n // 2 if k is None else k
    if k != n - k:
        raise NotBlockForm("colour classes must have equal size")

    def iszero(x: Scalar) -> bool:
        return x.is_zero() if matrix.exact else abs(x) == 0.0

    for i in range(k):
        for j in range(k):
            if not iszero(matrix[i, j]):
                raise NotBlockForm("nonzero entry inside the first colour block")
    for i in range(k, n):
        for j in range(k, n):
            if not iszero(matrix[i, j]):
                raise NotBlockForm("nonzero entry inside the second colour block")
    mrows = [[matrix[i, k + j] for j in range(k)] for i in range(k)]
    det = _general_det(mrows, matrix.exact)
    if (k * (k - 1) // 2) % 2:
        det = -det
    return det
