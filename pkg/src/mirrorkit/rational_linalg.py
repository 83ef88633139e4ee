"""Exact rational linear algebra.

Everything in this package reduces to linear algebra over the rationals:
inverting the Cayley matrix, solving for the linear forms, kernel
computations for weight systems and dual polytopes.  All of it must be
exact -- denominators like 147 compound under elimination and no float
mode exists -- so matrices carry ``fractions.Fraction`` entries and every
operation returns fresh immutable values.

Serialization convention: a rational prints as ``"p/q"``, or ``"p"`` when
the denominator is 1; a matrix is a list of rows of such strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class RationalLinalgError(Exception):
    """Base class for errors raised by this module."""


class SingularMatrixError(RationalLinalgError):
    """The matrix has determinant zero where a nonsingular one is required."""


class DimensionMismatchError(RationalLinalgError):
    """Operand shapes are incompatible."""


class NotAPermutationError(RationalLinalgError):
    """The image sequence is not a bijection on {1..size}."""


def rat_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_parse(s: str | int) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(s)


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix of rationals (row-major tuple of tuples)."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.entries:
            width = len(self.entries[0])
            if any(len(row) != width for row in self.entries):
                raise DimensionMismatchError("ragged rows")

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_rows(rows: Iterable[Iterable[Fraction | int]]) -> "Matrix":
        return Matrix(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix(tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)))

    # -- shape and access --------------------------------------------------

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic --------------------------------------------------------

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self.entries))) if self.entries else self

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("matrix addition shape mismatch")
        return Matrix(tuple(tuple(a + b for a, b in zip(r1, r2))
                            for r1, r2 in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("matrix subtraction shape mismatch")
        return Matrix(tuple(tuple(a - b for a, b in zip(r1, r2))
                            for r1, r2 in zip(self.entries, other.entries)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = other.transpose().entries
        return Matrix(tuple(tuple(sum((a * b for a, b in zip(row, col)), ZERO) for col in cols)
                            for row in self.entries))

    def mul_vector(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if self.cols != len(v):
            raise DimensionMismatchError("matrix-vector shape mismatch")
        return tuple(sum((a * b for a, b in zip(row, v)), ZERO) for row in self.entries)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> list[list[str]]:
        return [[rat_str(x) for x in row] for row in self.entries]

    @staticmethod
    def from_json(data: Sequence[Sequence[str | int]]) -> "Matrix":
        return Matrix.from_rows([[rat_parse(x) for x in row] for row in data])

    def __str__(self) -> str:
        widths = [max(len(rat_str(self.entries[i][j])) for i in range(self.rows))
                  for j in range(self.cols)] if self.entries else []
        lines = []
        for row in self.entries:
            lines.append("[ " + "  ".join(rat_str(x).rjust(w) for x, w in zip(row, widths)) + " ]")
        return "\n".join(lines)


@dataclass(frozen=True)
class PermutationMap:
    """Bijection on {1..size}, stored as the 1-based image sequence."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise NotAPermutationError(f"not a bijection: {self.images}")

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "PermutationMap":
        inv = [0] * self.size
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return PermutationMap(tuple(inv))

    def is_involution(self) -> bool:
        return all(self.images[j - 1] == i + 1 for i, j in enumerate(self.images))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.size + 1))

    def compose(self, other: "PermutationMap") -> "PermutationMap":
        """self after other: i -> self(other(i))."""
        return PermutationMap(tuple(self(other(i)) for i in range(1, self.size + 1)))

    def matrix(self) -> Matrix:
        """Permutation matrix P with P e_j = e_{images[j]}."""
        n = self.size
        return Matrix.from_rows([[1 if self.images[j] == i + 1 else 0
                                  for j in range(n)] for i in range(n)])

    def to_json(self) -> list[int]:
        return list(self.images)


def _eliminate(rows: list[list[Fraction]], ncols: int) -> tuple[int, list[int]]:
    """In-place forward elimination; returns (rank, pivot column list).

    Pivot choice is the first row with a nonzero entry in the pivot column
    (lowest row index), which keeps golden outputs deterministic.
    """
    rank = 0
    pivots = []
    nrows = len(rows)
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return rank, pivots


def invert(m: Matrix) -> Matrix:
    """Exact inverse via Gauss-Jordan elimination on [m | I]."""
    if not m.is_square():
        raise DimensionMismatchError("can only invert a square matrix")
    n = m.rows
    aug = [list(m.entries[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    rank, pivots = _eliminate(aug, n)
    if rank < n:
        raise SingularMatrixError("matrix is singular")
    assert pivots == list(range(n))
    return Matrix(tuple(tuple(aug[i][n:]) for i in range(n)))


def solve(m: Matrix, rhs: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
    """Solve m x = rhs exactly for square nonsingular m."""
    if not m.is_square():
        raise DimensionMismatchError("solve requires a square matrix")
    if len(rhs) != m.rows:
        raise DimensionMismatchError("right-hand side length mismatch")
    n = m.rows
    aug = [list(m.entries[i]) + [Fraction(rhs[i])] for i in range(n)]
    rank, pivots = _eliminate(aug, n)
    if rank < n:
        raise SingularMatrixError("matrix is singular")
    assert pivots == list(range(n))
    return tuple(aug[i][n] for i in range(n))


def rank(m: Matrix) -> int:
    work = [list(row) for row in m.entries]
    r, _ = _eliminate(work, m.cols)
    return r


def lcm_of_denominators(m: Matrix) -> int:
    """Smallest positive integer d with d*m integer-valued (1 for the empty matrix)."""
    d = 1
    for row in m.entries:
        for x in row:
            d = d * x.denominator // math.gcd(d, x.denominator)
    return d


def right_kernel(m: Matrix) -> list[tuple[Fraction, ...]]:
    """Basis of {x : m x = 0}, one vector per free column, deterministic order."""
    work = [list(row) for row in m.entries]
    r, pivots = _eliminate(work, m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = [ZERO] * m.cols
        vec[free] = ONE
        for row_idx, pcol in enumerate(pivots):
            vec[pcol] = -work[row_idx][free]
        basis.append(tuple(vec))
    return basis


def solve_general(m: Matrix, rhs: Sequence[Fraction | int]) -> tuple[Fraction, ...] | None:
    """One particular solution of m x = rhs, or None when inconsistent.

    m may be rectangular or rank-deficient; free variables are set to zero.
    """
    if len(rhs) != m.rows:
        raise DimensionMismatchError("right-hand side length mismatch")
    aug = [list(m.entries[i]) + [Fraction(rhs[i])] for i in range(m.rows)]
    r, pivots = _eliminate(aug, m.cols)
    for i in range(r, m.rows):
        if aug[i][m.cols] != 0:
            return None
    x = [ZERO] * m.cols
    for row_idx, pcol in enumerate(pivots):
        x[pcol] = aug[row_idx][m.cols]
    return tuple(x)


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, keeping the sign pattern."""
    d = 1
    for x in v:
        d = d * x.denominator // math.gcd(d, x.denominator)
    ints = [int(x * d) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def vectors_proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """True when u and v span the same line (2x2 minors all vanish), both nonzero."""
    if all(x == 0 for x in u) or all(x == 0 for x in v):
        return False
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return True
