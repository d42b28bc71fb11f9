"""Minimal dense matrix and vector primitives.

Matrices are stored row-major as a flat tuple with explicit (rows, cols);
vectors are plain lists of floats.  There is no broadcasting and no implicit
reshaping: every shape mismatch raises :class:`ShapeError` eagerly.
"""

import math
from dataclasses import dataclass
from typing import Sequence

Vector = list[float]


class ShapeError(ValueError):
    """Dimension or shape mismatch between operands."""


@dataclass(frozen=True)
class Matrix:
    """Row-major 2-D array with explicit row and column counts."""

    rows: int
    cols: int
    data: tuple[float, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ShapeError(
                f"matrix dimensions must be positive, got {self.rows}x{self.cols}"
            )
        if len(self.data) != self.rows * self.cols:
            raise ShapeError(
                f"data length {len(self.data)} does not match "
                f"{self.rows}x{self.cols} = {self.rows * self.cols}"
            )
        data = tuple(float(v) for v in self.data)
        if not all(math.isfinite(v) for v in data):
            raise ValueError("matrix elements must be finite")
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "Matrix":
        if not rows:
            raise ShapeError("matrix needs at least one row")
        ncols = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ShapeError(f"row {i} has {len(row)} values, expected {ncols}")
        flat = tuple(float(v) for row in rows for v in row)
        return cls(len(rows), ncols, flat)

    def at(self, i: int, j: int) -> float:
        return self.data[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return list(self.data[i * self.cols : (i + 1) * self.cols])

    def col(self, j: int) -> Vector:
        return [self.data[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[float]]:
        return [self.row(i) for i in range(self.rows)]


def zeros(rows: int, cols: int) -> Matrix:
    """rows x cols matrix of 0.0."""
    if rows < 1 or cols < 1:
        raise ShapeError(f"matrix dimensions must be positive, got {rows}x{cols}")
    return Matrix(rows, cols, (0.0,) * (rows * cols))


def zero_vector(n: int) -> Vector:
    """Vector of n zeros."""
    if n < 1:
        raise ShapeError(f"vector length must be positive, got {n}")
    return [0.0] * n


def add_vectors(a: Vector, b: Vector) -> Vector:
    """Element-wise sum of two equal-length vectors."""
    if len(a) != len(b):
        raise ShapeError(f"vector lengths differ: {len(a)} vs {len(b)}")
    return [x + y for x, y in zip(a, b)]


def transpose(m: "Matrix | Sequence[float]") -> Matrix:
    """Transpose a matrix; a flat sequence of numbers is promoted to one row."""
    if not isinstance(m, Matrix):
        m = Matrix.from_rows([list(m)])
    flipped = [[m.at(i, j) for i in range(m.rows)] for j in range(m.cols)]
    return Matrix.from_rows(flipped)


def format_matrix(m: Matrix, decimals: int = 3) -> str:
    """One text line per row, values rounded half-to-even to `decimals` places.

    Negative zero is normalized to plain zero, so a row of tiny negatives
    prints as "[0.0, 0.0]" rather than "[-0.0, -0.0]".
    """
    if decimals < 0:
        raise ValueError(f"decimals must be >= 0, got {decimals}")
    lines = []
    for i in range(m.rows):
        rounded = [round(v, decimals) + 0 for v in m.row(i)]
        lines.append("[" + ", ".join(repr(v) for v in rounded) + "]")
    return "\n".join(lines)
