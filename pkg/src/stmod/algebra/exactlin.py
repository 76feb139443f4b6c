"""Dense exact linear algebra over a prime field F_p.

Matrices are immutable wrappers around ``numpy.int64`` arrays holding the
canonical residues ``0..p-1``. Elimination always takes the leftmost pivot
and the first nonzero row below it, so every basis produced here is
reproducible across runs.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from stmod.errors import DimensionMismatchError, FieldError, SingularMatrixError

MAX_CHARACTERISTIC = 97


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p."""

    p: int

    def __post_init__(self) -> None:
        if not 2 <= self.p <= MAX_CHARACTERISTIC or not _is_prime(self.p):
            raise FieldError(
                f"characteristic must be a prime in [2, {MAX_CHARACTERISTIC}], got {self.p}"
            )

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        return pow(a, -1, self.p)

    def __str__(self) -> str:
        return f"F{self.p}"


@dataclass(frozen=True, eq=False)
class Matrix:
    """An immutable dense matrix over a prime field."""

    field: PrimeField
    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionMismatchError(f"matrix data must be 2-dimensional, got {arr.ndim}")
        arr %= self.field.p
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    # Construction

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> Matrix:
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> Matrix:
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(
        cls, field: PrimeField, rows: Sequence[Sequence[int]], cols: int | None = None
    ) -> Matrix:
        """Build a matrix from nested rows; ``cols`` is needed only when ``rows`` is empty."""
        if len(rows) == 0:
            return cls.zeros(field, 0, cols or 0)
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise DimensionMismatchError(f"ragged rows with widths {sorted(widths)}")
        try:
            data = np.array(rows, dtype=np.int64)
        except OverflowError:
            # entries beyond int64 are reduced before conversion
            data = np.array([[int(x) % field.p for x in r] for r in rows], dtype=np.int64)
        return cls(field, data.reshape(len(rows), widths.pop()))

    @classmethod
    def column(cls, field: PrimeField, values: Iterable[int]) -> Matrix:
        vals = list(values)
        return cls(field, np.array(vals, dtype=np.int64).reshape(len(vals), 1))

    @classmethod
    def from_vec(cls, field: PrimeField, vec: np.ndarray, rows: int, cols: int) -> Matrix:
        """Inverse of :meth:`vec` (row-major)."""
        return cls(field, np.asarray(vec, dtype=np.int64).reshape(rows, cols))

    # Shape

    @property
    def rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def cols(self) -> int:
        return int(self.data.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    # Arithmetic

    def _check_field(self, other: Matrix) -> None:
        if other.field != self.field:
            raise DimensionMismatchError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(self.field, (self.data @ other.data) % self.field.p)

    def __add__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.field, self.data + other.data)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix(self.field, self.data - other.data)

    def __neg__(self) -> Matrix:
        return Matrix(self.field, -self.data)

    def scale(self, c: int) -> Matrix:
        return Matrix(self.field, self.data * (c % self.field.p))

    def power(self, k: int) -> Matrix:
        if self.rows != self.cols:
            raise DimensionMismatchError("only square matrices have powers")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k > 0:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self) -> Matrix:
        return Matrix(self.field, self.data.T)

    def transpose(self) -> Matrix:
        return self.T

    def vec(self) -> np.ndarray:
        """Row-major flattening, matching :meth:`from_vec`."""
        return self.data.reshape(-1).copy()

    def is_zero(self) -> bool:
        return not self.data.any()

    def to_rows(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.data]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.to_rows()})"


class RrefResult(NamedTuple):
    reduced: Matrix
    pivots: tuple[int, ...]
    rank: int


def rref(A: Matrix) -> RrefResult:
    """Reduced row echelon form with leftmost-pivot elimination."""
    p = A.field.p
    R = A.data.copy()
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nonzero = np.flatnonzero(R[r:, c])
        if nonzero.size == 0:
            continue
        i = r + int(nonzero[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = (R[r] * A.field.inv(int(R[r, c]))) % p
        col = R[:, c].copy()
        col[r] = 0
        if col.any():
            R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return RrefResult(Matrix(A.field, R), tuple(pivots), len(pivots))


def rank(A: Matrix) -> int:
    return rref(A).rank


def kernel_basis(A: Matrix) -> Matrix:
    """Columns form a basis of the null space of ``A``."""
    R, pivots, r = rref(A)
    n = A.cols
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    K = np.zeros((n, len(free)), dtype=np.int64)
    if free:
        K[free, np.arange(len(free))] = 1
        if r:
            K[list(pivots), :] = -R.data[:r, free]
    return Matrix(A.field, K)


def _as_column(field: PrimeField, b: Matrix | Sequence[int]) -> Matrix:
    if isinstance(b, Matrix):
        return b
    return Matrix.column(field, b)


def solve(A: Matrix, b: Matrix | Sequence[int]) -> Matrix | None:
    """Solve ``A x = b``; ``None`` means ``b`` is not in the column space of ``A``.

    Raises:
        DimensionMismatchError: if ``b`` does not have ``A.rows`` entries
    """
    column = _as_column(A.field, b)
    if column.cols != 1 or column.rows != A.rows:
        raise DimensionMismatchError(
            f"right-hand side has shape {column.shape}, expected ({A.rows}, 1)"
        )
    return solve_matrix(A, column)


def solve_matrix(A: Matrix, B: Matrix) -> Matrix | None:
    """Solve ``A X = B`` for all columns of ``B`` at once."""
    if B.rows != A.rows:
        raise DimensionMismatchError(f"cannot solve {A.shape} X = {B.shape}")
    R, pivots, r = rref(hstack([A, B]))
    if any(c >= A.cols for c in pivots):
        return None
    X = np.zeros((A.cols, B.cols), dtype=np.int64)
    if r:
        X[list(pivots), :] = R.data[:r, A.cols :]
    return Matrix(A.field, X)


def column_space_basis(A: Matrix) -> Matrix:
    """Canonical basis (as columns) of the column space of ``A``."""
    R, _, r = rref(A.T)
    return Matrix(A.field, R.data[:r].T)


def inverse(A: Matrix) -> Matrix:
    if A.rows != A.cols:
        raise DimensionMismatchError(f"cannot invert a {A.shape} matrix")
    n = A.rows
    R, pivots, r = rref(hstack([A, Matrix.identity(A.field, n)]))
    if r < n or any(c >= n for c in pivots[:n]):
        raise SingularMatrixError("matrix is singular")
    return Matrix(A.field, R.data[:, n:])


def is_invertible(A: Matrix) -> bool:
    return A.rows == A.cols and rank(A) == A.rows


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    field = blocks[0].field
    return Matrix(field, np.hstack([b.data for b in blocks]))


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    field = blocks[0].field
    return Matrix(field, np.vstack([b.data for b in blocks]))


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    field = blocks[0].field
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r : r + b.rows, c : c + b.cols] = b.data
        r += b.rows
        c += b.cols
    return Matrix(field, out)


def kron(A: Matrix, B: Matrix) -> Matrix:
    return Matrix(A.field, np.kron(A.data, B.data))


def random_matrix(field: PrimeField, rows: int, cols: int, rng: np.random.Generator) -> Matrix:
    return Matrix(field, rng.integers(0, field.p, size=(rows, cols), dtype=np.int64))


def random_invertible(field: PrimeField, n: int, rng: np.random.Generator) -> Matrix:
    while True:
        candidate = random_matrix(field, n, n, rng)
        if is_invertible(candidate):
            return candidate
