"""Dense linear algebra over GF(2).

Rows are stored as Python ints used as bitsets: bit ``j`` of ``data[i]`` is
entry ``(i, j)``.  Addition is XOR, multiplication is AND.  Free variables
in :func:`solve` are fixed to zero so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class InconsistentSystem(ValueError):
    """Raised by :func:`solve` when ``a @ x = y`` has no solution."""


def _vector_to_int(v: Sequence[int]) -> int:
    word = 0
    for j, bit in enumerate(v):
        if int(bit) & 1:
            word |= 1 << j
    return word


def _int_to_vector(word: int, length: int) -> tuple[int, ...]:
    return tuple((word >> j) & 1 for j in range(length))


@dataclass(frozen=True)
class BitMatrix:
    """Immutable ``rows x cols`` matrix over GF(2)."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        limit = 1 << self.cols
        for word in self.data:
            if word < 0 or word >= limit:
                raise ValueError("row has bits beyond the column count")

    # -- construction -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> BitMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(_vector_to_int(r) for r in rows))

    @classmethod
    def from_ints(cls, words: Iterable[int], cols: int) -> BitMatrix:
        words = tuple(int(w) for w in words)
        return cls(len(words), cols, words)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, size: int) -> BitMatrix:
        return cls(size, size, tuple(1 << i for i in range(size)))

    # -- access -------------------------------------------------------

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols} matrix")
        return (self.data[i] >> j) & 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.rows:
            raise IndexError(f"row {i} outside {self.rows}-row matrix")
        return _int_to_vector(self.data[i], self.cols)

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_numpy(self):
        import numpy as np

        return np.array(self.to_lists(), dtype=np.uint8).reshape(self.rows, self.cols)

    # -- arithmetic ---------------------------------------------------

    def transpose(self) -> BitMatrix:
        out = [0] * self.cols
        for i, word in enumerate(self.data):
            j = 0
            while word:
                if word & 1:
                    out[j] |= 1 << i
                word >>= 1
                j += 1
        return BitMatrix(self.cols, self.rows, tuple(out))

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for word in self.data:
            acc = 0
            j = 0
            while word:
                if word & 1:
                    acc ^= other.data[j]
                word >>= 1
                j += 1
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def multiply_vector(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.cols:
            raise ValueError(f"vector length {len(x)} != {self.cols} columns")
        xw = _vector_to_int(x)
        return tuple(bin(word & xw).count("1") & 1 for word in self.data)

    def stack(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def select_rows(self, indices: Iterable[int]) -> BitMatrix:
        return BitMatrix.from_ints((self.data[i] for i in indices), self.cols)

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in self.row(i)) for i in range(self.rows))


def _eliminate(data: Sequence[int], cols: int):
    """Gauss-Jordan elimination tracking row operations.

    Returns ``(reduced, pivots, ops)`` with ``reduced`` and ``ops`` as row
    bitsets such that ``ops @ original == reduced``.
    """
    work = list(data)
    ops = [1 << i for i in range(len(work))]
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        bit = 1 << col
        pivot = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        ops[r], ops[pivot] = ops[pivot], ops[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
                ops[i] ^= ops[r]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work, pivots, ops


def rank(m: BitMatrix) -> int:
    """GF(2) rank of ``m``."""
    return len(_eliminate(m.data, m.cols)[1])


def row_reduce(m: BitMatrix) -> tuple[BitMatrix, list[int], BitMatrix]:
    """Reduced row-echelon form.

    Returns ``(reduced, pivot_columns, row_ops)`` where ``row_ops @ m ==
    reduced`` and ``row_ops`` is invertible.
    """
    reduced, pivots, ops = _eliminate(m.data, m.cols)
    return (
        BitMatrix(m.rows, m.cols, tuple(reduced)),
        pivots,
        BitMatrix(m.rows, m.rows, tuple(ops)),
    )


def solution_map(a: BitMatrix) -> tuple[BitMatrix, BitMatrix]:
    """Linear maps realising :func:`solve` for every right-hand side.

    Returns ``(p, check)``: for ``y`` in the column space of ``a`` the
    free-variables-zero solution is ``p @ y``; ``y`` is in the column space
    iff ``check @ y == 0``.
    """
    _, pivots, ops = _eliminate(a.data, a.cols)
    rk = len(pivots)
    p = [0] * a.cols
    for r, col in enumerate(pivots):
        p[col] = ops[r]
    return BitMatrix(a.cols, a.rows, tuple(p)), BitMatrix.from_ints(ops[rk:], a.rows)


def solve(a: BitMatrix, y: Sequence[int]) -> tuple[int, ...]:
    """Solve ``a @ x = y`` over GF(2) with free variables set to zero.

    Raises :class:`InconsistentSystem` if no solution exists.
    """
    if len(y) != a.rows:
        raise ValueError(f"rhs length {len(y)} != {a.rows} rows")
    reduced, pivots, ops = _eliminate(a.data, a.cols)
    yw = _vector_to_int(y)
    ty = [bin(op & yw).count("1") & 1 for op in ops]
    if any(ty[len(pivots):]):
        raise InconsistentSystem("right-hand side is not in the column space")
    x = 0
    for r, col in enumerate(pivots):
        if ty[r]:
            x |= 1 << col
    return _int_to_vector(x, a.cols)


def in_row_space(m: BitMatrix, v: Sequence[int]) -> tuple[bool, frozenset[int] | None]:
    """Test whether ``v`` is a sum of rows of ``m``.

    On success also returns a set of row indices whose rows XOR to ``v``
    (found by back-substitution, not necessarily minimal).
    """
    if len(v) != m.cols:
        raise ValueError(f"vector length {len(v)} != {m.cols} columns")
    target = _vector_to_int(v)
    reduced, pivots, ops = _eliminate(m.data, m.cols)
    combo = 0
    rest = target
    for r, col in enumerate(pivots):
        if (rest >> col) & 1:
            rest ^= reduced[r]
            combo ^= ops[r]
    if rest:
        return False, None
    return True, frozenset(i for i in range(m.rows) if (combo >> i) & 1)


def nullspace_basis(m: BitMatrix) -> list[tuple[int, ...]]:
    """Basis of ``{x : m @ x = 0}``, one vector per free column."""
    reduced, pivots, _ = _eliminate(m.data, m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        x = 1 << free
        for r, col in enumerate(pivots):
            if (reduced[r] >> free) & 1:
                x |= 1 << col
        basis.append(_int_to_vector(x, m.cols))
    return basis
