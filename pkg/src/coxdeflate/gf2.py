"""Bit-packed linear algebra over GF(2).

A vector of dimension d is a Python int whose bit i is coordinate i.  A
matrix is a tuple of row ints plus its column count; ``M @ x`` means the
column-vector product, i.e. bit i of the result is the parity of row i
and x.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "F2Matrix",
    "parity",
    "weight",
    "vec_from_bits",
    "vec_to_bits",
    "rank",
    "rref",
    "span_basis",
    "in_span",
    "nullspace",
]


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def weight(x: int) -> int:
    return bin(x).count("1")


def vec_from_bits(bits: Sequence[int]) -> int:
    v = 0
    for i, b in enumerate(bits):
        if b & 1:
            v |= 1 << i
    return v


def vec_to_bits(v: int, dim: int) -> list[int]:
    if v >> dim:
        raise ValueError(f"vector has bits beyond dimension {dim}")
    return [(v >> i) & 1 for i in range(dim)]


def rref(rows: Iterable[int]) -> tuple[list[int], list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot bit per row).

    Pivots are taken at the lowest set bit, so reduction clears every other
    row's bit in each pivot column.
    """
    basis: list[int] = []
    pivots: list[int] = []
    for r in rows:
        for b, p in zip(basis, pivots):
            if r >> p & 1:
                r ^= b
        if r:
            p = (r & -r).bit_length() - 1
            for k in range(len(basis)):
                if basis[k] >> p & 1:
                    basis[k] ^= r
            basis.append(r)
            pivots.append(p)
    order = sorted(range(len(basis)), key=pivots.__getitem__)
    return [basis[k] for k in order], [pivots[k] for k in order]


def rank(rows: Iterable[int]) -> int:
    return len(rref(rows)[0])


def span_basis(rows: Iterable[int]) -> list[int]:
    return rref(rows)[0]


def reduce(v: int, basis: Sequence[int], pivots: Sequence[int]) -> int:
    for b, p in zip(basis, pivots):
        if v >> p & 1:
            v ^= b
    return v


def in_span(v: int, rows: Iterable[int]) -> bool:
    basis, pivots = rref(rows)
    return reduce(v, basis, pivots) == 0


def nullspace(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis of {x : row . x = 0 for every row}."""
    basis, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        x = 1 << f
        for b, p in zip(basis, pivots):
            if b >> f & 1:
                x |= 1 << p
        out.append(x)
    return out


@dataclass(frozen=True)
class F2Matrix:
    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if r >> self.ncols:
                raise ValueError("row wider than the declared column count")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "F2Matrix":
        return cls((0,) * m, n)

    @classmethod
    def from_array(cls, arr: Sequence[Sequence[int]]) -> "F2Matrix":
        arr = [list(r) for r in arr]
        ncols = len(arr[0]) if arr else 0
        if any(len(r) != ncols for r in arr):
            raise ValueError("ragged matrix")
        return cls(tuple(vec_from_bits(r) for r in arr), ncols)

    def to_array(self) -> list[list[int]]:
        return [vec_to_bits(r, self.ncols) for r in self.rows]

    def to_json(self) -> str:
        return json.dumps(self.to_array())

    @classmethod
    def from_json(cls, text: str) -> "F2Matrix":
        return cls.from_array(json.loads(text))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i] >> j & 1

    def apply(self, x: int) -> int:
        if x >> self.ncols:
            raise ValueError("vector dimension mismatch")
        out = 0
        for i, r in enumerate(self.rows):
            if parity(r & x):
                out |= 1 << i
        return out

    def transpose(self) -> "F2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return F2Matrix(tuple(cols), self.nrows)

    def __matmul__(self, other):
        if isinstance(other, int):
            return self.apply(other)
        if self.ncols != other.nrows:
            raise ValueError("matrix dimension mismatch")
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= other.rows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return F2Matrix(tuple(out), other.ncols)

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if self.shape != other.shape:
            raise ValueError("matrix dimension mismatch")
        return F2Matrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.ncols)

    def rank(self) -> int:
        return rank(self.rows)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.ncols

    def inverse(self) -> "F2Matrix":
        n = self.ncols
        if self.nrows != n:
            raise ValueError("only square matrices invert")
        aug = [r | (1 << (n + i)) for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((k for k in range(col, n) if aug[k] >> col & 1), None)
            if piv is None:
                raise ValueError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            for k in range(n):
                if k != col and aug[k] >> col & 1:
                    aug[k] ^= aug[col]
        return F2Matrix(tuple(r >> n for r in aug), n)
