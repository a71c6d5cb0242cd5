"""Dense linear algebra over GF(2) on int bitsets.

Rows and vectors are packed into Python ints: bit ``j`` holds coordinate
``j``.  Addition is XOR, so elimination touches a whole row per operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class ImageNotInKernel(ValueError):
    """An image vector is not in the span of the kernel (d∘d ≠ 0)."""


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GF2Vector:
    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits:#x} exceed length {self.length}")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> GF2Vector:
        bits = 0
        for j, e in enumerate(entries):
            if e & 1:
                bits |= 1 << j
        return cls(bits, len(entries))

    def to_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.length)]

    def __add__(self, other: GF2Vector) -> GF2Vector:
        if other.length != self.length:
            raise ValueError("length mismatch")
        return GF2Vector(self.bits ^ other.bits, self.length)

    def __bool__(self) -> bool:
        return self.bits != 0

    def weight(self) -> int:
        return bin(self.bits).count("1")


@dataclass(frozen=True)
class GF2Matrix:
    """Row-major matrix; ``rows[i]`` is the bitset of row ``i``."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        if self.ncols < 0:
            raise ValueError("negative column count")
        for r in self.rows:
            if r < 0 or r >> self.ncols:
                raise ValueError(f"row {r:#x} exceeds {self.ncols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> GF2Matrix:
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            rows.append(GF2Vector.from_list(row).bits)
        return cls(tuple(rows), ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> GF2Matrix:
        rows = [0] * nrows
        for j, col in enumerate(columns):
            if col < 0 or col >> nrows:
                raise ValueError(f"column {col:#x} exceeds {nrows} rows")
            c = col
            while c:
                low = c & -c
                rows[low.bit_length() - 1] |= 1 << j
                c ^= low
        return cls(tuple(rows), len(columns))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> GF2Matrix:
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, size: int) -> GF2Matrix:
        return cls(tuple(1 << i for i in range(size)), size)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def columns(self) -> list[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return cols

    def transpose(self) -> GF2Matrix:
        return GF2Matrix(tuple(self.columns()), self.nrows)

    def matvec(self, v: GF2Vector | int) -> GF2Vector:
        bits = v.bits if isinstance(v, GF2Vector) else v
        out = 0
        for i, r in enumerate(self.rows):
            if bin(r & bits).count("1") & 1:
                out |= 1 << i
        return GF2Vector(out, self.nrows)


def _echelon(rows: Iterable[int]) -> list[int]:
    """Row-echelon basis of the span of ``rows``, keyed by lowest set bit.

    Not reduced: each returned row has a distinct lowest bit, which is all
    that rank and span membership need.
    """
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            p = pivots.get(low)
            if p is None:
                pivots[low] = r
                break
            r ^= p
    return list(pivots.values())


def _reduce(r: int, pivots: dict[int, int]) -> int:
    while r:
        low = r & -r
        p = pivots.get(low)
        if p is None:
            return r
        r ^= p
    return 0


def rank(m: GF2Matrix) -> int:
    return len(_echelon(m.rows))


def span_rank(vectors: Iterable[GF2Vector | int]) -> int:
    return len(_echelon(v.bits if isinstance(v, GF2Vector) else v for v in vectors))


def kernel_basis(m: GF2Matrix) -> list[GF2Vector]:
    """Basis of ``{v : m·v = 0}``, one vector per free column."""
    # Fully reduce rows, pivoting on the lowest set bit of each.
    pivot_rows: dict[int, int] = {}
    pivot_mask = 0
    for r in m.rows:
        hits = r & pivot_mask
        while hits:
            low = hits & -hits
            r ^= pivot_rows[low]
            hits = r & pivot_mask
        if not r:
            continue
        low = r & -r
        for key, p in pivot_rows.items():
            if p & low:
                pivot_rows[key] = p ^ r
        pivot_rows[low] = r
        pivot_mask |= low
    basis = []
    for j in range(m.ncols):
        free = 1 << j
        if pivot_mask & free:
            continue
        v = free
        for low, p in pivot_rows.items():
            if p & free:
                v |= low
        basis.append(GF2Vector(v, m.ncols))
    return basis


def image_basis(m: GF2Matrix) -> list[GF2Vector]:
    """A subset of the columns of ``m`` forming a basis of the column space."""
    pivots: dict[int, int] = {}
    basis = []
    for col in m.columns():
        r = _reduce(col, pivots)
        if r:
            pivots[r & -r] = r
            basis.append(GF2Vector(col, m.nrows))
    return basis


def subquotient_dim(kernel: Sequence[GF2Vector], image: Sequence[GF2Vector]) -> int:
    """``dim span(kernel) - dim span(image)``, after checking containment."""
    pivots: dict[int, int] = {}
    for v in kernel:
        r = _reduce(v.bits, pivots)
        if r:
            pivots[r & -r] = r
    for v in image:
        if _reduce(v.bits, pivots):
            raise ImageNotInKernel(f"image vector {v.to_list()} is not in the kernel span")
    return len(pivots) - span_rank(image)


def brute_force_rank(m: GF2Matrix) -> int:
    """Rank by enumerating every combination of columns.

    Independent of elimination: the span has exactly ``2**rank`` elements.
    """
    if m.ncols > 16:
        raise TooLarge(f"{m.ncols} columns; brute force is limited to 16")
    cols = m.columns()
    span = {0}
    for mask in range(1, 1 << len(cols)):
        acc = 0
        for j, c in enumerate(cols):
            if (mask >> j) & 1:
                acc ^= c
        span.add(acc)
    return len(span).bit_length() - 1


__all__ = [
    "GF2Matrix",
    "GF2Vector",
    "ImageNotInKernel",
    "TooLarge",
    "brute_force_rank",
    "image_basis",
    "kernel_basis",
    "rank",
    "span_rank",
    "subquotient_dim",
]
