"""Dense matrices over GF(2).

Rows are stored as Python integers used as bitsets: bit ``j`` of ``rows[i]``
holds entry ``(i, j)``. Row index 0 is the most significant signal level.
Addition is XOR, multiplication is AND followed by XOR accumulation.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from detrelay.errors import ContractError

__all__ = [
    "BitMatrix",
    "shift_matrix",
    "rank",
    "mat_mul",
    "mat_add",
    "block_assemble",
    "random_matrix",
]

_WORD = 64


class BitMatrix:
    """Immutable ``nrows x ncols`` matrix over GF(2)."""

    __slots__ = ("_rows", "_nrows", "_ncols")

    def __init__(self, nrows: int, ncols: int, rows: Optional[Iterable[int]] = None):
        if nrows < 0 or ncols < 0:
            raise ContractError(f"negative shape ({nrows}, {ncols})")
        if rows is None:
            packed = (0,) * nrows
        else:
            packed = tuple(int(r) for r in rows)
            if len(packed) != nrows:
                raise ContractError(f"expected {nrows} rows, got {len(packed)}")
            limit = 1 << ncols
            for r in packed:
                if r < 0 or r >= limit:
                    raise ContractError(f"row bitset {r:#x} does not fit in {ncols} columns")
        self._rows = packed
        self._nrows = nrows
        self._ncols = ncols

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "BitMatrix":
        """Build from a nested list of 0/1 values (row-major)."""
        nrows = len(entries)
        if ncols is None:
            ncols = len(entries[0]) if nrows else 0
        rows = []
        for i, row in enumerate(entries):
            if len(row) != ncols:
                raise ContractError(f"row {i} has {len(row)} entries, expected {ncols}")
            packed = 0
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise ContractError(f"entry ({i}, {j}) = {v!r} is not a bit")
                if v:
                    packed |= 1 << j
            rows.append(packed)
        return cls(nrows, ncols, rows)

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ContractError(f"expected a 2-D array, got ndim={a.ndim}")
        return cls.from_lists(a.astype(int).tolist(), ncols=a.shape[1])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, (1 << i for i in range(n)))

    @classmethod
    def column(cls, bits: Sequence[int]) -> "BitMatrix":
        return cls.from_lists([[b] for b in bits], ncols=1)

    @property
    def nrows(self) -> int:
        return self._nrows

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._nrows, self._ncols)

    @property
    def rows(self) -> tuple[int, ...]:
        """Row bitsets; bit ``j`` of ``rows[i]`` is entry ``(i, j)``."""
        return self._rows

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self._nrows and 0 <= j < self._ncols):
            raise ContractError(f"index ({i}, {j}) outside shape {self.shape}")
        return (self._rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self._ncols)] for r in self._rows]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8).reshape(self._nrows, self._ncols)

    def transpose(self) -> "BitMatrix":
        cols = [0] * self._ncols
        for i, r in enumerate(self._rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(self._ncols, self._nrows, cols)

    def apply(self, vector: Sequence[int]) -> list[int]:
        """Matrix-vector product over GF(2), vector given as a 0/1 sequence."""
        if len(vector) != self._ncols:
            raise ContractError(f"vector length {len(vector)} != {self._ncols} columns")
        x = 0
        for j, v in enumerate(vector):
            if v & 1:
                x |= 1 << j
        return [(r & x).bit_count() & 1 for r in self._rows]

    def is_zero(self) -> bool:
        return not any(self._rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._nrows, self._ncols, self._rows))

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_add(self, other)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)

    def __repr__(self) -> str:
        return f"BitMatrix({self._nrows}x{self._ncols})"

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.to_lists())


def shift_matrix(q: int, k: int) -> BitMatrix:
    """Return ``S**k``: the ``q x q`` matrix with ones where ``row == col + k``.

    ``S`` moves every level down by one, so ``S**(q - n)`` keeps the top ``n``
    levels of the input. ``k >= q`` gives the zero matrix.
    """
    if q < 1:
        raise ContractError(f"q must be >= 1, got {q}")
    if k < 0:
        raise ContractError(f"shift must be >= 0, got {k}")
    return BitMatrix(q, q, ((1 << (i - k)) if i >= k else 0 for i in range(q)))


def rank(m: BitMatrix) -> int:
    """Rank over GF(2) by Gaussian elimination on a copy of the rows."""
    # pivots[bit] = reduced row whose lowest set bit is ``bit``
    pivots: dict[int, int] = {}
    for r in m.rows:
        while r:
            low = r & -r
            p = pivots.get(low)
            if p is None:
                pivots[low] = r
                break
            r ^= p
    return len(pivots)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.ncols != b.nrows:
        raise ContractError(f"cannot multiply {a.shape} by {b.shape}")
    brows = b.rows
    out = []
    for r in a.rows:
        acc = 0
        while r:
            low = r & -r
            acc ^= brows[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return BitMatrix(a.nrows, b.ncols, out)


def mat_add(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.shape != b.shape:
        raise ContractError(f"cannot add {a.shape} and {b.shape}")
    return BitMatrix(a.nrows, a.ncols, (x ^ y for x, y in zip(a.rows, b.rows)))


def block_assemble(
    blocks: Sequence[Sequence[Optional[BitMatrix]]],
    row_dims: Sequence[int],
    col_dims: Sequence[int],
) -> BitMatrix:
    """Lay out a grid of blocks; ``None`` stands for an all-zero block."""
    if len(blocks) != len(row_dims):
        raise ContractError(f"{len(blocks)} block rows but {len(row_dims)} row dims")
    col_offsets = [0]
    for c in col_dims:
        col_offsets.append(col_offsets[-1] + c)
    out: list[int] = []
    for bi, (brow, h) in enumerate(zip(blocks, row_dims)):
        if len(brow) != len(col_dims):
            raise ContractError(f"block row {bi} has {len(brow)} blocks, expected {len(col_dims)}")
        stripe = [0] * h
        for bj, blk in enumerate(brow):
            if blk is None:
                continue
            if blk.shape != (h, col_dims[bj]):
                raise ContractError(
                    f"block ({bi}, {bj}) has shape {blk.shape}, expected {(h, col_dims[bj])}"
                )
            off = col_offsets[bj]
            for i, r in enumerate(blk.rows):
                stripe[i] |= r << off
        out.extend(stripe)
    return BitMatrix(sum(row_dims), col_offsets[-1], out)


def random_matrix(nrows: int, ncols: int, seed: int) -> BitMatrix:
    """I.i.d. uniform bits from a seeded PCG64 stream.

    Each row consumes ``ceil(ncols / 64)`` raw 64-bit outputs of
    ``numpy.random.PCG64(seed)``; word ``k`` of a row supplies columns
    ``64k .. 64k+63``, least significant bit first. The raw PCG64 stream is
    fixed by its algorithm, so the result is reproducible across platforms.
    """
    if nrows < 0 or ncols < 0:
        raise ContractError(f"negative shape ({nrows}, {ncols})")
    if seed < 0:
        raise ContractError(f"seed must be >= 0, got {seed}")
    words = -(-ncols // _WORD)
    if nrows == 0 or words == 0:
        return BitMatrix(nrows, ncols)
    raw = np.random.PCG64(seed).random_raw(nrows * words)
    mask = (1 << ncols) - 1
    rows = []
    for i in range(nrows):
        r = 0
        for k in range(words):
            r |= int(raw[i * words + k]) << (_WORD * k)
        rows.append(r & mask)
    return BitMatrix(nrows, ncols, rows)
