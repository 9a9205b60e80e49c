"""
Regions of the ``n x n`` grid: interval graphs, squares, Young shapes and
bounding boxes.

Cells are ``(row, col)`` pairs, 1-based, rows increasing downward.  A region
is stored as one bitmask per row (bit ``c - 1`` set when ``(row, c)`` is in
the region); the public surface is set-like.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .perm import Permutation, bruhat_interval, bruhat_leq

__all__ = [
    "Region", "BoundingBox", "InconsistencyError",
    "graph_region", "sandwiched", "upper_interval_graph", "lower_interval_graph",
    "brute_force_interval_graph", "largest_square", "largest_square_naive",
    "young_shape", "complement_young_shape", "young_region", "durfee",
    "upper_corners", "lower_corners", "spanning_corners", "bounding_boxes",
    "delete_row_col", "reverse_columns", "box_intersection_permutation",
    "render",
]


class InconsistencyError(RuntimeError):
    """An internal invariant that the mathematics guarantees did not hold."""


class Region:
    """A set of cells of the ``n x n`` grid."""

    __slots__ = ("n", "_rows", "_hash")

    def __init__(self, n: int, cells: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("grid size must be nonnegative")
        rows = [0] * n
        for r, c in cells:
            if not (1 <= r <= n and 1 <= c <= n):
                raise ValueError(f"cell {(r, c)} outside the {n}x{n} grid")
            rows[r - 1] |= 1 << (c - 1)
        self.n = n
        self._rows = tuple(rows)
        self._hash = None

    @classmethod
    def from_masks(cls, n: int, masks: Sequence[int]) -> "Region":
        self = cls.__new__(cls)
        self.n = n
        self._rows = tuple(masks)
        self._hash = None
        return self

    @classmethod
    def full(cls, n: int) -> "Region":
        return cls.from_masks(n, [(1 << n) - 1] * n)

    @property
    def masks(self) -> tuple[int, ...]:
        return self._rows

    @property
    def cells(self) -> frozenset:
        return frozenset(self)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        for r, mask in enumerate(self._rows, start=1):
            c = 1
            while mask:
                if mask & 1:
                    yield (r, c)
                mask >>= 1
                c += 1

    def __contains__(self, cell) -> bool:
        r, c = cell
        return 1 <= r <= self.n and 1 <= c <= self.n and bool(
            self._rows[r - 1] >> (c - 1) & 1)

    def __len__(self) -> int:
        return sum(bin(m).count("1") for m in self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return self.n == other.n and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self._rows))
        return self._hash

    def _same_grid(self, other: "Region") -> None:
        if self.n != other.n:
            raise ValueError(f"grid sizes differ: {self.n} vs {other.n}")

    def __or__(self, other: "Region") -> "Region":
        self._same_grid(other)
        return Region.from_masks(self.n, [a | b for a, b in zip(self._rows, other._rows)])

    def __and__(self, other: "Region") -> "Region":
        self._same_grid(other)
        return Region.from_masks(self.n, [a & b for a, b in zip(self._rows, other._rows)])

    def __sub__(self, other: "Region") -> "Region":
        self._same_grid(other)
        return Region.from_masks(self.n, [a & ~b for a, b in zip(self._rows, other._rows)])

    def issubset(self, other: "Region") -> bool:
        self._same_grid(other)
        return all(a & ~b == 0 for a, b in zip(self._rows, other._rows))

    __le__ = issubset

    def contains_graph(self, w: Sequence[int]) -> bool:
        """True iff every cell ``(i, w(i))`` lies in the region."""
        return all(self._rows[i] >> (x - 1) & 1 for i, x in enumerate(w))

    def complement(self) -> "Region":
        full = (1 << self.n) - 1
        return Region.from_masks(self.n, [full & ~m for m in self._rows])

    def translated(self, dr: int, dc: int, n: Optional[int] = None) -> "Region":
        """Shift every cell by ``(dr, dc)`` into a grid of size ``n``."""
        n = self.n if n is None else n
        return Region(n, ((r + dr, c + dc) for r, c in self))

    def to_json(self) -> dict:
        return {"n": self.n, "cells": [list(cell) for cell in sorted(self)]}

    @classmethod
    def from_json(cls, data: dict) -> "Region":
        return cls(int(data["n"]), (tuple(cell) for cell in data["cells"]))

    def __repr__(self) -> str:
        return f"Region(n={self.n}, cells={sorted(self)})"


def graph_region(v: Sequence[int]) -> Region:
    """The graph ``{(i, v(i))}`` of a permutation."""
    return Region.from_masks(len(v), [1 << (x - 1) for x in v])


def sandwiched(cell: tuple[int, int], pair, v: Sequence[int]) -> bool:
    """Is ``cell`` inside the rectangle with corners ``(k, v_k)``, ``(l, v_l)``?"""
    i, j = cell
    k, l = pair
    lo, hi = sorted((v[k - 1], v[l - 1]))
    return k <= i <= l and lo <= j <= hi


def _rectangle_union(v: Sequence[int], want_inversion: bool) -> Region:
    n = len(v)
    rows = [1 << (x - 1) for x in v]
    for k in range(n):
        for l in range(k + 1, n):
            if (v[k] > v[l]) != want_inversion:
                continue
            lo, hi = sorted((v[k], v[l]))
            band = ((1 << hi) - 1) ^ ((1 << (lo - 1)) - 1)
            for r in range(k, l + 1):
                rows[r] |= band
    return Region.from_masks(n, rows)


def upper_interval_graph(v: Sequence[int]) -> Region:
    """Graph of ``[v, w0]``: the graph of ``v`` plus every cell sandwiched by a
    non-inversion of ``v``."""
    return _rectangle_union(v, want_inversion=False)


def lower_interval_graph(w: Sequence[int]) -> Region:
    """Graph of ``[e, w]``: the graph of ``w`` plus every cell sandwiched by an
    inversion of ``w``."""
    return _rectangle_union(w, want_inversion=True)


def brute_force_interval_graph(v: Permutation, w: Permutation) -> Region:
    """Literal union of the graphs of all ``u`` in ``[v, w]``."""
    if not bruhat_leq(v, w):
        raise ValueError(f"{v} is not below {w} in Bruhat order")
    rows = [0] * len(v)
    for u in bruhat_interval(v, w):
        for i, x in enumerate(u):
            rows[i] |= 1 << (x - 1)
    return Region.from_masks(len(v), rows)


def largest_square(region: Region) -> int:
    """Side of the largest contiguous square block inside ``region``."""
    n = region.n
    best = 0
    prev = [0] * (n + 1)
    for mask in region.masks:
        cur = [0] * (n + 1)
        for c in range(1, n + 1):
            if mask >> (c - 1) & 1:
                cur[c] = 1 + min(prev[c], cur[c - 1], prev[c - 1])
                if cur[c] > best:
                    best = cur[c]
        prev = cur
    return best


def largest_square_naive(region: Region) -> int:
    """Try every square explicitly; test oracle for :func:`largest_square`."""
    n = region.n
    best = 0
    for size in range(1, n + 1):
        for r0 in range(1, n - size + 2):
            for c0 in range(1, n - size + 2):
                if all((r, c) in region
                       for r in range(r0, r0 + size)
                       for c in range(c0, c0 + size)):
                    best = size
    return best


def _row_lengths_if_left_justified(masks: Sequence[int]) -> Optional[list[int]]:
    lengths = []
    for m in masks:
        if m & (m + 1):  # not of the form 2^k - 1
            return None
        lengths.append(m.bit_length())
    return lengths


def young_shape(region: Region) -> Optional[tuple[int, ...]]:
    """Row lengths if ``region`` is a top-left justified Young diagram."""
    lengths = _row_lengths_if_left_justified(region.masks)
    if lengths is None or any(a < b for a, b in zip(lengths, lengths[1:])):
        return None
    return tuple(x for x in lengths if x)


def complement_young_shape(region: Region) -> Optional[tuple[int, ...]]:
    """``mu`` if ``region`` is the skew shape ``n^n / mu``."""
    return young_shape(region.complement())


def young_region(n: int, shape: Sequence[int]) -> Region:
    """The top-left justified diagram with the given row lengths."""
    if len(shape) > n or any(x > n for x in shape):
        raise ValueError(f"shape {tuple(shape)} does not fit in {n}x{n}")
    masks = [(1 << x) - 1 for x in shape] + [0] * (n - len(shape))
    return Region.from_masks(n, masks)


def durfee(shape: Sequence[int]) -> int:
    """Largest ``k`` with ``shape[k-1] >= k``."""
    k = 0
    while k < len(shape) and shape[k] >= k + 1:
        k += 1
    return k


def upper_corners(v: Sequence[int]) -> list[int]:
    """Rows ``i`` whose point ``(i, v_i)`` is a corner of the graph of
    ``[v, w0]``, i.e. ``v_i`` is not the middle of a ``123``."""
    n = len(v)
    return [i + 1 for i in range(n)
            if not (any(v[a] < v[i] for a in range(i))
                    and any(v[b] > v[i] for b in range(i + 1, n)))]


def lower_corners(w: Sequence[int]) -> list[int]:
    """Rows ``i`` whose point ``(i, w_i)`` is a corner of the graph of
    ``[e, w]``, i.e. ``w_i`` is not the middle of a ``321``."""
    n = len(w)
    return [i + 1 for i in range(n)
            if not (any(w[a] > w[i] for a in range(i))
                    and any(w[b] < w[i] for b in range(i + 1, n)))]


@dataclass(frozen=True)
class BoundingBox:
    """A maximal (anti)diagonal-anchored square.

    ``corner`` is the spanning corner in the chosen convention; for a purple
    box ``corners`` lists both.  ``span`` is the closed row interval, which is
    also the order key's source.
    """
    corner: tuple[int, int]
    span: tuple[int, int]
    color: str
    convention: str
    n: int
    corners: tuple[tuple[int, int], ...] = ()

    @property
    def order_key(self) -> int:
        return self.span[0]

    def region(self) -> Region:
        lo, hi = self.span
        band = ((1 << hi) - 1) ^ ((1 << (lo - 1)) - 1)
        if self.convention == "anti":
            lo_c, hi_c = self.n + 1 - hi, self.n + 1 - lo
            band = ((1 << hi_c) - 1) ^ ((1 << (lo_c - 1)) - 1)
        return Region.from_masks(
            self.n, [band if lo <= r <= hi else 0 for r in range(1, self.n + 1)])

    def to_json(self) -> dict:
        return {"corner": list(self.corner), "span": list(self.span),
                "color": self.color, "order_key": self.order_key,
                "corners": [list(c) for c in self.corners]}


def _span(i: int, wi: int) -> tuple[int, int]:
    return (i, wi) if i <= wi else (wi, i)


def spanning_corners(w: Sequence[int]) -> list[int]:
    """Rows ``i`` with ``B(i, w_i)`` maximal among the diagonal boxes of ``w``."""
    spans = [_span(i, x) for i, x in enumerate(w, start=1)]
    out = []
    for i, (lo, hi) in enumerate(spans, start=1):
        if not any(a <= lo and hi <= b and (a, b) != (lo, hi) for a, b in spans):
            out.append(i)
    return out


def bounding_boxes(v: Sequence[int], convention: str = "anti") -> list[BoundingBox]:
    """Maximal bounding boxes ordered by the row of their northwest corner.

    ``convention="anti"`` treats ``v`` as indexing the graph of ``[v, w0]``;
    ``"diag"`` treats it as ``w`` indexing the graph of ``[e, w]``.  The two
    are related by ``w = w0 v`` and reversing columns.
    """
    n = len(v)
    if convention == "anti":
        w = [n + 1 - x for x in v]
    elif convention == "diag":
        w = list(v)
    else:
        raise ValueError(f"unknown convention {convention!r}")

    by_span: dict[tuple[int, int], list[int]] = {}
    for i in spanning_corners(w):
        by_span.setdefault(_span(i, w[i - 1]), []).append(i)

    boxes = []
    for span, rows in by_span.items():
        corners = tuple((i, v[i - 1]) for i in rows)
        if len(rows) > 1:
            color = "purple"
        else:
            i = rows[0]
            color = ("green" if i == w[i - 1]
                     else "blue" if i < w[i - 1] else "red")
        boxes.append(BoundingBox(corners[0], span, color, convention, n, corners))
    boxes.sort(key=lambda b: b.order_key)
    keys = [b.order_key for b in boxes]
    if len(set(keys)) != len(keys):
        raise InconsistencyError(f"two maximal boxes share a northwest row for {list(v)}")
    return boxes


def delete_row_col(region: Region, i: int, k: int) -> Region:
    """Remove row ``i`` and column ``k`` and renumber (``P^k_i``)."""
    n = region.n
    if not (1 <= i <= n and 1 <= k <= n):
        raise IndexError(f"row/column ({i}, {k}) outside 1..{n}")
    low = (1 << (k - 1)) - 1
    masks = []
    for r, m in enumerate(region.masks, start=1):
        if r != i:
            masks.append((m & low) | ((m >> k) << (k - 1)))
    return Region.from_masks(n - 1, masks)


def reverse_columns(region: Region) -> Region:
    """``(i, j) -> (i, n + 1 - j)``."""
    n = region.n
    return Region.from_masks(
        n, [int(format(m, f"0{n}b")[::-1], 2) if n else 0 for m in region.masks])


def box_intersection_permutation(w: Permutation, i: int) -> Permutation:
    """The permutation whose lower-interval graph fills ``B(i, w_i)``.

    ``N`` is ``{i}`` plus every position forming an inversion with ``i``;
    the values ``w(N)`` are relabelled order-preservingly onto ``1..|N|``.

    >>> str(box_intersection_permutation(Permutation([3, 4, 7, 2, 1, 6, 5]), 3))
    '52143'
    """
    n = len(w)
    if not 1 <= i <= n:
        raise IndexError(f"position {i} outside 1..{n}")
    if i not in spanning_corners(w):
        raise ValueError(f"({i}, {w[i - 1]}) is not a spanning corner of {w}")
    wi = w[i - 1]
    members = [j for j in range(1, n + 1)
               if j == i or (j < i and w[j - 1] > wi) or (j > i and w[j - 1] < wi)]
    values = sorted(w[j - 1] for j in members)
    rank = {x: r for r, x in enumerate(values, start=1)}
    return Permutation([rank[w[j - 1]] for j in members])


def render(region: Region, v: Optional[Sequence[int]] = None) -> str:
    """ASCII picture: ``x`` on the graph of ``v``, ``.`` elsewhere in the
    region, blank outside it."""
    n = region.n
    points = set()
    if v is not None:
        points = {(i, x) for i, x in enumerate(v, start=1)}
    edge = "+" + "-" * (2 * n + 1) + "+"
    lines = [edge]
    for r in range(1, n + 1):
        cells = []
        for c in range(1, n + 1):
            if (r, c) in points:
                cells.append("x")
            elif (r, c) in region:
                cells.append(".")
            else:
                cells.append(" ")
        lines.append("| " + " ".join(cells) + " |")
    lines.append(edge)
    return "\n".join(lines)
