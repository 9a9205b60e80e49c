"""
Kazhdan-Lusztig polynomials of the symmetric group.

:class:`KLTable` computes ``P_{x,y}`` column by column with the standard
descent recursion.  :func:`kl_column_via_r` is a second, algorithmically
independent route (R-polynomials and the triangular inversion formula) used
to cross-check golden tables.
"""

from __future__ import annotations

import json
import threading
from typing import Iterable, Optional, Sequence

from .perm import RankError, all_permutations, avoids, length

__all__ = [
    "IntPoly", "SymmetricGroup", "KLTable", "kl_polynomial", "kl_at_one",
    "schubert_smooth", "get_table", "r_polynomial_table", "kl_column_via_r",
    "golden_table", "GOLDEN_FORMAT_VERSION",
]

GOLDEN_FORMAT_VERSION = "klimm-kl-golden/1"


class IntPoly(tuple):
    """Integer polynomial in ``q``; ``coeffs[d]`` multiplies ``q**d``.

    Trailing zeros are stripped, so the zero polynomial is ``()``.
    """

    __slots__ = ()

    def __new__(cls, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return super().__new__(cls, c)

    @property
    def degree(self) -> int:
        return len(self) - 1  # -1 for the zero polynomial

    def __call__(self, q: int = 1) -> int:
        total = 0
        for c in reversed(self):
            total = total * q + c
        return total

    def __add__(self, other: "IntPoly") -> "IntPoly":
        return _padd(self, other)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return _padd(self, other, -1)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if not self or not other:
            return ZERO
        out = [0] * (len(self) + len(other) - 1)
        for a, x in enumerate(self):
            if x:
                for b, y in enumerate(other):
                    out[a + b] += x * y
        return IntPoly(out)

    def shift(self, d: int) -> "IntPoly":
        """Multiply by ``q**d``."""
        return IntPoly([0] * d + list(self)) if self else ZERO

    def __repr__(self) -> str:
        return f"IntPoly({list(self)})"

    def __str__(self) -> str:
        if not self:
            return "0"
        terms = []
        for d, c in enumerate(self):
            if c:
                mono = "" if d == 0 else "q" if d == 1 else f"q^{d}"
                coef = str(c) if (c != 1 or d == 0) else ""
                terms.append(coef + mono)
        return " + ".join(terms)


def _padd(p: Sequence[int], r: Sequence[int], sgn: int = 1) -> IntPoly:
    out = list(p) + [0] * max(0, len(r) - len(p))
    for d, c in enumerate(r):
        out[d] += sgn * c
    return IntPoly(out)


ZERO = IntPoly()
ONE = IntPoly([1])


class SymmetricGroup:
    """Indexed ``S_n`` with lengths, right simple multiplication and lower
    Bruhat ideals stored as bitsets."""

    def __init__(self, n: int):
        self.n = n
        perms = sorted(all_permutations(n), key=lambda p: (length(p), p))
        self.perms = perms
        self.index = {p: k for k, p in enumerate(perms)}
        self.length = [length(p) for p in perms]
        self.rmul = []
        for p in perms:
            row = [None]
            for a in range(1, n):
                q = list(p)
                q[a - 1], q[a] = q[a], q[a - 1]
                row.append(self.index[tuple(q)])
            self.rmul.append(row)
        self.identity = 0
        self.lower = self._lower_ideals()

    def descents(self, k: int) -> list[int]:
        p = self.perms[k]
        return [a for a in range(1, self.n) if p[a - 1] > p[a]]

    def _lower_ideals(self) -> list[int]:
        # [e, y] = [e, ys] united with [e, ys]*s for any right descent s of y
        lower = [0] * len(self.perms)
        lower[0] = 1
        for y in range(1, len(self.perms)):
            s = self.descents(y)[0]
            ys = self.rmul[y][s]
            base = lower[ys]
            acc = base
            for x in _bits(base):
                acc |= 1 << self.rmul[x][s]
            lower[y] = acc
        return lower

    def leq(self, x: int, y: int) -> bool:
        return bool(self.lower[y] >> x & 1)


def _bits(mask: int):
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


class KLTable:
    """Memoized KL polynomials for ``S_n``.

    Columns ``y -> {x: P_{x,y}}`` are filled on demand; a lock keeps column
    construction single-writer so concurrent readers never see a partial
    column.
    """

    def __init__(self, n: int):
        self.n = n
        self.group = SymmetricGroup(n)
        self._columns: dict[int, dict[int, IntPoly]] = {}
        self._mu: dict[int, list[tuple[int, int]]] = {}
        self._lock = threading.RLock()

    def column(self, y: int) -> dict[int, IntPoly]:
        col = self._columns.get(y)
        if col is None:
            with self._lock:
                col = self._columns.get(y)
                if col is None:
                    col = self._build(y)
                    self._columns[y] = col
        return col

    def _mu_list(self, y: int) -> list[tuple[int, int]]:
        """Pairs ``(z, mu(z, y))`` with ``z < y`` and nonzero ``mu``."""
        out = self._mu.get(y)
        if out is None:
            g = self.group
            out = []
            for z, p in self.column(y).items():
                d = g.length[y] - g.length[z]
                if d % 2 == 1:
                    top = (d - 1) // 2
                    if len(p) > top and p[top]:
                        out.append((z, p[top]))
            self._mu[y] = out
        return out

    def _build(self, y: int) -> dict[int, IntPoly]:
        g = self.group
        if y == g.identity:
            return {y: ONE}
        s = g.descents(y)[0]
        ys = g.rmul[y][s]
        col_ys = self.column(ys)
        terms = []
        for z, mu in self._mu_list(ys):
            zs = g.rmul[z][s]
            if g.length[zs] < g.length[z]:
                shift = (g.length[y] - g.length[z]) // 2
                terms.append((z, mu, shift, self.column(z)))
        col = {}
        for x in _bits(g.lower[y]):
            xs = g.rmul[x][s]
            c = 1 if g.length[xs] < g.length[x] else 0
            p = col_ys.get(xs, ZERO).shift(1 - c) + col_ys.get(x, ZERO).shift(c)
            for z, mu, shift, col_z in terms:
                pxz = col_z.get(x)
                if pxz:
                    p = p - IntPoly([mu]).shift(shift) * pxz
            col[x] = p
        return col

    def polynomial(self, x: Sequence[int], y: Sequence[int]) -> IntPoly:
        if len(x) != self.n or len(y) != self.n:
            raise RankError(f"KL table for S_{self.n} given ranks {len(x)}, {len(y)}")
        g = self.group
        return self.column(g.index[tuple(y)]).get(g.index[tuple(x)], ZERO)


_TABLES: dict[int, KLTable] = {}
_TABLES_LOCK = threading.Lock()


def get_table(n: int) -> KLTable:
    with _TABLES_LOCK:
        table = _TABLES.get(n)
        if table is None:
            table = _TABLES[n] = KLTable(n)
        return table


def kl_polynomial(x: Sequence[int], y: Sequence[int],
                  cache: Optional[KLTable] = None) -> IntPoly:
    """``P_{x,y}(q)``; zero unless ``x <= y``."""
    if len(x) != len(y):
        raise RankError(f"rank mismatch: {len(x)} vs {len(y)}")
    table = cache if cache is not None else get_table(len(x))
    return table.polynomial(x, y)


def kl_at_one(x: Sequence[int], y: Sequence[int],
              cache: Optional[KLTable] = None) -> int:
    return kl_polynomial(x, y, cache)(1)


def schubert_smooth(y: Sequence[int]) -> bool:
    """True iff ``y`` avoids 4231 and 3412."""
    return avoids(y, "4231", "3412")


# independent route --------------------------------------------------------

def r_polynomial_table(group: SymmetricGroup) -> list[dict[int, IntPoly]]:
    """``R_{x,y}`` for all ``x <= y`` via the descent recursion.

    For a right descent ``s`` of ``y``: ``R_{x,y} = R_{xs,ys}`` when ``xs < x``
    and ``(q-1) R_{x,ys} + q R_{xs,ys}`` otherwise.
    """
    q_minus_1 = IntPoly([-1, 1])
    q = IntPoly([0, 1])
    table: list[dict[int, IntPoly]] = [dict() for _ in group.perms]
    table[0] = {0: ONE}
    for y in range(1, len(group.perms)):
        s = group.descents(y)[0]
        ys = group.rmul[y][s]
        prev = table[ys]
        col = {}
        for x in _bits(group.lower[y]):
            xs = group.rmul[x][s]
            if group.length[xs] < group.length[x]:
                col[x] = prev.get(xs, ZERO)
            else:
                col[x] = q_minus_1 * prev.get(x, ZERO) + q * prev.get(xs, ZERO)
        table[y] = col
    return table


def kl_column_via_r(group: SymmetricGroup, y: int,
                    rtable: list[dict[int, IntPoly]]) -> dict[int, IntPoly]:
    """Solve ``q^{l(y)-l(x)} P_{x,y}(1/q) - P_{x,y}(q) = sum_{x<z<=y} R_{x,z} P_{z,y}``
    downward from ``x = y``; ``P_{x,y}`` is minus the low-degree part of the
    right-hand side."""
    members = sorted(_bits(group.lower[y]), key=lambda x: -group.length[x])
    col = {y: ONE}
    for x in members:
        if x == y:
            continue
        rhs = ZERO
        for z, pzy in col.items():
            if z != x:
                rxz = rtable[z].get(x)
                if rxz:
                    rhs = rhs + rxz * pzy
        d = group.length[y] - group.length[x]
        keep = (d - 1) // 2 + 1
        col[x] = IntPoly(-c for c in rhs[:keep])
    return col


def golden_table(n: int) -> dict:
    """Every nonzero ``P_{x,y}`` of ``S_n`` after two independent computations
    agree; raises ``AssertionError`` otherwise."""
    from . import __version__

    table = KLTable(n)
    group = table.group
    rtable = r_polynomial_table(group)
    entries = []
    for y in range(len(group.perms)):
        direct = table.column(y)
        other = kl_column_via_r(group, y, rtable)
        if direct != other:
            bad = next(x for x in direct if direct[x] != other.get(x))
            raise AssertionError(
                f"KL mismatch at x={group.perms[bad]}, y={group.perms[y]}: "
                f"{direct[bad]} vs {other.get(bad)}")
        for x in sorted(direct, key=lambda k: group.perms[k]):
            entries.append({"x": list(group.perms[x]), "y": list(group.perms[y]),
                            "coeffs": list(direct[x])})
    entries.sort(key=lambda e: (e["y"], e["x"]))
    return {"n": n, "format": GOLDEN_FORMAT_VERSION, "code_version": __version__,
            "seed": None, "algorithms": ["descent-recursion", "r-polynomial-inversion"],
            "entries": entries}


def dump_golden(table: dict) -> str:
    """One entry per line, so diffs stay readable."""
    head = {k: v for k, v in table.items() if k != "entries"}
    lines = [json.dumps(e, separators=(",", ":")) for e in table["entries"]]
    body = ",\n  ".join(lines)
    head_json = json.dumps(head)[:-1]
    return f'{head_json}, "entries": [\n  {body}\n]}}\n'
