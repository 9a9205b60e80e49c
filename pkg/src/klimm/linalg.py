"""
Exact rational matrices: determinants, minors, k-positivity, restriction to
grid regions, and generators of totally positive and k-positive samples.

All arithmetic is exact.  Internally, sign questions are answered on an
integer copy obtained by scaling each row by a positive integer, which
preserves the sign of every minor.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .region import Region

__all__ = [
    "RatMatrix", "MinorSpec", "GenerationError",
    "det", "det_cofactor", "minor", "minor_removed", "kept_indices",
    "all_minors", "is_k_positive", "is_k_nonnegative", "restrict",
    "lewis_carroll_check", "dodgson_det", "gen_totally_positive",
    "gen_totally_nonnegative", "gen_k_positive", "random_rational_matrix",
    "TWO_POSITIVE_EXAMPLE",
]

Number = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"refusing inexact entry {x!r}")


class RatMatrix:
    """An immutable matrix of :class:`fractions.Fraction` entries.

    ``rows`` is 0-based; :meth:`entry` takes the 1-based ``(i, j)`` used in
    the mathematics.
    """

    __slots__ = ("rows", "n_rows", "n_cols")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(_frac(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrix must be nonempty")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged rows")
        self.rows = data
        self.n_rows = len(data)
        self.n_cols = width

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: Optional[int] = None) -> "RatMatrix":
        return cls([[0] * (n if m is None else m) for _ in range(n)])

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    @property
    def n(self) -> int:
        if not self.is_square:
            raise ValueError(f"{self.n_rows}x{self.n_cols} matrix is not square")
        return self.n_rows

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i - 1][j - 1]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        """Keep the listed 1-based rows and columns, in the order given."""
        return RatMatrix([[self.rows[r - 1][c - 1] for c in cols] for r in rows])

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self.rows))

    def reverse_columns(self) -> "RatMatrix":
        return RatMatrix(row[::-1] for row in self.rows)

    def replace(self, i: int, j: int, value) -> "RatMatrix":
        rows = [list(r) for r in self.rows]
        rows[i - 1][j - 1] = _frac(value)
        return RatMatrix(rows)

    def replace_row(self, i: int, values: Sequence) -> "RatMatrix":
        rows = list(self.rows)
        rows[i - 1] = tuple(values)
        return RatMatrix(rows)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows))
        return RatMatrix([[sum(a * b for a, b in zip(row, col)) for col in cols]
                          for row in self.rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"RatMatrix({[[str(x) for x in r] for r in self.rows]})"

    def integer_rows(self) -> tuple[list[list[int]], list[int]]:
        """Integer matrix ``A`` and positive row scales ``d`` with
        ``A[r] = d[r] * self[r]``."""
        out, scales = [], []
        for row in self.rows:
            d = math.lcm(*(x.denominator for x in row))
            out.append([int(x * d) for x in row])
            scales.append(d)
        return out, scales

    # serialization -----------------------------------------------------

    def to_json(self) -> list[list]:
        return [[int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
                 for x in row] for row in self.rows]

    def dumps(self) -> str:
        return json.dumps(self.to_json()) + "\n"

    @classmethod
    def from_json(cls, data) -> "RatMatrix":
        return cls([[Fraction(str(x)) for x in row] for row in data])

    @classmethod
    def loads(cls, text: str, fmt: str = "json") -> "RatMatrix":
        if fmt == "json":
            return cls.from_json(json.loads(text))
        if fmt == "csv":
            rows = [r for r in csv.reader(io.StringIO(text)) if r]
            return cls([[Fraction(x.strip()) for x in r] for r in rows])
        raise ValueError(f"unknown matrix format {fmt!r}")

    @classmethod
    def load(cls, path: str) -> "RatMatrix":
        with open(path) as fh:
            text = fh.read()
        return cls.loads(text, "csv" if str(path).endswith(".csv") else "json")


@dataclass(frozen=True)
class MinorSpec:
    """Kept (not removed) 1-based row and column indices of a minor."""
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != len(self.cols) or not self.rows:
            raise ValueError("a minor needs equally many (>= 1) rows and columns")
        if list(self.rows) != sorted(set(self.rows)) or list(self.cols) != sorted(set(self.cols)):
            raise ValueError("minor indices must be strictly increasing")

    @property
    def size(self) -> int:
        return len(self.rows)


class GenerationError(RuntimeError):
    """A random generator exhausted its retry budget."""


def _bareiss(a: list[list[int]]) -> int:
    """Fraction-free elimination on an integer matrix (mutates ``a``)."""
    n = len(a)
    if n == 0:
        return 1
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sgn = -sgn
                    break
            else:
                return 0
        pivot = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (pivot * rowi[j] - aik * rowk[j]) // prev
        prev = pivot
    return sgn * a[n - 1][n - 1]


def det(m: RatMatrix) -> Fraction:
    """Exact determinant via Bareiss elimination on a denominator-free copy."""
    if not m.is_square:
        raise ValueError(f"determinant of a {m.n_rows}x{m.n_cols} matrix")
    a, scales = m.integer_rows()
    return Fraction(_bareiss(a), math.prod(scales))


def det_cofactor(m: RatMatrix) -> Fraction:
    """Laplace expansion along the first row; exponential, for testing."""
    rows = [list(r) for r in m.rows]
    if len(rows) != len(rows[0]):
        raise ValueError("determinant of a non-square matrix")

    def expand(rs: list[list[Fraction]]) -> Fraction:
        if len(rs) == 1:
            return rs[0][0]
        total = Fraction(0)
        for c, x in enumerate(rs[0]):
            if x:
                sub = [r[:c] + r[c + 1:] for r in rs[1:]]
                total += (-1) ** c * x * expand(sub)
        return total

    return expand(rows)


def _check_indices(idx: Sequence[int], n: int, what: str) -> None:
    if any(not 1 <= x <= n for x in idx):
        raise IndexError(f"{what} index out of range 1..{n}: {list(idx)}")


def minor(m: RatMatrix, spec: MinorSpec) -> Fraction:
    """Determinant of the submatrix on the kept rows and columns."""
    _check_indices(spec.rows, m.n_rows, "row")
    _check_indices(spec.cols, m.n_cols, "column")
    return det(m.submatrix(spec.rows, spec.cols))


def kept_indices(n: int, removed: Iterable[int]) -> tuple[int, ...]:
    """Convert removed 1-based indices into kept ones."""
    removed = set(removed)
    _check_indices(sorted(removed), n, "removed")
    return tuple(x for x in range(1, n + 1) if x not in removed)


def minor_removed(m: RatMatrix, rows_removed: Iterable[int],
                  cols_removed: Iterable[int]) -> Fraction:
    """``det(M_A^B)``: determinant with rows ``A`` and columns ``B`` deleted.

    An empty result (everything removed) has determinant 1.
    """
    rows = kept_indices(m.n_rows, rows_removed)
    cols = kept_indices(m.n_cols, cols_removed)
    if len(rows) != len(cols):
        raise ValueError("removal leaves a non-square matrix")
    if not rows:
        return Fraction(1)
    return det(m.submatrix(rows, cols))


def _minor_levels(a: list[list[int]], kmax: int):
    """Yield ``{(rows, cols): minor}`` for sizes ``1..kmax`` (0-based indices).

    Each size-``s`` minor is expanded along its first row using the size
    ``s - 1`` minors of the previous level.
    """
    n_r, n_c = len(a), len(a[0])
    level = {((r,), (c,)): a[r][c] for r in range(n_r) for c in range(n_c)}
    yield 1, level
    for s in range(2, kmax + 1):
        nxt = {}
        for rows in itertools.combinations(range(n_r), s):
            top, rest = rows[0], rows[1:]
            arow = a[top]
            for cols in itertools.combinations(range(n_c), s):
                total = 0
                for t, c in enumerate(cols):
                    x = arow[c]
                    if x:
                        sub = level[(rest, cols[:t] + cols[t + 1:])]
                        total = total + x * sub if t % 2 == 0 else total - x * sub
                nxt[(rows, cols)] = total
        level = nxt
        yield s, level


def all_minors(m: RatMatrix, kmax: Optional[int] = None) -> dict[MinorSpec, Fraction]:
    """Every minor of size at most ``kmax`` keyed by its (1-based) spec."""
    kmax = min(m.n_rows, m.n_cols) if kmax is None else kmax
    a, scales = m.integer_rows()
    out = {}
    for _, level in _minor_levels(a, kmax):
        for (rows, cols), value in level.items():
            scale = math.prod(scales[r] for r in rows)
            out[MinorSpec(tuple(r + 1 for r in rows), tuple(c + 1 for c in cols))] = \
                Fraction(value, scale)
    return out


def _check_k(m: RatMatrix, k: int) -> None:
    if not m.is_square:
        raise ValueError("k-positivity is defined for square matrices")
    if not 1 <= k <= m.n:
        raise ValueError(f"k={k} outside 1..{m.n}")


def _all_minors_pass(m: RatMatrix, k: int, strict: bool) -> bool:
    a, _ = m.integer_rows()
    for _, level in _minor_levels(a, k):
        if strict:
            if any(x <= 0 for x in level.values()):
                return False
        elif any(x < 0 for x in level.values()):
            return False
    return True


def is_k_positive(m: RatMatrix, k: int) -> bool:
    """All minors of size ``<= k`` strictly positive."""
    _check_k(m, k)
    return _all_minors_pass(m, k, strict=True)


def is_k_nonnegative(m: RatMatrix, k: int) -> bool:
    """All minors of size ``<= k`` nonnegative."""
    _check_k(m, k)
    return _all_minors_pass(m, k, strict=False)


def restrict(m: RatMatrix, region: Region) -> RatMatrix:
    """Zero every entry outside ``region``."""
    if not m.is_square or region.n != m.n_rows:
        raise ValueError(f"region of size {region.n} vs {m.n_rows}x{m.n_cols} matrix")
    zero = Fraction(0)
    return RatMatrix([[x if mask >> c & 1 else zero for c, x in enumerate(row)]
                      for row, mask in zip(m.rows, region.masks)])


def lewis_carroll_check(m: RatMatrix, a: int, a2: int, b: int, b2: int) -> bool:
    """Check ``det M * det M_{a,a'}^{b,b'} = det M_a^b det M_{a'}^{b'}
    - det M_a^{b'} det M_{a'}^b`` exactly (indices are *removed* rows/cols)."""
    n = m.n
    if n < 2:
        raise ValueError("the identity needs n >= 2")
    if not (1 <= a < a2 <= n and 1 <= b < b2 <= n):
        raise ValueError(f"need 1 <= a < a' <= n and 1 <= b < b' <= n, got {(a, a2, b, b2)}")
    lhs = det(m) * minor_removed(m, (a, a2), (b, b2))
    rhs = (minor_removed(m, (a,), (b,)) * minor_removed(m, (a2,), (b2,))
           - minor_removed(m, (a,), (b2,)) * minor_removed(m, (a2,), (b,)))
    return lhs == rhs


def dodgson_det(m: RatMatrix) -> Fraction:
    """Determinant by Dodgson condensation.

    Each round replaces the array of connected ``k x k`` minors by the
    ``(k+1) x (k+1)`` ones, dividing by interior entries of the round before.
    A zero interior entry makes the division undefined; the computation then
    falls back to elimination.
    """
    n = m.n
    cur = [list(r) for r in m.rows]
    if n == 1:
        return cur[0][0]
    prev = [[Fraction(1)] * (n + 1) for _ in range(n + 1)]
    for size in range(n - 1, 0, -1):
        nxt = []
        for i in range(size):
            row = []
            for j in range(size):
                denom = prev[i + 1][j + 1]
                if denom == 0:
                    return det(m)
                row.append((cur[i][j] * cur[i + 1][j + 1]
                            - cur[i][j + 1] * cur[i + 1][j]) / denom)
            nxt.append(row)
        prev, cur = cur, nxt
    return cur[0][0]


# generators ---------------------------------------------------------------

def _rng(seed) -> random.Random:
    """Seeds may be a ``Random``, an int, a string or a tuple of those
    (tuples are joined with ``:`` so they never go through ``hash``)."""
    if isinstance(seed, random.Random):
        return seed
    if isinstance(seed, tuple):
        seed = ":".join(str(x) for x in seed)
    return random.Random(seed)


def _positive_fraction(rng: random.Random, bound: int = 100) -> Fraction:
    return Fraction(rng.randint(1, bound), rng.randint(1, bound))


def random_rational_matrix(n: int, seed, bound: int = 50,
                           den_bound: int = 100) -> RatMatrix:
    """Entries ``p/q`` with ``|p| <= bound`` and ``1 <= q <= den_bound``."""
    rng = _rng(seed)
    return RatMatrix([[Fraction(rng.randint(-bound, bound), rng.randint(1, den_bound))
                       for _ in range(n)] for _ in range(n)])


def _w0_word(n: int) -> list[int]:
    # (1)(2 1)(3 2 1)...: a reduced word for the longest element
    return [a for top in range(1, n) for a in range(top, 0, -1)]


def _bidiagonal_product(n: int, params: list[Fraction], diag: list[Fraction],
                        upper_params: list[Fraction]) -> RatMatrix:
    word = _w0_word(n)
    a = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    # L = prod (I + t E_{i+1,i}); right-multiplying adds t * column i+1 to column i
    for idx, t in zip(word, params):
        for r in range(n):
            a[r][idx - 1] += t * a[r][idx]
    for r in range(n):
        for c in range(n):
            a[r][c] *= diag[c]
    # U factors (I + t E_{i,i+1}); right-multiplying adds t * column i to column i+1
    for idx, t in zip(reversed(word), upper_params):
        for r in range(n):
            a[r][idx] += t * a[r][idx - 1]
    return RatMatrix(a)


def gen_totally_positive(n: int, seed) -> RatMatrix:
    """A totally positive matrix ``L D U`` built from elementary bidiagonal
    factors with positive rational parameters along a reduced word of the
    longest permutation."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = _rng(seed)
    m = len(_w0_word(n))
    lower = [_positive_fraction(rng) for _ in range(m)]
    diag = [_positive_fraction(rng) for _ in range(n)]
    upper = [_positive_fraction(rng) for _ in range(m)]
    return _bidiagonal_product(n, lower, diag, upper)


def gen_totally_nonnegative(n: int, seed, zero_prob: float = 0.3) -> RatMatrix:
    """Like :func:`gen_totally_positive` but each bidiagonal parameter is zero
    with probability ``zero_prob``; the product is totally nonnegative."""
    rng = _rng(seed)
    m = len(_w0_word(n))

    def param() -> Fraction:
        return Fraction(0) if rng.random() < zero_prob else _positive_fraction(rng)

    lower = [param() for _ in range(m)]
    diag = [_positive_fraction(rng) for _ in range(n)]
    upper = [param() for _ in range(m)]
    return _bidiagonal_product(n, lower, diag, upper)


def _push_minor(m: RatMatrix, k: int, rng: random.Random,
                halvings: int = 6) -> Optional[RatMatrix]:
    """Move one entry so that a random ``(k+1)``-minor through it becomes
    nonpositive, keeping every minor of size ``<= k`` positive."""
    n = m.n
    rows = tuple(sorted(rng.sample(range(1, n + 1), k + 1)))
    cols = tuple(sorted(rng.sample(range(1, n + 1), k + 1)))
    p, q = rng.randrange(k + 1), rng.randrange(k + 1)
    i, j = rows[p], cols[q]
    d0 = det(m.submatrix(rows, cols))
    if d0 <= 0:
        return None
    # the minor is affine in m_ij with slope equal to the signed cofactor
    slope = (-1) ** (p + q) * det(m.submatrix(rows[:p] + rows[p + 1:],
                                              cols[:q] + cols[q + 1:]))
    if slope == 0:
        return None
    to_zero = -d0 / slope
    overshoot = Fraction(rng.randint(1, 100), 100)
    for _ in range(halvings):
        cand = m.replace(i, j, m.entry(i, j) + to_zero * (1 + overshoot))
        if is_k_positive(cand, k):
            return cand
        overshoot /= 4
    cand = m.replace(i, j, m.entry(i, j) + to_zero)
    return cand if is_k_positive(cand, k) else None


def gen_k_positive(n: int, k: int, seed, max_retries: int = 1000) -> RatMatrix:
    """A ``k``-positive matrix that is not ``(k+1)``-positive.

    Starts from :func:`gen_totally_positive` and moves single entries so that
    a randomly chosen ``(k+1)``-minor drops to zero or below, accepting a
    move only when every minor of size ``<= k`` is still positive.  One to
    three such moves are applied.  Deterministic in ``seed``.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    rng = _rng(seed)
    base = gen_totally_positive(n, rng)
    rounds = rng.randint(1, 3)
    current = base
    done = 0
    for _ in range(max_retries):
        cand = _push_minor(current, k, rng)
        if cand is None:
            continue
        current = cand
        done += 1
        if done == rounds:
            break
    if done == 0 or is_k_positive(current, k + 1):
        raise GenerationError(
            f"no {k}-positive perturbation found for n={n} after {max_retries} tries")
    return current


TWO_POSITIVE_EXAMPLE = RatMatrix([[11, 9, 3], [8, 7, 3], [2, 2, 1]])
