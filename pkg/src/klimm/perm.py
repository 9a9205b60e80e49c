"""
Permutations of ``[n] = {1, ..., n}`` in one-line notation.

Positions and values are 1-based throughout.  A :class:`Permutation` is an
immutable tuple of images, so ``v[0]`` is ``v(1)``; calling the permutation
uses the 1-based convention:

>>> v = Permutation([2, 4, 1, 3])
>>> v(2), length(v), str(v)
(4, 3, '2413')
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

__all__ = [
    "Permutation", "InversionPair", "PatternError", "RankError",
    "identity", "longest_element", "all_permutations", "parse_permutation",
    "length", "sign", "inversions", "non_inversions", "bruhat_leq",
    "bruhat_interval", "pattern_occurs", "find_pattern", "avoids",
    "require_avoids", "delete_entry", "delete_value", "parabolic_split",
    "in_maximal_parabolic", "simple_transposition", "reduced_word",
    "reduced_words", "word_product", "has_repetition_free_words",
    "longest_increasing", "max_interval_rank",
]

DEFAULT_MAX_INTERVAL_RANK = 7


class RankError(ValueError):
    """Two permutations (or a permutation and a matrix) of different rank."""


class PatternError(ValueError):
    """A pattern-avoidance precondition was violated.

    ``witness`` holds the 1-based positions of the offending occurrence.
    """

    def __init__(self, v: "Permutation", pattern: "Permutation",
                 witness: tuple[int, ...]):
        self.v = v
        self.pattern = pattern
        self.witness = witness
        values = ",".join(str(v(i)) for i in witness)
        super().__init__(
            f"{v} contains the pattern {pattern} at positions "
            f"{list(witness)} (values {values})")


class Permutation(tuple):
    """A bijection of ``[n]`` stored as its one-line notation."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        n = len(images)
        if n < 1:
            raise ValueError("a permutation needs rank n >= 1")
        if sorted(images) != list(range(1, n + 1)):
            raise ValueError(f"{list(images)} is not a permutation of 1..{n}")
        return super().__new__(cls, images)

    @classmethod
    def _trusted(cls, images: Sequence[int]) -> "Permutation":
        # skips validation; only for internally constructed bijections
        return tuple.__new__(cls, images)

    @property
    def n(self) -> int:
        return len(self)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self):
            raise IndexError(f"position {i} outside 1..{len(self)}")
        return self[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition ``(self * other)(i) = self(other(i))``."""
        if len(self) != len(other):
            raise RankError(f"cannot compose ranks {len(self)} and {len(other)}")
        return Permutation._trusted([self[x - 1] for x in other])

    __rmul__ = None  # tuple repetition makes no sense here

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, x in enumerate(self, start=1):
            inv[x - 1] = i
        return Permutation._trusted(inv)

    def position_of(self, value: int) -> int:
        return self.index(value) + 1

    def graph(self) -> list[tuple[int, int]]:
        """The cells ``(i, v(i))``."""
        return [(i, x) for i, x in enumerate(self, start=1)]

    def __str__(self) -> str:
        if len(self) <= 9:
            return "".join(map(str, self))
        return ",".join(map(str, self))

    def __repr__(self) -> str:
        return f"Permutation({list(self)})"

    def to_json(self) -> list[int]:
        return list(self)


class InversionPair(NamedTuple):
    """Positions ``<i, j>`` with ``i < j``."""
    i: int
    j: int


def identity(n: int) -> Permutation:
    return Permutation._trusted(range(1, n + 1))


def longest_element(n: int) -> Permutation:
    """``w0 : i -> n + 1 - i``."""
    if n < 1:
        raise ValueError("n must be positive")
    return Permutation._trusted(range(n, 0, -1))


def all_permutations(n: int) -> Iterator[Permutation]:
    """All of ``S_n`` in lexicographic order."""
    for p in itertools.permutations(range(1, n + 1)):
        yield Permutation._trusted(p)


def parse_permutation(text: str) -> Permutation:
    """Parse ``"2413"`` or ``"2,4,1,3"`` (commas are required above rank 9)."""
    text = text.strip().strip("[]")
    if "," in text:
        return Permutation(int(t) for t in text.split(",") if t.strip())
    if not text.isdigit():
        raise ValueError(f"cannot parse permutation {text!r}")
    return Permutation(int(c) for c in text)


def length(v: Sequence[int]) -> int:
    """Number of inversions."""
    n = len(v)
    return sum(1 for a in range(n) for b in range(a + 1, n) if v[a] > v[b])


def sign(v: Sequence[int]) -> int:
    return -1 if length(v) % 2 else 1


def inversions(v: Permutation) -> set[InversionPair]:
    n = len(v)
    return {InversionPair(a + 1, b + 1)
            for a in range(n) for b in range(a + 1, n) if v[a] > v[b]}


def non_inversions(v: Permutation) -> set[InversionPair]:
    n = len(v)
    return {InversionPair(a + 1, b + 1)
            for a in range(n) for b in range(a + 1, n) if v[a] < v[b]}


def _check_rank(x: Sequence[int], y: Sequence[int]) -> None:
    if len(x) != len(y):
        raise RankError(f"rank mismatch: {len(x)} vs {len(y)}")


def bruhat_leq(x: Sequence[int], y: Sequence[int]) -> bool:
    """Bruhat comparison by the sorted-prefix criterion.

    ``x <= y`` iff for every ``j`` the sorted set ``{x(1..j)}`` is dominated
    entrywise by the sorted set ``{y(1..j)}``.
    """
    _check_rank(x, y)
    n = len(x)
    xs: list[int] = []
    ys: list[int] = []
    for j in range(n - 1):
        _insort(xs, x[j])
        _insort(ys, y[j])
        for a, b in zip(xs, ys):
            if a > b:
                return False
    return True


def _insort(seq: list[int], value: int) -> None:
    k = len(seq)
    seq.append(value)
    while k and seq[k - 1] > value:
        seq[k] = seq[k - 1]
        k -= 1
    seq[k] = value


def max_interval_rank() -> int:
    return int(os.environ.get("KLIMM_MAX_N", DEFAULT_MAX_INTERVAL_RANK))


def bruhat_interval(v: Permutation, w: Permutation) -> set[Permutation]:
    """``{u : v <= u <= w}`` by filtering all of ``S_n``.

    Refuses ranks above ``KLIMM_MAX_N`` (default 7).
    """
    _check_rank(v, w)
    n = len(v)
    limit = max_interval_rank()
    if n > limit:
        raise ValueError(
            f"interval enumeration over S_{n} refused (limit {limit}; "
            "raise KLIMM_MAX_N to override)")
    if not bruhat_leq(v, w):
        return set()
    return {u for u in all_permutations(n)
            if bruhat_leq(v, u) and bruhat_leq(u, w)}


def _as_perm(p) -> Permutation:
    if isinstance(p, Permutation):
        return p
    if isinstance(p, str):
        return parse_permutation(p)
    return Permutation(p)


def find_pattern(v: Sequence[int], pattern) -> Optional[tuple[int, ...]]:
    """Positions ``i1 < ... < im`` of an occurrence of ``pattern`` in ``v``.

    Backtracking search that fixes pattern entries left to right and prunes as
    soon as the relative order disagrees.  Returns ``None`` when ``v`` avoids
    the pattern.

    >>> find_pattern(Permutation([1, 4, 2, 5, 3]), "123")
    (1, 2, 4)
    """
    p = _as_perm(pattern)
    m, n = len(p), len(v)
    if m > n:
        return None
    chosen: list[int] = []

    def extend(start: int) -> bool:
        t = len(chosen)
        if t == m:
            return True
        for pos in range(start, n - (m - t) + 1):
            val = v[pos]
            if all((val > v[c]) == (p[t] > p[s]) for s, c in enumerate(chosen)):
                chosen.append(pos)
                if extend(pos + 1):
                    return True
                chosen.pop()
        return False

    if extend(0):
        return tuple(c + 1 for c in chosen)
    return None


def pattern_occurs(v: Sequence[int], pattern) -> bool:
    return find_pattern(v, pattern) is not None


def avoids(v: Sequence[int], *patterns) -> bool:
    return all(find_pattern(v, p) is None for p in patterns)


def require_avoids(v: Permutation, *patterns) -> None:
    """Raise :class:`PatternError` with a witness if any pattern occurs."""
    for p in patterns:
        hit = find_pattern(v, p)
        if hit is not None:
            raise PatternError(v, _as_perm(p), hit)


def delete_entry(v: Permutation, i: int) -> Permutation:
    """Delete ``v(i)`` from the one-line notation and standardize.

    This is the map ``delta_i(j) -> delta_{v(i)}(v(j))``.

    >>> str(delete_entry(Permutation([6, 2, 7, 8, 5, 3, 1, 4]), 2))
    '5674213'
    """
    n = len(v)
    if n < 2:
        raise ValueError("cannot delete from a permutation of rank 1")
    if not 1 <= i <= n:
        raise IndexError(f"position {i} outside 1..{n}")
    gone = v[i - 1]
    return Permutation._trusted(
        [x - (x > gone) for k, x in enumerate(v, start=1) if k != i])


def delete_value(v: Permutation, value: int) -> Permutation:
    """Same as :func:`delete_entry` but addressed by the deleted value."""
    return delete_entry(v, v.position_of(value))


def in_maximal_parabolic(w: Sequence[int]) -> bool:
    """True iff ``w`` lies in some ``S_j x S_{n-j}`` with ``0 < j < n``."""
    top = 0
    for j in range(len(w) - 1):
        top = max(top, w[j])
        if top == j + 1:
            return True
    return False


def parabolic_split(v: Permutation):
    """Block decomposition of ``v`` when ``w0 v`` lies in a maximal parabolic.

    Returns ``(j, v1, v2)`` or ``None``.  The upper-right block of the interval
    graph holds ``v1`` and the lower-left block, of size ``j``, holds ``v2``;
    ``v(i) = v1(i) + j`` on the first ``n - j`` rows and ``v(i) = v2(i - n + j)``
    below.  The smallest admissible ``j`` is returned.

    >>> j, v1, v2 = parabolic_split(Permutation([7, 4, 5, 8, 6, 1, 3, 2]))
    >>> j, str(v1), str(v2)
    (3, '41253', '132')
    """
    n = len(v)
    for j in range(1, n):
        top = n - j
        # w0 v preserves [top]  <=>  v maps [top] onto [j+1, n]
        if min(v[:top]) == j + 1:
            v1 = Permutation._trusted([x - j for x in v[:top]])
            v2 = Permutation._trusted(v[top:])
            return j, v1, v2
    return None


def simple_transposition(n: int, a: int) -> Permutation:
    """``s_a`` swapping ``a`` and ``a + 1``."""
    if not 1 <= a < n:
        raise ValueError(f"s_{a} is not a simple transposition of S_{n}")
    images = list(range(1, n + 1))
    images[a - 1], images[a] = images[a], images[a - 1]
    return Permutation._trusted(images)


def word_product(n: int, word: Sequence[int]) -> Permutation:
    """``s_{a1} s_{a2} ... s_{ak}`` as a permutation of rank ``n``."""
    images = list(range(1, n + 1))
    for a in word:
        # right multiplication by s_a swaps positions a and a+1
        images[a - 1], images[a] = images[a], images[a - 1]
    return Permutation._trusted(images)


def reduced_word(v: Permutation) -> list[int]:
    """A reduced word built by placing ``v(1)``, then ``v(2)``, ... in turn.

    Starting from the identity, each value ``v(k)`` is walked left to position
    ``k`` by right multiplication with simple transpositions.
    """
    current = list(range(1, len(v) + 1))
    word: list[int] = []
    for k, target in enumerate(v):
        pos = current.index(target)
        while pos > k:
            current[pos - 1], current[pos] = current[pos], current[pos - 1]
            word.append(pos)  # s_pos swaps 1-based positions pos, pos+1
            pos -= 1
    return word


@lru_cache(maxsize=None)
def _reduced_words(v: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    out = []
    for a in range(1, len(v)):
        if v[a - 1] > v[a]:
            smaller = list(v)
            smaller[a - 1], smaller[a] = smaller[a], smaller[a - 1]
            out.extend(w + (a,) for w in _reduced_words(tuple(smaller)))
    return tuple(out) if out else ((),)


def reduced_words(v: Permutation) -> list[tuple[int, ...]]:
    """Every reduced word of ``v`` (exponential; small ranks only)."""
    return list(_reduced_words(tuple(v)))


def has_repetition_free_words(v: Permutation) -> bool:
    """True iff no reduced word of ``v`` repeats a letter.

    Depth-first search over word suffixes that stops at the first repeated
    letter, so only repetition-free partial words are ever expanded.
    """
    def search(u: list[int], used: frozenset) -> bool:
        for a in range(1, len(u)):
            if u[a - 1] > u[a]:
                if a in used:
                    return False
                u[a - 1], u[a] = u[a], u[a - 1]
                ok = search(u, used | {a})
                u[a - 1], u[a] = u[a], u[a - 1]
                if not ok:
                    return False
        return True

    return search(list(v), frozenset())


def longest_increasing(v: Sequence[int]) -> int:
    """Length of the longest increasing subsequence."""
    import bisect
    tails: list[int] = []
    for x in v:
        k = bisect.bisect_left(tails, x)
        if k == len(tails):
            tails.append(x)
        else:
            tails[k] = x
    return len(tails)
