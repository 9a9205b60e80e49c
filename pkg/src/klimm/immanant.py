"""
Immanant evaluators and the analysis predicates relating patterns, squares
and signs.

Four routes to the Kazhdan-Lusztig immanant ``Imm_v(M)``:

``generic``          the defining sum with an arbitrary coefficient function;
``kl_full``          coefficients ``(-1)^{l(w)-l(v)} P_{w0 w, w0 v}(1)``;
``kl_avoiding_sum``  signed sum over ``w >= v`` (1324/2143-avoiding ``v``);
``determinantal``    ``(-1)^{l(v)} det(M restricted to the graph of [v, w0])``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from .kl import KLTable, get_table, kl_at_one
from .linalg import RatMatrix, det, restrict
from .perm import (
    Permutation, RankError, all_permutations, avoids, bruhat_interval,
    delete_entry, find_pattern, length, longest_element, parabolic_split,
    require_avoids,
)
from .region import delete_row_col, largest_square, upper_interval_graph

__all__ = [
    "ImmanantReport", "generic_immanant", "kl_coefficients", "kl_immanant",
    "kl_immanant_avoiding", "kl_immanant_det", "sjostrand_check",
    "sjostrand_patterns_avoided", "factor_blocks", "theorem_k",
    "square_pattern_analysis", "delete_dot_check", "qualifies",
    "monomial_products", "K3_PATTERNS", "SJOSTRAND_PATTERNS", "METHODS",
    "DEFAULT_KL_MAX_N", "evaluate", "product_of_factors", "SquareAnalysis",
]

DEFAULT_KL_MAX_N = 6
# complements of Sjostrand's 4231, 35142, 42513, 351624 for lower intervals
SJOSTRAND_PATTERNS = ("1324", "24153", "31524", "426153")
K2_PATTERNS = ("123", "1432", "3214")
K3_PATTERNS = ("1234", "15243", "15342", "12543", "13542", "32415", "42315",
               "32145", "42135", "165432", "543216")
METHODS = ("generic", "kl_full", "kl_avoiding_sum", "determinantal")

Coefficients = Union[Mapping[Permutation, Fraction], Callable[[Permutation], Fraction]]


@dataclass
class ImmanantReport:
    v: Permutation
    method: str
    value: Fraction
    sign_prediction: Optional[str] = None
    justification: Optional[str] = None
    k_condition: Optional[int] = None

    def to_json(self) -> dict:
        value = self.value
        return {
            "v": list(self.v),
            "method": self.method,
            "value": str(value) if isinstance(value, Fraction) else value,
            "sign": (value > 0) - (value < 0),
            "sign_prediction": self.sign_prediction,
            "justification": self.justification,
            "k_condition": self.k_condition,
        }


def qualifies(v: Sequence[int]) -> bool:
    """Avoids both 1324 and 2143."""
    return avoids(v, "1324", "2143")


def _check_rank(v: Sequence[int], m: RatMatrix) -> int:
    n = m.n
    if len(v) != n:
        raise RankError(f"permutation of rank {len(v)} vs {n}x{n} matrix")
    return n


def monomial_products(m: RatMatrix) -> dict[Permutation, Fraction]:
    """``w -> m_{1,w(1)} ... m_{n,w(n)}`` for every ``w`` in ``S_n``."""
    rows = m.rows
    out = {}
    for w in all_permutations(m.n):
        prod = Fraction(1)
        for r, c in enumerate(w):
            prod *= rows[r][c - 1]
            if not prod:
                break
        out[w] = prod
    return out


def generic_immanant(f: Coefficients, m: RatMatrix) -> Fraction:
    """``sum_w f(w) m_{1,w(1)} ... m_{n,w(n)}``; ``f`` may be a mapping
    (missing permutations count as 0) or a callable."""
    if isinstance(f, Mapping):
        coeff_of = lambda w: f.get(w, 0)  # noqa: E731
    else:
        coeff_of = f
    rows = m.rows
    total = Fraction(0)
    for w in all_permutations(m.n):
        coeff = coeff_of(w)
        if not coeff:
            continue
        prod = Fraction(1)
        for r, c in enumerate(w):
            prod *= rows[r][c - 1]
            if not prod:
                break
        total += coeff * prod
    return total


def _kl_limit() -> int:
    return int(os.environ.get("KLIMM_MAX_N", DEFAULT_KL_MAX_N))


def kl_coefficients(v: Permutation, cache: Optional[KLTable] = None,
                    max_n: Optional[int] = None) -> dict[Permutation, int]:
    """Nonzero coefficients ``w -> (-1)^{l(w)-l(v)} P_{w0 w, w0 v}(1)``.

    These are the monomial coefficients of ``Imm_v`` in the entries
    ``m_{1,w(1)} ... m_{n,w(n)}``.
    """
    n = len(v)
    limit = _kl_limit() if max_n is None else max_n
    if n > limit:
        raise ValueError(f"KL immanant refused for n={n} > {limit} "
                         "(set KLIMM_MAX_N or max_n to override)")
    table = cache if cache is not None else get_table(n)
    g = table.group
    w0 = longest_element(n)
    col = table.column(g.index[tuple(w0 * v)])
    lv = length(v)
    out = {}
    for x, poly in col.items():
        value = poly(1)
        if value:
            w = w0 * g.perms[x]  # x = w0 w
            out[w] = (-1) ** ((length(w) - lv) % 2) * value
    return out


def kl_immanant(v: Permutation, m: RatMatrix, cache: Optional[KLTable] = None,
                max_n: Optional[int] = None) -> Fraction:
    """``Imm_v(M)`` from the full KL recursion."""
    _check_rank(v, m)
    return generic_immanant(kl_coefficients(v, cache, max_n), m)


def kl_immanant_avoiding(v: Permutation, m: RatMatrix) -> Fraction:
    """``(-1)^{l(v)} sum_{w >= v} (-1)^{l(w)} prod m_{i,w(i)}``.

    Valid for ``v`` avoiding 1324 and 2143; raises
    :class:`~klimm.perm.PatternError` with an occurrence otherwise.
    """
    n = _check_rank(v, m)
    require_avoids(v, "1324", "2143")
    lv = length(v)
    coeffs = {w: (-1) ** ((length(w) - lv) % 2)
              for w in bruhat_interval(v, longest_element(n))}
    return generic_immanant(coeffs, m)


def kl_immanant_det(v: Permutation, m: RatMatrix) -> Fraction:
    """``(-1)^{l(v)} det(M restricted to the graph of [v, w0])``."""
    _check_rank(v, m)
    require_avoids(v, "1324", "2143")
    d = det(restrict(m, upper_interval_graph(v)))
    return -d if length(v) % 2 else d


def sjostrand_check(v: Permutation) -> bool:
    """Is ``[v, w0]`` exactly the set of ``w`` whose graph fits inside the
    graph of ``[v, w0]``?  Brute force over ``S_n``."""
    n = len(v)
    region = upper_interval_graph(v)
    fitting = {w for w in all_permutations(n) if region.contains_graph(w)}
    return fitting == bruhat_interval(v, longest_element(n))


def sjostrand_patterns_avoided(v: Sequence[int],
                               patterns: Sequence[str] = SJOSTRAND_PATTERNS) -> bool:
    return avoids(v, *patterns)


def _block(m: RatMatrix, rows: range, cols: range) -> RatMatrix:
    return m.submatrix(list(rows), list(cols))


def factor_blocks(v: Permutation, m: RatMatrix) -> list[tuple[Permutation, RatMatrix]]:
    """Split ``Imm_v(M)`` into a product over antidiagonal blocks.

    Recurses with :func:`~klimm.perm.parabolic_split`; an unsplittable ``v``
    yields the single factor ``(v, M)``.
    """
    n = _check_rank(v, m)
    split = parabolic_split(v)
    if split is None:
        return [(v, m)]
    j, v1, v2 = split
    top = n - j
    m1 = _block(m, range(1, top + 1), range(j + 1, n + 1))
    m2 = _block(m, range(top + 1, n + 1), range(1, j + 1))
    return factor_blocks(v1, m1) + factor_blocks(v2, m2)


def theorem_k(v: Permutation) -> Optional[int]:
    """Side of the largest square in the graph of ``[v, w0]`` when ``v``
    avoids 1324 and 2143, else ``None``.  ``Imm_v`` is then positive on
    every ``k``-positive matrix."""
    if not qualifies(v):
        return None
    return largest_square(upper_interval_graph(v))


@dataclass
class SquareAnalysis:
    k: int
    largest_square: int
    has_k1_square: bool
    avoids_monotone: bool
    avoids_2143: bool
    avoids_k2_patterns: bool
    k3_pattern_hits: list = field(default_factory=list)

    @property
    def monotone_implication_holds(self) -> bool:
        return self.has_k1_square or self.avoids_monotone

    @property
    def k2_characterization_holds(self) -> Optional[bool]:
        """``None`` when ``v`` contains 2143 (statement not applicable)."""
        if not self.avoids_2143:
            return None
        no_three_square = self.largest_square < 3
        return no_three_square == self.avoids_k2_patterns

    @property
    def k3_necessity_holds(self) -> bool:
        return not self.k3_pattern_hits or self.largest_square >= 4


def square_pattern_analysis(v: Permutation, k: int) -> SquareAnalysis:
    """Both sides of the square/pattern statements, for sweeping.

    * no square of side ``k+1`` implies ``v`` avoids ``12...(k+1)``;
    * for 2143-avoiding ``v``: no 3-square iff ``v`` avoids 123, 1432, 3214;
    * an occurrence of any of the eleven listed patterns forces a 4-square.
    """
    side = largest_square(upper_interval_graph(v))
    monotone = Permutation(range(1, k + 2))
    return SquareAnalysis(
        k=k,
        largest_square=side,
        has_k1_square=side >= k + 1,
        avoids_monotone=find_pattern(v, monotone) is None,
        avoids_2143=find_pattern(v, "2143") is None,
        avoids_k2_patterns=avoids(v, *K2_PATTERNS),
        k3_pattern_hits=[p for p in K3_PATTERNS if find_pattern(v, p) is not None],
    )


def delete_dot_check(v: Permutation, i: int, m: RatMatrix) -> bool:
    """``det(M|graph[x, w0]) == det(M|graph[v, w0] minus row i, column v_i)``
    for ``x`` the deletion of ``v_i``; ``M`` has rank ``n - 1``."""
    require_avoids(v, "2143", "1324")
    n = len(v)
    if m.n != n - 1:
        raise RankError(f"need a {n - 1}x{n - 1} matrix, got {m.n}x{m.n}")
    x = delete_entry(v, i)
    lhs = det(restrict(m, upper_interval_graph(x)))
    rhs = det(restrict(m, delete_row_col(upper_interval_graph(v), i, v(i))))
    return lhs == rhs


def evaluate(v: Permutation, m: RatMatrix, method: str,
             cache: Optional[KLTable] = None) -> Fraction:
    """Dispatch on a method name from :data:`METHODS`."""
    if method == "generic":
        _check_rank(v, m)
        w0 = longest_element(len(v))
        lv = length(v)
        table = cache if cache is not None else get_table(len(v))
        return generic_immanant(
            lambda w: (-1) ** ((length(w) - lv) % 2) * kl_at_one(w0 * w, w0 * v, table), m)
    if method == "kl_full":
        return kl_immanant(v, m, cache)
    if method == "kl_avoiding_sum":
        return kl_immanant_avoiding(v, m)
    if method == "determinantal":
        return kl_immanant_det(v, m)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def product_of_factors(v: Permutation, m: RatMatrix) -> Fraction:
    """``prod Imm_{v_i}(M_i)`` over :func:`factor_blocks`, each factor
    evaluated determinantally."""
    return math.prod((kl_immanant_det(u, b) for u, b in factor_blocks(v, m)),
                     start=Fraction(1))
