"""
Property sweeps: exhaustive at small rank, seeded Monte-Carlo where the
inputs are matrices.

Each suite splits into independent cases.  A case yields rows, and a row
either records a named boolean check (:class:`CheckRow`) or a sampled
immanant value (:class:`ImmanantRow`).  Cases may run in worker processes;
results are merged in case order, so output never depends on scheduling.

>>> result = run_suite(SweepConfig("sjostrand", n_max=4, samples=1, seed=0))
>>> result.passed, result.checked
(True, 33)
"""

from __future__ import annotations

import csv
import io
import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional, Union

from . import __version__
from .immanant import (
    evaluate, kl_coefficients, kl_immanant_det, product_of_factors, qualifies,
    sjostrand_check, sjostrand_patterns_avoided, square_pattern_analysis,
    theorem_k, delete_dot_check, monomial_products, METHODS,
)
from .kl import get_table, kl_column_via_r, r_polynomial_table, schubert_smooth
from .linalg import (
    RatMatrix, det, det_cofactor, dodgson_det, gen_k_positive,
    gen_totally_nonnegative, gen_totally_positive, lewis_carroll_check,
    random_rational_matrix, restrict,
)
from .perm import (
    Permutation, all_permutations, avoids, delete_entry, in_maximal_parabolic,
    has_repetition_free_words, length, longest_element, longest_increasing,
    parabolic_split, reduced_word,
)
from .region import (
    Region, bounding_boxes, box_intersection_permutation,
    brute_force_interval_graph, largest_square, lower_corners,
    lower_interval_graph, reverse_columns, spanning_corners,
    upper_interval_graph, young_region,
)

log = logging.getLogger(__name__)

CSV_FORMAT_VERSION = "klimm-sweep/1"
IMMANANT_COLUMNS = ("v", "method", "k", "sample_seed", "value_sign", "value")
CHECK_COLUMNS = ("case", "check", "passed", "detail")


@dataclass(frozen=True)
class SweepConfig:
    suite: str
    n_max: int
    samples: int
    seed: int
    output_path: Optional[str] = None
    jobs: int = 1
    # above this rank, permutation-indexed suites sample v instead of
    # enumerating; None means always exhaustive
    exhaustive_max: Optional[int] = None
    v_samples: int = 50

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {sorted(SUITES)}")


@dataclass(frozen=True)
class CheckRow:
    case: str
    check: str
    passed: bool
    detail: str = ""

    def as_csv(self) -> tuple:
        return (self.case, self.check, int(self.passed), self.detail)


@dataclass(frozen=True)
class ImmanantRow:
    v: Permutation
    method: str
    k: int
    sample_seed: str
    value: Fraction
    passed: bool

    @property
    def value_sign(self) -> int:
        return (self.value > 0) - (self.value < 0)

    def as_csv(self) -> tuple:
        return (str(self.v), self.method, self.k, self.sample_seed,
                self.value_sign, str(self.value))


Row = Union[CheckRow, ImmanantRow]


@dataclass
class SuiteResult:
    suite: str
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def checked(self) -> int:
        return len(self.rows)

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checked": self.checked,
            "failures": [_row_json(r) for r in self.failures[:20]],
            "failure_count": len(self.failures),
            "notes": self.notes,
        }


def _row_json(row: Row) -> dict:
    if isinstance(row, ImmanantRow):
        return {"v": list(row.v), "method": row.method, "k": row.k,
                "sample_seed": row.sample_seed, "value": str(row.value)}
    return {"case": row.case, "check": row.check, "detail": row.detail}


# sample sources -----------------------------------------------------------

def sample_seed(seed: int, *parts) -> str:
    return ":".join(str(p) for p in (seed, *parts))


@lru_cache(maxsize=4096)
def k_positive_sample(n: int, k: int, seed_text: str) -> RatMatrix:
    """Totally positive when ``k >= n``; shared by every case of the same
    ``(n, k)`` within a process."""
    if k >= n:
        return gen_totally_positive(n, seed_text)
    return gen_k_positive(n, k, seed_text)


def _perms_for(config: SweepConfig, n: int,
               keep: Callable[[Permutation], bool] = lambda v: True) -> list[Permutation]:
    perms = [v for v in all_permutations(n) if keep(v)]
    limit = config.exhaustive_max
    if limit is not None and n > limit and len(perms) > config.v_samples:
        rng = random.Random(sample_seed(config.seed, "perms", n))
        perms = sorted(rng.sample(perms, config.v_samples))
    return perms


def _ranks(config: SweepConfig, low: int = 1, cap: Optional[int] = None) -> range:
    top = config.n_max if cap is None else min(config.n_max, cap)
    return range(low, top + 1)


# suites -------------------------------------------------------------------
# each suite is (cases(config) -> list, run(case, config) -> list of rows)

def _lc_cases(config):
    return [(n, j) for n in _ranks(config, 2) for j in range(config.samples)]


def _lc_run(case, config):
    n, j = case
    tag = sample_seed(config.seed, "lc", n, j)
    m = random_rational_matrix(n, tag)
    rng = random.Random(tag)
    if j % 4 == 3:
        # degenerate sample: one row copied onto another
        src, dst = rng.sample(range(1, n + 1), 2)
        m = m.replace_row(dst, m.rows[src - 1])
    a, a2 = sorted(rng.sample(range(1, n + 1), 2))
    b, b2 = sorted(rng.sample(range(1, n + 1), 2))
    name = f"n={n} sample={j}"
    rows = [CheckRow(name, "lewis-carroll", lewis_carroll_check(m, a, a2, b, b2),
                     f"a={a},a'={a2},b={b},b'={b2}"),
            CheckRow(name, "dodgson", dodgson_det(m) == det(m))]
    if n <= 5:
        rows.append(CheckRow(name, "cofactor", det_cofactor(m) == det(m)))
    return rows


def _agree_cases(config):
    return [v for n in _ranks(config, 1, 6) for v in _perms_for(config, n, qualifies)]


def _agree_run(v, config):
    rows = []
    for j in range(config.samples):
        m = random_rational_matrix(len(v), sample_seed(config.seed, "agree", v, j))
        values = {method: evaluate(v, m, method) for method in METHODS}
        ok = len(set(values.values())) == 1
        rows.append(CheckRow(str(v), f"methods agree sample={j}", ok,
                             "" if ok else repr({k: str(x) for k, x in values.items()})))
    return rows


def _thm_cases(config):
    return [v for n in _ranks(config) for v in _perms_for(config, n, qualifies)]


def _positivity_rows(v, k, config) -> list[ImmanantRow]:
    """Signed determinant on every sample; the full KL sum as well up to
    rank 5, where it is cheap."""
    n = len(v)
    region = upper_interval_graph(v)
    sign = -1 if length(v) % 2 else 1
    coeffs = kl_coefficients(v) if n <= 5 else None
    rows = []
    for j in range(config.samples):
        tag = sample_seed(config.seed, n, k, j)
        m = k_positive_sample(n, k, tag)
        signed_det = sign * det(restrict(m, region))
        rows.append(ImmanantRow(v, "determinantal", k, tag, signed_det, signed_det > 0))
        if coeffs is not None:
            products = monomial_products(m)
            value = sum((c * products[w] for w, c in coeffs.items()), Fraction(0))
            rows.append(ImmanantRow(v, "kl_full", k, tag, value, value > 0))
    return rows


def _thm_run(v, config):
    return _positivity_rows(v, theorem_k(v), config)


_TWO_POSITIVE_PATTERNS = ("123", "1324", "2143", "1432", "3214")


def _two_pos_cases(config):
    return [v for n in _ranks(config)
            for v in _perms_for(config, n, lambda v: avoids(v, *_TWO_POSITIVE_PATTERNS))]


def _two_pos_run(v, config):
    return _positivity_rows(v, min(2, len(v)), config)


def _tnn_cases(config):
    return [(n, j) for n in _ranks(config, 1, 6) for j in range(config.samples)]


def _tnn_run(case, config):
    n, j = case
    tag = sample_seed(config.seed, "tnn", n, j)
    products = monomial_products(gen_totally_nonnegative(n, tag))
    rows = []
    for v in all_permutations(n):
        value = sum((c * products[w] for w, c in kl_coefficients(v).items()), Fraction(0))
        rows.append(ImmanantRow(v, "kl_full", n, tag, value, value >= 0))
    return rows


def _pyl_cases(config):
    return [v for n in _ranks(config, 2, 6) for v in _perms_for(config, n)
            if longest_increasing(v) < n]


def _pyl_run(v, config):
    # falsification only: k is the smallest with v avoiding 12...(k+1)
    k = longest_increasing(v)
    n = len(v)
    coeffs = kl_coefficients(v)
    rows = []
    for j in range(config.samples):
        tag = sample_seed(config.seed, n, k, j)
        products = monomial_products(k_positive_sample(n, k, tag))
        value = sum((c * products[w] for w, c in coeffs.items()), Fraction(0))
        rows.append(ImmanantRow(v, "kl_full", k, tag, value, value > 0))
    return rows


def _all_perm_cases(cap=None, low=1):
    def cases(config):
        return [v for n in _ranks(config, low, cap) for v in all_permutations(n)]
    return cases


def _sjostrand_run(v, config):
    lhs = sjostrand_check(v)
    rhs = sjostrand_patterns_avoided(v)
    return [CheckRow(str(v), "interval = fitting graphs <=> patterns avoided", lhs == rhs,
                     f"interval_full={lhs} avoids={rhs}")]


def _partitions_in_box(n: int) -> Iterable[tuple[int, ...]]:
    for c in itertools.combinations_with_replacement(range(n, -1, -1), n):
        yield tuple(x for x in c if x)


def _young_cases(config):
    return [(n, lam) for n in _ranks(config) for lam in _partitions_in_box(n)]


def _young_run(case, config):
    n, shape = case
    rows = []
    for variant in ("young", "complement"):
        if variant == "young":
            region = young_region(n, shape)
            removed = n * n - sum(shape)
            # the staircase (n, n-1, ..., 1) fits inside
            nonzero = all(len(shape) > r and shape[r] >= n - r for r in range(n))
        else:
            region = young_region(n, shape).complement()
            removed = sum(shape)
            nonzero = all((shape[r] if r < len(shape) else 0) <= n - 1 - r
                          for r in range(n))
        k = max(1, largest_square(region))
        for j in range(config.samples):
            tag = sample_seed(config.seed, n, k, j)
            d = det(restrict(k_positive_sample(n, k, tag), region))
            if nonzero:
                ok = d != 0 and (d > 0) == (removed % 2 == 0)
            else:
                ok = d == 0
            rows.append(CheckRow(f"n={n} shape={shape} {variant}", f"sign sample={j}", ok,
                                 f"k={k} removed={removed} det={d}"))
    return rows


def _alternates(boxes) -> bool:
    colors = [b.color for b in boxes]
    if len(colors) < 2:
        return True
    return (all(c in ("red", "blue") for c in colors)
            and all(a != b for a, b in zip(colors, colors[1:])))


def _box_alt_run(v, config):
    n = len(v)
    rows = []
    w0v = Permutation([n + 1 - x for x in v])
    if avoids(v, "2143") and not in_maximal_parabolic(w0v):
        boxes = bounding_boxes(v, "anti")
        rows.append(CheckRow(str(v), "anti alternation", _alternates(boxes),
                             " ".join(b.color for b in boxes)))
    if avoids(v, "3412") and not in_maximal_parabolic(v):
        boxes = bounding_boxes(v, "diag")
        rows.append(CheckRow(str(v), "diag alternation", _alternates(boxes),
                             " ".join(b.color for b in boxes)))
    return rows


def _delete_dot_cases(config):
    return [v for n in _ranks(config, 2) for v in _perms_for(config, n, qualifies)]


def _delete_dot_run(v, config):
    n = len(v)
    rows = []
    for i in range(1, n + 1):
        for j in range(config.samples):
            m = random_rational_matrix(n - 1, sample_seed(config.seed, "dd", v, i, j))
            rows.append(CheckRow(str(v), f"i={i} sample={j}", delete_dot_check(v, i, m)))
    return rows


def _patterns_run(v, config):
    n = len(v)
    rows = []
    for k in range(1, n):
        a = square_pattern_analysis(v, k)
        rows.append(CheckRow(str(v), f"no {k + 1}-square => avoids 1..{k + 1}",
                             a.monotone_implication_holds, f"square={a.largest_square}"))
    a = square_pattern_analysis(v, 2)
    if a.k2_characterization_holds is not None:
        rows.append(CheckRow(str(v), "no 3-square <=> avoids 123,1432,3214",
                             a.k2_characterization_holds, f"square={a.largest_square}"))
    rows.append(CheckRow(str(v), "listed pattern => 4-square", a.k3_necessity_holds,
                         f"hits={a.k3_pattern_hits} square={a.largest_square}"))
    return rows


def _kl_cases(config):
    return list(_ranks(config, 1, 6))


def _kl_run(n, config):
    table = get_table(n)
    group = table.group
    rtable = r_polynomial_table(group)
    rows = []
    for y in range(len(group.perms)):
        col = table.column(y)
        yperm = group.perms[y]
        smooth = schubert_smooth(yperm)
        bad = []
        for x, p in col.items():
            d = group.length[y] - group.length[x]
            if p[0] != 1:
                bad.append(f"constant term at x={group.perms[x]}")
            if x != y and 2 * p.degree > d - 1:
                bad.append(f"degree at x={group.perms[x]}")
            if any(c < 0 for c in p):
                bad.append(f"negative coefficient at x={group.perms[x]}")
            if smooth and p != (1,):
                bad.append(f"smooth but P={p} at x={group.perms[x]}")
        rows.append(CheckRow(f"n={n} y={yperm}", "invariants", not bad, "; ".join(bad)))
        rows.append(CheckRow(f"n={n} y={yperm}", "independent route agrees",
                             col == kl_column_via_r(group, y, rtable)))
    return rows


def _structural_run(w, config):
    n = len(w)
    name = str(w)
    rows = []
    w0 = longest_element(n)
    if n <= 6:
        tenner = avoids(w, "321", "3412")
        one_word = len(set(reduced_word(w))) == len(reduced_word(w))
        rows.append(CheckRow(name, "tenner", tenner == one_word == has_repetition_free_words(w)))
    if avoids(w, "321", "3412"):
        inv = w.inverse()
        ok = all(abs(i - w(i)) == 1 for i in range(1, n + 1)
                 if inv(i) == w(i) and w(i) != i)
        rows.append(CheckRow(name, "321/3412 transposition lemma", ok))
    if n <= 6:
        upper = upper_interval_graph(w)
        lower = lower_interval_graph(w)
        rows.append(CheckRow(name, "upper characterization",
                             upper == brute_force_interval_graph(w, w0)))
        rows.append(CheckRow(name, "lower characterization",
                             lower == brute_force_interval_graph(Permutation(range(1, n + 1)), w)))
        rows.append(CheckRow(name, "reverse columns",
                             reverse_columns(lower_interval_graph(w0 * w)) == upper))
        union = Region(n, [])
        for box in bounding_boxes(w, "anti"):
            union = union | box.region()
        rows.append(CheckRow(name, "inside bounding boxes", upper <= union))
        if avoids(w, "3412"):
            rows.extend(_box_intersection_rows(w))
            rows.extend(_deletion_rows(w))
    return rows


def _box_intersection_rows(w: Permutation) -> list[CheckRow]:
    n = len(w)
    graph = lower_interval_graph(w)
    rows = []
    for i in spanning_corners(w):
        u = box_intersection_permutation(w, i)
        lo, hi = sorted((i, w(i)))
        box = Region(n, [(r, c) for r in range(lo, hi + 1) for c in range(lo, hi + 1)])
        shift = lo - 1
        fits = len(u) + shift <= n
        ok = fits and (box & graph) == lower_interval_graph(u).translated(shift, shift, n)
        rows.append(CheckRow(str(w), f"box intersection at row {i}", ok, f"u={u}"))
    return rows


def _deletion_rows(w: Permutation) -> list[CheckRow]:
    rows = []
    corners = set(lower_corners(w))
    before = bounding_boxes(w, "diag")
    for i in range(1, len(w) + 1):
        if i in corners:
            continue
        wi = w(i)
        after = bounding_boxes(delete_entry(w, i), "diag")

        def moved(cell):
            r, c = cell
            return (r - (r > i), c - (c > wi))

        ok = len(before) == len(after) and all(
            b.color == a.color and {moved(c) for c in b.corners} == set(a.corners)
            for b, a in zip(before, after))
        rows.append(CheckRow(str(w), f"delete non-corner row {i}", ok))
    return rows


def _block_cases(config):
    return [v for n in _ranks(config, 2) for v in _perms_for(config, n, qualifies)
            if parabolic_split(v) is not None]


def _block_run(v, config):
    rows = []
    for j in range(config.samples):
        m = random_rational_matrix(len(v), sample_seed(config.seed, "block", v, j))
        rows.append(CheckRow(str(v), f"factorization sample={j}",
                             product_of_factors(v, m) == kl_immanant_det(v, m)))
    return rows


@dataclass(frozen=True)
class Suite:
    cases: Callable[[SweepConfig], list]
    run: Callable[[object, SweepConfig], list]
    kind: str = "check"
    description: str = ""


SUITES: dict[str, Suite] = {
    "lewis-carroll": Suite(_lc_cases, _lc_run, description="condensation identity, Dodgson, cofactor"),
    "formula-agreement": Suite(_agree_cases, _agree_run, description="all immanant routes agree"),
    "thm-main": Suite(_thm_cases, _thm_run, "immanant", "positivity at the largest-square k"),
    "two-positive": Suite(_two_pos_cases, _two_pos_run, "immanant", "five-pattern 2-positivity"),
    "tnn": Suite(_tnn_cases, _tnn_run, "immanant", "nonnegativity on TNN matrices"),
    "conjecture-pyl": Suite(_pyl_cases, _pyl_run, "immanant", "falsification sweep"),
    "sjostrand": Suite(_all_perm_cases(), _sjostrand_run, description="full intervals vs patterns"),
    "young-signs": Suite(_young_cases, _young_run, description="Young diagram determinant signs"),
    "box-alternation": Suite(_all_perm_cases(), _box_alt_run, description="box colors alternate"),
    "delete-dot": Suite(_delete_dot_cases, _delete_dot_run, description="dot deletion determinant"),
    "patterns": Suite(_all_perm_cases(), _patterns_run, description="squares vs patterns"),
    "kl-invariants": Suite(_kl_cases, _kl_run, description="KL polynomial invariants"),
    "structural": Suite(_all_perm_cases(), _structural_run, description="graph and box lemmas"),
    "block-factor": Suite(_block_cases, _block_run, description="antidiagonal block factorization"),
}


def _run_one(args):
    name, case, config = args
    return SUITES[name].run(case, config)


def run_suite(config: SweepConfig) -> SuiteResult:
    suite = SUITES[config.suite]
    cases = suite.cases(config)
    log.info("suite %s: %d cases", config.suite, len(cases))
    result = SuiteResult(config.suite)
    jobs = [(config.suite, case, config) for case in cases]
    if config.jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * config.jobs)))
            for rows in chunks:
                result.rows.extend(rows)
    else:
        for job in jobs:
            result.rows.extend(_run_one(job))
    if config.suite == "conjecture-pyl":
        note = ("no counterexample found" if result.passed
                else f"{len(result.failures)} counterexample samples found")
        result.notes.append(note)
        log.info("conjecture-pyl: %s", note)
    return result


def to_csv(result: SuiteResult, config: SweepConfig) -> str:
    buf = io.StringIO()
    buf.write(f"# {CSV_FORMAT_VERSION} klimm={__version__} suite={config.suite} "
              f"n_max={config.n_max} samples={config.samples} seed={config.seed}\n")
    writer = csv.writer(buf, lineterminator="\n")
    kind = SUITES[config.suite].kind
    writer.writerow(IMMANANT_COLUMNS if kind == "immanant" else CHECK_COLUMNS)
    for row in result.rows:
        writer.writerow(row.as_csv())
    return buf.getvalue()
