"""Acceptance suite: one test per criterion, each with its runtime budget.

A summary line per criterion is printed at the end of the pytest run.
"""

import json
import re
import time
from pathlib import Path

import pytest

from klimm.immanant import (
    delete_dot_check, kl_coefficients, kl_immanant, kl_immanant_avoiding,
    kl_immanant_det,
    monomial_products, qualifies, sjostrand_check,
)
from klimm.kl import golden_table
from klimm.linalg import (
    RatMatrix, det, gen_k_positive, is_k_nonnegative, is_k_positive,
    random_rational_matrix,
)
from klimm.perm import Permutation, all_permutations, avoids
from klimm.region import box_intersection_permutation
from klimm.verify import SweepConfig, run_suite

DATA = Path(__file__).parent / "data"
P = Permutation
SEED = 20240601


class Budget:
    def __init__(self, seconds: float):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start

    @property
    def ok(self) -> bool:
        return self.elapsed < self.seconds

    def __str__(self) -> str:
        return f"{self.elapsed:.3g}s of {self.seconds:g}s"


def _sweep(suite: str, **kwargs):
    return run_suite(SweepConfig(suite, seed=SEED, **kwargs))


def _witnesses(result, limit=3) -> str:
    return "; ".join(f"{r.case} {r.check} {r.detail}".strip()
                     for r in result.failures[:limit]) or "none"


@pytest.mark.criterion(1)
def test_three_by_three_example(criterion):
    with Budget(1e-3) as budget:
        m = RatMatrix([[11, 9, 3], [8, 7, 3], [2, 2, 1]])
        two_pos = is_k_positive(m, 2)
        three_nonneg = is_k_nonnegative(m, 3)
        value = det(m)
    ok = two_pos and not three_nonneg and value == -1 and budget.ok
    criterion.report(ok, f"2-positive={two_pos} 3-nonnegative={three_nonneg} "
                         f"det={value} in {budget}")


@pytest.mark.criterion(2)
def test_2413_expansion_and_positivity(criterion):
    # m_{1,w(1)} ... m_{4,w(4)} with its sign, one entry per displayed monomial
    displayed = {
        "2413": 1, "4213": -1, "3412": -1, "4312": 1,
        "2431": -1, "4231": 1, "3421": 1, "4321": -1,
    }
    v = P([2, 4, 1, 3])
    with Budget(10) as budget:
        coeffs = {str(w): c for w, c in kl_coefficients(v).items()}
        nonpositive = []
        for seed in range(1000):
            products = monomial_products(gen_k_positive(4, 2, f"{SEED}:2413:{seed}"))
            value = sum(c * products[w] for w, c in kl_coefficients(v).items())
            if value <= 0:
                nonpositive.append(seed)
    ok = coeffs == displayed and not nonpositive and budget.ok
    criterion.report(ok, f"8 monomials match={coeffs == displayed}, "
                         f"non-positive samples={nonpositive[:5]} of 1000, {budget}")


@pytest.mark.criterion(3)
def test_formula_agreement(criterion):
    mismatches = []
    count = 0
    with Budget(300) as budget:
        for n in (4, 5):
            for v in all_permutations(n):
                if not qualifies(v):
                    continue
                for j in range(20):
                    m = random_rational_matrix(n, (SEED, "agree", v, j))
                    values = {kl_immanant(v, m), kl_immanant_avoiding(v, m), kl_immanant_det(v, m)}
                    count += 1
                    if len(values) != 1:
                        mismatches.append((str(v), j))
    criterion.report(not mismatches and budget.ok,
                     f"{count} (v, matrix) pairs, mismatches={mismatches[:3]}, {budget}")


@pytest.mark.criterion(4)
def test_full_interval_patterns(criterion):
    # the pattern list exactly as the criterion states it
    stated = ("1324", "24153", "31524", "421653")
    corrected = ("1324", "24153", "31524", "426153")
    stated_bad, corrected_bad = [], []
    with Budget(600) as budget:
        for n in range(1, 7):
            for v in all_permutations(n):
                full = sjostrand_check(v)
                if full != avoids(v, *stated):
                    stated_bad.append(str(v))
                if full != avoids(v, *corrected):
                    corrected_bad.append(str(v))
    criterion.report(
        not stated_bad and budget.ok,
        f"stated list mismatches at {stated_bad}; with 426153 in place of 421653 "
        f"mismatches={corrected_bad}; {budget}")


@pytest.mark.criterion(5)
def test_lewis_carroll(criterion):
    with Budget(30) as budget:
        # 72 matrices for each size 2..8, every fourth with a repeated row
        result = _sweep("lewis-carroll", n_max=8, samples=72)
    identity_rows = [r for r in result.rows if r.check == "lewis-carroll"]
    ok = result.passed and len(identity_rows) >= 500 and budget.ok
    criterion.report(ok, f"{len(identity_rows)} matrices, failures={_witnesses(result)}, {budget}")


@pytest.mark.criterion(6)
def test_young_diagram_signs(criterion):
    with Budget(600) as budget:
        result = _sweep("young-signs", n_max=5, samples=20)
    criterion.report(result.passed and budget.ok,
                     f"{result.checked} determinants, failures={_witnesses(result)}, {budget}")


@pytest.mark.criterion(7)
def test_box_alternation(criterion):
    with Budget(300) as budget:
        result = _sweep("box-alternation", n_max=7, samples=1)
    anti = sum(1 for r in result.rows if r.check.startswith("anti"))
    diag = sum(1 for r in result.rows if r.check.startswith("diag"))
    criterion.report(result.passed and budget.ok,
                     f"{anti} anti and {diag} diag cases, failures={_witnesses(result)}, {budget}")


@pytest.mark.criterion(8)
def test_delete_dot_identity(criterion):
    with Budget(600) as budget:
        result = _sweep("delete-dot", n_max=5, samples=10)
        v = P([6, 2, 7, 8, 5, 3, 1, 4])
        spot = [delete_dot_check(v, i, random_rational_matrix(7, (SEED, "spot", i)))
                for i in (2, 3)]
    ok = result.passed and all(spot) and budget.ok
    criterion.report(ok, f"{result.checked} exhaustive checks, 62785314 at i=2,3: {spot}, "
                         f"failures={_witnesses(result)}, {budget}")


@pytest.mark.criterion(9)
def test_main_theorem(criterion):
    with Budget(1800) as budget:
        result = _sweep("thm-main", n_max=6, samples=200, exhaustive_max=5, v_samples=40)
    perms = {r.v for r in result.rows}
    ok = result.passed and budget.ok
    criterion.report(ok, f"{len(perms)} permutations x 200 matrices, "
                         f"{result.checked} signs, failures={_witnesses(result)}, {budget}")


@pytest.mark.criterion(10)
def test_square_pattern_statements(criterion):
    with Budget(600) as budget:
        result = _sweep("patterns", n_max=7, samples=1)
    criterion.report(result.passed and budget.ok,
                     f"{result.checked} checks, failures={_witnesses(result)}, {budget}")


@pytest.mark.criterion(11)
def test_kl_invariants_and_golden(criterion):
    with Budget(300) as budget:
        result = _sweep("kl-invariants", n_max=5, samples=1)
        golden_ok = True
        for n in (4, 5):
            # raises if the two recursions disagree anywhere
            fresh = golden_table(n)
            stored = json.loads((DATA / f"kl_s{n}.json").read_text())
            golden_ok &= fresh["entries"] == stored["entries"]
    columns = sum(1 for r in result.rows if r.check == "invariants")
    criterion.report(result.passed and golden_ok and budget.ok,
                     f"invariants on {columns} KL columns (S1..S5), golden S4/S5 "
                     f"match={golden_ok}, {budget}")


@pytest.mark.criterion(12)
def test_structural_lemmas(criterion):
    with Budget(900) as budget:
        result = _sweep("structural", n_max=7, samples=1)
        example = box_intersection_permutation(P([3, 4, 7, 2, 1, 6, 5]), 3)
    checks = sorted({re.sub(r" (at )?row \d+$", "", r.check) for r in result.rows})
    ok = result.passed and example == P([5, 2, 1, 4, 3]) and budget.ok
    criterion.report(ok, f"{result.checked} checks ({', '.join(checks)}), "
                         f"3472165 -> {example}, failures={_witnesses(result)}, {budget}")
