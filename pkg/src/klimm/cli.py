"""
Command-line front end.

JSON goes to stdout, logs to stderr.  Exit codes: 0 success, 1 input/output
problems, 2 a violated precondition (pattern witness included), 3 a failed
verification sweep, 4 a matrix generation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Optional, Sequence

from .immanant import (
    METHODS, ImmanantReport, evaluate, qualifies, theorem_k,
)
from .kl import kl_polynomial
from .linalg import (
    GenerationError, RatMatrix, gen_k_positive, gen_totally_positive,
    is_k_positive,
)
from .perm import PatternError, RankError, parse_permutation
from .region import bounding_boxes, lower_interval_graph, render, upper_interval_graph
from .verify import SUITES, SweepConfig, run_suite, to_csv

log = logging.getLogger("klimm")

EXIT_IO = 1
EXIT_PRECONDITION = 2
EXIT_VERIFY = 3
EXIT_GENERATION = 4


def _permutation(text: str):
    try:
        return parse_permutation(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _sign_prediction(v, m: RatMatrix) -> tuple[Optional[str], Optional[str], Optional[int]]:
    k = theorem_k(v)
    if k is None:
        return None, None, None
    if is_k_positive(m, k):
        return "positive", f"largest square k={k} and the matrix is {k}-positive", k
    return None, f"matrix is not {k}-positive", k


def cmd_imm(args) -> int:
    m = RatMatrix.load(args.matrix)
    v = args.v
    prediction, why, k = _sign_prediction(v, m)
    methods = METHODS if args.method == "all" else (args.method,)
    reports = []
    for method in methods:
        if method in ("kl_avoiding_sum", "determinantal") and args.method == "all" \
                and not qualifies(v):
            continue
        reports.append(ImmanantReport(v, method, evaluate(v, m, method),
                                      prediction, why, k))
    if args.method == "all":
        values = {r.value for r in reports}
        _emit({"reports": [r.to_json() for r in reports], "agree": len(values) == 1})
        return 0 if len(values) == 1 else EXIT_VERIFY
    _emit(reports[0].to_json())
    return 0


def cmd_graph(args) -> int:
    v = args.v
    if args.mode == "anti":
        region = upper_interval_graph(v)
    else:
        region = lower_interval_graph(v)
    if args.json:
        _emit(region.to_json())
        return 0
    print(render(region, v))
    if args.boxes:
        for box in bounding_boxes(v, args.mode):
            corners = " ".join(f"({r},{c})" for r, c in box.corners)
            print(f"{box.color:6} rows {box.span[0]}-{box.span[1]} corner {corners}")
    return 0


def cmd_boxes(args) -> int:
    _emit([b.to_json() for b in bounding_boxes(args.v, args.mode)])
    return 0


def cmd_kl(args) -> int:
    poly = kl_polynomial(args.x, args.y)
    _emit({"x": list(args.x), "y": list(args.y), "coeffs": list(poly),
           "polynomial": str(poly), "at_one": poly(1)})
    return 0


def cmd_gen(args) -> int:
    if not 1 <= args.k <= args.n:
        log.error("need 1 <= k <= n, got k=%d n=%d", args.k, args.n)
        return EXIT_PRECONDITION
    if args.k == args.n:
        m = gen_totally_positive(args.n, args.seed)
    else:
        m = gen_k_positive(args.n, args.k, args.seed)
    text = m.dumps()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    config = SweepConfig(args.suite, args.n_max, args.samples, args.seed, args.output,
                         args.jobs, args.exhaustive_max, args.v_samples)
    result = run_suite(config)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(to_csv(result, config))
        log.info("wrote %d rows to %s", result.checked, args.output)
    _emit(result.summary())
    for note in result.notes:
        log.info(note)
    return 0 if result.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klimm",
        description="Kazhdan-Lusztig immanants, Bruhat interval graphs and k-positivity.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("imm", help="evaluate Imm_v on a matrix file")
    p.add_argument("v", type=_permutation, help="e.g. 2413 or 2,4,1,3")
    p.add_argument("--matrix", required=True, help="JSON (ints or 'p/q' strings) or integer CSV")
    p.add_argument("--method", choices=METHODS + ("all",), default="kl_full")
    p.set_defaults(func=cmd_imm)

    p = sub.add_parser("graph", help="ASCII picture of an interval graph")
    p.add_argument("v", type=_permutation)
    p.add_argument("--mode", choices=("anti", "diag"), default="anti",
                   help="anti: graph of [v, w0]; diag: graph of [e, v]")
    p.add_argument("--boxes", action="store_true", help="list bounding boxes")
    p.add_argument("--json", action="store_true", help="print the region as JSON")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("boxes", help="bounding boxes as JSON")
    p.add_argument("v", type=_permutation)
    p.add_argument("--mode", choices=("anti", "diag"), default="anti")
    p.set_defaults(func=cmd_boxes)

    p = sub.add_parser("kl", help="print the KL polynomial P_{x,y}")
    p.add_argument("x", type=_permutation)
    p.add_argument("y", type=_permutation)
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("gen", help="write a k-positive (k < n) or totally positive matrix")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("seed", type=int)
    p.add_argument("--out", help="output file (stdout if omitted)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run a property sweep")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", help="CSV file for per-case rows")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--exhaustive-max", type=int,
                   help="sample permutations above this rank instead of enumerating")
    p.add_argument("--v-samples", type=int, default=50,
                   help="permutations per rank when sampling")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PatternError as exc:
        _emit({"error": "pattern", "message": str(exc), "pattern": list(exc.pattern),
               "witness": list(exc.witness)})
        return EXIT_PRECONDITION
    except RankError as exc:
        log.error("%s", exc)
        return EXIT_PRECONDITION
    except GenerationError as exc:
        log.error("%s", exc)
        return EXIT_GENERATION
    except (OSError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
