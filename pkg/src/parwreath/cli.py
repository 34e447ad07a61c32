"""Command-line frontend.

    parwreath order   --n 2 --m 2 --structure txp --enumerate
    parwreath verify  --n 3 --m 2 --theorem wreath
    parwreath rank    --n 2 --m 2 --structure txp --method lemma1
    parwreath closure --generators sxp --n 2 --m 3 --dump out.txt

Reports go to stdout as JSON (``--format json``, the default) or text;
diagnostics go to stderr.  Exit codes: 0 OK, 1 input error, 2 unsupported
case, 3 budget exceeded, 4 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .enumeration import DEFAULT_LIMIT, closure, dump_elements, dump_word_log
from .errors import BudgetExceededError, ParseError, UnsupportedCaseError
from .fileio import read_generator_set
from .rank import (
    DEFAULT_BUDGET,
    TABLE_LIMIT,
    kernel_obstruction_sweep,
    rank_exhaustive,
    rank_via_lemma1,
)
from .structures import (
    StructureKind,
    degenerate_identity,
    order_formula,
    paper_generators,
    structure_generators,
)

log = logging.getLogger("parwreath")

OK = "OK"
UNSUPPORTED_CASE = "UNSUPPORTED_CASE"
BUDGET_EXCEEDED = "BUDGET_EXCEEDED"
FAILED = "FAILED"
EXIT_CODES = {OK: 0, UNSUPPORTED_CASE: 2, BUDGET_EXCEEDED: 3, FAILED: 4}

# rank values claimed for non-trivial uniform partitions
CLAIMED_RANK = {StructureKind.TXP: 4, StructureKind.SIGMA: 3, StructureKind.GAMMA: 3, StructureKind.SXP: 2}
CLAIMED_RELATIVE = {StructureKind.TXP: 2, StructureKind.SIGMA: 1, StructureKind.GAMMA: 1, StructureKind.SXP: 0}


@dataclass
class Report:
    command: str
    params: dict[str, Any]
    status: str = OK
    checks: list[dict[str, Any]] = field(default_factory=list)
    rank: dict[str, Any] | None = None
    results: dict[str, Any] = field(default_factory=dict)
    message: str | None = None
    elapsed_ms: float = 0.0

    def check(self, name: str, expected: Any, computed: Any) -> bool:
        ok = expected == computed
        self.checks.append({"name": name, "expected": expected, "computed": computed, "pass": ok})
        return ok

    def finish(self) -> None:
        if self.status == OK and not all(c["pass"] for c in self.checks):
            self.status = FAILED

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "command": self.command,
            "params": self.params,
            "status": self.status,
            "checks": self.checks,
        }
        if self.rank is not None:
            out["rank"] = self.rank
        if self.results:
            out["results"] = self.results
        if self.message is not None:
            out["message"] = self.message
        out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.status}"]
        for key, val in self.params.items():
            lines.append(f"  {key} = {val}")
        if self.message:
            lines.append(f"  note: {self.message}")
        for key, val in self.results.items():
            lines.append(f"  {key}: {val}")
        for c in self.checks:
            mark = "PASS" if c["pass"] else "FAIL"
            lines.append(f"  [{mark}] {c['name']}: expected {c['expected']}, computed {c['computed']}")
        if self.rank is not None:
            r = self.rank
            lines.append(f"  rank = {r['value']} ({r['method']})")
            for w in r["witness"]:
                lines.append(f"    witness: {w}")
            cert = r["certificate"]
            lines.append(f"  certificate: {cert['search_space']}")
            lines.append(f"    rejected {cert['rejected_count']} (pruned {cert['pruned_count']})")
        lines.append(f"  elapsed: {self.elapsed_ms:.1f} ms")
        return "\n".join(lines)


def _unsupported(report: Report, n: int, m: int) -> bool:
    if n >= 2 and m >= 2:
        return False
    report.status = UNSUPPORTED_CASE
    ids = [degenerate_identity(n, m, kind) for kind in StructureKind]
    report.results["degenerate_identities"] = ids
    report.message = (
        f"n={n}, m={m} gives a trivial partition; the rank results need a non-trivial "
        f"uniform partition ({'; '.join(ids)})"
    )
    return True


def _enumerate(kind: StructureKind, n: int, m: int, args) -> Any:
    res = closure(structure_generators(n, m, kind), limit=args.limit, threads=args.threads)
    if not res.complete:
        raise BudgetExceededError(
            f"{kind.label} at n={n}, m={m} has more than {args.limit} elements (raise --limit)",
            partial={"enumerated": res.order},
        )
    return res


def cmd_order(args) -> Report:
    kind = StructureKind.parse(args.structure)
    report = Report("order", {"n": args.n, "m": args.m, "structure": kind.value, "enumerate": args.enumerate})
    formula = order_formula(args.n, args.m, kind)
    report.results["formula"] = formula
    if args.enumerate:
        report.params["limit"] = args.limit
        res = _enumerate(kind, args.n, args.m, args)
        report.results["enumerated"] = res.order
        report.results["equal"] = res.order == formula
        report.check("enumerated order equals formula", formula, res.order)
    return report


def _verify_wreath(report: Report, n: int, m: int, args) -> None:
    gens = paper_generators(n, m, StructureKind.SXP)
    res = closure(gens, limit=args.limit, threads=args.threads)
    if not res.complete:
        raise BudgetExceededError(f"<x, y> exceeds {args.limit} elements", partial={"enumerated": res.order})
    parity = "n or m odd" if (n % 2 or m % 2) else "n and m even"
    report.check(f"|<x, y>| = (n!)^m m! ({parity})", order_formula(n, m, StructureKind.SXP), res.order)


def _verify_lemma2(report: Report, n: int, m: int, args) -> None:
    # <x, y> = S(X,P) is checked by the wreath theorem, so x, y stand in for S(X,P)
    for kind, extra in ((StructureKind.SIGMA, "alpha"), (StructureKind.GAMMA, "beta"),
                        (StructureKind.TXP, "alpha, beta")):
        res = closure(paper_generators(n, m, kind), limit=args.limit, threads=args.threads)
        if not res.complete:
            raise BudgetExceededError(f"{kind.label} exceeds {args.limit} elements", partial={"enumerated": res.order})
        report.check(f"|<S(X,P) + {extra}>| = |{kind.label}|", order_formula(n, m, kind), res.order)


def _verify_kernel(report: Report, n: int, m: int, args) -> None:
    sweep = kernel_obstruction_sweep(n, m, StructureKind.TXP, limit=min(args.limit, TABLE_LIMIT))
    report.check("single elements gamma with <S(X,P) + gamma> = T(X,P)", 0, sweep.successes)
    sanity = kernel_obstruction_sweep(n, m, StructureKind.SIGMA, limit=min(args.limit, TABLE_LIMIT))
    report.check("Sigma(X,P) is reached by some single gamma", True, sanity.successes > 0)


def _verify_main(report: Report, n: int, m: int, args) -> None:
    for kind in (StructureKind.TXP, StructureKind.SIGMA, StructureKind.GAMMA):
        res = _enumerate(kind, n, m, args)
        rep = rank_via_lemma1(res, args.max_k, threads=args.threads, budget=args.budget)
        group_part, rel_part = rep.parts
        report.check(f"rank {kind.label}", CLAIMED_RANK[kind], rep.value)
        report.check(f"rank({kind.label} : S(X,P))", CLAIMED_RELATIVE[kind], rel_part.value)
        report.check(f"rank S(X,P) inside {kind.label}", 2, group_part.value)


_THEOREMS: dict[str, Callable] = {
    "wreath": _verify_wreath,
    "lemma2": _verify_lemma2,
    "kernel": _verify_kernel,
    "main": _verify_main,
}


def cmd_verify(args) -> Report:
    report = Report("verify", {"n": args.n, "m": args.m, "theorem": args.theorem,
                               "limit": args.limit, "max_k": args.max_k})
    if _unsupported(report, args.n, args.m):
        return report
    names = list(_THEOREMS) if args.theorem == "all" else [args.theorem]
    for name in names:
        _THEOREMS[name](report, args.n, args.m, args)
    return report


def cmd_rank(args) -> Report:
    kind = StructureKind.parse(args.structure)
    report = Report("rank", {"n": args.n, "m": args.m, "structure": kind.value, "method": args.method,
                             "max_k": args.max_k, "prune_units": args.prune_units})
    res = _enumerate(kind, args.n, args.m, args)
    if args.method == "lemma1":
        rep = rank_via_lemma1(res, args.max_k, threads=args.threads, budget=args.budget)
    else:
        rep = rank_exhaustive(res, args.max_k, prune_units=args.prune_units,
                              threads=args.threads, budget=args.budget)
    rep.structure = kind.value
    report.results["order"] = res.order
    payload = rep.to_dict()
    report.rank = {
        "value": payload["value"],
        "method": payload["method"],
        "witness": payload["witness"],
        "certificate": payload["certificate"],
        "exceeds_max_k": payload["exceeds_max_k"],
    }
    if args.n >= 2 and args.m >= 2:
        report.check(f"rank {kind.label}", CLAIMED_RANK[kind], rep.value)
    else:
        report.message = "trivial partition: rank computed, no published value to compare against"
    return report


def cmd_closure(args) -> Report:
    if args.input:
        gens = read_generator_set(args.input)
        params = {"input": args.input}
    else:
        if args.n is None or args.m is None:
            raise ParseError("--generators needs --n and --m")
        kind = StructureKind.parse(args.generators)
        gens = structure_generators(args.n, args.m, kind)
        params = {"generators": kind.value, "n": args.n, "m": args.m}
    params["limit"] = args.limit
    report = Report("closure", params)
    res = closure(gens, limit=args.limit, threads=args.threads, word_log=bool(args.dump_words))
    report.results.update(degree=res.degree, generator_count=res.generator_count, order=res.order,
                          complete=res.complete)
    if not res.complete:
        report.status = BUDGET_EXCEEDED
        report.message = f"stopped after {res.order} elements (limit {args.limit})"
    if args.dump:
        dump_elements(res, args.dump)
    if args.dump_words:
        dump_word_log(res, args.dump_words)
    return report


def _positive_int(value: str) -> int:
    try:
        n = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected integer, got: {value!r}") from e
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got: {n}")
    return n


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("PARWREATH_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--threads", type=_positive_int, default=_default_threads())
    common.add_argument("--limit", type=_positive_int, default=DEFAULT_LIMIT,
                        help="closure element limit (default %(default)s)")
    common.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET,
                        help="closure-call budget for rank searches (default %(default)s)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="parwreath", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    structures = [k.value for k in StructureKind]

    p = sub.add_parser("order", parents=[common], help="order of a partition monoid")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--structure", choices=structures, required=True)
    p.add_argument("--enumerate", action="store_true", help="cross-check by closure")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("verify", parents=[common], help="verify the rank results at (n, m)")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--theorem", choices=("all",) + tuple(_THEOREMS), default="all")
    p.add_argument("--max-k", type=_positive_int, default=4)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rank", parents=[common], help="rank of a partition monoid")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--structure", choices=structures, required=True)
    p.add_argument("--max-k", type=_positive_int, default=4)
    p.add_argument("--method", choices=("exhaustive", "lemma1"), default="lemma1")
    p.add_argument("--prune-units", action="store_true",
                   help="skip subsets whose units do not generate the unit group")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("closure", parents=[common], help="enumerate a generated monoid")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="FILE")
    src.add_argument("--generators", choices=structures)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--m", type=_positive_int)
    p.add_argument("--dump", metavar="FILE")
    p.add_argument("--dump-words", metavar="FILE")
    p.set_defaults(func=cmd_closure)
    return parser


def _emit(report: Report, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (ParseError, OSError) as exc:
        print(f"parwreath: {exc}", file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        report = Report(args.command, {k: v for k, v in vars(args).items()
                                       if k in ("n", "m", "structure", "theorem", "limit", "budget")})
        report.status = BUDGET_EXCEEDED
        report.message = str(exc)
        if isinstance(exc.partial, dict):
            report.results.update(exc.partial)
        elif exc.partial is not None:
            report.results["partial_certificate"] = exc.partial.to_dict()
    except UnsupportedCaseError as exc:
        report = Report(args.command, {"n": getattr(args, "n", None), "m": getattr(args, "m", None)})
        report.status = UNSUPPORTED_CASE
        report.message = str(exc)
    report.finish()
    report.elapsed_ms = (time.perf_counter() - start) * 1000.0
    _emit(report, args.format)
    return EXIT_CODES[report.status]


if __name__ == "__main__":
    sys.exit(main())
