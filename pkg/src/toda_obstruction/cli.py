"""Command-line front end.

Exit codes: 0 when every executed check passes, 1 when any check fails,
2 on usage errors (bad flags, invalid prime, windows or parameters the
operation is not defined on, and the p <= 5 refusal).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .context import make_context
from .engine import Window, compare_einfinity, run_to_einfinity
from .errors import ArtifactError
from .monomials import UMonomial, exclusion_fixpoint, verify_witnesses
from .pipeline import run_theorem_pipeline
from .quotient import lemma_cohomology_verify, lemma_homotopy_verify
from .report import FAIL, PASS, CheckReport, emit_report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageExit(f"{self.prog}: error: {message}")


class _UsageExit(Exception):
    pass


@dataclass
class Config:
    command: str
    prime: int
    json: bool = False
    out: str | None = None
    options: dict = field(default_factory=dict)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toda-obstruction", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--prime", type=int, required=True)
        p.add_argument("--json", action="store_true", help="emit JSON instead of a text table")
        p.add_argument("--out", help="write the report to FILE instead of stdout")
        return p

    common(sub.add_parser("verify", help="run the full obstruction pipeline"))
    einf = common(sub.add_parser("einf", help="dump the E-infinity page of a window"))
    einf.add_argument("--smax", type=int, required=True)
    einf.add_argument("--tmax", type=int, required=True)
    einf.add_argument("--tmin", type=int, default=0)
    common(sub.add_parser("lemma31", help="cohomology vanishing for the quotients E/I_k"))
    l32 = common(sub.add_parser("lemma32", help="homotopy vanishing for V(m)"))
    l32.add_argument("--m", type=int, required=True)
    ex = common(sub.add_parser("exclude", help="run the exclusion fixpoint with witness chains"))
    ex.add_argument("--floor", type=int, required=True)
    ex.add_argument("--uexp", type=int, required=True)
    ex.add_argument("--degree", type=int, default=2)
    return parser


def parse_args(argv: list[str]) -> Config:
    ns = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(ns).items() if k not in ("command", "prime", "json", "out")}
    return Config(ns.command, ns.prime, ns.json, ns.out, opts)


def _exclude_report(ctx, floor: int, s: int, degree: int) -> CheckReport:
    res = exclusion_fixpoint(ctx, floor, s, degree)
    problems = verify_witnesses(ctx, res)
    return CheckReport(
        "exclude",
        {"prime": ctx.p, "floor": floor, "uexp": s, "degree": degree},
        PASS if not problems else FAIL,
        {
            "chain": [w.to_json() for w in res.chain()],
            "tauForbidden": [str(w.excluded) for w in res.excluded.values() if w.kind == "tau"],
            "retained": [str(m) for m in res.retained],
            "chainProblems": problems,
        },
    )


def _write(cfg: Config, data: bytes) -> None:
    if cfg.out:
        with open(cfg.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def run(cfg: Config) -> int:
    ctx = make_context(cfg.prime)
    fmt = "json" if cfg.json else "text"
    o = cfg.options
    if cfg.command == "verify":
        verdict = run_theorem_pipeline(ctx)
        _write(cfg, emit_report(verdict, fmt))
        return 0 if verdict.verdict == PASS else 1
    if cfg.command == "einf":
        window = Window(o["smax"], o["tmin"], o["tmax"])
        page = run_to_einfinity(ctx, window)
        rep = compare_einfinity(ctx, window)
        _write(cfg, emit_report(rep, "json") if cfg.json else page.dump(ctx).encode())
        print(f"einf.compare: {rep.verdict} ({len(rep.witnesses['mismatches'])} mismatches)", file=sys.stderr)
        return 0 if rep.passed else 1
    if cfg.command == "lemma31":
        reports = [lemma_cohomology_verify(ctx)]
    elif cfg.command == "lemma32":
        reports = [lemma_homotopy_verify(ctx, o["m"])]
    else:
        reports = [_exclude_report(ctx, o["floor"], o["uexp"], o["degree"])]
    for rep in reports:
        _write(cfg, emit_report(rep, fmt))
    return 0 if all(r.passed for r in reports) else 1


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except _UsageExit as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return run(cfg)
    except ArtifactError as exc:
        print(f"toda-obstruction: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
