"""Report data model and serialization.

JSON documents use the ``toda-obstruction/1`` schema.  Timings are kept on
the in-memory objects but left out of serialized output unless asked for,
so that repeated runs produce byte-identical files.
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator

from .errors import UsageError

SCHEMA = "toda-obstruction/1"
CONCLUSION = (
    "V((p+3)/2) does not exist; V((p+1)/2) is not a ring spectrum"
    " - obstruction computations verified"
)

PASS = "pass"
FAIL = "fail"
EXCLUDED = "hypothesis-excluded"
INCONCLUSIVE = "inconclusive"
VERDICTS = (PASS, FAIL, EXCLUDED, INCONCLUSIVE)


def _canonical(value: Any) -> Any:
    # Tuples become lists, keys become strings: the form JSON gives back.
    return json.loads(json.dumps(value, sort_keys=True))


@dataclass
class CheckReport:
    check_id: str
    params: dict[str, Any]
    verdict: str
    witnesses: dict[str, Any] = field(default_factory=dict)
    duration_ms: int = 0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        self.params = _canonical(self.params)
        self.witnesses = _canonical(self.witnesses)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def sort_key(self):
        def rank(v):
            return (0, v, "") if isinstance(v, int) else (1, 0, json.dumps(v, sort_keys=True))

        return (self.check_id, tuple((k, rank(self.params[k])) for k in sorted(self.params)))

    def to_dict(self, include_timings: bool = False) -> dict[str, Any]:
        d = {
            "checkId": self.check_id,
            "params": self.params,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
        }
        if include_timings:
            d["durationMs"] = self.duration_ms
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> CheckReport:
        return cls(
            check_id=d["checkId"],
            params=d["params"],
            verdict=d["verdict"],
            witnesses=d.get("witnesses", {}),
            duration_ms=d.get("durationMs", 0),
        )


@dataclass
class PipelineVerdict:
    prime: int
    checks: list[CheckReport]
    conclusion: str | None

    @property
    def verdict(self) -> str:
        return PASS if self.checks and all(c.passed for c in self.checks) else FAIL

    def _select(self, prefix: str) -> list[CheckReport]:
        return [c for c in self.checks if c.check_id.startswith(prefix)]

    @property
    def vk_permanent_checks(self) -> dict[int, list[CheckReport]]:
        by_k: dict[int, list[CheckReport]] = {}
        for c in self._select("vk."):
            by_k.setdefault(c.params["k"], []).append(c)
        return by_k

    @property
    def vm_square_check(self) -> list[CheckReport]:
        return self._select("vmsquare.")

    @property
    def lemma_reports(self) -> list[CheckReport]:
        return self._select("quotient.") + self._select("homotopy.")

    def to_dict(self, include_timings: bool = False) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "prime": self.prime,
            "verdict": self.verdict,
            "conclusion": self.conclusion,
            "checks": [c.to_dict(include_timings) for c in self.checks],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PipelineVerdict:
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        return cls(
            prime=d["prime"],
            checks=[CheckReport.from_dict(c) for c in d["checks"]],
            conclusion=d["conclusion"],
        )


def _fmt_params(params: dict[str, Any]) -> str:
    return " ".join(f"{k}={params[k]}" for k in sorted(params))


def _text(v: PipelineVerdict | CheckReport) -> str:
    rows = v.checks if isinstance(v, PipelineVerdict) else [v]
    id_w = max([len("check")] + [len(r.check_id) for r in rows])
    par_w = max([len("params")] + [len(_fmt_params(r.params)) for r in rows])
    lines = [f"{'check':<{id_w}}  {'params':<{par_w}}  verdict"]
    lines.append(f"{'-' * id_w}  {'-' * par_w}  -------")
    for r in rows:
        lines.append(f"{r.check_id:<{id_w}}  {_fmt_params(r.params):<{par_w}}  {r.verdict}")
    if isinstance(v, PipelineVerdict):
        lines.append("")
        lines.append(f"prime: {v.prime}")
        lines.append(f"verdict: {v.verdict}")
        lines.append(f"conclusion: {v.conclusion or '(not asserted)'}")
    return "\n".join(lines) + "\n"


def emit_report(
    v: PipelineVerdict | CheckReport, fmt: str = "text", include_timings: bool = False
) -> bytes:
    """Serialize a verdict or a single report as UTF-8 bytes with LF endings."""
    if fmt == "json":
        if isinstance(v, PipelineVerdict):
            doc = v.to_dict(include_timings)
        else:
            doc = {"schema": SCHEMA, "checks": [v.to_dict(include_timings)]}
        return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "text":
        return _text(v).encode()
    raise UsageError(f"unknown report format {fmt!r} (expected text or json)")


@contextmanager
def timed() -> Iterator[list[int]]:
    """Yield a one-element list that receives the elapsed milliseconds."""
    box = [0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = int((time.perf_counter() - start) * 1000)
