"""Orchestration of every finite check behind the nonexistence of V((p+3)/2)."""

from __future__ import annotations

from typing import Callable

from ._parallel import pmap
from .context import PrimeContext, delta_degree_check, step5_in_kernel, vi_degree
from .engine import Window, compare_einfinity
from .errors import RefusalError
from .monomials import (
    ExclusionResult,
    UMonomial,
    induction_block,
    verify_witnesses,
    vk_boundary_result,
    vk_monomial,
    vm_square_monomial,
    vm_square_result,
)
from .quotient import (
    homotopy_witnesses,
    in_cohomology_family,
    lemma_cohomology_verify,
    lemma_homotopy_verify,
    quotient_obstructions,
    v1_module_check,
)
from .report import CONCLUSION, FAIL, PASS, CheckReport, PipelineVerdict, timed


def full_period_window(ctx: PrimeContext) -> Window:
    return Window(2 * ctx.n * ctx.n + 2, 0, ctx.mod_period)


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def _exclusion_payload(ctx: PrimeContext, result: ExclusionResult, target: UMonomial) -> dict:
    chain = result.chain_for(target)
    problems = verify_witnesses(ctx, result, chain)
    return {
        "target": str(target),
        "excluded": target in result.excluded,
        "chain": [w.to_json() for w in chain],
        "chainProblems": problems,
    }


def step1_report(ctx: PrimeContext, k: int) -> CheckReport:
    res = vk_boundary_result(ctx, k)
    payload = _exclusion_payload(ctx, res, vk_monomial(ctx, k))
    ok = payload["excluded"] and not payload["chainProblems"]
    return CheckReport("vk.step1", {"prime": ctx.p, "k": k, "floor": k - 1}, _verdict(ok), payload)


def _vanishing_rows(ctx: PrimeContext, instances: list[tuple[int, int, int]], family_d: Callable[[int, int], int]):
    rows = []
    ok = True
    for m, s, d in instances:
        obs = quotient_obstructions(ctx, m, s, d)
        hyp = in_cohomology_family(ctx, family_d(m, d)) and (s == 1 or m != ctx.p - 1)
        rows.append({
            "quotientK": m,
            "s": s,
            "d": d,
            "vanishes": not obs,
            "inHypothesisFamily": hyp,
            "obstructions": [{"indexSet": list(t.index_set), "s": t.target.s, "t": t.target.t} for t in obs],
        })
        ok &= not obs
    return rows, ok


def step2_report(ctx: PrimeContext, k: int) -> CheckReport:
    v = lambda i: vi_degree(ctx, i)  # noqa: E731
    inst = [(m, 2, v(k) - v(k - 1) - v(m)) for m in range(2, k - 1)]
    rows, ok = _vanishing_rows(ctx, inst, lambda m, d: d + ctx.mod2n)
    return CheckReport("vk.step2", {"prime": ctx.p, "k": k}, _verdict(ok), {"instances": rows})


def step3_report(ctx: PrimeContext, k: int) -> CheckReport:
    degree_ok = delta_degree_check(ctx, k)
    base = vk_boundary_result(ctx, 3)
    payload = _exclusion_payload(ctx, base, vk_monomial(ctx, 3))
    payload["degreeIdentity"] = degree_ok
    payload["boundaryDegreeModPeriod"] = (vi_degree(ctx, k) - vi_degree(ctx, k - 1)) % ctx.mod_period
    ok = degree_ok and payload["excluded"] and not payload["chainProblems"]
    return CheckReport("vk.step3", {"prime": ctx.p, "k": k}, _verdict(ok), payload)


def step4_report(ctx: PrimeContext, k: int) -> CheckReport:
    inst = [(m, 1, vi_degree(ctx, k) - vi_degree(ctx, m)) for m in range(0, k - 1)]
    rows, ok = _vanishing_rows(ctx, inst, lambda m, d: d)
    return CheckReport("vk.step4", {"prime": ctx.p, "k": k}, _verdict(ok), {"instances": rows})


def step5_report(ctx: PrimeContext, k: int) -> CheckReport:
    ok = step5_in_kernel(ctx, k)
    return CheckReport(
        "vk.step5",
        {"prime": ctx.p, "k": k},
        _verdict(ok),
        {"degree": vi_degree(ctx, k), "degreeModDelta": vi_degree(ctx, k) % ctx.mod_delta},
    )


def _homotopy_report(check_id: str, ctx: PrimeContext, params: dict, m: int, d: int) -> CheckReport:
    wit = homotopy_witnesses(ctx, m, d)
    return CheckReport(
        check_id,
        {"prime": ctx.p, **params, "quotientM": m, "d": d},
        _verdict(not wit),
        {"witnesses": [w.to_json() for w in wit]},
    )


def step_homotopy_report(ctx: PrimeContext, k: int) -> CheckReport:
    return _homotopy_report("vk.homotopy", ctx, {"k": k}, k - 2, vi_degree(ctx, k))


def obstruction_report(ctx: PrimeContext) -> CheckReport:
    res = vm_square_result(ctx)
    payload = _exclusion_payload(ctx, res, vm_square_monomial(ctx))
    blocks = {j: induction_block(ctx, j) for j in range(ctx.m, ctx.n + 1)}
    payload["blocksExcluded"] = {str(j): b <= set(res.excluded) for j, b in blocks.items()}
    payload["excludedSet"] = [str(mu) for mu in sorted(res.excluded)]
    payload["retainedSet"] = [str(mu) for mu in res.retained]
    ok = payload["excluded"] and not payload["chainProblems"]
    return CheckReport("vmsquare.obstruction", {"prime": ctx.p, "m": ctx.m, "floor": 3}, _verdict(ok), payload)


def square_homotopy_report(ctx: PrimeContext, k: int) -> CheckReport:
    d = 2 * vi_degree(ctx, ctx.m) - vi_degree(ctx, k)
    return _homotopy_report("vmsquare.homotopy", ctx, {"k": k}, k - 1, d)


def _timed(job: Callable[[], CheckReport]) -> CheckReport:
    with timed() as ms:
        rep = job()
    rep.duration_ms = ms[0]
    return rep


def run_theorem_pipeline(ctx: PrimeContext, threads: int | None = None) -> PipelineVerdict:
    if not ctx.theorem_applies:
        raise RefusalError(f"the nonexistence theorem needs p > 5; refusing to claim a verdict at p = {ctx.p}")

    einf = _timed(lambda: compare_einfinity(ctx, full_period_window(ctx), threads))
    if not einf.passed:
        return PipelineVerdict(ctx.p, [einf], None)

    jobs: list[Callable[[], CheckReport]] = [lambda: lemma_cohomology_verify(ctx)]
    jobs += [lambda m=m: lemma_homotopy_verify(ctx, m) for m in range(ctx.p - 1)]
    for k in range(4, ctx.p):
        for make in (step1_report, step2_report, step3_report, step4_report, step5_report, step_homotopy_report):
            jobs.append(lambda make=make, k=k: make(ctx, k))
    jobs.append(lambda: v1_module_check(ctx, range(ctx.p)))
    jobs.append(lambda: obstruction_report(ctx))
    jobs += [lambda k=k: square_homotopy_report(ctx, k) for k in range(3, ctx.m)]

    reports = [einf] + pmap(_timed, jobs, threads)
    reports.sort(key=CheckReport.sort_key)
    ok = all(r.passed for r in reports)
    return PipelineVerdict(ctx.p, reports, CONCLUSION if ok else None)
