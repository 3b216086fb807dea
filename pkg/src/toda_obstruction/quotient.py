"""Vanishing criteria for the quotients E_n*/I_k and for the V(m) homotopy.

Each short exact sequence 0 -> E/I_i --v_i--> E/I_i -> E/I_{i+1} -> 0
shows H^{s,d}(E/I_{i+1}) = 0 once H^{s,d}(E/I_i) and H^{s+1,d-|v_i|}(E/I_i)
vanish.  Unrolling down to E_n* itself gives one term per subset of
{0, ..., k-1}.  The criteria are one-sided: ``True`` proves vanishing,
``False`` only means some term could not be ruled out.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .closed_form import e2_rank, einf_nonzero, zero_line_allowed
from .context import Bidegree, PrimeContext, vi_degree
from .errors import DomainError
from .report import EXCLUDED, FAIL, PASS, CheckReport

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuotientContext:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise DomainError(f"k must be >= 0, got {self.k}")

    @property
    def alive_floor(self) -> int:
        return self.k


@dataclass(frozen=True)
class ReductionTerm:
    index_set: tuple[int, ...]
    target: Bidegree

    @property
    def extra_degree(self) -> int:
        return len(self.index_set)


def _subsets(top: int) -> Iterator[tuple[int, ...]]:
    for r in range(top + 1):
        yield from combinations(range(top), r)


def reduction_terms(ctx: PrimeContext, k: int, s: int, d: int) -> list[ReductionTerm]:
    degs = [vi_degree(ctx, i) for i in range(k)]
    return [
        ReductionTerm(idx, Bidegree(s + len(idx), d - sum(degs[i] for i in idx)))
        for idx in _subsets(k)
    ]


def _term_nonzero(ctx: PrimeContext, b: Bidegree) -> bool:
    if b.s == 0:
        return zero_line_allowed(ctx, b.t)
    return e2_rank(ctx, b.s, b.t) == 1


def quotient_obstructions(ctx: PrimeContext, k: int, s: int, d: int) -> list[ReductionTerm]:
    """Terms of the unrolled long exact sequences that are not known to vanish."""
    if s < 0:
        raise DomainError(f"s must be >= 0, got {s}")
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k >= ctx.p:
        log.info("E_n*/I_%d = 0 for k >= p; vanishing is trivial", k)
        return []
    return [term for term in reduction_terms(ctx, k, s, d) if _term_nonzero(ctx, term.target)]


def quotient_h_vanishes(ctx: PrimeContext, k: int, s: int, d: int) -> bool:
    return not quotient_obstructions(ctx, k, s, d)


def rank_upper_bound(ctx: PrimeContext, k: int, s: int, d: int) -> int:
    """Upper bound on the F_q-rank of H^{s,d}(G; E_n*/I_k), s >= 1."""
    if s < 1:
        raise DomainError("rank bounds need s >= 1; the zero line is opaque")
    return len(quotient_obstructions(ctx, k, s, d))


def cohomology_family_y(ctx: PrimeContext, d: int) -> int | None:
    """y mod n with d = 2pny mod 2pn^2, or None if d is not of that form."""
    if d % ctx.mod_beta:
        return None
    return (d // ctx.mod_beta) % ctx.n


def in_cohomology_family(ctx: PrimeContext, d: int) -> bool:
    y = cohomology_family_y(ctx, d)
    return y is not None and y != 1


def _term_json(t: ReductionTerm) -> dict:
    return {"indexSet": list(t.index_set), "s": t.target.s, "t": t.target.t}


def lemma_cohomology_verify(ctx: PrimeContext) -> CheckReport:
    """H^{1,d} and H^{2,d-2n} of E/I_k vanish for d = 2pny, y != 1 mod n."""
    cases = []
    failed = False
    for y in range(ctx.n):
        d = ctx.mod_beta * y
        if y == 1:
            cases.append({"y": y, "verdict": EXCLUDED})
            continue
        for k in range(ctx.p):
            obs = quotient_obstructions(ctx, k, 1, d)
            cases.append({"y": y, "k": k, "family": "H1", "d": d, "vanishes": not obs,
                          "obstructions": [_term_json(t) for t in obs]})
            failed |= bool(obs)
            if k != ctx.p - 1:
                obs = quotient_obstructions(ctx, k, 2, d - ctx.mod2n)
                cases.append({"y": y, "k": k, "family": "H2", "d": d - ctx.mod2n, "vanishes": not obs,
                              "obstructions": [_term_json(t) for t in obs]})
                failed |= bool(obs)
    return CheckReport("quotient.cohomology", {"prime": ctx.p}, FAIL if failed else PASS, {"cases": cases})


@dataclass(frozen=True)
class HomotopyWitness:
    """A possibly nonzero E_infinity^{s,t} feeding pi_{d-1}(E^{hG} ^ V(m))."""

    index_set: tuple[int, ...]
    s: int
    t: int

    def to_json(self) -> dict:
        return {"k": len(self.index_set), "indexSet": list(self.index_set), "s": self.s, "t": self.t}


def homotopy_witnesses(ctx: PrimeContext, m: int, d: int) -> list[HomotopyWitness]:
    if not 0 <= m < ctx.p - 1:
        raise DomainError(f"m must lie in 0..{ctx.p - 2}, got {m}")
    degs = [vi_degree(ctx, i) for i in range(m + 1)]
    found = []
    for idx in _subsets(m + 1):
        stem = d - 1 - len(idx) - sum(degs[i] for i in idx)
        if zero_line_allowed(ctx, stem):
            found.append(HomotopyWitness(idx, 0, stem))
        for s in range(1, 2 * ctx.n * ctx.n + 1):
            if einf_nonzero(ctx, s, stem + s):
                found.append(HomotopyWitness(idx, s, stem + s))
    return found


def homotopy_vanishes(ctx: PrimeContext, m: int, d: int) -> bool:
    return not homotopy_witnesses(ctx, m, d)


def homotopy_family_d(ctx: PrimeContext, y: int) -> int:
    return ctx.mod2n + ctx.mod_beta + 2 * ctx.p * ctx.p * ctx.n * y


def casework_prediction(ctx: PrimeContext, m: int, y: int) -> set[HomotopyWitness]:
    """Survivors left by the hand analysis of d = 2n + 2pn + 2p^2ny.

    The s = 0 and odd-s cases never survive.  Of the four even-s cases only
    k = 1, i_1 = 1, s = 2 is consistent, and only when y = 0 mod n; it is
    then the class beta at t = 2pn.
    """
    if y % ctx.n or m < 1:
        return set()
    return {HomotopyWitness((1,), 2, ctx.mod_beta)}


def lemma_homotopy_verify(ctx: PrimeContext, m: int) -> CheckReport:
    """pi_{d-1}(E^{hG} ^ V(m)) = 0 for d = 2n + 2pn + 2p^2ny, y != 0 mod n."""
    cases = []
    failed = False
    casework_ok = True
    for y in range(ctx.n):
        d = homotopy_family_d(ctx, y)
        wit = homotopy_witnesses(ctx, m, d)
        if set(wit) != casework_prediction(ctx, m, y):
            casework_ok = False
        if y == 0:
            cases.append({"y": y, "d": d, "verdict": EXCLUDED, "witnesses": [w.to_json() for w in wit]})
            continue
        cases.append({"y": y, "d": d, "vanishes": not wit, "witnesses": [w.to_json() for w in wit]})
        failed |= bool(wit)
    return CheckReport(
        "homotopy.family",
        {"prime": ctx.p, "m": m},
        FAIL if failed or not casework_ok else PASS,
        {"cases": cases, "caseworkAgrees": casework_ok},
    )


def v1_module_check(ctx: PrimeContext, m_range: Iterable[int]) -> CheckReport:
    """Rank bound for A_m = H^{1, 2pn + 2pn^2 m}(E/I_2) is exactly one copy of F_q."""
    rows = []
    failed = False
    for m in m_range:
        d = ctx.mod_beta + ctx.mod_delta * m
        obs = quotient_obstructions(ctx, 2, 1, d)
        rows.append({"m": m, "d": d, "bound": len(obs), "terms": [_term_json(t) for t in obs]})
        failed |= len(obs) != 1
    return CheckReport("v1module.rank", {"prime": ctx.p}, FAIL if failed else PASS, {"rows": rows})
