"""Leading-order G-action on monomials of E_n*/I_k and the exclusion fixpoint.

A monomial is u^s u_{i_1} ... u_{i_d} with floor <= i_j <= n-1 (u_n = 1 is
never stored).  To leading order sigma lowers one index, u_i -> u_{i-1}
with a unit coefficient, and the u^s factor emits u^s u_{n-1} with
coefficient s times a unit.  tau scales a monomial by eta^w, where the
weight w = s + sum(p^i - 1) is taken mod n^2.

A monomial mu is *excluded* when it cannot appear in any fixed element:
either its tau-weight is nonzero, or some controlled emission nu of mu
has no producer other than mu that could still appear.  Controlled
emissions are the index lowerings and, for the bare u^s, the emission
u^s u_{n-1}; the raising term on a monomial that already has indices
sits in m^2 and is not controlled, so it never drives an exclusion.
Nonzero coefficients are never assumed to cancel.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable

from .context import PrimeContext
from .errors import DomainError, PreconditionError


@dataclass(frozen=True, order=True)
class UMonomial:
    s: int
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(self.indices)))

    @property
    def degree(self) -> int:
        return len(self.indices)

    @property
    def t(self) -> int:
        return -2 * self.s

    def replace(self, old: int, new: int | None) -> UMonomial:
        idx = list(self.indices)
        idx.remove(old)
        if new is not None:
            idx.append(new)
        return UMonomial(self.s, tuple(idx))

    def times(self, i: int) -> UMonomial:
        return UMonomial(self.s, self.indices + (i,))

    def __str__(self) -> str:
        return " ".join([f"u^{self.s}"] + [f"u{i}" for i in self.indices])

    def to_json(self) -> dict:
        return {"s": self.s, "indices": list(self.indices)}


def tau_weight(ctx: PrimeContext, mono: UMonomial) -> int:
    nn = ctx.n * ctx.n
    return (mono.s + sum(pow(ctx.p, i, nn) - 1 for i in mono.indices)) % nn


def tau_allowed(ctx: PrimeContext, mono: UMonomial) -> bool:
    return tau_weight(ctx, mono) == 0


def _check(ctx: PrimeContext, floor: int, mono: UMonomial) -> None:
    if not 0 <= floor <= ctx.n:
        raise DomainError(f"floor must lie in 0..{ctx.n}, got {floor}")
    for i in mono.indices:
        if not floor <= i <= ctx.n - 1:
            raise DomainError(f"{mono} is not a nonzero monomial of E/I_{floor}")


def _raising_ok(ctx: PrimeContext, floor: int, s: int) -> bool:
    return s % ctx.p != 0 and ctx.n - 1 >= floor


def lowering_emissions(ctx: PrimeContext, floor: int, mono: UMonomial) -> frozenset[UMonomial]:
    """Leading-order terms of (sigma - 1)(mono) in E/I_floor."""
    _check(ctx, floor, mono)
    out = {mono.replace(i, i - 1) for i in set(mono.indices) if i - 1 >= floor}
    if _raising_ok(ctx, floor, mono.s):
        out.add(mono.times(ctx.n - 1))
    return frozenset(out)


def controlled_emissions(ctx: PrimeContext, floor: int, mono: UMonomial) -> frozenset[UMonomial]:
    """The emissions allowed to drive an exclusion (see module docstring)."""
    ems = lowering_emissions(ctx, floor, mono)
    if mono.degree == 0:
        return ems
    return frozenset(e for e in ems if e.degree == mono.degree)


def producers(ctx: PrimeContext, floor: int, nu: UMonomial, degree_bound: int) -> frozenset[UMonomial]:
    """All mu of degree <= degree_bound with nu among lowering_emissions(mu)."""
    _check(ctx, floor, nu)
    out = set()
    for i in set(nu.indices):
        if i + 1 <= ctx.n - 1:
            out.add(nu.replace(i, i + 1))
    if ctx.n - 1 in nu.indices and _raising_ok(ctx, floor, nu.s):
        # lowering u_n = 1 and the u^s emission are the same term
        out.add(nu.replace(ctx.n - 1, None))
    return frozenset(mu for mu in out if mu.degree <= degree_bound)


def universe(ctx: PrimeContext, floor: int, s: int, degree_bound: int) -> list[UMonomial]:
    if not 0 <= floor <= ctx.n:
        raise DomainError(f"floor must lie in 0..{ctx.n}, got {floor}")
    alive = range(floor, ctx.n)
    return [UMonomial(s, idx) for d in range(degree_bound + 1) for idx in combinations_with_replacement(alive, d)]


@dataclass(frozen=True)
class Witness:
    """Why one monomial is excluded.

    ``kind`` is ``"tau"`` (nonzero weight, excluded a priori) or ``"chain"``
    (``emission`` has no viable producer besides the monomial itself;
    ``producers`` lists the others, all excluded at an earlier ``step``).
    """

    excluded: UMonomial
    kind: str
    step: int
    weight: int | None = None
    emission: UMonomial | None = None
    producers: tuple[UMonomial, ...] = ()

    def to_json(self) -> dict:
        d = {"excluded": str(self.excluded), "kind": self.kind, "step": self.step}
        if self.kind == "tau":
            d["weight"] = self.weight
        else:
            d["emission"] = str(self.emission)
            d["producers"] = [str(m) for m in self.producers]
        return d


@dataclass
class ExclusionResult:
    floor: int
    s: int
    degree_bound: int
    universe: list[UMonomial]
    excluded: dict[UMonomial, Witness]
    retained: list[UMonomial] = field(default_factory=list)

    @property
    def allowed(self) -> list[UMonomial]:
        return [m for m in self.universe if not (m in self.excluded and self.excluded[m].kind == "tau")]

    def chain(self) -> list[Witness]:
        """Non-tau witnesses in the order they were established."""
        return sorted((w for w in self.excluded.values() if w.kind == "chain"), key=lambda w: w.step)

    def chain_for(self, target: UMonomial) -> list[Witness]:
        """The witnesses needed to justify excluding ``target``, in step order."""
        need: dict[UMonomial, Witness] = {}
        stack = [target]
        while stack:
            mono = stack.pop()
            if mono in need or mono not in self.excluded:
                continue
            w = self.excluded[mono]
            need[mono] = w
            stack.extend(w.producers)
        return sorted(need.values(), key=lambda w: (w.step, w.excluded))


def exclusion_fixpoint(
    ctx: PrimeContext,
    floor: int,
    s: int,
    degree_bound: int = 2,
    rng: random.Random | None = None,
) -> ExclusionResult:
    """Least set of monomials closed under the exclusion rule.

    ``rng`` shuffles the worklist; the excluded set does not depend on it.
    """
    if degree_bound < 1:
        raise DomainError(f"degree_bound must be >= 1, got {degree_bound}")
    uni = universe(ctx, floor, s, degree_bound)
    excluded: dict[UMonomial, Witness] = {}
    step = 0
    for mono in uni:
        if not tau_allowed(ctx, mono):
            excluded[mono] = Witness(mono, "tau", step, weight=tau_weight(ctx, mono))
            step += 1

    emissions = {mu: sorted(controlled_emissions(ctx, floor, mu)) for mu in uni}
    prods = {}
    dependents: dict[UMonomial, set[UMonomial]] = {mu: set() for mu in uni}
    for mu, ems in emissions.items():
        for nu in ems:
            if nu not in prods:
                prods[nu] = producers(ctx, floor, nu, degree_bound)
            for other in prods[nu]:
                if other != mu:
                    dependents[other].add(mu)

    order = [mu for mu in uni if mu not in excluded]
    if rng is not None:
        rng.shuffle(order)
    work = deque(order)
    queued = set(order)
    while work:
        mu = work.popleft()
        queued.discard(mu)
        if mu in excluded:
            continue
        for nu in emissions[mu]:
            others = sorted(prods[nu] - {mu})
            if all(o in excluded for o in others):
                excluded[mu] = Witness(mu, "chain", step, emission=nu, producers=tuple(others))
                step += 1
                for dep in sorted(dependents[mu]):
                    if dep not in excluded and dep not in queued:
                        work.append(dep)
                        queued.add(dep)
                break
    retained = [mu for mu in uni if mu not in excluded]
    return ExclusionResult(floor, s, degree_bound, uni, excluded, retained)


def brute_force_producers(
    ctx: PrimeContext, floor: int, nu: UMonomial, pool: Iterable[UMonomial]
) -> set[UMonomial]:
    return {mu for mu in pool if nu in lowering_emissions(ctx, floor, mu)}


def verify_witnesses(ctx: PrimeContext, result: ExclusionResult, witnesses: Iterable[Witness] | None = None) -> list[str]:
    """Re-check witnesses against an exhaustive producer scan; returns problems found."""
    problems = []
    pool = result.universe
    for w in result.excluded.values() if witnesses is None else witnesses:
        mu = w.excluded
        if w.kind == "tau":
            if tau_allowed(ctx, mu):
                problems.append(f"{mu}: tau weight is zero")
            continue
        if w.emission not in controlled_emissions(ctx, result.floor, mu):
            problems.append(f"{mu}: {w.emission} is not a controlled emission")
            continue
        expected = brute_force_producers(ctx, result.floor, w.emission, pool) - {mu}
        if expected != set(w.producers):
            problems.append(f"{mu}: producer list {sorted(map(str, w.producers))} != {sorted(map(str, expected))}")
        for other in w.producers:
            prior = result.excluded.get(other)
            if prior is None or prior.step >= w.step:
                problems.append(f"{mu}: producer {other} was not excluded earlier")
    return problems


def vk_monomial(ctx: PrimeContext, k: int) -> UMonomial:
    """v_k = u^{1-p^k} u_k (for k = n the u_n factor is 1)."""
    return UMonomial(1 - ctx.p**k, (k,) if k < ctx.n else ())


def vk_boundary_result(ctx: PrimeContext, k: int) -> ExclusionResult:
    if not 3 <= k <= ctx.p - 1:
        raise DomainError(f"k must lie in 3..{ctx.p - 1}, got {k}")
    return exclusion_fixpoint(ctx, k - 1, 1 - ctx.p**k, 2)


def vk_boundary_nonzero(ctx: PrimeContext, k: int) -> bool:
    """The connecting map sends v_k to a nonzero class: v_k does not lift to E/I_{k-1}."""
    return vk_monomial(ctx, k) in vk_boundary_result(ctx, k).excluded


def vm_square_monomial(ctx: PrimeContext) -> UMonomial:
    m = ctx.m
    return UMonomial(2 * (1 - ctx.p**m), (m, m))


def vm_square_result(ctx: PrimeContext) -> ExclusionResult:
    if not ctx.theorem_applies:
        raise PreconditionError(f"the v_m^2 obstruction needs p > 5, got p = {ctx.p}")
    return exclusion_fixpoint(ctx, 3, 2 * (1 - ctx.p**ctx.m), 2)


def vm_square_obstructed(ctx: PrimeContext) -> bool:
    """v_m^2 (m = (p+3)/2) has no preimage in H^0(G; E/I_3)."""
    return vm_square_monomial(ctx) in vm_square_result(ctx).excluded


def induction_block(ctx: PrimeContext, j: int) -> set[UMonomial]:
    """{u^s u_i u_j : 2m - j <= i <= j} for s = 2(1 - p^m); j = n gives the degree <= 1 block."""
    s = 2 * (1 - ctx.p**ctx.m)
    if j == ctx.n:
        return {UMonomial(s, (i,)) for i in range(3, ctx.n)} | {UMonomial(s)}
    return {UMonomial(s, (i, j)) for i in range(2 * ctx.m - j, j + 1)}
