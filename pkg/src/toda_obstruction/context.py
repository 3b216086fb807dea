"""The prime, its derived moduli, and elementary degree identities."""

from __future__ import annotations

from dataclasses import dataclass

from sympy import isprime

from .errors import DomainError, InvalidPrimeError


@dataclass(frozen=True)
class Bidegree:
    s: int
    t: int

    def __post_init__(self):
        if self.s < 0:
            raise DomainError(f"cohomological degree must be >= 0, got {self.s}")

    @property
    def stem(self) -> int:
        return self.t - self.s


@dataclass(frozen=True)
class PrimeContext:
    """An odd prime p >= 5 with n = p - 1 and the moduli built from it.

    ``mod_beta`` is |beta| = 2pn, ``mod_delta`` is |Delta| = 2pn^2 and
    ``mod_period`` = 2p^2n^2 is the period of the E-infinity pattern.
    """

    p: int
    n: int
    mod2n: int
    mod_beta: int
    mod_delta: int
    mod_period: int
    theorem_applies: bool

    @property
    def m(self) -> int:
        """The index (p + 3) / 2 of the Smith-Toda complex shown not to exist."""
        return (self.p + 3) // 2


def make_context(p: int) -> PrimeContext:
    if not isinstance(p, int) or isinstance(p, bool):
        raise InvalidPrimeError(f"prime must be an integer, got {p!r}")
    if p < 5 or not isprime(p):
        raise InvalidPrimeError(f"{p} is not a prime >= 5")
    n = p - 1
    return PrimeContext(
        p=p,
        n=n,
        mod2n=2 * n,
        mod_beta=2 * p * n,
        mod_delta=2 * p * n * n,
        mod_period=2 * p * p * n * n,
        theorem_applies=p > 5,
    )


def vi_degree(ctx: PrimeContext, i: int) -> int:
    """Internal degree 2(p^i - 1) of the Hazewinkel generator v_i."""
    if i < 0:
        raise DomainError(f"generator index must be >= 0, got {i}")
    return 2 * (ctx.p**i - 1)


def delta_degree_check(ctx: PrimeContext, k: int) -> bool:
    """Whether |v_k| - |v_{k-1}| is congruent to 2pn + 2pn^2 mod 2p^2n^2."""
    if not 3 <= k <= ctx.p - 1:
        raise DomainError(f"k must lie in 3..{ctx.p - 1}, got {k}")
    diff = vi_degree(ctx, k) - vi_degree(ctx, k - 1)
    return (diff - ctx.mod_beta - ctx.mod_delta) % ctx.mod_period == 0


def step5_in_kernel(ctx: PrimeContext, k: int) -> bool:
    # H^{0,|v_k|} misses the F_q[Delta^{+-1}] summand, so it lies in K.
    if not 1 <= k <= ctx.p - 1:
        raise DomainError(f"k must lie in 1..{ctx.p - 1}, got {k}")
    return vi_degree(ctx, k) % ctx.mod_delta != 0
