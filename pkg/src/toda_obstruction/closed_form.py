"""Closed-form descriptions of the E_2 and E_infinity terms for the sphere.

E_2 in positive filtration is F_q[Delta^{+-1}]<alpha>[beta] with
|Delta| = (0, 2pn^2), |alpha| = (1, 2n), |beta| = (2, 2pn).  Every
admissible bidegree carries exactly one monomial, so ranks are 0 or 1.
"""

from __future__ import annotations

from .context import PrimeContext
from .errors import DomainError


def _require_positive(s: int) -> None:
    if s <= 0:
        raise DomainError(f"s must be >= 1 (the zero line is separate), got {s}")


def e2_witness(ctx: PrimeContext, s: int, t: int) -> tuple[int, int, int] | None:
    """The monomial Delta^a alpha^e beta^b spanning E_2^{s,t}, as (a, e, b)."""
    _require_positive(s)
    e = s % 2
    b = (s - e) // 2
    rest = t - e * ctx.mod2n - b * ctx.mod_beta
    if rest % ctx.mod_delta:
        return None
    return (rest // ctx.mod_delta, e, b)


def e2_rank(ctx: PrimeContext, s: int, t: int) -> int:
    return 1 if e2_witness(ctx, s, t) is not None else 0


def zero_line_allowed(ctx: PrimeContext, t: int) -> bool:
    """Necessary condition t = 0 mod 2n for H^{0,t} to be nonzero."""
    return t % ctx.mod2n == 0


def einf_nonzero(ctx: PrimeContext, s: int, t: int) -> bool:
    """Whether E_infinity^{s,t} of the sphere is nonzero, for s >= 1."""
    _require_positive(s)
    p, n = ctx.p, ctx.n
    if s % 2:
        if s > 2 * n - 1:
            return False
        rest = t - ctx.mod2n - (s - 1) * p * n
        if rest % ctx.mod_delta:
            return False
        x = (rest // ctx.mod_delta) % p
        return x != p - 1
    if s > 2 * n * n:
        return False
    return (t - s * p * n) % ctx.mod_period == 0
