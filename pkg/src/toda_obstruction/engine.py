"""Finite-window model of the spectral sequence H^*(G; E_n*) => pi_* E_n^{hG}.

Classes are monomials Delta^a alpha^e beta^b with a coefficient mod p.
Only two differentials occur: d_{2p-1}, determined by d(Delta) =
alpha beta^{p-1} and the Leibniz rule, and d_{2n^2+1}, determined by
d(Delta^{p-1} alpha) = beta^{n^2+1} and multiplicativity.  The zero-line
summand K is carried as opaque permanent markers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._parallel import pmap
from .closed_form import einf_nonzero
from .context import Bidegree, PrimeContext
from .errors import BoundaryEffectsError, DomainError, PreconditionError
from .report import FAIL, PASS, CheckReport

ALIVE = "alive"
SUPPORTS = "supports"
KILLED = "killed"

Key = tuple[int, int, int]


@dataclass(frozen=True, order=True)
class SSClass:
    a: int
    e: int = 0
    b: int = 0
    coeff: int = 1

    def __post_init__(self):
        if self.e not in (0, 1):
            raise DomainError(f"alpha exponent must be 0 or 1, got {self.e}")
        if self.b < 0:
            raise DomainError(f"beta exponent must be >= 0, got {self.b}")
        if self.coeff == 0:
            raise DomainError("coefficient must be a unit mod p")

    @property
    def key(self) -> Key:
        return (self.a, self.e, self.b)

    @property
    def s(self) -> int:
        return self.e + 2 * self.b

    def t(self, ctx: PrimeContext) -> int:
        return ctx.mod_delta * self.a + ctx.mod2n * self.e + ctx.mod_beta * self.b

    def bidegree(self, ctx: PrimeContext) -> Bidegree:
        return Bidegree(self.s, self.t(ctx))

    def __str__(self) -> str:
        parts = []
        if self.coeff != 1:
            parts.append(str(self.coeff))
        if self.a:
            parts.append("D" if self.a == 1 else f"D^{self.a}")
        if self.e:
            parts.append("a")
        if self.b:
            parts.append("b" if self.b == 1 else f"b^{self.b}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class Window:
    """Bidegrees 0 <= s <= s_max, t_min <= t < t_max."""

    s_max: int
    t_min: int
    t_max: int

    def __post_init__(self):
        if self.s_max < 0 or self.t_max <= self.t_min:
            raise DomainError(f"empty window {self}")

    def contains(self, s: int, t: int) -> bool:
        return 0 <= s <= self.s_max and self.t_min <= t < self.t_max

    @property
    def width(self) -> int:
        return self.t_max - self.t_min


@dataclass(frozen=True)
class Status:
    kind: str
    r: int | None = None
    partner: Key | None = None
    boundary: bool = False

    def render(self) -> str:
        if self.kind == ALIVE:
            return ALIVE
        a, e, b = self.partner
        tag = f"{self.kind}:{self.r}:{a},{e},{b}"
        return tag + ":boundary" if self.boundary else tag


@dataclass(frozen=True)
class Page:
    r: float
    window: Window
    entries: dict[Key, tuple[SSClass, Status]]
    kernel_markers: tuple[int, ...] = field(default=())

    def status(self, key: Key) -> Status:
        return self.entries[key][1]

    def alive_bidegrees(self, ctx: PrimeContext) -> set[tuple[int, int]]:
        return {(c.s, c.t(ctx)) for c, st in self.entries.values() if st.kind == ALIVE}

    def dump(self, ctx: PrimeContext) -> str:
        """Line-oriented ``s t a e b coeff status`` text, K markers as ``0 t K - - - permanent``."""
        rows = []
        for c, st in self.entries.values():
            rows.append(((c.s, c.t(ctx), 0), f"{c.s} {c.t(ctx)} {c.a} {c.e} {c.b} {c.coeff} {st.render()}"))
        for t in self.kernel_markers:
            rows.append(((0, t, 1), f"0 {t} K - - - permanent"))
        rows.sort()
        return "".join(line + "\n" for _, line in rows)


def first_r(ctx: PrimeContext) -> int:
    return 2 * ctx.p - 1


def second_r(ctx: PrimeContext) -> int:
    return 2 * ctx.n * ctx.n + 1


def d_first(ctx: PrimeContext, c: SSClass) -> SSClass | None:
    """d_{2p-1}: Delta^a beta^b -> a Delta^{a-1} alpha beta^{b+p-1}; zero on alpha-multiples."""
    if c.e == 1:
        return None
    coeff = (c.a * c.coeff) % ctx.p
    if coeff == 0:
        return None
    return SSClass(c.a - 1, 1, c.b + ctx.p - 1, coeff)


def d_first_source(ctx: PrimeContext, c: SSClass) -> SSClass | None:
    """The class whose d_{2p-1} hits c, if any."""
    if c.e == 0 or c.b < ctx.p - 1:
        return None
    cand = SSClass(c.a + 1, 0, c.b - (ctx.p - 1))
    return cand if d_first(ctx, cand) is not None else None


def alive_on_e2p(ctx: PrimeContext, c: SSClass) -> bool:
    return d_first(ctx, c) is None and d_first_source(ctx, c) is None


def d_second(ctx: PrimeContext, c: SSClass) -> SSClass | None:
    """d_{2n^2+1} on an E_{2p} survivor.

    Delta^c alpha beta^b with c = -1 mod p maps to Delta^{c-p+1} beta^{b+n^2+1};
    every other survivor (including the Delta^{pa} beta^b line) maps to zero.
    """
    if not alive_on_e2p(ctx, c):
        raise PreconditionError(f"{c} does not survive to E_{2 * ctx.p}")
    if c.e == 1 and c.a % ctx.p == ctx.p - 1:
        return SSClass(c.a - ctx.p + 1, 0, c.b + ctx.n * ctx.n + 1, c.coeff)
    return None


def d_second_source(ctx: PrimeContext, c: SSClass) -> SSClass | None:
    if not alive_on_e2p(ctx, c):
        return None
    nn1 = ctx.n * ctx.n + 1
    if c.e == 1 or c.b < nn1:
        return None
    cand = SSClass(c.a + ctx.p - 1, 1, c.b - nn1)
    if not alive_on_e2p(ctx, cand):
        return None
    return cand if d_second(ctx, cand) is not None else None


def _slices(window: Window, parts: int) -> list[tuple[int, int]]:
    step = max(1, math.ceil(window.width / max(1, parts)))
    return [(lo, min(lo + step, window.t_max)) for lo in range(window.t_min, window.t_max, step)]


def _classes_in(ctx: PrimeContext, s_max: int, t_lo: int, t_hi: int) -> list[SSClass]:
    out = []
    for s in range(s_max + 1):
        e, b = s % 2, s // 2
        base = ctx.mod2n * e + ctx.mod_beta * b
        a = -((base - t_lo) // ctx.mod_delta)  # ceil((t_lo - base) / mod_delta)
        while base + ctx.mod_delta * a < t_hi:
            out.append(SSClass(a, e, b))
            a += 1
    return out


def _kernel_markers(ctx: PrimeContext, t_lo: int, t_hi: int) -> list[int]:
    first = -(-t_lo // ctx.mod2n) * ctx.mod2n
    return list(range(first, t_hi, ctx.mod2n))


def _collect(ctx: PrimeContext, window: Window, threads: int | None) -> tuple[list[SSClass], tuple[int, ...]]:
    pieces = pmap(
        lambda sl: (_classes_in(ctx, window.s_max, *sl), _kernel_markers(ctx, *sl)),
        _slices(window, 8),
        threads,
    )
    classes = sorted((c for cs, _ in pieces for c in cs), key=lambda c: (c.s, c.t(ctx)))
    markers = tuple(t for _, ms in pieces for t in ms)
    return classes, markers


def e2_page(ctx: PrimeContext, window: Window, threads: int | None = None) -> Page:
    classes, markers = _collect(ctx, window, threads)
    alive = Status(ALIVE)
    return Page(2, window, {c.key: (c, alive) for c in classes}, markers)


def _status(ctx: PrimeContext, window: Window, c: SSClass) -> Status:
    def mk(kind, r, other):
        s, t = other.s, other.t(ctx)
        return Status(kind, r, other.key, boundary=not window.contains(s, t))

    target = d_first(ctx, c)
    if target is not None:
        return mk(SUPPORTS, first_r(ctx), target)
    source = d_first_source(ctx, c)
    if source is not None:
        return mk(KILLED, first_r(ctx), source)
    target = d_second(ctx, c)
    if target is not None:
        return mk(SUPPORTS, second_r(ctx), target)
    source = d_second_source(ctx, c)
    if source is not None:
        return mk(KILLED, second_r(ctx), source)
    return Status(ALIVE)


def check_window(ctx: PrimeContext, window: Window) -> None:
    if window.width < ctx.mod_period:
        raise BoundaryEffectsError(
            f"window t-width {window.width} is less than one period {ctx.mod_period}"
        )
    need = 2 * ctx.n * ctx.n + 2
    if window.s_max < need:
        raise BoundaryEffectsError(
            f"s_max={window.s_max} truncates d_{second_r(ctx)}; need s_max >= {need}"
        )


def run_to_einfinity(ctx: PrimeContext, window: Window, threads: int | None = None) -> Page:
    """E_infinity over the window, each dead class recording its partner and page.

    Partners outside the window are resolved by the same differential rules
    and flagged ``boundary``.
    """
    check_window(ctx, window)
    classes, markers = _collect(ctx, window, threads)
    entries = {c.key: (c, _status(ctx, window, c)) for c in classes}
    return Page(math.inf, window, entries, markers)


def compare_einfinity(ctx: PrimeContext, window: Window, threads: int | None = None) -> CheckReport:
    page = run_to_einfinity(ctx, window, threads)
    alive = page.alive_bidegrees(ctx)
    mismatches = []
    for s in range(1, window.s_max + 1):
        for t in range(window.t_min, window.t_max):
            got = (s, t) in alive
            if got != einf_nonzero(ctx, s, t):
                mismatches.append({"s": s, "t": t, "engine": got})
    counts = {ALIVE: 0, SUPPORTS: 0, KILLED: 0}
    boundary = 0
    for _, st in page.entries.values():
        counts[st.kind] += 1
        boundary += st.boundary
    return CheckReport(
        "einf.compare",
        {"prime": ctx.p, "sMax": window.s_max, "tMin": window.t_min, "tMax": window.t_max},
        PASS if not mismatches else FAIL,
        {
            "mismatches": mismatches,
            "classes": len(page.entries),
            "statusCounts": counts,
            "boundaryFlagged": boundary,
            "kernelMarkers": len(page.kernel_markers),
        },
    )
