from collections import Counter

import pytest

from toda_obstruction import BoundaryEffectsError, DomainError, PreconditionError
from toda_obstruction.closed_form import einf_nonzero
from toda_obstruction.engine import (
    ALIVE,
    KILLED,
    SUPPORTS,
    SSClass,
    Window,
    compare_einfinity,
    d_first,
    d_second,
    e2_page,
    run_to_einfinity,
)


def leibniz_d_first(ctx, a, e, b):
    """Expand d over the factor list Delta^a alpha^e beta^b by the product rule."""
    if a < 0:
        return None  # not needed by the cases below
    factors = ["D"] * a + ["a"] * e + ["b"] * b
    out = Counter()
    for pos, f in enumerate(factors):
        if f != "D":
            continue  # alpha and beta are cycles
        rest = factors[:pos] + factors[pos + 1:] + ["a"] + ["b"] * (ctx.p - 1)
        c = Counter(rest)
        if c["a"] > 1:
            continue  # alpha^2 = 0
        out[(c["D"], c["a"], c["b"])] += 1
    terms = {k: v % ctx.p for k, v in out.items() if v % ctx.p}
    assert len(terms) <= 1
    return next(iter(terms.items()), None)


@pytest.mark.parametrize("a, e, b", [(1, 0, 0), (7, 0, 0), (2, 1, 3), (3, 0, 2), (5, 0, 4), (14, 0, 1), (6, 1, 0)])
def test_d_first_matches_leibniz(ctx7, a, e, b):
    got = d_first(ctx7, SSClass(a, e, b))
    want = leibniz_d_first(ctx7, a, e, b)
    if want is None:
        assert got is None
    else:
        assert (got.key, got.coeff) == want


def test_d_first_examples(ctx7):
    img = d_first(ctx7, SSClass(1))
    assert img == SSClass(0, 1, 6, 1)
    assert (img.s, img.t(ctx7)) == (13, 516)
    assert d_first(ctx7, SSClass(7)) is None
    assert d_first(ctx7, SSClass(2, 1, 3)) is None
    assert d_first(ctx7, SSClass(3, 0, 2)) == SSClass(2, 1, 8, 3)


def test_d_first_on_negative_powers(ctx7):
    # Delta^{-1} -> -Delta^{-2} alpha beta^6 = 6 Delta^{-2} alpha beta^6 mod 7
    assert d_first(ctx7, SSClass(-1)) == SSClass(-2, 1, 6, 6)


def test_d_second_examples(ctx7):
    img = d_second(ctx7, SSClass(6, 1, 0))
    assert img.key == (0, 0, 37)
    assert (img.s, img.t(ctx7)) == (74, 3108)
    assert d_second(ctx7, SSClass(7, 0, 2)) is None
    assert d_second(ctx7, SSClass(13, 1, 3)).key == (7, 0, 40)


def test_d_second_requires_e2p_survivor(ctx7):
    with pytest.raises(PreconditionError):
        d_second(ctx7, SSClass(1))  # supports d_13
    with pytest.raises(PreconditionError):
        d_second(ctx7, SSClass(0, 1, 6))  # hit by d_13


def test_differential_bidegree_shifts(ctx7):
    for c in [SSClass(a, 0, b) for a in range(-8, 9) for b in range(8)]:
        img = d_first(ctx7, c)
        if img is not None:
            assert (img.s - c.s, img.t(ctx7) - c.t(ctx7)) == (13, 12)
    for c in [SSClass(a, 1, b) for a in range(-8, 15) for b in range(5)]:
        img = d_second(ctx7, c)
        if img is not None:
            assert (img.s - c.s, img.t(ctx7) - c.t(ctx7)) == (73, 72)


def test_e2_page_examples(ctx7):
    page = e2_page(ctx7, Window(2, 0, 91))
    degs = {(c.s, c.t(ctx7)) for c, _ in page.entries.values()}
    assert {(1, 12), (2, 84), (0, 0)} <= degs
    assert all(st.kind == ALIVE for _, st in page.entries.values())
    assert 0 in page.kernel_markers and 24 in page.kernel_markers

    page = e2_page(ctx7, Window(0, 504, 505))
    assert (1, 0, 0) in page.entries

    page = e2_page(ctx7, Window(1, 13, 14))
    assert not [c for c, _ in page.entries.values() if c.s >= 1]


def test_empty_window():
    with pytest.raises(DomainError):
        Window(2, 10, 10)
    with pytest.raises(DomainError):
        Window(-1, 0, 10)


@pytest.fixture(scope="module")
def page7(ctx7):
    return run_to_einfinity(ctx7, Window(80, 0, 7056))


def test_einfinity_statuses(ctx7, page7):
    assert page7.status((0, 1, 0)).kind == ALIVE
    st = page7.status((1, 0, 0))
    assert (st.kind, st.r, st.partner) == (SUPPORTS, 13, (0, 1, 6))
    st = page7.status((0, 0, 37))
    assert (st.kind, st.r, st.partner) == (KILLED, 73, (6, 1, 0))
    assert page7.status((7, 0, 0)).kind == ALIVE
    st = page7.status((6, 1, 0))
    assert (st.kind, st.r) == (SUPPORTS, 73)


def test_statuses_are_consistent(ctx7, page7):
    w = page7.window
    for key, (c, st) in page7.entries.items():
        if st.kind == ALIVE:
            continue
        partner = SSClass(*st.partner)
        # d_r has bidegree (r, r-1)
        src, dst = (c, partner) if st.kind == SUPPORTS else (partner, c)
        assert (dst.s - src.s, dst.t(ctx7) - src.t(ctx7)) == (st.r, st.r - 1)
        inside = w.contains(partner.s, partner.t(ctx7))
        assert st.boundary is (not inside)
        if inside:
            back = page7.status(partner.key)
            assert back.partner == key and back.r == st.r
            assert {back.kind, st.kind} == {SUPPORTS, KILLED}


def test_d_first_squares_to_zero(ctx7, page7):
    for c, _ in page7.entries.values():
        img = d_first(ctx7, c)
        if img is not None:
            assert d_first(ctx7, img) is None


def test_einfinity_survivor_ranges(ctx7, page7):
    for c, st in page7.entries.values():
        if st.kind != ALIVE or c.s == 0:
            continue
        if c.s % 2:
            assert 1 <= c.s <= 11
        else:
            assert 2 <= c.s <= 72


def test_compare_p7_two_periods(ctx7):
    rep = compare_einfinity(ctx7, Window(80, 0, 7056))
    assert rep.verdict == "pass"
    assert rep.witnesses["mismatches"] == []


def test_compare_p11_one_period(ctx11):
    rep = compare_einfinity(ctx11, Window(202, 0, ctx11.mod_period))
    assert rep.passed


def test_compare_shifted_window(ctx7):
    assert compare_einfinity(ctx7, Window(74, -5000, -5000 + 3528)).passed


@pytest.mark.parametrize("window", [Window(80, 0, 3000), Window(60, 0, 7056), Window(72, 0, 3528)])
def test_truncated_windows_raise(ctx7, window):
    with pytest.raises(BoundaryEffectsError):
        run_to_einfinity(ctx7, window)
    with pytest.raises(BoundaryEffectsError):
        compare_einfinity(ctx7, window)


def test_page_alive_set_matches_closed_form_on_even_line(ctx7, page7):
    alive = page7.alive_bidegrees(ctx7)
    assert all(einf_nonzero(ctx7, s, t) for s, t in alive if s >= 1)


def test_thread_count_does_not_change_pages(ctx7):
    w = Window(80, -3528, 3528)
    dumps = {run_to_einfinity(ctx7, w, threads=n).dump(ctx7) for n in (1, 2, 8)}
    assert len(dumps) == 1


def test_dump_format(ctx7):
    lines = e2_page(ctx7, Window(2, 0, 91)).dump(ctx7).splitlines()
    assert "1 12 0 1 0 1 alive" in lines
    assert "0 12 K - - - permanent" in lines
    dump = run_to_einfinity(ctx7, Window(74, 0, 3528)).dump(ctx7)
    assert "0 504 1 0 0 1 supports:13:0,1,6\n" in dump
    assert "74 3108 0 0 37 1 killed:73:6,1,0\n" in dump
    assert all(len(line.split()) == 7 for line in dump.splitlines())
