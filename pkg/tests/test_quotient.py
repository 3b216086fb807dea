import pytest
from hypothesis import given, settings, strategies as st

from toda_obstruction import DomainError
from toda_obstruction.closed_form import e2_rank
from toda_obstruction.engine import ALIVE, Window, run_to_einfinity
from toda_obstruction.quotient import (
    HomotopyWitness,
    QuotientContext,
    casework_prediction,
    homotopy_vanishes,
    homotopy_witnesses,
    in_cohomology_family,
    homotopy_family_d,
    lemma_cohomology_verify,
    lemma_homotopy_verify,
    quotient_h_vanishes,
    rank_upper_bound,
    reduction_terms,
    v1_module_check,
)


def oracle_quotient_vanishes(p, k, s, d):
    """Bitmask enumeration against the E_2 congruences written out directly."""
    n = p - 1
    for mask in range(1 << k):
        idx = [i for i in range(k) if mask >> i & 1]
        ss = s + len(idx)
        tt = d - sum(2 * (p**i - 1) for i in idx)
        if ss == 0:
            nonzero = tt % (2 * n) == 0
        elif ss % 2:
            nonzero = (tt - 2 * n - (ss - 1) * p * n) % (2 * p * n * n) == 0
        else:
            nonzero = (tt - ss * p * n) % (2 * p * n * n) == 0
        if nonzero:
            return False
    return True


@pytest.mark.parametrize(
    "k, s, d, expected",
    [(2, 2, 4020, True), (0, 1, 12, False), (0, 1, 4800, True)],
)
def test_quotient_examples(ctx7, k, s, d, expected):
    assert 4800 - 684 - 96 == 4020
    assert oracle_quotient_vanishes(7, k, s, d) is expected
    assert quotient_h_vanishes(ctx7, k, s, d) is expected


def test_reduction_terms_shape(ctx7):
    terms = reduction_terms(ctx7, 3, 1, 1000)
    assert len(terms) == 8
    for term in terms:
        assert term.target.s == 1 + term.extra_degree
        assert list(term.index_set) == sorted(set(term.index_set))
        assert set(term.index_set) <= {0, 1, 2}


def test_trivial_quotient(ctx7):
    assert quotient_h_vanishes(ctx7, 7, 1, 12)
    assert quotient_h_vanishes(ctx7, 9, 0, 0)
    assert QuotientContext(3).alive_floor == 3
    with pytest.raises(DomainError):
        QuotientContext(-1)


@settings(max_examples=200)
@given(k=st.integers(0, 6), s=st.integers(0, 8), d=st.integers(-10**5, 10**5))
def test_quotient_matches_oracle(ctx7, k, s, d):
    assert quotient_h_vanishes(ctx7, k, s, d) == oracle_quotient_vanishes(7, k, s, d)


@settings(max_examples=200)
@given(k=st.integers(0, 10), s=st.integers(0, 6), d=st.integers(-10**7, 10**7))
def test_quotient_periodic(ctx11, k, s, d):
    assert quotient_h_vanishes(ctx11, k, s, d) == quotient_h_vanishes(ctx11, k, s, d + ctx11.mod_delta)


@given(s=st.integers(1, 40), d=st.integers(-10**5, 10**5))
def test_k0_is_e2(ctx7, s, d):
    assert quotient_h_vanishes(ctx7, 0, s, d) == (e2_rank(ctx7, s, d) == 0)


@given(k=st.integers(0, 6), s=st.integers(1, 6), d=st.integers(-10**5, 10**5).map(lambda x: 2 * x))
def test_monotone_soundness(ctx7, k, s, d):
    if quotient_h_vanishes(ctx7, k, s, d):
        assert rank_upper_bound(ctx7, k, s, d) == 0
    else:
        assert rank_upper_bound(ctx7, k, s, d) >= 1


@pytest.mark.parametrize("p", [7, 11, 13])
def test_cohomology_family(p):
    from toda_obstruction import make_context

    c = make_context(p)
    rep = lemma_cohomology_verify(c)
    assert rep.passed
    checked = [x for x in rep.witnesses["cases"] if "k" in x]
    assert sum(x["family"] == "H1" for x in checked) == (c.n - 1) * p
    assert sum(x["family"] == "H2" for x in checked) == (c.n - 1) * (p - 1)
    assert all(x["vanishes"] for x in checked)
    excluded = [x for x in rep.witnesses["cases"] if "k" not in x]
    assert excluded == [{"y": 1, "verdict": "hypothesis-excluded"}]


def test_cohomology_family_instances_match_oracle(ctx7):
    for y in range(6):
        for k in range(7):
            d = 84 * y
            assert quotient_h_vanishes(ctx7, k, 1, d) == oracle_quotient_vanishes(7, k, 1, d)
            assert quotient_h_vanishes(ctx7, k, 2, d - 12) == oracle_quotient_vanishes(7, k, 2, d - 12)


def test_in_cohomology_family_excluded_family_does_not_vanish(ctx7):
    # y = 1: d = 2pn, the beta class reached through i_1 = 0
    assert not quotient_h_vanishes(ctx7, 1, 1, 84)
    assert not in_cohomology_family(ctx7, 84)
    assert in_cohomology_family(ctx7, 168)
    assert not in_cohomology_family(ctx7, 85)


@pytest.fixture(scope="module")
def einf_oracle(ctx7):
    """E_infinity support over one period from the engine (zero line: t = 0 mod 2n)."""
    page = run_to_einfinity(ctx7, Window(2 * 36 + 2, 0, ctx7.mod_period))
    alive = {(s, t) for s, t in page.alive_bidegrees(ctx7) if s >= 1}
    zero = set(page.kernel_markers)

    def nonzero(s, t):
        t %= ctx7.mod_period
        return t in zero if s == 0 else (s, t) in alive

    return nonzero


def oracle_homotopy_vanishes(ctx, nonzero, m, d):
    for mask in range(1 << (m + 1)):
        idx = [i for i in range(m + 1) if mask >> i & 1]
        stem = d - 1 - len(idx) - sum(2 * (ctx.p**i - 1) for i in idx)
        if any(nonzero(s, stem + s) for s in range(0, 2 * ctx.n * ctx.n + 1)):
            return False
    return True


@pytest.mark.parametrize("m, d", [(2, 66540), (2, 4800), (0, 13), (5, 6), (3, 62424)])
def test_homotopy_examples_against_engine(ctx7, einf_oracle, m, d):
    assert homotopy_vanishes(ctx7, m, d) == oracle_homotopy_vanishes(ctx7, einf_oracle, m, d)


def test_homotopy_examples(ctx7):
    assert 2 * 33612 - 684 == 66540
    assert homotopy_vanishes(ctx7, 2, 66540)
    assert homotopy_vanishes(ctx7, 2, 4800)
    wit = homotopy_witnesses(ctx7, 0, 13)
    assert HomotopyWitness((), 0, 12) in wit
    assert not homotopy_vanishes(ctx7, 0, 13)


def test_homotopy_domain(ctx7):
    with pytest.raises(DomainError):
        homotopy_vanishes(ctx7, 6, 0)
    with pytest.raises(DomainError):
        homotopy_vanishes(ctx7, -1, 0)


@settings(max_examples=40, deadline=None)
@given(m=st.integers(0, 5), d=st.integers(-10**6, 10**6))
def test_homotopy_periodic(ctx7, m, d):
    assert homotopy_vanishes(ctx7, m, d) == homotopy_vanishes(ctx7, m, d + ctx7.mod_period)


@settings(max_examples=40, deadline=None)
@given(m=st.integers(0, 5), d=st.integers(0, 3528))
def test_homotopy_matches_engine(ctx7, einf_oracle, m, d):
    assert homotopy_vanishes(ctx7, m, d) == oracle_homotopy_vanishes(ctx7, einf_oracle, m, d)


def test_homotopy_family_examples(ctx7, ctx11):
    rep = lemma_homotopy_verify(ctx7, 5)
    assert rep.passed and rep.witnesses["caseworkAgrees"]
    by_y = {c["y"]: c for c in rep.witnesses["cases"]}
    assert all(by_y[y]["vanishes"] for y in range(1, 6))
    assert by_y[0]["verdict"] == "hypothesis-excluded"
    assert lemma_homotopy_verify(ctx11, 6).passed


def test_excluded_family_has_the_casework_survivor(ctx7):
    # y = 0 leaves exactly beta, reached with k = 1, i_1 = 1
    d = homotopy_family_d(ctx7, 0)
    assert set(homotopy_witnesses(ctx7, 3, d)) == casework_prediction(ctx7, 3, 0) == {
        HomotopyWitness((1,), 2, 84)
    }


@pytest.mark.parametrize("m", [0, 3, -2, 5])
def test_v1_module(ctx7, m):
    rep = v1_module_check(ctx7, [m])
    (row,) = rep.witnesses["rows"]
    assert row["bound"] == 1
    assert row["terms"][0]["indexSet"] == [0]
    assert rep.passed


def test_v1_module_by_brute_count(ctx7):
    for m in range(-3, 4):
        d = 84 + 504 * m
        count = sum(
            e2_rank(ctx7, 1 + len(idx), d - sum(2 * (7**i - 1) for i in idx))
            for idx in [(), (0,), (1,), (0, 1)]
        )
        assert count == 1
