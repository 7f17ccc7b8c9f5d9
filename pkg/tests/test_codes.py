import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

import twistver.codes as codes_mod
from twistver.codes import (BudgetExceeded, SearchPlan, _lex_rank, build_code,
                            classify_min_words, mds_status, min_distance,
                            oracle_min_distance, verify_dep_classification,
                            verify_general_position, verify_oracle_equivalence)
from twistver.linalg import rank
from twistver.pg import is_collinear

from conftest import get_code, get_variety


# -- construction -------------------------------------------------------------

@pytest.mark.parametrize("p,m,n,exps,nu,kappa", [
    (3, 3, 2, (0, 0, 2), 28, 22),
    (5, 1, 2, (0, 0), 6, 3),
    (2, 2, 3, (0, 0), 21, 15),
])
def test_build_code_parameters(p, m, n, exps, nu, kappa):
    c = get_code(p, m, n, exps)
    assert (c.nu, c.kappa) == (nu, kappa)
    assert c.H.rows == c.effective_N
    assert rank(c.H) == c.effective_N


def test_build_code_columns_are_points():
    c = get_code(3, 3, 2, (0, 0, 2))
    v = c.variety
    assert (c.H.data.T == v.coords).all()


# -- staged minimum distance ----------------------------------------------------

def test_min_distance_track_gf27():
    rep = min_distance(get_code(3, 3, 2, (0, 0, 2)))
    assert (rep.nu, rep.kappa, rep.delta) == (28, 22, 6)
    assert rep.status == "almost-MDS"
    assert rep.singleton_bound == 7
    by_w = {s.w: s for s in rep.stage_log}
    assert by_w[4].checked == comb(28, 4) == 20475
    assert by_w[5].checked == comb(28, 5) == 98280
    assert by_w[6].dependent_found == 1 and by_w[6].early_exit


def test_min_distance_nrc_gf27():
    rep = min_distance(get_code(3, 3, 2, (0, 0, 1)))
    assert (rep.nu, rep.kappa, rep.delta, rep.status) == (28, 22, 7, "MDS")


def test_min_distance_classical_conic():
    rep = min_distance(get_code(5, 1, 2, (0, 0)))
    assert (rep.nu, rep.kappa, rep.delta, rep.status) == (6, 3, 4, "MDS")
    by_w = {s.w: s for s in rep.stage_log}
    assert by_w[4].restriction == "subline"  # q' = 5 > d = 2


def test_witness_is_minimal_dependent():
    c = get_code(3, 3, 2, (0, 0, 2))
    rep = min_distance(c)
    w = rep.witness
    assert rank(c.H.submatrix_cols(w)) == len(w) - 1
    for drop in range(len(w)):
        sub = [x for i, x in enumerate(w) if i != drop]
        assert rank(c.H.submatrix_cols(sub)) == len(sub)


def test_witness_preimages_collinear():
    # minimal dependent sets must always come from collinear points
    for cfg in [(3, 3, 2, (0, 0, 2)), (2, 4, 2, (0, 2)), (2, 2, 3, (0, 0))]:
        c = get_code(*cfg)
        rep = min_distance(c)
        pts = [c.variety.points[i] for i in rep.witness]
        assert is_collinear(c.field, pts)


def test_min_distance_lex_first_witness():
    c = get_code(3, 3, 2, (0, 0, 2))
    rep = min_distance(c)
    witness = tuple(rep.witness)
    # no dependent 6-subset lexicographically before the witness
    for sub in itertools.combinations(range(c.nu), 6):
        if sub >= witness:
            break
        assert rank(c.H.submatrix_cols(sub)) == 6


def test_degree_one_twist_code():
    # d = 1, identity embedding of the projective line: any 3 points of
    # PG(1) are dependent, so delta = 3 and the code is MDS [28, 26, 3]
    c = build_code(get_variety(3, 3, 2, (0,)))
    rep = min_distance(c)
    assert (rep.nu, rep.kappa, rep.delta, rep.status) == (28, 26, 3, "MDS")


# -- restricted level at d + 2 ----------------------------------------------------

def test_subline_restricted_level_gf16():
    c = get_code(2, 4, 2, (0, 2))
    rep = min_distance(c)
    assert (rep.nu, rep.kappa, rep.delta, rep.status) == (17, 13, 4, "almost-MDS")
    by_w = {s.w: s for s in rep.stage_log}
    assert by_w[4].restriction == "subline"
    assert by_w[4].checked == 68 * comb(5, 4) == 340
    assert by_w[4].dependent_found == 340


def test_collinear_restricted_level_pg2():
    c = get_code(2, 2, 3, (0, 0))
    rep = min_distance(c)
    assert rep.delta == 4
    by_w = {s.w: s for s in rep.stage_log}
    # q' = 4 > d = 2: each of the 21 lines is its own subline
    assert by_w[4].restriction == "subline"
    assert by_w[4].checked == 21 * comb(5, 4) == 105


def test_full_level_counts_p2():
    rep = min_distance(get_code(2, 5, 2, (0, 2)))
    assert (rep.nu, rep.kappa, rep.delta, rep.status) == (33, 29, 5, "MDS")
    by_w = {s.w: s for s in rep.stage_log}
    assert by_w[4].checked == comb(33, 4) == 40920
    assert by_w[4].restriction == "none"  # q' = 2 = d: no subline shortcut


def test_plane_with_small_fixed_subfield():
    # n = 3 over GF(4), twist (0,1): q' = 2 = d, so the d+2 level checks
    # only collinear candidates and the d+3 level resolves by lex search
    c = get_code(2, 2, 3, (0, 1))
    rep = min_distance(c)
    by_w = {s.w: s for s in rep.stage_log}
    assert by_w[4].restriction == "collinear"
    assert by_w[4].checked == 21 * comb(5, 4) == 105
    assert by_w[4].dependent_found == 0
    assert rep.delta == 5
    # independent upper-bound witness: any 5 points of a line embed into a
    # cubic curve spanning only a 4-dimensional space
    from twistver.pg import all_lines
    line = all_lines(c.field, c.variety.points)[0]
    assert rank(c.H.submatrix_cols(list(line[:5]))) == 4


# -- classification ---------------------------------------------------------------

def test_classify_gf16_supports():
    c = get_code(2, 4, 2, (0, 2))
    rep = classify_min_words(c, min_distance(c))
    assert rep.min_weight_support_count == 340
    assert rep.violations == []
    assert all(s["collinear"] and s["on_subline"] for s in rep.supports)
    cols = {tuple(s["columns"]) for s in rep.supports}
    assert len(cols) == 340


def test_classify_classical_conic_all_quadruples():
    c = get_code(5, 1, 2, (0, 0))
    rep = classify_min_words(c, min_distance(c))
    assert rep.min_weight_support_count == comb(6, 4) == 15
    assert rep.violations == []


def test_classify_veronese_surface_supports_collinear():
    c = get_code(2, 2, 3, (0, 0))
    rep = classify_min_words(c, min_distance(c))
    assert rep.min_weight_support_count == 105
    assert rep.violations == []
    assert all(s["collinear"] for s in rep.supports)


def test_classify_requires_exact_d_plus_2():
    c = get_code(3, 3, 2, (0, 0, 2))  # delta = 6 = d + 3
    rep = min_distance(c)
    with pytest.raises(ValueError):
        classify_min_words(c, rep)


def test_verify_dep_classification_wrapper():
    ok, rep, why = verify_dep_classification(get_code(2, 4, 2, (0, 2)))
    assert ok and why is None
    ok, rep, why = verify_dep_classification(get_code(3, 3, 2, (0, 0, 2)))
    assert not ok and "not d + 2" in why


# -- status ------------------------------------------------------------------------

def test_mds_status_values():
    rep = min_distance(get_code(5, 1, 2, (0, 0)))
    assert mds_status(rep) == "MDS"
    rep = min_distance(get_code(3, 2, 2, (0, 1)))
    assert (rep.nu, rep.kappa, rep.delta) == (10, 6, 4)
    assert mds_status(rep) == "almost-MDS"
    rep = min_distance(get_code(2, 2, 3, (0, 0)))
    assert mds_status(rep) == "other"  # [21, 15, 4], Singleton 7


def test_mds_status_requires_exact():
    rep = min_distance(get_code(5, 1, 2, (0, 0)), SearchPlan(budget=2))
    assert not rep.delta_exact
    with pytest.raises(ValueError):
        mds_status(rep)


# -- oracle ------------------------------------------------------------------------

ORACLE_CONFIGS = [
    (2, 2, 2, (0, 1)),   # nu = 5
    (5, 1, 2, (0, 0)),   # nu = 6
    (2, 3, 2, (0, 1)),   # nu = 9
    (3, 2, 2, (0, 1)),   # nu = 10
    (7, 1, 2, (0, 0)),   # nu = 8
]


@pytest.mark.parametrize("cfg", ORACLE_CONFIGS)
def test_oracle_equivalence(cfg):
    ok, staged, oracle = verify_oracle_equivalence(get_code(*cfg))
    assert ok, (cfg, staged, oracle)


def test_oracle_cap():
    with pytest.raises(BudgetExceeded):
        oracle_min_distance(get_code(3, 3, 2, (0, 0, 2)), max_checks=100)


def test_oracle_witness_is_dependent():
    c = get_code(2, 2, 2, (0, 1))
    delta, witness = oracle_min_distance(c)
    assert delta == 5
    assert rank(c.H.submatrix_cols(list(witness))) < 5


# -- budgets and determinism ---------------------------------------------------------

def test_budget_cap_gives_sound_lower_bound():
    c = get_code(3, 3, 2, (0, 0, 2))
    rep = min_distance(c, SearchPlan(budget=10_000))
    assert not rep.delta_exact
    assert rep.delta is None
    assert rep.status == "unresolved"
    assert rep.delta_lower_bound == 4  # w=4 was capped, so only w<=3 proven
    capped = [s for s in rep.stage_log if s.capped]
    assert capped and capped[0].w == 4
    rep2 = min_distance(c, SearchPlan(budget=10_000))
    assert rep.canonical_hash() == rep2.canonical_hash()


def test_plan_w_max_validation():
    c = get_code(5, 1, 2, (0, 0))
    with pytest.raises(ValueError):
        min_distance(c, SearchPlan(w_max=c.effective_N + 2))
    rep = min_distance(c, SearchPlan(w_max=3))
    assert rep.delta is None and rep.delta_lower_bound == 4


def test_worker_count_does_not_change_report(monkeypatch):
    monkeypatch.setattr(codes_mod, "PARALLEL_MIN_CHECKS", 0)
    c = get_code(3, 2, 2, (0, 1))
    reports = [min_distance(c, SearchPlan(workers=k)) for k in (1, 2, 3)]
    payloads = [r.payload() for r in reports]
    assert payloads[0] == payloads[1] == payloads[2]


def test_report_hash_stable_and_excludes_timings():
    c = get_code(2, 4, 2, (0, 2))
    r1 = min_distance(c)
    r2 = min_distance(c)
    assert r1.payload() == r2.payload()
    assert r1.canonical_hash() == r2.canonical_hash()
    assert r1.timings != {} and "timings" not in r1.payload()
    j = r1.to_json()
    assert j["canonical_hash"] == r1.canonical_hash()


# -- general position -----------------------------------------------------------------

def test_general_position_track():
    res = verify_general_position(get_code(3, 3, 2, (0, 0, 2)), 4)
    assert res.ok and res.checked == comb(28, 4)


def test_general_position_pairs_always_hold():
    res = verify_general_position(get_code(2, 3, 2, (0, 1)), 2)
    assert res.ok


def test_general_position_conic_failure():
    res = verify_general_position(get_code(5, 1, 2, (0, 0)), 4)
    assert not res.ok
    assert res.witness == (0, 1, 2, 3)


def test_general_position_budget_error():
    with pytest.raises(BudgetExceeded):
        verify_general_position(get_code(3, 3, 2, (0, 0, 2)), 4,
                                SearchPlan(budget=100))


# -- lex rank helper -------------------------------------------------------------------

@given(st.data())
@settings(max_examples=50, deadline=None)
def test_lex_rank_matches_enumeration(data):
    nu = data.draw(st.integers(3, 9))
    w = data.draw(st.integers(1, min(4, nu)))
    subsets = list(itertools.combinations(range(nu), w))
    idx = data.draw(st.integers(0, len(subsets) - 1))
    assert _lex_rank(subsets[idx], nu) == idx
