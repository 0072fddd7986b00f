import random

import pytest

from flatframe import catalog
from flatframe.errors import UnsupportedProfile
from flatframe.incidence import IncidenceMatrix, incidence_matrix
from flatframe.matcher import MatchResult
from flatframe.oracle import (
    InfeasibilityCertificate, certify_property_e, certify_weak_matching, counting_bounds, feasible_matching,
    hall_violator_bruteforce, parabolic_max, verify_match,
)
from flatframe.singular import maximally_singular_rays

from oracles import hall_ok


def test_two_rows_on_five_columns():
    A = IncidenceMatrix.from_lists([[1] * 5, [1] * 5])
    cert = feasible_matching(A)
    assert isinstance(cert, InfeasibilityCertificate)
    assert cert.row_subset == (0, 1) and cert.neighborhood_size == 5 and cert.demand_sum == 6
    assert cert.verify(A)


def test_sl6_vertex_frame_feasible():
    d = catalog.lookup("SL(6,R)")
    A = incidence_matrix(d, [r.vector for r in maximally_singular_rays(d)])
    res = feasible_matching(A)
    assert isinstance(res, MatchResult) and verify_match(A, res)
    pops = [r.bit_count() for r in A.rows]
    ends = [i for i, p in enumerate(pops) if p == 5]
    assert (A.rows[ends[0]] | A.rows[ends[1]]).bit_count() == 9


def test_regular_row_is_unconstrained():
    rows = [[1, 1, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 1, 1, 1, 0, 0, 0], [1] * 9]
    assert isinstance(feasible_matching(rows), MatchResult)
    assert isinstance(feasible_matching(rows[:2]), MatchResult)


def test_flow_agrees_with_brute_force_hall():
    rng = random.Random(5)
    for _ in range(600):
        n = rng.randint(1, 6)
        m = rng.randint(1, 20)
        p = rng.uniform(0.1, 0.7)
        rows = [[int(rng.random() < p) for _ in range(m)] for _ in range(n)]
        A = IncidenceMatrix.from_lists(rows, [rng.randint(1, 3) for _ in range(n)])
        res = feasible_matching(A)
        truth = hall_ok(A.rows, A.demands)
        assert isinstance(res, MatchResult) == truth
        assert (hall_violator_bruteforce(A) is None) == truth
        if truth:
            assert verify_match(A, res)
        else:
            assert res.verify(A)


def test_certificate_verify_rejects_bad_claims():
    A = IncidenceMatrix.from_lists([[1, 1, 1, 1, 1], [1, 1, 1, 1, 1]])
    assert not InfeasibilityCertificate((0,), 5, 3).verify(A)
    assert not InfeasibilityCertificate((0, 1), 4, 6).verify(A)
    assert not InfeasibilityCertificate((), 0, 0).verify(A)
    assert not InfeasibilityCertificate((0, 7), 5, 6).verify(A)


def test_verify_match_negatives():
    A = IncidenceMatrix.from_lists([[1, 1, 1, 1, 0, 0], [0, 0, 1, 1, 1, 1]])
    assert verify_match(A, MatchResult("matched", [[0, 1, 2], [3, 4, 5]]))
    assert not verify_match(A, MatchResult("matched", [[0, 1, 2], [2, 4, 5]]))
    assert not verify_match(A, MatchResult("matched", [[0, 1, 4], [2, 3, 5]]))
    assert not verify_match(A, MatchResult("matched", [[0, 1], [3, 4, 5]]))
    assert not verify_match(A, MatchResult("matched", [[0, 1, 2]]))
    assert not verify_match(A, MatchResult("failed", [[0, 1, 2], [3, 4, 5]]))


@pytest.mark.parametrize("sid", ["SL(3,R)", "SL(4,R)", "SL(5,R)", "Sp(4,R)", "SO(3,2)"])
def test_excluded_spaces_refuted(sid):
    d = catalog.lookup(sid)
    rep = certify_property_e(d)
    assert rep.status == "refuted" and rep.method == "counting"
    assert d.dim_x < 4 * d.rank
    frame, A, cert = rep.counterexample
    assert cert.verify(A)
    assert A.n_cols < 3 * d.rank


def test_sl4_counting_details():
    rep = certify_property_e("SL(4,R)")
    assert rep.details["dim_x"] == 9 and rep.details["bound"] == 12


def test_g2_certified():
    d = catalog.lookup("G2(2)")
    rep = certify_property_e(d, exhaustive=True)
    assert rep.status == "certified" and rep.greedy_agreement == 1.0
    A = incidence_matrix(d, [r.vector for r in maximally_singular_rays(d)])
    assert A.n_cols == 6 and [r.bit_count() for r in A.rows] == [5, 5]


def test_sl6_exhaustive():
    rep = certify_property_e("SL(6,R)", exhaustive=True)
    assert rep.status == "certified"
    assert rep.frames_examined == 237
    assert rep.greedy_agreement == 1.0 and rep.details["greedy_gaps"] == []


def test_budget_exhausted():
    rep = certify_property_e("SL(6,R)", exhaustive=True, budget=10)
    assert rep.status == "budget_exhausted" and rep.frames_examined == 10


def test_rank_one():
    assert certify_property_e("SO(2,1)").status == "refuted"   # H^2
    assert certify_property_e("SO(3,1)").status == "refuted"   # H^3
    rep = certify_property_e("SO(4,1)")
    assert rep.status == "certified" and rep.method == "rank-one"
    assert certify_property_e("SU(2,1)").status == "certified"


def test_parabolic_max_values():
    d = catalog.lookup("SL(6,R)")
    # largest A_k inside A_5 on k simple roots: k(k+1)/2
    assert [parabolic_max(d, k) for k in range(6)] == [0, 1, 3, 6, 10, 15]
    assert parabolic_max(catalog.lookup("Sp(6,R)"), 2) == 4


def test_counting_bounds_cover_non_excluded():
    for sid in ["SL(6,R)", "Sp(6,R)", "SO(4,4)", "E6(6)", "SU(3,2)"]:
        assert all(counting_bounds(catalog.lookup(sid)).values()), sid
        assert certify_property_e(sid).status == "certified"


def test_product_certified_and_split_recorded():
    rep = certify_property_e("SO(4,1)×G2(2)")
    assert rep.status == "certified"
    assert [f.status for f in rep.factors] == ["certified", "certified"]
    frame = rep.details["block_frame"]
    # factor blocks embed as (v, 0) and (0, w)
    (lo1, hi1), (lo2, hi2) = catalog.lookup("SO(4,1)×G2(2)").root_system.components
    assert all(not any(v[lo2:hi2]) for v in frame[:1])
    assert all(not any(v[lo1:hi1]) for v in frame[1:])
    assert rep.details["block_split"] == [0, 1, 2]
    assert sorted(rep.details["mixed_split"]) == [0, 1, 2]


def test_product_refuted_by_factor():
    rep = certify_property_e("SL(6,R)×Sp(4,R)")
    assert rep.status == "refuted"
    assert rep.details["refuted_factor"] == "Sp(4,R)"
    frame, A, cert = rep.counterexample
    assert cert.verify(A)
    assert all(i >= 5 for i in cert.row_subset)


def test_weak_matching_sl5r():
    rep = certify_weak_matching("SL(5,R)")
    assert rep.status == "certified"
    assert rep.frames_examined == 430
    d = rep.details
    assert d["min_nonzero_columns"] == 9
    assert (d["dim_w"], d["dim_w_cap_p"], d["dim_w_cap_flat_perp"]) == (13, 2, 9)


def test_weak_matching_all_regular():
    rep = certify_weak_matching("SL(5,R)", profile="all-regular")
    assert rep.status == "certified"
    assert certify_weak_matching("SL(3,R)", profile="all-regular").status == "refuted"  # 3 < 4


def test_weak_matching_unknown_profile():
    with pytest.raises(UnsupportedProfile):
        certify_weak_matching("SL(5,R)", profile="half")
    with pytest.raises(UnsupportedProfile):
        certify_weak_matching("SO(4,1)")


def test_report_json():
    data = certify_property_e("SL(4,R)").to_json()
    assert data["status"] == "refuted"
    ce = data["counterexample"]
    A = IncidenceMatrix.from_json(ce["matrix"])
    cert = InfeasibilityCertificate(tuple(ce["certificate"]["row_subset"]), ce["certificate"]["neighborhood_size"],
                                    ce["certificate"]["demand_sum"])
    assert cert.verify(A)


def test_workers_match_serial():
    serial = certify_property_e("Sp(8,R)", exhaustive=True)
    parallel = certify_property_e("Sp(8,R)", exhaustive=True, workers=2)
    assert serial.to_json() == parallel.to_json()
    assert serial.frames_examined == 517
