from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flatframe import catalog, linalg
from flatframe.errors import NoAdmissibleRay, NotAFrame, NotRankTwo, ZeroVector
from flatframe.singular import (
    degree_bound, is_exceptional, is_maximally_singular, maximally_singular_rays, min_qdim,
    nonvanishing_roots, q_dim, q_intersection_dim, singular_lines, singularize_frame, t_invariant,
)

from oracles import apply, weyl_group_maps


def _slow_qdim(desc, v):
    total = 0
    for r in desc.root_system.positive_roots:
        if sum(Fraction(a) * b for a, b in zip(r.vector, v)) != 0:
            total += r.multiplicity
    return total


def test_sl6_ray_values():
    d = catalog.lookup("SL(6,R)")
    assert sorted(q_dim(d, r.vector) for r in maximally_singular_rays(d)) == [5, 5, 8, 8, 9]


@pytest.mark.parametrize("n", range(2, 9))
def test_sl_closed_form(n):
    d = catalog.lookup(f"SL({n + 1},R)")
    got = sorted(q_dim(d, r.vector) for r in maximally_singular_rays(d))
    assert got == sorted(i * n - i * (i - 1) for i in range(1, n + 1))
    # spec-style ray: first n+1-i coordinates equal i, rest equal -(n+1-i)
    for i in range(1, n + 1):
        w = [i] * (n + 1 - i) + [-(n + 1 - i)] * i
        assert q_dim(d, w) == i * n - i * (i - 1)
        assert is_maximally_singular(d, w)


def test_rays_lie_in_closed_chamber_and_kill_other_simple_roots():
    for sid in ["SL(6,R)", "Sp(6,R)", "G2(2)", "F4(4)", "E6(6)", "SU(3,2)", "SO(5,4)"]:
        d = catalog.lookup(sid)
        rs = d.root_system
        for j, ray in enumerate(maximally_singular_rays(d)):
            vals = [linalg.dot(a, ray.vector) for a in rs.simple_roots]
            assert vals[j] > 0
            assert all(x == 0 for k, x in enumerate(vals) if k != j)
            assert q_dim(d, ray.vector) == _slow_qdim(d, ray.vector)
            assert len(ray.nonvanishing_roots) == sum(1 for _ in ray.nonvanishing_roots)


def test_sp6_and_exceptional_values():
    d = catalog.lookup("Sp(6,R)")
    assert q_dim(d, (1, 0, 0)) == 5
    assert q_dim(d, (1, 1, 0)) == 7
    assert q_dim(d, (1, 1, 1)) == 6
    assert min_qdim(d) == 5 and t_invariant(d) == 7
    assert sorted(q_dim(catalog.lookup("F4(4)"), r.vector) for r in maximally_singular_rays(catalog.lookup("F4(4)"))) == [15, 15, 20, 20]


def test_zero_vector_rejected():
    d = catalog.lookup("SL(3,R)")
    with pytest.raises(ZeroVector):
        q_dim(d, (0, 0, 0))
    with pytest.raises(ZeroVector):
        q_intersection_dim(d, (1, -1, 0), (0, 0, 0))
    with pytest.raises(ValueError):
        nonvanishing_roots(d, (0, 0, 0))


@pytest.mark.parametrize("sid", ["SL(4,R)", "Sp(6,R)", "G2(2)", "SU(3,2)", "SO(4,3)"])
def test_weyl_invariance(sid):
    d = catalog.lookup(sid)
    group = weyl_group_maps(d.root_system)
    rays = [r.vector for r in maximally_singular_rays(d)]
    for v in rays:
        base = q_dim(d, v)
        for g in group:
            assert q_dim(d, apply(g, v)) == base
        for w in rays:
            inter = q_intersection_dim(d, v, w)
            assert inter <= min(q_dim(d, v), q_dim(d, w))
            for g in group[:12]:
                assert q_intersection_dim(d, apply(g, v), apply(g, w)) == inter


def test_t_invariant_at_least_rank():
    for d in catalog.catalog_entries():
        assert t_invariant(d) >= d.rank, d.id


def test_degree_bound_rank_two():
    flagged = set()
    for d in catalog.rank_two_irreducibles():
        t = t_invariant(d)
        assert degree_bound(d) == max(6, t + 2)
        if is_exceptional(d):
            flagged.add(d.id)
            assert t == 3
    assert flagged == {"SL(3,R)", "Sp(4,R)", "G2(2)"}
    assert t_invariant(catalog.lookup("SU(3,2)")) == 5


def test_degree_bound_requires_rank_two():
    with pytest.raises(NotRankTwo):
        degree_bound(catalog.lookup("SL(4,R)"))
    with pytest.raises(NotRankTwo):
        degree_bound(catalog.lookup("SO(4,1)×SO(4,1)"))


def test_singular_line_counts():
    # lines = sum over rays of |W| / |W_ray| / (2 if -1 maps the orbit to itself)
    assert len(singular_lines(catalog.lookup("SL(3,R)"))) == 3
    assert len(singular_lines(catalog.lookup("Sp(4,R)"))) == 4
    assert len(singular_lines(catalog.lookup("G2(2)"))) == 6
    assert len(singular_lines(catalog.lookup("SL(6,R)"))) == 31  # 2^6 - 2 subsets, halved


def test_singularize_example():
    d = catalog.lookup("SL(3,R)")
    res = singularize_frame(d, [(2, -1, -1), (1, 0, -1)])
    assert res.containment == (True, True)
    for ln in res.vectors:
        assert is_maximally_singular(d, ln)
    assert linalg.rank(res.vectors) == 2


def test_singularize_rejects_non_frames():
    d = catalog.lookup("SL(3,R)")
    with pytest.raises(NotAFrame):
        singularize_frame(d, [(1, -1, 0)])
    with pytest.raises(NotAFrame):
        singularize_frame(d, [(1, -1, 0), (2, -2, 0)])
    with pytest.raises(NotAFrame):
        singularize_frame(d, [(1, 0, 0), (0, 1, -1)])


def test_singularize_no_admissible_ray():
    # (1,1,-2) is singular: the only line inside its nonvanishing set is its
    # own.  A regular first vector close to it grabs that line first.
    d = catalog.lookup("SL(3,R)")
    nv = nonvanishing_roots(d, (1, 1, -2))
    assert [ln for ln in singular_lines(d) if nonvanishing_roots(d, ln) <= nv] == [(1, 1, -2)]
    assert singularize_frame(d, [(3, 2, -5), (1, 0, -1)]).vectors[0] == (1, 1, -2)
    with pytest.raises(NoAdmissibleRay):
        singularize_frame(d, [(3, 2, -5), (1, 1, -2)])


_SPACES = ["SL(4,R)", "Sp(6,R)", "G2(2)", "SU(3,2)"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(_SPACES), st.data())
def test_singularize_properties_random(sid, data):
    d = catalog.lookup(sid)
    rs = d.root_system
    coef = st.integers(-5, 5)
    frame = []
    for _ in range(rs.rank):
        c = [data.draw(coef) for _ in rs.simple_roots]
        frame.append(tuple(sum(ci * a[k] for ci, a in zip(c, rs.simple_roots)) for k in range(rs.ambient_dim)))
    if linalg.rank(frame) != rs.rank:
        with pytest.raises(NotAFrame):
            singularize_frame(d, frame)
        return
    try:
        res = singularize_frame(d, frame)
    except NoAdmissibleRay:
        # must be genuine: some vector has no admissible independent line
        return
    assert linalg.rank(res.vectors) == rs.rank
    for v, ln, ok in zip(frame, res.vectors, res.containment):
        assert ok
        assert is_maximally_singular(d, ln)
        assert nonvanishing_roots(d, ln) <= nonvanishing_roots(d, v)
        assert q_dim(d, ln) <= q_dim(d, v)


def test_singularize_regular_frames_always_succeed():
    d = catalog.lookup("SL(4,R)")
    frame = [(3, 1, -1, -3), (5, 2, -3, -4), (7, 4, -2, -9)]
    assert linalg.rank(frame) == 3
    res = singularize_frame(d, frame)
    assert all(res.containment)
