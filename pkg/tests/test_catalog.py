import json
from fractions import Fraction

import pytest

from flatframe import catalog
from flatframe.errors import InconsistentCatalog, OrbitBudgetExceeded, UnknownSpace, UnsupportedParams
from flatframe.rootsystem import build_root_system, reflect


@pytest.mark.parametrize("t,n,count", [
    ("A", 5, 15), ("A", 8, 36), ("B", 3, 9), ("C", 3, 9), ("BC", 3, 12), ("D", 5, 20), ("D", 4, 12),
    ("E", 6, 36), ("E", 7, 63), ("E", 8, 120), ("F", 4, 24), ("G", 2, 6),
])
def test_root_counts(t, n, count):
    rs = build_root_system(t, n, {"long": 1, "short": 1, "middle": 1, "doubled": 1})
    assert len(rs.positive_roots) == count
    assert len(rs.simple_roots) == n


def test_closed_form_root_counts():
    for n in range(1, 9):
        assert len(build_root_system("A", n, {"long": 1}).positive_roots) == n * (n + 1) // 2
        assert len(build_root_system("C", n, {"long": 1, "short": 1}).positive_roots) == n * n
    for n in range(3, 9):
        assert len(build_root_system("D", n, {"long": 1}).positive_roots) == n * (n - 1)


def test_canonical_order_and_coefficients():
    rs = catalog.lookup("SL(6,R)").root_system
    heights = [r.height for r in rs.positive_roots]
    assert heights == sorted(heights)
    assert rs.simple_indices == (0, 1, 2, 3, 4)
    for r in rs.positive_roots:
        assert all(c >= 0 for c in r.coefficients)
        recon = [sum(c * a[k] for c, a in zip(r.coefficients, rs.simple_roots)) for k in range(rs.ambient_dim)]
        assert tuple(recon) == r.vector


def test_reduced_types_have_no_proportional_roots():
    for sid in ["SL(5,R)", "Sp(6,R)", "G2(2)", "F4(4)", "E6(6)"]:
        vecs = [r.vector for r in catalog.lookup(sid).root_system.positive_roots]
        for v in vecs:
            assert tuple(2 * x for x in v) not in vecs


def test_bc_contains_doubled_roots():
    rs = catalog.lookup("SU(3,2)").root_system
    vecs = {r.vector: r for r in rs.positive_roots}
    assert vecs[(2, 0)].orbit_tag == "doubled"
    assert vecs[(1, 0)].orbit_tag == "short"
    assert vecs[(1, 1)].orbit_tag == "middle"


def test_lookup_examples():
    d = catalog.lookup("SL(6,R)")
    assert (d.rank, d.dim_x, d.root_system.type_label) == (5, 20, "A5")
    assert {r.multiplicity for r in d.root_system.positive_roots} == {1}
    d = catalog.lookup("Sp(4,R)")
    assert (d.rank, d.dim_x, d.root_system.type_label, len(d.root_system.positive_roots)) == (2, 6, "C2", 4)
    d = catalog.lookup("SL(2,H)")
    assert (d.rank, d.dim_x) == (1, 5)
    assert [r.multiplicity for r in d.root_system.positive_roots] == [4]


def test_multiplicity_tables():
    assert catalog.multiplicity_table(catalog.lookup("SU(3,2)")) == {"short": 2, "middle": 2, "doubled": 1}
    assert catalog.multiplicity_table(catalog.lookup("SL(4,C)")) == {"long": 2}
    assert catalog.multiplicity_table(catalog.lookup("G2(2)")) == {"short": 1, "long": 1}


def test_dimension_identity_for_every_entry():
    for d in catalog.catalog_entries():
        assert d.rank + d.root_system.total_multiplicity == d.dim_x, d.id


def test_multiplicity_constant_on_weyl_orbits():
    for d in catalog.catalog_entries():
        rs = d.root_system
        mult = {r.vector: r.multiplicity for r in rs.positive_roots}
        for r in rs.positive_roots:
            for a in rs.simple_roots:
                img = tuple(int(x) for x in reflect(a, r.vector))
                key = img if img in mult else tuple(-x for x in img)
                assert mult[key] == r.multiplicity, d.id


def test_validation_rejects_bad_data(monkeypatch):
    entry = catalog._sl(4, "R", "SL(4,R)")
    bad = catalog._Entry(entry.family, entry.params, entry.type_label, entry.rank, entry.mults,
                         entry.dim_x + 1, entry.min_qdim)
    monkeypatch.setattr(catalog, "_parse_single", lambda text: bad)
    catalog.lookup.cache_clear()
    try:
        with pytest.raises(InconsistentCatalog):
            catalog.lookup("SL(4,R)")
        bad2 = catalog._Entry(entry.family, entry.params, entry.type_label, entry.rank, entry.mults,
                              entry.dim_x, entry.min_qdim + 1)
        monkeypatch.setattr(catalog, "_parse_single", lambda text: bad2)
        with pytest.raises(InconsistentCatalog):
            catalog.lookup("SL(4,R)")
    finally:
        monkeypatch.undo()
        catalog.lookup.cache_clear()


@pytest.mark.parametrize("sid", ["Foo(3)", "SL(3,Q)", "E6(5)", "SL(a,R)", "SU(3)"])
def test_unknown_ids(sid):
    with pytest.raises(UnknownSpace):
        catalog.lookup(sid)


@pytest.mark.parametrize("sid", ["SU(2,3)", "SL(14,R)", "SO(2,2)", "Sp(3,R)", "SO(4,C)"])
def test_unsupported_params(sid):
    with pytest.raises(UnsupportedParams):
        catalog.lookup(sid)


def test_id_normalisation_and_aliases():
    assert catalog.lookup("E7(−25)").id == "E7(-25)"
    assert catalog.lookup("H^3").id == "SO(3,1)"
    su = catalog.lookup("SU(2,2)")
    so = catalog.lookup("SO(4,2)")
    assert su.alias_of == "SO(4,2)"
    assert [r.vector for r in su.root_system.positive_roots] == [r.vector for r in so.root_system.positive_roots]


def test_products():
    p = catalog.lookup("SL(3,R) × SO(4,1)")
    a, b = catalog.lookup("SL(3,R)"), catalog.lookup("SO(4,1)")
    assert p.is_product and p.id == "SL(3,R)×SO(4,1)"
    assert p.rank == a.rank + b.rank
    assert p.dim_x == a.dim_x + b.dim_x
    assert len(p.root_system.positive_roots) == len(a.root_system.positive_roots) + len(b.root_system.positive_roots)
    assert catalog.lookup("SL(3,R)xSO(4,1)") == p


def test_weyl_orbit_examples():
    c2 = catalog.lookup("Sp(4,R)")
    assert catalog.weyl_orbit(c2, (1, 0)) == {(Fraction(s), Fraction(0)) for s in (1, -1)} | {
        (Fraction(0), Fraction(s)) for s in (1, -1)}
    a2 = catalog.lookup("SL(3,R)")
    orb = catalog.weyl_orbit(a2, (1, 1, -2))
    assert len(orb) == 3
    assert {tuple(sorted(v)) for v in orb} == {(-2, 1, 1)}
    assert catalog.weyl_orbit(a2, (0, 0, 0)) == {(0, 0, 0)}


def test_weyl_orbit_closed_and_capped():
    d = catalog.lookup("G2(2)")
    v = (3, -1, -2)
    orb = catalog.weyl_orbit(d, v)
    assert tuple(Fraction(x) for x in v) in orb
    for w in orb:
        for a in d.root_system.simple_roots:
            assert reflect(a, w) in orb
    with pytest.raises(OrbitBudgetExceeded):
        catalog.weyl_orbit(catalog.lookup("SL(6,R)"), (1, 2, 3, 4, 5, -15), cap=100)


def test_json_export():
    d = catalog.lookup("Sp(4,R)")
    data = json.loads(catalog.to_json(d))
    assert data["rank"] == 2 and data["dim_x"] == 6 and data["family"] == "Sp"
    assert len(data["roots"]) == 4
    assert data["simple_root_indices"] == [0, 1]
    assert {tuple(r["coords"]) for r in data["roots"]} == {(1, -1), (0, 2), (1, 1), (2, 0)}
