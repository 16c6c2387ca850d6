import json

import pytest

from symspread.census import CensusReport, classify_all_planes, parallel_map, resolve_workers
from symspread.census.fastgeom import geometry_fields, tables_for
from symspread.census.planes import subspace_chunks
from symspread.errors import BudgetExceeded
from symspread.matrix_proj import gaussian_binomial, pattern_sizes, projective_points
from symspread.veronese import secant_value


def _square(x):
    return x * x


def test_parallel_map_keeps_order():
    assert parallel_map(_square, range(20), 1) == parallel_map(_square, range(20), 3)


def test_resolve_workers(monkeypatch):
    monkeypatch.setenv("SYMSPREAD_THREADS", "3")
    assert resolve_workers() == 3
    assert resolve_workers(2) == 2
    monkeypatch.delenv("SYMSPREAD_THREADS")
    assert resolve_workers() == 1
    with pytest.raises(ValueError):
        resolve_workers(0)


def test_geometry_fields():
    F, E = geometry_fields(4)
    assert (F.order, E.order) == (4, 64) and F.tower.degrees == (1, 2, 3)
    F, E = geometry_fields(3)
    assert (F.order, E.order) == (3, 27)


@pytest.mark.parametrize("Q", [2, 3])
def test_vector_tables(Q):
    tab = tables_for(Q)
    F = tab.field
    for v in list(projective_points(5, F))[:200]:
        code = int(tab.encode([v])[0])
        assert tab.on_secant[code] == (secant_value(v, F) == 0)
    rows = tab.encode([[[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]]])
    assert tab.span_codes(rows).shape == (1, Q + 1)


def test_chunks_cover_everything():
    for Q in (2, 3):
        ch = subspace_chunks(2, Q, chunk=100)
        assert sum(b - a for _, a, b in ch) == sum(pattern_sizes(5, 2, Q)) == gaussian_binomial(6, 3, Q)


def test_classify_q2():
    r = classify_all_planes(2)
    c = r.counts
    assert c["planes"] == 1395
    assert (c["conic"], c["tangent"], c["nucleus"], c["unclassified"]) == (7, 7, 1, 0)
    assert c["contained"] == 15 and c["contained-solids"] == 0 and c["solids"] == 651
    assert c["contained"] + c["has-rational-points"] + c["disjoint"] == c["planes"]


def test_classify_q3():
    c = classify_all_planes(3).counts
    assert c["planes"] == gaussian_binomial(6, 3, 3) == 33880
    assert c["solids"] == 11011
    assert (c["conic"], c["tangent"], c["nucleus"], c["unclassified"]) == (13, 13, 0, 0)
    assert c["contained-solids"] == 0


def test_census_order_cap():
    with pytest.raises(BudgetExceeded):
        classify_all_planes(5)


def test_report_serialisation():
    r = CensusReport("x", {"a": 1}, {"b": 2, "a": 1}, [{"k": 1}], elapsed_ms=17)
    d = json.loads(r.to_json())
    assert d["elapsed_ms"] is None and list(d["counts"]) == ["a", "b"]
    assert json.loads(r.to_json(timing=True))["elapsed_ms"] == 17
    assert CensusReport.from_json(r.to_json()).counts == r.counts
    assert r.to_csv().splitlines() == ["tag,count", "a,1", "b,2"]


def test_report_identical_across_workers():
    a = classify_all_planes(2, workers=1).to_json()
    b = classify_all_planes(2, workers=2).to_json()
    assert a == b
