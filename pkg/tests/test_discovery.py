import os
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import build_registry
from oracle import brute_force
from svcdisco import kernels
from svcdisco.discovery import (
    CostPadding,
    Query,
    QueryError,
    Selection,
    heavy_match,
    matches_selection,
    search,
    search_indexed,
    search_scan,
)
from svcdisco.registry import Registry, ServiceRecord
from svcdisco.taxonomy import category_universe


def _record(cid, tokens=(), name="X"):
    return ServiceRecord("svc-1", name, {t: 1 for t in tokens}, cid, "u", "t")


def test_matches_selection_examples():
    rec = _record("010101")
    assert matches_selection(rec, Selection.from_labels(["Collective"]))
    assert not matches_selection(rec, Selection.from_labels(["Notifying", "PayPerUse"]))
    assert matches_selection(rec, Selection())


def test_heavy_match_examples():
    doc = _record("010101", ["weather", "forecast", "daily"])
    assert heavy_match(doc, ["weather", "forecast"]) == 1
    assert heavy_match(_record("010101", ["currency", "rates"]), ["weather"]) == 0
    assert heavy_match(_record("010101", ["weather"]), ["weather", "free"]) == Fraction(1, 2)
    with pytest.raises(QueryError):
        heavy_match(doc, [])


def test_query_normalisation():
    q = Query.parse("Weather  FORECAST weather", "notifying, Pay-per-Use")
    assert q.keywords == ("weather", "forecast")
    assert q.selection.labels() == ["Notifying", "PayPerUse"]
    with pytest.raises(QueryError):
        Query.parse("   ")
    with pytest.raises(QueryError):
        Query.parse("x", "Bogus")


def test_scan_all_categories_counts():
    reg = build_registry(100, seed=2)
    res = search_scan(reg, Query(("weather",), Selection.everything()))
    assert (res.cost.nf_ops, res.cost.disc_ops) == (100, 100)
    assert (res.counts.x, res.counts.y) == (100, 0)


def test_scan_partial_selection_counts():
    reg = build_registry(100, seed=2)
    _, x = brute_force(reg.records, ["Collective"], ["weather"])
    res = search_scan(reg, Query(("weather",), Selection.from_labels(["Collective"])))
    assert res.counts.x == x
    assert res.counts.y == 100 - x
    assert res.cost.nf_ops == 100 and res.cost.disc_ops == x


def test_scan_empty_registry():
    res = search_scan(Registry(), Query(("weather",)))
    assert res.hits == ()
    assert (res.cost.nf_ops, res.cost.disc_ops) == (0, 0)


def test_indexed_bucket_arithmetic():
    reg = build_registry(200, seed=4)
    res = search_indexed(reg, Query(("weather",), Selection.from_labels(["Notifying"])))
    touched = [cid for cid in reg.class_index if cid.startswith("02")]
    assert res.cost.nf_ops == len(touched) <= 4
    every = search_indexed(reg, Query(("weather",)))
    assert every.cost.nf_ops == len(reg.class_index) <= 12
    assert every.hit_ids() == search_scan(reg, Query(("weather",))).hit_ids()


def test_scores_non_increasing_and_ties_by_insertion():
    reg = build_registry(200, seed=8)
    res = search_scan(reg, Query(("weather", "forecast", "ticket")))
    scores = [h.score for h in res.hits]
    assert scores == sorted(scores, reverse=True)
    for a, b in zip(res.hits, res.hits[1:]):
        if a.score == b.score:
            assert reg.position(a.record_id) < reg.position(b.record_id)


def test_all_selected_equals_none_selected():
    reg = build_registry(120, seed=6)
    a = search_scan(reg, Query(("flight", "hotel"), Selection.everything()))
    b = search_scan(reg, Query(("flight", "hotel"), Selection()))
    assert a.hits == b.hits and a.counts == b.counts
    assert (a.cost.nf_ops, a.cost.disc_ops) == (b.cost.nf_ops, b.cost.disc_ops)


def test_padding_does_not_change_results():
    reg = build_registry(60, seed=6)
    q = Query(("order", "flowers"), Selection.from_labels(["Interactive"]))
    assert search_scan(reg, q, CostPadding(3, 7)).hits == search_scan(reg, q).hits


def test_calibrated_padding_ratio():
    pad = CostPadding.calibrate(9, unit_ns=100)
    assert pad.nf_spin >= 1
    assert abs(pad.disc_spin - 9 * pad.nf_spin) <= 1


def test_search_mode_dispatch():
    reg = build_registry(30)
    q = Query(("weather",))
    assert search(reg, q, "indexed").hit_ids() == search(reg, q, "scan").hit_ids()
    with pytest.raises(QueryError):
        search(reg, q, "fuzzy")


@pytest.mark.parametrize("name", sorted(kernels.backends()))
def test_backends_agree_with_oracle(name):
    backend = kernels.backends()[name]
    reg = build_registry(150, seed=11)
    labels = ["Notifying", "FreeUnlimited", "Subscribe"]
    q = Query(("weather", "report", "card"), Selection.from_labels(labels))
    res = search_scan(reg, q, CostPadding(1, 2), backend=backend)
    hits, x = brute_force(reg.records, labels, q.keywords)
    assert [(h.record_id, h.score) for h in res.hits] == hits
    assert res.counts.x == x


def test_compiled_backend_selected_when_built():
    if "cython" not in kernels.backends():
        pytest.skip("compiled kernel not built")
    if os.environ.get("SVCDISCO_PURE_PYTHON", "") not in ("", "0"):
        pytest.skip("fallback forced by environment")
    assert kernels.BACKEND == "cython"


_labels = st.lists(st.sampled_from(category_universe()), unique=True)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 120), st.integers(0, 50), _labels, st.sampled_from(["weather", "price", "ticket report"]))
def test_scan_accounting_and_equivalence(size, seed, labels, kw):
    reg = build_registry(size, seed)
    q = Query.parse(kw, labels)
    scan = search_scan(reg, q)
    idx = search_indexed(reg, q)
    hits, x = brute_force(reg.records, labels, q.keywords)
    assert [(h.record_id, h.score) for h in scan.hits] == hits
    assert idx.hits == scan.hits
    assert scan.cost.nf_ops == scan.counts.x + scan.counts.y == size
    assert scan.cost.disc_ops == scan.counts.x == x == idx.cost.disc_ops


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 30), _labels, st.sampled_from(category_universe()))
def test_prefilter_monotone_within_criterion(seed, labels, extra):
    reg = build_registry(80, seed)
    base = Selection.from_labels(labels)
    grown = Selection.from_labels(labels + [extra])
    same_criterion_nonempty = (
        (extra in ("Collective", "Notifying", "Interactive") and base.behavior_set)
        or (extra not in ("Collective", "Notifying", "Interactive") and base.cost_set)
    )
    if not same_criterion_nonempty:
        return
    q0, q1 = Query(("weather",), base), Query(("weather",), grown)
    assert search_scan(reg, q1).counts.x >= search_scan(reg, q0).counts.x
    assert set(search_scan(reg, q0).hit_ids()) <= set(search_scan(reg, q1).hit_ids())
