import itertools
from fractions import Fraction

import pytest

from tropchab.bounds import (
    KINDS,
    E,
    BoundRequest,
    bound,
    check_dagger,
    evaluate,
    gsp_bruteforce,
    gsp_order,
)
from tropchab.errors import HypothesisFailure, InvalidParameters, MissingParameter, SchemaError
from tropchab.fixtures import theta_graph
from tropchab.metric_graph import VertexWeightedMetricGraph
from tropchab.series import compute_Np


def test_closed_forms():
    assert bound("coleman", g=2, p=7, r=1, nFp=8) == 10
    assert bound("lorenzini_tucker", g=2, p=7, nSm=8) == 10
    assert bound("stoll", g=3, p=7, r=1, nFp=8) == 10
    assert bound("kzb", g=3, p=5, r=1, nSm=6) == 8
    assert bound("stoll_uniform_hyp", g=5, r=2) == 8 * 6 * 4 + 8 * 5
    assert bound("stoll_uniform_hyp", g=3, r=0) == 8 * 4 * 2 + 3
    assert bound("krzb_p3", g=3) == 490
    assert bound("krzb_general", g=3, p=3) == 490
    assert bound("rational_torsion", g=3) == 490
    assert bound("krzb_general", g=4, p=5) == (100 + 24 - 10 - 8) * 14


def test_krzb_general_matches_p3_form():
    for g in range(3, 51):
        assert bound("krzb_general", g=g, p=3) == bound("krzb_p3", g=g) == 84 * g * g - 98 * g + 28


def test_hypothesis_failures_are_named():
    cases = [
        ("coleman", dict(g=2, p=3, r=1, nFp=4), "p > 2g"),
        ("coleman", dict(g=2, p=7, r=2, nFp=4), "r < g"),
        ("stoll_uniform_hyp", dict(g=5, r=3), "r <= g - 3"),
        ("kzb", dict(g=4, p=5, r=2, nSm=1), "p > 2r + 2"),
        ("krzb_general", dict(g=2, p=3), "g >= 3"),
        ("krzb_p3", dict(g=5, r=3), "r <= g - 3"),
        ("coleman", dict(g=2, p=9, r=1, nFp=4), "p prime"),
        ("geometric_torsion", dict(g=3, p=3, variant="Q"), "g >= 4"),
        ("stoll_cover", dict(g=3, q=6, t=1), "q prime power"),
        ("stoll_cover", dict(g=3, q=5, t=4), "0 <= t <= g"),
    ]
    for kind, params, name in cases:
        with pytest.raises(HypothesisFailure) as exc:
            bound(kind, **params)
        assert exc.value.hypothesis == name


def test_missing_and_bad_parameters():
    with pytest.raises(MissingParameter):
        bound("coleman", g=2, p=7, r=1)
    with pytest.raises(InvalidParameters):
        bound("coleman", g=Fraction(5, 2), p=7, r=1, nFp=3)
    with pytest.raises(SchemaError):
        evaluate(BoundRequest("nonsense", {}))


def test_result_records_hypotheses():
    res = evaluate(BoundRequest("coleman", dict(g=2, p=7, r=1, nFp=8)))
    names = [n for n, ok in res.hypotheses if ok]
    assert "p > 2g" in names and "r < g" in names
    doc = res.to_json()
    assert doc["value"] == "10"


def test_request_from_json():
    req = BoundRequest.from_json({"kind": "wideopen_zeros", "parameters": {"g": 2, "p": 3, "d": 2, "a": "1/2"}})
    assert req.parameters["a"] == Fraction(1, 2)
    with pytest.raises(SchemaError):
        BoundRequest.from_json({"kind": "coleman", "parameters": {"g": 2.5}})
    with pytest.raises(SchemaError):
        BoundRequest.from_json({"parameters": {}})


def test_wideopen_and_cover():
    assert bound("wideopen_zeros", g=2, p=7, d=3, a=1) == 3 * compute_Np(7, 1, 3)
    assert bound("wideopen_zeros", g=2, p=7, d=3, a=1, no_leaves=True) == 3 * compute_Np(7, 1, 2)
    res = evaluate(BoundRequest("stoll_cover", dict(g=3, q=5, t=1)))
    assert res.details == {"balls": 27 * 2, "annuli": 4}
    assert res.value == 58


def test_gsp_examples():
    assert gsp_order(1, 2) == 6
    assert gsp_order(1, 3) == 48
    assert gsp_order(1, 4) == 180  # GL_2(F_4)
    with pytest.raises(InvalidParameters):
        gsp_order(1, 6)


def test_gsp_bruteforce():
    for g, q in [(1, 2), (1, 3), (1, 5), (2, 2), (2, 3)]:
        assert gsp_bruteforce(g, q) == gsp_order(g, q)


def test_gsp_g1_is_gl2():
    for q in (2, 3, 5):
        n = sum(
            1
            for a, b, c, d in itertools.product(range(q), repeat=4)
            if (a * d - b * c) % q
        )
        assert gsp_order(1, q) == n


def test_E_branches():
    assert E(2, 3) == gsp_order(2, 5)
    assert E(2, 5) == gsp_order(2, 7)
    assert E(3, 7) == gsp_order(3, 5)


def test_geometric_torsion():
    res = evaluate(BoundRequest("geometric_torsion", dict(g=4, p=3)))
    n = compute_Np(3, Fraction(1, 4 * E(4, 3)), 6)
    assert res.value == (16 * 16 - 48) * n
    assert res.details["Np"] == n
    q = evaluate(BoundRequest("geometric_torsion", dict(g=4, p=3, variant="Q")))
    assert q.value > res.value


def test_dagger():
    # K_{3,3}: genus 4, every vertex has valency 3 and weight 0
    k33 = VertexWeightedMetricGraph.build(
        list("abcxyz"),
        [(f"e{u}{v}", u, v, 1) for u in "abc" for v in "xyz"],
    )
    assert k33.genus == 4 and check_dagger(k33)
    # K_4: genus 3 equals the valency
    k4 = VertexWeightedMetricGraph.build(
        list("abcd"),
        [(f"e{x}{y}", x, y, 1) for x, y in itertools.combinations("abcd", 2)],
    )
    assert k4.genus == 3 and not check_dagger(k4)
    assert not check_dagger(theta_graph())
    # a weighted vertex pays twice its weight
    weighted = VertexWeightedMetricGraph.build(
        [("a", 1)] + list("bcxyz"),
        [(f"e{u}{v}", u, v, 1) for u in "abc" for v in "xyz"],
    )
    assert weighted.genus == 5 and not check_dagger(weighted)


def test_every_kind_has_an_evaluator():
    assert len(KINDS) == 11
    for kind in KINDS:
        with pytest.raises((MissingParameter, InvalidParameters)):
            evaluate(BoundRequest(kind, {}))
