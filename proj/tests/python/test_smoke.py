import foarith
import pytest


def test_rank_and_render():
    assert foarith.quantifier_rank("exists x. (P(x) & (forall y. E(x,y)))") == 2
    assert "P(x)" in foarith.render("exists x. P(x)")
    with pytest.raises(ValueError):
        foarith.quantifier_rank("Q(x)")


def test_evaluate_on_graph():
    s = foarith.graph_structure(3, [(0, 1), (1, 2)])
    assert foarith.evaluate("exists x. exists y. E(x,y)", s)
    assert not foarith.evaluate("exists x. E(x,x)", s, mode="naive")
    with pytest.raises(ValueError):
        foarith.evaluate("exists x. E(x,x)", s, mode="fast")


def test_thresholds():
    assert [foarith.threshold_n(k) for k in (1, 2, 3, 7)] == [5, 16, 52, 429]
    assert foarith.vc_threshold(1) == 52


def test_brute_force_oracles():
    path = [(0, 1), (1, 2), (2, 3)]
    assert foarith.min_vertex_cover(4, path) == 2
    assert foarith.brute_force_vc(4, path, 2)
    assert not foarith.brute_force_vc(4, path, 1)


def test_tuple_arithmetic_fixture():
    assert foarith.tuple_mul(10, [0, 4], [0, 4]) == [1, 6]
    assert foarith.tuple_add(10, [9, 9], [0, 1]) is None


def test_suite_report():
    r = foarith.run_suite("psid", d=2, m=2)
    assert r["checked"] == 16 and r["mismatches"] == []
    with pytest.raises(ValueError):
        foarith.run_suite("nope")
