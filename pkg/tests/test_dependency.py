import pytest

from layersem import dependency as dep
from layersem.errors import BudgetExceededError, LayerSemError, UnknownLayerError
from layersem.fixtures import (SIMPLE_MU, chain, empty_type_self_loop, fg_loop, lonely_output,
                               simple_g, simple_two_layer, three_chain)
from layersem.generate import Bounds, random_configuration
from layersem.model import (BehaviorTable, Configuration, Layer, Universe, Valuation,
                            validate_configuration)
from layersem.semantics import config_semantics
from layersem.update import UpdateSpec, update_configuration
from oracles import reachability_closure

V = Valuation.of


def test_syntactic_dependency_examples():
    assert dep.syntactic_dependency(three_chain().config).sorted_pairs() == [("l", "l'"), ("l'", "l''")]
    assert dep.syntactic_dependency(fg_loop().config).sorted_pairs() == [("l_f", "l_g"), ("l_g", "l_f")]
    assert len(dep.syntactic_dependency(lonely_output().config)) == 0
    assert ("l", "l") in dep.syntactic_dependency(empty_type_self_loop().config)


def test_closures_of_three_chain():
    c = three_chain().config
    plus = dep.syntactic_relation(c, dep.SYNTACTIC_PLUS)
    star = dep.syntactic_relation(c, dep.SYNTACTIC_STAR)
    assert plus.sorted_pairs() == [("l", "l'"), ("l", "l''"), ("l'", "l''")]
    assert star.pairs == plus.pairs | {("l", "l"), ("l'", "l'"), ("l''", "l''")}
    assert plus.kind == dep.SYNTACTIC_PLUS and star.kind == dep.SYNTACTIC_STAR


def test_fg_loop_plus_is_reflexive_through_the_cycle():
    plus = dep.syntactic_relation(fg_loop().config, dep.SYNTACTIC_PLUS)
    assert ("l_f", "l_f") in plus and ("l_g", "l_g") in plus


def test_unknown_relation_kind():
    with pytest.raises(ValueError):
        dep.syntactic_relation(fg_loop().config, "bogus")


def test_closures_match_graph_reachability(population):
    for label, c in population:
        syn = dep.syntactic_dependency(c)
        assert dep.transitive_closure(syn).pairs == reachability_closure(syn.pairs, c.names, False), label
        assert dep.reflexive_transitive_closure(syn).pairs == reachability_closure(syn.pairs, c.names, True)


def test_dependents_of():
    c = chain(2).config
    assert dep.dependents_of(c, "l2") == {"l1"}
    assert dep.dependents_of(c, "l2", dep.SYNTACTIC_PLUS) == {"l0", "l1"}
    assert dep.dependents_of(c, "l0", dep.SYNTACTIC_STAR) == {"l0"}
    with pytest.raises(UnknownLayerError):
        dep.dependents_of(c, "l9")


def test_relation_rejects_unknown_layers():
    with pytest.raises(LayerSemError):
        dep.DependencyRelation({"a"}, {("a", "b")}, dep.SYNTACTIC)


def test_behavior_table_count_and_enumeration():
    c = fg_loop().config
    layer = c.layer("l_f")
    # 2 input valuations, 4 output valuations
    assert dep.behavior_table_count(layer, c.universe) == (2**4) ** 2
    small = lonely_output().config
    tables = list(dep.enumerate_behavior_tables(small.layers[0], small.universe))
    assert len(tables) == 4 == len({repr(t.sorted_rows()) for t in tables})


def test_semantic_dependency_simple_two_layer():
    c = simple_two_layer().config
    assert dep.semantic_dependency(c, "l", "l'")
    assert not dep.semantic_dependency(c, "l'", "l")


def test_witness_update_changes_upper_output():
    c = simple_two_layer().config
    mu = V(SIMPLE_MU)
    updated = update_configuration(c, UpdateSpec("l", simple_g()))
    assert config_semantics(updated, "l'", mu) == {V({"o0'": "D", "o1'": "E", "o2'": "G"})}
    assert config_semantics(c, "l'", mu) == {V({"o0'": "D", "o1'": "E", "o2'": "F"})}


def test_found_witness_really_changes_semantics():
    c = simple_two_layer().config
    g = dep.find_semantic_witness(c, "l", "l'")
    updated = update_configuration(c, UpdateSpec("l", g))
    mu = V(SIMPLE_MU)
    assert config_semantics(updated, "l'", mu) != config_semantics(c, "l'", mu)
    assert dep.find_semantic_witness(c, "l'", "l") is None


def test_counterexample_fixtures():
    c = empty_type_self_loop().config
    assert ("l", "l") not in dep.semantic_dependency_relation(c)
    c = lonely_output().config
    assert dep.semantic_dependency_relation(c).sorted_pairs() == [("l", "l")]
    c = three_chain().config
    sem = dep.semantic_dependency_relation(c)
    assert ("l", "l''") in sem and ("l", "l''") not in dep.syntactic_dependency(c)


def test_table_budget():
    with pytest.raises(BudgetExceededError) as err:
        dep.semantic_dependency(fg_loop().config, "l_f", "l_g", budget=100)
    assert err.value.size == 256
    with pytest.raises(BudgetExceededError, match=r"pair \(l_f, l_f\)"):
        dep.semantic_dependency_relation(fg_loop().config, budget=100)


def test_fast_and_naive_semantic_dependency_agree(population):
    checked = 0
    for label, c in population[:220]:
        for a in c.names:
            if dep.behavior_table_count(c.layer(a), c.universe) > 256:
                continue
            for b in c.names:
                fast = dep.semantic_dependency(c, a, b)
                assert fast == dep.semantic_dependency_naive(c, a, b), (label, a, b)
                checked += 1
    assert checked > 400


def test_usable_examples():
    assert dep.is_usable(fg_loop().config) == (True, V({"i0": "B", "i1": "D"}))
    assert dep.is_usable(three_chain().config) == (True, Valuation())
    assert dep.is_usable(empty_type_self_loop().config) == (False, None)


def test_empty_configuration():
    c = Configuration(Universe.from_ports({}, {}), (), {})
    assert dep.is_usable(c) == (True, Valuation())
    rep = dep.check_theorems(c)
    assert rep.ok and rep.usable and rep.semantic == [] and rep.syntactic == []


def test_check_theorems_on_fixtures(fixtures_list):
    for fx in fixtures_list:
        rep = dep.check_theorems(fx.config, budget=2**16, config_id=fx.id)
        assert rep.ok, rep.to_json()
        assert not rep.skipped


def test_check_theorems_unusable_reports_not_applicable():
    rep = dep.check_theorems(empty_type_self_loop().config)
    assert rep.usable is False
    assert rep.thm1_holds is None and rep.corollary_holds is None
    assert rep.thm2_holds is True
    assert rep.star_within_semantic is False
    assert rep.to_json()["ok"] is True


def test_check_theorems_records_skips():
    rep = dep.check_theorems(fg_loop().config, budget=10)
    assert set(rep.skipped) == {"thm1", "thm2", "corollary"}
    assert rep.semantic is None and rep.thm2_holds is None


def _sinks():
    # two layers without output ports: nothing to observe, so nothing depends on anything
    u = Universe.from_ports(inputs={"a": {"A"}, "b": {"A"}}, outputs={})
    layers = tuple(Layer(n, {p}, set(), BehaviorTable.constant([p], [], u, [{}])) for n, p in (("x", "a"), ("y", "b")))
    return Configuration(u, layers, {})


def test_output_less_layers_have_no_semantic_dependency():
    c = _sinks()
    assert validate_configuration(c).ok
    assert len(dep.semantic_dependency_relation(c)) == 0
    rep = dep.check_theorems(c)
    assert rep.usable
    assert rep.thm1_holds is False
    assert rep.thm1_counterexample == ("x", "x")


def test_missing_pairs_all_target_output_less_layers(population):
    """Every pair of the reflexive-transitive closure missing from the semantic
    relation on a usable configuration ends at a layer without output ports."""
    seen = 0
    for label, c in population:
        rep = dep.check_theorems(c, budget=2**16)
        if not rep.usable:
            continue
        missing = set(rep.syntactic_star) - set(rep.semantic)
        for _, target in missing:
            assert not c.layer(target).outputs, (label, target)
            seen += 1
    assert seen > 0


def test_star_equals_semantic_when_every_layer_has_outputs(population):
    checked = 0
    for label, c in population:
        if not all(l.outputs for l in c.layers):
            continue
        rep = dep.check_theorems(c, budget=2**16)
        if rep.usable:
            assert rep.semantic == rep.syntactic_star, label
            checked += 1
    assert checked > 100


def test_generator_is_deterministic():
    b = Bounds(layers=3, ports=2, type_size=2)
    assert random_configuration(11, b) == random_configuration(11, b)
    assert any(random_configuration(s, b) != random_configuration(11, b) for s in range(5))


def test_generator_respects_bounds(population):
    for label, c in population:
        if not label.startswith("seed"):
            continue
        assert validate_configuration(c).ok, label
        assert len(c.layers) <= 3
        for layer in c.layers:
            assert len(layer.inputs) <= 2 and len(layer.outputs) <= 2
        assert all(len(t) <= 3 for t in c.universe.port_type.values())


def test_bounds_parse():
    assert Bounds.parse("layers=2,ports=1") == Bounds(layers=2, ports=1)
    with pytest.raises((ValueError, LayerSemError)):
        Bounds.parse("colour=3")
