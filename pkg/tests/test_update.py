import random

import pytest

from layersem.dependency import check_prop1, enumerate_behavior_tables, random_behavior_table
from layersem.errors import ModelError, UnknownLayerError
from layersem.fixtures import FG_MU, fg_f_prime, fg_loop, fg_loop_updated, simple_two_layer
from layersem.model import (BehaviorTable, Valuation, open_inputs, ports_in, ports_out,
                            validate_configuration, valuation_space)
from layersem.semantics import semantics_table
from layersem.update import UpdateSpec, update_configuration, update_layer


def test_update_gives_the_updated_fixture():
    c = update_configuration(fg_loop().config, UpdateSpec("l_f", fg_f_prime()))
    assert c == fg_loop_updated().config


def test_update_is_persistent():
    c = fg_loop().config
    before = c.layer("l_f").behavior
    update_configuration(c, UpdateSpec("l_f", fg_f_prime()))
    assert c.layer("l_f").behavior == before


def test_identity_update_changes_nothing():
    c = fg_loop().config
    for layer in c.layers:
        same = update_configuration(c, UpdateSpec(layer.name, layer.behavior))
        assert same == c
        for l2 in c.layers:
            assert semantics_table(same, l2) == semantics_table(c, l2)


def test_update_is_idempotent():
    c = fg_loop().config
    spec = UpdateSpec("l_f", fg_f_prime())
    once = update_configuration(c, spec)
    assert update_configuration(once, spec) == once


def test_updates_of_different_layers_commute():
    c = simple_two_layer().config
    u = c.universe
    a = UpdateSpec("l", BehaviorTable.constant(["i0"], ["o0", "o1", "o2"], u, []))
    b = UpdateSpec("l'", BehaviorTable.constant(["i0'", "i1'", "i2'"], ["o0'", "o1'", "o2'"], u,
                                                [{"o0'": "D", "o1'": "E", "o2'": "G"}]))
    ab = update_configuration(update_configuration(c, a), b)
    ba = update_configuration(update_configuration(c, b), a)
    assert ab == ba


def test_empty_behavior_silences_layer():
    c = fg_loop().config
    u = c.universe
    silent = update_configuration(c, UpdateSpec("l_g", BehaviorTable.constant(["i1", "i1'"], ["o1", "o1'"], u, [])))
    mu = Valuation.of(FG_MU)
    assert semantics_table(silent, "l_g")[mu] == frozenset()
    # l_f reads o1' through its attached input, so it loses every output too
    assert semantics_table(silent, "l_f")[mu] == frozenset()


def test_update_keeps_ports_and_attachment():
    c = fg_loop().config
    layer = c.layer("l_g")
    for table in list(enumerate_behavior_tables(layer, c.universe))[:64]:
        d = update_configuration(c, UpdateSpec("l_g", table))
        assert d.attachment == c.attachment
        assert (ports_in(d), ports_out(d), open_inputs(d)) == (ports_in(c), ports_out(c), open_inputs(c))
        assert d.names == c.names
        assert d.layer("l_g").behavior == table


def test_update_rejects_wrong_ports():
    c = fg_loop().config
    with pytest.raises(ModelError, match="does not match"):
        update_configuration(c, UpdateSpec("l_g", fg_f_prime()))


def test_update_rejects_partial_table():
    c = fg_loop().config
    keys = valuation_space(["i0", "i0'"], c.universe)
    partial = BehaviorTable({"i0", "i0'"}, {"o0", "o0'"}, {keys[0]: frozenset()})
    with pytest.raises(ModelError, match="not a layer"):
        update_configuration(c, UpdateSpec("l_f", partial))
    # Without a universe there is nothing to check totality against.
    assert update_layer(c.layer("l_f"), partial).behavior == partial


def test_update_unknown_target():
    with pytest.raises(UnknownLayerError):
        update_configuration(fg_loop().config, UpdateSpec("l_h", fg_f_prime()))


def test_random_tables_make_valid_configurations(population):
    rng = random.Random(7)
    for label, c in population[:150]:
        for layer in c.layers:
            table = random_behavior_table(layer, c.universe, rng)
            assert validate_configuration(update_configuration(c, UpdateSpec(layer.name, table))).ok, label


def test_prop1_on_fixtures(fixtures_list):
    for fx in fixtures_list:
        ok, checked = check_prop1(fx.config)
        assert ok, fx.id
        assert checked >= len(fx.config.layers)
