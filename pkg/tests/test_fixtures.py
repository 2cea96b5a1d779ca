import pytest

from layersem.errors import LayerSemError, ModelError
from layersem.fixtures import (CONSEQUENCE, FIXTURE_IDS, EXAMPLE, all_fixtures, chain, fixture,
                               in_multiplication_type, in_subtraction_type, is_modular_addition,
                               modular_mult_universe, representative, run_repeated_addition,
                               verify_notes)
from layersem.model import Valuation, validate_configuration
from layersem.semantics import semantics_table


def mod4(a):
    # independent of representative(): map into [-2, 1] by hand
    r = a % 4
    return r - 4 if r >= 2 else r


def test_every_fixture_is_valid_and_notes_hold(fixtures_list):
    for fx in fixtures_list:
        assert validate_configuration(fx.config).ok, fx.id
        assert verify_notes(fx, budget=2**16) == [], fx.id
        assert all(n.source in (EXAMPLE, CONSEQUENCE) for n in fx.notes)


def test_fixture_lookup():
    assert fixture("fg_loop").id == "fg_loop"
    assert fixture("chain(3)").config.names == ("l0", "l1", "l2", "l3")
    with pytest.raises(LayerSemError, match="unknown fixture"):
        fixture("nope")
    assert "chain(n)" in FIXTURE_IDS
    assert [f.id for f in all_fixtures()][:3] == ["chain(0)", "chain(1)", "chain(2)"]


def test_fixtures_are_rebuilt_equal():
    for a, b in zip(all_fixtures(), all_fixtures()):
        assert a.config == b.config


@pytest.mark.parametrize("n", [0, 1, 2, 4])
def test_chain_shape(n):
    c = chain(n).config
    assert len(c.layers) == n + 1
    assert len(c.attachment) == 2 * n
    assert verify_notes(chain(n)) == []


def test_representative():
    assert [representative(a, 1) for a in range(-4, 5)] == [mod4(a) for a in range(-4, 5)]


def test_repeated_addition_table_m1():
    inst = modular_mult_universe(1)
    run = run_repeated_addition(inst.tables["add"], inst.tables["sub"], 1)
    assert len(run) == 16
    for (x, y), z in run.items():
        assert z == (mod4(x * y) if y >= 0 else 0), (x, y)


def test_mult_layer_m1_outputs_nonnegative_multiplication():
    inst = modular_mult_universe(1)
    expected = {(x, y): mod4(x * y) if y >= 0 else 0 for x in range(-2, 2) for y in range(-2, 2)}
    assert inst.tables["mult_nonneg"] == expected
    table = semantics_table(inst.config, "mult")
    assert len(table.entries) == 1 * 3
    for outs in table.entries.values():
        assert outs == {Valuation.of({"o": "mult_nonneg"})}


def test_type_predicates_m1():
    inst = modular_mult_universe(1)
    t, r = inst.tables, inst.rejected
    assert is_modular_addition(t["add"], 1)
    assert not is_modular_addition(r["add_off_by_one"], 1)
    for name in ("sub", "sub_partial", "sub_zero_elsewhere"):
        assert in_subtraction_type(t[name], 1), name
    assert not in_subtraction_type(r["sub_off_by_one"], 1)
    assert in_multiplication_type(t["mult"], 1) and in_multiplication_type(t["mult_nonneg"], 1)
    assert not in_multiplication_type(r["mult_off_by_one"], 1)
    assert not in_multiplication_type(r["mult_partial"], 1)


def test_port_types_m1():
    u = modular_mult_universe(1).universe
    assert u.port_type["i1"] == {"add"}
    assert u.port_type["i2"] == {"sub", "sub_partial", "sub_zero_elsewhere"}
    assert u.port_type["o"] == {"mult", "mult_nonneg"}


@pytest.mark.parametrize("m", [2, 3])
def test_larger_ranges_still_consistent(m):
    inst = modular_mult_universe(m)
    assert validate_configuration(inst.config).ok
    run = run_repeated_addition(inst.tables["add"], inst.tables["sub"], m)
    assert run == inst.tables["mult_nonneg"]


@pytest.mark.parametrize("m", [0, 4])
def test_range_outside_supported(m):
    with pytest.raises(ModelError):
        modular_mult_universe(m)
