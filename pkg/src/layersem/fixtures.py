"""Named example configurations and a stateless-service instantiation.

Each fixture carries machine-checkable notes: facts about usability,
dependency pairs and semantics entries that :func:`verify_notes` replays
against the analysis functions.  ``source`` on a note is "worked example"
when the fact is stated for that example in the literature, "derived"
when it was computed by hand for this package.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from .errors import LayerSemError, ModelError
from .model import BehaviorTable, Configuration, Layer, Universe, Valuation, validate_configuration

EXAMPLE = "example"
CONSEQUENCE = "consequence"


@dataclass(frozen=True)
class Note:
    kind: str  # "usable" | "syn" | "sem" | "star" | "semantics"
    args: tuple
    expected: Any
    source: str = CONSEQUENCE


@dataclass(frozen=True)
class Fixture:
    id: str
    config: Configuration
    notes: tuple = ()
    description: str = ""

    __hash__ = None

    @property
    def universe(self) -> Universe:
        return self.config.universe


def _table(inputs, outputs, rows):
    """Rows given as ``[(input-dict, [output-dict, ...]), ...]``."""
    return BehaviorTable(frozenset(inputs), frozenset(outputs),
                         {Valuation.of(k): frozenset(Valuation.of(v) for v in vs) for k, vs in rows})


def _layer(name, inputs, outputs, rows):
    return Layer(name, frozenset(inputs), frozenset(outputs), _table(inputs, outputs, rows))


# -- chain(n) ------------------------------------------------------------------

def chain(n: int) -> Fixture:
    """``n + 1`` stacked layers, each feeding two outputs into the next one.

    Layer ``lk`` owns the open input ``i0_k`` (all but ``l0`` also own
    ``i1_k`` and ``i2_k``), the outputs ``o0_k`` and, below the top,
    ``o1_k`` and ``o2_k``.  Every type is a singleton of a level-specific
    symbol and each layer forwards that symbol deterministically, which
    makes the chain usable.
    """
    if n < 0:
        raise ModelError("chain length must be nonnegative")
    inputs, outputs = {}, {}
    layers, attachment = [], {}
    for k in range(n + 1):
        ins = [f"i0_{k}"] + ([f"i1_{k}", f"i2_{k}"] if k > 0 else [])
        outs = [f"o0_{k}"] + ([f"o1_{k}", f"o2_{k}"] if k < n else [])
        inputs[f"i0_{k}"] = {"U"}
        if k > 0:
            inputs[f"i1_{k}"] = inputs[f"i2_{k}"] = {f"L{k - 1}"}
            attachment[f"i1_{k}"] = f"o1_{k - 1}"
            attachment[f"i2_{k}"] = f"o2_{k - 1}"
        outputs[f"o0_{k}"] = {f"R{k}"}
        if k < n:
            outputs[f"o1_{k}"] = outputs[f"o2_{k}"] = {f"L{k}"}
        key = {p: next(iter(inputs[p])) for p in ins}
        out = {p: next(iter(outputs[p])) for p in outs}
        layers.append(_layer(f"l{k}", ins, outs, [(key, [out])]))
    universe = Universe.from_ports(inputs, outputs)
    config = Configuration(universe, layers, attachment)
    syn = frozenset((f"l{k}", f"l{k + 1}") for k in range(n))
    notes = [Note("usable", (), True, CONSEQUENCE)]
    for a in range(n + 1):
        for b in range(n + 1):
            pair = (f"l{a}", f"l{b}")
            notes.append(Note("syn", pair, pair in syn, EXAMPLE))
            notes.append(Note("star", pair, a <= b, CONSEQUENCE))
    return Fixture(f"chain({n})", config, tuple(notes), "stacked layers with two links per level")


# -- the two-layer loop and its update ------------------------------------------

def _fg_universe() -> Universe:
    return Universe.from_ports(
        inputs={"i0": {"B"}, "i0'": {"X", "Y"}, "i1": {"D"}, "i1'": {"X", "Y"}},
        outputs={"o0": {"C", "F"}, "o0'": {"X", "Y"}, "o1": {"C", "F"}, "o1'": {"X", "Y"}},
    )


FG_ATTACHMENT = {"i0'": "o1'", "i1'": "o0'"}

F_ROWS = [({"i0": "B", "i0'": "X"}, [{"o0": "C", "o0'": "X"}]),
          ({"i0": "B", "i0'": "Y"}, [{"o0": "F", "o0'": "X"}])]
F_PRIME_ROWS = [({"i0": "B", "i0'": "X"}, [{"o0": "C", "o0'": "X"}]),
                ({"i0": "B", "i0'": "Y"}, [{"o0": "F", "o0'": "Y"}])]
G_ROWS = [({"i1": "D", "i1'": "X"}, [{"o1": "C", "o1'": "X"}]),
          ({"i1": "D", "i1'": "Y"}, [{"o1": "F", "o1'": "Y"}])]

FG_MU = {"i0": "B", "i1": "D"}


def fg_f_prime() -> BehaviorTable:
    """The replacement behavior for ``l_f`` that turns fg_loop into fg_loop_updated."""
    return _table(["i0", "i0'"], ["o0", "o0'"], F_PRIME_ROWS)


def _fg(f_rows) -> Configuration:
    l_f = _layer("l_f", ["i0", "i0'"], ["o0", "o0'"], f_rows)
    l_g = _layer("l_g", ["i1", "i1'"], ["o1", "o1'"], G_ROWS)
    return Configuration(_fg_universe(), (l_f, l_g), FG_ATTACHMENT)


def fg_loop() -> Fixture:
    notes = (
        Note("semantics", ("l_f", FG_MU), [{"o0": "C", "o0'": "X"}], EXAMPLE),
        Note("semantics", ("l_g", FG_MU), [{"o1": "C", "o1'": "X"}], EXAMPLE),
        Note("usable", (), True, CONSEQUENCE),
        Note("syn", ("l_f", "l_g"), True, CONSEQUENCE),
        Note("syn", ("l_g", "l_f"), True, CONSEQUENCE),
    )
    return Fixture("fg_loop", _fg(F_ROWS), notes, "two layers attached in a cycle")


def fg_loop_updated() -> Fixture:
    notes = (
        Note("semantics", ("l_f", FG_MU),
             [{"o0": "C", "o0'": "X"}, {"o0": "F", "o0'": "Y"}], EXAMPLE),
        Note("semantics", ("l_g", FG_MU),
             [{"o1": "C", "o1'": "X"}, {"o1": "F", "o1'": "Y"}], EXAMPLE),
    )
    return Fixture("fg_loop_updated", _fg(F_PRIME_ROWS), notes, "fg_loop after updating l_f")


# -- two layers, lower feeding upper -------------------------------------------

SIMPLE_MU = {"i0": "A", "i0'": "C"}
SIMPLE_G_ROWS = [({"i0": "A"}, [{"o0": "B", "o1": "X", "o2": "Z"}])]


def simple_g() -> BehaviorTable:
    """Replacement behavior for the lower layer that changes the upper layer's output."""
    return _table(["i0"], ["o0", "o1", "o2"], SIMPLE_G_ROWS)


def simple_two_layer() -> Fixture:
    universe = Universe.from_ports(
        inputs={"i0": {"A"}, "i0'": {"C"}, "i1'": {"X"}, "i2'": {"Y", "Z"}},
        outputs={"o0": {"B"}, "o1": {"X"}, "o2": {"Y", "Z"},
                 "o0'": {"D"}, "o1'": {"E"}, "o2'": {"F", "G"}},
    )
    lower = _layer("l", ["i0"], ["o0", "o1", "o2"],
                   [({"i0": "A"}, [{"o0": "B", "o1": "X", "o2": "Y"}])])
    upper = _layer("l'", ["i0'", "i1'", "i2'"], ["o0'", "o1'", "o2'"], [
        ({"i0'": "C", "i1'": "X", "i2'": "Y"}, [{"o0'": "D", "o1'": "E", "o2'": "F"}]),
        ({"i0'": "C", "i1'": "X", "i2'": "Z"}, [{"o0'": "D", "o1'": "E", "o2'": "G"}]),
    ])
    config = Configuration(universe, (lower, upper), {"i1'": "o1", "i2'": "o2"})
    notes = (
        Note("semantics", ("l", SIMPLE_MU), [{"o0": "B", "o1": "X", "o2": "Y"}], EXAMPLE),
        Note("semantics", ("l'", SIMPLE_MU), [{"o0'": "D", "o1'": "E", "o2'": "F"}], EXAMPLE),
        Note("sem", ("l", "l'"), True, EXAMPLE),
        Note("sem", ("l'", "l"), False, EXAMPLE),
        Note("syn", ("l", "l'"), True, CONSEQUENCE),
    )
    return Fixture("simple_two_layer", config, notes, "lower layer feeding an upper layer")


# -- three layers in a forwarding chain -------------------------------------------

def three_chain() -> Fixture:
    ab = {"A", "B"}
    universe = Universe.from_ports(inputs={"i'": ab, "i''": ab},
                                   outputs={"o": ab, "o'": ab, "o''": ab})
    bottom = _layer("l", [], ["o"], [({}, [{"o": "A"}])])
    middle = _layer("l'", ["i'"], ["o'"], [({"i'": s}, [{"o'": s}]) for s in sorted(ab)])
    top = _layer("l''", ["i''"], ["o''"], [({"i''": s}, [{"o''": s}]) for s in sorted(ab)])
    config = Configuration(universe, (bottom, middle, top), {"i'": "o", "i''": "o'"})
    notes = (
        Note("syn", ("l", "l'"), True, EXAMPLE),
        Note("syn", ("l'", "l''"), True, EXAMPLE),
        Note("syn", ("l", "l''"), False, EXAMPLE),
        Note("sem", ("l", "l''"), True, EXAMPLE),
        Note("star", ("l", "l''"), True, CONSEQUENCE),
        Note("usable", (), True, CONSEQUENCE),
    )
    return Fixture("three_chain", config, notes, "output forwarded through two layers")


# -- the two degenerate single-layer configurations --------------------------------

def empty_type_self_loop() -> Fixture:
    universe = Universe.from_ports(inputs={"i": set()}, outputs={"o": set()}, services=set())
    # No input valuation exists, so the only behavior is the empty table.
    layer = _layer("l", ["i"], ["o"], [])
    config = Configuration(universe, (layer,), {"i": "o"})
    notes = (
        Note("syn", ("l", "l"), True, EXAMPLE),
        Note("sem", ("l", "l"), False, EXAMPLE),
        Note("usable", (), False, CONSEQUENCE),
    )
    return Fixture("empty_type_self_loop", config, notes, "empty-typed ports attached to each other")


def lonely_output() -> Fixture:
    universe = Universe.from_ports(inputs={}, outputs={"o": {"A", "B"}})
    layer = _layer("l", [], ["o"], [({}, [{"o": "A"}])])
    config = Configuration(universe, (layer,), {})
    notes = (
        Note("sem", ("l", "l"), True, EXAMPLE),
        Note("syn", ("l", "l"), False, EXAMPLE),
        Note("usable", (), True, CONSEQUENCE),
    )
    return Fixture("lonely_output", config, notes, "one output port typed by two services")


_BUILDERS = {
    "fg_loop": fg_loop,
    "fg_loop_updated": fg_loop_updated,
    "simple_two_layer": simple_two_layer,
    "three_chain": three_chain,
    "empty_type_self_loop": empty_type_self_loop,
    "lonely_output": lonely_output,
}

FIXTURE_IDS = ("chain(n)",) + tuple(_BUILDERS)


def fixture(fixture_id: str) -> Fixture:
    m = re.fullmatch(r"chain\((\d+)\)", fixture_id)
    if m:
        return chain(int(m.group(1)))
    try:
        return _BUILDERS[fixture_id]()
    except KeyError:
        raise LayerSemError(f"unknown fixture {fixture_id!r}; known: {', '.join(FIXTURE_IDS)}") from None


def all_fixtures(chain_lengths=(0, 1, 2)) -> list[Fixture]:
    return [chain(n) for n in chain_lengths] + [build() for build in _BUILDERS.values()]


def verify_notes(fx: Fixture, budget: int | None = None) -> list[str]:
    """Replay every note of ``fx``; return descriptions of the ones that do not hold."""
    from . import dependency as dep
    from .semantics import config_semantics

    budget = budget or dep.DEFAULT_TABLE_BUDGET
    config = fx.config
    failures = []
    report = validate_configuration(config)
    if not report.ok:
        failures.append(f"{fx.id}: invalid configuration\n{report.describe()}")
        return failures
    syn = dep.syntactic_dependency(config)
    star = dep.reflexive_transitive_closure(syn)
    for note in fx.notes:
        if note.kind == "usable":
            got = dep.is_usable(config)[0]
        elif note.kind == "syn":
            got = note.args in syn
        elif note.kind == "star":
            got = note.args in star
        elif note.kind == "sem":
            got = dep.semantic_dependency(config, *note.args, budget=budget)
        elif note.kind == "semantics":
            layer, mu = note.args
            got = config_semantics(config, layer, Valuation.of(mu))
            expected = frozenset(Valuation.of(v) for v in note.expected)
            if got != expected:
                failures.append(f"{fx.id}: semantics of {layer} at {mu}: "
                                f"expected {sorted(map(str, expected))}, got {sorted(map(str, got))}")
            continue
        else:
            failures.append(f"{fx.id}: unknown note kind {note.kind!r}")
            continue
        if got != note.expected:
            failures.append(f"{fx.id}: {note.kind}{note.args}: expected {note.expected}, got {got}")
    return failures


# -- stateless arithmetic services ------------------------------------------------

def bint_range(m: int) -> list[int]:
    return list(range(-2**m, 2**m))


def representative(a: int, m: int) -> int:
    """The element of ``[-2^m, 2^m - 1]`` congruent to ``a`` modulo ``2^(m+1)``."""
    half = 2**m
    return (a + half) % (2 * half) - half


def is_modular_addition(table: dict, m: int) -> bool:
    xs = bint_range(m)
    return all(table.get((x, y)) == representative(x + y, m) for x in xs for y in xs)


def in_subtraction_type(table: dict, m: int) -> bool:
    """Agrees with modular subtraction wherever the first argument is positive and the second is 1."""
    return all(table.get((x, 1)) == representative(x - 1, m) for x in bint_range(m) if x > 0)


def in_multiplication_type(table: dict, m: int) -> bool:
    """Total, and multiplies modulo ``2^(m+1)`` whenever the second argument is nonnegative."""
    xs = bint_range(m)
    if any(table.get((x, y)) is None for x in xs for y in xs):
        return False
    return all(table[(x, y)] == representative(x * y, m) for x in xs for y in xs if y >= 0)


def run_repeated_addition(add: dict, sub: dict, m: int) -> dict:
    """Tabulate ``z := 0; while y > 0: z := add(x, z); y := sub(y, 1)``.

    An undefined ``add`` or ``sub`` result, or a loop exceeding the size of
    the number range, leaves the entry undefined (None).
    """
    xs = bint_range(m)
    limit = len(xs)
    result = {}
    for x in xs:
        for y in xs:
            z, yy, steps = 0, y, 0
            while z is not None and yy > 0:
                if steps > limit:
                    z = None
                    break
                z = add.get((x, z))
                yy = sub.get((yy, 1))
                steps += 1
                if yy is None:
                    z = None
            result[(x, y)] = z
    return result


@dataclass(frozen=True)
class StatelessInstance:
    """One multiplication layer over add/sub services, with curated service tables."""

    m: int
    universe: Universe
    layer: Layer
    tables: dict = field(hash=False)
    rejected: dict = field(hash=False)
    signatures: dict = field(hash=False)

    __hash__ = None

    @property
    def config(self) -> Configuration:
        return Configuration(self.universe, (self.layer,), {})


def modular_mult_universe(m: int) -> StatelessInstance:
    """Services as explicit function tables over ``[-2^m, 2^m - 1]``.

    ``i1`` admits only modular addition; ``i2`` admits three curated
    subtraction-like tables; ``o`` admits true modular multiplication and
    the table that is zero for negative second arguments.  The layer maps
    every input valuation to the ``o`` services that agree with the
    repeated-addition loop run on those inputs.
    """
    if not 1 <= m <= 3:
        raise ModelError(f"M must be between 1 and 3, got {m}")
    xs = bint_range(m)
    pairs = [(x, y) for x in xs for y in xs]
    rep = lambda a: representative(a, m)  # noqa: E731

    tables = {
        "add": {(x, y): rep(x + y) for x, y in pairs},
        "sub": {(x, y): rep(x - y) for x, y in pairs},
        "sub_partial": {(x, 1): rep(x - 1) for x in xs if x > 0},
        "sub_zero_elsewhere": {(x, y): rep(x - y) if x > 0 and y == 1 else 0 for x, y in pairs},
        "mult": {(x, y): rep(x * y) for x, y in pairs},
        "mult_nonneg": {(x, y): rep(x * y) if y >= 0 else 0 for x, y in pairs},
    }
    rejected = {
        "add_off_by_one": {**tables["add"], (0, 0): rep(1)},
        "sub_off_by_one": {**tables["sub"], (1, 1): rep(1)},
        "mult_off_by_one": {**tables["mult"], (1, 1): rep(0)},
        "mult_partial": {k: v for k, v in tables["mult"].items() if k[1] >= 0},
    }
    types = {
        "i1": {n for n in tables if is_modular_addition(tables[n], m)},
        "i2": {n for n in tables if in_subtraction_type(tables[n], m)},
        "o": {n for n in tables if in_multiplication_type(tables[n], m)},
    }
    designed = {"i1": {"add"}, "i2": {"sub", "sub_partial", "sub_zero_elsewhere"},
                "o": {"mult", "mult_nonneg"}}
    if types != designed:
        raise ModelError(f"curated tables do not match their intended types: {types}")
    for name, t in rejected.items():
        if name in tables or (is_modular_addition(t, m) and name.startswith("add")) \
                or (in_subtraction_type(t, m) and name.startswith("sub")) \
                or (in_multiplication_type(t, m) and name.startswith("mult")):
            raise ModelError(f"rejected table {name!r} passes its type predicate")

    universe = Universe.from_ports(inputs={"i1": types["i1"], "i2": types["i2"]},
                                   outputs={"o": types["o"]}, services=set(tables))

    def behave(mu):
        run = run_repeated_addition(tables[mu["i1"]], tables[mu["i2"]], m)
        return [{"o": name} for name in sorted(types["o"]) if tables[name] == run]

    behavior = BehaviorTable.from_function(["i1", "i2"], ["o"], universe, behave)
    layer = Layer("mult", frozenset({"i1", "i2"}), frozenset({"o"}), behavior)
    signatures = {"i1": "bint add(bint,bint)", "i2": "bint sub(bint,bint)",
                  "o": "bint mult(bint,bint)"}
    return StatelessInstance(m, universe, layer, tables, rejected, signatures)
