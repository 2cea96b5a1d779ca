"""Syntactic and semantic dependency between layers, usability, theorem checks.

Semantic dependency is decided by brute force over every total behavior
table of the updated layer; nothing here assumes the relationship between
the syntactic and semantic relations, since that relationship is what
:func:`check_theorems` puts to the test.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Iterator

from .errors import BudgetExceededError, LayerSemError
from .model import (BehaviorTable, Configuration, Layer, Universe, Valuation, project,
                    valuation_space, validate_configuration)
from .semantics import (DEFAULT_STATE_BUDGET, ClosureFrame, _open_space, attachment_closure,
                        semantics_table, table_from_candidates)
from .update import UpdateSpec, update_configuration

log = logging.getLogger(__name__)

SYNTACTIC = "syntactic"
SYNTACTIC_PLUS = "syntactic+"
SYNTACTIC_STAR = "syntactic*"
SEMANTIC = "semantic"

DEFAULT_TABLE_BUDGET = 4096
DEFAULT_PROP1_SAMPLE = 256


@dataclass(frozen=True)
class DependencyRelation:
    """A binary relation over layer names; ``(a, b)`` reads "b depends on a"."""

    universe: frozenset
    pairs: frozenset
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        stray = {x for pair in self.pairs for x in pair} - self.universe
        if stray:
            raise LayerSemError(f"relation mentions unknown layers {sorted(stray)}")

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __le__(self, other: DependencyRelation) -> bool:
        return self.pairs <= other.pairs

    def sorted_pairs(self) -> list[tuple[str, str]]:
        return sorted(self.pairs)


def syntactic_dependency(config: Configuration) -> DependencyRelation:
    """``(l, l')`` whenever some input of ``l'`` is attached to an output of ``l``."""
    pairs = {(project(o, config).name, project(i, config).name)
             for i, o in config.attachment.items()}
    return DependencyRelation(config.names, pairs, SYNTACTIC)


def transitive_closure(rel: DependencyRelation) -> DependencyRelation:
    nodes = sorted(rel.universe)
    reach = {a: {b for (x, b) in rel.pairs if x == a} for a in nodes}
    # Warshall: after round k, paths through intermediates among nodes[:k+1] are included.
    for k in nodes:
        for a in nodes:
            if k in reach[a]:
                reach[a] |= reach[k]
    pairs = {(a, b) for a in nodes for b in reach[a]}
    return DependencyRelation(rel.universe, pairs, SYNTACTIC_PLUS)


def reflexive_transitive_closure(rel: DependencyRelation) -> DependencyRelation:
    plus = transitive_closure(rel)
    return DependencyRelation(rel.universe, plus.pairs | {(a, a) for a in rel.universe},
                              SYNTACTIC_STAR)


def syntactic_relation(config: Configuration, kind: str = SYNTACTIC) -> DependencyRelation:
    syn = syntactic_dependency(config)
    if kind == SYNTACTIC:
        return syn
    if kind == SYNTACTIC_PLUS:
        return transitive_closure(syn)
    if kind == SYNTACTIC_STAR:
        return reflexive_transitive_closure(syn)
    raise ValueError(f"unknown syntactic relation kind {kind!r}")


def dependents_of(config: Configuration, m: str, kind: str = SYNTACTIC) -> frozenset:
    """All layers that layer ``m`` depends on under the chosen relation."""
    config.layer(m)
    rel = syntactic_relation(config, kind)
    return frozenset(a for (a, b) in rel.pairs if b == m)


# -- behavior table enumeration -------------------------------------------

def behavior_table_count(layer: Layer, universe: Universe) -> int:
    n_out = len(valuation_space(layer.outputs, universe))
    n_in = len(valuation_space(layer.inputs, universe))
    return (2 ** n_out) ** n_in


def _subsets(items):
    for mask in range(2 ** len(items)):
        yield mask, frozenset(items[j] for j in range(len(items)) if mask >> j & 1)


def enumerate_behavior_tables(layer: Layer, universe: Universe) -> Iterator[BehaviorTable]:
    """Every total behavior table over the ports of ``layer``, in a fixed order."""
    keys = valuation_space(layer.inputs, universe)
    outs = valuation_space(layer.outputs, universe)
    choices = [frozenset(s) for _, s in _subsets(outs)]
    for combo in itertools.product(choices, repeat=len(keys)):
        yield BehaviorTable(layer.inputs, layer.outputs, dict(zip(keys, combo)))


def random_behavior_table(layer: Layer, universe: Universe, rng: random.Random) -> BehaviorTable:
    keys = valuation_space(layer.inputs, universe)
    outs = valuation_space(layer.outputs, universe)
    rows = {k: frozenset(v for v in outs if rng.random() < 0.5) for k in keys}
    return BehaviorTable(layer.inputs, layer.outputs, rows)


def _check_table_budget(config: Configuration, l: Layer, budget: int) -> int:
    count = behavior_table_count(l, config.universe)
    if count > budget:
        raise BudgetExceededError(f"behavior tables for layer {l.name!r}", count, budget)
    return count


# -- semantic dependency ---------------------------------------------------

def find_semantic_witness(config: Configuration, l: str, l2: str,
                          budget: int = DEFAULT_TABLE_BUDGET,
                          state_budget: int = DEFAULT_STATE_BUDGET) -> BehaviorTable | None:
    """A behavior table for ``l`` whose update changes the semantics of ``l2``, or None.

    Every table is considered.  Closure valuations that do not involve
    ``l``'s behavior are filtered once; the remaining constraint on ``l`` is
    evaluated per row, and tables whose rows keep exactly the same
    candidates produce identical semantics, so each distinct combination of
    per-row outcomes is checked once.
    """
    layer = config.layer(l)
    config.layer(l2)
    _check_table_budget(config, layer, budget)
    universe = config.universe

    frame = ClosureFrame(config, l2, skip=l)
    baseline = semantics_table(config, l2, state_budget)
    if frame.skipped is None:
        return None
    _, _, covered, in_idx, cov_idx = frame.skipped

    cands = []
    for nu in frame.candidates(state_budget):
        cands.append((tuple(nu[k] for k in frame.open_idx),
                      tuple(nu[k] for k in frame.out_idx),
                      tuple(nu[k] for k in in_idx),
                      tuple(nu[k] for k in cov_idx)))

    keys = valuation_space(layer.inputs, universe)
    outs = valuation_space(layer.outputs, universe)
    per_row = []
    for key in keys:
        kt = tuple(s for _, s in key.items)
        mine = [c for c in cands if c[2] == kt]
        patterns: dict[frozenset, frozenset] = {}
        for _, subset in _subsets(outs):
            proj = {tuple(xi[p] for p in covered) for xi in subset}
            surviving = frozenset(c for c in mine if c[3] in proj)
            patterns.setdefault(surviving, subset)
        per_row.append(list(patterns.items()))

    for combo in itertools.product(*per_row):
        rows = [(c[0], c[1]) for surviving, _ in combo for c in surviving]
        table = table_from_candidates(config, frame, rows, state_budget)
        if table != baseline:
            return BehaviorTable(layer.inputs, layer.outputs,
                                 {key: subset for key, (_, subset) in zip(keys, combo)})
    return None


def semantic_dependency(config: Configuration, l: str, l2: str,
                        budget: int = DEFAULT_TABLE_BUDGET,
                        state_budget: int = DEFAULT_STATE_BUDGET) -> bool:
    """Whether some behavioral update of ``l`` changes the semantics of ``l2``."""
    return find_semantic_witness(config, l, l2, budget, state_budget) is not None


def semantic_dependency_naive(config: Configuration, l: str, l2: str,
                              budget: int = DEFAULT_TABLE_BUDGET,
                              state_budget: int = DEFAULT_STATE_BUDGET) -> bool:
    """Reference decision procedure: rebuild and re-evaluate for every table.

    Slow; kept as the independent check of :func:`semantic_dependency`.
    """
    layer = config.layer(l)
    config.layer(l2)
    _check_table_budget(config, layer, budget)
    baseline = semantics_table(config, l2, state_budget)
    for table in enumerate_behavior_tables(layer, config.universe):
        updated = update_configuration(config, UpdateSpec(l, table))
        if semantics_table(updated, l2, state_budget) != baseline:
            return True
    return False


def semantic_dependency_relation(config: Configuration, budget: int = DEFAULT_TABLE_BUDGET,
                                 state_budget: int = DEFAULT_STATE_BUDGET) -> DependencyRelation:
    pairs = set()
    for a in config.names:
        for b in config.names:
            try:
                if semantic_dependency(config, a, b, budget, state_budget):
                    pairs.add((a, b))
            except BudgetExceededError as exc:
                raise BudgetExceededError(f"pair ({a}, {b}): {exc.what}", exc.size, exc.budget) from exc
    return DependencyRelation(config.names, pairs, SEMANTIC)


def is_usable(config: Configuration,
              state_budget: int = DEFAULT_STATE_BUDGET) -> tuple[bool, Valuation | None]:
    """Whether one open-input valuation gives every layer a nonempty semantics.

    Returns the first such valuation in canonical order as the witness.
    """
    tables = [semantics_table(config, l, state_budget) for l in config.layers]
    for mu in _open_space(config, state_budget):
        if all(t[mu] for t in tables):
            return True, mu
    return False, None


# -- theorem checks ----------------------------------------------------------

@dataclass
class TheoremReport:
    """Outcome of checking the dependency results on one configuration.

    ``None`` means not applicable (the theorem-1 family on unusable
    configurations) or skipped; skipped checks are listed in ``skipped``.
    """

    config_id: str = ""
    usable: bool | None = None
    usable_witness: Valuation | None = None
    thm2_holds: bool | None = None
    thm2_counterexample: tuple | None = None
    thm1_holds: bool | None = None
    thm1_counterexample: tuple | None = None
    corollary_holds: bool | None = None
    star_within_semantic: bool | None = None
    lemma1_holds: bool | None = None
    lemma1_offender: tuple | None = None
    prop1_holds: bool | None = None
    prop1_checked: int = 0
    syntactic: list = field(default_factory=list)
    syntactic_star: list = field(default_factory=list)
    semantic: list | None = None
    skipped: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        checks = (self.thm2_holds, self.thm1_holds, self.corollary_holds,
                  self.lemma1_holds, self.prop1_holds)
        return all(c is not False for c in checks)

    def to_json(self) -> dict:
        def pair(p):
            return list(p) if p is not None else None

        return {
            "config": self.config_id,
            "usable": self.usable,
            "usable_witness": self.usable_witness.as_dict() if self.usable_witness is not None else None,
            "thm1_holds": self.thm1_holds,
            "thm1_counterexample": pair(self.thm1_counterexample),
            "thm2_holds": self.thm2_holds,
            "thm2_counterexample": pair(self.thm2_counterexample),
            "corollary_holds": self.corollary_holds,
            "syntactic_star_within_semantic": self.star_within_semantic,
            "lemma1_holds": self.lemma1_holds,
            "lemma1_offender": pair(self.lemma1_offender),
            "prop1_holds": self.prop1_holds,
            "prop1_checked": self.prop1_checked,
            "syntactic": [list(p) for p in self.syntactic],
            "syntactic_star": [list(p) for p in self.syntactic_star],
            "semantic": [list(p) for p in self.semantic] if self.semantic is not None else None,
            "skipped": dict(sorted(self.skipped.items())),
            "ok": self.ok,
        }


def lemma1_offender(config: Configuration, star: DependencyRelation | None = None):
    """First ``(port, layer)`` whose closure holds a port of a non-dependency, else None."""
    if star is None:
        star = reflexive_transitive_closure(syntactic_dependency(config))
    for l in config.layers:
        for p in sorted(attachment_closure(config, l).ports):
            if (project(p, config).name, l.name) not in star:
                return (p, l.name)
    return None


def check_prop1(config: Configuration, sample: int = DEFAULT_PROP1_SAMPLE, seed: int = 0) -> tuple[bool, int]:
    """Validate updated configurations; all tables per layer if few, else a seeded sample."""
    rng = random.Random(seed)
    checked = 0
    for layer in config.layers:
        count = behavior_table_count(layer, config.universe)
        if count <= sample:
            tables = enumerate_behavior_tables(layer, config.universe)
        else:
            tables = (random_behavior_table(layer, config.universe, rng) for _ in range(sample))
        for table in tables:
            checked += 1
            try:
                updated = update_configuration(config, UpdateSpec(layer.name, table))
            except LayerSemError:
                return False, checked
            if not validate_configuration(updated).ok:
                return False, checked
    return True, checked


def check_theorems(config: Configuration, budget: int = DEFAULT_TABLE_BUDGET,
                   config_id: str = "", state_budget: int = DEFAULT_STATE_BUDGET,
                   prop1_sample: int = DEFAULT_PROP1_SAMPLE, seed: int = 0) -> TheoremReport:
    """Compute both sides of every dependency statement for ``config``."""
    report = TheoremReport(config_id=config_id)
    syn = syntactic_dependency(config)
    star = reflexive_transitive_closure(syn)
    report.syntactic = syn.sorted_pairs()
    report.syntactic_star = star.sorted_pairs()

    offender = lemma1_offender(config, star)
    report.lemma1_holds = offender is None
    report.lemma1_offender = offender

    report.prop1_holds, report.prop1_checked = check_prop1(config, prop1_sample, seed)

    try:
        report.usable, report.usable_witness = is_usable(config, state_budget)
    except BudgetExceededError as exc:
        report.skipped["usable"] = f"budget: {exc}"
    try:
        sem = semantic_dependency_relation(config, budget, state_budget)
    except BudgetExceededError as exc:
        for name in ("thm1", "thm2", "corollary"):
            report.skipped[name] = f"budget: {exc}"
        return report
    report.semantic = sem.sorted_pairs()

    extra = sorted(sem.pairs - star.pairs)
    report.thm2_holds = not extra
    report.thm2_counterexample = extra[0] if extra else None
    if extra:
        log.error("semantic dependency %s outside the reflexive-transitive syntactic closure "
                  "in %r; this indicates an implementation bug", extra[0], config_id)

    missing = sorted(star.pairs - sem.pairs)
    report.star_within_semantic = not missing
    if report.usable:
        report.thm1_holds = not missing
        report.thm1_counterexample = missing[0] if missing else None
        report.corollary_holds = sem.pairs == star.pairs
    elif "usable" in report.skipped:
        report.skipped["thm1"] = report.skipped["corollary"] = "usability unknown"
    return report
