"""Attachment closure and the configuration semantics of a layer.

The semantics of layer ``l`` at an open-input valuation ``mu`` is computed
by constraint filtering: enumerate valuations ``nu`` of the closure of
``out(l)`` and keep those that

* agree with ``mu`` on the open inputs inside the closure,
* give every attached input the service of the output it is attached to,
* for every output in the closure, match some output valuation that the
  owning layer's behavior offers for ``nu``'s values at that layer's inputs
  (compared only on the owning layer's outputs that lie inside the closure).

Cyclic attachments need no special treatment under this reading.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterator, Mapping

from .errors import BudgetExceededError, ModelError
from .model import (Configuration, Layer, Valuation, is_valuation_of, open_inputs,
                    project, valuation_space)

DEFAULT_STATE_BUDGET = 10**6


def _resolve(config: Configuration, layer) -> Layer:
    return config.layer(layer.name if isinstance(layer, Layer) else layer)


@dataclass(frozen=True)
class ClosureResult:
    layer: str
    ports: frozenset
    iterations: int


def closure_step(config: Configuration, layer, ports: frozenset) -> frozenset:
    """One application of the closure operator to the port set ``ports``."""
    layer = _resolve(config, layer)
    result = set(layer.outputs)
    for i in ports:
        if i in config.attachment:
            result.add(config.attachment[i])
    for r in config.layers:
        if not ports.isdisjoint(r.outputs):
            result |= r.inputs
    return frozenset(result)


def closure_iterates(config: Configuration, layer) -> list[frozenset]:
    """The chain F^0(∅) ⊆ F^1(∅) ⊆ ... up to and including the fixpoint."""
    layer = _resolve(config, layer)
    chain = [frozenset()]
    while True:
        nxt = closure_step(config, layer, chain[-1])
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)


def attachment_closure(config: Configuration, layer) -> ClosureResult:
    """Least port set containing ``out(layer)`` that is closed under attachment.

    Closed means: an attached input brings in its output, and an output
    brings in all inputs of the layer owning it.  ``iterations`` counts the
    rounds that grew the set.
    """
    layer = _resolve(config, layer)
    chain = closure_iterates(config, layer)
    return ClosureResult(layer.name, chain[-1], len(chain) - 1)


@dataclass(frozen=True)
class SemanticsTable:
    layer: str
    open_inputs: frozenset
    entries: Mapping[Valuation, frozenset]

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    __hash__ = None

    def __eq__(self, other):
        if not isinstance(other, SemanticsTable):
            return NotImplemented
        return self.open_inputs == other.open_inputs and dict(self.entries) == dict(other.entries)

    def __getitem__(self, mu: Valuation) -> frozenset:
        return self.entries[mu]

    def sorted_entries(self) -> list[tuple[Valuation, list[Valuation]]]:
        return [(mu, sorted(self.entries[mu])) for mu in sorted(self.entries)]


class ClosureFrame:
    """Indexed view of one layer's closure used by the enumerators.

    ``skip`` names a layer whose behavior constraint is left out of the
    filter; the caller then evaluates it separately for many candidate
    behaviors of that layer.
    """

    def __init__(self, config: Configuration, layer, skip: str | None = None):
        self.config = config
        self.layer = _resolve(config, layer)
        self.closure = attachment_closure(config, self.layer).ports
        self.ports = tuple(sorted(self.closure))
        index = {p: k for k, p in enumerate(self.ports)}
        self.index = index
        attachment = config.attachment
        universe = config.universe

        self.free = [p for p in self.ports if p not in attachment]
        self.derived = [(index[i], index[attachment[i]], universe.port_type[i])
                        for i in self.ports if i in attachment]
        opens = open_inputs(config)
        self.open = tuple(p for p in self.ports if p in opens)
        self.open_idx = [index[p] for p in self.open]
        self.out_idx = [index[p] for p in sorted(self.layer.outputs)]
        self.out_ports = tuple(sorted(self.layer.outputs))

        owners = {}
        for p in self.ports:
            if universe.direction[p] == "out":
                r = project(p, config)
                owners[r.name] = r
        self.checks = []
        self.skipped = None
        for name in sorted(owners):
            r = owners[name]
            in_ports = sorted(r.inputs)
            covered = sorted(r.outputs & self.closure)
            in_idx = [index[p] for p in in_ports]
            cov_idx = [index[p] for p in covered]
            if name == skip:
                self.skipped = (r, in_ports, covered, in_idx, cov_idx)
                continue
            allowed = {}
            for key, outs in r.behavior.rows.items():
                kt = tuple(s for _, s in key.items)
                allowed[kt] = {tuple(xi[p] for p in covered) for xi in outs}
            self.checks.append((in_idx, cov_idx, allowed))

    def product_size(self, fixed: Mapping[str, str] | None = None) -> int:
        n = 1
        universe = self.config.universe
        for p in self.free:
            n *= 1 if fixed and p in fixed else len(universe.port_type[p])
        return n

    def candidates(self, budget: int = DEFAULT_STATE_BUDGET,
                   fixed: Mapping[str, str] | None = None) -> Iterator[tuple]:
        """Yield closure valuations (as tuples over ``self.ports``) passing the filter."""
        size = self.product_size(fixed)
        if size > budget:
            raise BudgetExceededError(
                f"candidate valuations for the closure of layer {self.layer.name!r}", size, budget)
        universe = self.config.universe
        domains = []
        for p in self.free:
            if fixed and p in fixed:
                domains.append((fixed[p],))
            else:
                domains.append(sorted(universe.port_type[p]))
        free_idx = [self.index[p] for p in self.free]
        width = len(self.ports)
        derived = self.derived
        checks = self.checks
        for combo in itertools.product(*domains):
            nu = [None] * width
            for k, s in zip(free_idx, combo):
                nu[k] = s
            ok = True
            for i_k, o_k, t in derived:
                s = nu[o_k]
                if s not in t:
                    ok = False
                    break
                nu[i_k] = s
            if not ok:
                continue
            for in_idx, cov_idx, allowed in checks:
                row = allowed.get(tuple(nu[k] for k in in_idx))
                if row is None or tuple(nu[k] for k in cov_idx) not in row:
                    ok = False
                    break
            if ok:
                yield tuple(nu)

    def to_valuation(self, nu: tuple, idx=None, ports=None) -> Valuation:
        if idx is None:
            return Valuation(tuple(zip(self.ports, nu)))
        return Valuation(tuple(zip(ports, (nu[k] for k in idx))))


def _check_mu(config: Configuration, mu: Valuation) -> None:
    expected = open_inputs(config)
    if not is_valuation_of(mu, expected, config.universe):
        raise ModelError(f"{mu} is not a valuation of the open inputs {sorted(expected)}")


def consistent_valuations(config: Configuration, layer, mu: Valuation,
                          budget: int = DEFAULT_STATE_BUDGET) -> list[Valuation]:
    """All closure valuations consistent with ``mu``, in canonical order."""
    _check_mu(config, mu)
    frame = ClosureFrame(config, layer)
    fixed = {p: mu[p] for p in frame.open}
    return sorted(frame.to_valuation(nu) for nu in frame.candidates(budget, fixed))


def config_semantics(config: Configuration, layer, mu: Valuation,
                     budget: int = DEFAULT_STATE_BUDGET) -> frozenset:
    """The set of output valuations of ``layer`` obtainable at ``mu``."""
    _check_mu(config, mu)
    frame = ClosureFrame(config, layer)
    fixed = {p: mu[p] for p in frame.open}
    return frozenset(frame.to_valuation(nu, frame.out_idx, frame.out_ports)
                     for nu in frame.candidates(budget, fixed))


def table_from_candidates(config: Configuration, frame: ClosureFrame, rows, budget: int) -> SemanticsTable:
    """Assemble a semantics table from ``(open-key, output-tuple)`` rows."""
    opens = open_inputs(config)
    space = _open_space(config, budget)
    grouped: dict[tuple, set] = {}
    for key, out in rows:
        grouped.setdefault(key, set()).add(out)
    entries = {}
    for mu in space:
        key = tuple(mu[p] for p in frame.open)
        entries[mu] = frozenset(Valuation(tuple(zip(frame.out_ports, out)))
                                for out in grouped.get(key, ()))
    return SemanticsTable(frame.layer.name, opens, entries)


def _open_space(config: Configuration, budget: int) -> tuple[Valuation, ...]:
    opens = open_inputs(config)
    size = 1
    for p in opens:
        size *= len(config.universe.port_type[p])
    if size > budget:
        raise BudgetExceededError("open-input valuations", size, budget)
    return valuation_space(opens, config.universe)


def semantics_table(config: Configuration, layer, budget: int = DEFAULT_STATE_BUDGET) -> SemanticsTable:
    """Tabulate the semantics of ``layer`` for every open-input valuation."""
    frame = ClosureFrame(config, layer)
    rows = ((tuple(nu[k] for k in frame.open_idx), tuple(nu[k] for k in frame.out_idx))
            for nu in frame.candidates(budget))
    return table_from_candidates(config, frame, rows, budget)
