"""Ports, services, valuations, layers and configurations.

Everything here is an immutable value.  Services and ports are opaque
string identifiers; every type is an explicit finite set of services, so
all valuation spaces can be enumerated.  Wherever a set is enumerated or
serialized, identifiers are taken in lexicographic order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping

from .errors import ModelError, TypeViolationError, UnknownLayerError, UnknownPortError

INPUT = "in"
OUTPUT = "out"


@dataclass(frozen=True)
class Universe:
    """The global port and service sets together with port directions and types."""

    services: frozenset
    direction: Mapping[str, str]
    port_type: Mapping[str, frozenset]

    def __post_init__(self):
        services = frozenset(self.services)
        direction = dict(self.direction)
        port_type = {p: frozenset(t) for p, t in self.port_type.items()}
        if set(direction) != set(port_type):
            missing = set(direction) ^ set(port_type)
            raise ModelError(f"ports without both a direction and a type: {sorted(missing)}")
        for port, d in direction.items():
            if d not in (INPUT, OUTPUT):
                raise ModelError(f"port {port!r} has direction {d!r}; expected 'in' or 'out'")
        for port, t in port_type.items():
            stray = t - services
            if stray:
                raise ModelError(f"type of port {port!r} uses undeclared services {sorted(stray)}")
        object.__setattr__(self, "services", services)
        object.__setattr__(self, "direction", MappingProxyType(direction))
        object.__setattr__(self, "port_type", MappingProxyType(port_type))

    __hash__ = None

    @classmethod
    def from_ports(cls, inputs: Mapping[str, Iterable[str]], outputs: Mapping[str, Iterable[str]],
                   services: Iterable[str] | None = None) -> Universe:
        overlap = set(inputs) & set(outputs)
        if overlap:
            raise ModelError(f"ports declared as both input and output: {sorted(overlap)}")
        port_type = {**{p: frozenset(t) for p, t in inputs.items()},
                     **{p: frozenset(t) for p, t in outputs.items()}}
        if services is None:
            services = frozenset().union(*port_type.values()) if port_type else frozenset()
        direction = {**{p: INPUT for p in inputs}, **{p: OUTPUT for p in outputs}}
        return cls(frozenset(services), direction, port_type)

    @property
    def ports(self) -> frozenset:
        return frozenset(self.direction)

    @property
    def inputs(self) -> frozenset:
        return frozenset(p for p, d in self.direction.items() if d == INPUT)

    @property
    def outputs(self) -> frozenset:
        return frozenset(p for p, d in self.direction.items() if d == OUTPUT)

    def type_of(self, port: str) -> frozenset:
        try:
            return self.port_type[port]
        except KeyError:
            raise UnknownPortError(port) from None


@dataclass(frozen=True, order=True)
class Valuation:
    """A finite assignment of services to ports, stored as sorted pairs.

    A bare ``Valuation`` is not checked against any universe; use
    :func:`make_valuation` for a type-checked one.
    """

    items: tuple = ()

    @classmethod
    def of(cls, bindings: Mapping[str, str] | Iterable[tuple[str, str]] = ()) -> Valuation:
        pairs = list(bindings.items()) if isinstance(bindings, Mapping) else list(bindings)
        ports = [p for p, _ in pairs]
        if len(set(ports)) != len(ports):
            dup = sorted({p for p in ports if ports.count(p) > 1})
            raise ModelError(f"duplicate ports in valuation: {dup}")
        return cls(tuple(sorted(pairs)))

    @property
    def ports(self) -> frozenset:
        return frozenset(p for p, _ in self.items)

    def as_dict(self) -> dict:
        return dict(self.items)

    def __getitem__(self, port: str) -> str:
        for p, s in self.items:
            if p == port:
                return s
        raise KeyError(port)

    def __contains__(self, port) -> bool:
        return any(p == port for p, _ in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def restrict(self, ports: Iterable[str]) -> Valuation:
        keep = set(ports)
        return Valuation(tuple((p, s) for p, s in self.items if p in keep))

    def __str__(self):
        if not self.items:
            return "[]"
        ports = ",".join(p for p, _ in self.items)
        services = ",".join(s for _, s in self.items)
        return f"[{ports}↦{services}]"


def make_valuation(pairs: Iterable[tuple[str, str]] | Mapping[str, str], universe: Universe) -> Valuation:
    """Build a valuation, checking every binding against the port types."""
    val = Valuation.of(pairs)
    for port, service in val.items:
        allowed = universe.type_of(port)
        if service not in allowed:
            raise TypeViolationError(port, service, allowed)
    return val


def is_valuation_of(val: Valuation, ports: Iterable[str], universe: Universe) -> bool:
    """True iff ``val`` is a total, type-respecting valuation of exactly ``ports``."""
    ports = frozenset(ports)
    if val.ports != ports:
        return False
    return all(p in universe.port_type and s in universe.port_type[p] for p, s in val.items)


def space_size(ports: Iterable[str], universe: Universe) -> int:
    n = 1
    for p in ports:
        n *= len(universe.type_of(p))
    return n


def valuation_space(ports: Iterable[str], universe: Universe) -> tuple[Valuation, ...]:
    """All valuations of ``ports``: the product of their types, in canonical order."""
    ordered = sorted(set(ports))
    domains = [sorted(universe.type_of(p)) for p in ordered]
    return tuple(Valuation(tuple(zip(ordered, combo))) for combo in itertools.product(*domains))


@dataclass(frozen=True)
class BehaviorTable:
    """A total map from input valuations to sets of output valuations.

    An empty row means the layer produces no output for that input;
    several valuations in a row mean nondeterministic choice.
    """

    inputs: frozenset
    outputs: frozenset
    rows: Mapping[Valuation, frozenset]

    def __post_init__(self):
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        rows = {k: frozenset(v) for k, v in self.rows.items()}
        object.__setattr__(self, "rows", MappingProxyType(rows))

    __hash__ = None

    def __eq__(self, other):
        if not isinstance(other, BehaviorTable):
            return NotImplemented
        return (self.inputs == other.inputs and self.outputs == other.outputs
                and dict(self.rows) == dict(other.rows))

    def __call__(self, mu: Valuation) -> frozenset:
        return self.rows[mu]

    @classmethod
    def from_function(cls, inputs: Iterable[str], outputs: Iterable[str], universe: Universe,
                      fn: Callable[[dict], Iterable[Mapping[str, str]]]) -> BehaviorTable:
        """Tabulate ``fn`` over every input valuation.

        ``fn`` receives the input valuation as a plain dict and returns
        the output valuations as dicts.
        """
        rows = {}
        for mu in valuation_space(inputs, universe):
            rows[mu] = frozenset(Valuation.of(out) for out in fn(mu.as_dict()))
        return cls(frozenset(inputs), frozenset(outputs), rows)

    @classmethod
    def constant(cls, inputs: Iterable[str], outputs: Iterable[str], universe: Universe,
                 result: Iterable[Mapping[str, str]] = ()) -> BehaviorTable:
        result = [dict(r) for r in result]
        return cls.from_function(inputs, outputs, universe, lambda _mu: result)

    def sorted_rows(self) -> list[tuple[Valuation, list[Valuation]]]:
        return [(k, sorted(self.rows[k])) for k in sorted(self.rows)]


@dataclass(frozen=True)
class Layer:
    name: str
    inputs: frozenset
    outputs: frozenset
    behavior: BehaviorTable

    def __post_init__(self):
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))

    __hash__ = None

    @property
    def ports(self) -> frozenset:
        return self.inputs | self.outputs

    def fun(self, mu: Valuation) -> frozenset:
        return self.behavior.rows[mu]


@dataclass(frozen=True)
class Configuration:
    """A set of layers plus a partial attachment map from inputs to outputs.

    Construction does not validate; call :func:`validate_configuration`.
    Layers are kept sorted by name.
    """

    universe: Universe
    layers: tuple = ()
    attachment: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(sorted(self.layers, key=lambda l: l.name)))
        object.__setattr__(self, "attachment", MappingProxyType(dict(self.attachment)))

    __hash__ = None

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return (self.universe == other.universe and self.layers == other.layers
                and dict(self.attachment) == dict(other.attachment))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(l.name for l in self.layers)

    @cached_property
    def _by_name(self) -> dict:
        return {l.name: l for l in self.layers}

    @cached_property
    def _owner(self) -> dict:
        owner = {}
        for layer in self.layers:
            for p in layer.ports:
                owner.setdefault(p, layer)
        return owner

    def layer(self, name: str) -> Layer:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownLayerError(name, self._by_name) from None

    def __iter__(self) -> Iterator[Layer]:
        return iter(self.layers)


def ports_in(config: Configuration) -> frozenset:
    return frozenset().union(*(l.inputs for l in config.layers))


def ports_out(config: Configuration) -> frozenset:
    return frozenset().union(*(l.outputs for l in config.layers))


def ports_all(config: Configuration) -> frozenset:
    return ports_in(config) | ports_out(config)


def open_inputs(config: Configuration) -> frozenset:
    """Input ports of the configuration that are not attached to any output."""
    return ports_in(config) - frozenset(config.attachment)


def project(port: str, config: Configuration) -> Layer:
    """The unique layer of ``config`` owning ``port``."""
    try:
        return config._owner[port]
    except KeyError:
        raise UnknownPortError(port, "owned by no layer of the configuration") from None


# -- validation -----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subject: str = ""

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"  - {v}" for v in self.violations)

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "violations": [{"code": v.code, "message": v.message, "subject": v.subject}
                               for v in self.violations]}


def _layer_violations(layer: Layer, universe: Universe) -> list[Violation]:
    out = []
    name = layer.name
    ports_known = True
    for port in sorted(layer.inputs):
        if port not in universe.direction:
            out.append(Violation("unknown-port", f"layer {name!r}: input {port!r} is not a port", name))
            ports_known = False
        elif universe.direction[port] != INPUT:
            out.append(Violation("wrong-direction", f"layer {name!r}: {port!r} is not an input port", name))
    for port in sorted(layer.outputs):
        if port not in universe.direction:
            out.append(Violation("unknown-port", f"layer {name!r}: output {port!r} is not a port", name))
            ports_known = False
        elif universe.direction[port] != OUTPUT:
            out.append(Violation("wrong-direction", f"layer {name!r}: {port!r} is not an output port", name))

    beh = layer.behavior
    if beh.inputs != layer.inputs or beh.outputs != layer.outputs:
        out.append(Violation("ports-mismatch",
                             f"layer {name!r}: behavior declared over different ports than the layer", name))
        return out
    if not ports_known:
        return out

    for key in sorted(beh.rows):
        if not is_valuation_of(key, layer.inputs, universe):
            out.append(Violation("row-not-in-space",
                                 f"layer {name!r}: row key {key} is not an input valuation", name))
    missing = [mu for mu in valuation_space(layer.inputs, universe) if mu not in beh.rows]
    if missing:
        shown = ", ".join(str(m) for m in missing[:3])
        out.append(Violation("behavior-not-total",
                             f"layer {name!r}: behavior not total; {len(missing)} input valuation(s) "
                             f"without a row, e.g. {shown}", name))
    for key, outs in beh.sorted_rows():
        for nu in outs:
            if not is_valuation_of(nu, layer.outputs, universe):
                out.append(Violation("ill-typed-output",
                                     f"layer {name!r}: row {key} contains {nu}, "
                                     f"not a valuation of its output ports", name))
    return out


def validate_layer(layer: Layer, universe: Universe) -> ValidationReport:
    """Report every way in which ``layer`` fails to be a layer over ``universe``."""
    return ValidationReport(tuple(_layer_violations(layer, universe)))


def validate_configuration(config: Configuration) -> ValidationReport:
    universe = config.universe
    violations = []
    seen = set()
    for layer in config.layers:
        if layer.name in seen:
            violations.append(Violation("duplicate-layer", f"layer name {layer.name!r} used twice",
                                        layer.name))
        seen.add(layer.name)
        violations.extend(_layer_violations(layer, universe))

    owners: dict[str, list[str]] = {}
    for layer in config.layers:
        for p in layer.ports:
            owners.setdefault(p, []).append(layer.name)
    for p in sorted(owners):
        if len(owners[p]) > 1:
            violations.append(Violation("port-shared",
                                        f"port {p!r} shared by layers {sorted(owners[p])}", p))

    ins, outs = ports_in(config), ports_out(config)
    for i in sorted(config.attachment):
        o = config.attachment[i]
        if i not in ins:
            violations.append(Violation("attachment-domain",
                                        f"attached input {i!r} is not an input of any layer", i))
        if o not in outs:
            violations.append(Violation("attachment-range",
                                        f"{i!r} is attached to {o!r}, not an output of any layer", i))
        if i in universe.port_type and o in universe.port_type:
            if not universe.port_type[o] <= universe.port_type[i]:
                violations.append(Violation(
                    "incompatible-attachment",
                    f"incompatible attachment {i!r} <- {o!r}: type {sorted(universe.port_type[o])} "
                    f"is not within {sorted(universe.port_type[i])}", i))
    return ValidationReport(tuple(violations))
