"""Seeded random configurations for property checks.

The generator deliberately visits degenerate corners: ports with empty
types, behavior rows with no output, layers without inputs or outputs,
and self-attachments.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import LayerSemError
from .model import BehaviorTable, Configuration, Layer, Universe, validate_configuration, valuation_space

EMPTY_TYPE_RATE = 0.2
EMPTY_ROW_RATE = 0.2
ATTACH_RATE = 0.6
MAX_RETRIES = 50


@dataclass(frozen=True)
class Bounds:
    layers: int = 3
    ports: int = 2  # per side, per layer
    type_size: int = 2
    attachments: int | None = None
    services: int = 3

    def __post_init__(self):
        if min(self.layers, self.ports, self.type_size, self.services) < 1:
            raise LayerSemError(f"bounds must be positive: {self}")
        if self.attachments is not None and self.attachments < 0:
            raise LayerSemError(f"attachment bound must be nonnegative: {self}")

    @classmethod
    def parse(cls, text: str) -> Bounds:
        """Parse ``"layers=3,ports=2,type_size=2"``-style text."""
        values = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, _, val = part.partition("=")
            key = key.strip().replace("-", "_")
            if key not in cls.__dataclass_fields__:
                raise LayerSemError(f"unknown bound {key!r}")
            values[key] = int(val)
        return cls(**values)


def _random_type(rng: random.Random, services: list[str], size: int) -> frozenset:
    if rng.random() < EMPTY_TYPE_RATE:
        return frozenset()
    k = rng.randint(1, min(size, len(services)))
    return frozenset(rng.sample(services, k))


def _attempt(rng: random.Random, b: Bounds) -> Configuration:
    services = [chr(ord("A") + k) for k in range(b.services)]
    n_layers = rng.randint(1, b.layers)
    shapes = [(f"l{k}", rng.randint(0, b.ports), rng.randint(0, b.ports)) for k in range(n_layers)]

    out_types = {}
    for name, _, n_out in shapes:
        for j in range(n_out):
            out_types[f"{name}.o{j}"] = _random_type(rng, services, b.type_size)

    in_types, attachment = {}, {}
    budget = b.attachments
    for name, n_in, _ in shapes:
        for j in range(n_in):
            port = f"{name}.i{j}"
            attach = out_types and rng.random() < ATTACH_RATE and (budget is None or budget > 0)
            if attach:
                target = rng.choice(sorted(out_types))
                base = set(out_types[target])
                spare = [s for s in services if s not in base]
                if spare and len(base) < b.type_size and rng.random() < 0.3:
                    base.add(rng.choice(spare))
                in_types[port] = frozenset(base)
                attachment[port] = target
                if budget is not None:
                    budget -= 1
            else:
                in_types[port] = _random_type(rng, services, b.type_size)

    universe = Universe.from_ports(in_types, out_types, services)
    layers = []
    for name, n_in, n_out in shapes:
        ins = frozenset(f"{name}.i{j}" for j in range(n_in))
        outs = frozenset(f"{name}.o{j}" for j in range(n_out))
        out_space = valuation_space(outs, universe)
        rows = {}
        for mu in valuation_space(ins, universe):
            if not out_space or rng.random() < EMPTY_ROW_RATE:
                rows[mu] = frozenset()
            else:
                k = rng.randint(1, min(2, len(out_space)))
                rows[mu] = frozenset(rng.sample(list(out_space), k))
        layers.append(Layer(name, ins, outs, BehaviorTable(ins, outs, rows)))
    return Configuration(universe, layers, attachment)


def random_configuration(seed: int, bounds: Bounds | None = None) -> Configuration:
    """A valid configuration within ``bounds``, determined entirely by ``seed``."""
    bounds = bounds or Bounds()
    rng = random.Random(seed)
    for _ in range(MAX_RETRIES):
        config = _attempt(rng, bounds)
        if validate_configuration(config).ok:
            return config
    raise LayerSemError(f"no valid configuration within {bounds} after {MAX_RETRIES} attempts")
