"""Behavioral updates of layers and configurations.

An update swaps a layer's behavior table and keeps its name, ports and the
attachment.  Updates are persistent; the original values are untouched.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ModelError
from .model import BehaviorTable, Configuration, Layer, Universe, validate_layer


@dataclass(frozen=True)
class UpdateSpec:
    target: str
    new_behavior: BehaviorTable

    __hash__ = None


def update_layer(layer: Layer, new_behavior: BehaviorTable, universe: Universe | None = None) -> Layer:
    """Return ``layer`` with its behavior replaced.

    Raises ModelError if the table is over different ports; with a
    universe, also if the table is not total or holds ill-typed rows.
    """
    if new_behavior.inputs != layer.inputs or new_behavior.outputs != layer.outputs:
        raise ModelError(
            f"behavior over ({sorted(new_behavior.inputs)}, {sorted(new_behavior.outputs)}) does not "
            f"match layer {layer.name!r} ports ({sorted(layer.inputs)}, {sorted(layer.outputs)})")
    updated = Layer(layer.name, layer.inputs, layer.outputs, new_behavior)
    if universe is not None:
        report = validate_layer(updated, universe)
        if not report.ok:
            raise ModelError(f"update of layer {layer.name!r} is not a layer:\n{report.describe()}")
    return updated


def update_configuration(config: Configuration, spec: UpdateSpec) -> Configuration:
    old = config.layer(spec.target)
    new = update_layer(old, spec.new_behavior, config.universe)
    layers = tuple(new if l.name == spec.target else l for l in config.layers)
    return Configuration(config.universe, layers, config.attachment)
