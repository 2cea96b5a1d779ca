"""JSON configuration documents.

Serialization is canonical: object keys sorted, arrays sorted by their
identifying field, two-space indentation, trailing newline.  Parsing
rejects unknown keys and structural mistakes with :class:`DocumentError`;
semantic problems (ill-typed rows, incompatible attachments, shared ports)
are left to :func:`layersem.model.validate_configuration`.
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import DocumentError, ModelError
from .model import BehaviorTable, Configuration, Layer, Universe, Valuation

TOP_KEYS = {"services", "ports", "layers", "attachment"}
PORT_KEYS = {"id", "direction", "type"}
LAYER_KEYS = {"name", "inputs", "outputs", "behavior"}
ROW_KEYS = {"input", "outputs"}
ATTACH_KEYS = {"input", "output"}


def config_to_document(config: Configuration) -> dict:
    u = config.universe
    return {
        "services": sorted(u.services),
        "ports": [{"id": p, "direction": u.direction[p], "type": sorted(u.port_type[p])}
                  for p in sorted(u.direction)],
        "layers": [{
            "name": l.name,
            "inputs": sorted(l.inputs),
            "outputs": sorted(l.outputs),
            "behavior": [{"input": k.as_dict(), "outputs": [v.as_dict() for v in vs]}
                         for k, vs in l.behavior.sorted_rows()],
        } for l in config.layers],
        "attachment": [{"input": i, "output": config.attachment[i]} for i in sorted(config.attachment)],
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def serialize(config: Configuration) -> str:
    return dumps(config_to_document(config))


def _expect(cond, message):
    if not cond:
        raise DocumentError(message)


def _keys(obj, allowed, where):
    _expect(isinstance(obj, dict), f"{where}: expected an object")
    unknown = set(obj) - allowed
    _expect(not unknown, f"{where}: unknown keys {sorted(unknown)}")
    missing = allowed - set(obj)
    _expect(not missing, f"{where}: missing keys {sorted(missing)}")


def _strings(value, where):
    _expect(isinstance(value, list) and all(isinstance(v, str) for v in value),
            f"{where}: expected an array of strings")
    _expect(len(set(value)) == len(value), f"{where}: duplicate entries")
    return value


def _valuation(obj, services, where) -> Valuation:
    _expect(isinstance(obj, dict) and all(isinstance(v, str) for v in obj.values()),
            f"{where}: expected an object mapping ports to services")
    for port, service in obj.items():
        _expect(service in services, f"{where}: port {port!r} bound to undeclared service {service!r}")
    return Valuation.of(obj)


def parse_config(text: str) -> tuple[Universe, Configuration]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None
    _keys(doc, TOP_KEYS, "document")

    services = set(_strings(doc["services"], "services"))
    _expect(isinstance(doc["ports"], list), "ports: expected an array")
    direction, port_type = {}, {}
    for k, entry in enumerate(doc["ports"]):
        where = f"ports[{k}]"
        _keys(entry, PORT_KEYS, where)
        pid = entry["id"]
        _expect(isinstance(pid, str), f"{where}: id must be a string")
        _expect(pid not in direction, f"{where}: duplicate port id {pid!r}")
        _expect(entry["direction"] in ("in", "out"), f"{where}: direction must be 'in' or 'out'")
        types = _strings(entry["type"], f"{where}.type")
        stray = set(types) - services
        _expect(not stray, f"{where}: type uses undeclared services {sorted(stray)}")
        direction[pid] = entry["direction"]
        port_type[pid] = frozenset(types)
    try:
        universe = Universe(frozenset(services), direction, port_type)
    except ModelError as exc:
        raise DocumentError(str(exc)) from None

    _expect(isinstance(doc["layers"], list), "layers: expected an array")
    layers = []
    for k, entry in enumerate(doc["layers"]):
        where = f"layers[{k}]"
        _keys(entry, LAYER_KEYS, where)
        _expect(isinstance(entry["name"], str), f"{where}: name must be a string")
        where = f"layer {entry['name']!r}"
        ins = frozenset(_strings(entry["inputs"], f"{where}.inputs"))
        outs = frozenset(_strings(entry["outputs"], f"{where}.outputs"))
        _expect(isinstance(entry["behavior"], list), f"{where}.behavior: expected an array")
        rows = {}
        for r, row in enumerate(entry["behavior"]):
            rw = f"{where}.behavior[{r}]"
            _keys(row, ROW_KEYS, rw)
            key = _valuation(row["input"], services, f"{rw}.input")
            _expect(key not in rows, f"{rw}: duplicate row for input {key}")
            _expect(isinstance(row["outputs"], list), f"{rw}.outputs: expected an array")
            vals = [_valuation(v, services, f"{rw}.outputs[{j}]") for j, v in enumerate(row["outputs"])]
            _expect(len(set(vals)) == len(vals), f"{rw}.outputs: duplicate output valuations")
            rows[key] = frozenset(vals)
        layers.append(Layer(entry["name"], ins, outs, BehaviorTable(ins, outs, rows)))

    _expect(isinstance(doc["attachment"], list), "attachment: expected an array")
    attachment = {}
    for k, entry in enumerate(doc["attachment"]):
        where = f"attachment[{k}]"
        _keys(entry, ATTACH_KEYS, where)
        i, o = entry["input"], entry["output"]
        _expect(isinstance(i, str) and isinstance(o, str), f"{where}: ports must be strings")
        _expect(i not in attachment, f"{where}: input {i!r} attached twice")
        attachment[i] = o
    return universe, Configuration(universe, layers, attachment)


def load(path) -> Configuration:
    return parse_config(Path(path).read_text(encoding="utf-8"))[1]


def dump(config: Configuration, path) -> None:
    Path(path).write_text(serialize(config), encoding="utf-8")
