"""Graphviz DOT rendering of configurations and dependency relations."""
from __future__ import annotations

import json

from .dependency import (DEFAULT_TABLE_BUDGET, SYNTACTIC, SYNTACTIC_PLUS, SYNTACTIC_STAR,
                         semantic_dependency_relation, syntactic_relation)
from .model import Configuration, project

RELATIONS = ("attachment", "syn", "syn+", "syn*", "sem")
_SYN_KINDS = {"syn": SYNTACTIC, "syn+": SYNTACTIC_PLUS, "syn*": SYNTACTIC_STAR}


def _q(name: str) -> str:
    return json.dumps(name, ensure_ascii=False)


def export_dot(config: Configuration, relation: str = "syn", budget: int = DEFAULT_TABLE_BUDGET) -> str:
    """Layers as nodes; edges from the provider layer to the depending one.

    A layer related to itself is drawn with a double border instead of a
    self-loop, so edge counts match the pairs between distinct layers.

    For ``attachment``, one edge per attached pair, drawn from the layer
    owning the output to the layer owning the input and labelled with the
    two ports.
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}; expected one of {RELATIONS}")
    lines = ["digraph configuration {"]
    if relation == "attachment":
        lines.extend(f"  {_q(name)};" for name in config.names)
        edges = sorted((project(o, config).name, project(i, config).name, o, i)
                       for i, o in config.attachment.items())
        for src, dst, o, i in edges:
            lines.append(f"  {_q(src)} -> {_q(dst)} [label={_q(f'{o} -> {i}')}];")
    else:
        if relation == "sem":
            rel = semantic_dependency_relation(config, budget)
        else:
            rel = syntactic_relation(config, _SYN_KINDS[relation])
        for name in config.names:
            attr = " [peripheries=2]" if (name, name) in rel else ""
            lines.append(f"  {_q(name)}{attr};")
        for a, b in rel.sorted_pairs():
            if a != b:
                lines.append(f"  {_q(a)} -> {_q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
