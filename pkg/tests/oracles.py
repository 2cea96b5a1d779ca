"""Slow reference implementations used only by the tests.

None of these share code with the evaluators under test beyond the data
model itself.
"""
import itertools

import networkx as nx

from layersem.model import Valuation


def all_ports(config):
    ports = set()
    for l in config.layers:
        ports |= l.inputs | l.outputs
    return ports


def owner(config, port):
    for l in config.layers:
        if port in l.inputs or port in l.outputs:
            return l
    raise KeyError(port)


def closed(config, layer, P):
    if not layer.outputs <= P:
        return False
    for i, o in config.attachment.items():
        if i in P and o not in P:
            return False
    for l in config.layers:
        for o in l.outputs:
            if o in P and not l.inputs <= P:
                return False
    return True


def closure_by_intersection(config, name):
    """Intersect every subset of the configuration's ports meeting the closure conditions."""
    layer = config.layer(name)
    ports = sorted(all_ports(config))
    result = set(ports)
    for r in range(len(ports) + 1):
        for subset in itertools.combinations(ports, r):
            P = set(subset)
            if closed(config, layer, P):
                result &= P
    return frozenset(result)


def _literal_filter(config, ports, mu, nu):
    """Check a valuation ``nu`` (dict over ``ports``) against the semantic conditions literally."""
    opens = {i for l in config.layers for i in l.inputs} - set(config.attachment)
    for p in ports:
        if p in opens and nu[p] != mu[p]:
            return False
    for i in ports:
        if i in config.attachment and nu[i] != nu[config.attachment[i]]:
            return False
    for o in ports:
        if config.universe.direction[o] != "out":
            continue
        r = owner(config, o)
        key = Valuation.of({p: nu[p] for p in r.inputs})
        want = {p: nu[p] for p in r.outputs if p in ports}
        if not any({p: s for p, s in xi.items if p in ports} == want for xi in r.behavior.rows[key]):
            return False
    return True


def literal_semantics(config, name, mu):
    """Enumerate the full product over the closure and apply the conditions one by one."""
    layer = config.layer(name)
    ports = sorted(closure_by_intersection(config, name))
    mu = mu.as_dict()
    domains = [sorted(config.universe.port_type[p]) for p in ports]
    result = set()
    for combo in itertools.product(*domains):
        nu = dict(zip(ports, combo))
        if _literal_filter(config, ports, mu, nu):
            result.add(Valuation.of({p: nu[p] for p in layer.outputs}))
    return frozenset(result)


def full_enumeration_semantics(config, name, mu):
    """Same conditions, but over every port of the configuration instead of the closure."""
    layer = config.layer(name)
    ports = sorted(all_ports(config))
    mu = mu.as_dict()
    domains = [sorted(config.universe.port_type[p]) for p in ports]
    result = set()
    for combo in itertools.product(*domains):
        nu = dict(zip(ports, combo))
        if _literal_filter(config, ports, mu, nu):
            result.add(Valuation.of({p: nu[p] for p in layer.outputs}))
    return frozenset(result)


def open_space(config):
    opens = sorted({i for l in config.layers for i in l.inputs} - set(config.attachment))
    domains = [sorted(config.universe.port_type[p]) for p in opens]
    return [Valuation.of(dict(zip(opens, combo))) for combo in itertools.product(*domains)]


def reachability_closure(pairs, nodes, reflexive):
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(pairs)
    tc = nx.transitive_closure(g, reflexive=bool(reflexive))
    return set(tc.edges())


def syntactically_acyclic(config):
    g = nx.DiGraph()
    g.add_nodes_from(config.names)
    for i, o in config.attachment.items():
        g.add_edge(owner(config, o).name, owner(config, i).name)
    return nx.is_directed_acyclic_graph(g)


def total(config):
    if any(not t for p, t in config.universe.port_type.items() if p in all_ports(config)):
        return False
    return all(all(rows for rows in l.behavior.rows.values()) for l in config.layers)
