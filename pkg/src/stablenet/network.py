"""Network instances, interfaces and their JSON document format."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .expr import (
    Predicate,
    Transfer,
    eval_transfer,
    parse_predicate,
    parse_transfer,
    predicate_literals,
    predicate_to_json,
    transfer_literals,
    transfer_to_json,
)
from .route import (
    NO_ROUTE,
    AnyRoute,
    Ordering,
    merge,
    parse_tag,
    route_from_json,
    route_to_json,
    tag_key,
)

MERGE_KINDS = ("BgpLpThenLen",)


class UnknownEdge(KeyError):
    pass


def edge_name(e) -> str:
    return f"{e[0]}->{e[1]}"


def parse_edge_name(s: str) -> tuple[str, str]:
    u, sep, v = s.partition("->")
    if not sep:
        raise ValueError(f"bad edge key {s!r}, expected 'u->v'")
    return u, v


@dataclass(frozen=True)
class Network:
    nodes: tuple
    edges: tuple
    init: Mapping[str, AnyRoute]
    transfer: Mapping[tuple, Transfer]
    communities: tuple = ()
    merge_kind: str = "BgpLpThenLen"

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "communities", tuple(parse_tag(t) for t in self.communities))
        object.__setattr__(self, "_edge_set", frozenset(self.edges))
        object.__setattr__(self, "ordering", Ordering(self.nodes, self.communities))
        preds: dict = {v: [] for v in self.nodes}
        succs: dict = {v: [] for v in self.nodes}
        for u, v in self.edges:
            preds.setdefault(v, []).append(u)
            succs.setdefault(u, []).append(v)
        object.__setattr__(self, "_preds", {v: tuple(us) for v, us in preds.items()})
        object.__setattr__(self, "_succs", {v: tuple(us) for v, us in succs.items()})

    def has_edge(self, e) -> bool:
        return tuple(e) in self._edge_set

    def in_neighbors(self, v) -> tuple:
        return self._preds.get(v, ())

    def out_neighbors(self, v) -> tuple:
        return self._succs.get(v, ())

    def in_edges(self, v) -> list:
        return [(u, v) for u in self.in_neighbors(v)]

    def merge(self, a: AnyRoute, b: AnyRoute) -> AnyRoute:
        return merge(a, b, self.ordering)


def apply_transfer(e, r: AnyRoute, net: Network) -> AnyRoute:
    e = tuple(e)
    if not net.has_edge(e):
        raise UnknownEdge(e)
    return eval_transfer(net.transfer[e], e[0], r)


@dataclass(frozen=True)
class Interfaces:
    I: Mapping[str, Predicate]
    Q: Mapping[str, Predicate]
    Y: Mapping[str, Predicate] = field(default_factory=dict)


@dataclass(frozen=True)
class ValidationError:
    kind: str
    locus: object
    detail: str = ""

    def __str__(self):
        loc = edge_name(self.locus) if isinstance(self.locus, tuple) else self.locus
        return f"{self.kind} {loc}" + (f": {self.detail}" if self.detail else "")


def _route_literals(r):
    if r is NO_ROUTE:
        return
    for v in r.visited:
        yield ("node", v)
    for t in r.comms:
        yield ("tag", t)


def validate_network(net: Network, ifs: Interfaces | None = None) -> list[ValidationError]:
    errors: list[ValidationError] = []
    node_set = set(net.nodes)
    tag_set = set(net.communities)
    if len(node_set) != len(net.nodes):
        errors.append(ValidationError("DuplicateNode", None, "node list has duplicates"))
    if net.merge_kind not in MERGE_KINDS:
        errors.append(ValidationError("UnknownMergeKind", net.merge_kind))
    seen = set()
    for e in net.edges:
        u, v = e
        for x in (u, v):
            if x not in node_set:
                errors.append(ValidationError("UnknownNode", x, f"in edge {edge_name(e)}"))
        if u == v:
            errors.append(ValidationError("SelfLoop", e))
        if e in seen:
            errors.append(ValidationError("DuplicateEdge", e))
        seen.add(e)
        if e not in net.transfer:
            errors.append(ValidationError("MissingTransfer", e))
    for e in net.transfer:
        if tuple(e) not in net._edge_set:
            errors.append(ValidationError("TransferOnUnknownEdge", tuple(e)))
    for v in net.nodes:
        if v not in net.init:
            errors.append(ValidationError("MissingInit", v))
    for v in net.init:
        if v not in node_set:
            errors.append(ValidationError("UnknownNode", v, "in init"))

    def check_literals(lits, locus):
        for kind, val in lits:
            if kind == "node" and val not in node_set:
                errors.append(ValidationError("UnknownNode", val, f"referenced at {locus}"))
            elif kind == "tag" and val not in tag_set:
                errors.append(ValidationError("UndeclaredCommunity", val, f"referenced at {locus}"))

    for v, r in net.init.items():
        check_literals(_route_literals(r), f"init({v})")
    for e, t in net.transfer.items():
        check_literals(transfer_literals(t), f"transfer({edge_name(e)})")

    if ifs is not None:
        for name in ("I", "Q", "Y"):
            table = getattr(ifs, name)
            for v in net.nodes:
                if v not in table:
                    errors.append(ValidationError("MissingInterface", v, name))
            for v, p in table.items():
                if v not in node_set:
                    errors.append(ValidationError("UnknownNode", v, f"in {name}"))
                check_literals(predicate_literals(p), f"{name}({v})")
    return errors


# -- JSON documents ----------------------------------------------------------

def network_from_json(doc) -> tuple[Network, Interfaces | None]:
    dist = doc.get("dist")
    nodes = [str(v) for v in doc["nodes"]]
    edges = [tuple(e) for e in doc["edges"]]
    init = {v: route_from_json(r) for v, r in doc.get("init", {}).items()}
    transfer = {parse_edge_name(k): parse_transfer(t, dist)
                for k, t in doc.get("transfer", {}).items()}
    comms = doc.get("communities")
    if comms is None:
        found = set()
        for r in init.values():
            found |= {t for k, t in _route_literals(r) if k == "tag"}
        for t in transfer.values():
            found |= {x for k, x in transfer_literals(t) if k == "tag"}
        for name in ("I", "Q", "Y"):
            for p in doc.get(name, {}).values():
                found |= {x for k, x in predicate_literals(parse_predicate(p, dist)) if k == "tag"}
        comms = sorted(found, key=tag_key)
    net = Network(tuple(nodes), tuple(edges), init, transfer, tuple(comms),
                  doc.get("mergeKind", "BgpLpThenLen"))
    ifs = None
    if any(k in doc for k in ("I", "Q", "Y")):
        ifs = Interfaces(
            {v: parse_predicate(p, dist) for v, p in doc.get("I", {}).items()},
            {v: parse_predicate(p, dist) for v, p in doc.get("Q", {}).items()},
            {v: parse_predicate(p, dist) for v, p in doc.get("Y", {}).items()},
        )
    return net, ifs


def network_to_json(net: Network, ifs: Interfaces | None = None) -> dict:
    doc = {
        "nodes": list(net.nodes),
        "edges": [list(e) for e in net.edges],
        "communities": list(net.communities),
        "init": {v: route_to_json(net.init[v]) for v in net.nodes if v in net.init},
        "transfer": {edge_name(e): transfer_to_json(net.transfer[e])
                     for e in net.edges if e in net.transfer},
    }
    if ifs is not None:
        for name in ("I", "Q", "Y"):
            table = getattr(ifs, name)
            doc[name] = {v: predicate_to_json(table[v]) for v in net.nodes if v in table}
    return doc


def load_document(path) -> tuple[Network, Interfaces | None]:
    with open(path) as fh:
        return network_from_json(json.load(fh))


def save_document(path, net: Network, ifs: Interfaces | None = None, **extra) -> None:
    doc = network_to_json(net, ifs)
    doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")
