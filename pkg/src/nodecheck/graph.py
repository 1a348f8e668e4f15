"""Data model, parser and validator for node-based visual scripts.

A script is a directed graph: nodes with named input/output ports, and
edges routing control-flow signals from an output port to an input port.
Graph documents are JSON; port inventories come from the semantics
registry, not from the document itself.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Iterable

from .errors import GraphParseError

if TYPE_CHECKING:
    from .semantics import SemanticsRegistry

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_identifier(s: str) -> bool:
    return bool(_IDENT.match(s))


@dataclass(frozen=True)
class Node:
    """A script node: unique id plus a semantics-registry kind.

    Port tuples are derived data (filled from the registry by
    :func:`bind_ports`); a freshly parsed graph leaves them empty.
    """

    id: str
    kind: str
    input_ports: tuple[str, ...] = ()
    output_ports: tuple[str, ...] = ()


@dataclass(frozen=True)
class Edge:
    """Control-flow edge from an output port to an input port.

    ``order_index`` is the declaration position; it is semantically
    significant (it orders the translated case rules).
    """

    src_node: str
    src_port: str
    dst_node: str
    dst_port: str
    order_index: int

    def endpoint_str(self) -> str:
        return (
            f"{self.src_node}.{self.src_port} -> {self.dst_node}.{self.dst_port}"
        )


@dataclass(frozen=True)
class ScriptVariableDecl:
    """Declared global script variable: name, finite domain, initial value."""

    name: str
    domain: tuple[str, ...]
    init: str


@dataclass(frozen=True)
class NodeGraph:
    nodes: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()
    script_variables: tuple[ScriptVariableDecl, ...] = ()

    def node_by_id(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)


@dataclass(frozen=True)
class Diagnostic:
    """A validation finding; ``severity`` is ``"error"`` or ``"warning"``."""

    severity: str
    message: str
    node_id: str | None = None
    edge_index: int | None = None

    def __str__(self) -> str:
        where = ""
        if self.node_id is not None:
            where = f" [node {self.node_id}]"
        elif self.edge_index is not None:
            where = f" [edge #{self.edge_index}]"
        return f"{self.severity}: {self.message}{where}"


def _split_endpoint(text: str, what: str) -> tuple[str, str]:
    node, sep, port = text.partition(".")
    if not sep or not node or not port:
        raise GraphParseError(
            f"{what} endpoint {text!r} is not of the form 'node.Port'"
        )
    return node, port


def parse_graph(text: str) -> NodeGraph:
    """Parse a graph document, preserving node and edge declaration order.

    Raises :class:`GraphParseError` on JSON syntax errors (with position),
    duplicate node ids, or edges naming unknown nodes. Port existence is a
    validation concern (needs the registry), not a parse concern.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(
            f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise GraphParseError("graph document must be a JSON object")

    nodes: list[Node] = []
    seen: set[str] = set()
    for i, entry in enumerate(doc.get("nodes", [])):
        if not isinstance(entry, dict) or "id" not in entry or "kind" not in entry:
            raise GraphParseError(f"node #{i} must be an object with 'id' and 'kind'")
        node_id, kind = str(entry["id"]), str(entry["kind"])
        if not is_identifier(node_id):
            raise GraphParseError(f"node id {node_id!r} is not a valid identifier")
        if node_id in seen:
            raise GraphParseError(f"duplicate node id {node_id!r}")
        seen.add(node_id)
        nodes.append(Node(id=node_id, kind=kind))

    edges: list[Edge] = []
    for i, entry in enumerate(doc.get("edges", [])):
        if not isinstance(entry, dict) or "from" not in entry or "to" not in entry:
            raise GraphParseError(f"edge #{i} must be an object with 'from' and 'to'")
        src_node, src_port = _split_endpoint(str(entry["from"]), f"edge #{i} 'from'")
        dst_node, dst_port = _split_endpoint(str(entry["to"]), f"edge #{i} 'to'")
        for ref in (src_node, dst_node):
            if ref not in seen:
                raise GraphParseError(f"edge #{i} references unknown node {ref!r}")
        edges.append(Edge(src_node, src_port, dst_node, dst_port, order_index=i))

    script_vars: list[ScriptVariableDecl] = []
    for i, entry in enumerate(doc.get("script_variables", [])):
        try:
            name = str(entry["name"])
            domain = tuple(str(v) for v in entry["domain"])
            init = str(entry["init"])
        except (KeyError, TypeError) as exc:
            raise GraphParseError(
                f"script_variables #{i} must carry 'name', 'domain', 'init'"
            ) from exc
        if not domain:
            raise GraphParseError(f"script variable {name!r} has an empty domain")
        if init not in domain:
            raise GraphParseError(
                f"script variable {name!r}: init {init!r} not in domain"
            )
        script_vars.append(ScriptVariableDecl(name, domain, init))

    return NodeGraph(tuple(nodes), tuple(edges), tuple(script_vars))


def parse_graph_file(path: str) -> NodeGraph:
    with open(path, encoding="utf-8") as f:
        return parse_graph(f.read())


def serialize_graph(g: NodeGraph) -> str:
    """Render a graph back to document form (inverse of :func:`parse_graph`).

    Port bindings are derived data and are not serialized.
    """
    doc: dict = {
        "nodes": [{"id": n.id, "kind": n.kind} for n in g.nodes],
        "edges": [
            {
                "from": f"{e.src_node}.{e.src_port}",
                "to": f"{e.dst_node}.{e.dst_port}",
            }
            for e in sorted(g.edges, key=lambda e: e.order_index)
        ],
    }
    if g.script_variables:
        doc["script_variables"] = [
            {"name": v.name, "domain": list(v.domain), "init": v.init}
            for v in g.script_variables
        ]
    return json.dumps(doc, indent=2) + "\n"


def bind_ports(g: NodeGraph, reg: "SemanticsRegistry") -> NodeGraph:
    """Fill node port tuples from the registry (validation must be clean)."""
    bound = []
    for n in g.nodes:
        sem = reg.get(n.kind)
        bound.append(
            replace(n, input_ports=sem.input_ports, output_ports=sem.output_ports)
        )
    return replace(g, nodes=tuple(bound))


def validate_graph(
    g: NodeGraph, reg: "SemanticsRegistry", include_warnings: bool = False
) -> list[Diagnostic]:
    """Check the graph against a semantics registry.

    Returns an empty list iff every node kind resolves and every port named
    by an edge exists on the resolved kind with the right direction.
    Unconnected ports are legal (warnings, reported only when
    ``include_warnings`` is set) — the classic bug is precisely an
    unconnected output port, which must stay expressible.
    """
    out: list[Diagnostic] = []
    kinds_ok: dict[str, bool] = {}
    for n in g.nodes:
        if reg.has(n.kind):
            kinds_ok[n.id] = True
        else:
            kinds_ok[n.id] = False
            out.append(
                Diagnostic("error", f"unknown node kind {n.kind}", node_id=n.id)
            )

    by_id = {n.id: n for n in g.nodes}
    for e in g.edges:
        src, dst = by_id[e.src_node], by_id[e.dst_node]
        if kinds_ok[src.id]:
            sem = reg.get(src.kind)
            if e.src_port not in sem.output_ports:
                out.append(
                    Diagnostic(
                        "error",
                        f"node {src.id} has no output port {e.src_port!r}",
                        node_id=src.id,
                        edge_index=e.order_index,
                    )
                )
        if kinds_ok[dst.id]:
            sem = reg.get(dst.kind)
            if e.dst_port not in sem.input_ports:
                out.append(
                    Diagnostic(
                        "error",
                        f"node {dst.id} has no input port {e.dst_port!r}",
                        node_id=dst.id,
                        edge_index=e.order_index,
                    )
                )

    if include_warnings:
        used_in = {(e.dst_node, e.dst_port) for e in g.edges}
        used_out = {(e.src_node, e.src_port) for e in g.edges}
        for n in g.nodes:
            if not kinds_ok[n.id]:
                continue
            sem = reg.get(n.kind)
            for p in sem.input_ports:
                if (n.id, p) not in used_in:
                    out.append(
                        Diagnostic(
                            "warning",
                            f"input port {p} of {n.id} is unconnected",
                            node_id=n.id,
                        )
                    )
            for p in sem.output_ports:
                if (n.id, p) not in used_out:
                    out.append(
                        Diagnostic(
                            "warning",
                            f"output port {p} of {n.id} is unconnected",
                            node_id=n.id,
                        )
                    )
    return out


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diags)
