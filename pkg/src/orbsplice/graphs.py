"""Plumbing (resolution) graphs, the text format, validation and blow-ups.

Text format, one statement per line, ``#`` starts a comment::

    vertex <id> <euler>
    edge <id> <id>
    weight <id> <n>

Vertex ids match ``[A-Za-z0-9_]+``.  Everywhere in the package vertices
are ordered lexicographically by id; matrix rows, generator indices and
leaf coordinates all follow that order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Union

import networkx as nx

from . import exactlin
from .errors import (
    DuplicateVertex,
    GraphError,
    NonPositiveWeight,
    NotBlowDownable,
    ParseError,
    UnknownEdge,
    UnknownVertex,
    UnknownVertexInEdge,
)

ID_RE = re.compile(r"[A-Za-z0-9_]+\Z")
INT_RE = re.compile(r"[+-]?\d+\Z")


def _edge(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True, eq=False)
class PlumbingGraph:
    """Weighted graph: vertex id -> Euler number (self-intersection), plus edges."""

    euler: Mapping[str, int]
    edges: frozenset = frozenset()
    _adj: Mapping = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        euler = {str(k): int(v) for k, v in self.euler.items()}
        edges = frozenset(_edge(*e) for e in self.edges)
        adj: dict[str, list[str]] = {v: [] for v in euler}
        for a, b in edges:
            if a == b:
                raise GraphError(f"self-loop at {a!r}")
            if a not in euler or b not in euler:
                raise UnknownVertex(f"edge {a}-{b} uses an unknown vertex")
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "euler", MappingProxyType(dict(sorted(euler.items()))))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adj", MappingProxyType({v: tuple(sorted(n)) for v, n in adj.items()}))

    def __eq__(self, other):
        if not isinstance(other, PlumbingGraph):
            return NotImplemented
        return dict(self.euler) == dict(other.euler) and self.edges == other.edges

    def __hash__(self):
        return hash((tuple(self.euler.items()), self.edges))

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self.euler)

    def __len__(self):
        return len(self.euler)

    def __contains__(self, v):
        return v in self.euler

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    def neighbors(self, v: str) -> tuple[str, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def valence(self, v: str) -> int:
        return len(self.neighbors(v))

    def has_edge(self, a: str, b: str) -> bool:
        return _edge(a, b) in self.edges

    @property
    def leaves(self) -> tuple[str, ...]:
        """Ends of the graph; a lone vertex counts as one end."""
        return tuple(v for v in self.vertices if self.valence(v) <= 1)

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.valence(v) >= 3)

    @property
    def interior(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.valence(v) >= 2)

    def is_connected(self) -> bool:
        if not self.euler:
            return False
        return len(self.reachable(self.vertices[0])) == len(self)

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == len(self) - 1

    def reachable(self, start: str, blocked: Iterable[str] = ()) -> frozenset[str]:
        seen = set(blocked)
        if start in seen:
            return frozenset()
        stack, out = [start], set()
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            out.add(v)
            stack.extend(self.neighbors(v))
        return frozenset(out)

    def branch(self, v: str, toward: str) -> frozenset[str]:
        """Vertices cut off from ``v`` in the direction of its neighbor ``toward``."""
        return self.reachable(toward, blocked=(v,))

    def path(self, a: str, b: str) -> list[str]:
        prev = {a: None}
        stack = [a]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w not in prev:
                    prev[w] = v
                    stack.append(w)
        if b not in prev:
            raise UnknownVertex(f"no path from {a} to {b}")
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out[::-1]

    def subgraph(self, keep: Iterable[str]) -> "PlumbingGraph":
        keep = set(keep)
        return PlumbingGraph({v: e for v, e in self.euler.items() if v in keep},
                             frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for v, e in self.euler.items():
            g.add_node(v, euler=e)
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True, eq=False)
class DecoratedGraph:
    """A plumbing graph with orbifold weights n_i >= 1 (absent means 1)."""

    graph: PlumbingGraph
    weights: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        w = {}
        for v, n in self.weights.items():
            if v not in self.graph:
                raise UnknownVertex(f"weight on unknown vertex {v!r}")
            if int(n) < 1:
                raise NonPositiveWeight(f"weight of {v} must be >= 1, got {n}")
            if int(n) != 1:
                w[v] = int(n)
        object.__setattr__(self, "weights", MappingProxyType(dict(sorted(w.items()))))

    def __eq__(self, other):
        if not isinstance(other, DecoratedGraph):
            return NotImplemented
        return self.graph == other.graph and dict(self.weights) == dict(other.weights)

    def __hash__(self):
        return hash((self.graph, tuple(self.weights.items())))

    def weight(self, v: str) -> int:
        if v not in self.graph:
            raise UnknownVertex(f"unknown vertex {v!r}")
        return self.weights.get(v, 1)

    def weight_vector(self) -> tuple[int, ...]:
        return tuple(self.weight(v) for v in self.graph.vertices)

    @property
    def special(self) -> tuple[str, ...]:
        return tuple(self.weights)

    @property
    def decorated_interior(self) -> tuple[str, ...]:
        return tuple(v for v in self.weights if self.graph.valence(v) >= 2)

    def with_weights(self, weights: Mapping[str, int]) -> "DecoratedGraph":
        return DecoratedGraph(self.graph, weights)

    def __getattr__(self, name):
        # graph-level queries (vertices, leaves, neighbors, ...) pass through
        if name.startswith("_") or name in ("graph", "weights"):
            raise AttributeError(name)
        return getattr(self.graph, name)

    def __len__(self):
        return len(self.graph)

    def __contains__(self, v):
        return v in self.graph


AnyGraph = Union[PlumbingGraph, DecoratedGraph]


def plain(g: AnyGraph) -> PlumbingGraph:
    return g.graph if isinstance(g, DecoratedGraph) else g


def decorated(g: AnyGraph) -> DecoratedGraph:
    return g if isinstance(g, DecoratedGraph) else DecoratedGraph(g)


# --- text format -----------------------------------------------------------

def parse_graph(text: str) -> DecoratedGraph:
    euler: dict[str, int] = {}
    edges: list[tuple[str, str, int, int]] = []
    weights: dict[str, tuple[int, int, int]] = {}
    seen_edges: set[tuple[str, str]] = set()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if not toks:
            continue
        kw, kcol = toks[0]
        if kw not in ("vertex", "edge", "weight"):
            raise ParseError(f"unknown statement {kw!r}", lineno, kcol)
        if len(toks) != 3:
            col = toks[3][1] if len(toks) > 3 else len(raw) + 1
            raise ParseError(f"{kw!r} takes exactly 2 arguments, got {len(toks) - 1}", lineno, col)
        (a, acol), (b, bcol) = toks[1], toks[2]
        if not ID_RE.match(a):
            raise ParseError(f"bad vertex id {a!r}", lineno, acol)
        if kw == "vertex":
            if not INT_RE.match(b):
                raise ParseError(f"Euler number must be an integer, got {b!r}", lineno, bcol)
            if a in euler:
                raise DuplicateVertex(f"vertex {a!r} declared twice", lineno, acol)
            euler[a] = int(b)
        elif kw == "edge":
            if not ID_RE.match(b):
                raise ParseError(f"bad vertex id {b!r}", lineno, bcol)
            if a == b:
                raise ParseError(f"self-loop at {a!r}", lineno, bcol)
            e = _edge(a, b)
            if e in seen_edges:
                raise ParseError(f"duplicate edge {a}-{b}", lineno, kcol)
            seen_edges.add(e)
            edges.append((a, b, lineno, acol))
            edges.append((b, a, lineno, bcol))
        else:
            if not INT_RE.match(b):
                raise ParseError(f"weight must be an integer, got {b!r}", lineno, bcol)
            if int(b) < 1:
                raise NonPositiveWeight(f"weight of {a} must be >= 1, got {b}", lineno, bcol)
            if a in weights:
                raise ParseError(f"weight for {a!r} given twice", lineno, acol)
            weights[a] = (int(b), lineno, acol)

    for v, _, lineno, col in edges:
        if v not in euler:
            raise UnknownVertexInEdge(f"edge uses undeclared vertex {v!r}", lineno, col)
    for v, (_, lineno, col) in weights.items():
        if v not in euler:
            raise ParseError(f"weight for undeclared vertex {v!r}", lineno, col)
    graph = PlumbingGraph(euler, frozenset(seen_edges))
    return DecoratedGraph(graph, {v: n for v, (n, _, _) in weights.items()})


def serialize(g: AnyGraph) -> str:
    g = decorated(g)
    lines = [f"vertex {v} {e}" for v, e in g.graph.euler.items()]
    lines += [f"edge {a} {b}" for a, b in sorted(g.graph.edges)]
    lines += [f"weight {v} {n}" for v, n in g.weights.items()]
    return "\n".join(lines) + "\n"


# --- matrices and validation -----------------------------------------------

def intersection_matrix(g: AnyGraph) -> exactlin.IntMatrix:
    g = plain(g)
    vs = g.vertices
    return tuple(
        tuple(g.euler[a] if a == b else int(g.has_edge(a, b)) for b in vs) for a in vs
    )


def is_negative_definite(g: AnyGraph) -> bool:
    m = intersection_matrix(g)
    return exactlin.is_positive_definite([[-x for x in row] for row in m])


def maximal_strings(g: AnyGraph) -> list[tuple[str, ...]]:
    """Connected components of the subgraph spanned by vertices of valence <= 2."""
    g = plain(g)
    free = {v for v in g.vertices if g.valence(v) <= 2}
    out, seen = [], set()
    for v in g.vertices:
        if v in free and v not in seen:
            comp = g.reachable(v, blocked=set(g.vertices) - free)
            seen |= comp
            out.append(tuple(sorted(comp)))
    return out


@dataclass(frozen=True)
class ValidationReport:
    is_tree: bool
    is_negative_definite: bool
    is_quasi_minimal: bool
    determinant: int
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.is_tree and self.is_negative_definite and self.is_quasi_minimal


def validate(g: AnyGraph) -> ValidationReport:
    dg = decorated(g)
    pg = dg.graph
    violations = []
    tree = pg.is_tree()
    if not pg.euler:
        violations.append("graph has no vertices")
    elif not pg.is_connected():
        violations.append("graph is not connected")
    elif not tree:
        violations.append(f"graph has a cycle ({len(pg.edges)} edges on {len(pg)} vertices)")
    det = exactlin.determinant(intersection_matrix(pg)) if pg.euler else 0
    nd = bool(pg.euler) and is_negative_definite(pg)
    if pg.euler and not nd:
        violations.append("intersection matrix is not negative definite")
    qm = True
    for s in maximal_strings(pg):
        minus_ones = [v for v in s if pg.euler[v] == -1]
        if minus_ones and len(s) > 1:
            qm = False
            violations.append(
                f"string {'-'.join(s)} contains -1 vertex {', '.join(minus_ones)}"
            )
    for v in dg.decorated_interior:
        violations.append(f"decoration n={dg.weight(v)} at interior vertex {v}")
    return ValidationReport(tree, nd, qm, det, tuple(violations))


# --- blow-up calculus --------------------------------------------------------

def _fresh_id(g: PlumbingGraph, base: str) -> str:
    k = 1
    while f"{base}_b{k}" in g:
        k += 1
    return f"{base}_b{k}"


def _rebuild(g: AnyGraph, euler, edges, weights=None) -> AnyGraph:
    pg = PlumbingGraph(euler, frozenset(edges))
    if isinstance(g, DecoratedGraph):
        return DecoratedGraph(pg, g.weights if weights is None else weights)
    return pg


def blow_up_free(g: AnyGraph, v: str) -> AnyGraph:
    """Blow up a generic point of curve ``v``: new -1 leaf on ``v``, euler(v) - 1."""
    pg = plain(g)
    if v not in pg:
        raise UnknownVertex(f"unknown vertex {v!r}")
    u = _fresh_id(pg, v)
    euler = dict(pg.euler)
    euler[v] -= 1
    euler[u] = -1
    return _rebuild(g, euler, pg.edges | {_edge(u, v)})


def blow_up_edge(g: AnyGraph, v: str, w: str) -> AnyGraph:
    """Blow up the intersection point of ``v`` and ``w``."""
    pg = plain(g)
    if v not in pg or w not in pg or not pg.has_edge(v, w):
        raise UnknownEdge(f"no edge {v}-{w}")
    u = _fresh_id(pg, v)
    euler = dict(pg.euler)
    euler[v] -= 1
    euler[w] -= 1
    euler[u] = -1
    edges = (pg.edges - {_edge(v, w)}) | {_edge(u, v), _edge(u, w)}
    return _rebuild(g, euler, edges)


def blow_down(g: AnyGraph, u: str) -> AnyGraph:
    """Contract a -1 curve of valence 1 or 2 carrying no decoration."""
    pg = plain(g)
    if u not in pg:
        raise UnknownVertex(f"unknown vertex {u!r}")
    if pg.euler[u] != -1:
        raise NotBlowDownable(f"{u} has Euler number {pg.euler[u]}, not -1")
    nbrs = pg.neighbors(u)
    if not 1 <= len(nbrs) <= 2:
        raise NotBlowDownable(f"{u} has valence {len(nbrs)}; need 1 or 2")
    if isinstance(g, DecoratedGraph) and g.weight(u) != 1:
        raise NotBlowDownable(f"{u} carries orbifold weight {g.weight(u)}")
    euler = {v: e for v, e in pg.euler.items() if v != u}
    for n in nbrs:
        euler[n] += 1
    edges = {e for e in pg.edges if u not in e}
    if len(nbrs) == 2:
        edges.add(_edge(*nbrs))
    return _rebuild(g, euler, edges)


def is_isomorphic(a: AnyGraph, b: AnyGraph) -> bool:
    """Isomorphism of weighted (and decorated) graphs, ignoring vertex names."""
    ga, gb = plain(a).to_networkx(), plain(b).to_networkx()
    da, db = decorated(a), decorated(b)
    for v in ga:
        ga.nodes[v]["n"] = da.weight(v)
    for v in gb:
        gb.nodes[v]["n"] = db.weight(v)
    return nx.is_isomorphic(
        ga, gb, node_match=lambda x, y: (x["euler"], x["n"]) == (y["euler"], y["n"])
    )
