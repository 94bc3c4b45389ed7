"""Splice diagrams, semigroup and congruence conditions, splice equations.

The splice diagram collapses every valence-2 vertex of the plumbing tree.
At a node v, the edge leading off through neighbor u carries the weight
d_ve = |det| of the branch of the tree cut off from v through u.

For a node v and a leaf w beyond edge e, the leaf weight l'_vw is the
product of the weights adjacent to (but not on) the path from v to w at
the nodes strictly past v.  An edge passes the semigroup condition when
d_ve = sum_w a_w l'_vw has a solution in nonnegative integers; each such
solution is an admissible monomial prod_w x_w^a_w.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping, Sequence

from . import exactlin
from .checks import CheckResult
from .errors import ConditionsFail, DecoratedInterior, NoNodes, UnknownEdge, UnknownVertex
from .graphs import AnyGraph, PlumbingGraph, decorated, intersection_matrix, plain
from .homology import discriminant_group, require_negative_definite
from .reps import DiagonalRepresentation

Monomial = dict  # leaf id -> positive exponent


@dataclass(frozen=True)
class SpliceEdge:
    node: str
    via: str
    end: str
    weight: int
    branch: frozenset
    leaves: tuple[str, ...]
    chain: tuple[str, ...]  # plumbing vertices strictly between node and end


@dataclass(frozen=True)
class SpliceDiagram:
    graph: PlumbingGraph
    nodes: tuple[str, ...]
    leaves: tuple[str, ...]
    edges: Mapping[str, tuple[SpliceEdge, ...]]

    def edge(self, node: str, toward: str) -> SpliceEdge:
        """Edge at ``node`` identified by its first plumbing vertex or its far end."""
        if node not in self.edges:
            raise UnknownVertex(f"{node!r} is not a node of the splice diagram")
        for e in self.edges[node]:
            if toward in (e.via, e.end):
                return e
        raise UnknownEdge(f"node {node} has no edge toward {toward!r}")

    def node_weight(self, v: str) -> int:
        return math.prod(e.weight for e in self.edges[v])

    def diagram_edges(self) -> list[tuple[str, str]]:
        out = set()
        for es in self.edges.values():
            for e in es:
                out.add(tuple(sorted((e.node, e.end))))
        return sorted(out)

    def path_product(self, a: str, b: str, include_start: bool = True) -> int:
        """Product of the edge weights adjacent to, not on, the path a..b,
        taken at every node of the path (``a`` itself only if include_start)."""
        path = self.graph.path(a, b)
        on_path = set(path)
        out = 1
        for i, v in enumerate(path):
            if v not in self.edges or (i == 0 and not include_start):
                continue
            for e in self.edges[v]:
                if e.via not in on_path:
                    out *= e.weight
        return out


def splice_diagram(g: AnyGraph) -> SpliceDiagram:
    pg = plain(g)
    require_negative_definite(pg)
    nodes = pg.nodes
    if not nodes:
        raise NoNodes("graph has no vertex of valence >= 3; splice diagram undefined")
    node_set = set(nodes)
    leaves = pg.leaves
    edges = {}
    for v in nodes:
        out = []
        for u in pg.neighbors(v):
            branch = pg.branch(v, u)
            sub = pg.subgraph(branch)
            weight = abs(exactlin.determinant(intersection_matrix(sub)))
            chain, prev, cur = [], v, u
            while cur not in node_set and pg.valence(cur) == 2:
                chain.append(cur)
                prev, cur = cur, next(w for w in pg.neighbors(cur) if w != prev)
            out.append(SpliceEdge(v, u, cur, weight, branch,
                                  tuple(w for w in leaves if w in branch), tuple(chain)))
        edges[v] = tuple(out)
    return SpliceDiagram(pg, nodes, leaves, MappingProxyType(edges))


@dataclass(frozen=True)
class LeafWeights:
    node: str
    ell: Mapping[str, int]
    ell_prime: Mapping[str, int]
    node_weight: int
    edge_of: Mapping[str, str]  # leaf -> far end of the edge at node leading to it


def leaf_weights(d: SpliceDiagram, v: str) -> LeafWeights:
    if v not in d.edges:
        raise UnknownVertex(f"{v!r} is not a node of the splice diagram")
    ell, ell_p, edge_of = {}, {}, {}
    for e in d.edges[v]:
        for w in e.leaves:
            ell[w] = d.path_product(v, w)
            ell_p[w] = d.path_product(v, w, include_start=False)
            edge_of[w] = e.end
    return LeafWeights(v, ell, ell_p, d.node_weight(v), edge_of)


# --- numerical semigroups ----------------------------------------------------

def semigroup_solution(target: int, generators: Sequence[int]) -> list[int] | None:
    """Nonnegative coefficients c with sum c_i g_i == target, or None.

    Dynamic programming over 0..target; the returned solution is the one
    reached through the lowest-index generator at each step.
    """
    if target < 0:
        return None
    if any(g <= 0 for g in generators):
        raise ValueError("semigroup generators must be positive")
    last = [-1] * (target + 1)
    reach = [False] * (target + 1)
    reach[0] = True
    for s in range(1, target + 1):
        for i, g in enumerate(generators):
            if g <= s and reach[s - g]:
                reach[s] = True
                last[s] = i
                break
    if not reach[target]:
        return None
    coeffs = [0] * len(generators)
    s = target
    while s:
        i = last[s]
        coeffs[i] += 1
        s -= generators[i]
    return coeffs


def in_semigroup(target: int, generators: Sequence[int]) -> bool:
    return semigroup_solution(target, generators) is not None


def _edge_problem(d: SpliceDiagram, e: SpliceEdge) -> tuple[list[str], list[int]]:
    lw = [d.path_product(e.node, w, include_start=False) for w in e.leaves]
    return list(e.leaves), lw


def semigroup_check(d: SpliceDiagram) -> CheckResult:
    details = []
    for v in d.nodes:
        for e in d.edges[v]:
            leaves, gens = _edge_problem(d, e)
            sol = semigroup_solution(e.weight, gens)
            details.append({
                "node": v,
                "edge": e.end,
                "via": e.via,
                "target": e.weight,
                "generators": dict(zip(leaves, gens)),
                "pass": sol is not None,
                "solution": None if sol is None else {w: a for w, a in zip(leaves, sol) if a},
            })
    failures = [x for x in details if not x["pass"]]
    return CheckResult("semigroup", not failures, tuple(details), tuple(failures))


def _iter_solutions(target: int, gens: Sequence[int]) -> Iterator[list[int]]:
    """All nonnegative solutions in ascending lexicographic order."""
    k = len(gens)
    # feasible[i][s]: s is reachable with generators i..k-1
    feasible = [[False] * (target + 1) for _ in range(k + 1)]
    feasible[k][0] = True
    for i in range(k - 1, -1, -1):
        g, row, nxt = gens[i], feasible[i], feasible[i + 1]
        for s in range(target + 1):
            row[s] = nxt[s] or (s >= g and row[s - g])
    if not feasible[0][target]:
        return
    coeffs = [0] * k

    def rec(i, rem):
        if i == k:
            yield list(coeffs)
            return
        for a in range(rem // gens[i] + 1):
            if feasible[i + 1][rem - a * gens[i]]:
                coeffs[i] = a
                yield from rec(i + 1, rem - a * gens[i])
        coeffs[i] = 0

    yield from rec(0, target)


def admissible_monomials(d: SpliceDiagram, v: str, toward: str, cap: int | None = None) -> list[Monomial]:
    e = d.edge(v, toward)
    leaves, gens = _edge_problem(d, e)
    out = []
    for sol in _iter_solutions(e.weight, gens):
        out.append({w: a for w, a in zip(leaves, sol) if a})
        if cap is not None and len(out) >= cap:
            break
    return out


# --- congruence condition ------------------------------------------------------

DEFAULT_CAP = 100_000


def _character(group, index, mono: Mapping[str, int]):
    vec = [0] * len(index)
    for w, a in mono.items():
        vec[index[w]] += a
    return group.element(vec)


def congruence_check(g: AnyGraph, cap: int | None = DEFAULT_CAP) -> CheckResult:
    """Per node: can one admissible monomial per edge be picked with a common
    D(G)-character?  The witness uses the least common character and, for
    it, the lexicographically least monomial on each edge."""
    d = splice_diagram(g)
    group = discriminant_group(d.graph)
    index = {v: i for i, v in enumerate(d.graph.vertices)}
    sg = semigroup_check(d)
    failing = {(x["node"], x["edge"]) for x in sg.failures}
    details = []
    for v in d.nodes:
        bad = [e.end for e in d.edges[v] if (v, e.end) in failing]
        if bad:
            details.append({"node": v, "pass": None, "status": "not_applicable",
                            "semigroup_failures": bad})
            continue
        per_edge, truncated = [], False
        for e in d.edges[v]:
            seen: dict = {}
            monos = admissible_monomials(d, v, e.via, cap)
            truncated |= cap is not None and len(monos) >= cap
            for m in monos:
                seen.setdefault(_character(group, index, m), m)
            per_edge.append((e, seen))
        common = set(per_edge[0][1])
        for _, seen in per_edge[1:]:
            common &= set(seen)
        if not common:
            details.append({"node": v, "pass": False, "status": "fail", "truncated": truncated})
            continue
        chi = min(common)
        details.append({
            "node": v,
            "pass": True,
            "status": "pass",
            "character": list(chi),
            "choice": {e.end: seen[chi] for e, seen in per_edge},
        })
    if any(x["pass"] is False for x in details):
        passed = False
    elif any(x["pass"] is None for x in details):
        passed = None
    else:
        passed = True
    witnesses = tuple(x for x in details if x["pass"] is not True) if passed is not True else tuple(details)
    return CheckResult("congruence", passed, tuple(details), witnesses)


# --- equations -----------------------------------------------------------------

@dataclass(frozen=True)
class SpliceEquation:
    node: str
    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]  # (coefficient, dense exponents)


@dataclass(frozen=True)
class SpliceEquationSet:
    leaf_order: tuple[str, ...]
    equations: tuple[SpliceEquation, ...]
    variable: str = "x"
    power_substituted: bool = False
    exponents: tuple[int, ...] | None = None

    def __len__(self):
        return len(self.equations)

    def to_text(self) -> str:
        return "".join(format_equation(eq, self.variable) + "\n" for eq in self.equations)

    def to_json(self) -> dict:
        return {
            "leaf_order": list(self.leaf_order),
            "variable": self.variable,
            "power_substituted": self.power_substituted,
            "exponents": None if self.exponents is None else list(self.exponents),
            "equations": [
                {
                    "node": eq.node,
                    "text": format_equation(eq, self.variable),
                    "terms": [
                        {"coef": str(c),
                         "exponents": {w: a for w, a in zip(self.leaf_order, exps) if a}}
                        for c, exps in eq.terms
                    ],
                }
                for eq in self.equations
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SpliceEquationSet":
        leaves = tuple(obj["leaf_order"])
        eqs = tuple(
            SpliceEquation(e["node"], tuple(
                (Fraction(t["coef"]), tuple(t["exponents"].get(w, 0) for w in leaves))
                for t in e["terms"]))
            for e in obj["equations"]
        )
        exps = obj.get("exponents")
        return cls(leaves, eqs, obj.get("variable", "x"), bool(obj.get("power_substituted")),
                   None if exps is None else tuple(exps))


def _sort_key(exps):
    return [(i, a) for i, a in enumerate(exps) if a]


def format_equation(eq: SpliceEquation, variable: str = "x") -> str:
    parts = []
    for c, exps in sorted(eq.terms, key=lambda t: _sort_key(t[1])):
        factors = [str(c)]
        for i, a in enumerate(exps):
            if a:
                factors.append(f"{variable}_{i + 1}" + (f"^{a}" if a != 1 else ""))
        parts.append("*".join(factors))
    return " + ".join(parts) + " = 0"


_VAR_RE = re.compile(r"([A-Za-z]+)_(\d+)(?:\^(\d+))?\Z")


def parse_equations(text: str, leaf_order: Sequence[str], node: str = "") -> SpliceEquationSet:
    """Read the one-equation-per-line text form back (``coef*x_1^2*x_3 + ... = 0``)."""
    leaf_order = tuple(leaf_order)
    eqs, variable = [], "x"
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        lhs = line.split("=", 1)[0]
        terms = []
        for term in re.split(r"\s\+\s", lhs):
            factors = term.strip().split("*")
            coef = Fraction(factors[0])
            exps = [0] * len(leaf_order)
            for f in factors[1:]:
                m = _VAR_RE.match(f.strip())
                if not m:
                    raise ValueError(f"cannot read factor {f!r}")
                variable = m.group(1)
                idx = int(m.group(2)) - 1
                if not 0 <= idx < len(leaf_order):
                    raise ValueError(f"variable {f!r} outside 1..{len(leaf_order)}")
                exps[idx] += int(m.group(3) or 1)
            terms.append((coef, tuple(exps)))
        eqs.append(SpliceEquation(node, tuple(terms)))
    return SpliceEquationSet(leaf_order, tuple(eqs), variable)


def _normalize_choice(value) -> list[Monomial]:
    if isinstance(value, Mapping):
        return [dict(value)]
    return [dict(m) for m in value]


def generate_equations(g: AnyGraph, choices: Mapping | None = None,
                       cap: int | None = DEFAULT_CAP) -> SpliceEquationSet:
    """Splice diagram equations with generic coefficients.

    At a node with edges e_1..e_k (canonical order), equation i for
    i = 1..k-2 is M_{e_i} + i*M_{e_(k-1)} + i^2*M_{e_k}.  Every maximal minor
    of the coefficient matrix is then nonzero.  ``choices`` may override
    the monomials: {node: {edge end or via: monomial or list of monomials}};
    a list stands for the sum of those monomials.
    """
    d = splice_diagram(g)
    sg = semigroup_check(d)
    if not sg.passed:
        raise ConditionsFail("semigroup condition fails", sg.failures)
    choices = dict(choices or {})
    cong = None
    group = discriminant_group(d.graph)
    index = {v: i for i, v in enumerate(d.graph.vertices)}
    leaf_idx = {w: i for i, w in enumerate(d.leaves)}
    equations = []
    for v in d.nodes:
        edges = d.edges[v]
        given = choices.get(v, {})
        picked = []
        for e in edges:
            key = e.end if e.end in given else e.via if e.via in given else None
            if key is not None:
                monos = _normalize_choice(given[key])
                allowed = admissible_monomials(d, v, e.via, cap)
                for m in monos:
                    if m not in allowed:
                        raise ConditionsFail(f"monomial {m} is not admissible on edge {v}->{e.end}")
            else:
                if cong is None:
                    cong = congruence_check(d.graph, cap)
                    if cong.passed is not True:
                        raise ConditionsFail("congruence condition fails",
                                             [x for x in cong.details if x["pass"] is not True])
                row = next(x for x in cong.details if x["node"] == v)
                monos = [row["choice"][e.end]]
            picked.append(monos)
        chars = {_character(group, index, m) for monos in picked for m in monos}
        if len(chars) != 1:
            raise ConditionsFail(f"chosen monomials at node {v} do not share one character")
        k = len(edges)
        for i in range(1, k - 1):
            coeffs = [(i - 1, Fraction(1)), (k - 2, Fraction(i)), (k - 1, Fraction(i * i))]
            terms = []
            for pos, c in coeffs:
                for m in picked[pos]:
                    exps = [0] * len(d.leaves)
                    for w, a in m.items():
                        exps[leaf_idx[w]] = a
                    terms.append((c, tuple(exps)))
            equations.append(SpliceEquation(v, tuple(terms)))
    return SpliceEquationSet(d.leaves, tuple(equations), "x", False, (1,) * len(d.leaves))


def substitute_powers(eqs: SpliceEquationSet, g: AnyGraph) -> SpliceEquationSet:
    """Replace each leaf variable x_w by z_w^(n_w)."""
    dg = decorated(g)
    bad = dg.decorated_interior
    if bad:
        raise DecoratedInterior(f"decorations at interior vertices: {', '.join(bad)}")
    if tuple(dg.graph.leaves) != eqs.leaf_order:
        raise ValueError("equation set was not generated from this graph's leaves")
    if eqs.power_substituted:
        raise ValueError("powers already substituted")
    ns = tuple(dg.weight(w) for w in eqs.leaf_order)
    new = tuple(
        SpliceEquation(eq.node, tuple((c, tuple(a * n for a, n in zip(exps, ns))) for c, exps in eq.terms))
        for eq in eqs.equations
    )
    return SpliceEquationSet(eqs.leaf_order, new, "z", True, ns)


def verify_equivariance(eqs: SpliceEquationSet, rep: DiagonalRepresentation) -> CheckResult:
    """Each equation must be homogeneous: all its monomials share one character."""
    if tuple(rep.leaf_order) != tuple(eqs.leaf_order):
        raise ValueError("variable order does not match the representation's leaf order")
    details = []
    for k, eq in enumerate(eqs.equations):
        chars = []
        for _, exps in eq.terms:
            chars.append(tuple(sum((a * x for a, x in zip(exps, img)), Fraction(0)) % 1
                               for img in rep.images))
        ok = len(set(chars)) <= 1
        details.append({
            "equation": k,
            "node": eq.node,
            "pass": ok,
            "characters": [[str(x) for x in ch] for ch in chars],
        })
    failures = tuple(x for x in details if not x["pass"])
    return CheckResult("equivariance", not failures, tuple(details), failures)
