"""Whole-graph invariant report and its JSON form.

Big integers (invariant factors, orders, determinants) are written as
strings in JSON so they survive readers with 64-bit or double numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import homology, reps, splice
from .checks import CheckResult
from .errors import NoNodes
from .exactlin import AbelianGroup
from .graphs import AnyGraph, decorated, validate


def group_json(group: AbelianGroup, vertex_order=None) -> dict:
    out = {
        "invariant_factors": [str(d) for d in group.invariant_factors],
        "free_rank": group.free_rank,
        "order": None if group.order is None else str(group.order),
        "generator_images": [list(row) for row in group.generator_images],
        "description": group.describe(),
    }
    if vertex_order is not None:
        out["vertex_order"] = list(vertex_order)
    return out


def rep_json(rep: reps.DiagonalRepresentation) -> dict:
    return {
        "leaf_order": list(rep.leaf_order),
        "images": [[str(x) for x in img] for img in rep.images],
        "display": [rep.display(img) for img in rep.images],
    }


@dataclass
class InvariantReport:
    name: str
    determinant: int
    validation: Any
    discriminant: AbelianGroup | None = None
    orbifold: AbelianGroup | None = None
    kernel: AbelianGroup | None = None
    leaf_order: tuple[str, ...] = ()
    vertex_order: tuple[str, ...] = ()
    representation: reps.DiagonalRepresentation | None = None
    orbifold_representation: reps.DiagonalRepresentation | None = None
    checks: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks.values())

    def to_json(self) -> dict:
        g = lambda x: None if x is None else group_json(x, self.vertex_order)
        return {
            "name": self.name,
            "determinant": str(self.determinant),
            "vertex_order": list(self.vertex_order),
            "leaf_order": list(self.leaf_order),
            "discriminant": g(self.discriminant),
            "orbifold": g(self.orbifold),
            "kernel": None if self.kernel is None else group_json(self.kernel),
            "invariant_factors": None if self.orbifold is None
            else [str(d) for d in self.orbifold.invariant_factors],
            "representation": None if self.representation is None else rep_json(self.representation),
            "orbifold_representation": None if self.orbifold_representation is None
            else rep_json(self.orbifold_representation),
            "violations": list(self.validation.violations),
            "checks": {k: c.to_json() for k, c in sorted(self.checks.items())},
        }


def _flag(name, value, witnesses=()):
    return CheckResult(name, value, (), tuple(witnesses))


def build_report(g: AnyGraph, name: str = "graph") -> InvariantReport:
    dg = decorated(g)
    v = validate(dg)
    rep = InvariantReport(name, v.determinant, v, vertex_order=dg.graph.vertices,
                          leaf_order=dg.graph.leaves)
    rep.checks["tree"] = _flag("tree", v.is_tree)
    rep.checks["negative_definite"] = _flag("negative_definite", v.is_negative_definite)
    rep.checks["quasi_minimal"] = _flag(
        "quasi_minimal", v.is_quasi_minimal, [x for x in v.violations if x.startswith("string")])
    if not (v.is_tree and v.is_negative_definite):
        return rep
    rep.discriminant = homology.discriminant_group(dg)
    rep.orbifold = homology.orbifold_homology(dg)
    rep.kernel = homology.kernel_type(homology.projection_hom(dg))
    rep.representation = reps.diagonal_rep(dg)
    if not dg.decorated_interior:
        rep.orbifold_representation = reps.orbifold_diagonal_rep(dg)
        rep.checks["power_map_square"] = reps.power_map_square_check(dg)
        expected = homology.cyclic_sum([dg.weight(w) for w in dg.special])
        rep.checks["kernel_exactness"] = _flag(
            "kernel_exactness", rep.kernel.is_isomorphic(expected),
            [{"kernel": rep.kernel.describe(), "expected": expected.describe()}])
    try:
        d = splice.splice_diagram(dg)
    except NoNodes:
        rep.checks["semigroup"] = _flag("semigroup", None, ["graph has no nodes"])
        rep.checks["congruence"] = _flag("congruence", None, ["graph has no nodes"])
        return rep
    rep.checks["semigroup"] = splice.semigroup_check(d)
    rep.checks["congruence"] = splice.congruence_check(dg)
    return rep
