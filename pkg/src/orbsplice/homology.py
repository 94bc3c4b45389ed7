"""Discriminant and orbifold homology groups of plumbing graphs.

D(G) is the cokernel of the intersection matrix.  With orbifold weights,
row i of the matrix is multiplied by n_i before taking the cokernel, which
gives the orbifold first homology of the link.  Generators of both groups
are the dual classes e_j, indexed in canonical vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exactlin
from .exactlin import AbelianGroup, GroupElement
from .errors import DecoratedInterior, GenerationFailure, NoInteriorVertex, NotNegativeDefinite, UnknownVertex
from .graphs import AnyGraph, DecoratedGraph, decorated, intersection_matrix, is_negative_definite, plain


def require_negative_definite(g: AnyGraph) -> None:
    if not is_negative_definite(g):
        raise NotNegativeDefinite("intersection matrix is not negative definite")


@dataclass(frozen=True)
class RelationSystem:
    matrix: exactlin.IntMatrix
    weights: tuple[int, ...]
    vertex_order: tuple[str, ...]


def relation_system(g: AnyGraph) -> RelationSystem:
    dg = decorated(g)
    m = intersection_matrix(dg.graph)
    w = dg.weight_vector()
    rows = tuple(tuple(n * x for x in row) for n, row in zip(w, m))
    return RelationSystem(rows, w, dg.graph.vertices)


def discriminant_group(g: AnyGraph) -> AbelianGroup:
    require_negative_definite(g)
    return exactlin.cokernel(intersection_matrix(g))


def orbifold_homology(g: AnyGraph) -> AbelianGroup:
    require_negative_definite(g)
    return exactlin.cokernel(relation_system(g).matrix)


def linking_matrix(g: AnyGraph) -> exactlin.RatMatrix:
    """Linking numbers of meridian knots: minus the inverse intersection matrix."""
    require_negative_definite(g)
    inv = exactlin.rational_inverse(intersection_matrix(g))
    return tuple(tuple(-x for x in row) for row in inv)


@dataclass(frozen=True)
class GroupHom:
    source: AbelianGroup
    target: AbelianGroup
    images: tuple[GroupElement, ...]

    def __post_init__(self):
        for k, d in enumerate(self.source.moduli):
            if d and any(self.target.scale(d, self.images[k])):
                raise ValueError(f"homomorphism not well defined on generator {k}")

    def __call__(self, x: Sequence[int]) -> GroupElement:
        out = [0] * self.target.rank
        for a, img in zip(x, self.images):
            for i, y in enumerate(img):
                out[i] += a * y
        return self.target.reduce(out)

    def is_surjective(self) -> bool:
        return exactlin.generates(self.target, self.images)

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        return GroupHom(other.source, self.target, tuple(self(img) for img in other.images))


def hom_from_generator_images(source: AbelianGroup, target: AbelianGroup) -> GroupHom:
    """The map sending presenting generator e_j of source to e_j of target."""
    images = tuple(target.element(lift) for lift in source.lifts)
    return GroupHom(source, target, images)


def projection_hom(g: AnyGraph) -> GroupHom:
    """The natural surjection from the orbifold group onto D(G)."""
    return hom_from_generator_images(orbifold_homology(g), discriminant_group(g))


def kernel_with_generators(h: GroupHom) -> tuple[AbelianGroup, list[GroupElement]]:
    return exactlin.hom_kernel(h.source, h.images, h.target.moduli)


def kernel_type(h: GroupHom) -> AbelianGroup:
    return kernel_with_generators(h)[0]


def cyclic_sum(orders: Sequence[int]) -> AbelianGroup:
    """Canonical form of the direct sum of Z/(n) over ``orders``."""
    n = len(orders)
    return exactlin.cokernel([[d if i == j else 0 for j in range(n)] for i, d in enumerate(orders)], n)


@dataclass(frozen=True)
class RedGreen:
    center: str
    red: tuple[str, ...]
    green: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]  # (from, to, "red" | "green")


def red_green(g: AnyGraph, center: str | None = None) -> RedGreen:
    """Orient the tree away from ``center``; at each interior vertex the arrow
    to the least eligible neighbor is red, the others green."""
    pg = plain(g)
    interior = pg.interior
    if not interior:
        return RedGreen(pg.vertices[0], (), pg.vertices, ())
    if center is None:
        center = interior[0]
    if center not in pg:
        raise UnknownVertex(f"unknown vertex {center!r}")
    if center not in interior:
        raise NoInteriorVertex(f"center {center} has valence {pg.valence(center)}; pick an interior vertex")
    red, green, arrows = [], [center], []
    queue = [(center, None)]
    while queue:
        v, parent = queue.pop(0)
        children = [w for w in pg.neighbors(v) if w != parent]
        if not children:
            continue
        for i, w in enumerate(children):
            colour = "red" if i == 0 else "green"
            (red if i == 0 else green).append(w)
            arrows.append((v, w, colour))
            queue.append((w, v))
    return RedGreen(center, tuple(red), tuple(sorted(green)), tuple(arrows))


def select_generators(g: AnyGraph, center: str | None = None) -> list[GroupElement]:
    """Classes of the green vertices, which generate the orbifold group."""
    dg = decorated(g)
    if dg.decorated_interior:
        raise DecoratedInterior(f"decorations at interior vertices: {', '.join(dg.decorated_interior)}")
    group = orbifold_homology(dg)
    rg = red_green(dg, center)
    idx = {v: i for i, v in enumerate(dg.graph.vertices)}
    gens = [group.generator(idx[v]) for v in rg.green]
    if not exactlin.generates(group, gens):
        raise GenerationFailure(f"green vertices {rg.green} do not generate {group.describe()}")
    return gens


def pairing_columns(g: AnyGraph) -> tuple[tuple[Fraction, ...], ...]:
    """Matrix of pairings e_i . e_j, i.e. the inverse intersection matrix."""
    require_negative_definite(g)
    return exactlin.rational_inverse(intersection_matrix(g))
