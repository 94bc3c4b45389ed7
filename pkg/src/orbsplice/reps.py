"""Diagonal representations of D(G) and of the orbifold group in (Q/Z)^t.

A class e maps to its pairings with the leaf classes, (e . e_w) mod 1 for
each leaf w in canonical order.  The orbifold version divides the w-th
pairing by the weight n_w first.  Everything is stored additively in Q/Z;
exp(2 pi i r) only appears as the display token ``zeta_d^k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import exactlin
from .checks import CheckResult
from .errors import DecoratedInterior, NotALeaf
from .exactlin import AbelianGroup, GroupElement
from .graphs import AnyGraph, decorated, plain
from .homology import discriminant_group, orbifold_homology, pairing_columns, projection_hom, relation_system

QmodZVector = tuple[Fraction, ...]


def qmodz(values: Sequence) -> QmodZVector:
    return tuple(Fraction(v) % 1 for v in values)


def _combine(coeffs: Sequence[int], vectors: Sequence[QmodZVector], t: int) -> QmodZVector:
    out = [Fraction(0)] * t
    for c, vec in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(vec):
                out[i] += c * x
    return qmodz(out)


@dataclass(frozen=True)
class DiagonalRepresentation:
    leaf_order: tuple[str, ...]
    images: tuple[QmodZVector, ...]
    group: AbelianGroup
    generator_vectors: tuple[QmodZVector, ...]
    """Image of each presenting generator e_j, in canonical vertex order."""

    @property
    def t(self) -> int:
        return len(self.leaf_order)

    def __call__(self, x: GroupElement) -> QmodZVector:
        return _combine(x, self.images, self.t)

    def of_combination(self, combination: Sequence[int]) -> QmodZVector:
        """Image of sum_j combination[j] e_j."""
        return _combine(combination, self.generator_vectors, self.t)

    def is_injective(self, enumerate_limit: int = 10**4) -> bool:
        """Element enumeration for small groups, an exact kernel computation otherwise."""
        order = self.group.order
        if order is not None and order <= enumerate_limit:
            seen = set()
            for x in self.group.elements():
                img = self(x)
                if img in seen:
                    return False
                seen.add(img)
            return True
        return self.kernel_order() == 1

    def kernel_order(self) -> int | None:
        if self.group.rank == 0:
            return 1
        denom = math.lcm(1, *(x.denominator for img in self.images for x in img))
        int_images = [[int(x * denom) for x in img] for img in self.images]
        kernel, _ = exactlin.hom_kernel(self.group, int_images, [denom] * self.t)
        return kernel.order

    def display(self, vec: QmodZVector) -> list[str]:
        return [zeta_token(x) for x in vec]


def zeta_token(r: Fraction) -> str:
    r = Fraction(r) % 1
    if r == 0:
        return "1"
    if r.numerator == 1:
        return f"ζ_{r.denominator}"
    return f"ζ_{r.denominator}^{r.numerator}"


def _build(g: AnyGraph, group: AbelianGroup, divisors: Sequence[int]) -> DiagonalRepresentation:
    pg = plain(g)
    inv = pairing_columns(pg)
    leaves = pg.leaves
    cols = [pg.index(w) for w in leaves]
    gen_vectors = tuple(
        qmodz(inv[j][c] / n for c, n in zip(cols, divisors)) for j in range(len(pg))
    )
    images = tuple(_combine(lift, gen_vectors, len(leaves)) for lift in group.lifts)
    rep = DiagonalRepresentation(leaves, images, group, gen_vectors)
    return rep


def _check_relations(rep: DiagonalRepresentation, relations) -> None:
    for i, row in enumerate(relations):
        if any(rep.of_combination(row)):
            raise ValueError(f"relation {i} does not map to zero; representation ill-defined")


def diagonal_rep(g: AnyGraph) -> DiagonalRepresentation:
    pg = plain(g)
    group = discriminant_group(pg)
    rep = _build(pg, group, [1] * len(pg.leaves))
    _check_relations(rep, relation_system(pg).matrix)
    return rep


def _require_leaf_weights(g) -> None:
    bad = decorated(g).decorated_interior
    if bad:
        raise DecoratedInterior(f"decorations at interior vertices: {', '.join(bad)}")


def orbifold_diagonal_rep(g: AnyGraph) -> DiagonalRepresentation:
    dg = decorated(g)
    _require_leaf_weights(dg)
    group = orbifold_homology(dg)
    rep = _build(dg, group, [dg.weight(w) for w in dg.graph.leaves])
    _check_relations(rep, relation_system(dg).matrix)
    return rep


@dataclass(frozen=True)
class PowerMap:
    """Raise the w-th coordinate to the n_w-th power; additively, multiply by n_w."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(n < 1 for n in self.exponents):
            raise ValueError("power map exponents must be >= 1")

    def __call__(self, vec: QmodZVector) -> QmodZVector:
        return qmodz(n * x for n, x in zip(self.exponents, vec))

    @classmethod
    def of(cls, g: AnyGraph) -> "PowerMap":
        dg = decorated(g)
        return cls(tuple(dg.weight(w) for w in dg.graph.leaves))


def power_map_square_check(g: AnyGraph) -> CheckResult:
    """Check N(rho*(x)) == rho(Phi(x)) on every canonical generator x."""
    dg = decorated(g)
    top = orbifold_diagonal_rep(dg)
    bottom = diagonal_rep(dg.graph)
    phi = projection_hom(dg)
    power = PowerMap.of(dg)
    details = []
    for k, x in enumerate(top.group.canonical_generators()):
        lhs = power(top(x))
        rhs = bottom(phi(x))
        details.append({
            "generator": k,
            "power_of_rep": [str(v) for v in lhs],
            "rep_of_projection": [str(v) for v in rhs],
            "pass": lhs == rhs,
        })
    passed = all(d["pass"] for d in details)
    return CheckResult("power_map_square", passed, tuple(details),
                       tuple(d for d in details if not d["pass"]))


def monomial_character(exponents: Mapping[str, int], g: AnyGraph) -> GroupElement:
    """Class of sum_w a_w e_w in D(G); monomials with equal class transform alike."""
    pg = plain(g)
    leaves = set(pg.leaves)
    for w, a in exponents.items():
        if w not in leaves:
            raise NotALeaf(f"{w!r} is not a leaf")
        if a < 0:
            raise ValueError(f"negative exponent for {w}")
    group = discriminant_group(pg)
    vec = [exponents.get(v, 0) for v in pg.vertices]
    return group.element(vec)
