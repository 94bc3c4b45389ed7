"""Exact integer and rational linear algebra.

Matrices are plain tuples of row tuples holding Python ints (or
``Fraction`` for rational matrices), so there is no overflow at any size
and every value is immutable and hashable.

The central tool is :func:`smith_normal_form`, from which cokernels
(finitely generated abelian groups), integer left kernels, subgroup
structure and homomorphism kernels are all derived.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import SingularMatrix

IntMatrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]
GroupElement = tuple[int, ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m))


def matmul(a, b):
    if not a or not b:
        return ()
    cols = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def vecmat(v: Sequence, m) -> tuple:
    """Row vector times matrix."""
    if not m:
        return ()
    return tuple(sum(v[i] * m[i][j] for i in range(len(m))) for j in range(len(m[0])))


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_positive_definite(m: Sequence[Sequence[int]]) -> bool:
    """Sylvester's criterion on a symmetric integer matrix.

    Bareiss elimination without pivoting leaves the k-th leading principal
    minor in the k-th pivot position, so one pass checks them all.
    """
    n = len(m)
    a = [list(r) for r in m]
    prev = 1
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return True


def rational_inverse(m: Sequence[Sequence[int]]) -> RatMatrix:
    """Exact inverse over Q by Gauss-Jordan elimination."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("inverse of a non-square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(tuple(row[n:]) for row in a)


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == S`` with U, V unimodular and S diagonal.

    ``V_inv`` is the exact inverse of V, kept because cokernel lifts need it.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i][i] for i in range(min(shape(self.S))))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _pick_pivot(a, t):
    best = None
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return best


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot: smallest nonzero absolute value in the active block, ties broken
    by lowest (row, column).  Output is deterministic for a given input.
    """
    a = [list(map(int, r)) for r in m]
    nr, nc = len(a), (len(a[0]) if a else 0)
    U = [list(r) for r in identity(nr)]
    V = [list(r) for r in identity(nc)]
    Vi = [list(r) for r in identity(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        # col_dst += q * col_src; the inverse acts on rows of V^-1
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    for t in range(min(nr, nc)):
        while True:
            piv = _pick_pivot(a, t)
            if piv is None:
                break
            _, pi, pj = piv
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, nr)
                        if any(a[i][j] % p for j in range(t + 1, nc))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return SmithDecomposition(as_matrix(U), as_matrix(a), as_matrix(V), as_matrix(Vi))


def left_kernel(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Basis (as rows) of the integer lattice {x : x @ m == 0}."""
    if not m:
        return ()
    snf = smith_normal_form(m)
    return snf.U[snf.rank:]


@dataclass(frozen=True)
class AbelianGroup:
    """Canonical form Z/d_1 + ... + Z/d_k + Z^free_rank with d_i | d_{i+1}, d_i > 1.

    ``generator_images[j]`` is the canonical coordinate vector of the j-th
    presenting generator; ``lifts[k]`` expresses the k-th canonical
    generator as an integer combination of the presenting generators.
    """

    invariant_factors: tuple[int, ...]
    free_rank: int
    generator_images: IntMatrix
    lifts: IntMatrix = field(repr=False)

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.invariant_factors + (0,) * self.free_rank

    @property
    def rank(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        return math.prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0

    @property
    def zero(self) -> GroupElement:
        return (0,) * self.rank

    @property
    def ngens(self) -> int:
        return len(self.generator_images)

    def reduce(self, coords: Sequence[int]) -> GroupElement:
        return tuple(x % d if d else x for x, d in zip(coords, self.moduli))

    def element(self, combination: Sequence[int]) -> GroupElement:
        """Class of sum_j combination[j] * (presenting generator j)."""
        if self.rank == 0:
            return ()
        return self.reduce(vecmat(combination, self.generator_images))

    def generator(self, j: int) -> GroupElement:
        return self.reduce(self.generator_images[j])

    def canonical_generators(self) -> list[GroupElement]:
        return [tuple(int(i == k) for i in range(self.rank)) for k in range(self.rank)]

    def add(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.reduce([a + b for a, b in zip(x, y)])

    def scale(self, n: int, x: GroupElement) -> GroupElement:
        return self.reduce([n * a for a in x])

    def element_order(self, x: GroupElement) -> int | None:
        x = self.reduce(x)
        out = 1
        for a, d in zip(x, self.moduli):
            if d == 0:
                if a:
                    return None
                continue
            out = math.lcm(out, d // math.gcd(a, d))
        return out

    def elements(self) -> Iterator[GroupElement]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def is_isomorphic(self, other: "AbelianGroup") -> bool:
        return (self.invariant_factors, self.free_rank) == (other.invariant_factors, other.free_rank)

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def cokernel(relations: Sequence[Sequence[int]], ngens: int | None = None) -> AbelianGroup:
    """Presentation of Z^ngens modulo the row span of ``relations``."""
    rel = as_matrix(relations)
    if ngens is None:
        if not rel:
            raise ValueError("ngens is required when there are no relations")
        ngens = len(rel[0])
    elif rel and len(rel[0]) != ngens:
        raise ValueError(f"relations have {len(rel[0])} columns, expected {ngens}")
    if rel:
        snf = smith_normal_form(rel)
        V, Vi = snf.V, snf.V_inv
        diag = list(snf.diagonal) + [0] * (ngens - len(snf.diagonal))
    else:
        V = Vi = identity(ngens)
        diag = [0] * ngens
    keep = [k for k, d in enumerate(diag) if d != 1]
    moduli = [diag[k] for k in keep]
    images = tuple(
        tuple((V[j][k] % d) if d else V[j][k] for k, d in zip(keep, moduli))
        for j in range(ngens)
    )
    return AbelianGroup(
        invariant_factors=tuple(d for d in moduli if d > 1),
        free_rank=sum(1 for d in moduli if d == 0),
        generator_images=images,
        lifts=tuple(Vi[k] for k in keep),
    )


def _modulus_rows(moduli: Sequence[int]) -> list[tuple[int, ...]]:
    n = len(moduli)
    return [tuple(d if i == k else 0 for i in range(n)) for k, d in enumerate(moduli) if d]


def subgroup(group: AbelianGroup, elements: Sequence[GroupElement]) -> AbelianGroup:
    """Structure of the subgroup generated by ``elements``.

    The result is presented on the given elements: its ``generator_images[i]``
    locates ``elements[i]`` inside the subgroup's canonical form.
    """
    s = len(elements)
    if s == 0:
        return AbelianGroup((), 0, (), ())
    if group.rank == 0:
        return cokernel(identity(s), s)
    stacked = [tuple(e) for e in elements] + _modulus_rows(group.moduli)
    ker = left_kernel(stacked)
    rel = [row[:s] for row in ker]
    return cokernel(rel, s)


def subgroup_order(group: AbelianGroup, elements: Sequence[GroupElement]) -> int | None:
    return subgroup(group, elements).order


def generates(group: AbelianGroup, elements: Sequence[GroupElement]) -> bool:
    """True iff ``elements`` generate the whole group."""
    if group.rank == 0:
        return True
    quotient = cokernel([tuple(e) for e in elements] + _modulus_rows(group.moduli), group.rank)
    return quotient.is_trivial


def hom_kernel(source: AbelianGroup, images: Sequence[Sequence[int]],
               target_moduli: Sequence[int]) -> tuple[AbelianGroup, list[GroupElement]]:
    """Kernel of a homomorphism out of ``source``.

    ``images[k]`` is the image of the k-th canonical generator of ``source``
    in Z^c / (target_moduli), where a modulus of 0 means a free coordinate.
    Returns the kernel presented on a generating set, plus that generating
    set as elements of ``source``.
    """
    r = source.rank
    if r == 0:
        return AbelianGroup((), 0, (), ()), []
    if target_moduli:
        stacked = [tuple(v) for v in images] + _modulus_rows(target_moduli)
        gens = [source.reduce(row[:r]) for row in left_kernel(stacked)]
    else:
        gens = source.canonical_generators()
    gens = [g for g in gens if any(g)]
    gens = list(dict.fromkeys(gens))
    return subgroup(source, gens), gens
