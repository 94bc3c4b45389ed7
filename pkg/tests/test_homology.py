import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from orbsplice import exactlin
from orbsplice.errors import DecoratedInterior, NoInteriorVertex, NotNegativeDefinite
from orbsplice.graphs import DecoratedGraph, PlumbingGraph, intersection_matrix, parse_graph
from orbsplice.homology import (
    GroupHom, cyclic_sum, discriminant_group, kernel_type, kernel_with_generators, linking_matrix,
    orbifold_homology, projection_hom, red_green, relation_system, select_generators,
)
from trees import decorated_trees, fixture


def factors(group):
    return list(group.invariant_factors)


def sympy_factors(matrix):
    return [abs(int(x)) for x in sympy_invariant_factors(sympy.Matrix(matrix)) if abs(int(x)) != 1]


def test_discriminant_examples():
    assert factors(discriminant_group(fixture("d4"))) == [2, 2]
    assert discriminant_group(fixture("e237")).is_trivial
    assert discriminant_group(fixture("plane4")).is_trivial
    assert factors(discriminant_group(fixture("d4_pq"))) == [2, 2]


def test_orbifold_examples():
    assert factors(orbifold_homology(fixture("d4"))) == [2, 4, 4]
    assert factors(orbifold_homology(fixture("plane4"))) == [210]
    plane2 = fixture("plane4").with_weights({"a": 2, "q": 2, "d": 2, "s": 2})
    assert factors(orbifold_homology(plane2)) == [2, 2, 2, 2]
    assert factors(orbifold_homology(fixture("d4_pq"))) == [2, 30]
    assert factors(orbifold_homology(fixture("star4"))) == [2, 60]


def test_non_definite_refused():
    g = PlumbingGraph({"a": 0})
    for f in (discriminant_group, orbifold_homology, linking_matrix):
        with pytest.raises(NotNegativeDefinite):
            f(g)


def test_relation_system_scales_rows():
    rs = relation_system(fixture("d4"))
    assert rs.vertex_order == ("e1", "e2", "e3", "f")
    assert rs.weights == (2, 2, 2, 1)
    assert rs.matrix[0] == (-4, 0, 0, 2)
    assert rs.matrix[3] == (1, 1, 1, -2)


# linking

def test_linking_examples():
    assert linking_matrix(PlumbingGraph({"a": -2})) == ((Fraction(1, 2),),)
    lk = linking_matrix(fixture("d4"))
    assert lk[0][1] == Fraction(1, 2)
    assert lk[0][3] == 1
    assert lk[3][3] == 2


@settings(max_examples=80, deadline=None)
@given(decorated_trees())
def test_linking_positive_and_inverse(g):
    lk = linking_matrix(g)
    assert all(x > 0 for row in lk for x in row)
    m = intersection_matrix(g)
    n = len(m)
    prod = [[sum(-m[i][k] * lk[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == [[int(i == j) for j in range(n)] for i in range(n)]


# projection and its kernel

def test_projection_d4():
    g = fixture("d4")
    phi = projection_hom(g)
    assert phi.is_surjective()
    kernel, gens = kernel_with_generators(phi)
    assert kernel.order == 8 and factors(kernel) == [2, 2, 2]
    src = phi.source
    idx = {v: i for i, v in enumerate(g.graph.vertices)}
    named = [src.scale(2, src.generator(idx["e1"])), src.scale(2, src.generator(idx["e2"])),
             src.generator(idx["f"])]
    for x in named:
        assert not any(phi(x))
    assert exactlin.subgroup_order(src, named) == 8


def test_projection_weight_one_is_isomorphism():
    g = fixture("d4").with_weights({})
    phi = projection_hom(g)
    assert phi.is_surjective()
    assert kernel_type(phi).is_trivial


def test_projection_trivial_target():
    phi = projection_hom(fixture("plane4"))
    assert phi.target.is_trivial
    assert kernel_type(phi).order == 210


def test_kernel_d4_pq():
    assert factors(kernel_type(projection_hom(fixture("d4_pq")))) == [15]


def test_ill_defined_hom_rejected():
    z2 = cyclic_sum([2])
    z3 = cyclic_sum([3])
    with pytest.raises(ValueError):
        GroupHom(z2, z3, ((1,),))


@settings(max_examples=80, deadline=None)
@given(decorated_trees())
def test_orbifold_order_and_sympy_oracle(g):
    group = orbifold_homology(g)
    det = exactlin.determinant(intersection_matrix(g))
    assert group.order == abs(det) * math.prod(g.weights.values())
    assert factors(group) == sympy_factors(relation_system(g).matrix)
    assert factors(discriminant_group(g)) == sympy_factors(intersection_matrix(g))


@settings(max_examples=80, deadline=None)
@given(decorated_trees())
def test_kernel_is_sum_of_cyclic_groups(g):
    phi = projection_hom(g)
    assert phi.is_surjective()
    assert kernel_type(phi).is_isomorphic(cyclic_sum(list(g.weights.values())))


# red/green generators

def test_red_green_d4():
    rg = red_green(fixture("d4"), "f")
    assert rg.red == ("e1",)
    assert set(rg.green) == {"f", "e2", "e3"}
    gens = select_generators(fixture("d4"), "f")
    assert exactlin.generates(orbifold_homology(fixture("d4")), gens)


def test_red_green_two_vertex_chain():
    g = parse_graph("vertex a -2\nvertex b -2\nedge a b")
    assert red_green(g).green == ("a", "b")


def test_red_green_bad_center():
    with pytest.raises(NoInteriorVertex):
        red_green(fixture("d4"), "e1")


def test_select_generators_needs_leaf_decorations():
    g = DecoratedGraph(fixture("d4").graph, {"f": 3})
    with pytest.raises(DecoratedInterior):
        select_generators(g)


@settings(max_examples=80, deadline=None)
@given(decorated_trees())
def test_greens_generate_for_every_center(g):
    group = orbifold_homology(g)
    assert len(group.invariant_factors) <= len(g.graph.leaves)
    centers = g.graph.interior or (None,)
    for c in centers:
        rg = red_green(g, c)
        assert len(rg.green) == len(g.graph.leaves)
        assert exactlin.generates(group, select_generators(g, c))
