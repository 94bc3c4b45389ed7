import pytest
import sympy
from hypothesis import given, settings

from orbsplice import exactlin
from orbsplice.errors import (
    DuplicateVertex, GraphError, NonPositiveWeight, NotBlowDownable, ParseError,
    UnknownEdge, UnknownVertex, UnknownVertexInEdge,
)
from orbsplice.graphs import (
    DecoratedGraph, PlumbingGraph, blow_down, blow_up_edge, blow_up_free, intersection_matrix,
    is_isomorphic, is_negative_definite, maximal_strings, parse_graph, serialize, validate,
)
from trees import decorated_trees, fixture


def chain(*eulers):
    names = [f"v{i}" for i in range(len(eulers))]
    return PlumbingGraph(dict(zip(names, eulers)),
                         frozenset(zip(names, names[1:])))


def eulers_of(g):
    return sorted(g.graph.euler.values() if isinstance(g, DecoratedGraph) else g.euler.values())


# parsing

def test_parse_two_vertex_chain():
    g = parse_graph("vertex a -2\nvertex b -2\nedge a b")
    assert g.graph.vertices == ("a", "b")
    assert g.graph.has_edge("b", "a")
    assert g.weight("a") == g.weight("b") == 1


def test_parse_fixtures():
    d4 = fixture("d4")
    assert len(d4) == 4 and set(d4.weights.values()) == {2}
    assert set(d4.special) == {"e1", "e2", "e3"}
    plane = fixture("plane4")
    assert len(plane) == 6 and plane.graph.is_tree()
    assert dict(plane.weights) == {"a": 2, "q": 3, "d": 5, "s": 7}


def test_parse_comments_blank_lines_forward_references():
    g = parse_graph("# header\n\nedge a b   # before the vertices\nvertex a -2\nvertex b -3\n")
    assert g.graph.has_edge("a", "b")


@pytest.mark.parametrize("text, exc, line, col", [
    ("vertex a -2\nvertex a -3", DuplicateVertex, 2, 8),
    ("vertex a -2\nedge a b", UnknownVertexInEdge, 2, 8),
    ("vertex a -2\nweight a 0", NonPositiveWeight, 2, 10),
    ("vertex a x", ParseError, 1, 10),
    ("vertx a -2", ParseError, 1, 1),
    ("vertex a", ParseError, 1, 9),
    ("vertex a -2 7", ParseError, 1, 13),
    ("vertex a -2\nedge a a", ParseError, 2, 8),
    ("vertex a -2\nvertex b -2\nedge a b\nedge b a", ParseError, 4, 1),
    ("vertex a -2\nweight b 2", ParseError, 2, 8),
    ("vertex a-b -2", ParseError, 1, 8),
])
def test_parse_errors_carry_location(text, exc, line, col):
    with pytest.raises(exc) as info:
        parse_graph(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert f"line {line}, column {col}" in str(info.value)


@settings(max_examples=60, deadline=None)
@given(decorated_trees())
def test_serialize_round_trip(g):
    assert parse_graph(serialize(g)) == g
    assert serialize(parse_graph(serialize(g))) == serialize(g)


def test_graph_construction_errors():
    with pytest.raises(GraphError):
        PlumbingGraph({"a": -2}, frozenset({("a", "a")}))
    with pytest.raises(UnknownVertex):
        PlumbingGraph({"a": -2}, frozenset({("a", "b")}))
    with pytest.raises(UnknownVertex):
        DecoratedGraph(chain(-2), {"zz": 2})
    with pytest.raises(NonPositiveWeight):
        DecoratedGraph(chain(-2), {"v0": 0})


def test_weight_one_is_no_decoration():
    g = DecoratedGraph(chain(-2, -2), {"v0": 1, "v1": 3})
    assert g.special == ("v1",)


# matrices and validation

def test_intersection_matrix_examples():
    assert intersection_matrix(chain(-2)) == ((-2,),)
    d4 = fixture("d4")
    assert exactlin.determinant(intersection_matrix(d4)) == 4
    assert abs(exactlin.determinant(intersection_matrix(fixture("plane4")))) == 1


@settings(max_examples=60, deadline=None)
@given(decorated_trees())
def test_intersection_matrix_symmetric_and_definite(g):
    m = intersection_matrix(g)
    assert m == exactlin.transpose(m)
    assert is_negative_definite(g)
    assert sympy.Matrix(m).is_negative_definite


def test_validate_examples():
    r = validate(fixture("e237"))
    assert r.ok and r.is_negative_definite and r.is_quasi_minimal
    r = validate(chain(-2, -1, -2))
    assert not r.is_quasi_minimal and r.violations
    r = validate(chain(0))
    assert not r.is_negative_definite
    assert validate(chain(-1)).is_quasi_minimal


def test_validate_flags_non_trees_and_interior_decorations():
    cyc = PlumbingGraph({"a": -3, "b": -3, "c": -3},
                        frozenset({("a", "b"), ("b", "c"), ("a", "c")}))
    assert not validate(cyc).is_tree
    two = PlumbingGraph({"a": -2, "b": -2}, frozenset())
    assert not validate(two).is_tree
    g = DecoratedGraph(chain(-2, -2, -2), {"v1": 3})
    assert any("interior" in v for v in validate(g).violations)


def test_all_fixtures_are_valid():
    for name in ("d4", "e237", "e237_blown", "plane4", "d4_pq", "star4"):
        assert validate(fixture(name)).ok, name


def test_maximal_strings():
    strings = maximal_strings(fixture("d4_pq"))
    assert sorted(strings) == [("x1",), ("x2",), ("x3",), ("x4",), ("x5",)]
    assert maximal_strings(chain(-2, -2, -2)) == [("v0", "v1", "v2")]


# blow-ups

def test_blow_up_free_examples():
    g = blow_up_free(chain(-1), "v0")
    assert eulers_of(g) == [-2, -1] and len(g.edges) == 1
    d4 = blow_up_free(fixture("d4"), "f")
    assert d4.graph.euler["f"] == -3 and d4.graph.euler["f_b1"] == -1
    assert d4.graph.neighbors("f_b1") == ("f",)


def test_blow_up_edge_examples():
    g = blow_up_edge(chain(-2, -2), "v0", "v1")
    assert g.euler == {"v0": -3, "v1": -3, "v0_b1": -1}
    assert g.path("v0", "v1") == ["v0", "v0_b1", "v1"]
    with pytest.raises(UnknownEdge):
        blow_up_edge(chain(-2, -2, -2), "v0", "v2")


def test_blow_down_examples():
    g = blow_down(chain(-2, -1), "v1")
    assert dict(g.euler) == {"v0": -1}
    g = blow_down(chain(-3, -1, -3), "v1")
    assert dict(g.euler) == {"v0": -2, "v2": -2} and g.has_edge("v0", "v2")
    blown = fixture("e237_blown")
    down = blow_down(blow_down(blown, "u"), "v")
    assert is_isomorphic(down, fixture("e237"))


def test_blow_down_refusals():
    with pytest.raises(NotBlowDownable):
        blow_down(chain(-2, -2), "v0")
    star = PlumbingGraph({"o": -1, "a": -2, "b": -2, "c": -2},
                         frozenset({("o", "a"), ("o", "b"), ("o", "c")}))
    with pytest.raises(NotBlowDownable):
        blow_down(star, "o")
    with pytest.raises(NotBlowDownable):
        blow_down(DecoratedGraph(chain(-2, -1), {"v1": 3}), "v1")


def test_fresh_ids_do_not_collide():
    g = blow_up_free(blow_up_free(chain(-2), "v0"), "v0")
    assert set(g.vertices) == {"v0", "v0_b1", "v0_b2"}


def test_d4_script_gives_the_two_parameter_graph():
    g = fixture("d4").graph
    g = blow_up_free(g, "f")
    g = blow_up_edge(g, "f", "f_b1")
    g = blow_up_free(g, "f_b2")
    assert eulers_of(g) == sorted([-2, -2, -2, -4, -2, -2, -1])
    assert abs(exactlin.determinant(intersection_matrix(g))) == 4
    assert is_isomorphic(g, fixture("d4_pq").graph)


def test_e237_free_blowups():
    g = blow_up_free(blow_up_free(fixture("e237"), "c"), "c")
    assert is_isomorphic(g, fixture("e237_blown"))


@settings(max_examples=60, deadline=None)
@given(decorated_trees())
def test_blowups_preserve_det_and_definiteness(g):
    det = abs(exactlin.determinant(intersection_matrix(g)))
    for v in g.graph.vertices:
        h = blow_up_free(g, v)
        assert abs(exactlin.determinant(intersection_matrix(h))) == det
        assert is_negative_definite(h)
    for a, b in sorted(g.graph.edges):
        h = blow_up_edge(g, a, b)
        assert abs(exactlin.determinant(intersection_matrix(h))) == det
        assert blow_down(h, "_".join([a, "b1"])) == g


def test_isomorphism_respects_weights():
    a = DecoratedGraph(chain(-2, -3), {"v0": 2})
    b = DecoratedGraph(PlumbingGraph({"x": -3, "y": -2}, frozenset({("x", "y")})), {"y": 2})
    c = DecoratedGraph(PlumbingGraph({"x": -3, "y": -2}, frozenset({("x", "y")})), {"x": 2})
    assert is_isomorphic(a, b)
    assert not is_isomorphic(a, c)
