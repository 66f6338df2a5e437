import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from conftest import CUSP, EX2, EX3, EX4, EX4_SECOND, curve
from singcurve.enriques import (
    EdgeKind,
    EnriquesDiagram,
    Vertex,
    build_diagram,
    canonical_code,
    derived_multiplicities,
    isomorphic,
    subdiagram,
    to_dot,
    to_json,
)
from singcurve.errors import UnknownBranch
from singcurve.fuzz import random_curve
from singcurve.invariants import diagram_of
from singcurve.resolution import resolve

C, SP, SE = EdgeKind.CURVED, EdgeKind.STRAIGHT_PERP, EdgeKind.STRAIGHT_EXT


def kinds(d, bid="b1"):
    return d.chain_kinds(bid)


def mults(d, bid="b1"):
    return tuple(d.vertices[v].multiplicity for v in d.chain(bid))


def test_cusp_diagram():
    d = diagram_of(curve(CUSP))
    assert len(d.vertices) == 4
    assert kinds(d) == (C, SP, C)
    assert mults(d) == (2, 1, 1, 1)


def test_2_5_diagram():
    d = diagram_of(curve(EX2))
    assert kinds(d) == (C, C, SP, C)
    assert mults(d) == (2, 2, 1, 1, 1)


def test_3_5_diagram():
    d = diagram_of(curve(EX3))
    assert kinds(d) == (C, SP, SP, C)
    assert mults(d) == (3, 2, 1, 1, 1)


def test_3_4_has_extension_edge():
    d = diagram_of(curve("x^3-y^4"))
    assert kinds(d) == (C, SP, SE, C)


def test_example4_glued_diagram():
    d = diagram_of(curve(EX4))
    assert len(d.leaves()) == 2
    b1, b2 = d.branch_ids
    c1, c2 = d.chain(b1), d.chain(b2)
    shared = [v for v in c1 if v in c2]
    assert len(shared) == 5 and c1[:5] == c2[:5]
    assert len(c1) == len(c2) == 6
    assert d.kind(c1[-1]) is C and d.kind(c2[-1]) is C


def test_subdiagrams_of_example4():
    d = diagram_of(curve(EX4))
    own = diagram_of(curve(CUSP))
    s1, s2 = subdiagram(d, "b1"), subdiagram(d, "b2")
    assert len(s1.vertices) >= len(own.vertices)
    extra = s1.chain("b1")[len(own.vertices):]
    assert all(s1.vertices[v].multiplicity == 1 for v in extra)
    assert isomorphic(s1, s2) is not None
    with pytest.raises(UnknownBranch):
        subdiagram(d, "zz")


def test_single_branch_subdiagram_is_itself():
    d = diagram_of(curve(EX3))
    assert canonical_code(subdiagram(d, "b1")) == canonical_code(d)
    assert subdiagram(d, "b1").edges == d.edges


def test_codes_and_isomorphism():
    cusp, e2, e3 = (diagram_of(curve(t)) for t in (CUSP, EX2, EX3))
    assert canonical_code(cusp) == "(C(SP(C())))"
    assert canonical_code(cusp) != canonical_code(e2)
    assert isomorphic(cusp, diagram_of(curve(EX4_SECOND))) is not None
    assert isomorphic(cusp, e3) is None
    ident = isomorphic(cusp, cusp)
    assert ident == {v: v for v in cusp.vertices}


def test_example_diagrams_pairwise_distinct():
    ds = [diagram_of(curve(t)) for t in (CUSP, EX2, EX3)]
    for i in range(3):
        for j in range(3):
            assert (isomorphic(ds[i], ds[j]) is not None) == (i == j)


def test_dot_output():
    dot = to_dot(diagram_of(curve(CUSP)))
    assert dot.startswith("digraph")
    assert len(re.findall(r"^\s+n\d+ \[label", dot, re.M)) == 4
    edges = re.findall(r'class="(\w+)"', dot)
    assert edges == ["Curved", "StraightPerp", "Curved"]
    assert to_dot(diagram_of(curve(CUSP))) == dot


def test_dot_single_vertex():
    d = EnriquesDiagram({"O": Vertex("O", 0, 1, (("b1", 1),))}, {}, "O")
    dot = to_dot(d)
    assert dot.count("[label") == 1 and "->" not in dot


def test_dot_example4_two_leaves():
    dot = to_dot(diagram_of(curve(EX4)))
    heads = re.findall(r"-> (n\d+)", dot)
    tails = re.findall(r"(n\d+) ->", dot)
    nodes = re.findall(r"^\s+(n\d+) \[", dot, re.M)
    assert len([n for n in nodes if n not in tails]) == 2
    assert len(heads) == len(nodes) - 1


def test_json_kinds():
    doc = to_json(diagram_of(curve(EX2)))
    assert [e["kind"] for e in doc["edges"]] == ["Curved", "Curved", "StraightPerp", "Curved"]


def relabel(d, rng):
    ids = list(d.vertices)
    new = ids[:]
    rng.shuffle(new)
    m = {a: f"v{new.index(a)}" for a in ids}
    vs = {m[k]: Vertex(m[k], v.level, v.multiplicity, v.branch_mult) for k, v in d.vertices.items()}
    es = {m[c]: (m[p], k) for c, (p, k) in d.edges.items()}
    return EnriquesDiagram(vs, es, m[d.root]), m


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_random_diagram_properties(seed):
    rng = random.Random(seed)
    spec = random_curve(rng)
    c = resolve(spec)
    d = build_diagram(c)
    for bid in d.branch_ids:
        ks = subdiagram(d, bid).chain_kinds(bid)
        assert ks[0] is C and ks[-1] is C
    for child, (parent, k) in d.edges.items():
        if k is SE:
            assert d.kind(parent).straight
    assert derived_multiplicities(d) == d.multiplicities()
    r, m = relabel(d, rng)
    assert canonical_code(r) == canonical_code(d)
    iso = isomorphic(d, r)
    assert iso is not None
    assert all(d.vertices[a].multiplicity == r.vertices[b].multiplicity for a, b in iso.items())
    # flipping any single edge kind changes the code
    for child, (parent, k) in d.edges.items():
        other = C if k is not C else SP
        edges = dict(d.edges)
        edges[child] = (parent, other)
        assert canonical_code(EnriquesDiagram(d.vertices, edges, d.root)) != canonical_code(d)
