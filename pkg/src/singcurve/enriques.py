"""Enriques diagrams: the cluster tree with edges drawn curved or straight."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Set, Tuple

from .errors import InconsistentTangency, InternalError, UnknownBranch
from .resolution import Cluster, tangency_at


class EdgeKind(enum.Enum):
    CURVED = "Curved"
    STRAIGHT_PERP = "StraightPerp"
    STRAIGHT_EXT = "StraightExt"

    @property
    def short(self) -> str:
        return _SHORT[self]

    @property
    def straight(self) -> bool:
        return self is not EdgeKind.CURVED


_SHORT = {EdgeKind.CURVED: "C", EdgeKind.STRAIGHT_PERP: "SP", EdgeKind.STRAIGHT_EXT: "SE"}
_BY_TANGENCY = {
    "none": EdgeKind.CURVED,
    "last_pasted": EdgeKind.STRAIGHT_PERP,
    "earlier_pasted": EdgeKind.STRAIGHT_EXT,
}


@dataclass(frozen=True)
class Vertex:
    id: str
    level: int
    multiplicity: int
    branch_mult: Tuple[Tuple[str, int], ...]

    @property
    def branches(self) -> FrozenSet[str]:
        return frozenset(b for b, _ in self.branch_mult)


@dataclass(frozen=True)
class EnriquesDiagram:
    vertices: Mapping[str, Vertex]
    # child id -> (parent id, kind)
    edges: Mapping[str, Tuple[str, EdgeKind]]
    root: str

    def children(self, vid: str) -> List[str]:
        return sorted(c for c, (p, _) in self.edges.items() if p == vid)

    def parent(self, vid: str) -> Optional[str]:
        e = self.edges.get(vid)
        return e[0] if e else None

    def kind(self, child: str) -> EdgeKind:
        return self.edges[child][1]

    def edge_list(self) -> List[Tuple[str, str, EdgeKind]]:
        return sorted(((p, c, k) for c, (p, k) in self.edges.items()),
                      key=lambda e: (self.vertices[e[1]].level, e[1]))

    @property
    def branch_ids(self) -> Tuple[str, ...]:
        out: Set[str] = set()
        for v in self.vertices.values():
            out |= v.branches
        return tuple(sorted(out))

    def chain(self, bid: str) -> List[str]:
        vs = [v for v in self.vertices.values() if bid in v.branches]
        if not vs:
            raise UnknownBranch(f"no branch {bid!r} in diagram")
        return [v.id for v in sorted(vs, key=lambda v: v.level)]

    def chain_kinds(self, bid: str) -> Tuple[EdgeKind, ...]:
        return tuple(self.kind(v) for v in self.chain(bid)[1:])

    def leaves(self) -> List[str]:
        parents = {p for p, _ in self.edges.values()}
        return sorted(v for v in self.vertices if v not in parents)

    def multiplicities(self) -> Dict[str, int]:
        return {v.id: v.multiplicity for v in self.vertices.values()}

    def validate(self) -> "EnriquesDiagram":
        for c, (p, k) in self.edges.items():
            if k is EdgeKind.STRAIGHT_EXT:
                prev = self.edges.get(p)
                if prev is None or not prev[1].straight:
                    raise InternalError(f"StraightExt edge into {c} does not extend a straight edge")
        return self


def build_diagram(c: Cluster) -> EnriquesDiagram:
    vertices = {}
    for p in c.points.values():
        bm = tuple(sorted((b, c.mult[(p.id, b)]) for b in p.branches_through))
        vertices[p.id] = Vertex(p.id, p.level, sum(m for _, m in bm), bm)
    edges = {}
    for q in c.points.values():
        if q.parent is None:
            continue
        kinds = {tangency_at(c, q.parent, b) for b in sorted(q.branches_through)}
        if len(kinds) != 1:
            raise InconsistentTangency(f"branches through {q.id} disagree on tangency at {q.parent}: {sorted(kinds)}")
        edges[q.id] = (q.parent, _BY_TANGENCY[kinds.pop()])
    return EnriquesDiagram(vertices, edges, c.root.id).validate()


def subdiagram(d: EnriquesDiagram, bid: str) -> EnriquesDiagram:
    """Restriction to the vertices of one branch, with that branch's multiplicities."""
    ids = d.chain(bid)
    vertices = {}
    for vid in ids:
        v = d.vertices[vid]
        m = dict(v.branch_mult)[bid]
        vertices[vid] = Vertex(vid, v.level, m, ((bid, m),))
    edges = {vid: d.edges[vid] for vid in ids[1:]}
    return EnriquesDiagram(vertices, edges, d.root)


def _codes(d: EnriquesDiagram) -> Dict[str, str]:
    kids: Dict[str, List[str]] = {v: [] for v in d.vertices}
    for c, (p, _) in d.edges.items():
        kids[p].append(c)
    codes: Dict[str, str] = {}
    for vid in sorted(d.vertices, key=lambda v: -d.vertices[v].level):
        parts = sorted(d.kind(ch).short + codes[ch] for ch in kids[vid])
        codes[vid] = "(" + ",".join(parts) + ")"
    return codes


def canonical_code(d: EnriquesDiagram) -> str:
    """Relabeling-invariant code: each vertex is the sorted multiset of (kind, child code)."""
    return _codes(d)[d.root]


def isomorphic(d1: EnriquesDiagram, d2: EnriquesDiagram) -> Optional[Dict[str, str]]:
    """Root- and kind-preserving tree isomorphism ``d1 -> d2``, or ``None``."""
    c1, c2 = _codes(d1), _codes(d2)
    if c1[d1.root] != c2[d2.root]:
        return None
    mapping = {d1.root: d2.root}
    todo = [d1.root]
    while todo:
        a = todo.pop()
        b = mapping[a]
        ka = sorted(d1.children(a), key=lambda ch: d1.kind(ch).short + c1[ch])
        kb = sorted(d2.children(b), key=lambda ch: d2.kind(ch).short + c2[ch])
        for x, y in zip(ka, kb):
            mapping[x] = y
            todo.append(x)
    _verify(d1, d2, mapping)
    return mapping


def _verify(d1, d2, mapping):
    if len(mapping) != len(d1.vertices) or len(set(mapping.values())) != len(d2.vertices):
        raise InternalError("isomorphism is not a bijection")
    for c, (p, k) in d1.edges.items():
        if d2.edges.get(mapping[c]) != (mapping[p], k):
            raise InternalError(f"isomorphism breaks edge {p}->{c}")


def proximities(d: EnriquesDiagram) -> Dict[str, Set[str]]:
    """Points each vertex is proximate to, read off the edge kinds."""
    prox: Dict[str, Set[str]] = {d.root: set()}
    extra: Dict[str, Optional[str]] = {d.root: None}
    for vid in sorted(d.vertices, key=lambda v: d.vertices[v].level):
        if vid == d.root:
            continue
        p, k = d.edges[vid]
        other = None
        if k is EdgeKind.STRAIGHT_PERP:
            other = d.parent(p)
        elif k is EdgeKind.STRAIGHT_EXT:
            other = extra[p]
        extra[vid] = other
        prox[vid] = {p} | ({other} if other is not None else set())
    return prox


def derived_multiplicities(d: EnriquesDiagram) -> Dict[str, int]:
    """Multiplicities forced by the diagram: leaves 1, else sum over proximate points."""
    prox = proximities(d)
    near: Dict[str, List[str]] = {v: [] for v in d.vertices}
    for q, ps in prox.items():
        for p in ps:
            near[p].append(q)
    mu: Dict[str, int] = {}
    parents = {p for p, _ in d.edges.values()}
    for vid in sorted(d.vertices, key=lambda v: -d.vertices[v].level):
        mu[vid] = 1 if vid not in parents else sum(mu[q] for q in near[vid])
    return mu


_STYLE = {
    EdgeKind.CURVED: 'style=dashed, label="C"',
    EdgeKind.STRAIGHT_PERP: 'style=solid, label="SP"',
    EdgeKind.STRAIGHT_EXT: 'style=bold, label="SE"',
}


def to_dot(d: EnriquesDiagram, name: str = "enriques") -> str:
    order = sorted(d.vertices.values(), key=lambda v: (v.level, v.id))
    ids = {v.id: f"n{i}" for i, v in enumerate(order)}
    lines = [f"digraph {name} {{"]
    for v in order:
        lines.append(f'  {ids[v.id]} [label="{v.multiplicity}", tooltip="{v.id}"];')
    for p, c, k in d.edge_list():
        lines.append(f'  {ids[p]} -> {ids[c]} [class="{k.value}", {_STYLE[k]}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(d: EnriquesDiagram) -> dict:
    return {
        "root": d.root,
        "vertices": [
            {"id": v.id, "level": v.level, "multiplicity": v.multiplicity,
             "branches": {b: m for b, m in v.branch_mult}}
            for v in sorted(d.vertices.values(), key=lambda v: (v.level, v.id))
        ],
        "edges": [{"from": p, "to": c, "kind": k.value} for p, c, k in d.edge_list()],
        "code": canonical_code(d),
    }
