"""Blow-up resolution simulated on branch parametrizations.

At every infinitely near point each branch carries local coordinates
``(u, v)`` as series in its parameter together with the creation level of the
exceptional component lying on ``{u = 0}`` and on ``{v = 0}`` (``None`` when
that axis is not exceptional).  Blowing up uses the chart ``(u, v/u - c)``
when ``ord u <= ord v`` and ``(u/v, v)`` otherwise; the child position is
``c`` or :data:`INF`.  Points are named by the list of positions from the
root, so two branches reach the same point exactly when their position
chains agree.
"""

from __future__ import annotations

import os
from collections import OrderedDict
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction
from math import inf
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import CommonBranch, InternalError, PrecisionExhausted
from .numerics import INDETERMINATE, PowerSeries, format_rational

DEFAULT_MAX_TRUNCATION = 1024


class _Infinity:
    """The point at infinity of a projective line of directions."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Position = Union[Fraction, _Infinity]


def position_key(p: Position):
    return (1, 0) if p is INF else (0, p)


def format_position(p: Position) -> str:
    return "inf" if p is INF else format_rational(p)


def parse_position(text: str) -> Position:
    return INF if text == "inf" else Fraction(text)


def point_name(path: Sequence[Position]) -> str:
    # non-integer positions are parenthesized so "/" in p/q cannot be read as a path step
    parts = ["O"]
    for p in path:
        s = format_position(p)
        parts.append(f"({s})" if "/" in s else s)
    return "/".join(parts)


@dataclass(frozen=True)
class InfinitelyNearPoint:
    id: str
    path: Tuple[Position, ...]
    parent: Optional[str]
    level: int
    position: Optional[Position]
    components_through: FrozenSet[int]
    branches_through: FrozenSet[str]

    @property
    def created_component(self) -> int:
        """Creation level of the component obtained by blowing up this point."""
        return self.level + 1


@dataclass(frozen=True)
class BranchTransformState:
    branch: str
    u: PowerSeries
    v: PowerSeries
    comp_u: Optional[int] = None
    comp_v: Optional[int] = None
    level: int = 0

    @property
    def exact(self) -> bool:
        return self.u.is_exact and self.v.is_exact

    def orders(self) -> Tuple[Union[int, float], Union[int, float]]:
        """Orders of ``u`` and ``v``, certified up to their comparison.

        An undetermined order is replaced by its lower bound, which is only
        allowed when that bound exceeds the other (determinate) order.
        """
        ou, ov = self.u.order(), self.v.order()
        if ou is INDETERMINATE and ov is INDETERMINATE:
            raise PrecisionExhausted(f"branch {self.branch}: both coordinates vanish to known precision")
        if ou is INDETERMINATE:
            if self.u.prec <= ov:
                raise PrecisionExhausted(f"branch {self.branch}: order comparison undetermined")
            ou = self.u.prec
        if ov is INDETERMINATE:
            if self.v.prec <= ou:
                raise PrecisionExhausted(f"branch {self.branch}: order comparison undetermined")
            ov = self.v.prec
        return ou, ov

    def multiplicity(self) -> int:
        return int(min(self.orders()))

    def components(self) -> FrozenSet[int]:
        return frozenset(c for c in (self.comp_u, self.comp_v) if c is not None)

    def tangent_component(self) -> Optional[int]:
        """Exceptional component the transform is tangent to, if any."""
        ou, ov = self.orders()
        if ou < ov:
            return self.comp_v
        if ov < ou:
            return self.comp_u
        return None


def _quotient(num: PowerSeries, den: PowerSeries, prec: Optional[int]) -> PowerSeries:
    if num.is_exact and den.is_exact and not den.is_monomial() and num.order() != inf:
        if prec is None:
            raise PrecisionExhausted("exact quotient needs a working truncation")
        return num.div(den, prec)
    return num.div(den)


def transform_branch(state: BranchTransformState, prec: Optional[int] = None) -> Tuple[Position, BranchTransformState]:
    """Blow up the current point once along the branch.

    ``prec`` bounds the quotient when it is an infinite series of exact data.
    """
    ou, ov = state.orders()
    level = state.level + 1
    if ou <= ov:
        c = Fraction(0)
        if ou == ov:
            c = state.v.coefficient(ov) / state.u.coefficient(ou)
        q = _quotient(state.v, state.u, prec)
        new = BranchTransformState(state.branch, state.u, q - PowerSeries({0: c}), level,
                                   state.comp_v if c == 0 else None, level)
        return c, new
    q = _quotient(state.u, state.v, prec)
    return INF, BranchTransformState(state.branch, q, state.v, state.comp_u, level, level)


def blow_down(path: Sequence[Position], u: PowerSeries, v: PowerSeries) -> Tuple[PowerSeries, PowerSeries]:
    """Invert the chart substitutions along ``path``: local coords to ``(x, y)``."""
    for c in reversed(path):
        if c is INF:
            u = u * v
        else:
            v = u * (v + PowerSeries({0: c}) if c else v)
    return u, v


def root_state(branch) -> BranchTransformState:
    return BranchTransformState(branch.id, branch.x, branch.y, None, None, 0)


def _is_terminal(state: BranchTransformState, alone: bool) -> bool:
    if not alone or state.level == 0:
        return False
    comps = state.components()
    return len(comps) == 1 and state.multiplicity() == 1 and state.tangent_component() is None


@dataclass
class Cluster:
    """All infinitely near points of a curve's resolution with multiplicities."""

    points: Dict[str, InfinitelyNearPoint]
    mult: Dict[Tuple[str, str], int]
    states: Dict[Tuple[str, str], BranchTransformState] = field(repr=False)
    branch_ids: Tuple[str, ...]
    truncation: Optional[int] = None
    exact: bool = True

    @property
    def root(self) -> InfinitelyNearPoint:
        return self.points[point_name(())]

    def point(self, pid: str) -> InfinitelyNearPoint:
        return self.points[pid]

    def total_multiplicity(self, pid: str) -> int:
        return sum(self.mult.get((pid, b), 0) for b in self.points[pid].branches_through)

    def branch_multiplicity(self, pid: str, bid: str) -> int:
        return self.mult.get((pid, bid), 0)

    def children(self, pid: str) -> List[InfinitelyNearPoint]:
        kids = [p for p in self.points.values() if p.parent == pid]
        return sorted(kids, key=lambda p: position_key(p.position))

    def chain(self, bid: str) -> List[InfinitelyNearPoint]:
        pts = [p for p in self.points.values() if bid in p.branches_through]
        return sorted(pts, key=lambda p: p.level)

    def maximal_point(self, bid: str) -> InfinitelyNearPoint:
        return self.chain(bid)[-1]

    def state(self, pid: str, bid: str) -> BranchTransformState:
        return self.states[(pid, bid)]

    def proximate_points(self, pid: str, bid: Optional[str] = None) -> List[InfinitelyNearPoint]:
        """Points lying on the strict transform of the component created at ``pid``."""
        comp = self.points[pid].created_component
        out = [q for q in self.points.values() if comp in q.components_through]
        if bid is not None:
            out = [q for q in out if bid in q.branches_through]
        return sorted(out, key=lambda p: (p.level, p.id))

    def signature(self):
        """Comparable summary used for the stability certificate."""
        pts = tuple(sorted((p.id, p.parent, p.level, tuple(sorted(p.components_through)),
                            tuple(sorted(p.branches_through))) for p in self.points.values()))
        return pts, tuple(sorted(self.mult.items()))

    def same_as(self, other: "Cluster") -> bool:
        return self.signature() == other.signature()

    def proximity_violations(self) -> List[Tuple[str, str, int, int]]:
        """``(point, branch, mu, sum)`` for every failure of the proximity equality."""
        bad = []
        for bid in self.branch_ids:
            chain = self.chain(bid)
            for p in chain[:-1]:
                mu = self.mult[(p.id, bid)]
                s = sum(self.mult[(q.id, bid)] for q in self.proximate_points(p.id, bid))
                if mu != s:
                    bad.append((p.id, bid, mu, s))
        return bad

    def multiplicity_sequence(self, bid: str) -> Tuple[int, ...]:
        return tuple(self.mult[(p.id, bid)] for p in self.chain(bid))


def classify_point(c: Cluster, pid: str) -> str:
    return "satellite" if len(c.points[pid].components_through) == 2 else "free"


def tangency_at(c: Cluster, pid: str, bid: str) -> str:
    """``none``, ``last_pasted`` or ``earlier_pasted`` for branch ``bid`` at ``pid``."""
    comp = c.state(pid, bid).tangent_component()
    if comp is None:
        return "none"
    through = c.points[pid].components_through
    if comp not in through:
        raise InternalError(f"component {comp} not recorded through {pid}")
    return "last_pasted" if comp == max(through) else "earlier_pasted"


def _shared_bound(branches) -> Dict[Tuple[str, str], int]:
    # two distinct polynomial branches meet at most deg*deg times (Bezout)
    degs = {b.id: max(b.x.degree(), b.y.degree()) for b in branches if b.exact}
    ids = sorted(degs)
    return {(a, b): degs[a] * degs[b] for i, a in enumerate(ids) for b in ids[i + 1:]}


def resolve_at(branches, truncation: int) -> Cluster:
    """One resolution run with every branch known to ``truncation``."""
    ids = [b.id for b in branches]
    if len(set(ids)) != len(ids) or None in ids:
        raise ValueError("branches need distinct ids")
    bound = _shared_bound(branches)
    points: Dict[str, InfinitelyNearPoint] = {}
    mult: Dict[Tuple[str, str], int] = {}
    states: Dict[Tuple[str, str], BranchTransformState] = {}
    exact = True
    active = {(): [root_state(b) for b in branches]}
    parents: Dict[Tuple, Tuple[Optional[str], FrozenSet[int]]] = {(): (None, frozenset())}
    while active:
        nxt: Dict[Tuple, List[BranchTransformState]] = {}
        for path in sorted(active, key=lambda p: [position_key(x) for x in p]):
            group = active[path]
            pid = point_name(path)
            parent, comps = parents[path]
            points[pid] = InfinitelyNearPoint(pid, path, parent, len(path), path[-1] if path else None,
                                              comps, frozenset(s.branch for s in group))
            for s in group:
                states[(pid, s.branch)] = s
                mult[(pid, s.branch)] = s.multiplicity()
                exact = exact and s.exact
            if len(group) == 1 and _is_terminal(group[0], True):
                continue
            if len(group) > 1:
                _check_distinct(group, len(path), bound)
            for s in group:
                pos, ns = transform_branch(s, truncation)
                child = path + (pos,)
                nxt.setdefault(child, []).append(ns)
                cs = ns.components()
                if child in parents and parents[child][1] != cs:
                    raise InternalError(f"inconsistent components at {point_name(child)}")
                parents[child] = (pid, cs)
        active = nxt
    return Cluster(points, mult, states, tuple(ids), truncation, exact)


def _check_distinct(group, level, bound):
    for i, a in enumerate(group):
        for b in group[i + 1:]:
            if a.exact and b.exact and a.u == b.u and a.v == b.v:
                raise CommonBranch(f"branches {a.branch} and {b.branch} coincide")
            key = tuple(sorted((a.branch, b.branch)))
            if key in bound and level > bound[key]:
                raise CommonBranch(f"branches {a.branch} and {b.branch} share more than {bound[key]} points")


_CAP_OVERRIDE: ContextVar[Optional[int]] = ContextVar("singcurve_cap", default=None)


@contextmanager
def truncation_cap(value: Optional[int]):
    """Scope in which ``value`` replaces the environment's truncation cap."""
    token = _CAP_OVERRIDE.set(value)
    try:
        yield
    finally:
        _CAP_OVERRIDE.reset(token)


def max_truncation_default() -> int:
    """Cap from :func:`truncation_cap`, else ``$SINGCURVE_MAX_TRUNCATION``, else 1024."""
    if _CAP_OVERRIDE.get() is not None:
        return _CAP_OVERRIDE.get()
    env = os.environ.get("SINGCURVE_MAX_TRUNCATION")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"SINGCURVE_MAX_TRUNCATION must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError("SINGCURVE_MAX_TRUNCATION must be positive")
        return value
    return DEFAULT_MAX_TRUNCATION


def _branches_at(spec, prec: int):
    return [spec.branch_at(i, prec) for i in range(len(spec.branches))]


# Recent results keyed by the identity of the (immutable) curve object; the
# object itself is kept alive in the value so its id cannot be reused.
_CACHE: "OrderedDict[tuple, Tuple[object, Cluster]]" = OrderedDict()
_CACHE_SIZE = 128


def resolve(spec, truncation: Optional[int] = None, max_truncation: Optional[int] = None) -> Cluster:
    """Resolve a curve, doubling the truncation until the result is certified.

    Runs that never left exact arithmetic are accepted directly; otherwise
    the cluster at ``T`` must coincide with the cluster at ``2T``.
    """
    T = truncation or getattr(spec, "truncation", None) or 32
    cap = max_truncation or max_truncation_default()
    key = (id(spec), T, cap)
    hit = _CACHE.get(key)
    if hit is not None and hit[0] is spec:
        _CACHE.move_to_end(key)
        return hit[1]
    out = _resolve(spec, T, cap)
    _CACHE[key] = (spec, out)
    if len(_CACHE) > _CACHE_SIZE:
        _CACHE.popitem(last=False)
    return out


def _resolve(spec, T: int, cap: int) -> Cluster:
    if T > cap:
        raise PrecisionExhausted(f"truncation {T} exceeds the cap {cap}")
    while True:
        try:
            first = resolve_at(_branches_at(spec, T), T)
            if first.exact:
                return first
            if 2 * T > cap:
                raise PrecisionExhausted(f"certifying truncation {T} needs {2 * T}, above the cap {cap}")
            second = resolve_at(_branches_at(spec, 2 * T), 2 * T)
            if first.same_as(second):
                return first
        except PrecisionExhausted as exc:
            last = exc
        else:
            last = PrecisionExhausted(f"cluster changed between truncation {T} and {2 * T}")
        if 2 * T > cap:
            raise PrecisionExhausted(f"{last} (truncation cap {cap} reached)")
        T *= 2


def resolve_branches(branches: Iterable, truncation: int = 32, max_truncation: Optional[int] = None) -> Cluster:
    from .curves import curve_from_branches

    return resolve(curve_from_branches(list(branches), truncation), truncation, max_truncation)
