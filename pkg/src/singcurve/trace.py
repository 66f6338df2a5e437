"""Combinatorial replay of the induction turning one curve into an equisingular one.

Each step takes the matched branch pair whose chains part deepest, looks at
the tangent positions of both curves at their last common point ``P`` and
moves branches of the second curve so the pair shares one more point.  A move
is a linear change of the local coordinates at ``P`` that fixes the
exceptional directions, applied to the moved branches only and pushed back to
the origin by inverting the blow-ups.
"""

from __future__ import annotations

import json
from functools import lru_cache
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .curves import CurveSpec, save_curve
from .errors import InternalError, NotApplicable, NotEquisingular, PrecisionExhausted
from .invariants import equisingular_by_branches, equisingular_by_diagram
from .numerics import PowerSeries, format_rational
from .puiseux import BranchParam
from .resolution import (
    INF,
    BranchTransformState,
    Cluster,
    Position,
    blow_down,
    format_position,
    point_name,
    position_key,
    resolve,
    root_state,
    transform_branch,
)

Matrix = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class Move:
    branch: str
    source: Position
    target: Position
    matrix: Matrix

    def to_json(self) -> dict:
        return {
            "branch": self.branch,
            "from": format_position(self.source),
            "to": format_position(self.target),
            "map": [[format_rational(c) for c in row] for row in self.matrix],
        }


@dataclass(frozen=True)
class TraceStep:
    pair: Tuple[int, int]
    path: Tuple[Position, ...]
    lines: Tuple[Position, ...]
    lines_tilde: Tuple[Position, ...]
    case: str
    fresh: Optional[Position]
    surgery: Tuple[Move, ...]
    n_before: int
    n_after: int

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "path": [format_position(p) for p in self.path],
            "point": point_name(self.path),
            "lines": [format_position(p) for p in self.lines],
            "lines_tilde": [format_position(p) for p in self.lines_tilde],
            "case": self.case,
            "fresh_line": None if self.fresh is None else format_position(self.fresh),
            "substitutions": [m.to_json() for m in self.surgery],
            "n_before": self.n_before,
            "n_after": self.n_after,
        }


@dataclass
class Trace:
    curve: CurveSpec
    curve_tilde: CurveSpec
    sigma: Tuple[int, ...]
    steps: List[TraceStep] = field(default_factory=list)
    final: Optional[CurveSpec] = None
    chains_equal: bool = False

    @property
    def n_values(self) -> List[int]:
        if not self.steps:
            return [0]
        return [self.steps[0].n_before] + [s.n_after for s in self.steps]

    def to_json(self) -> dict:
        return {
            "curve": json.loads(save_curve(self.curve)),
            "curve_tilde": json.loads(save_curve(self.curve_tilde)),
            "sigma": list(self.sigma),
            "steps": [s.to_json() for s in self.steps],
            "final": {
                "n": 0 if self.chains_equal else None,
                "chains_equal": self.chains_equal,
                "curve": json.loads(save_curve(self.final)) if self.final is not None else None,
            },
        }


def _chains(c: Cluster, bid: str) -> List[Tuple[Position, ...]]:
    return [p.path for p in c.chain(bid)]


def _pair_counts(c1: Cluster, c2: Cluster, ids1, ids2, sigma) -> List[Tuple[int, int]]:
    """Per matched pair: (non-common count, depth of the last common point)."""
    out = []
    for i, j in enumerate(sigma):
        a, b = _chains(c1, ids1[i]), _chains(c2, ids2[j])
        common = set(a) & set(b)
        depth = max(len(p) for p in common)
        out.append((len(a) + len(b) - 2 * len(common), depth))
    return out


def _matching(spec1: CurveSpec, spec2: CurveSpec, sigma) -> Tuple[int, ...]:
    if sigma is None:
        sigma = equisingular_by_branches(spec1, spec2)
    if sigma is None:
        raise NotEquisingular("the curves are not equisingular")
    return tuple(sigma)


def noncommon_count(spec1: CurveSpec, spec2: CurveSpec, sigma: Optional[Sequence[int]] = None,
                    truncation: Optional[int] = None) -> int:
    sigma = _matching(spec1, spec2, sigma)
    c1, c2 = resolve(spec1, truncation), resolve(spec2, truncation)
    ids1 = [b.id for b in spec1.branches]
    ids2 = [b.id for b in spec2.branches]
    return sum(n for n, _ in _pair_counts(c1, c2, ids1, ids2, sigma))


def _line_map(source: Position, target: Position, exc_u: bool, exc_v: bool) -> Matrix:
    """Linear map of ``(u, v)`` sending slope ``source`` to ``target``.

    Slopes are ``v/u``; the axis ``{u=0}`` (slope inf) is kept when it is
    exceptional and likewise ``{v=0}`` (slope 0).
    """
    one, zero = Fraction(1), Fraction(0)
    if exc_u and exc_v:
        return (one, zero), (zero, target / source)
    if exc_u:
        return (one, zero), (target - source, one)
    if exc_v:
        inv = lambda p: zero if p is INF else 1 / p
        return (one, inv(target) - inv(source)), (zero, one)
    if source is not INF and target is not INF:
        return (one, zero), (target - source, one)
    if source is INF:
        return (zero, one), (one, target)
    return (-source, one), (one, zero)


def _apply(m: Matrix, u: PowerSeries, v: PowerSeries) -> Tuple[PowerSeries, PowerSeries]:
    (a, b), (c, d) = m
    return u.scale(a) + v.scale(b), u.scale(c) + v.scale(d)


def _state_at(b: BranchParam, path: Sequence[Position], prec: int) -> BranchTransformState:
    st = root_state(b)
    for pos in path:
        got, st = transform_branch(st, prec)
        if got != pos:
            raise InternalError(f"branch {b.id} left the chain at {point_name(path)}")
    return st


def move_branch(b: BranchParam, path: Tuple[Position, ...], m: Matrix, prec: int) -> BranchParam:
    """Apply ``m`` to the branch's local coordinates at ``path`` and blow down."""
    recipe = lru_cache(maxsize=None)(lambda p: move_branch(b, path, m, p))
    work = prec
    for _ in range(12):
        try:
            st = _state_at(b.at_truncation(work), path, work)
            x, y = blow_down(path, *_apply(m, st.u, st.v))
            out = BranchParam(x, y, exact=x.is_exact and y.is_exact, id=b.id,
                              recipe=recipe)
            if out.exact:
                return out.validate()
            if out.truncation_order >= prec:
                # keep only what was asked for; the recipe recomputes more on demand
                return replace(out, x=x.truncate(prec), y=y.truncate(prec)).validate()
            # the loss along the path does not grow with the working precision,
            # so pay it back additively; doubling compounds over nested moves
            work += prec - out.truncation_order
        except PrecisionExhausted:
            work *= 2
    raise PrecisionExhausted(f"could not move branch {b.id} to truncation {prec}")


def _lines_at(c: Cluster, path: Tuple[Position, ...]) -> Dict[str, Position]:
    """Child position of every branch through the point ``path``."""
    pid = point_name(path)
    out = {}
    for q in c.points.values():
        if q.parent == pid:
            for bid in q.branches_through:
                out[bid] = q.position
    return out


def trace_step(spec1: CurveSpec, spec2: CurveSpec, sigma: Optional[Sequence[int]] = None,
               truncation: Optional[int] = None) -> Tuple[TraceStep, CurveSpec]:
    sigma = _matching(spec1, spec2, sigma)
    c1, c2 = resolve(spec1, truncation), resolve(spec2, truncation)
    ids1 = [b.id for b in spec1.branches]
    ids2 = [b.id for b in spec2.branches]
    counts = _pair_counts(c1, c2, ids1, ids2, sigma)
    n_before = sum(n for n, _ in counts)
    if n_before == 0:
        raise NotApplicable("no non-common points left")
    i = max((k for k in range(len(counts)) if counts[k][0]), key=lambda k: (counts[k][1], -k))
    j = sigma[i]
    path = next(p for p in _chains(c1, ids1[i]) if len(p) == counts[i][1])
    lines = _lines_at(c1, path)
    lines_t = _lines_at(c2, path)
    L1, Lt1 = lines[ids1[i]], lines_t[ids2[j]]
    if L1 == Lt1:
        raise InternalError("last common point has a common child")
    st = c2.state(point_name(path), ids2[j])
    exc_u, exc_v = st.comp_u is not None, st.comp_v is not None
    if (exc_u and L1 is INF) or (exc_v and L1 == 0) or (exc_u and Lt1 is INF) or (exc_v and Lt1 == 0):
        raise NotEquisingular("matched branches leave along different exceptional directions")
    prec = max(b.truncation_order for b in spec2.branches)
    moves: List[Move] = []
    targets: Dict[str, Tuple[Position, Position]] = {}
    fresh = None
    case = "a"
    if L1 in set(lines_t.values()):
        case = "b"
        taken = set(lines.values()) | set(lines_t.values())
        fresh = Fraction(0)
        while fresh in taken or (exc_v and fresh == 0):
            fresh += 1
        for bid, pos in lines_t.items():
            if pos == L1:
                targets[bid] = (L1, fresh)
    for bid, pos in lines_t.items():
        if pos == Lt1:
            targets[bid] = (Lt1, L1)
    new_branches = []
    for b in spec2.branches:
        if b.id in targets:
            src, dst = targets[b.id]
            m = _line_map(src, dst, exc_u, exc_v)
            moves.append(Move(b.id, src, dst, m))
            b = move_branch(b, path, m, prec)
        new_branches.append(b)
    new_spec = CurveSpec(tuple(new_branches), None, spec2.truncation)
    n_after = noncommon_count(spec1, new_spec, sigma, truncation)
    if n_after >= n_before:
        raise InternalError(f"surgery did not decrease n ({n_before} -> {n_after})")
    step = TraceStep((i, j), path, tuple(sorted(set(lines.values()), key=position_key)),
                     tuple(sorted(set(lines_t.values()), key=position_key)), case, fresh,
                     tuple(moves), n_before, n_after)
    return step, new_spec


def chains_coincide(spec1: CurveSpec, spec2: CurveSpec, sigma: Sequence[int], truncation: Optional[int] = None) -> bool:
    c1, c2 = resolve(spec1, truncation), resolve(spec2, truncation)
    return all(_chains(c1, spec1.branches[i].id) == _chains(c2, spec2.branches[j].id)
               for i, j in enumerate(sigma))


def build_trace(spec1: CurveSpec, spec2: CurveSpec, truncation: Optional[int] = None) -> Trace:
    """Steps until no non-common points remain, checking equisingularity after each."""
    by_diagram, _ = equisingular_by_diagram(spec1, spec2, truncation)
    sigma = equisingular_by_branches(spec1, spec2, truncation)
    if (sigma is not None) != by_diagram:
        raise InternalError("equisingularity deciders disagree")
    if sigma is None:
        raise NotEquisingular("the curves are not equisingular")
    trace = Trace(spec1, spec2, sigma)
    current = spec2
    n = noncommon_count(spec1, spec2, sigma, truncation)
    limit = n
    while n:
        if len(trace.steps) >= limit:
            raise InternalError("trace longer than the initial counter")
        step, current = trace_step(spec1, current, sigma, truncation)
        if equisingular_by_branches(current, spec2, truncation) is None or \
                not equisingular_by_diagram(current, spec2, truncation)[0]:
            raise InternalError(f"step {len(trace.steps) + 1} broke equisingularity")
        trace.steps.append(step)
        n = step.n_after
    trace.final = current
    trace.chains_equal = chains_coincide(spec1, current, sigma, truncation)
    if not trace.chains_equal:
        raise InternalError("counter reached zero but chains differ")
    return trace
