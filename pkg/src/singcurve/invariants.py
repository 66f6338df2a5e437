"""Classical invariants, intersection numbers and the two equisingularity deciders."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, inf
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

from .curves import CurveSpec, curve_from_branches
from .enriques import EnriquesDiagram, build_diagram, canonical_code, isomorphic, subdiagram
from .errors import CommonBranch, InternalError, PrecisionExhausted
from .numerics import (
    INDETERMINATE,
    BivariatePolynomial,
    PowerSeries,
    common_factor_through_origin,
    poly_eval_on_param,
)
from .puiseux import BranchParam, normalize_branch
from .resolution import Cluster, max_truncation_default, resolve

T = TypeVar("T")


@dataclass(frozen=True)
class PuiseuxCharacteristic:
    beta0: int
    betas: Tuple[int, ...]

    def __str__(self):
        return f"({self.beta0}; {', '.join(map(str, self.betas)) or '-'})"

    def gcds(self) -> Tuple[int, ...]:
        e = [self.beta0]
        for b in self.betas:
            e.append(gcd(e[-1], b))
        return tuple(e)


def _with_precision(b: BranchParam, fn: Callable[[BranchParam, int], T], start: int = 32,
                    cap: Optional[int] = None) -> T:
    cap = cap or max_truncation_default()
    prec = max(start, 2)
    while True:
        try:
            return fn(b.at_truncation(prec), prec)
        except PrecisionExhausted:
            if 2 * prec > cap or (not b.exact and b.recipe is None):
                raise
            prec *= 2


_normalized = normalize_branch


def _characteristic(b: BranchParam, prec: int) -> PuiseuxCharacteristic:
    m = b.multiplicity()
    swap = b.x.order() != m
    _, _, Y = _normalized(b, prec, swap)
    e, betas = m, []
    for k, _ in Y.terms():
        if e == 1:
            break
        if k % e:
            betas.append(k)
            e = gcd(e, k)
    if e != 1:
        raise PrecisionExhausted(f"characteristic exponents need more than {Y.prec} terms")
    return PuiseuxCharacteristic(m, tuple(betas))


def characteristic_exponents(b: BranchParam, truncation: int = 32) -> PuiseuxCharacteristic:
    return _with_precision(b, _characteristic, truncation)


def euclid_multiplicities(ch: PuiseuxCharacteristic) -> Tuple[int, ...]:
    """Multiplicities at the blow-up centres from the characteristic, by Euclid."""
    if not ch.betas:
        return (1,)
    seq: List[int] = []
    prev_beta, e = 0, ch.beta0
    for beta in ch.betas:
        a, b = beta - prev_beta, e
        while b:
            q, r = divmod(a, b)
            seq.extend([b] * q)
            a, b = b, r
        prev_beta, e = beta, a
    return tuple(seq)


def multiplicity_sequence(b: BranchParam, truncation: int = 32) -> Tuple[int, ...]:
    """Multiplicities at the centres of the blow-ups resolving the branch.

    The terminal point of the chain is not a centre and is left out.
    """
    c = resolve(curve_from_branches([b.with_id(b.id or "b1")], truncation))
    return c.multiplicity_sequence(b.id or "b1")[:-1]


def semigroup_generators(ch: PuiseuxCharacteristic) -> Tuple[int, ...]:
    if not ch.betas:
        return (1,)
    gens = [ch.beta0, ch.betas[0]]
    e = ch.gcds()
    for i in range(1, len(ch.betas)):
        n_i = e[i - 1] // e[i]
        gens.append(n_i * gens[-1] + ch.betas[i] - ch.betas[i - 1])
    return tuple(gens)


def conductor(ch: PuiseuxCharacteristic) -> int:
    gens = semigroup_generators(ch)
    if gens == (1,):
        return 0
    e = ch.gcds()
    return sum((e[i - 1] // e[i] - 1) * gens[i] for i in range(1, len(gens))) - ch.beta0 + 1


def semigroup(b: BranchParam, truncation: int = 32) -> Tuple[int, ...]:
    return semigroup_generators(characteristic_exponents(b, truncation))


def semigroup_elements(gens: Sequence[int], bound: int) -> List[int]:
    """Elements of the numerical semigroup below ``bound``."""
    ok = [False] * bound
    if bound:
        ok[0] = True
    for k in range(1, bound):
        ok[k] = any(k >= g and ok[k - g] for g in gens)
    return [k for k in range(bound) if ok[k]]


def orders_of_polynomials(b: BranchParam, bound: int) -> List[int]:
    """Orders ``< bound`` of all polynomials ``g(x, y)`` restricted to the branch.

    Independent of the characteristic exponents: Gaussian elimination on the
    values of the monomials, keyed by leading exponent.
    """
    b = b.at_truncation(bound)
    if not b.exact and b.truncation_order < bound:
        raise PrecisionExhausted(f"branch known only to t^{b.truncation_order}")
    ox, oy = b.x.order(), b.y.order()
    rows: Dict[int, Dict[int, Fraction]] = {}
    xs = [PowerSeries({0: 1})]
    i = 0
    while i * (ox if ox != inf else bound) < bound:
        yp = xs[-1].truncate(bound)
        j = 0
        while j * (oy if oy != inf else bound) + i * (ox if ox != inf else 0) < bound:
            vec = {k: c for k, c in yp.truncate(bound).terms()}
            while vec:
                lead = min(vec)
                if lead not in rows:
                    c = vec[lead]
                    rows[lead] = {k: v / c for k, v in vec.items()}
                    break
                piv = rows[lead]
                f = vec[lead]
                for k, v in piv.items():
                    nv = vec.get(k, 0) - f * v
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
            yp = (yp * b.y).truncate(bound)
            j += 1
        xs.append((xs[-1] * b.x).truncate(bound))
        i += 1
    return sorted(rows)


def semigroup_oracle_bound(gens: Sequence[int], ch: PuiseuxCharacteristic) -> int:
    return max(conductor(ch) + max(gens), 2 * max(gens)) + 1


# -- intersection numbers ------------------------------------------------

Side = Union[BranchParam, BivariatePolynomial]


def _ord_on_branch(f: BivariatePolynomial, b: BranchParam, prec: int) -> int:
    val = poly_eval_on_param(f, b.x, b.y)
    o = val.order()
    if o == inf:
        raise CommonBranch(f"{f} vanishes identically on the branch {b.id or b}")
    if o is INDETERMINATE:
        raise PrecisionExhausted("substitution vanishes to known precision")
    return o


def _det(m: List[List[PowerSeries]]) -> PowerSeries:
    n = len(m)

    @lru_cache(maxsize=None)
    def minor(row: int, used: int) -> PowerSeries:
        if row == n:
            return PowerSeries({0: 1})
        total = PowerSeries.zero(None)
        sign = 1
        for col in range(n):
            if used >> col & 1:
                continue
            entry = m[row][col]
            if entry.terms() or entry.prec is not None:
                term = entry * minor(row + 1, used | (1 << col))
                total = total + (term if sign > 0 else -term)
            sign = -sign
        return total

    return minor(0, 0)


def _resultant_order(b1: BranchParam, b2: BranchParam, prec: int) -> int:
    swap = b2.x.order() == inf
    X1, Y1 = (b1.y, b1.x) if swap else (b1.x, b1.y)
    n, c, Y2 = _normalized(b2, prec, swap)
    a = X1.scale(1 / c)
    # g(s) = Y1 - Y2(s) reduced modulo s^n - a
    oa = a.order()
    known = Y2.prec
    gprec = Y1.prec
    if known is not None:
        if oa == inf:
            cap = None if known >= n else known
        else:
            lower = a._order_bound()
            cap = (known // n) * lower
        if cap is not None:
            gprec = cap if gprec is None else min(gprec, cap)
            if gprec < 1:
                raise PrecisionExhausted("too few terms for the resultant")
    powers = [PowerSeries({0: 1})]
    g = [PowerSeries.zero(gprec) for _ in range(n)]
    g[0] = (g[0] + Y1).truncate(gprec)
    for k, coef in Y2.terms():
        q, r = divmod(k, n)
        while len(powers) <= q:
            powers.append((powers[-1] * a).truncate(gprec))
        g[r] = g[r] - powers[q].scale(coef).truncate(gprec)
    # multiplication-by-g matrix on the basis 1, s, ..., s^(n-1)
    mat = [[PowerSeries.zero(None) for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for r in range(n):
            k = r + j
            entry = g[r] if k < n else (g[r] * a).truncate(gprec)
            mat[k % n][j] = entry
    d = _det(mat)
    o = d.order()
    if o == inf:
        raise CommonBranch("the two branches coincide")
    if o is INDETERMINATE:
        raise PrecisionExhausted("resultant vanishes to known precision")
    return o


def intersection_oracle(a: Side, b: Side, truncation: int = 16, max_truncation: Optional[int] = None) -> int:
    """Intersection multiplicity by substitution or by a truncated resultant.

    For two parametrized branches the value is accepted only when it is the
    same at truncation ``T`` and ``2T``.
    """
    cap = max_truncation or max_truncation_default()
    if isinstance(a, BivariatePolynomial) and isinstance(b, BivariatePolynomial):
        raise TypeError("at least one side must be a branch")
    if isinstance(a, BivariatePolynomial):
        a, b = b, a
    if isinstance(b, BivariatePolynomial):
        f = b
        return _with_precision(a, lambda br, p: _ord_on_branch(f, br, p), truncation, cap)
    prec = truncation
    while True:
        try:
            first = _resultant_order(a.at_truncation(prec), b.at_truncation(prec), prec)
            if a.exact and b.exact and _resultant_exact(a, b):
                return first
            second = _resultant_order(a.at_truncation(2 * prec), b.at_truncation(2 * prec), 2 * prec)
            if first == second:
                return first
        except PrecisionExhausted:
            pass
        if 2 * prec > cap:
            raise PrecisionExhausted(f"resultant not stable below truncation cap {cap}")
        prec *= 2


def _resultant_exact(a: BranchParam, b: BranchParam) -> bool:
    # nothing was truncated when the normalizing coordinate is a monomial
    swap = b.x.order() == inf
    return (b.y if swap else b.x).is_monomial()


def _relabel(spec: CurveSpec, prefix: str) -> CurveSpec:
    return CurveSpec(tuple(b.with_id(f"{prefix}{b.id}") for b in spec.branches), None, spec.truncation)


def joint_cluster(spec1: CurveSpec, spec2: CurveSpec, truncation: Optional[int] = None) -> Cluster:
    if spec1.implicit_equation is not None and spec2.implicit_equation is not None:
        if common_factor_through_origin(spec1.implicit_equation, spec2.implicit_equation):
            raise CommonBranch("the curves share a branch")
    union = _relabel(spec1, "A:").union(_relabel(spec2, "B:"))
    return resolve(union, truncation)


def noether_terms(spec1: CurveSpec, spec2: CurveSpec, truncation: Optional[int] = None) -> List[Tuple[str, int, int]]:
    """``(point, mu_A, mu_B)`` for every point lying on both curves."""
    c = joint_cluster(spec1, spec2, truncation)
    out = []
    for p in sorted(c.points.values(), key=lambda p: (p.level, p.id)):
        ma = sum(m for b, m in ((b, c.mult[(p.id, b)]) for b in p.branches_through) if b.startswith("A:"))
        mb = sum(m for b, m in ((b, c.mult[(p.id, b)]) for b in p.branches_through) if b.startswith("B:"))
        if ma and mb:
            out.append((p.id, ma, mb))
    return out


def intersection_noether(spec1: CurveSpec, spec2: CurveSpec, truncation: Optional[int] = None) -> int:
    return sum(ma * mb for _, ma, mb in noether_terms(spec1, spec2, truncation))


def intersection_oracle_curves(spec1: CurveSpec, spec2: CurveSpec, truncation: int = 16) -> int:
    """Sum of pairwise oracle values, by substitution whenever an equation is known."""
    if spec2.implicit_equation is not None:
        return sum(intersection_oracle(b, spec2.implicit_equation, truncation) for b in spec1.branches)
    if spec1.implicit_equation is not None:
        return sum(intersection_oracle(b, spec1.implicit_equation, truncation) for b in spec2.branches)
    return sum(intersection_oracle(a, b, truncation) for a in spec1.branches for b in spec2.branches)


# -- equisingularity ------------------------------------------------------

def diagram_of(spec: CurveSpec, truncation: Optional[int] = None) -> EnriquesDiagram:
    return build_diagram(resolve(spec, truncation))


def equisingular_by_diagram(spec1: CurveSpec, spec2: CurveSpec,
                            truncation: Optional[int] = None) -> Tuple[bool, Optional[Dict[str, str]]]:
    mapping = isomorphic(diagram_of(spec1, truncation), diagram_of(spec2, truncation))
    return mapping is not None, mapping


def pairwise_intersections(c: Cluster) -> Dict[Tuple[str, str], int]:
    """``i(a, b)`` for all branch pairs of a resolved curve, by Noether's formula."""
    out = {}
    for a, b in combinations(c.branch_ids, 2):
        v = sum(c.mult[(p.id, a)] * c.mult[(p.id, b)]
                for p in c.points.values() if a in p.branches_through and b in p.branches_through)
        out[(a, b)] = out[(b, a)] = v
    return out


def branch_codes(spec: CurveSpec, truncation: Optional[int] = None) -> List[str]:
    """Canonical code of each branch's own Enriques diagram, in branch order."""
    codes = []
    for b in spec.branches:
        single = CurveSpec((b,), None, spec.truncation)
        codes.append(canonical_code(diagram_of(single, truncation)))
    return codes


def equisingular_by_branches(spec1: CurveSpec, spec2: CurveSpec,
                             truncation: Optional[int] = None) -> Optional[Tuple[int, ...]]:
    """Branch bijection ``sigma`` (``i -> sigma[i]``) matching diagrams and intersections."""
    k = len(spec1.branches)
    if k != len(spec2.branches):
        return None
    codes1, codes2 = branch_codes(spec1, truncation), branch_codes(spec2, truncation)
    if sorted(codes1) != sorted(codes2):
        return None
    ids1 = [b.id for b in spec1.branches]
    ids2 = [b.id for b in spec2.branches]
    i1 = pairwise_intersections(resolve(spec1, truncation)) if k > 1 else {}
    i2 = pairwise_intersections(resolve(spec2, truncation)) if k > 1 else {}
    sigma: List[int] = []
    used = [False] * k

    def extend() -> bool:
        i = len(sigma)
        if i == k:
            return True
        # same label first, so a relabelled copy maps onto itself
        for j in sorted(range(k), key=lambda j: (ids2[j] != ids1[i], j)):
            if used[j] or codes1[i] != codes2[j]:
                continue
            if any(i1[(ids1[p], ids1[i])] != i2[(ids2[sigma[p]], ids2[j])] for p in range(i)):
                continue
            used[j] = True
            sigma.append(j)
            if extend():
                return True
            sigma.pop()
            used[j] = False
        return False

    return tuple(sigma) if extend() else None


def branch_subdiagrams(spec: CurveSpec, truncation: Optional[int] = None) -> Dict[str, EnriquesDiagram]:
    d = diagram_of(spec, truncation)
    return {b.id: subdiagram(d, b.id) for b in spec.branches}


def check_deciders(spec1: CurveSpec, spec2: CurveSpec, truncation: Optional[int] = None):
    """Run both deciders; raise :class:`InternalError` when they disagree."""
    by_diagram, mapping = equisingular_by_diagram(spec1, spec2, truncation)
    sigma = equisingular_by_branches(spec1, spec2, truncation)
    if by_diagram != (sigma is not None):
        raise InternalError(f"deciders disagree: diagram={by_diagram}, branches={sigma}")
    return by_diagram, mapping, sigma
