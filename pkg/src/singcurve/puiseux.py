"""Branch extraction by the Newton polygon algorithm over Q.

Branches are solved for ``x`` as a Puiseux series in ``y``: each branch comes
out as ``y = lam * t**Q`` (exact monomial) and ``x`` a series in ``t``.  The
substitution at every Newton polygon edge uses rational scalings chosen so
that ``t`` stays rational (the rational-Puiseux trick), hence the only failure
mode is a face polynomial with an irrational root.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb, gcd, inf
from typing import Callable, Dict, List, Optional, Tuple

from .errors import (
    ImprimitiveBranch,
    InputError,
    InternalError,
    IrrationalBranch,
    NonPositiveOrder,
    NotSquarefree,
    PrecisionExhausted,
)
from .numerics import (
    INDETERMINATE,
    BivariatePolynomial,
    PowerSeries,
    binomial_series,
    lowest_homogeneous_form,
    poly_eval_on_param,
    squarefree_check,
)


@dataclass(frozen=True)
class BranchParam:
    """A parametrized branch ``(x(t), y(t))`` through the origin."""

    x: PowerSeries
    y: PowerSeries
    exact: bool = False
    id: Optional[str] = None
    recipe: Optional[Callable[[int], "BranchParam"]] = field(default=None, compare=False, repr=False)

    @property
    def truncation_order(self) -> int:
        if self.exact:
            return 1 + max(self.x.degree(), self.y.degree(), 0)
        return min(p for p in (self.x.prec, self.y.prec) if p is not None)

    def multiplicity(self) -> int:
        best = inf
        unknown = inf
        for s in (self.x, self.y):
            o = s.order()
            if o is INDETERMINATE:
                unknown = min(unknown, s.prec)
            else:
                best = min(best, o)
        if best == inf or unknown <= best:
            raise PrecisionExhausted("branch multiplicity undetermined")
        return int(best)

    def exponent_gcd(self) -> int:
        g = 0
        for s in (self.x, self.y):
            for k, _ in s.terms():
                g = gcd(g, k)
        return g

    def validate(self) -> "BranchParam":
        for name, s in (("x", self.x), ("y", self.y)):
            if s.prec is not None and s.prec < 1 or s.coefficient(0):
                raise NonPositiveOrder(f"{name}(t) has a constant term")
        if not self.x.terms() and not self.y.terms():
            raise NonPositiveOrder("both components vanish")
        m = self.multiplicity()
        if self.exponent_gcd() != 1:
            raise ImprimitiveBranch(f"parametrization not primitive (gcd of exponents {self.exponent_gcd()})")
        if self.exact and m > 1:
            # a primitive branch reaches gcd 1 before the delta-invariant bound
            d = max(self.x.degree(), self.y.degree())
            bound = (d - 1) * (d - 2) + m + 1
            swap = self.x.order() != m
            _, _, other = normalize_branch(self, bound, swap)
            e = m
            for k, _ in other.terms():
                e = gcd(e, k)
            if e != 1:
                raise ImprimitiveBranch(f"parametrization covers its image {e} times")
        return self

    def at_truncation(self, prec: int) -> "BranchParam":
        """Same branch known to at least ``prec`` when it can be extended."""
        if self.exact or prec <= self.truncation_order or self.recipe is None:
            return self
        return self.recipe(prec)

    def with_id(self, ident: Optional[str]) -> "BranchParam":
        return replace(self, id=ident)

    def swapped(self) -> "BranchParam":
        return replace(self, x=self.y, y=self.x, recipe=None)

    def __str__(self):
        return f"x(t) = {self.x.to_str(big_o=not self.exact)}; y(t) = {self.y.to_str(big_o=not self.exact)}"


def normalize_branch(b: BranchParam, prec: int, swap: bool = False) -> Tuple[int, Fraction, PowerSeries]:
    """``(n, c, Y(s))`` after reparametrizing so that ``x`` (``y`` if ``swap``) is ``c*s**n``.

    With ``x = c*t**n*(1 + h)`` the new parameter is ``s = t*(1 + h)**(1/n)``
    and Lagrange inversion gives ``[s^k] Y = [t^(k-1)] Y'(t)*phi**k / k`` for
    ``phi = (1 + h)**(-1/n)``.
    """
    X, Y = (b.y, b.x) if swap else (b.x, b.y)
    n, c = X.leading()
    if X.is_monomial():
        return n, c, Y
    top = prec
    if X.prec is not None:
        top = min(top, X.prec - n + 1)
    if Y.prec is not None:
        top = min(top, Y.prec)
    if top < 2:
        raise PrecisionExhausted("too few terms to normalize the branch")
    h = X.shift(-n).scale(1 / c) - PowerSeries({0: 1})
    phi = binomial_series(h.lift(top), Fraction(-1, n), top)
    dy = {k - 1: k * v for k, v in Y.terms() if 0 < k < top}
    out: Dict[int, Fraction] = {}
    power = PowerSeries({0: 1})
    for k in range(1, top):
        power = (power * phi).truncate(top)
        pc = power.coeffs
        acc = sum((v * pc.get(k - 1 - j, 0) for j, v in dy.items() if j <= k - 1), Fraction(0))
        if acc:
            out[k] = acc / k
    return n, c, PowerSeries(out, top)


@dataclass(frozen=True)
class NewtonPolygonEdge:
    """Compact edge of the Newton polygon in ``(deg_x, deg_y)`` coordinates.

    ``slope`` is d(deg_x)/d(deg_y); solutions on this edge behave like
    ``x ~ c * y**exponent`` with ``exponent = -1/slope``.  ``face_polynomial``
    holds coefficients of ``z**0, z**1, ...`` of the edge restriction
    ``sum a_ij z**(i - i_min)``.
    """

    slope: Fraction
    endpoints: Tuple[Tuple[int, int], Tuple[int, int]]
    face_polynomial: Tuple[Fraction, ...]

    @property
    def exponent(self) -> Fraction:
        return -1 / self.slope


def _hull_edges(points: Dict[Tuple[int, int], Fraction], start, stop) -> List[NewtonPolygonEdge]:
    """Lower-left hull from ``start`` (min deg_x) to ``stop`` (min deg_y)."""
    edges = []
    cur = start
    while cur != stop:
        best = None
        best_slope = None
        for p in points:
            if p[0] <= cur[0]:
                continue
            sl = Fraction(p[1] - cur[1], p[0] - cur[0])
            if best is None or sl < best_slope or (sl == best_slope and p[0] > best[0]):
                best, best_slope = p, sl
        if best is None:
            break
        on_edge = [p for p in points if p == cur or (p[0] > cur[0] and Fraction(p[1] - cur[1], p[0] - cur[0]) == best_slope)]
        width = best[0] - cur[0]
        face = [Fraction(0)] * (width + 1)
        for p in on_edge:
            if p[0] <= best[0]:
                face[p[0] - cur[0]] = points[p]
        edges.append(NewtonPolygonEdge(Fraction(best[0] - cur[0], best[1] - cur[1]), (cur, best), tuple(face)))
        cur = best
    return edges


def newton_polygon(f: BivariatePolynomial) -> List[NewtonPolygonEdge]:
    """Compact edges of the lower-left convex hull of the support, ordered by slope."""
    pts = f.terms
    if not pts:
        raise ValueError("zero polynomial")
    imin = min(i for i, _ in pts)
    start = (imin, min(j for i, j in pts if i == imin))
    jmin = min(j for _, j in pts)
    stop = (min(i for i, j in pts if j == jmin), jmin)
    return sorted(_hull_edges(pts, start, stop), key=lambda e: e.slope)


# ---------------------------------------------------------------------------
# univariate helpers


def rational_roots(coeffs) -> Tuple[List[Tuple[Fraction, int]], int]:
    """Rational roots with multiplicity, plus total degree of the irrational part.

    ``coeffs[k]`` is the coefficient of ``z**k``.
    """
    import sympy

    z = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z ** k for k, c in enumerate(coeffs))
    poly = sympy.Poly(expr, z, domain="QQ")
    _, factors = poly.factor_list()
    roots = []
    other = 0
    for fac, mult in factors:
        if fac.degree() == 1:
            c1, c0 = fac.all_coeffs()
            r = -sympy.Rational(c0) / sympy.Rational(c1)
            roots.append((Fraction(int(r.p), int(r.q)), mult))
        else:
            other += fac.degree() * mult
    roots.sort()
    return roots, other


# ---------------------------------------------------------------------------
# expansion state


@dataclass(frozen=True)
class _Stage:
    """Current polynomial ``g(w, tau)`` and the map back to ``(x, y)``.

    ``y = s_coef * tau**s_exp`` and ``x = W(tau) + c_coef * tau**c_exp * w``.
    Polynomials keep keys ``(deg_w, deg_tau)``.
    """

    g: BivariatePolynomial
    s_coef: Fraction
    s_exp: int
    W: PowerSeries
    c_coef: Fraction
    c_exp: int

    def substitute(self, lam: Fraction, q: int, m: int, alpha: Fraction, weight: int) -> "_Stage":
        # tau = lam * u**q, w = u**m * (alpha + w1)
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), a in self.g.items():
            e = q * j + m * i - weight
            if e < 0:
                raise InternalError("substitution below edge weight")
            base = a * lam ** j
            for k in range(i + 1):
                c = base * comb(i, k) * alpha ** (i - k)
                if c:
                    key = (k, e)
                    out[key] = out.get(key, 0) + c
        g1 = BivariatePolynomial(out)
        W1 = _rescale(self.W, lam, q) + PowerSeries({self.c_exp * q + m: self.c_coef * lam ** self.c_exp * alpha})
        return _Stage(
            g=g1,
            s_coef=self.s_coef * lam ** self.s_exp,
            s_exp=self.s_exp * q,
            W=W1,
            c_coef=self.c_coef * lam ** self.c_exp,
            c_exp=self.c_exp * q + m,
        )


def _rescale(s: PowerSeries, lam: Fraction, q: int) -> PowerSeries:
    """``s(lam * u**q)`` for an exact polynomial ``s``."""
    return PowerSeries({k * q: c * lam ** k for k, c in s.terms()})


def _face_root_exponents(m: int, q: int) -> Tuple[int, int]:
    a = 0
    while (a * m + 1) % q:
        a += 1
    return a, (a * m + 1) // q


def _solve_regular(g: BivariatePolynomial, prec: int) -> PowerSeries:
    """Root ``w(tau)`` with ``w(0) = 0`` of ``g`` when ``dg/dw(0,0) != 0``, mod ``tau**prec``."""
    rows: Dict[int, Dict[int, Fraction]] = {}
    for (i, j), c in g.items():
        rows.setdefault(i, {})[j] = c
    top = max(rows)
    coeff = [PowerSeries(rows.get(i, {})) for i in range(top + 1)]
    if not coeff[1].coefficient(0):
        raise InternalError("regular solve on a singular point")
    w = PowerSeries.zero(None)
    n = 1
    while n < prec:
        n = min(2 * n, prec)
        val = coeff[top].lift(n)
        der = coeff[top].scale(top).lift(n)
        for i in range(top - 1, -1, -1):
            val = (val * w).truncate(n) + coeff[i].lift(n)
            if i >= 1:
                der = (der * w).truncate(n) + coeff[i].scale(i).lift(n)
        step = val.div(der, n)
        w = PowerSeries((w - step).truncate(n).coeffs)
    return w.truncate(prec) if prec > 0 else w


def _is_exact_root(g: BivariatePolynomial, w: PowerSeries) -> bool:
    """True when the polynomial ``w(tau)`` kills ``g`` identically."""
    val = poly_eval_on_param(g.swap(), PowerSeries({1: 1}), PowerSeries(w.coeffs))
    return val.order() == inf


class _Expander:
    def __init__(self, f: BivariatePolynomial, prec: int):
        self.f = f
        self.prec = prec

    def run(self) -> List[BranchParam]:
        f = self.f
        out: List[BranchParam] = []
        # axis factors: x | f gives the branch x = 0, y | f gives y = 0
        if all(i >= 1 for i, _ in f.terms):
            out.append(BranchParam(PowerSeries.zero(None), PowerSeries({1: 1}), exact=True))
            f = f.divide_monomial(1, 0)
        if all(j >= 1 for _, j in f.terms):
            out.append(BranchParam(PowerSeries({1: 1}), PowerSeries.zero(None), exact=True))
            f = f.divide_monomial(0, 1)
        if not any(i == 0 and j == 0 for i, j in f.terms):
            stage = _Stage(f, Fraction(1), 1, PowerSeries.zero(None), Fraction(1), 0)
            out.extend(self._expand(stage, depth=0))
        return out

    def _expand(self, st: _Stage, depth: int) -> List[BranchParam]:
        g = st.g
        out: List[BranchParam] = []
        if all(i >= 1 for i, _ in g.terms):
            out.append(self._exact_branch(st, PowerSeries.zero(None)))
            g = g.divide_monomial(1, 0)
            if all(i >= 1 for i, _ in g.terms):
                raise NotSquarefree("repeated branch detected during expansion")
            st = replace(st, g=g)
        axis = [i for i, j in g.terms if j == 0]
        if not axis:
            if depth == 0:
                return out
            raise InternalError("stage polynomial divisible by the parameter")
        r = min(axis)
        if r == 0:
            return out
        if r == 1:
            out.append(self._regular_branch(st))
            return out
        j0 = min(j for i, j in g.terms if i == 0)
        for edge in _hull_edges(g.terms, (0, j0), (r, 0)):
            (i1, j1), (i2, j2) = edge.endpoints
            num, den = j1 - j2, i2 - i1
            d = gcd(num, den)
            m, q = num // d, den // d
            face = edge.face_polynomial
            psi = [face[k] for k in range(0, len(face), q)]
            roots, irrational = rational_roots(psi)
            if irrational:
                raise IrrationalBranch(
                    f"face polynomial {_face_str(face)} on edge {edge.endpoints} has non-rational roots",
                    edge=edge,
                    face_polynomial=face,
                )
            a_exp, b_exp = _face_root_exponents(m, q)
            weight = q * j1 + m * i1
            for xi, _mult in roots:
                lam, alpha = xi ** a_exp, xi ** b_exp
                out.extend(self._expand(st.substitute(lam, q, m, alpha, weight), depth + 1))
        return out

    def _exact_branch(self, st: _Stage, w: PowerSeries) -> BranchParam:
        x = st.W + w.shift(st.c_exp).scale(st.c_coef)
        y = PowerSeries({st.s_exp: st.s_coef})
        return BranchParam(x, y, exact=True)

    def _regular_branch(self, st: _Stage) -> BranchParam:
        w = _solve_regular(st.g, max(1, self.prec - st.c_exp))
        if w.degree() < (self.prec - st.c_exp) // 2 and _is_exact_root(st.g, w):
            return self._exact_branch(st, PowerSeries(w.coeffs))
        return self._series_branch(st, self.prec, w)

    def _series_branch(self, st: _Stage, prec: int, w: Optional[PowerSeries] = None) -> BranchParam:
        if w is None:
            w = _solve_regular(st.g, max(1, prec - st.c_exp))
        x = st.W + w.shift(st.c_exp).scale(st.c_coef)
        y = PowerSeries({st.s_exp: st.s_coef})

        def recipe(new_prec: int, _st=st) -> BranchParam:
            return self._series_branch(_st, max(new_prec, prec))

        return BranchParam(x, y, exact=False, recipe=recipe)


def _face_str(face) -> str:
    from .numerics import _format_term, _join_terms, _mono

    return _join_terms([_format_term(c, _mono("z", k)) for k, c in enumerate(face) if c])


def branches(f: BivariatePolynomial, min_truncation: int = 32) -> List[BranchParam]:
    """One rational Puiseux parametrization per local branch of ``f`` at 0."""
    if not f:
        raise InputError("zero polynomial")
    if f.coefficient(0, 0):
        raise InputError("curve does not pass through the origin")
    if not squarefree_check(f):
        raise NotSquarefree(f"{f} has a repeated factor")
    out = _Expander(f, min_truncation).run()
    total = sum(b.multiplicity() for b in out)
    if total != lowest_homogeneous_form(f).order():
        raise InternalError(f"branch multiplicities sum to {total}, tangent cone degree differs")
    return out


def extend_branch(f: BivariatePolynomial, b: BranchParam, new_truncation: int) -> BranchParam:
    """The same branch known to ``new_truncation``; prefix-consistent with ``b``."""
    if b.exact or new_truncation <= b.truncation_order:
        return b
    if b.recipe is not None:
        out = b.recipe(new_truncation)
    else:
        out = None
        for cand in branches(f, new_truncation):
            if cand.x.agrees_with(b.x) and cand.y.agrees_with(b.y):
                out = cand
                break
        if out is None:
            raise ValueError("branch was not produced from this polynomial")
    if not (out.x.agrees_with(b.x) and out.y.agrees_with(b.y)):
        raise InternalError("extension changed already reported coefficients")
    return out.with_id(b.id)
