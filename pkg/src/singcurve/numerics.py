"""Exact numeric substrate: rationals, truncated power series, sparse polynomials.

Rationals are :class:`fractions.Fraction`.  A :class:`PowerSeries` in ``t``
is a sparse map exponent -> coefficient known modulo ``t**prec``; ``prec=None``
marks an exact (polynomial) series.  Every operation propagates precision
pessimistically: a coefficient is only reported when it is certain.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd, inf
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .errors import DivisionByHigherOrder, PrecisionExhausted
from .kernels import conv_trunc

Number = Union[int, Fraction]

#: Returned by :func:`series_order` when every known coefficient vanishes.
INDETERMINATE = None


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """Serialize as ``"p/q"`` (or ``"p"`` for integers)."""
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _add_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _as_int_vector(coeffs: Mapping[int, Fraction], start: int, length: int):
    """Dense integer numerators over a common denominator for exponents start..start+length-1."""
    den = 1
    for k, c in coeffs.items():
        if start <= k < start + length:
            den = den * c.denominator // gcd(den, c.denominator)
    vec = [0] * length
    for k, c in coeffs.items():
        if start <= k < start + length:
            vec[k - start] = c.numerator * (den // c.denominator)
    return vec, den


class PowerSeries:
    """Immutable truncated univariate power series with rational coefficients."""

    __slots__ = ("_coeffs", "_prec", "_hash")

    def __init__(self, coeffs: Optional[Mapping[int, Number]] = None, prec: Optional[int] = None):
        if prec is not None:
            prec = int(prec)
            if prec < 1:
                raise PrecisionExhausted(f"truncation order must be positive, got {prec}")
        clean: Dict[int, Fraction] = {}
        for k, c in (coeffs or {}).items():
            k = int(k)
            if k < 0:
                raise ValueError(f"negative exponent {k}")
            if prec is not None and k >= prec:
                continue
            c = as_fraction(c)
            if c:
                clean[k] = c
        self._coeffs = dict(sorted(clean.items()))
        self._prec = prec
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def monomial(cls, exponent: int, coeff: Number = 1, prec: Optional[int] = None) -> "PowerSeries":
        return cls({exponent: coeff}, prec)

    @classmethod
    def zero(cls, prec: Optional[int] = None) -> "PowerSeries":
        return cls({}, prec)

    @classmethod
    def _raw(cls, coeffs: Dict[int, Fraction], prec):
        s = cls.__new__(cls)
        s._coeffs = coeffs
        s._prec = prec
        s._hash = None
        return s

    # -- accessors ----------------------------------------------------
    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._coeffs)

    @property
    def prec(self) -> Optional[int]:
        """Truncation order, or ``None`` for an exact series."""
        return self._prec

    @property
    def is_exact(self) -> bool:
        return self._prec is None

    def terms(self):
        return self._coeffs.items()

    def __len__(self):
        return len(self._coeffs)

    def coefficient(self, k: int) -> Fraction:
        if self._prec is not None and k >= self._prec:
            raise PrecisionExhausted(f"coefficient of t^{k} unknown (series known mod t^{self._prec})")
        return self._coeffs.get(k, Fraction(0))

    def order(self):
        """Least exponent with a nonzero coefficient.

        Returns ``math.inf`` for the exact zero series and :data:`INDETERMINATE`
        when all known coefficients vanish.
        """
        if self._coeffs:
            return next(iter(self._coeffs))
        return inf if self._prec is None else INDETERMINATE

    def certain_order(self) -> Union[int, float]:
        o = self.order()
        if o is INDETERMINATE:
            raise PrecisionExhausted(f"order undetermined below t^{self._prec}")
        return o

    def _order_bound(self):
        # lower bound on the true order, used for precision propagation
        o = self.order()
        return self._prec if o is INDETERMINATE else o

    def leading(self) -> Tuple[int, Fraction]:
        o = self.certain_order()
        if o == inf:
            raise ValueError("zero series has no leading term")
        return o, self._coeffs[o]

    def is_monomial(self) -> bool:
        return self._prec is None and len(self._coeffs) == 1

    def degree(self) -> int:
        """Largest stored exponent (-1 if none)."""
        return next(reversed(self._coeffs)) if self._coeffs else -1

    # -- precision management ------------------------------------------
    def truncate(self, prec: Optional[int]) -> "PowerSeries":
        if prec is None:
            return self
        if self._prec is not None and self._prec <= prec:
            return self
        return PowerSeries._raw({k: c for k, c in self._coeffs.items() if k < prec}, prec)

    def lift(self, prec: int) -> "PowerSeries":
        """Truncated copy of an exact series (identity on truncated series)."""
        if self._prec is not None:
            return self
        return self.truncate(prec)

    # -- arithmetic -----------------------------------------------------
    def __neg__(self):
        return PowerSeries._raw({k: -c for k, c in self._coeffs.items()}, self._prec)

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return PowerSeries({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = _add_prec(self._prec, other._prec)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        if prec is not None:
            out = {k: c for k, c in out.items() if k < prec}
        return PowerSeries._raw(dict(sorted(out.items())), prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Number) -> "PowerSeries":
        c = as_fraction(c)
        if not c:
            return PowerSeries.zero(self._prec)
        return PowerSeries._raw({k: v * c for k, v in self._coeffs.items()}, self._prec)

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by ``t**k`` (k may be negative when divisible)."""
        if k < 0 and self._coeffs and next(iter(self._coeffs)) + k < 0:
            raise DivisionByHigherOrder(f"series of order {self.order()} not divisible by t^{-k}")
        prec = None if self._prec is None else self._prec + k
        if prec is not None and prec < 1:
            raise PrecisionExhausted("no certain coefficients after shift")
        return PowerSeries._raw({e + k: c for e, c in self._coeffs.items()}, prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self._mul(other)

    __rmul__ = __mul__

    def _mul(self, other: "PowerSeries") -> "PowerSeries":
        oa, ob = self._order_bound(), other._order_bound()
        pa = inf if self._prec is None else self._prec
        pb = inf if other._prec is None else other._prec
        prec = min(pa + ob, pb + oa)
        prec = None if prec == inf else int(prec)
        if not self._coeffs or not other._coeffs:
            return PowerSeries._raw({}, prec)
        a0, b0 = next(iter(self._coeffs)), next(iter(other._coeffs))
        top = self.degree() + other.degree() + 1
        limit = top if prec is None else min(prec, top)
        if limit <= a0 + b0:
            return PowerSeries._raw({}, prec)
        if len(self._coeffs) * len(other._coeffs) <= 2 * (limit - a0 - b0):
            out: Dict[int, Fraction] = {}
            for i, ci in self._coeffs.items():
                if i + b0 >= limit:
                    break
                for j, cj in other._coeffs.items():
                    e = i + j
                    if e >= limit:
                        break
                    out[e] = out.get(e, 0) + ci * cj
            return PowerSeries._raw({k: v for k, v in sorted(out.items()) if v}, prec)
        span = limit - a0 - b0
        va, da = _as_int_vector(self._coeffs, a0, min(span, self.degree() - a0 + 1))
        vb, db = _as_int_vector(other._coeffs, b0, min(span, other.degree() - b0 + 1))
        prod = conv_trunc(va, vb, span)
        den = da * db
        out = {}
        for idx, v in enumerate(prod):
            if v:
                out[a0 + b0 + idx] = Fraction(v, den)
        return PowerSeries._raw(out, prec)

    def __pow__(self, k: int) -> "PowerSeries":
        if k < 0:
            raise ValueError("negative power")
        result = PowerSeries({0: 1})
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self, prec: int) -> "PowerSeries":
        """Inverse of a unit (nonzero constant term) modulo ``t**prec``."""
        if self._prec is not None:
            prec = min(prec, self._prec)
        c0 = self.coefficient(0)
        if not c0:
            raise DivisionByHigherOrder("inverse of a non-unit series")
        # Newton iteration; the current approximant is treated as exact so
        # that the doubled range is not discarded by pessimistic tracking.
        x = PowerSeries._raw({0: 1 / c0}, None)
        n = 1
        two = PowerSeries({0: 2})
        while n < prec:
            n = min(2 * n, prec)
            x = (x * (two - self.truncate(n) * x)).truncate(n)
            x = PowerSeries._raw(x._coeffs, None)
        return PowerSeries._raw(x._coeffs, prec).truncate(prec)

    def div(self, other: "PowerSeries", prec: Optional[int] = None) -> "PowerSeries":
        """Exact-range quotient ``self / other``.

        ``prec`` caps the result precision; it is required when both operands
        are exact and the divisor is not a monomial (the quotient is then an
        infinite series).
        """
        ob = other.order()
        if ob is INDETERMINATE:
            raise PrecisionExhausted("divisor order undetermined")
        if ob == inf:
            raise DivisionByHigherOrder("division by the zero series")
        oa = self.order()
        if oa == inf:
            return PowerSeries.zero(None)
        if oa is not INDETERMINATE and oa < ob:
            raise DivisionByHigherOrder(f"order {oa} dividend by order {ob} divisor")
        pa = inf if self._prec is None else self._prec - ob
        pb = inf if other._prec is None else other._prec - ob
        rprec = min(pa, pb)
        if other.is_monomial():
            c = other._coeffs[ob]
            q = PowerSeries._raw({k - ob: v / c for k, v in self._coeffs.items()},
                                 None if rprec == inf else int(rprec))
            if q._prec is not None and q._prec < 1:
                raise PrecisionExhausted("no certain quotient coefficients")
            return q.truncate(prec)
        if rprec == inf:
            if prec is None:
                raise ValueError("exact quotient is an infinite series; pass prec")
            rprec = prec
        elif prec is not None:
            rprec = min(rprec, prec)
        rprec = int(rprec)
        if rprec < 1:
            raise PrecisionExhausted("no certain quotient coefficients")
        if oa is INDETERMINATE:
            return PowerSeries.zero(rprec)
        q = self.shift(-ob).lift(rprec) * other.shift(-ob).inverse(rprec)
        return q.truncate(rprec)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / as_fraction(other))
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.div(other)

    def compose(self, inner: "PowerSeries", prec: Optional[int] = None) -> "PowerSeries":
        """``self(inner(t))`` for ``inner`` of positive order."""
        o = inner.order()
        if o is not INDETERMINATE and o != inf and o < 1:
            raise ValueError("inner series must have positive order")
        if self._prec is not None:
            # self known mod s^N -> composite known mod t^(N*ord(inner))
            bound = inner._order_bound()
            cap = self._prec * bound
            prec = cap if prec is None else min(prec, cap)
        # Horner over the stored exponents, descending
        exps = sorted(self._coeffs, reverse=True)
        if not exps:
            return PowerSeries.zero(prec)
        inner_t = inner.truncate(prec) if prec is not None else inner
        result = PowerSeries({0: self._coeffs[exps[0]]})
        for idx, e in enumerate(exps):
            nxt = exps[idx + 1] if idx + 1 < len(exps) else 0
            gap = e - nxt
            for _ in range(gap):
                result = (result * inner_t).truncate(prec)
            if idx + 1 < len(exps):
                result = result + PowerSeries({0: self._coeffs[nxt]})
        return result.truncate(prec) if prec is not None else result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self._prec == other._prec and self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._prec, tuple(self._coeffs.items())))
        return self._hash

    def agrees_with(self, other: "PowerSeries") -> bool:
        """True when both series coincide on their common certain range."""
        prec = _add_prec(self._prec, other._prec)
        return self.truncate(prec)._coeffs == other.truncate(prec)._coeffs

    # -- printing ---------------------------------------------------------
    def to_str(self, var: str = "t", big_o: bool = True) -> str:
        parts = []
        for k, c in self._coeffs.items():
            parts.append(_format_term(c, _mono(var, k)))
        body = _join_terms(parts)
        if big_o and self._prec is not None:
            tail = f"O({_mono(var, self._prec) or '1'})"
            return tail if body == "0" else f"{body} + {tail}"
        return body

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"PowerSeries({self.to_str()!r})"


def _mono(var: str, k: int) -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


def _format_term(c: Fraction, mono: str) -> str:
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if not mono:
        return f"{sign}{format_rational(a)}"
    if a == 1:
        return f"{sign}{mono}"
    return f"{sign}{format_rational(a)}*{mono}"


def _join_terms(parts) -> str:
    if not parts:
        return "0"
    out = parts[0][1:] if parts[0][0] == "+" else "-" + parts[0][1:]
    for p in parts[1:]:
        out += f" {p[0]} {p[1:]}"
    return out


# ---------------------------------------------------------------------------
# series operations named after their contracts


def series_order(s: PowerSeries):
    """Order of ``s``: an int, ``inf`` for exact zero, or :data:`INDETERMINATE`."""
    return s.order()


def series_arith(a: PowerSeries, b: PowerSeries, op: str) -> PowerSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a.div(b)
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------


Monomial = Tuple[int, int]


class BivariatePolynomial:
    """Sparse polynomial in ``x`` and ``y`` over Q, keyed by ``(deg_x, deg_y)``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Number]] = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            c = as_fraction(c)
            if c:
                clean[(int(i), int(j))] = clean.get((int(i), int(j)), 0) + c
        self._terms = {k: v for k, v in sorted(clean.items()) if v}
        self._hash = None

    @classmethod
    def x(cls) -> "BivariatePolynomial":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BivariatePolynomial":
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c: Number) -> "BivariatePolynomial":
        return cls({(0, 0): c})

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def total_degree(self) -> int:
        return max((i + j for i, j in self._terms), default=-1)

    def order(self) -> int:
        """Least total degree of the support (the multiplicity at the origin)."""
        if not self._terms:
            raise ValueError("zero polynomial")
        return min(i + j for i, j in self._terms)

    def degree_in(self, var: str) -> int:
        idx = 0 if var == "x" else 1
        return max((m[idx] for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({i + j for i, j in self._terms}) <= 1

    def _coerce(self, other):
        if isinstance(other, BivariatePolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return BivariatePolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return BivariatePolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = BivariatePolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BivariatePolynomial.constant(other)
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __call__(self, x: Number, y: Number) -> Fraction:
        x, y = as_fraction(x), as_fraction(y)
        return sum((c * x ** i * y ** j for (i, j), c in self._terms.items()), Fraction(0))

    def diff(self, var: str) -> "BivariatePolynomial":
        out = {}
        for (i, j), c in self._terms.items():
            if var == "x" and i:
                out[(i - 1, j)] = c * i
            elif var == "y" and j:
                out[(i, j - 1)] = c * j
        return BivariatePolynomial(out)

    def swap(self) -> "BivariatePolynomial":
        """Exchange the roles of x and y."""
        return BivariatePolynomial({(j, i): c for (i, j), c in self._terms.items()})

    def divide_monomial(self, i0: int, j0: int) -> "BivariatePolynomial":
        out = {}
        for (i, j), c in self._terms.items():
            if i < i0 or j < j0:
                raise ValueError(f"not divisible by x^{i0}*y^{j0}")
            out[(i - i0, j - j0)] = c
        return BivariatePolynomial(out)

    def __str__(self):
        # descending total degree, then descending x-degree: stable and readable
        keys = sorted(self._terms, key=lambda m: (-(m[0] + m[1]), -m[0]))
        parts = []
        for i, j in keys:
            mono = "*".join(filter(None, (_mono("x", i), _mono("y", j))))
            parts.append(_format_term(self._terms[(i, j)], mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"BivariatePolynomial({str(self)!r})"


def poly_eval_on_param(f: BivariatePolynomial, x: PowerSeries, y: PowerSeries) -> PowerSeries:
    """``f(x(t), y(t))`` with precision propagated from the inputs."""
    for s in (x, y):
        o = s.order()
        if o == 0:
            raise ValueError("parametrization must have zero constant term")
    if not f:
        return PowerSeries.zero(None)
    by_x: Dict[int, Dict[int, Fraction]] = {}
    for (i, j), c in f.items():
        by_x.setdefault(i, {})[j] = c
    ypow = _power_table(y, max(j for _, j in f.terms))
    xpow = _power_table(x, max(by_x))
    total = PowerSeries.zero(None)
    for i, row in by_x.items():
        inner = PowerSeries.zero(None)
        for j, c in row.items():
            inner = inner + ypow[j].scale(c)
        total = total + xpow[i] * inner
    return total


def _power_table(s: PowerSeries, top: int):
    table = [PowerSeries({0: 1})]
    for _ in range(top):
        table.append(table[-1] * s)
    return table


def lowest_homogeneous_form(f: BivariatePolynomial) -> BivariatePolynomial:
    """Tangent cone: the terms of minimal total degree."""
    m = f.order()
    return BivariatePolynomial({k: c for k, c in f.items() if k[0] + k[1] == m})


def to_sympy(f: BivariatePolynomial):
    import sympy

    x, y = sympy.symbols("x y")
    expr = sum((sympy.Rational(c.numerator, c.denominator) * x ** i * y ** j for (i, j), c in f.items()),
               sympy.Integer(0))
    return sympy.Poly(expr, x, y, domain="QQ")


def from_sympy(p) -> BivariatePolynomial:
    out = {}
    for (i, j), c in p.terms():
        out[(i, j)] = Fraction(int(c.p), int(c.q))
    return BivariatePolynomial(out)


def squarefree_check(f: BivariatePolynomial) -> bool:
    """True iff gcd(f, df/dx, df/dy) is constant."""
    if not f:
        raise ValueError("zero polynomial")
    p = to_sympy(f)
    g = p.gcd(to_sympy(f.diff("x"))) if f.diff("x") else p
    fy = f.diff("y")
    if fy:
        g = g.gcd(to_sympy(fy))
    return g.total_degree() == 0


def common_factor_through_origin(f: BivariatePolynomial, g: BivariatePolynomial) -> bool:
    """True when f and g share a nonconstant factor vanishing at the origin."""
    h = from_sympy(to_sympy(f).gcd(to_sympy(g)))
    return h.total_degree() > 0 and h(0, 0) == 0


def binomial_series(h: PowerSeries, exponent: Fraction, prec: int) -> PowerSeries:
    """``(1 + h)**exponent`` for ``h`` of positive order, modulo ``t**prec``."""
    exponent = as_fraction(exponent)
    o = h.order()
    if o is not INDETERMINATE and o != inf and o < 1:
        raise ValueError("h must have positive order")
    if h.prec is not None:
        prec = min(prec, h.prec)
    result = PowerSeries({0: 1}, prec)
    term = PowerSeries({0: 1})
    coeff = Fraction(1)
    hb = h.lift(prec)
    step = h._order_bound()
    if step == inf:
        return result
    k = 0
    while (k + 1) * step < prec:
        coeff = coeff * (exponent - k) / (k + 1)
        k += 1
        term = (term * hb).truncate(prec)
        if coeff:
            result = result + term.scale(coeff)
    return result.truncate(prec)


def reversion(s: PowerSeries, prec: int) -> PowerSeries:
    """Compositional inverse of ``s = c1*t + ...`` (c1 != 0) modulo ``t**prec``."""
    c1 = s.coefficient(1)
    if s.coefficient(0) or not c1:
        raise ValueError("reversion needs order exactly 1")
    if s.prec is not None:
        prec = min(prec, s.prec)
    # Newton iteration on F(r) = s(r) - t, doubling the certain range
    r = PowerSeries({1: 1 / c1}, min(2, prec))
    ds = _derivative(s)
    n = 2
    t = PowerSeries({1: 1})
    while n < prec:
        n = min(2 * n, prec)
        rl = PowerSeries._raw(r._coeffs, None)
        f_val = (s.lift(n).compose(rl, n) - t).truncate(n)
        d_val = ds.lift(n).compose(rl, n).truncate(n)
        r = (rl.truncate(n) - f_val.div(d_val, n)).truncate(n)
        r = PowerSeries._raw(r._coeffs, n)
    return r.truncate(prec)


def _derivative(s: PowerSeries) -> PowerSeries:
    prec = None if s.prec is None else s.prec - 1
    if prec is not None and prec < 1:
        raise PrecisionExhausted("derivative has no certain coefficients")
    return PowerSeries({k - 1: c * k for k, c in s.terms() if k}, prec)


def lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
