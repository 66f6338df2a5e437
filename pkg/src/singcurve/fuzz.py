"""Random curve generators and the differential fuzzer behind ``singcurve fuzz``."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .curves import CurveSpec, curve_from_branches, save_curve
from .errors import CommonBranch, ImprimitiveBranch, InputError, NonPositiveOrder, SingcurveError
from .numerics import BivariatePolynomial, PowerSeries, squarefree_check
from .puiseux import BranchParam
from .resolution import resolve

_COEFFS = [Fraction(c) for c in (1, -1, 2, -2, 3)] + [Fraction(1, 2), Fraction(-1, 3)]


def _coef(rng: random.Random) -> Fraction:
    return rng.choice(_COEFFS)


def random_branch(rng: random.Random, max_mult: int = 3, max_exp: int = 9) -> BranchParam:
    """A primitive polynomial parametrization with small rational coefficients."""
    while True:
        m = rng.choice([1, 1, 2, 2, 3][:max(1, 2 * max_mult - 1)])
        x = {m: Fraction(1)}
        y: Dict[int, Fraction] = {}
        if m == 1:
            for k in rng.sample(range(1, max_exp + 1), rng.randint(1, 3)):
                y[k] = _coef(rng)
            if rng.random() < 0.15:
                y = {}
        else:
            exps = [k for k in range(m + 1, max_exp + 1)]
            for k in rng.sample(exps, min(len(exps), rng.randint(1, 3))):
                y[k] = _coef(rng)
            if rng.random() < 0.3:
                x[rng.randint(m + 1, max_exp)] = _coef(rng)
        xs, ys = PowerSeries(x), PowerSeries(y)
        if rng.random() < 0.5:
            xs, ys = ys, xs
        xs, ys = _linear(rng, xs, ys, 0.4)
        try:
            return BranchParam(xs, ys, exact=True).validate()
        except (ImprimitiveBranch, NonPositiveOrder):
            continue


def _linear(rng: random.Random, x: PowerSeries, y: PowerSeries, chance: float):
    if rng.random() >= chance:
        return x, y
    while True:
        a, b, c, d = (rng.choice([-1, 0, 1, 2]) for _ in range(4))
        if a * d - b * c:
            return x.scale(a) + y.scale(b), x.scale(c) + y.scale(d)


def apply_linear(b: BranchParam, m: Sequence[Sequence[Fraction]]) -> BranchParam:
    (a, bb), (c, d) = m
    x, y = b.x.scale(a) + b.y.scale(bb), b.x.scale(c) + b.y.scale(d)
    return BranchParam(x, y, exact=b.exact, id=b.id)


def perturb_tail(rng: random.Random, b: BranchParam, depth: int) -> BranchParam:
    """Same branch up to order about ``depth``, different beyond."""
    k = depth + rng.randint(0, 3)
    which = rng.random() < 0.5
    extra = PowerSeries({k: _coef(rng)})
    x, y = (b.x + extra, b.y) if which else (b.x, b.y + extra)
    return BranchParam(x, y, exact=b.exact, id=b.id)


def _distinct(branches: Sequence[BranchParam]) -> bool:
    keys = {(b.x, b.y) for b in branches}
    return len(keys) == len(branches)


def random_curve(rng: random.Random, k: Optional[int] = None, max_exp: int = 9) -> CurveSpec:
    while True:
        k = k or rng.randint(1, 3)
        out: List[BranchParam] = []
        for i in range(k):
            if out and rng.random() < 0.35:
                base = rng.choice(out)
                cand = perturb_tail(rng, base, rng.randint(2, 6))
            else:
                cand = random_branch(rng, max_exp=max_exp)
            try:
                out.append(cand.validate().with_id(f"b{i + 1}"))
            except (ImprimitiveBranch, NonPositiveOrder):
                out.append(random_branch(rng, max_exp=max_exp).with_id(f"b{i + 1}"))
        if _distinct(out):
            spec = curve_from_branches(out)
            try:
                resolve(spec)
            except CommonBranch:
                continue
            return spec


def random_linear_map(rng: random.Random):
    while True:
        a, b, c, d = (Fraction(rng.choice([-2, -1, 0, 1, 2, 3])) for _ in range(4))
        if a * d - b * c:
            return (a, b), (c, d)


def tangent_perturbation(rng: random.Random, spec: CurveSpec) -> CurveSpec:
    """Image of the curve under a random invertible linear map, hence equisingular."""
    m = random_linear_map(rng)
    return curve_from_branches([apply_linear(b, m) for b in spec.branches])


def random_pair(rng: random.Random) -> Tuple[CurveSpec, CurveSpec]:
    a = random_curve(rng)
    r = rng.random()
    if r < 0.3:
        b = tangent_perturbation(rng, a)
    elif r < 0.55:
        bs = [perturb_tail(rng, x, rng.randint(2, 7)) for x in a.branches]
        try:
            b = curve_from_branches([x.validate() for x in bs])
            resolve(b)
        except (SingcurveError, ValueError):
            b = random_curve(rng)
    else:
        b = random_curve(rng)
    return a, b


def random_squarefree_polynomial(rng: random.Random) -> BivariatePolynomial:
    """Product of factors with rational branches, after a random coordinate change."""
    x, y = BivariatePolynomial.x(), BivariatePolynomial.y()
    while True:
        f = BivariatePolynomial.constant(1)
        for _ in range(rng.randint(1, 3)):
            kind = rng.random()
            if kind < 0.45:
                p, q = rng.choice([(2, 3), (2, 5), (3, 4), (3, 5), (2, 7), (3, 7), (4, 5)])
                if rng.random() < 0.5:
                    p, q = q, p
                g = x ** p - y ** q * _coef(rng)
                if rng.random() < 0.5:
                    # stay strictly above the edge of x^p - y^q so the branch stays rational
                    i = rng.randint(1, 2)
                    j = max(0, (p * q - q * i) // p + 1) + rng.randint(0, 1)
                    g = g + x ** i * y ** j * _coef(rng)
            elif kind < 0.8:
                g = y - x * _coef(rng) - x ** rng.randint(2, 4) * _coef(rng)
                if rng.random() < 0.5:
                    g = BivariatePolynomial({(j, i): c for (i, j), c in g.items()})
            else:
                g = (y - x * _coef(rng)) * (y - x * _coef(rng) - x ** 2)
            f = f * g
        if rng.random() < 0.5:
            a = _coef(rng)
            f = BivariatePolynomial(_substitute_shear(f, a))
        if f.order() >= 1 and squarefree_check(f):
            return f


def _substitute_shear(f: BivariatePolynomial, a: Fraction) -> Dict[Tuple[int, int], Fraction]:
    # f(x + a*y, y)
    x, y = BivariatePolynomial.x(), BivariatePolynomial.y()
    out = BivariatePolynomial.constant(0)
    xs = x + y * a
    for (i, j), c in f.items():
        out = out + (xs ** i) * (y ** j) * c
    return out.terms


# -- the fuzzer ---------------------------------------------------------------

@dataclass
class Failure:
    case: int
    check: str
    detail: str
    reproducer: Tuple[CurveSpec, CurveSpec]

    def to_json(self) -> dict:
        a, b = self.reproducer
        return {
            "case": self.case,
            "check": self.check,
            "detail": self.detail,
            "reproducer": {"A": json.loads(save_curve(a)), "B": json.loads(save_curve(b))},
        }


def _checks(inject_fault: bool) -> List[Tuple[str, Callable[[CurveSpec, CurveSpec], Optional[str]]]]:
    from .invariants import (
        characteristic_exponents,
        equisingular_by_branches,
        equisingular_by_diagram,
        euclid_multiplicities,
        intersection_noether,
        intersection_oracle_curves,
        multiplicity_sequence,
        noether_terms,
    )
    from .invariants import joint_cluster

    def noether(a, b):
        terms = noether_terms(a, b)
        n = sum(x * y for _, x, y in terms)
        if inject_fault and len(terms) > 1:
            n += 1
        o = intersection_oracle_curves(a, b)
        if n != o:
            return f"noether {n} != oracle {o}"
        if intersection_noether(b, a) != sum(x * y for _, x, y in terms):
            return "noether not symmetric"
        return None

    def deciders(a, b):
        d, _ = equisingular_by_diagram(a, b)
        s = equisingular_by_branches(a, b)
        if d != (s is not None):
            return f"by_diagram={d} by_branches={s}"
        return None

    def proximity(a, b):
        bad = joint_cluster(a, b).proximity_violations()
        return f"proximity violations {bad}" if bad else None

    def euclid(a, b):
        for spec in (a, b):
            for br in spec.branches:
                got = multiplicity_sequence(br)
                want = euclid_multiplicities(characteristic_exponents(br))
                if got != want:
                    return f"branch {br}: blow-ups {got} vs Euclid {want}"
        return None

    return [("noether", noether), ("deciders", deciders), ("proximity", proximity), ("euclid", euclid)]


def _run_check(fn, a, b) -> Optional[str]:
    try:
        return fn(a, b)
    except CommonBranch:
        return None
    except SingcurveError as exc:
        return f"{type(exc).__name__}: {exc}"


def minimize(fn, a: CurveSpec, b: CurveSpec) -> Tuple[CurveSpec, CurveSpec]:
    """Greedily drop branches and series terms while the check keeps failing."""
    def fails(x, y):
        return _run_check(fn, x, y) is not None

    changed = True
    while changed:
        changed = False
        for side in (0, 1):
            cur = (a, b)[side]
            for idx in range(len(cur.branches)):
                cands = []
                if len(cur.branches) > 1:
                    cands.append([br for k, br in enumerate(cur.branches) if k != idx])
                br = cur.branches[idx]
                for coord in ("x", "y"):
                    s = getattr(br, coord)
                    for k, _ in list(s.terms())[1:]:
                        coeffs = {e: c for e, c in s.terms() if e != k}
                        nb = BranchParam(PowerSeries(coeffs) if coord == "x" else br.x,
                                         PowerSeries(coeffs) if coord == "y" else br.y, exact=True, id=br.id)
                        cands.append([nb if j == idx else o for j, o in enumerate(cur.branches)])
                for cand in cands:
                    try:
                        spec = curve_from_branches([c.validate() for c in cand])
                    except InputError:
                        continue
                    pair = (spec, b) if side == 0 else (a, spec)
                    if fails(*pair):
                        a, b = pair
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return a, b


def run_fuzz(seed: int, count: int, inject_fault: bool = False) -> dict:
    checks = _checks(inject_fault)
    failures: List[Failure] = []
    for case in range(count):
        rng = random.Random(f"{seed}:{case}")
        a, b = random_pair(rng)
        for name, fn in checks:
            msg = _run_check(fn, a, b)
            if msg is not None:
                ma, mb = minimize(fn, a, b)
                failures.append(Failure(case, name, msg, (ma, mb)))
                break
    return {
        "seed": seed,
        "count": count,
        "passed": count - len(failures),
        "failed": len(failures),
        "failures": [f.to_json() for f in failures],
    }
