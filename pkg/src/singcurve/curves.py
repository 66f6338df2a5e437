"""Curve input: expression parser, parametrization parser and the JSON curve format.

Grammar (no implicit multiplication, no function calls)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | VAR | '(' expr ')'
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ConsistencyError, CurveSyntaxError, NonPositiveOrder, SchemaError, UnknownVariable
from .numerics import BivariatePolynomial, PowerSeries, format_rational, poly_eval_on_param
from .puiseux import BranchParam, branches, extend_branch

DEFAULT_TRUNCATION = 32

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()=;]))")

Exps = Tuple[int, ...]


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.vars = tuple(variables)
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text):
        tokens = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise CurveSyntaxError(f"unexpected character {text[i]!r}", i, text)
            start = m.start(m.lastgroup)
            tokens.append((m.lastgroup, m.group(m.lastgroup), start))
            i = m.end()
        tokens.append(("end", "", len(text)))
        return tokens

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, op):
        kind, val, at = self.take()
        if kind != "op" or val != op:
            raise CurveSyntaxError(f"expected {op!r}, found {val or 'end of input'!r}", at, self.text)

    def fail(self, message):
        raise CurveSyntaxError(message, self.peek()[2], self.text)

    # polynomial values: dict exponent-tuple -> Fraction
    def _const(self, c) -> Dict[Exps, Fraction]:
        return {(0,) * len(self.vars): Fraction(c)} if c else {}

    @staticmethod
    def _add(a, b, sign=1):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + sign * v
            if not out[k]:
                del out[k]
        return out

    @staticmethod
    def _mul(a, b):
        out = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return {k: v for k, v in out.items() if v}

    def parse(self):
        value = self.expr()
        kind, val, at = self.peek()
        if kind != "end":
            raise CurveSyntaxError(f"unexpected {val!r}", at, self.text)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                value = self._add(value, self.term(), 1 if val == "+" else -1)
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, at = self.peek()
            if kind == "op" and val == "*":
                self.take()
                value = self._mul(value, self.unary())
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                raise CurveSyntaxError("implicit multiplication is not allowed; use '*'", at, self.text)
            elif kind == "op" and val == "/":
                raise CurveSyntaxError("'/' is only allowed inside a rational literal p/q", at, self.text)
            else:
                return value

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return inner if val == "+" else {k: -v for k, v in inner.items()}
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2, at2 = self.take()
            if k2 != "num":
                raise CurveSyntaxError("exponent must be a non-negative integer", at2, self.text)
            result = self._const(1)
            for _ in range(int(v2)):
                result = self._mul(result, base)
            return result
        return base

    def atom(self):
        kind, val, at = self.take()
        if kind == "num":
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, at3 = self.take()
                if k3 != "num":
                    raise CurveSyntaxError("denominator of a rational literal must be an integer", at3, self.text)
                if int(v3) == 0:
                    raise CurveSyntaxError("zero denominator", at3, self.text)
                return self._const(Fraction(int(val), int(v3)))
            return self._const(int(val))
        if kind == "name":
            if val not in self.vars:
                raise UnknownVariable(f"unknown variable {val!r} (allowed: {', '.join(self.vars)})", at, self.text)
            exps = tuple(1 if v == val else 0 for v in self.vars)
            return {exps: Fraction(1)}
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise CurveSyntaxError(f"unexpected {val or 'end of input'!r}", at, self.text)


def parse_polynomial(text: str) -> BivariatePolynomial:
    """Parse an expression in ``x`` and ``y`` into an exact sparse polynomial."""
    if not isinstance(text, str):
        raise CurveSyntaxError("expression must be a string", 0)
    terms = _Parser(text, ("x", "y")).parse()
    return BivariatePolynomial({k: v for k, v in terms.items()})


def parse_series(text: str, prec: Optional[int] = None) -> PowerSeries:
    """Parse a polynomial expression in ``t`` (optionally truncated at ``prec``)."""
    if not isinstance(text, str):
        raise CurveSyntaxError("series expression must be a string", 0)
    terms = _Parser(text, ("t",)).parse()
    return PowerSeries({k[0]: v for k, v in terms.items()}, prec)


_PARAM = re.compile(r"^\s*x\s*\(\s*t\s*\)\s*=(?P<x>[^;]*);\s*y\s*\(\s*t\s*\)\s*=(?P<y>[^;]*?)\s*;?\s*$")


def parse_parametrization(text: str) -> BranchParam:
    """Parse ``"x(t) = <expr>; y(t) = <expr>"`` into an exact branch."""
    m = _PARAM.match(text)
    if not m:
        raise CurveSyntaxError("expected 'x(t) = <expr>; y(t) = <expr>'", 0, text)
    try:
        x = parse_series(m.group("x"))
    except CurveSyntaxError as exc:
        raise type(exc)(exc.args[0].split(" at position")[0], (exc.position or 0) + m.start("x"), text) from None
    try:
        y = parse_series(m.group("y"))
    except CurveSyntaxError as exc:
        raise type(exc)(exc.args[0].split(" at position")[0], (exc.position or 0) + m.start("y"), text) from None
    return BranchParam(x, y, exact=True).validate()


@dataclass(frozen=True)
class CurveSpec:
    """A curve germ as an ordered list of branches, optionally with its equation."""

    branches: Tuple[BranchParam, ...]
    implicit_equation: Optional[BivariatePolynomial] = None
    truncation: int = field(default=DEFAULT_TRUNCATION, compare=False)

    def __post_init__(self):
        if not self.branches:
            raise SchemaError("a curve needs at least one branch")
        object.__setattr__(self, "branches", tuple(self.branches))

    @property
    def labels(self) -> Tuple[Optional[str], ...]:
        return tuple(b.id for b in self.branches)

    def __len__(self):
        return len(self.branches)

    def branch_at(self, index: int, prec: int) -> BranchParam:
        """Branch ``index`` extended to at least ``prec`` when possible."""
        b = self.branches[index]
        if self.implicit_equation is not None and b.recipe is None and not b.exact:
            return extend_branch(self.implicit_equation, b, prec).with_id(b.id)
        return b.at_truncation(prec).with_id(b.id)

    def reordered(self, order: Sequence[int]) -> "CurveSpec":
        return CurveSpec(tuple(self.branches[i] for i in order), self.implicit_equation, self.truncation)

    def union(self, other: "CurveSpec") -> "CurveSpec":
        eq = None
        if self.implicit_equation is not None and other.implicit_equation is not None:
            eq = self.implicit_equation * other.implicit_equation
        return CurveSpec(self.branches + other.branches, eq, max(self.truncation, other.truncation))


def curve_from_polynomial(f: BivariatePolynomial, truncation: int = DEFAULT_TRUNCATION) -> CurveSpec:
    bs = branches(f, truncation)
    return CurveSpec(tuple(b.with_id(f"b{i + 1}") for i, b in enumerate(bs)), f, truncation)


def curve_from_branches(bs: Sequence[BranchParam], truncation: int = DEFAULT_TRUNCATION) -> CurveSpec:
    return CurveSpec(tuple(b if b.id else b.with_id(f"b{i + 1}") for i, b in enumerate(bs)), None, truncation)


def _check_consistency(spec: CurveSpec):
    f = spec.implicit_equation
    for b in spec.branches:
        val = poly_eval_on_param(f, b.x, b.y)
        if val.terms():
            raise ConsistencyError(f"branch {b.id or b} does not satisfy {f}: residual {val}")


def load_curve(document, truncation: Optional[int] = None) -> CurveSpec:
    """Build a :class:`CurveSpec` from JSON text (or an already decoded dict)."""
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"malformed JSON: {exc}") from None
    else:
        data = document
    if not isinstance(data, dict):
        raise SchemaError("curve document must be a JSON object")
    unknown = set(data) - {"polynomial", "branches", "truncation"}
    if unknown:
        raise SchemaError(f"unknown keys: {sorted(unknown)}")
    trunc = data.get("truncation")
    if trunc is not None and (not isinstance(trunc, int) or isinstance(trunc, bool) or trunc < 1):
        raise SchemaError("'truncation' must be a positive integer")
    poly = data.get("polynomial")
    if poly is not None and not isinstance(poly, str):
        raise SchemaError("'polynomial' must be a string")
    raw = data.get("branches")
    if poly is None and raw is None:
        raise SchemaError("curve needs 'polynomial' or 'branches'")
    if raw is None:
        f = parse_polynomial(poly)
        return curve_from_polynomial(f, trunc or truncation or DEFAULT_TRUNCATION)
    if not isinstance(raw, list) or not raw:
        raise SchemaError("'branches' must be a non-empty list")
    out: List[BranchParam] = []
    for idx, item in enumerate(raw):
        if not isinstance(item, dict) or not {"x", "y"} <= set(item) or set(item) - {"x", "y", "label"}:
            raise SchemaError(f"branch {idx} must have string fields 'x', 'y' and optional 'label'")
        if not all(isinstance(item[k], str) for k in ("x", "y")):
            raise SchemaError(f"branch {idx}: 'x' and 'y' must be strings")
        label = item.get("label")
        if label is not None and not isinstance(label, str):
            raise SchemaError(f"branch {idx}: 'label' must be a string")
        x, y = parse_series(item["x"], trunc), parse_series(item["y"], trunc)
        b = BranchParam(x, y, exact=trunc is None, id=label or f"b{idx + 1}")
        out.append(b.validate())
    spec = CurveSpec(tuple(out), parse_polynomial(poly) if poly is not None else None,
                     trunc or truncation or DEFAULT_TRUNCATION)
    if spec.implicit_equation is not None:
        _check_consistency(spec)
    return spec


def save_curve(spec: CurveSpec) -> str:
    """Serialize to the JSON curve format (rationals as ``"p/q"`` strings)."""
    f = spec.implicit_equation
    if f is not None and all(b.recipe is not None or b.exact for b in spec.branches):
        derived = _derived_from(f, spec)
        if derived:
            return json.dumps({"polynomial": str(f), "truncation": spec.truncation})
    doc: Dict[str, object] = {"branches": []}
    truncs = [b.truncation_order for b in spec.branches if not b.exact]
    trunc = min(truncs) if truncs else None
    for b in spec.branches:
        x, y = (b.x, b.y) if trunc is None else (b.x.truncate(trunc), b.y.truncate(trunc))
        item = {"x": x.to_str(big_o=False), "y": y.to_str(big_o=False)}
        if b.id is not None:
            item["label"] = b.id
        doc["branches"].append(item)
    if trunc is not None:
        doc["truncation"] = trunc
    if f is not None:
        doc["polynomial"] = str(f)
    return json.dumps(doc)


def _derived_from(f: BivariatePolynomial, spec: CurveSpec) -> bool:
    try:
        again = curve_from_polynomial(f, spec.truncation)
    except Exception:
        return False
    return again == spec


def format_series(s: PowerSeries) -> str:
    return s.to_str(big_o=False)


__all__ = [
    "CurveSpec",
    "curve_from_branches",
    "curve_from_polynomial",
    "format_rational",
    "load_curve",
    "parse_parametrization",
    "parse_polynomial",
    "parse_series",
    "save_curve",
]
