"""Exact and certified real numbers.

Rationals (``int``, ``Fraction``, ``float`` taken at its exact binary value)
are handled exactly.  Irrational constants are given as small expressions
such as ``"sqrt(2)"`` or ``"(sqrt(5)-1)/2"`` and evaluated with mpmath
interval arithmetic.  Anything that has to be decided about such a number
(a floor, a comparison) goes through :func:`ladder`, which retries at doubling
precision until the interval answer is unambiguous.
"""
from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Callable, TypeVar, Union

from mpmath import iv, libmp

START_PREC = 128
MAX_PREC = 4096

T = TypeVar("T")


class PrecisionExhausted(ArithmeticError):
    """The precision ladder reached its cap without settling the answer."""


_FUNCS = {
    "sqrt": iv.sqrt,
    "exp": iv.exp,
    "log": iv.log,
    "sin": iv.sin,
    "cos": iv.cos,
}
_CONSTS = {"pi": lambda: iv.pi, "e": lambda: iv.e}


class RealExpr:
    """An irrational (or at least not obviously rational) real constant."""

    def __init__(self, text: str):
        self.text = text.strip()
        tree = ast.parse(self.text, mode="eval")
        self._tree = tree.body
        self._check(self._tree)

    def _check(self, node):
        if isinstance(node, ast.BinOp):
            if not isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)):
                raise ValueError(f"unsupported operator in {self.text!r}")
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.UAdd, ast.USub)):
                raise ValueError(f"unsupported operator in {self.text!r}")
            self._check(node.operand)
        elif isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)) or isinstance(node.value, bool):
                raise ValueError(f"bad literal in {self.text!r}")
        elif isinstance(node, ast.Name):
            if node.id not in _CONSTS:
                raise ValueError(f"unknown name {node.id!r}")
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS:
                raise ValueError(f"unknown function in {self.text!r}")
            if len(node.args) != 1 or node.keywords:
                raise ValueError(f"functions take one argument: {self.text!r}")
            self._check(node.args[0])
        else:
            raise ValueError(f"cannot parse real expression {self.text!r}")

    def _eval(self, node):
        if isinstance(node, ast.BinOp):
            a, b = self._eval(node.left), self._eval(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
            return a**b
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Constant):
            # literal text keeps "1.4" decimal-exact inside the enclosure
            return iv.mpf(ast.get_source_segment(self.text, node))
        if isinstance(node, ast.Name):
            return _CONSTS[node.id]()
        return _FUNCS[node.func.id](self._eval(node.args[0]))

    def exact(self) -> Fraction | None:
        """Exact value when the expression only uses rational operations."""
        try:
            return _exact(self._tree, self.text)
        except _NotRational:
            return None

    def interval(self):
        """mpmath interval at the current ``iv.prec``."""
        return self._eval(self._tree)

    def enclosure(self, prec: int) -> tuple[Fraction, Fraction]:
        old = iv.prec
        iv.prec = prec
        try:
            v = self._eval(self._tree)
        finally:
            iv.prec = old
        lo, hi = v._mpi_
        return _mpf_to_fraction(lo), _mpf_to_fraction(hi)

    def __float__(self):
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"RealExpr({self.text!r})"

    def __str__(self):
        return self.text

    def __eq__(self, other):
        return isinstance(other, RealExpr) and other.text == self.text

    def __hash__(self):
        return hash(self.text)


class _NotRational(Exception):
    pass


def _exact(node, text) -> Fraction:
    if isinstance(node, ast.BinOp):
        a, b = _exact(node.left, text), _exact(node.right, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        if b.denominator == 1 and abs(b.numerator) <= 64:
            return a ** int(b)
        raise _NotRational
    if isinstance(node, ast.UnaryOp):
        v = _exact(node.operand, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Constant):
        return Fraction(ast.get_source_segment(text, node))
    raise _NotRational


def _mpf_to_fraction(v) -> Fraction:
    p, q = libmp.to_rational(v)
    return Fraction(int(p), int(q))


Real = Union[Fraction, RealExpr]
RealLike = Union[int, float, Fraction, str, RealExpr]


def as_real(x: RealLike) -> Real:
    """Normalise to ``Fraction`` when the value is rational, else ``RealExpr``."""
    if isinstance(x, RealExpr):
        v = x.exact()
        return x if v is None else v
    if isinstance(x, bool):
        raise TypeError("bool is not a real number")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("real numbers must be finite")
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            return as_real(RealExpr(x))
    # mpmath mpf and friends
    if hasattr(x, "_mpf_"):
        return _mpf_to_fraction(x._mpf_)
    raise TypeError(f"cannot interpret {x!r} as a real number")


def enclosure(x: Real, prec: int) -> tuple[Fraction, Fraction]:
    if isinstance(x, Fraction):
        return x, x
    return x.enclosure(prec)


def ladder(attempt: Callable[[int], T | None], start: int = START_PREC,
           cap: int = MAX_PREC) -> T:
    """Call ``attempt(prec)`` at doubling precision until it returns non-None."""
    prec = start
    while prec <= cap:
        out = attempt(prec)
        if out is not None:
            return out
        prec *= 2
    raise PrecisionExhausted(f"unresolved at {cap} bits")


def floor_real(x: Real, *, start: int = START_PREC, cap: int = MAX_PREC) -> int:
    if isinstance(x, Fraction):
        return math.floor(x)

    def attempt(prec):
        lo, hi = x.enclosure(prec)
        a, b = math.floor(lo), math.floor(hi)
        return a if a == b else None

    return ladder(attempt, start, cap)


def to_float(x: Real) -> float:
    return float(x)


def approx_fraction(x: Real, prec: int = 256) -> Fraction:
    """A rational within ``2**-prec`` (relative) of ``x``; ``x`` itself if rational."""
    if isinstance(x, Fraction):
        return x
    lo, hi = x.enclosure(prec)
    return (lo + hi) / 2
