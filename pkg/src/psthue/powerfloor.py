"""Exact floor of n**c and the local linearisation of n**c by Beatty sequences."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import iv

from . import realnum
from .realnum import PrecisionExhausted, RealExpr

__all__ = [
    "ExponentSpec",
    "PrecisionExhausted",
    "Segment",
    "iroot",
    "floor_power",
    "floor_power_range",
    "linearize_segment",
    "linearization_mismatch_count",
    "mismatch_bound",
]


def iroot(x: int, k: int) -> int:
    """Largest integer ``m`` with ``m**k <= x``."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    if x.bit_length() <= k:
        return 1
    # float seed, then Newton from above
    try:
        m = int(math.exp(math.log(x) / k)) + 2
    except OverflowError:
        m = 1 << (x.bit_length() // k + 1)
    if m**k <= x:
        m = 1 << (x.bit_length() // k + 1)
    while True:
        nxt = ((k - 1) * m + x // m ** (k - 1)) // k
        if nxt >= m:
            break
        m = nxt
    while m**k > x:
        m -= 1
    while (m + 1) ** k <= x:
        m += 1
    return m


@dataclass(frozen=True)
class ExponentSpec:
    """The exponent ``c`` of ``n -> floor(n**c)``.

    ``kind == "rational"``: ``c = p/q`` exactly (reduced).
    ``kind == "real"``: ``c`` given by ``digits``, a decimal literal or an
    expression like ``"sqrt(2)"``, evaluated on a precision ladder from
    ``start_prec`` doubling up to ``max_prec`` bits.
    """

    kind: str
    p: int = 0
    q: int = 1
    digits: str = ""
    start_prec: int = realnum.START_PREC
    max_prec: int = realnum.MAX_PREC
    _parsed: RealExpr | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == "rational":
            if self.q < 1:
                raise ValueError("denominator must be positive")
            g = math.gcd(self.p, self.q)
            if g != 1:
                object.__setattr__(self, "p", self.p // g)
                object.__setattr__(self, "q", self.q // g)
            c = Fraction(self.p, self.q)
            if not 1 < c < 2:
                raise ValueError(f"need 1 < c < 2, got {c}")
        elif self.kind == "real":
            object.__setattr__(self, "_parsed", RealExpr(self.digits))
            lo, hi = self._expr().enclosure(64)
            if not (lo > 1 and hi < 2):
                raise ValueError(f"need 1 < c < 2, got {self.digits}")
            if self.start_prec < 2 or self.max_prec < self.start_prec:
                raise ValueError("bad precision ladder")
        else:
            raise ValueError(f"unknown exponent kind {self.kind!r}")

    @classmethod
    def rational(cls, p: int, q: int) -> "ExponentSpec":
        return cls("rational", p=p, q=q)

    @classmethod
    def real(cls, digits: str, **kw) -> "ExponentSpec":
        return cls("real", digits=str(digits), **kw)

    @classmethod
    def parse(cls, text: str) -> "ExponentSpec":
        """``"7/5"`` is rational; anything else (``"1.4"``, ``"sqrt(2)"``) is real."""
        text = text.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            if num.strip().isdigit() and den.strip().isdigit():
                return cls.rational(int(num), int(den))
        return cls.real(text)

    def _expr(self) -> RealExpr:
        return self._parsed

    def exact_value(self) -> Fraction | None:
        if self.kind == "rational":
            return Fraction(self.p, self.q)
        return self._expr().exact()

    def interval(self, prec: int):
        """mpmath interval enclosing ``c``; the caller has set ``iv.prec = prec``."""
        if self.kind == "rational":
            return iv.mpf(self.p) / self.q
        return self._expr().interval()

    def __float__(self):
        if self.kind == "rational":
            return self.p / self.q
        return float(self._expr())

    def __str__(self):
        return f"{self.p}/{self.q}" if self.kind == "rational" else self.digits


def _power_enclosure(n: int, c: ExponentSpec, prec: int) -> tuple[Fraction, Fraction]:
    old = iv.prec
    iv.prec = prec
    try:
        v = iv.exp(c.interval(prec) * iv.log(iv.mpf(n)))
    finally:
        iv.prec = old
    lo, hi = v._mpi_
    return realnum._mpf_to_fraction(lo), realnum._mpf_to_fraction(hi)


def _exact_power_hit(n: int, c: Fraction, m: int) -> bool:
    """True iff ``n**c == m`` exactly, for rational ``c``."""
    P, Q = c.numerator, c.denominator
    if n.bit_length() <= Q and n > 1:
        # only perfect Q-th powers can hit, and 2**Q > n rules those out
        return False
    k = iroot(n, Q)
    return k**Q == n and k**P == m


def _floor_power_real(n: int, c: ExponentSpec) -> int:
    exact = c.exact_value()

    def attempt(prec):
        lo, hi = _power_enclosure(n, c, prec)
        a, b = math.floor(lo), math.floor(hi)
        if a == b:
            return a
        if exact is not None and b == a + 1 and _exact_power_hit(n, exact, b):
            return b
        return None

    return realnum.ladder(attempt, c.start_prec, c.max_prec)


def floor_power(n: int, c: ExponentSpec) -> int:
    """``floor(n**c)``, exactly."""
    n = int(n)
    if n < 0:
        raise ValueError("floor_power needs n >= 0")
    if n < 2:
        return n
    if c.kind == "rational":
        return iroot(n**c.p, c.q)
    return _floor_power_real(n, c)


def floor_power_range(start: int, stop: int, c: ExponentSpec) -> np.ndarray:
    """``floor(n**c)`` for ``start <= n < stop`` as int64.

    A float64 estimate is accepted wherever it sits safely away from an
    integer; the remaining entries are recomputed exactly.
    """
    if start < 0 or stop < start:
        raise ValueError("need 0 <= start <= stop")
    n = np.arange(start, stop, dtype=np.int64)
    if stop <= start:
        return n
    if stop >= 1 << 53:
        raise ValueError("floor_power_range is limited to n < 2**53")
    nf = n.astype(np.float64)
    y = np.power(nf, float(c))
    if np.any(y >= 2.0**62):
        raise ValueError("floor(n**c) exceeds int64 range")
    # rel. error of c as float plus pow rounding is < (ln n + 1) 2**-52; keep 4x margin
    with np.errstate(divide="ignore"):
        tol = y * (np.log(np.maximum(nf, 1.0)) + 4.0) * 2.0**-50 + 1e-300
    fl = np.floor(y)
    fr = y - fl
    out = fl.astype(np.int64)
    risky = (fr < tol) | (fr > 1.0 - tol) | (n < 2)
    for k in np.flatnonzero(risky):
        out[k] = floor_power(int(n[k]), c)
    return out


@dataclass(frozen=True)
class Segment:
    """Linear model ``n*alpha + beta`` of ``f(x) = x**c`` on ``[a, a+K]``.

    ``alpha`` and ``beta`` are high-precision rationals; ``B`` bounds ``|f''|``
    on the segment (``f''`` is decreasing for ``1 < c < 2``, so its value at
    the left endpoint serves).
    """

    a: int
    K: int
    alpha: Fraction
    beta: Fraction
    B: float


def linearize_segment(a: int, K: int, c: ExponentSpec, prec: int = 256) -> Segment:
    if a < 1 or K < 0:
        raise ValueError("need a >= 1 and K >= 0")
    old = iv.prec
    iv.prec = prec
    try:
        ci = c.interval(prec)
        fa = iv.exp(ci * iv.log(iv.mpf(a)))
        fprime = ci * fa / a
        fsecond = ci * (ci - 1) * fa / (a * a)
    finally:
        iv.prec = old
    # upper end of the enclosure of f'(a) keeps alpha inside f'([a, a+K])
    alpha = realnum._mpf_to_fraction(fprime._mpi_[1])
    fa_mid = (realnum._mpf_to_fraction(fa._mpi_[0]) + realnum._mpf_to_fraction(fa._mpi_[1])) / 2
    beta = fa_mid - a * alpha
    B = float(realnum._mpf_to_fraction(fsecond._mpi_[1]))
    return Segment(a=a, K=K, alpha=alpha, beta=beta, B=B)


def linearization_mismatch_count(seg: Segment, c: ExponentSpec) -> int:
    """``#{n in (a, a+K] : floor(n**c) != floor(n*alpha + beta)}``."""
    count = 0
    for n in range(seg.a + 1, seg.a + seg.K + 1):
        if floor_power(n, c) != math.floor(n * seg.alpha + seg.beta):
            count += 1
    return count


def mismatch_bound(seg: Segment) -> float:
    """``2 B K**3 + K D_K(alpha)``."""
    from .beatty import discrepancy

    if seg.K == 0:
        return 0.0
    return 2 * seg.B * seg.K**3 + seg.K * float(discrepancy(seg.alpha, seg.K))
