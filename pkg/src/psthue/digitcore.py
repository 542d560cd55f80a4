"""Binary digit functions: s, s_lambda, s_{mu,lambda}, Thue-Morse and e(x)."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# above this, numpy int64 lanes cannot hold the argument
FAST_LIMIT = 1 << 63


@dataclass(frozen=True)
class DigitWindow:
    """Digit positions ``mu, ..., lam - 1``."""

    mu: int
    lam: int

    def __post_init__(self):
        if not 0 <= self.mu <= self.lam:
            raise ValueError(f"need 0 <= mu <= lambda, got mu={self.mu}, lambda={self.lam}")


@dataclass(frozen=True)
class Word:
    """A binary block ``(w_0, ..., w_{L-1})``."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        object.__setattr__(self, "bits", bits)
        if not 1 <= len(bits) <= 32:
            raise ValueError(f"word length must be in [1, 32], got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("word letters must be 0 or 1")

    @classmethod
    def parse(cls, text: str) -> "Word":
        return cls(tuple(int(ch) for ch in text.strip()))

    @classmethod
    def from_code(cls, code: int, L: int) -> "Word":
        return cls(tuple((code >> (L - 1 - k)) & 1 for k in range(L)))

    @property
    def L(self) -> int:
        return len(self.bits)

    @property
    def code(self) -> int:
        """Integer with ``w_0`` as the most significant bit."""
        c = 0
        for b in self.bits:
            c = (c << 1) | b
        return c

    def __str__(self):
        return "".join(map(str, self.bits))


def all_words(L: int) -> list[Word]:
    return [Word.from_code(c, L) for c in range(1 << L)]


def sum_digits(n: int) -> int:
    """Number of 1s in the binary expansion of ``n``."""
    n = int(n)
    if n < 0:
        raise ValueError("sum_digits needs n >= 0")
    return n.bit_count()


def truncated_sum_digits(n: int, lam: int) -> int:
    """``s_lambda(n)``: ones among the lowest ``lam`` digits."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return (int(n) & ((1 << lam) - 1)).bit_count()


def sum_digits_window(n: int, w: DigitWindow) -> int:
    """``s_{mu,lambda}(n) = s_lambda(n) - s_mu(n)``; 2**lambda periodic in ``n``."""
    n = int(n)
    if n < 0:
        raise ValueError("sum_digits_window needs n >= 0")
    return ((n & ((1 << w.lam) - 1)) >> w.mu).bit_count()


def thue_morse(n: int) -> int:
    return sum_digits(n) & 1


def popcount_array(a) -> np.ndarray:
    """Elementwise ``s`` on a nonnegative integer array (int64/uint64 lanes)."""
    a = np.asarray(a)
    if a.dtype == object:
        return np.array([sum_digits(v) for v in a.ravel()], dtype=np.int64).reshape(a.shape)
    return np.bitwise_count(a.astype(np.uint64, copy=False)).astype(np.int64)


def thue_morse_array(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        return np.array([thue_morse(v) for v in a.ravel()], dtype=np.uint8).reshape(a.shape)
    return (np.bitwise_count(a.astype(np.uint64, copy=False)) & 1).astype(np.uint8)


def thue_morse_prefix(n: int) -> np.ndarray:
    """``t_0, ..., t_{n-1}`` as uint8."""
    return thue_morse_array(np.arange(n, dtype=np.int64))


def frac(x) -> Fraction | float:
    """Fractional part, exact for ``Fraction``/``int`` input."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x) - math.floor(x)
    return x - math.floor(x)


_QUARTER_TURNS = (1 + 0j, 1j, -1 + 0j, -1j)


def e_frac(x) -> complex:
    """``e(x) = exp(2 pi i x)``, evaluated from the fractional part of ``x``."""
    f = frac(x)
    if isinstance(f, Fraction) and 4 % f.denominator == 0:
        return _QUARTER_TURNS[int(f * 4)]
    return cmath.exp(2j * math.pi * float(f))


def e_dyadic(num: int, lam: int) -> complex:
    """``e(num / 2**lam)`` from the exact numerator reduced mod ``2**lam``."""
    return e_frac(Fraction(num % (1 << lam), 1 << lam))


def nu2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    n = int(n)
    if n == 0:
        raise ValueError("nu2(0) is undefined")
    return (n & -n).bit_length() - 1
