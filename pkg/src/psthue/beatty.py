"""Beatty sequences, nα-discrepancy and Farey approximation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import realnum
from .digitcore import e_frac, nu2
from .realnum import Real, RealLike, as_real


@dataclass(frozen=True)
class BeattyParams:
    """The sequence ``n -> floor(n*alpha + beta)``."""

    alpha: Real
    beta: Real = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_real(self.alpha))
        object.__setattr__(self, "beta", as_real(self.beta))


@dataclass(frozen=True)
class FareyApprox:
    """``p/q`` assigned to ``alpha/2**mu`` by the Farey dissection of order ``2**(mu+sigma)``."""

    p: int
    q: int
    sigma: int
    mu: int

    def error(self, alpha: RealLike) -> Fraction | float:
        """``|q*alpha - p*2**mu|``."""
        a = as_real(alpha)
        if isinstance(a, Fraction):
            return abs(self.q * a - self.p * (1 << self.mu))
        lo, hi = a.enclosure(512)
        return float(abs(self.q * (lo + hi) / 2 - self.p * (1 << self.mu)))


# ---------------------------------------------------------------------------
# Beatty terms


def beatty_term(n: int, bp: BeattyParams) -> int:
    """``floor(n*alpha + beta)``, exact (precision ladder for irrationals)."""
    a, b = bp.alpha, bp.beta
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return math.floor(n * a + b)

    def attempt(prec):
        alo, ahi = realnum.enclosure(a, prec)
        blo, bhi = realnum.enclosure(b, prec)
        if n >= 0:
            lo, hi = n * alo + blo, n * ahi + bhi
        else:
            lo, hi = n * ahi + blo, n * alo + bhi
        x, y = math.floor(lo), math.floor(hi)
        return x if x == y else None

    return realnum.ladder(attempt)


def _rational_floor_array(n: np.ndarray, a: Fraction, b: Fraction) -> np.ndarray:
    # floor((n*pa*qb + pb*qa) / (qa*qb))
    pa, qa, pb, qb = a.numerator, a.denominator, b.numerator, b.denominator
    big = max(abs(int(n.min())), abs(int(n.max())), 1) * abs(pa) * qb + abs(pb) * qa
    if big < 1 << 62 and qa * qb < 1 << 62:
        return (n * (pa * qb) + pb * qa) // (qa * qb)
    num = [int(k) * pa * qb + pb * qa for k in n.tolist()]
    den = qa * qb
    out = [v // den for v in num]
    if max(abs(out[0]), abs(out[-1])) < 1 << 62:
        return np.array(out, dtype=np.int64)
    return np.array(out, dtype=object)


def beatty_terms(start: int, stop: int, bp: BeattyParams) -> np.ndarray:
    """``floor(n*alpha + beta)`` for ``start <= n < stop``."""
    n = np.arange(start, stop, dtype=np.int64)
    if stop <= start:
        return n
    a, b = bp.alpha, bp.beta
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return _rational_floor_array(n, a, b)
    # bracket with a rational enclosure, settle the disagreements one by one
    alo, ahi = realnum.enclosure(a, 256)
    blo, bhi = realnum.enclosure(b, 256)
    lo = _rational_floor_array(n, alo, blo)
    hi = _rational_floor_array(n, ahi, bhi)
    if start < 0:
        lo2 = _rational_floor_array(n, ahi, blo)
        hi2 = _rational_floor_array(n, alo, bhi)
        lo = np.minimum(lo, lo2)
        hi = np.maximum(hi, hi2)
    out = lo.copy()
    for k in np.flatnonzero(lo != hi):
        out[k] = beatty_term(int(n[k]), bp)
    return out


# ---------------------------------------------------------------------------
# Elementary facts about floor, nearest integer and distance to Z


def nearest_int(x) -> int:
    """``<x> = floor(x + 1/2)``."""
    return math.floor(x + Fraction(1, 2))


def dist_to_int(x):
    """``||x|| = min_n |x - n|``."""
    f = x - math.floor(x)
    return min(f, 1 - f)


def fractional_part_facts(a: Fraction, b: Fraction, n: int, eps: Fraction) -> dict[str, bool | None]:
    """Check the three elementary floor/nearest-integer facts for one input.

    Each entry is ``None`` when its hypothesis fails, else whether the
    conclusion holds.
    """
    out: dict[str, bool | None] = {}
    if dist_to_int(a) < eps <= dist_to_int(b):
        out["floor_split"] = math.floor(a + b) == nearest_int(a) + math.floor(b)
    else:
        out["floor_split"] = None
    out["dist_scaling"] = dist_to_int(n * a) <= n * dist_to_int(a)
    if dist_to_int(a) < eps and 2 * n * eps < 1:
        out["nearest_scaling"] = nearest_int(n * a) == n * nearest_int(a)
    else:
        out["nearest_scaling"] = None
    return out


# ---------------------------------------------------------------------------
# Discrepancy


def _disc_from_counts(values: np.ndarray, counts: np.ndarray, q: int, N: int) -> Fraction:
    """Extreme discrepancy of a multiset of points ``values/q`` on the circle.

    ``values`` are sorted distinct integers in ``[0, q)``.  Every interval is
    measured in units of ``1/(N q)``: a closed arc from value ``i`` to value
    ``j`` (cyclically) has excess ``A_j - B_i`` and an open arc has deficit
    ``A'_j - B'_i``; both maxima separate into a max minus a min.
    """
    v = values.astype(object) if q * N >= 1 << 62 else values.astype(np.int64)
    c = counts.astype(v.dtype)
    C = np.concatenate([np.zeros(1, dtype=v.dtype), np.cumsum(c)])
    closed = (C[1:] * q - v * N).max() - (C[:-1] * q - v * N).min()
    opened = (v * N - C[:-1] * q).max() - (v * N - C[1:] * q).min()
    return Fraction(int(max(closed, opened)), N * q)


def _disc_rational(alpha: Fraction, N: int) -> Fraction:
    p, q = alpha.numerator, alpha.denominator
    if q <= 4 * N + 64:
        hist = np.bincount((np.arange(N, dtype=np.int64) * (p % q)) % q, minlength=q)
        vals = np.flatnonzero(hist)
        return _disc_from_counts(vals, hist[vals], q, N)
    if q < 1 << 31:
        pts = (np.arange(N, dtype=np.int64) * (p % q)) % q
    else:
        pts = np.array([(k * p) % q for k in range(N)], dtype=object)
    vals, counts = np.unique(pts, return_counts=True)
    return _disc_from_counts(vals, counts, q, N)


def _disc_float(alpha: float, N: int) -> float:
    # alpha mod 1 is exact in binary floating point and keeps n*alpha small
    alpha = math.fmod(alpha, 1.0)
    pts = np.sort(np.mod(np.arange(N, dtype=np.float64) * alpha, 1.0))
    vals, counts = np.unique(pts, return_counts=True)
    C = np.concatenate([[0], np.cumsum(counts)]) / N
    closed = (C[1:] - vals).max() - (C[:-1] - vals).min()
    opened = (vals - C[:-1]).max() - (vals - C[1:]).min()
    return float(max(closed, opened))


def discrepancy(alpha, N: int) -> Fraction | float:
    """``D_N(alpha)`` of ``{n*alpha mod 1 : n < N}`` over arbitrarily placed intervals.

    Exact ``Fraction`` for rational ``alpha`` (ints, Fractions, and decimal
    strings); a numpy float64 computation for ``float`` input.  Irrational
    expressions are replaced by a 256-bit rational approximation.
    """
    if N < 1:
        raise ValueError("discrepancy needs N >= 1")
    if isinstance(alpha, float):
        return _disc_float(alpha, N)
    a = as_real(alpha)
    if not isinstance(a, Fraction):
        return float(_disc_rational(realnum.approx_fraction(a), N))
    return _disc_rational(a, N)


# ---------------------------------------------------------------------------
# Interval classes


def interval_class_count(J: tuple[int, int], bp: BeattyParams, t: int, T: int, k: int, K: int) -> int:
    """``#{n in [J0, J1) : t/T <= {n a + b} < (t+1)/T, floor(n a + b) = k mod K}``."""
    if not (0 <= t < T and 0 <= k < K):
        raise ValueError("need 0 <= t < T and 0 <= k < K")
    start, stop = J
    a, b = bp.alpha, bp.beta
    if not (isinstance(a, Fraction) and isinstance(b, Fraction)):
        a, b = realnum.approx_fraction(a, 512), realnum.approx_fraction(b, 512)
    den = a.denominator * b.denominator
    count = 0
    for n in range(start, stop):
        num = n * a.numerator * b.denominator + b.numerator * a.denominator
        m, rem = divmod(num, den)
        # t/T <= rem/den < (t+1)/T
        if t * den <= T * rem < (t + 1) * den and m % K == k:
            count += 1
    return count


def interval_class_bound(N: int, bp: BeattyParams, K: int) -> float:
    """``N * D_N(alpha/K)``, the deviation allowance with constant 1."""
    if N == 0:
        return 0.0
    a = bp.alpha
    if isinstance(a, Fraction):
        return float(N * discrepancy(a / K, N))
    return N * float(discrepancy(realnum.approx_fraction(a) / K, N))


# ---------------------------------------------------------------------------
# Mean discrepancy


def log_plus(x: float) -> float:
    return max(1.0, math.log(x)) if x > 0 else 1.0


@dataclass(frozen=True)
class MeanDiscrepancyReport:
    mu: int
    N: int
    sum: Fraction
    normalized: float
    geometric_m: int | None = None
    geometric_rho: int | None = None
    geometric_sum: float | None = None
    geometric_shape: float | None = None


def geometric_sum_stat(N: int, m: int, rho: int) -> tuple[float, float]:
    """``sum_{k<2^rho} |sum_{j<N} e(j m k / 2^rho)|`` and ``2^{nu2(m)} N + 2^rho log+ N``."""
    if m == 0:
        raise ValueError("m must be nonzero")
    M = 1 << rho
    k = np.arange(M, dtype=np.int64)
    theta = ((k * (m % M)) % M) / M
    s = np.sin(np.pi * theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        mod = np.abs(np.sin(np.pi * N * theta) / s)
    mod[theta == 0] = N
    shape = 2.0 ** nu2(m) * N + M * log_plus(N)
    return float(mod.sum()), shape


def mean_discrepancy_profile(mu: int, N: int, m: int | None = None, rho: int | None = None) -> MeanDiscrepancyReport:
    """``sum_{d < 2^mu} D_N(d/2^mu)`` and its ratio to ``(N + 2^mu)/N (log+ N)^2``."""
    if mu < 0 or N < 1:
        raise ValueError("need mu >= 0 and N >= 1")
    if mu > 16 or N > 1 << 16:
        raise ValueError("desk-scale limits: mu <= 16, N <= 2**16")
    q = 1 << mu
    total = Fraction(0)
    n = np.arange(N, dtype=np.int64)
    for d in range(q):
        hist = np.bincount((n * d) & (q - 1), minlength=q)
        vals = np.flatnonzero(hist)
        total += _disc_from_counts(vals, hist[vals], q, N)
    normalized = float(total) * N / ((N + q) * log_plus(N) ** 2)
    rep = MeanDiscrepancyReport(mu=mu, N=N, sum=total, normalized=normalized)
    if m is not None:
        r = mu if rho is None else rho
        gs, shape = geometric_sum_stat(N, m, r)
        rep = MeanDiscrepancyReport(mu, N, total, normalized, m, r, gs, shape)
    return rep


# ---------------------------------------------------------------------------
# Farey series


def farey_sequence(n: int) -> list[Fraction]:
    """Reduced fractions in ``[0, 1]`` with denominator at most ``n``, ascending."""
    if n < 1:
        raise ValueError("Farey order must be >= 1")
    a, b, c, d = 0, 1, 1, n
    out = [Fraction(0)]
    while c <= n:
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        out.append(Fraction(a, b))
    return out


def farey_neighbors(n: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Adjacent pairs ``((a, b), (c, d))`` of the Farey series of order ``n``."""
    if not 1 <= n <= 1000:
        raise ValueError("farey_neighbors supports 1 <= n <= 1000")
    seq = farey_sequence(n)
    return [((x.numerator, x.denominator), (y.numerator, y.denominator)) for x, y in zip(seq, seq[1:])]


def _farey_bracket(theta: Fraction, n: int) -> tuple[int, int, int, int]:
    """Neighbours ``a/b <= theta < c/d`` in the Farey series of order ``n``.

    Stern-Brocot descent where each run of same-side moves is taken in one
    step, so the work is proportional to the number of partial quotients.
    """
    k = math.floor(theta)
    a, b, c, d = k, 1, k + 1, 1
    while b + d <= n:
        # move right: lower <- (a + t c)/(b + t d) while it stays <= theta
        num, den = theta * b - a, c - theta * d
        t = math.floor(num / den)
        t = min(t, (n - b) // d)
        if t > 0:
            a, b = a + t * c, b + t * d
            continue
        # move left: upper <- (c + t a)/(d + t b) while theta stays below it
        num, den = c - theta * d, theta * b - a
        if den == 0:
            t = (n - d) // b
        else:
            t = math.ceil(num / den) - 1
            t = min(t, (n - d) // b)
        if t <= 0:
            break
        c, d = c + t * a, d + t * b
    return a, b, c, d


def _farey_choice(theta: Fraction, n: int) -> tuple[int, int, int, int, bool]:
    a, b, c, d = _farey_bracket(theta, n)
    return a, b, c, d, theta < Fraction(a + c, b + d)


def farey_approx_scaled(alpha: RealLike, mu: int, sigma: int) -> FareyApprox:
    """Assign ``p(alpha)/q(alpha)`` from the Farey series of order ``2**(mu+sigma)``.

    With neighbours ``a/b <= alpha/2**mu < c/d``, the left one is taken when
    ``alpha/2**mu`` lies below the mediant, the right one otherwise.  Then
    ``|q*alpha - p*2**mu| < 2**-sigma``.
    """
    if sigma < 1 or mu < 0:
        raise ValueError("need sigma >= 1 and mu >= 0")
    n = 1 << (mu + sigma)
    a_ = as_real(alpha)
    if isinstance(a_, Fraction):
        a, b, c, d, left = _farey_choice(a_ / (1 << mu), n)
    else:
        def attempt(prec):
            lo, hi = a_.enclosure(prec)
            x = _farey_choice(lo / (1 << mu), n)
            return x if x == _farey_choice(hi / (1 << mu), n) else None

        a, b, c, d, left = realnum.ladder(attempt)
    p, q = (a, b) if left else (c, d)
    return FareyApprox(p=p, q=q, sigma=sigma, mu=mu)
