"""Small-scale evaluation of the digit exponential sums and checkers for the auxiliary lemmas."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .beatty import BeattyParams, beatty_terms
from .realnum import RealLike, as_real
from . import realnum

ND_BUDGET = 10**7
WORK_BUDGET = 2 * 10**8


class BudgetExceeded(RuntimeError):
    """The requested evaluation is larger than the desk-scale budget."""


@dataclass(frozen=True)
class SumParams:
    """Parameters of the sum over ``D <= d < 2D`` (or ``alpha`` in ``[D, 2D]``).

    ``j_cap``: shifts ``j < j_cap`` are scanned (default ``2**(ceil(log2(N D)) + 4)``).
    ``j_samples``: if set, only that many seeded random ``j < j_cap`` (plus ``j = 0``)
    are used instead of all of them.  ``exact=True`` overrides both and scans
    ``j < 2P`` with ``P`` the first power of two above every ``(n + l) d``,
    which realises the maximum over all ``j >= 0``.
    """

    N: int
    D: RealLike
    xi: float = 0.0
    a: tuple[int, ...] = (1,)
    j_cap: int | None = None
    j_samples: int | None = None
    exact: bool = False
    seed: int = 0

    def __post_init__(self):
        D = as_real(self.D)
        object.__setattr__(self, "D", D if isinstance(D, Fraction) else realnum.approx_fraction(D))
        a = tuple(int(v) for v in self.a)
        object.__setattr__(self, "a", a)
        if self.N < 1 or self.D < 1:
            raise ValueError("need N >= 1 and D >= 1")
        if not a or a[0] != 1 or any(v not in (0, 1) for v in a):
            raise ValueError("a must be a 0/1 tuple with a_0 = 1")

    @property
    def L(self) -> int:
        return len(self.a)

    def d_values(self) -> range:
        return range(math.ceil(self.D), math.ceil(2 * self.D))

    def default_cap(self) -> int:
        return 1 << (math.ceil(math.log2(self.N * float(self.D))) + 4)

    def exact_cap(self, d_max: int) -> int:
        top = (self.N + self.L - 2) * d_max
        return 2 << max(top, 1).bit_length()


@dataclass(frozen=True)
class S1Report:
    value: float
    normalized: float
    label: str
    j_cap: int
    j_count: int
    per_d: list[tuple[float, float]] = field(default_factory=list)


def _j_values(p: SumParams, d_max: int) -> tuple[np.ndarray, int, bool]:
    exact_cap = p.exact_cap(d_max)
    if p.exact:
        return np.arange(exact_cap, dtype=np.int64), exact_cap, True
    cap = p.default_cap() if p.j_cap is None else p.j_cap
    if cap < 1:
        raise ValueError("j_cap must be positive")
    if p.j_samples is None:
        return np.arange(cap, dtype=np.int64), cap, cap >= exact_cap
    rng = np.random.default_rng(p.seed)
    js = np.unique(np.concatenate([[0], rng.integers(0, cap, size=p.j_samples)]))
    return js.astype(np.int64), cap, False


def _phase_sum_max(arg_rows: list[np.ndarray], offsets: np.ndarray, twist: np.ndarray) -> float:
    """``max_j |sum_n (-1)**(sum_l s(arg_l[n] + j)) twist[n]|`` over ``j`` in ``offsets``."""
    N = len(twist)
    best = 0.0
    step = max(1, 4_000_000 // max(N, 1))
    for k in range(0, len(offsets), step):
        J = offsets[k:k + step, None]
        par = np.zeros((len(J), N), dtype=np.uint8)
        for row in arg_rows:
            par ^= (np.bitwise_count((row[None, :] + J).astype(np.uint64)) & 1).astype(np.uint8)
        sums = (1.0 - 2.0 * par) @ twist
        best = max(best, float(np.max(np.abs(sums))))
    return best


def s1_direct(p: SumParams) -> S1Report:
    """``sum_{D <= d < 2D} max_j |sum_{n<N} e(1/2 sum_l a_l s((n+l) d + j)) e(n xi)|``."""
    ds = p.d_values()
    if p.N * float(p.D) > ND_BUDGET:
        raise BudgetExceeded(f"N*D = {p.N * float(p.D):.3g} exceeds {ND_BUDGET}")
    if len(ds) == 0:
        return S1Report(0.0, 0.0, "exact", 0, 0, [])
    js, cap, exact = _j_values(p, ds[-1])
    work = len(ds) * len(js) * p.N * sum(p.a)
    if work > WORK_BUDGET:
        raise BudgetExceeded(f"work {work:.3g} exceeds {WORK_BUDGET}")
    n = np.arange(p.N, dtype=np.int64)
    twist = np.exp(2j * np.pi * ((n * p.xi) % 1.0))
    per_d = []
    for d in ds:
        rows = [(n + ell) * d for ell, v in enumerate(p.a) if v]
        per_d.append((float(d), _phase_sum_max(rows, js, twist)))
    total = sum(v for _, v in per_d)
    label = "exact" if exact else "sampled-max lower bound"
    return S1Report(total, total / (p.N * float(p.D)), label, cap, len(js), per_d)


def s1_beatty_direct(p: SumParams, grid: int, beta_samples: int = 16) -> S1Report:
    """Midpoint rule over ``alpha`` in ``[D, 2D]`` of ``max_beta |sum_{n<N} e(1/2 sum_l a_l s(floor((n+l) alpha + beta))) e(n xi)|``.

    ``beta`` runs over ``t * j_cap / beta_samples`` for ``t < beta_samples``.
    """
    if grid < 1 or beta_samples < 1:
        raise ValueError("grid and beta_samples must be positive")
    if p.N * float(p.D) > ND_BUDGET:
        raise BudgetExceeded(f"N*D = {p.N * float(p.D):.3g} exceeds {ND_BUDGET}")
    work = grid * beta_samples * p.N * sum(p.a)
    if work > WORK_BUDGET:
        raise BudgetExceeded(f"work {work:.3g} exceeds {WORK_BUDGET}")
    cap = p.default_cap() if p.j_cap is None else p.j_cap
    D = p.D.limit_denominator(1024)
    n = np.arange(p.N, dtype=np.int64)
    twist = np.exp(2j * np.pi * ((n * p.xi) % 1.0))
    L = p.L
    per = []
    for k in range(grid):
        alpha = D + D * (2 * k + 1) / (2 * grid)
        best = 0.0
        for t in range(beta_samples):
            beta = Fraction(t * cap, beta_samples)
            m = beatty_terms(0, p.N + L - 1, BeattyParams(alpha, beta))
            par = np.zeros(p.N, dtype=np.uint8)
            for ell, v in enumerate(p.a):
                if v:
                    par ^= (np.bitwise_count(m[ell:ell + p.N].astype(np.uint64)) & 1).astype(np.uint8)
            best = max(best, abs(complex((1.0 - 2.0 * par) @ twist)))
        per.append((float(alpha), best))
    total = float(D) / grid * sum(v for _, v in per)
    return S1Report(total, total / (p.N * float(p.D)), "sampled-max lower bound", cap, beta_samples, per)


# ---------------------------------------------------------------------------
# Lemma checkers


@dataclass(frozen=True)
class VdcReport:
    lhs: float
    rhs: float
    rhs_imag: float
    holds: bool
    rhs_nonneg: bool


def vdc_verify(seq, K: int, R: int) -> VdcReport:
    """Van der Corput type inequality for ``a_n``, ``n < N``, with spacing ``K`` and range ``R``."""
    if K < 1 or R < 1:
        raise ValueError("need K >= 1 and R >= 1")
    a = np.asarray(seq, dtype=np.complex128)
    N = len(a)
    lhs = abs(a.sum()) ** 2
    acc = 0j
    for r in range(-R + 1, R):
        sh = K * r
        if abs(sh) >= N:
            continue
        # sum over n with n, n + sh both in [0, N)
        if sh >= 0:
            c = np.vdot(a[: N - sh], a[sh:])
        else:
            c = np.vdot(a[-sh:], a[: N + sh])
        acc += (1 - abs(r) / R) * c
    rhs = (N + K * (R - 1)) / R * acc
    tol = 1e-9
    return VdcReport(float(lhs), float(rhs.real), float(rhs.imag), bool(lhs <= rhs.real + tol),
                     bool(abs(rhs.imag) <= tol and rhs.real >= -tol))


@dataclass(frozen=True)
class CarryReport:
    count: int
    bound: float
    holds: bool


def _carry_flags(r: int, L: int, N: int, lam: int, bp: BeattyParams, start: int = 0) -> np.ndarray:
    """Flag ``n`` in ``[start, start+N)`` where some ``l < L`` has a digit-sum difference differing from its truncation."""
    flags = np.zeros(N, dtype=bool)
    if L == 0 or N == 0:
        return flags
    m = beatty_terms(start, start + N + L + r, bp)
    high = np.bitwise_count((m >> lam).astype(np.uint64)).astype(np.int64)
    # s(x) - s_lam(x) = s(x >> lam)
    for ell in range(L):
        flags |= high[ell + r: ell + r + N] != high[ell: ell + N]
    return flags


def carry_exceptions(r: int, L: int, N: int, lam: int, bp: BeattyParams, start: int = 0) -> CarryReport:
    if float(bp.alpha) <= 0 or float(bp.beta) < 0:
        raise ValueError("need alpha > 0 and beta >= 0")
    count = int(_carry_flags(r, L, N, lam, bp, start).sum())
    bound = (r + L) * (N * float(bp.alpha) / 2**lam + 2)
    return CarryReport(count, bound, count <= bound)


def carry_exceptions_prefix(r: int, L: int, N_max: int, lam: int, bp: BeattyParams) -> np.ndarray:
    """Exception counts for ``I = [0, N)``, every ``N <= N_max`` at once (index ``N``)."""
    flags = _carry_flags(r, L, N_max, lam, bp)
    return np.concatenate([[0], np.cumsum(flags)])


def correlation_residual(M: int, f, t: int) -> float:
    """``|(1/M) sum_n f(n+t) conj f(n) - sum_h |fhat(h)|^2 e(h t / M)|`` for ``M``-periodic ``f``."""
    f = np.asarray(f, dtype=np.complex128)
    if M < 1 or len(f) != M:
        raise ValueError("f must have length M >= 1")
    lhs = np.vdot(f, np.roll(f, -(t % M))) / M
    fhat = np.fft.fft(f) / M
    h = np.arange(M)
    rhs = np.sum(np.abs(fhat) ** 2 * np.exp(2j * np.pi * ((h * t) % M) / M))
    return float(abs(lhs - rhs))
