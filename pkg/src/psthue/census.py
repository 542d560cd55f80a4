"""Block counts of Thue-Morse along Beatty sequences, progressions and floor(n**c)."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import realnum
from .beatty import BeattyParams, beatty_terms
from .digitcore import Word, all_words, thue_morse_array
from .parallel import pmap, split_range
from .powerfloor import ExponentSpec, floor_power_range
from .realnum import RealLike, as_real

PS_LIMIT = 10**8
CHUNK = 1 << 20


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class FreqReport:
    L: int
    counts: dict[str, int]
    total: int
    deviations: dict[str, float]
    max_dev: float

    @classmethod
    def from_histogram(cls, L: int, hist) -> "FreqReport":
        hist = [int(v) for v in hist]
        if len(hist) != 1 << L:
            raise ValueError("histogram must have 2**L bins")
        total = sum(hist)
        words = all_words(L)
        counts = {str(w): hist[w.code] for w in words}
        target = 2.0**-L
        devs = {k: (abs(v / total - target) if total else 0.0) for k, v in counts.items()}
        return cls(L, counts, total, devs, max(devs.values()))

    def rows(self) -> list[dict]:
        return [{"word": k, "count": v, "deviation": self.deviations[k]} for k, v in self.counts.items()]


@dataclass(frozen=True)
class SamplingPolicy:
    """Finite stand-in for the maxima over windows and shifts.

    Windows are ``[y, y + w)`` for ``y`` in ``y_values`` and ``w`` in
    ``window_lengths(x)`` (``round(f * x)`` for ``f`` in ``window_fracs``; the
    default is ``w = x`` only).  For progressions every residue ``j mod d`` is
    scanned (the count depends on ``j`` only through ``j mod d``).  For Beatty
    sequences ``beta`` runs over ``t * alpha / beta_samples``,
    ``t < beta_samples`` (the count depends on ``beta`` only through
    ``beta mod alpha``).  The deviation of a window of length ``w`` is taken
    against its own expected count ``w / (2**L d)``.
    """

    y_values: tuple[int, ...] = (0,)
    beta_samples: int = 16
    window_fracs: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "y_values", tuple(int(y) for y in self.y_values))
        object.__setattr__(self, "window_fracs", tuple(float(f) for f in self.window_fracs))
        if not self.y_values or min(self.y_values) < 0:
            raise ValueError("y_values must be nonempty and nonnegative")
        if self.beta_samples < 1:
            raise ValueError("beta_samples must be positive")
        if not self.window_fracs or not all(0 < f <= 1 for f in self.window_fracs):
            raise ValueError("window_fracs must be nonempty and in (0, 1]")

    def window_lengths(self, x: int) -> tuple[int, ...]:
        return tuple(sorted({max(1, round(f * x)) for f in self.window_fracs}))

    def describe(self) -> dict:
        windows = "z - y = x" if self.window_fracs == (1.0,) else f"z - y = f*x, f in {list(self.window_fracs)}"
        return {"windows": windows, "y_values": list(self.y_values),
                "j": "all residues mod d", "beta": f"t*alpha/{self.beta_samples}, t < {self.beta_samples}"}


@dataclass(frozen=True)
class AverageReport:
    x: int
    D: float
    per_d: list[tuple[float, float]]
    aggregate: float
    normalized: float
    sampling_policy: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Beatty and progression counts


def _ceil_real(v) -> int:
    v = as_real(v)
    if isinstance(v, Fraction):
        return math.ceil(v)
    return math.ceil(realnum.approx_fraction(v, 512))


def _window_codes(t: np.ndarray, count: int, L: int, step: int = 1) -> np.ndarray:
    """``code[k] = sum_l t[k + l*step] << (L-1-l)`` for ``k < count``."""
    code = np.zeros(count, dtype=np.int64)
    for ell in range(L):
        code |= t[ell * step: ell * step + count].astype(np.int64) << (L - 1 - ell)
    return code


def block_count_beatty(y: RealLike, z: RealLike, bp: BeattyParams, omega: Word) -> int:
    """``A_omega(y, z; alpha, beta)``: ``m = floor(n alpha + beta)`` in ``[y, z)`` starting an ``omega`` block."""
    lo, hi = _ceil_real(y), _ceil_real(z)  # m in [lo, hi)
    if lo < 0:
        raise ValueError("need y >= 0")
    if hi <= lo:
        return 0
    a = float(bp.alpha)
    if a < 1:
        raise ValueError("need alpha >= 1")
    b = float(bp.beta)
    n_lo = math.floor((lo - b) / a) - 2
    n_hi = math.ceil((hi - b) / a) + 2
    L = omega.L
    m = beatty_terms(n_lo, n_hi + L, bp)
    keep = (m[: n_hi - n_lo] >= lo) & (m[: n_hi - n_lo] < hi)
    if not keep.any():
        return 0
    # terms before the first kept n may be negative; they never enter a kept window
    t = thue_morse_array(np.maximum(m, 0))
    code = _window_codes(t, n_hi - n_lo, L)
    return int(np.count_nonzero(keep & (code == omega.code)))


def block_count_ap(y: RealLike, d: int, j: int) -> int:
    """``#{0 <= m < y : s(m) even, m = j mod d}``."""
    if d < 1:
        raise ValueError("need d >= 1")
    hi = _ceil_real(y)
    start = j % d
    total = 0
    for a, b in split_range(0, max(0, (hi - start + d - 1) // d), CHUNK):
        m = start + d * np.arange(a, b, dtype=np.int64)
        total += int(np.count_nonzero(thue_morse_array(m) == 0))
    return total


# ---------------------------------------------------------------------------
# floor(n**c)


def _ps_chunk(args) -> np.ndarray:
    a, b, c, L = args
    u = thue_morse_array(floor_power_range(a, b + L - 1, c))
    return np.bincount(_window_codes(u, b - a, L), minlength=1 << L)


def ps_histogram(start: int, stop: int, c: ExponentSpec, L: int, threads: int | None = None, chunk: int = CHUNK) -> np.ndarray:
    """Counts of each length-``L`` word among ``(u(n), ..., u(n+L-1))``, ``start <= n < stop``."""
    tasks = [(a, b, c, L) for a, b in split_range(start, stop, chunk)]
    hist = np.zeros(1 << L, dtype=np.int64)
    for h in pmap(_ps_chunk, tasks, threads):
        hist += h
    return hist


def block_count_ps(N: int, c: ExponentSpec, L: int | Word, threads: int | None = None) -> FreqReport:
    """Block frequencies of ``u(n) = t(floor(n**c))`` over ``n < N``, all words in one pass."""
    if isinstance(L, Word):
        L = L.L
    if not 1 <= N <= PS_LIMIT:
        raise ValueError(f"need 1 <= N <= {PS_LIMIT}")
    return FreqReport.from_histogram(L, ps_histogram(0, N, c, L, threads))


@dataclass(frozen=True)
class NormalityReport:
    c: str
    L: int
    rows: list[tuple[int, float]]
    slope: float | None
    reports: list[FreqReport]


def loglog_slope(xs, ys) -> float | None:
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pts) < 2:
        return None
    X, Y = np.array(pts).T
    return float(np.polyfit(X, Y, 1)[0])


def normality_report(c: ExponentSpec, L: int, checkpoints, threads: int | None = None) -> NormalityReport:
    """``max_dev`` of the length-``L`` block frequencies at each checkpoint ``N`` (one incremental pass)."""
    cps = [int(n) for n in checkpoints]
    if not cps or any(b <= a for a, b in zip(cps, cps[1:])) or cps[0] < 1:
        raise ValueError("checkpoints must be positive and strictly increasing")
    if cps[-1] > PS_LIMIT:
        raise ValueError(f"last checkpoint exceeds {PS_LIMIT}")
    hist = np.zeros(1 << L, dtype=np.int64)
    prev = 0
    reports = []
    for N in cps:
        hist += ps_histogram(prev, N, c, L, threads)
        prev = N
        reports.append(FreqReport.from_histogram(L, hist))
    rows = [(N, r.max_dev) for N, r in zip(cps, reports)]
    return NormalityReport(str(c), L, rows, loglog_slope(cps, [r.max_dev for r in reports]), reports)


# ---------------------------------------------------------------------------
# Averages over moduli


def _d_range(D) -> range:
    D = as_real(D)
    if not isinstance(D, Fraction):
        D = realnum.approx_fraction(D)
    return range(math.floor(D) + 1, math.floor(2 * D) + 1)


def _ap_devs(args) -> list[tuple[int, float]]:
    ds, x, omega_bits, policy, t = args
    omega = Word(omega_bits)
    L = omega.L
    lengths = policy.window_lengths(x)
    out = []
    for d in ds:
        span = max(policy.y_values) + x
        match = _window_codes(t, span, L, d) == omega.code
        best = 0.0
        for y in policy.y_values:
            for w in lengths:
                res = np.arange(y, y + w, dtype=np.int64) % d
                cnt = np.bincount(res, weights=match[y:y + w], minlength=d)
                best = max(best, float(np.max(np.abs(cnt - w / (2**L * d)))))
        out.append((d, best))
    return out


def ap_average_deviation(x: int, D: RealLike, omega: Word, policy: SamplingPolicy = SamplingPolicy(),
                         threads: int | None = None) -> AverageReport:
    """``sum_{D < d <= 2D} max_{y, j} |A_omega(y, y+x; d, j) - x / (2**L d)|`` over the sampled windows."""
    if not 1 <= x <= 10**6:
        raise ValueError("need 1 <= x <= 10**6")
    ds = list(_d_range(D))
    if not ds:
        return AverageReport(x, float(as_real(D)), [], 0.0, 0.0, policy.describe())
    if ds[-1] > x:
        raise ValueError("need D <= x")
    L = omega.L
    top = max(policy.y_values) + x + (L - 1) * ds[-1]
    t = thue_morse_array(np.arange(top, dtype=np.int64))
    parts = [ds[k:k + 64] for k in range(0, len(ds), 64)]
    tasks = [(p, x, omega.bits, policy, t) for p in parts]
    per_d = [(float(d), v) for chunk in pmap(_ap_devs, tasks, threads) for d, v in chunk]
    agg = float(sum(v for _, v in per_d))
    return AverageReport(x, float(as_real(D)), per_d, agg, agg / x, policy.describe())


def beatty_deviation(x: int, alpha: Fraction, omega: Word, policy: SamplingPolicy, y: int = 0) -> float:
    """``max_{w, beta} |A_omega(y, y+w; alpha, beta) - w / (2**L alpha)|`` over the sampled ``w`` and ``beta``."""
    best = 0.0
    for w in policy.window_lengths(x):
        target = w / (2**omega.L * float(alpha))
        for k in range(policy.beta_samples):
            beta = alpha * k / policy.beta_samples
            cnt = block_count_beatty(y, y + w, BeattyParams(alpha, beta), omega)
            best = max(best, abs(cnt - target))
    return best


def _beatty_devs(args) -> list[tuple[float, float]]:
    alphas, x, bits, policy = args
    omega = Word(bits)
    return [(float(a), max(beatty_deviation(x, a, omega, policy, y) for y in policy.y_values)) for a in alphas]


def alpha_grid(D: RealLike, grid: int) -> list[Fraction]:
    """Midpoints of ``grid`` equal cells of ``[D, 2D]`` (``D`` rounded to denominator <= 1024)."""
    if grid < 1:
        raise ValueError("grid must be positive")
    Dr = _rounded_D(D)
    return [Dr + Dr * (2 * k + 1) / (2 * grid) for k in range(grid)]


def _rounded_D(D: RealLike) -> Fraction:
    Dr = as_real(D)
    return (Dr if isinstance(Dr, Fraction) else realnum.approx_fraction(Dr)).limit_denominator(1024)


def beatty_average_deviation(x: int, D: RealLike, omega: Word, grid: int,
                             policy: SamplingPolicy = SamplingPolicy(), threads: int | None = None) -> AverageReport:
    """Midpoint rule for ``int_D^{2D} max_{y, beta} |A_omega(y, y+x; alpha, beta) - x/(2**L alpha)| d alpha``."""
    if not 1 <= x <= 10**6:
        raise ValueError("need 1 <= x <= 10**6")
    alphas = alpha_grid(D, grid)
    if alphas[0] < 1:
        raise ValueError("need D >= 1")
    width = float(_rounded_D(D)) / grid
    parts = [alphas[k:k + 8] for k in range(0, len(alphas), 8)]
    per = [p for chunk in pmap(_beatty_devs, [(p, x, omega.bits, policy) for p in parts], threads) for p in chunk]
    agg = width * sum(v for _, v in per)
    return AverageReport(x, float(as_real(D)), per, agg, agg / x, policy.describe())


# ---------------------------------------------------------------------------
# floor(n**c) against Beatty windows


@dataclass(frozen=True)
class PSBeattyReport:
    N: int
    K: int
    c: str
    lhs: float
    curvature_term: float
    log_term: float
    J_sampled: float
    rhs_sum: float
    ratio: float
    alpha_grid: int
    beta_samples: int
    J_is_sampled: bool = True


def _window_freq_dev(K: int, alpha: Fraction, beta: Fraction, omega: Word) -> float:
    m = beatty_terms(0, K + omega.L - 1, BeattyParams(alpha, beta))
    code = _window_codes(thue_morse_array(m), K, omega.L)
    return abs(np.count_nonzero(code == omega.code) / K - 2.0**-omega.L)


def ps_via_beatty_report(N: int, K: int, c: ExponentSpec, omega: Word, alpha_grid_size: int = 16,
                         beta_samples: int = 16) -> PSBeattyReport:
    """Left side (direct count on ``(N, 2N]``) against the three right-side terms, ``J`` sampled."""
    if N < 2 or K < 1:
        raise ValueError("need N >= 2 and K >= 1")
    L = omega.L
    cf = float(c)
    u = thue_morse_array(floor_power_range(N + 1, 2 * N + L, c))
    hits = np.count_nonzero(_window_codes(u, N, L) == omega.code)
    lhs = abs(hits / N - 2.0**-L)
    fp = lambda v: cf * v ** (cf - 1)
    f = lambda v: v**cf
    curv = cf * (cf - 1) * N ** (cf - 2) * K * K
    logt = math.log(N) ** 2 / K
    a0, a1 = fp(N), fp(2 * N)
    b0, b1 = f(N), f(2 * N)
    vals = []
    for k in range(alpha_grid_size):
        alpha = Fraction(a0 + (a1 - a0) * (k + 0.5) / alpha_grid_size).limit_denominator(1 << 20)
        best = 0.0
        for t in range(beta_samples):
            beta = Fraction(b0 + (b1 - b0) * (t + 1) / beta_samples).limit_denominator(1 << 20)
            best = max(best, _window_freq_dev(K, alpha, beta, omega))
        vals.append(best)
    J = float(np.mean(vals))
    rhs = curv + logt + J
    return PSBeattyReport(N, K, str(c), lhs, curv, logt, J, rhs, lhs / rhs, alpha_grid_size, beta_samples)


def report_dict(rep) -> dict:
    return asdict(rep)
