"""Discrete Fourier coefficients of two-block digit sums and their recurrence.

For a shift profile ``i`` and coefficients ``b``,

    G_lam(h, d) = 2**-lam * sum_{u < 2**lam} e(1/2 sum_l b_l s_lam(u + l d + i(l)) - h u / 2**lam).

Since every ``b_l`` is an integer, ``e(b s / 2) = (-1)**(b s)`` and only the
parities of the ``b_l`` matter; the sign convention of the second block is
irrelevant to every quantity computed here.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .digitcore import nu2

MAX_LAMBDA = 22


# ---------------------------------------------------------------------------
# Shift profiles and coefficient blocks


@dataclass(frozen=True)
class ShiftProfile:
    """A member of ``I_K`` (``K = L + r``) stored on its two active windows.

    ``values0`` is ``i`` on ``[0, L)``, ``valuesR`` is ``i`` on ``[r, r+L)``.
    ``r = 0`` denotes a single window (used with general coefficient maps).
    """

    L: int
    r: int
    values0: tuple[int, ...]
    valuesR: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values0", tuple(int(v) for v in self.values0))
        object.__setattr__(self, "valuesR", tuple(int(v) for v in self.valuesR))
        L, r = self.L, self.r
        if L < 1 or len(self.values0) != L:
            raise ValueError("values0 must have length L >= 1")
        if self.values0[0] != 0:
            raise ValueError("i(0) must be 0")
        _check_steps(self.values0)
        if r == 0:
            if self.valuesR and self.valuesR != self.values0:
                raise ValueError("r = 0 means a single window")
            object.__setattr__(self, "valuesR", self.values0)
            return
        if r < L:
            raise ValueError("need r >= L")
        if len(self.valuesR) != L:
            raise ValueError("valuesR must have length L")
        _check_steps(self.valuesR)
        gap = self.valuesR[0] - self.values0[-1]
        if not 0 <= gap <= r - L + 1:
            raise ValueError(f"cross-window gap {gap} not in [0, {r - L + 1}]")

    @property
    def K(self) -> int:
        return self.L + self.r

    @property
    def at_r(self) -> int:
        return self.valuesR[0]

    def positions(self) -> tuple[int, ...]:
        if self.r == 0:
            return tuple(range(self.L))
        return tuple(range(self.L)) + tuple(range(self.r, self.r + self.L))

    def values(self) -> tuple[int, ...]:
        return self.values0 if self.r == 0 else self.values0 + self.valuesR

    def __call__(self, ell: int) -> int:
        if 0 <= ell < self.L:
            return self.values0[ell]
        if self.r <= ell < self.r + self.L:
            return self.valuesR[ell - self.r]
        raise KeyError(f"position {ell} is outside the active windows")

    @classmethod
    def zero(cls, L: int, r: int) -> "ShiftProfile":
        return cls(L, r, (0,) * L, (0,) * L if r else ())

    @classmethod
    def random(cls, L: int, r: int, rng: random.Random) -> "ShiftProfile":
        """A random valid profile (see :func:`random_prepared_profile` to constrain ``i(r)``)."""
        v0 = [0]
        for _ in range(L - 1):
            v0.append(v0[-1] + rng.randint(0, 1))
        if r == 0:
            return cls(L, 0, tuple(v0), ())
        start = v0[-1] + rng.randint(0, r - L + 1)
        vr = [start]
        for _ in range(L - 1):
            vr.append(vr[-1] + rng.randint(0, 1))
        return cls(L, r, tuple(v0), tuple(vr))

    @classmethod
    def _from_values(cls, L: int, r: int, vals: tuple[int, ...]) -> "ShiftProfile":
        # internal constructor for transformed profiles (already valid)
        obj = object.__new__(cls)
        object.__setattr__(obj, "L", L)
        object.__setattr__(obj, "r", r)
        object.__setattr__(obj, "values0", vals[:L])
        object.__setattr__(obj, "valuesR", vals[L:] if r else vals[:L])
        return obj


def _check_steps(vals: tuple[int, ...]):
    for a, b in zip(vals, vals[1:]):
        if b - a not in (0, 1):
            raise ValueError("profile increments must be 0 or 1")


def random_prepared_profile(L: int, r: int, m: int, rng: random.Random) -> ShiftProfile:
    """Random profile with ``i(r) mod 2**m in {1, 2}``."""
    v0 = [0]
    for _ in range(L - 1):
        v0.append(v0[-1] + rng.randint(0, 1))
    lo, hi = v0[-1], v0[-1] + r - L + 1
    choices = [v for v in range(lo, hi + 1) if v % (1 << m) in (1, 2)]
    if not choices:
        raise ValueError("no admissible value of i(r)")
    vr = [rng.choice(choices)]
    for _ in range(L - 1):
        vr.append(vr[-1] + rng.randint(0, 1))
    return ShiftProfile(L, r, tuple(v0), tuple(vr))


@dataclass(frozen=True)
class CoeffBlock:
    """``b_l = a_l`` on ``[0, L)``, ``b_l = -a_{l-r}`` on ``[r, r+L)``, zero elsewhere."""

    a: tuple[int, ...]
    r: int

    def __post_init__(self):
        a = tuple(int(v) for v in self.a)
        object.__setattr__(self, "a", a)
        if not a or any(v not in (0, 1) for v in a):
            raise ValueError("a must be a nonempty 0/1 tuple")
        if a[0] != 1:
            raise ValueError("a_0 must be 1")
        if self.r < len(a):
            raise ValueError("need r >= L")

    @property
    def L(self) -> int:
        return len(self.a)

    def as_map(self) -> dict[int, int]:
        out = {ell: v for ell, v in enumerate(self.a) if v}
        out.update({self.r + ell: -v for ell, v in enumerate(self.a) if v})
        return out


Coeffs = CoeffBlock | Mapping[int, int]


def _odd_positions(b: Coeffs) -> tuple[int, ...]:
    bm = b.as_map() if isinstance(b, CoeffBlock) else dict(b)
    return tuple(sorted(ell for ell, v in bm.items() if v % 2))


def _profile_lookup(i: ShiftProfile, b: Coeffs) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Odd-coefficient positions and their indices into ``i.values()``."""
    odd = _odd_positions(b)
    pos = i.positions()
    index = {p: k for k, p in enumerate(pos)}
    try:
        idx = tuple(index[ell] for ell in odd)
    except KeyError as exc:
        raise ValueError(f"coefficient at position {exc.args[0]} lies outside the profile windows") from None
    return odd, idx


# ---------------------------------------------------------------------------
# Tables


@dataclass(frozen=True)
class FourierTable:
    """``h -> G_lam(h, d)`` for ``0 <= h < 2**lam``."""

    lam: int
    d: int
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (1 << self.lam,):
            raise ValueError("entries must have length 2**lam")

    def __getitem__(self, h: int) -> complex:
        return complex(self.entries[h % (1 << self.lam)])

    def parseval(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))

    def max_abs_sq(self) -> float:
        return float(np.max(np.abs(self.entries) ** 2))

    def tiled(self, lam: int) -> np.ndarray:
        """Entries extended 2**self.lam-periodically to length ``2**lam``."""
        return np.tile(self.entries, 1 << (lam - self.lam))


def _check_lambda(lam: int):
    if not 0 <= lam <= MAX_LAMBDA:
        raise ValueError(f"lambda must be in [0, {MAX_LAMBDA}], got {lam}")


def digit_sign_sequence(lam: int, i: ShiftProfile, b: Coeffs, d: int) -> np.ndarray:
    """``u -> (-1)**(sum_l b_l s_lam(u + l d + i(l)))`` for ``u < 2**lam``, as +-1 int8."""
    _check_lambda(lam)
    odd, idx = _profile_lookup(i, b)
    vals = i.values()
    mask = (1 << lam) - 1
    u = np.arange(1 << lam, dtype=np.int64)
    parity = np.zeros(1 << lam, dtype=np.uint8)
    for ell, k in zip(odd, idx):
        shift = (ell * d + vals[k]) & mask
        parity ^= (np.bitwise_count(((u + shift) & mask).astype(np.uint64)) & 1).astype(np.uint8)
    return (1 - 2 * parity.astype(np.int8)).astype(np.int8)


def fourier_direct(lam: int, i: ShiftProfile, b: Coeffs, d: int) -> FourierTable:
    """All ``G_lam(h, d)`` from the definition: one pass for the signs, one FFT."""
    f = digit_sign_sequence(lam, i, b, d).astype(np.float64)
    return FourierTable(lam, d, np.fft.fft(f) / (1 << lam))


def fourier_naive(lam: int, i: ShiftProfile, b: Coeffs, d: int, h: int) -> complex:
    """Single coefficient by the literal double loop (test oracle, tiny ``lam``)."""
    odd, idx = _profile_lookup(i, b)
    vals = i.values()
    bm = b.as_map() if isinstance(b, CoeffBlock) else dict(b)
    total = 0j
    M = 1 << lam
    for u in range(M):
        s = sum(bm[ell] * ((u + ell * d + vals[k]) & (M - 1)).bit_count() for ell, k in zip(odd, idx))
        total += np.exp(2j * np.pi * (s / 2 - h * u / M))
    return complex(total / M)


# ---------------------------------------------------------------------------
# Transformations and weights


def transform_profile(i: ShiftProfile, m: int, d: int, e: int) -> ShiftProfile:
    """``T^{(m)}_{d,e}(i)(l) = floor((i(l) + l d + e) / 2**m)`` with ``d, e`` taken mod ``2**m``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return i
    M = 1 << m
    d, e = d % M, e % M
    vals = tuple((v + ell * d + e) >> m for ell, v in zip(i.positions(), i.values()))
    return ShiftProfile._from_values(i.L, i.r, vals)


def elementary_weight(i: ShiftProfile, b: Coeffs, delta: int, eps: int) -> int:
    """``f_{delta,eps} = (-1)**(sum_l b_l (i(l) + l delta + eps))``."""
    odd, idx = _profile_lookup(i, b)
    vals = i.values()
    par = sum(vals[k] + ell * delta + eps for ell, k in zip(odd, idx)) & 1
    return -1 if par else 1


def weight_product(i: ShiftProfile, b: Coeffs, m: int, d: int, e: int) -> int:
    """``f^{(m)}_{d,e}``: product of elementary weights along the digits of ``d`` and ``e``."""
    w = 1
    cur = i
    for k in range(m):
        delta, eps = (d >> k) & 1, (e >> k) & 1
        w *= elementary_weight(cur, b, delta, eps)
        cur = transform_profile(cur, 1, delta, eps)
    return w


def fourier_recursive(lam: int, i: ShiftProfile, b: Coeffs, d: int) -> FourierTable:
    """``G_lam(., d)`` built bottom-up from ``G_0 = 1`` by the digit recurrence.

    Level ``k`` tables are memoised per profile; the profiles reachable at a
    level are few because ``T^{(k)}_{d,e}(i)`` is monotone in ``e``.
    """
    _check_lambda(lam)
    odd, idx = _profile_lookup(i, b)
    memo: dict[tuple[int, tuple[int, ...]], np.ndarray] = {}
    positions = i.positions()

    def weight(vals, delta, eps):
        return -1.0 if (sum(vals[k] + ell * delta + eps for ell, k in zip(odd, idx)) & 1) else 1.0

    def table(k: int, vals: tuple[int, ...]) -> np.ndarray:
        # G_k^{vals}(h, d >> (lam - k)) for h < 2**k
        if k == 0:
            return np.ones(1, dtype=np.complex128)
        key = (k, vals)
        hit = memo.get(key)
        if hit is not None:
            return hit
        delta = (d >> (lam - k)) & 1
        h = np.arange(1 << k)
        out = np.zeros(1 << k, dtype=np.complex128)
        for eps in (0, 1):
            nxt = tuple((v + ell * delta + eps) >> 1 for ell, v in zip(positions, vals))
            sub = np.tile(table(k - 1, nxt), 2)
            phase = np.exp(-2j * np.pi * h * eps / (1 << k)) if eps else 1.0
            out += phase * weight(vals, delta, eps) * sub
        out *= 0.5
        memo[key] = out
        return out

    return FourierTable(lam, d, table(lam, i.values()).copy())


def phi_iterated(lam: int, i1: ShiftProfile, i2: ShiftProfile, b: Coeffs, d: int, m: int) -> np.ndarray:
    """Right side of the iterated correlation identity for ``Phi_lam(h, d)``, all ``h``.

    ``d`` is split as ``2**m * (d >> m) + d'``; the sum runs over ``e1, e2 < 2**m``.
    """
    if not 0 <= m <= lam:
        raise ValueError("need 0 <= m <= lam")
    M = 1 << m
    dp, dq = d % M, d >> m
    h = np.arange(1 << lam)
    out = np.zeros(1 << lam, dtype=np.complex128)
    A = []
    for i in (i1, i2):
        terms = []
        for e in range(M):
            t = transform_profile(i, m, dp, e)
            g = fourier_direct(lam - m, t, b, dq).tiled(lam)
            w = weight_product(i, b, m, dp, e)
            terms.append((e, w, g))
        A.append(terms)
    for e1, w1, g1 in A[0]:
        for e2, w2, g2 in A[1]:
            out += np.exp(-2j * np.pi * (e1 - e2) * h / (1 << lam)) * (w1 * w2) * g1 * np.conj(g2)
    return out / (M * M)


def trivial_estimate_check(lam: int, i: ShiftProfile, b: Coeffs, d: int, m: int) -> tuple[float, float]:
    """Compare ``|G_lam(h, d)|^2`` with ``max_{e < 2**m} |G_{lam-m}^{T^{(m)}_{d',e}(i)}(h, d >> m)|^2``.

    Returns ``(max_h (lhs - rhs), max_h lhs)``; the first must be ``<= 0``
    up to rounding.
    """
    M = 1 << m
    lhs = np.abs(fourier_direct(lam, i, b, d).entries) ** 2
    rhs = np.zeros(1 << lam)
    for e in range(M):
        t = transform_profile(i, m, d % M, e)
        rhs = np.maximum(rhs, np.abs(fourier_direct(lam - m, t, b, d >> m).tiled(lam)) ** 2)
    return float(np.max(lhs - rhs)), float(lhs.max())


def trivial_bound_sum(lam: int, i: ShiftProfile, b: Coeffs) -> float:
    """``sum_{d < 2**lam} max_h |G_lam(h, d)|^2`` (compare with the decay budget)."""
    return float(sum(fourier_direct(lam, i, b, d).max_abs_sq() for d in range(1 << lam)))


# ---------------------------------------------------------------------------
# Block size and good positions


def block_size_exponent(L: int) -> int:
    """The ``m >= 5`` with ``2**(m-5) <= L < 2**(m-4)``."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return L.bit_length() + 4


def tau_for(L: int) -> int:
    return 2 * block_size_exponent(L)


def good_positions(lam: int, d: int, i: ShiftProfile, r: int, m: int) -> set[int]:
    """Positions ``mu <= lam - m`` with digits ``d_{mu+m-1..mu} = 0..01`` and ``T^{(mu)}_{d,0}(i)(r) = 1 mod 2**m``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if r != i.r:
        raise ValueError("r must match the profile")
    mask = (1 << m) - 1
    ir = i.at_r
    out = set()
    for mu in range(0, lam - m + 1):
        if (d >> mu) & mask != 1:
            continue
        if ((ir + r * (d & ((1 << mu) - 1))) >> mu) & mask == 1:
            out.add(mu)
    return out


def index_sets(lam: int, x: int, m: int) -> tuple[list[int], list[int]]:
    """Starting points ``A_1, A_2`` of the length-``m`` intervals of type 1 and 2."""
    if x < 1 or m < 1:
        raise ValueError("need x >= 1 and m >= 1")
    n1, n0 = lam // (2 * x), x // m
    A1 = [2 * l1 * x + l0 * m for l1 in range(n1) for l0 in range(n0)]
    A2 = [(2 * l1 + 1) * x + l0 * m for l1 in range(n1) for l0 in range(n0)]
    return A1, A2


def lambda0(lam: int, x: int, m: int) -> int:
    if x < 1:
        return 0
    return (lam // (2 * x)) * (x // m)


def census_formula(lam: int, x: int, m: int, k: int) -> int:
    l0 = lambda0(lam, x, m)
    if not 0 <= k <= l0:
        raise ValueError("need 0 <= k <= lambda0")
    return 2 ** (lam - 2 * m * l0) * (2 ** (2 * m) - 1) ** (l0 - k)


def _census_preconditions(lam: int, r: int, m: int, i: ShiftProfile) -> int:
    if r != i.r or r < 1:
        raise ValueError("r must match the profile and be positive")
    x = nu2(r)
    if x < m:
        raise ValueError(f"need nu2(r) >= m, got nu2(r)={x}, m={m}")
    if lam < 2 * x:
        raise ValueError(f"need lambda >= 2 nu2(r) = {2 * x}")
    if lam > 24:
        raise ValueError("brute-force census is limited to lambda <= 24")
    return x


def good_set_distribution(lam: int, r: int, m: int, i: ShiftProfile) -> dict[frozenset[int], int]:
    """Brute force over ``d < 2**lam``: how many ``d`` have each subset of ``A_2`` as good set."""
    x = _census_preconditions(lam, r, m, i)
    _, A2 = index_sets(lam, x, m)
    mask = (1 << m) - 1
    d = np.arange(1 << lam, dtype=np.int64)
    code = np.zeros(1 << lam, dtype=np.int64)
    for bit, mu in enumerate(A2):
        M = 1 << (mu + m)
        low = d & ((1 << mu) - 1)
        # only bits below mu+m of i(r) + r*low matter
        t = ((i.at_r % M) + (r % M) * low) & (M - 1)
        good = (((d >> mu) & mask) == 1) & (((t >> mu) & mask) == 1)
        code |= good.astype(np.int64) << bit
    hist = np.bincount(code, minlength=1 << len(A2))
    out = {}
    for c, n in enumerate(hist.tolist()):
        out[frozenset(A2[b] for b in range(len(A2)) if (c >> b) & 1)] = n
    return out


def good_set_census(lam: int, r: int, m: int, i: ShiftProfile, M: Iterable[int]) -> int:
    x = _census_preconditions(lam, r, m, i)
    M = frozenset(M)
    _, A2 = index_sets(lam, x, m)
    if not M <= set(A2):
        raise ValueError("M must be a subset of A_2")
    return good_set_distribution(lam, r, m, i)[M]


def prepare_check(x: int, y: int, m: int, i: ShiftProfile) -> bool:
    """For every ``d0 < 2**y`` exactly one ``d1 < 2**m`` makes position ``x+y`` prepared for all ``d2``."""
    r = i.r
    if nu2(r) != x or x < m:
        raise ValueError("need nu2(r) = x >= m")
    mask = (1 << m) - 1
    shift = x + y
    d2 = np.arange(1 << (x - m), dtype=np.int64)
    for d0 in range(1 << y):
        winners = 0
        for d1 in range(1 << m):
            d = (d2 << (y + m)) + (d1 << y) + d0
            low = d & ((1 << shift) - 1)
            val = ((i.at_r + r * low) >> shift) & mask
            hits = val == 1
            if hits.all():
                winners += 1
            elif hits.any():
                return False
        if winners != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Saving lemma and the assembled estimate


@dataclass(frozen=True)
class SavingReport:
    z: int
    m: int
    d: int
    h: int
    lhs: float
    rhs: float
    holds: bool


def _saving_preconditions(z: int, m: int, i: ShiftProfile, b: CoeffBlock, d: int):
    if not isinstance(b, CoeffBlock):
        raise ValueError("the saving estimate needs a two-block CoeffBlock")
    if b.r != i.r or b.L != i.L:
        raise ValueError("profile and coefficients disagree on L or r")
    L = b.L
    if not 2 ** (m - 5) <= L < 2 ** (m - 4):
        raise ValueError(f"need 2**(m-5) <= L < 2**(m-4), got L={L}, m={m}")
    if nu2(b.r) < 2 * m:
        raise ValueError("need nu2(r) >= 2m")
    if i.at_r % (1 << m) not in (1, 2):
        raise ValueError("need i(r) mod 2**m in {1, 2}")
    if not 0 <= d < (1 << z):
        raise ValueError("need 0 <= d < 2**z")
    if z + m > 16:
        raise ValueError("need z + m <= 16")


def saving_gap_table(z: int, m: int, i: ShiftProfile, b: CoeffBlock, d: int) -> tuple[np.ndarray, np.ndarray]:
    """``|G_{z+m}(h, d 2^m + 1)|^2`` and ``max_e |G_z^{T^{(m)}_{1,e}(i)}(h, d)|^2`` for every ``h < 2**(z+m)``."""
    _saving_preconditions(z, m, i, b, d)
    lam = z + m
    lhs = np.abs(fourier_direct(lam, i, b, (d << m) + 1).entries) ** 2
    rhs = np.zeros(1 << lam)
    seen = set()
    for e in range(1 << m):
        t = transform_profile(i, m, 1, e)
        if t.values() in seen:
            continue
        seen.add(t.values())
        rhs = np.maximum(rhs, np.abs(fourier_direct(z, t, b, d).tiled(lam)) ** 2)
    return lhs, rhs


def saving_gap_check(z: int, m: int, i: ShiftProfile, b: CoeffBlock, d: int, h: int) -> SavingReport:
    lhs, rhs = saving_gap_table(z, m, i, b, d)
    k = h % len(lhs)
    eta = 2 / 4**m
    bound = (1 - eta) * float(rhs[k])
    return SavingReport(z, m, d, h, float(lhs[k]), bound, bool(lhs[k] <= bound + 1e-9))


@dataclass(frozen=True)
class DecayReport:
    lam: int
    r: int
    m: int
    x: int
    lambda0: int
    bound: float
    lower_bound: float
    lower_bound_applies: bool
    lower_bound_holds: bool
    binomial_identity: bool


def decay_budget(lam: int, r: int, m: int) -> DecayReport:
    """``2**lam (1 - 2/16**m)**lambda0`` and the bookkeeping around it."""
    if m < 1 or r < 1:
        raise ValueError("need m >= 1 and r >= 1")
    x = nu2(r)
    l0 = lambda0(lam, x, m)
    eta = Fraction(2, 4**m)
    exact = Fraction(2**lam) * (1 - Fraction(2, 16**m)) ** l0
    # sum over the number k of good positions in A_2, weighted by the census
    summed = sum(
        math.comb(l0, k) * 2 ** (lam - 2 * m * l0) * (4**m - 1) ** (l0 - k) * (1 - eta) ** k
        for k in range(l0 + 1)
    )
    applies = 2 * m <= x <= lam / 4
    lower = lam / (8 * m)
    return DecayReport(
        lam=lam, r=r, m=m, x=x, lambda0=l0, bound=float(exact), lower_bound=lower,
        lower_bound_applies=applies, lower_bound_holds=(not applies) or l0 >= lower,
        binomial_identity=summed == exact,
    )


@dataclass(frozen=True)
class SingleEstimateReport:
    lam: int
    d: int
    k: int
    max_sq: float
    bound: float
    holds: bool
    parseval: float


def single_estimate_check(lam: int, i: ShiftProfile, b: CoeffBlock, d: int, m: int | None = None) -> SingleEstimateReport:
    """``max_h |G_lam(h, d)|^2 <= (1 - 2/4**m)**k`` with ``k`` the number of good positions."""
    if lam > 16:
        raise ValueError("lambda must be <= 16")
    if not isinstance(b, CoeffBlock) or b.r != i.r or b.L != i.L:
        raise ValueError("need a CoeffBlock matching the profile")
    if m is None:
        m = block_size_exponent(b.L)
    if not 2 ** (m - 5) <= b.L < 2 ** (m - 4):
        raise ValueError("need 2**(m-5) <= L < 2**(m-4)")
    if nu2(b.r) < 2 * m:
        raise ValueError("need nu2(r) >= 2m")
    k = len(good_positions(lam, d, i, b.r, m))
    tab = fourier_direct(lam, i, b, d)
    bound = (1 - 2 / 4**m) ** k
    mx = tab.max_abs_sq()
    return SingleEstimateReport(lam, d, k, mx, bound, mx <= bound + 1e-9, tab.parseval())
