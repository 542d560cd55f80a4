import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import fourier_sum
from psthue import fourier
from psthue.fourier import CoeffBlock, ShiftProfile


@st.composite
def instances(draw, max_lam=8):
    L = draw(st.integers(1, 3))
    r = draw(st.integers(L, 40))
    seed = draw(st.integers(0, 2**32))
    rng = random.Random(seed)
    i = ShiftProfile.random(L, r, rng)
    a = (1,) + tuple(draw(st.integers(0, 1)) for _ in range(L - 1))
    lam = draw(st.integers(0, max_lam))
    d = draw(st.integers(0, (1 << lam) - 1)) if lam else 0
    return lam, i, CoeffBlock(a, r), d


def terms_of(i, b):
    return [(pos, i(pos), v) for pos, v in b.as_map().items()]


@settings(max_examples=40, deadline=None)
@given(instances(max_lam=5))
def test_direct_matches_literal_sum(inst):
    lam, i, b, d = inst
    tab = fourier.fourier_direct(lam, i, b, d)
    for h in range(1 << lam):
        ref = fourier_sum(lam, terms_of(i, b), d, h)
        assert abs(tab[h] - ref) < 1e-12
        assert abs(fourier.fourier_naive(lam, i, b, d, h) - ref) < 1e-12


@settings(max_examples=60, deadline=None)
@given(instances(max_lam=10))
def test_recursive_equals_direct_and_parseval(inst):
    lam, i, b, d = inst
    rec = fourier.fourier_recursive(lam, i, b, d)
    direct = fourier.fourier_direct(lam, i, b, d)
    assert np.max(np.abs(rec.entries - direct.entries)) < 1e-9
    assert abs(rec.parseval() - 1) < 1e-9


def test_single_window_map_coefficients():
    i = ShiftProfile(3, 0, (0, 1, 1), ())
    b = {0: 1, 2: 1}
    for d in range(16):
        rec = fourier.fourier_recursive(4, i, b, d)
        for h in range(16):
            ref = fourier_sum(4, [(0, 0, 1), (2, 1, 1)], d, h)
            assert abs(rec[h] - ref) < 1e-12


def test_level_zero_is_one():
    i = ShiftProfile.zero(1, 4)
    assert fourier.fourier_recursive(0, i, CoeffBlock((1,), 4), 0)[0] == 1


def test_profile_validation():
    with pytest.raises(ValueError):
        ShiftProfile(2, 3, (0, 2), (2, 2))
    with pytest.raises(ValueError):
        ShiftProfile(2, 3, (1, 1), (2, 2))
    with pytest.raises(ValueError):
        ShiftProfile(2, 3, (0, 1), (0, 1))
    with pytest.raises(ValueError):
        ShiftProfile(2, 1, (0, 1), (1, 1))
    with pytest.raises(ValueError):
        CoeffBlock((0, 1), 4)
    i = ShiftProfile(2, 5, (0, 1), (3, 4))
    assert i(6) == 4 and i.K == 7
    with pytest.raises(KeyError):
        i(3)


@settings(max_examples=50, deadline=None)
@given(instances(max_lam=0), st.integers(0, 4), st.integers(0, 200), st.integers(0, 200))
def test_transform_definition_and_sandwich(inst, m, d, e):
    _, i, _, _ = inst
    t = fourier.transform_profile(i, m, d, e)
    M = 1 << m
    for pos in i.positions():
        assert t(pos) == (i(pos) + pos * (d % M) + e % M) // M
    base = fourier.transform_profile(i, m, d, 0)
    assert all(x <= y <= x + 1 for x, y in zip(base.values(), t.values()))


@settings(max_examples=30, deadline=None)
@given(instances(max_lam=7), st.data())
def test_weight_product_via_transforms(inst, data):
    lam, i, b, d = inst
    m = data.draw(st.integers(0, lam))
    e = data.draw(st.integers(0, (1 << m) - 1))
    # one level of the recurrence m times: composite transform equals T^{(m)}
    cur = i
    for k in range(m):
        cur = fourier.transform_profile(cur, 1, (d >> k) & 1, (e >> k) & 1)
    assert cur.values() == fourier.transform_profile(i, m, d, e).values()
    w = fourier.weight_product(i, b, m, d, e)
    assert w in (1, -1)


@settings(max_examples=25, deadline=None)
@given(instances(max_lam=7), st.data())
def test_iterated_identity_and_trivial_estimate(inst, data):
    lam, i, b, d = inst
    m = data.draw(st.integers(0, lam))
    phi = fourier.phi_iterated(lam, i, i, b, d, m)
    G = fourier.fourier_direct(lam, i, b, d).entries
    assert np.max(np.abs(phi - np.abs(G) ** 2)) < 1e-9
    excess, top = fourier.trivial_estimate_check(lam, i, b, d, m)
    assert excess < 1e-9 and top <= 1 + 1e-9


def test_phi_two_profiles():
    rng = random.Random(5)
    i1 = ShiftProfile.random(2, 8, rng)
    i2 = ShiftProfile.random(2, 8, rng)
    b = CoeffBlock((1, 1), 8)
    lam, d = 6, 37
    G1 = fourier.fourier_direct(lam, i1, b, d).entries
    G2 = fourier.fourier_direct(lam, i2, b, d).entries
    for m in range(lam + 1):
        assert np.max(np.abs(fourier.phi_iterated(lam, i1, i2, b, d, m) - G1 * np.conj(G2))) < 1e-9


def test_block_size_exponent():
    assert fourier.block_size_exponent(1) == 5
    assert fourier.block_size_exponent(2) == 6
    assert fourier.block_size_exponent(3) == 6
    assert fourier.block_size_exponent(4) == 7
    for L in range(1, 200):
        m = fourier.block_size_exponent(L)
        assert 2 ** (m - 5) <= L < 2 ** (m - 4)
        assert fourier.tau_for(L) == 2 * m


def good_brute(lam, d, i, r, m):
    out = set()
    for mu in range(lam - m + 1):
        digits = [(d >> (mu + k)) & 1 for k in range(m)]
        if digits != [1] + [0] * (m - 1):
            continue
        t = fourier.transform_profile(i, mu, d, 0)
        if t(r) % (1 << m) == 1:
            out.add(mu)
    return out


def test_good_positions_against_definition():
    rng = random.Random(2)
    for _ in range(10):
        i = ShiftProfile.random(1, 64 * rng.randint(1, 5), rng)
        for d in rng.sample(range(1 << 14), 200):
            assert fourier.good_positions(14, d, i, i.r, 3) == good_brute(14, d, i, i.r, 3)


def test_census_small_case_brute():
    lam, m, r = 12, 3, 64  # x = 6
    i = ShiftProfile(1, r, (0,), (37,))
    A1, A2 = fourier.index_sets(lam, 6, m)
    assert A1 == [0, 3] and A2 == [6, 9]
    hist = {}
    for d in range(1 << lam):
        M = frozenset(good_brute(lam, d, i, r, m) & set(A2))
        hist[M] = hist.get(M, 0) + 1
    dist = fourier.good_set_distribution(lam, r, m, i)
    assert {k: v for k, v in dist.items() if v} == hist
    for M, n in dist.items():
        assert n == fourier.census_formula(lam, 6, m, len(M))


def test_census_preconditions():
    i = ShiftProfile.zero(1, 12)
    with pytest.raises(ValueError):
        fourier.good_set_distribution(10, 12, 3, i)


def test_prepare_and_saving_small():
    rng = random.Random(11)
    i = fourier.random_prepared_profile(1, 1024, 5, rng)
    assert i.at_r % 32 in (1, 2)
    for y in range(3):
        assert fourier.prepare_check(10, y, 5, ShiftProfile.random(1, 1024, rng))
    b = CoeffBlock((1,), 1024)
    for d in range(8):
        lhs, rhs = fourier.saving_gap_table(3, 5, i, b, d)
        assert np.all(lhs <= (1 - 2 / 1024) * rhs + 1e-9)
        rep = fourier.saving_gap_check(3, 5, i, b, d, 17)
        assert rep.holds


def test_saving_preconditions():
    rng = random.Random(1)
    b = CoeffBlock((1,), 1024)
    bad = ShiftProfile(1, 1024, (0,), (3,))
    with pytest.raises(ValueError):
        fourier.saving_gap_table(2, 5, bad, b, 0)
    with pytest.raises(ValueError):
        fourier.saving_gap_table(2, 5, fourier.random_prepared_profile(1, 1024, 5, rng), b, 4)


def test_decay_budget_bookkeeping():
    rep = fourier.decay_budget(40, 1024, 5)
    assert rep.binomial_identity
    assert rep.lambda0 == 4
    assert abs(rep.bound - 2**40 * (1 - 2 / 16**5) ** 4) < 1e-3


def test_single_estimate():
    rng = random.Random(4)
    i = fourier.random_prepared_profile(1, 1024, 5, rng)
    b = CoeffBlock((1,), 1024)
    seen_k = set()
    for d in rng.sample(range(1 << 15), 300):
        rep = fourier.single_estimate_check(15, i, b, d)
        assert rep.holds
        assert abs(rep.parseval - 1) < 1e-9
        seen_k.add(rep.k)
    assert max(seen_k) >= 1
