import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import disc_brute, farey_brute, farey_rule_brute
from psthue import beatty
from psthue.beatty import BeattyParams, beatty_term, beatty_terms, discrepancy
from psthue.realnum import PrecisionExhausted

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=10**4)


@given(fractions, fractions, st.integers(-200, 200))
def test_beatty_term_rational(a, b, n):
    assert beatty_term(n, BeattyParams(a, b)) == math.floor(n * a + b)


@settings(max_examples=40)
@given(fractions, fractions, st.integers(-300, 300), st.integers(0, 200))
def test_beatty_terms_vector(a, b, start, length):
    bp = BeattyParams(a, b)
    got = beatty_terms(start, start + length, bp).tolist()
    assert got == [math.floor(n * a + b) for n in range(start, start + length)]


def test_beatty_irrational():
    import mpmath
    bp = BeattyParams("sqrt(2)", "1/3")
    got = beatty_terms(-50, 400, bp)
    with mpmath.workdps(50):
        ref = [int(mpmath.floor(n * mpmath.sqrt(2) + mpmath.mpf(1) / 3)) for n in range(-50, 400)]
    assert got.tolist() == ref


def test_beatty_term_exact_integer_expression_runs_out():
    # sqrt(2)*sqrt(2) is an integer the interval ladder cannot separate from it
    with pytest.raises(PrecisionExhausted):
        beatty_term(1, BeattyParams("sqrt(2)*sqrt(2)", 0))


def test_discrepancy_small_cases():
    assert discrepancy(Fraction(1, 2), 2) == Fraction(1, 2)
    assert discrepancy(0, 5) == 1
    assert discrepancy(Fraction(1, 3), 3) == Fraction(1, 3)
    # N = 1: one point, sup is 1
    assert discrepancy(Fraction(2, 7), 1) == 1


def test_discrepancy_matches_brute_force():
    rng = random.Random(7)
    for _ in range(40):
        q = rng.choice([rng.randint(1, 40), rng.randint(1, 10**6)])
        a = Fraction(rng.randrange(-5 * q, 5 * q), q)
        N = rng.randint(1, 96)
        assert discrepancy(a, N) == disc_brute(a, N)


@settings(max_examples=60)
@given(st.fractions(min_value=-10, max_value=10, max_denominator=10**6), st.integers(1, 512))
def test_discrepancy_invariances(a, N):
    d = discrepancy(a, N)
    assert discrepancy(a + 1, N) == d
    assert discrepancy(-a, N) == d
    assert 0 < d <= 1
    # a zero-length arc at a point already gives 1/N
    assert d >= Fraction(1, N)


def test_float_path_close_to_exact():
    rng = random.Random(3)
    for _ in range(50):
        x = rng.randrange(10**9) / (10**6 + rng.randrange(10**3)) * rng.choice([1, -1])
        N = rng.randint(1, 500)
        # the float input is itself an exact binary rational
        assert abs(discrepancy(x, N) - float(discrepancy(Fraction(x), N))) < 1e-12


def test_irrational_discrepancy_decays():
    assert discrepancy("sqrt(2)", 1000) < 0.01
    assert discrepancy("(1+sqrt(5))/2", 1000) < 0.01


@settings(max_examples=200)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=40),
       st.fractions(min_value=-3, max_value=3, max_denominator=40),
       st.integers(1, 6),
       st.sampled_from([Fraction(1, 5), Fraction(1, 10), Fraction(1, 40)]))
def test_fractional_part_facts(a, b, n, eps):
    for v in beatty.fractional_part_facts(a, b, n, eps).values():
        assert v in (None, True)


def test_nearest_and_distance():
    assert beatty.nearest_int(Fraction(1, 2)) == 1
    assert beatty.nearest_int(Fraction(-1, 2)) == 0
    assert beatty.dist_to_int(Fraction(7, 3)) == Fraction(1, 3)


def test_interval_classes_brute():
    bp = BeattyParams(Fraction(22, 7), Fraction(1, 3))
    J = (5, 205)
    counts = [[beatty.interval_class_count(J, bp, t, 3, k, 4) for k in range(4)] for t in range(3)]
    assert sum(map(sum, counts)) == 200
    for t in range(3):
        for k in range(4):
            ref = 0
            for n in range(*J):
                x = n * bp.alpha + bp.beta
                f = x - math.floor(x)
                ref += Fraction(t, 3) <= f < Fraction(t + 1, 3) and math.floor(x) % 4 == k
            assert counts[t][k] == ref
            assert abs(ref - 200 / 12) <= beatty.interval_class_bound(200, bp, 4)


def test_mean_discrepancy_sum_by_hand():
    rep = beatty.mean_discrepancy_profile(3, 10)
    assert rep.sum == sum(disc_brute(Fraction(d, 8), 10) for d in range(8))
    assert rep.normalized > 0


def test_geometric_sum_stat_direct():
    N, m, rho = 20, 6, 5
    M = 1 << rho
    direct = sum(abs(sum(np.exp(2j * np.pi * j * m * k / M) for j in range(N))) for k in range(M))
    got, shape = beatty.geometric_sum_stat(N, m, rho)
    assert abs(got - direct) < 1e-9
    assert got <= 2 * shape


def test_farey_sequence_matches_brute():
    for n in range(1, 25):
        assert beatty.farey_sequence(n) == farey_brute(n)


def test_farey_neighbors_properties():
    for n in range(1, 65):
        for (a, b), (c, d) in beatty.farey_neighbors(n):
            assert b * c - a * d == 1 and b + d > n


def test_farey_neighbors_by_mediant_insertion():
    seq = [Fraction(0), Fraction(1)]
    for n in range(2, 20):
        new = [seq[0]]
        for x, y in zip(seq, seq[1:]):
            if x.denominator + y.denominator == n:
                new.append(Fraction(x.numerator + y.numerator, n))
            new.append(y)
        seq = new
        pairs = [((x.numerator, x.denominator), (y.numerator, y.denominator)) for x, y in zip(seq, seq[1:])]
        assert beatty.farey_neighbors(n) == pairs


@settings(max_examples=300)
@given(st.fractions(min_value=0, max_value=40, max_denominator=500), st.integers(0, 3), st.integers(1, 3))
def test_farey_rule_against_brute(alpha, mu, sigma):
    fa = beatty.farey_approx_scaled(alpha, mu, sigma)
    n = 1 << (mu + sigma)
    assert Fraction(fa.p, fa.q) == farey_rule_brute(alpha / (1 << mu), n)
    assert fa.error(alpha) < Fraction(1, 1 << sigma)


@settings(max_examples=300)
@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**6), st.integers(0, 8), st.integers(1, 8))
def test_dirichlet_bound(alpha, mu, sigma):
    fa = beatty.farey_approx_scaled(alpha, mu, sigma)
    assert 1 <= fa.q <= 1 << (mu + sigma)
    assert math.gcd(fa.p, fa.q) == 1
    assert fa.error(alpha) < Fraction(1, 1 << sigma)


def test_farey_irrational_matches_rational_neighbour():
    fa = beatty.farey_approx_scaled("sqrt(2)", 2, 6)
    fb = beatty.farey_approx_scaled(Fraction(math.isqrt(2 * 10**40), 10**20), 2, 6)
    assert (fa.p, fa.q) == (fb.p, fb.q)
    assert fa.error("sqrt(2)") < 2**-6
