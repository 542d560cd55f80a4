import numpy as np
import pytest
from hypothesis import given, strategies as st

from psthue.digitcore import (
    DigitWindow, Word, all_words, e_dyadic, e_frac, frac, nu2, popcount_array,
    sum_digits, sum_digits_window, thue_morse, thue_morse_array, thue_morse_prefix,
    truncated_sum_digits,
)


def bit_loop(n):
    s = 0
    while n:
        s += n & 1
        n >>= 1
    return s


def tm_by_substitution(k):
    # 0 -> 01, 1 -> 10, iterated k times
    w = [0]
    for _ in range(k):
        w = [x for b in w for x in ((0, 1) if b == 0 else (1, 0))]
    return w


def test_popcount_matches_bit_loop_small_range():
    n = np.arange(1 << 16)
    expect = np.array([bit_loop(int(v)) for v in n])
    assert np.array_equal(popcount_array(n), expect)


@given(st.integers(0, 1 << 200))
def test_sum_digits_bit_loop(n):
    assert sum_digits(n) == bit_loop(n)


@given(st.integers(0, 1 << 80), st.integers(0, 90))
def test_truncated_is_low_bits(n, lam):
    assert truncated_sum_digits(n, lam) == bit_loop(n % (1 << lam))


@given(st.integers(0, 1 << 70), st.integers(0, 40), st.integers(0, 40))
def test_window_difference_and_period(n, a, b):
    mu, lam = min(a, b), max(a, b)
    w = DigitWindow(mu, lam)
    v = sum_digits_window(n, w)
    assert v == truncated_sum_digits(n, lam) - truncated_sum_digits(n, mu)
    assert sum_digits_window(n + (1 << lam), w) == v


def test_window_rejects_bad_order():
    with pytest.raises(ValueError):
        DigitWindow(3, 2)
    with pytest.raises(ValueError):
        sum_digits(-1)


def test_thue_morse_against_substitution():
    w = tm_by_substitution(12)
    assert thue_morse_prefix(len(w)).tolist() == w
    assert [thue_morse(n) for n in range(64)] == w[:64]


def test_first_sixteen_terms():
    assert thue_morse_prefix(16).tolist() == [0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0]


def test_array_object_path_for_big_ints():
    big = np.array([1 << 70, (1 << 70) + 1, 3], dtype=object)
    assert thue_morse_array(big).tolist() == [1, 0, 0]
    assert popcount_array(big).tolist() == [1, 2, 2]


@given(st.integers(0, 1 << 20))
def test_tm_recurrences(n):
    assert thue_morse(2 * n) == thue_morse(n)
    assert thue_morse(2 * n + 1) == 1 - thue_morse(n)


def test_word_code_round_trip():
    for L in range(1, 6):
        words = all_words(L)
        assert len(set(words)) == 1 << L
        for c, w in enumerate(words):
            assert w.code == c
            assert Word.parse(str(w)) == w
    assert Word.parse("100").code == 4
    with pytest.raises(ValueError):
        Word.parse("102")


def test_frac_and_e():
    from fractions import Fraction
    assert frac(Fraction(-1, 3)) == Fraction(2, 3)
    assert e_frac(Fraction(1, 2)) == -1
    assert e_frac(Fraction(5, 4)) == 1j
    assert abs(e_frac(0.125) - np.exp(2j * np.pi / 8)) < 1e-15
    assert e_dyadic(3, 2) == -1j
    assert abs(e_dyadic(-1, 3) - np.exp(-2j * np.pi / 8)) < 1e-15


@given(st.integers(1, 1 << 64))
def test_nu2(n):
    k = nu2(n)
    assert n % (1 << k) == 0 and (n >> k) & 1 == 1
