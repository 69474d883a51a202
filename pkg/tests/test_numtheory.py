import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autopsy.errors import NotInvertible, OracleRefused
from autopsy.numtheory import (
    dlog_bruteforce, ext_gcd, gen_params, is_generator, is_probable_prime,
    mod_exp, mod_inverse, solve_linear_congruence,
)


def naive_pow(base, e, p):
    acc = 1 % p
    for _ in range(e):
        acc = acc * base % p
    return acc


def trial_division_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


# -- ext_gcd -------------------------------------------------------------------

def test_ext_gcd_base_case():
    assert ext_gcd(17, 0) == (17, 1, 0)


def test_ext_gcd_with_unit():
    assert ext_gcd(7, 1) == (1, 0, 1)


def test_ext_gcd_240_46():
    # divisor scan of 240 and 46 gives gcd 2
    g, a, b = ext_gcd(240, 46)
    assert g == 2
    assert 240 * a + 46 * b == 2


def test_ext_gcd_rejects_double_zero():
    with pytest.raises(ValueError):
        ext_gcd(0, 0)


def test_ext_gcd_negative_inputs():
    g, a, b = ext_gcd(-12, 18)
    assert g == 6 and -12 * a + 18 * b == 6


def test_ext_gcd_random_pairs():
    rng = random.Random(2024)
    for _ in range(10_000):
        a, b = rng.getrandbits(256), rng.getrandbits(rng.randint(1, 256))
        if a == 0 and b == 0:
            continue
        g, alpha, beta = ext_gcd(a, b)
        assert alpha * a + beta * b == g
        assert g >= 0 and a % g == 0 and b % g == 0


# -- mod_exp -------------------------------------------------------------------

def test_mod_exp_examples():
    assert mod_exp(5, 0, 23) == 1
    assert mod_exp(5, 3, 23) == 10
    for a in range(1, 23):
        assert mod_exp(a, 22, 23) == 1


@settings(max_examples=300, deadline=None)
@given(base=st.integers(0, 1 << 16), e=st.integers(0, 1023), p=st.integers(2, (1 << 16) - 1))
def test_mod_exp_matches_repeated_multiplication(base, e, p):
    assert mod_exp(base, e, p) == naive_pow(base, e, p)


# -- mod_inverse ---------------------------------------------------------------

def test_mod_inverse_examples():
    assert mod_inverse(1, 10) == 1
    assert mod_inverse(3, 10) == 7


def test_mod_inverse_not_invertible_carries_gcd():
    with pytest.raises(NotInvertible) as info:
        mod_inverse(2, 10)
    assert info.value.gcd == 2


@given(a=st.integers(-10**6, 10**6), m=st.integers(2, 10**6))
def test_mod_inverse_property(a, m):
    try:
        inv = mod_inverse(a, m)
    except NotInvertible:
        return
    assert inv * a % m == 1


# -- gen_params ----------------------------------------------------------------

def test_gen_params_8_bits_exhaustive():
    params = gen_params(8, seed=1)
    p, g = params.p, params.g
    assert 1 << 7 <= p < 1 << 8
    assert trial_division_prime(p) and trial_division_prime((p - 1) // 2)
    # g generates the whole group: enumerate its powers
    assert len({naive_pow(g, e, p) for e in range(p - 1)}) == p - 1
    assert params == gen_params(8, seed=1)


@pytest.mark.parametrize("bits", [4, 7, 513])
def test_gen_params_range(bits):
    with pytest.raises(ValueError):
        gen_params(bits, seed=0)


@pytest.mark.parametrize("bits", [16, 32, 64, 128])
def test_gen_params_safe_prime(bits):
    params = gen_params(bits, seed=bits)
    assert params.p.bit_length() == bits
    assert is_probable_prime(params.p) and is_probable_prime((params.p - 1) // 2)
    assert is_generator(params.g, params.p)


def test_gen_params_seed_changes_output():
    assert len({gen_params(32, s).p for s in range(20)}) > 1


def test_primality_against_trial_division():
    for n in range(5000):
        assert is_probable_prime(n) == trial_division_prime(n)
    # Carmichael numbers
    for n in (561, 1105, 1729, 2465, 2821, 6601, 8911, 41041, 825265):
        assert not is_probable_prime(n)


# -- dlog ----------------------------------------------------------------------

def test_dlog_examples():
    assert dlog_bruteforce(5, 1, 23) == 0
    assert dlog_bruteforce(5, 10, 23) == 3
    assert dlog_bruteforce(5, 5, 23) == 1


def test_dlog_not_found():
    # 4 is a square mod 23 so its powers miss the non-residue 5
    assert dlog_bruteforce(4, 5, 23) is None


def test_dlog_guard():
    with pytest.raises(OracleRefused):
        dlog_bruteforce(2, 3, (1 << 20) + 7)


def test_dlog_round_trip_small_primes():
    for seed in range(4):
        params = gen_params(12, seed)
        p, g = params.p, params.g
        order = p - 1
        for x in range(0, order, 7):
            assert dlog_bruteforce(g, mod_exp(g, x, p), p) == x % order
        # element of order 2
        assert dlog_bruteforce(p - 1, mod_exp(p - 1, 3, p), p) == 1


def test_solve_linear_congruence_matches_scan():
    rng = random.Random(5)
    for _ in range(300):
        m = rng.randint(2, 60)
        a, b = rng.randrange(m), rng.randrange(m)
        expected = [x for x in range(m) if (a * x - b) % m == 0]
        assert sorted(solve_linear_congruence(a, b, m)) == expected
