import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from burgess.arith import (
    check_appendix_bounds,
    coprime_count,
    divisors,
    factorize,
    is_prime,
    profile,
    sieve_profiles,
    squarefree_divisors,
)
from oracles import (
    frac_error,
    naive_coprime_count,
    naive_d,
    naive_is_prime,
    naive_mu,
    naive_omega,
    naive_phi,
    trial_factor,
)


def test_is_prime_small_range():
    for n in range(-3, 5000):
        assert is_prime(n) == naive_is_prime(n), n


@pytest.mark.parametrize("n", [561, 1105, 1729, 2465, 3215031751, 3825123056546413051])
def test_strong_pseudoprimes_rejected(n):
    assert not is_prime(n)


@pytest.mark.parametrize("p", [2**31 - 1, 2**61 - 1, 18446744073709551557, 999999999989])
def test_large_primes(p):
    assert is_prime(p)


def test_factorize_examples():
    assert factorize(1).factors == ()
    assert list(factorize(12)) == [(2, 2), (3, 1)]
    assert list(factorize(2**61 - 1)) == [(2**61 - 1, 1)]


def test_factorize_semiprime_beyond_trial_division():
    p, q = 1000003, 2147483647
    assert list(factorize(p * q)) == [(p, 1), (q, 1)]
    p, q = 2147483629, 2147483647
    assert list(factorize(p * q)) == [(p, 1), (q, 1)]


@pytest.mark.parametrize("n", [0, -5, 2**63])
def test_factorize_domain(n):
    with pytest.raises(ValueError):
        factorize(n)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=2**63 - 1))
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f) == n
    assert all(is_prime(p) for p in f.primes)
    assert list(f.primes) == sorted(f.primes)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=3000))
def test_profile_matches_enumeration(n):
    pr = profile(n)
    assert (pr.omega, pr.d, pr.phi, pr.mu) == (naive_omega(n), naive_d(n), naive_phi(n), naive_mu(n))
    assert dict(factorize(n)) == trial_factor(n)


def test_profile_examples():
    for n, want in [(1, (0, 1, 1, 1)), (10, (2, 4, 4, 1)), (360, (3, 24, 96, 0))]:
        pr = profile(n)
        assert (pr.omega, pr.d, pr.phi, pr.mu) == want


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert sorted(squarefree_divisors(12)) == [(1, 1), (2, -1), (3, -1), (6, 1)]


def test_coprime_count_examples():
    c = coprime_count(4, 6)
    assert c.count == 1 and c.error == Fraction(-1, 3) and c.within_bound
    c = coprime_count(1, 2)
    assert c.count == 1 and c.error == Fraction(1, 2) and c.bound == 1
    assert coprime_count(360, 360).count == 96 and coprime_count(360, 360).error == 0
    with pytest.raises(ValueError):
        coprime_count(7, 6)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 600).flatmap(lambda q: st.tuples(st.integers(1, q), st.just(q))))
def test_coprime_count_oracle(aq):
    A, q = aq
    c = coprime_count(A, q)
    assert c.count == naive_coprime_count(A, q)
    assert c.error == frac_error(A, q)
    assert abs(c.error) < Fraction(2 ** naive_omega(q), 2)


def test_appendix_examples():
    c3 = check_appendix_bounds(3)
    assert c3.phi_holds
    assert check_appendix_bounds(4).divisor_holds
    assert check_appendix_bounds(6).omega_holds
    with pytest.raises(ValueError):
        check_appendix_bounds(2)


def test_appendix_phi_value_at_3():
    L = math.log(math.log(3))
    bound = 3 / (math.exp(0.5772156649015329) * L + 3 / L)
    assert bound == pytest.approx(0.0936, abs=5e-4)
    assert check_appendix_bounds(3).phi_slack == pytest.approx(2 - bound)


def test_sieve_matches_profile():
    s = sieve_profiles(3000)
    for n in range(1, 3001):
        pr = profile(n)
        assert (s["omega"][n], s["d"][n], s["phi"][n], s["mu"][n]) == (pr.omega, pr.d, pr.phi, pr.mu)
    assert s["phi"].dtype == np.int64
