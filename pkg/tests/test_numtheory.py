import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridgnfs.gnfs.polynomial import select_polynomial
from hybridgnfs.numtheory import (
    ExponentVector,
    FactorBase,
    build_factor_base,
    factor_over_base,
    is_prime,
    is_smooth,
    next_prime,
    poisson_pmf,
    poisson_tail,
    poly_roots_mod,
    primes_up_to,
    trial_divide,
)

BASE_1000 = FactorBase(1000, primes_up_to(1000), [])


def sympy_smooth(x, bound):
    return all(p <= bound for p in sympy.factorint(abs(x)))


def test_primes_up_to_matches_sympy():
    for bound in (0, 1, 2, 3, 10, 97, 100, 1000, 65537):
        assert primes_up_to(bound) == list(sympy.primerange(2, bound + 1))


@given(st.integers(min_value=-(10**6), max_value=10**6))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_next_prime():
    assert next_prime(100) == 101
    assert next_prime(101) == 103
    assert next_prime(1) == 2


@given(st.integers(min_value=1, max_value=10**6), st.sampled_from([-1, 1]))
def test_smoothness_oracle(x, sign):
    x *= sign
    assert is_smooth(x, BASE_1000) == sympy_smooth(x, 1000)


@given(st.integers(min_value=1, max_value=10**6), st.sampled_from([-1, 1]))
def test_factor_over_base_round_trip(x, sign):
    x *= sign
    vec = factor_over_base(x, BASE_1000)
    if vec is None:
        assert not sympy_smooth(x, 1000)
        return
    assert vec.value(BASE_1000.rational_primes) == x
    want = {BASE_1000.rational_index[p]: e for p, e in sympy.factorint(abs(x)).items()}
    assert vec.entries == want


def test_zero_is_rejected():
    with pytest.raises(ValueError):
        is_smooth(0, BASE_1000)
    with pytest.raises(ValueError):
        factor_over_base(0, BASE_1000)


def test_smooth_products_of_large_powers():
    x = 2**40 * 997**3 * 3
    assert is_smooth(x, BASE_1000)
    assert factor_over_base(x, BASE_1000).value(BASE_1000.rational_primes) == x
    assert not is_smooth(x * 1009, BASE_1000)


@given(st.integers(min_value=2, max_value=10**6))
def test_trial_divide_cofactor(x):
    entries, rest = trial_divide(x, BASE_1000.rational_primes)
    assert math.prod(BASE_1000.rational_primes[i] ** e for i, e in entries.items()) * rest == x
    assert rest == 1 or sympy.isprime(rest)


def test_exponent_vector_parity():
    v = ExponentVector({0: 3, 1: 2, 4: 1}, -1)
    assert v.parity() == frozenset({0, 4})
    assert v.value([2, 3, 5, 7, 11]) == -(8 * 9 * 11)


@settings(max_examples=200)
@given(
    st.lists(st.integers(min_value=-50, max_value=50), min_size=2, max_size=4),
    st.sampled_from([2, 3, 5, 7, 11, 13, 101, 997]),
)
def test_poly_roots_mod_brute_force(coeffs, p):
    want = [r for r in range(p) if sum(c * r**i for i, c in enumerate(coeffs)) % p == 0]
    assert poly_roots_mod(coeffs, p) == want


def test_factor_base_structure(small_poly):
    base = build_factor_base(small_poly, 100, num_characters=6)
    f = small_poly.coeffs
    assert base.rational_primes == primes_up_to(100)
    for p, r in base.algebraic_primes:
        assert sum(c * r**i for i, c in enumerate(f)) % p == 0
    assert len(base.character_primes) == 6
    fprime = small_poly.derivative()
    for q, s in base.character_primes:
        assert q > 100
        assert sum(c * s**i for i, c in enumerate(f)) % q == 0
        assert sum(c * s**i for i, c in enumerate(fprime)) % q != 0
    assert base.primorial == math.prod(primes_up_to(100))


def test_factor_base_skips_primes_dividing_n():
    poly = select_polynomial(1009 * 1013, 3)
    base = build_factor_base(poly, 1000, num_characters=8)
    assert all(q not in (1009, 1013) for q, _ in base.character_primes)


@pytest.mark.parametrize("lam", [0.5, 1.0, 3.0, 10.0])
def test_poisson_pmf_normalised(lam):
    total = sum(poisson_pmf(k, lam) for k in range(200))
    assert total == pytest.approx(1.0, abs=1e-12)
    assert poisson_tail(0, lam) == pytest.approx(1.0)
    assert poisson_tail(3, lam) == pytest.approx(1 - sum(poisson_pmf(k, lam) for k in range(3)))


def test_poisson_values():
    assert poisson_pmf(0, 1) == pytest.approx(math.exp(-1))
    assert poisson_pmf(1, 1) == pytest.approx(0.3679, abs=1e-4)
    assert poisson_pmf(2, 1) == pytest.approx(0.1839, abs=1e-4)
    assert poisson_pmf(-1, 1) == 0.0
    with pytest.raises(ValueError):
        poisson_pmf(1, 0)
