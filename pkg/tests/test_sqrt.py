import math
import random

import pytest

from hybridgnfs.errors import AlgebraicSqrtError
from hybridgnfs.gnfs.linalg import column_layout, preprocess_matrix, solve_nullspace
from hybridgnfs.gnfs.polynomial import select_polynomial
from hybridgnfs.gnfs.relations import classical_relation_search
from hybridgnfs.gnfs.sqrt import (
    algebraic_sqrt,
    congruent_squares,
    extract_factor,
    field_sqrt,
    inert_prime,
    mul,
    poly_roots_mod,
    power,
)
from hybridgnfs.numtheory import build_factor_base


def test_inert_prime_has_no_roots(small_poly):
    q = inert_prime(small_poly, 1000)
    assert q > 1000
    assert not poly_roots_mod(list(small_poly.coeffs), q)


def test_field_sqrt_squares_back(small_poly):
    f = small_poly.coeffs
    q = inert_prime(small_poly, 100)
    rng = random.Random(5)
    for _ in range(20):
        u = [rng.randrange(q) for _ in range(3)]
        sq = mul(u, u, f, q)
        r = field_sqrt(sq, f, q)
        assert mul(r, r, f, q) == sq


def test_algebraic_sqrt_of_exact_square(small_poly):
    f = small_poly.coeffs
    rng = random.Random(11)
    for _ in range(10):
        g = [rng.randint(-(10**30), 10**30) for _ in range(3)]
        delta = mul(g, g, f)
        root = algebraic_sqrt(delta, small_poly)
        assert root in (g, [-c for c in g])


def test_algebraic_sqrt_rejects_non_square(small_poly):
    with pytest.raises(AlgebraicSqrtError):
        algebraic_sqrt([2, 0, 0], small_poly)


@pytest.fixture(scope="module")
def run_45113():
    poly = select_polynomial(45113, 3)
    base = build_factor_base(poly, 100)
    rels = classical_relation_search(poly, base, 100, 65).relations
    deps = solve_nullspace(preprocess_matrix(rels, base))
    return poly, base, rels, deps


def test_congruent_squares(run_45113):
    poly, base, rels, deps = run_45113
    for dep in deps[:5]:
        x, y = congruent_squares(poly, base, rels, dep)
        assert (x * x - y * y) % 45113 == 0


def test_extract_factor_divides(run_45113):
    poly, base, rels, deps = run_45113
    found = set()
    for dep in deps:
        g = extract_factor(poly, base, rels, dep)
        if g is not None:
            assert 45113 % g == 0 and 1 < g < 45113
            found.add(g)
    assert found <= {197, 229} and found


def test_degree_one_squares():
    poly = select_polynomial(10403, 1)
    base = build_factor_base(poly, 300)
    rels = classical_relation_search(poly, base, 2000, column_layout(base)["total"] + 10).relations
    deps = solve_nullspace(preprocess_matrix(rels, base))
    hits = set()
    for dep in deps:
        x, y = congruent_squares(poly, base, rels, dep)
        assert (x * x - y * y) % 10403 == 0
        g = math.gcd(x - y, 10403)
        if 1 < g < 10403:
            hits.add(g)
    assert hits <= {101, 103}


def test_power_matches_repeated_mul(small_poly):
    f = small_poly.coeffs
    u = [3, 1, 4]
    acc = [1, 0, 0]
    for _ in range(7):
        acc = mul(acc, u, f, 10007)
    assert power(u, 7, f, 10007) == acc
