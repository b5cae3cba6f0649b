"""
Factoring 45113 with the number field sieve
===========================================

Walks the pipeline one stage at a time: polynomial, factor base, relations,
GF(2) dependencies, square roots, gcd.
"""

# %%
from hybridgnfs.gnfs.linalg import column_layout, preprocess_matrix, solve_nullspace
from hybridgnfs.gnfs.polynomial import norm, select_polynomial
from hybridgnfs.gnfs.relations import classical_relation_search
from hybridgnfs.gnfs.sqrt import congruent_squares, extract_factor
from hybridgnfs.numtheory import build_factor_base

N = 45113
poly = select_polynomial(N, 3)
print(f"f(x) = {poly}, m = {poly.m}, f(m) = {poly(poly.m)}")

# %%
# factor base: rational primes, ideals (p, r) with f(r) = 0 mod p, character primes above B
base = build_factor_base(poly, 100)
layout = column_layout(base)
print(len(base.rational_primes), "primes,", len(base.algebraic_primes), "ideals,",
      len(base.character_primes), "characters ->", layout["total"], "columns")

# %%
rels = classical_relation_search(poly, base, M=100, target=layout["total"] + 10).relations
r = rels[0]
print(f"first relation (a, b) = ({r.a}, {r.b}): a+mb = {r.a + poly.m * r.b}, norm = {norm(poly, r.a, r.b)}")
print(len(rels), "relations, all round-trip:", all(x.check(poly, base) for x in rels))

# %%
matrix = preprocess_matrix(rels, base)
deps = solve_nullspace(matrix)
print(f"M1 = {matrix.m1} rows after filtering, {len(deps)} dependencies")

# %%
for dep in deps[:4]:
    x, y = congruent_squares(poly, base, rels, dep)
    print(f"{len(dep):3d} relations: x^2 - y^2 = {(x * x - y * y) % N} mod N, factor {extract_factor(poly, base, rels, dep)}")
