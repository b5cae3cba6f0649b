"""
How many relations does a tile hold?
====================================

Tiles are sized for one expected relation. If smooth pairs are scattered
like independent events the count per tile is Poisson(1): about 37% of tiles
empty, 37% with one, 18% with two.
"""

# %%
from hybridgnfs.gnfs.polynomial import select_polynomial
from hybridgnfs.hybrid import Region, tile_statistics
from hybridgnfs.numtheory import build_factor_base, poisson_pmf, poisson_tail

poly = select_polynomial(100160063, 3)
base = build_factor_base(poly, 30000, 0)
stats = tile_statistics(poly, base, Region(-400, 400, 1500, 1700), samples=80000, seed=0)

# %%
poisson = [poisson_pmf(0, 1), poisson_pmf(1, 1), poisson_pmf(2, 1), poisson_tail(3, 1)]
print(f"{stats.tiles} tiles of shape {stats.tile_shape}")
for k, got, want in zip(["0", "1", "2", "3+"], stats.fractions, poisson):
    print(f"  k={k:<2}  {got:.4f}  vs  {want:.4f}")
print(f"chi-square {stats.chi_square:.2f}, p = {stats.p_value:.4f}")
