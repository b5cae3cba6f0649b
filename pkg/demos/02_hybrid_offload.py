"""
Offloading tiles to a simulated Grover engine
=============================================

The region is cut into tiles expected to hold one relation each. Every tile
goes to the engine, which returns one pair or nothing; pairs are re-checked
classically.
"""

# %%
from hybridgnfs import FactorConfig, factor
from hybridgnfs.gnfs.polynomial import select_polynomial
from hybridgnfs.hybrid import Region, estimate_smooth_density, partition_tiles
from hybridgnfs.numtheory import build_factor_base

poly = select_polynomial(100160063, 3)
base = build_factor_base(poly, 2000)
region = Region(-600, 600, 200, 260)

est = estimate_smooth_density(poly, base, region, samples=5000, seed=1)
tiles = partition_tiles(region, est.density)
print(f"density {est.density:.5f} +/- {est.half_width:.5f}; {len(tiles)} tiles of area ~{tiles[0].area}")

# %%
# same factor set in both modes; the hybrid report says where the bottoms came from
for eps in (0.0, 0.01):
    rep = factor(100160063, FactorConfig(mode="hybrid", noise_epsilon=eps, seed=3))
    off = rep.splits[0].offload
    print(f"eps={eps}: factors {rep.factors}, tiles {off['tiles_dispatched']}, "
          f"bottoms {off['bottoms_by_cause']}, oracle calls {off['oracle_calls_total']}")

# %%
print("classical:", factor(100160063).factors)
