"""
Resource estimates
==================

Closed-form costs, with the o(1) terms of the L-notation set to zero.
"""

# %%
from hybridgnfs import estimator as est

for row in est.comparison_table(2048):
    print(f"{row.algorithm:7s} ln(time) {row.log_time_natural:8.2f}  qubits {row.qubits:9.1f}")

# %%
# where does the hybrid's qubit count drop below Shor's 2n + 3?
for base in ("e", "2"):
    rep = est.qubit_crossover(base)
    print(f"log base {base}: n* = {rep.n_star:.0f} bits (commonly quoted: {rep.quoted_n:.0e}, {rep.ratio_to_quoted:.0f}x larger)")

# %%
# parallel Grover: K machines only buy sqrt(K)
for K in (1, 1000, 10**6):
    c = est.grover_parallel_cost(128, K, 1e-9)
    print(f"K={K:>8}: 2^{c.log2_per_machine_calls:.2f} calls each, {c.wall_time_years:8.3f} years")
