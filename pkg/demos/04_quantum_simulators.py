"""
Grover and Shor at toy sizes
============================
"""

# %%
import numpy as np

from hybridgnfs.qsim.grover import GroverConfig, grover_success_prob, optimal_iterations, run_grover_tile

T = 1024
r = optimal_iterations(T)
for k in (1, 2, 4):
    print(f"k={k}: success after {r} iterations = {grover_success_prob(T, k, r):.4f}")

# %%
# more marked items than the schedule assumes can make things worse, not better
table = np.zeros(T, dtype=bool)
table[:4] = True
rng = np.random.default_rng(0)
for schedule in ("optimal", "boyer"):
    outs = [run_grover_tile(table, T, GroverConfig(schedule=schedule, noise_epsilon=0), rng) for _ in range(2000)]
    print(f"{schedule:8s} found {sum(o.found for o in outs) / 2000:.3f}, "
          f"mean calls {np.mean([o.oracle_calls for o in outs]):.1f}")

# %%
from hybridgnfs.qsim.shor import measurement_distribution, shor_factor

probs = measurement_distribution(15, 7, 8)
peaks = np.flatnonzero(probs > 1e-9)
print("N=15, a=7 peaks at", peaks.tolist(), "each with probability", np.round(probs[peaks], 4).tolist())

# %%
for N in (15, 21):
    run = shor_factor(N, seed=1)
    print(N, "->", sorted(run.factors), "after", len(run.attempts), "attempt(s)")
