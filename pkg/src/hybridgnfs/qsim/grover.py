"""Amplitude-amplification sampler.

Grover search with ``k`` marked items out of ``T`` stays in the plane spanned
by the marked and unmarked uniform states, so a run of ``r`` iterations is
fully described by ``sin((2r+1) theta)**2`` with ``sin(theta)**2 = k/T``.
The sampler draws outcomes from that probability instead of evolving a
``T``-dimensional statevector.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

SCHEDULES = ("optimal", "half-length", "boyer")
CAUSES = ("empty", "multi", "noise", "unlucky-measurement")
BOYER_GROWTH = 6 / 5


def grover_success_prob(T: int, k: int, r: int) -> float:
    """Probability that measuring after ``r`` iterations yields a marked item."""
    if T < 1 or k < 0:
        raise ValueError("need T >= 1 and k >= 0")
    if k > T:
        raise ValueError(f"k={k} exceeds T={T}")
    if k == 0:
        return 0.0
    theta = math.asin(math.sqrt(k / T))
    return math.sin((2 * r + 1) * theta) ** 2


def optimal_iterations(T: int, k: int = 1) -> int:
    """``floor(pi/4 * sqrt(T/k))``, at least 1."""
    if k < 1 or k > T:
        raise ValueError(f"need 1 <= k <= T, got k={k}, T={T}")
    return max(1, math.floor(math.pi / 4 * math.sqrt(T / k)))


def half_length_iterations(T: int) -> int:
    """Iteration count for a run ``1/sqrt(2)`` as long as the one-solution optimum."""
    return math.floor(optimal_iterations(T, 1) / math.sqrt(2))


@dataclass(frozen=True)
class GroverConfig:
    """How a tile search is run.

    ``iterations`` overrides ``schedule`` when set. ``max_oracle_calls``
    defaults to three times the one-solution optimum for ``boyer`` and to
    unlimited otherwise. ``false_found`` is the chance that a noise event
    returns an arbitrary item instead of nothing.
    """

    schedule: str = "optimal"
    iterations: int | None = None
    noise_epsilon: float = 1e-3
    false_found: float = 0.0
    max_oracle_calls: int | None = None

    def __post_init__(self):
        if self.schedule not in SCHEDULES:
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if not 0 <= self.noise_epsilon < 1:
            raise ValueError("noise_epsilon must be in [0, 1)")
        if not 0 <= self.false_found <= 1:
            raise ValueError("false_found must be in [0, 1]")
        if self.max_oracle_calls is not None and self.max_oracle_calls < 1:
            raise ValueError("max_oracle_calls must be >= 1")
        if self.iterations is not None and self.iterations < 0:
            raise ValueError("iterations must be >= 0")

    def budget(self, T: int) -> int | None:
        if self.max_oracle_calls is not None:
            return self.max_oracle_calls
        if self.schedule == "boyer" and self.iterations is None:
            return 3 * optimal_iterations(T, 1)
        return None

    def fixed_iterations(self, T: int) -> int:
        if self.iterations is not None:
            return self.iterations
        if self.schedule == "half-length":
            return half_length_iterations(T)
        return optimal_iterations(T, 1)


@dataclass(frozen=True)
class GroverOutcome:
    """``item`` is the measured index, or ``None`` for bottom.

    ``cause``, ``marked`` and ``spurious`` are simulation-side ground truth;
    a real engine would not report them.
    """

    item: int | None
    cause: str | None
    oracle_calls: int
    marked: int
    spurious: bool = False

    @property
    def found(self) -> bool:
        return self.item is not None


def boyer_schedule(T: int, seed=None) -> Iterator[int]:
    """Random iteration counts for an unknown number of solutions.

    Each round draws ``j`` uniformly from the integers below ``m``, then
    grows ``m`` by 6/5 up to ``sqrt(T)``. Infinite; the caller stops it.
    """
    if T < 2:
        raise ValueError("boyer schedule needs T >= 2")
    rng = np.random.default_rng(seed)
    m = 1.0
    cap = math.sqrt(T)
    while True:
        yield int(rng.integers(0, math.ceil(m)))
        m = min(BOYER_GROWTH * m, cap)


def _marked_items(oracle, T: int) -> np.ndarray:
    if callable(oracle):
        return np.array([i for i in range(T) if oracle(i)], dtype=np.int64)
    table = np.asarray(oracle, dtype=bool)
    if table.shape != (T,):
        raise ValueError(f"oracle table has shape {table.shape}, expected ({T},)")
    return np.flatnonzero(table)


def run_grover_tile(
    oracle: Callable[[int], bool] | Sequence[bool] | np.ndarray,
    T: int,
    config: GroverConfig = GroverConfig(),
    seed=None,
) -> GroverOutcome:
    """Simulate one offloaded search over ``0..T-1``.

    ``oracle`` is a predicate or a boolean truth table. The iteration count
    assumes exactly one solution, as the tile calibration promises; the real
    number of solutions only enters through the success probability.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    rng = np.random.default_rng(seed)
    marked = _marked_items(oracle, T)
    k = len(marked)
    if config.schedule == "boyer" and config.iterations is None:
        return _run_boyer(marked, T, config, rng)

    r = config.fixed_iterations(T)
    budget = config.budget(T)
    calls = r if budget is None else min(r, budget)
    if calls < r:
        return GroverOutcome(None, "empty" if k == 0 else "multi", calls, k)
    survived = rng.random() < (1 - config.noise_epsilon) ** calls
    if not survived:
        if rng.random() < config.false_found:
            return GroverOutcome(int(rng.integers(T)), "noise", calls, k, spurious=True)
        return GroverOutcome(None, "empty" if k == 0 else "noise", calls, k)
    if k and rng.random() < grover_success_prob(T, k, r):
        return GroverOutcome(int(marked[rng.integers(k)]), None, calls, k)
    return GroverOutcome(None, _bottom_cause(k), calls, k)


def _bottom_cause(k: int) -> str:
    if k == 0:
        return "empty"
    return "multi" if k >= 2 else "unlucky-measurement"


def _run_boyer(marked: np.ndarray, T: int, config: GroverConfig, rng: np.random.Generator) -> GroverOutcome:
    k = len(marked)
    budget = config.budget(T)
    calls = 0
    noisy = False
    for j in boyer_schedule(max(T, 2), rng):
        j = min(j, budget - calls)
        calls += j
        if rng.random() >= (1 - config.noise_epsilon) ** j:
            noisy = True
            if rng.random() < config.false_found:
                return GroverOutcome(int(rng.integers(T)), "noise", calls, k, spurious=True)
        elif k and rng.random() < grover_success_prob(T, k, j):
            return GroverOutcome(int(marked[rng.integers(k)]), None, calls, k)
        if calls >= budget:
            break
    if k == 0:
        cause = "empty"
    elif k >= 2:
        cause = "multi"
    else:
        cause = "noise" if noisy else "unlucky-measurement"
    return GroverOutcome(None, cause, calls, k)
