import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridgnfs.qsim.grover import (
    GroverConfig,
    boyer_schedule,
    grover_success_prob,
    half_length_iterations,
    optimal_iterations,
    run_grover_tile,
)


def statevector_success(T, k, r):
    # explicit T-dimensional evolution as an independent check of the closed form
    marked = np.zeros(T, dtype=bool)
    marked[:k] = True
    psi = np.full(T, 1 / math.sqrt(T))
    for _ in range(r):
        psi[marked] *= -1
        psi = 2 * psi.mean() - psi
    return float(np.sum(psi[marked] ** 2))


@pytest.mark.parametrize("T,k,r", [(16, 1, 3), (64, 2, 4), (256, 1, 12), (100, 7, 2), (32, 0, 4)])
def test_closed_form_matches_statevector(T, k, r):
    assert grover_success_prob(T, k, r) == pytest.approx(statevector_success(T, k, r), abs=1e-12)


@given(st.integers(1, 10**6), st.integers(0, 100))
def test_probability_bounds(T, r):
    k = min(T, 1 + T // 7)
    assert 0 <= grover_success_prob(T, k, r) <= 1
    assert grover_success_prob(T, 0, r) == 0


def test_iteration_counts():
    assert optimal_iterations(1024) == 25
    assert optimal_iterations(4, 1) == 1
    assert half_length_iterations(1024) == math.floor(25 / math.sqrt(2))
    with pytest.raises(ValueError):
        optimal_iterations(10, 0)


def test_empty_tile_always_bottom():
    table = np.zeros(256, dtype=bool)
    for schedule in ("optimal", "half-length", "boyer"):
        cfg = GroverConfig(schedule=schedule, noise_epsilon=0.01)
        outs = [run_grover_tile(table, 256, cfg, seed) for seed in range(500)]
        assert all(not o.found and o.cause == "empty" for o in outs)


def test_found_item_is_marked():
    table = np.zeros(100, dtype=bool)
    table[[3, 50]] = True
    for seed in range(200):
        out = run_grover_tile(table, 100, GroverConfig(noise_epsilon=0), seed)
        if out.found:
            assert table[out.item]


def test_callable_oracle_equivalent_to_table():
    table = np.zeros(64, dtype=bool)
    table[17] = True
    for seed in range(20):
        a = run_grover_tile(table, 64, GroverConfig(), seed)
        b = run_grover_tile(lambda i: i == 17, 64, GroverConfig(), seed)
        assert a == b


def test_noise_reduces_success():
    table = np.zeros(1024, dtype=bool)
    table[5] = True
    cfg = GroverConfig(noise_epsilon=0.05)
    outs = [run_grover_tile(table, 1024, cfg, s) for s in range(3000)]
    rate = sum(o.found for o in outs) / len(outs)
    expect = 0.95**25 * grover_success_prob(1024, 1, 25)
    assert abs(rate - expect) < 4 * math.sqrt(expect * (1 - expect) / len(outs))
    assert any(o.cause == "noise" for o in outs)


def test_false_found_channel_flags_spurious():
    table = np.zeros(64, dtype=bool)
    cfg = GroverConfig(noise_epsilon=0.5, false_found=1.0)
    outs = [run_grover_tile(table, 64, cfg, s) for s in range(100)]
    assert any(o.spurious for o in outs)
    assert all(o.cause == "noise" for o in outs if o.spurious)


def test_boyer_schedule_grows_to_cap():
    gen = boyer_schedule(400, seed=1)
    draws = [next(gen) for _ in range(200)]
    assert all(0 <= j < 20 for j in draws)
    assert max(draws[-50:]) > 10


def test_boyer_budget_respected():
    table = np.zeros(1024, dtype=bool)
    table[:3] = True
    cfg = GroverConfig(schedule="boyer", noise_epsilon=0)
    outs = [run_grover_tile(table, 1024, cfg, s) for s in range(300)]
    assert all(o.oracle_calls <= 3 * optimal_iterations(1024) for o in outs)
    assert sum(o.found for o in outs) / 300 > 0.8


def test_config_validation():
    with pytest.raises(ValueError):
        GroverConfig(schedule="fast")
    with pytest.raises(ValueError):
        GroverConfig(noise_epsilon=1.0)
