import csv
import io
import json
import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridgnfs import estimator as est


def test_exponent_constants():
    assert round(est.GNFS_EXPONENT, 4) == 1.9230
    assert round(est.HYBRID_EXPONENT, 4) == 1.3867


@given(st.integers(20, 5000))
def test_l13_matches_mpmath(bits):
    N = mpmath.mpf(2) ** bits
    lnN = mpmath.log(N)
    want = float(lnN ** (mpmath.mpf(1) / 3) * mpmath.log(lnN) ** (mpmath.mpf(2) / 3))
    assert est.ln_l13_bits(bits) == pytest.approx(want, rel=1e-12)
    assert est.ln_l13(2**bits) == pytest.approx(want, rel=1e-12)


def test_time_ratio():
    N = 2**1024
    assert est.hybrid_time(N) / est.gnfs_time(N) == pytest.approx(est.HYBRID_EXPONENT / est.GNFS_EXPONENT)
    assert est.l13(2**64) == pytest.approx(math.exp(est.ln_l13(2**64)))


def test_shor_cost():
    c = est.shor_cost(2048)
    assert c.qubits == 4099
    assert c.cycles_estimate == pytest.approx(1e10)
    assert est.shor_cost(4096).cycles_estimate == pytest.approx(8e10)


def test_hybrid_qubits_formula():
    x = 2048 ** (2 / 3)
    assert est.hybrid_qubits(2048, "e") == pytest.approx(8 * x + 4 * x * math.log(1.44 * x))
    assert est.hybrid_qubits(2048, "2") == pytest.approx(8 * x + 4 * x * math.log2(1.44 * x))
    assert est.hybrid_qubits(2048, "e") == pytest.approx(4804.37, abs=0.01)
    with pytest.raises(ValueError):
        est.hybrid_qubits(2048, "10")


@pytest.mark.parametrize("base", ["e", "2"])
def test_crossover_converges(base):
    rep = est.qubit_crossover(base)
    n = rep.n_star
    assert est.hybrid_qubits(n * (1 - 1e-5), base) > 2 * n * (1 - 1e-5) + 3
    assert est.hybrid_qubits(n * (1 + 1e-5), base) < 2 * n * (1 + 1e-5) + 3
    assert rep.quoted_n == 4e5
    assert rep.ratio_to_quoted > 10


def test_crossover_is_unique():
    # the gap changes sign exactly once on a log grid
    for base in ("e", "2"):
        signs = [est.hybrid_qubits(10**e, base) > 2 * 10**e + 3 for e in [1 + i / 20 for i in range(160)]]
        assert sum(a != b for a, b in zip(signs, signs[1:])) == 1


def test_crossover_bad_bracket():
    with pytest.raises(est.CrossoverError):
        est.qubit_crossover("e", lo=1e6, hi=1e9)


def test_parallel_grover_halving():
    a = est.grover_parallel_cost(128, 1, 1e-9)
    b = est.grover_parallel_cost(128, 4, 1e-9)
    assert a.log2_per_machine_calls == 64
    assert b.wall_time_s == pytest.approx(a.wall_time_s / 2)
    with pytest.raises(ValueError):
        est.grover_parallel_cost(10, 2**11, 1e-9)


def test_comparison_table_qubits():
    rows = {r.algorithm: r for r in est.comparison_table(2048)}
    assert rows["gnfs"].qubits == 0
    assert rows["shor"].qubits == 4096
    assert rows["hybrid"].qubits == est.hybrid_qubits(2048)
    assert rows["hybrid"].log_time_natural < rows["gnfs"].log_time_natural


def test_csv_and_json_round_trip():
    rows = est.comparison_table(1024)
    text = est.profiles_to_csv(rows)
    assert text.splitlines()[0] == "algorithm,n,log_time_natural,qubits,notes"
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert [p["algorithm"] for p in parsed] == ["gnfs", "shor", "hybrid"]
    assert json.loads(est.profiles_to_json(rows))[1]["qubits"] == 2048


def test_reference_points():
    refs = {r.source: r for r in est.reference_points()}
    assert refs["gidney-ekera"].qubits == 2e7
    assert refs["gidney-ekera"].wall_time_s == 8 * 3600
    assert refs["yamaguchi"].qubits == 10241
