import pytest
import sympy

from hybridgnfs import FactorConfig, factor
from hybridgnfs.errors import PipelineFailure
from hybridgnfs.gnfs.pipeline import SIZE_TABLE, default_parameters, nfs_split


def trial_division(n):
    return sorted(sympy.factorint(n, multiple=True))


@pytest.mark.parametrize("N", [15, 9, 2, 97, 2 * 3 * 5 * 7 * 11])
def test_small_inputs(N):
    assert factor(N).factors == trial_division(N)


def test_45113():
    report = factor(45113)
    assert report.factors == [197, 229]
    s = report.splits[0]
    assert s.polynomial == "x^3 + x^2 + 28*x + 33"
    assert s.relations >= s.columns
    assert s.m1 <= s.relations
    assert s.dependencies >= 1


def test_perfect_power_of_semiprime():
    report = factor(45113**2)
    assert report.factors == [197, 197, 229, 229]


def test_mixed_small_and_large():
    N = 3 * 3 * 1009 * 1013
    report = factor(N)
    assert report.factors == trial_division(N)
    assert report.stripped == [3, 3]


@pytest.mark.parametrize("degree", [2, 3])
def test_degree_override(degree):
    assert factor(1022117, FactorConfig(degree=degree)).factors == [1009, 1013]


def test_degree_one_rational_sieve():
    report = factor(10403, FactorConfig(degree=1, B=300, M=2000))
    assert report.factors == [101, 103]
    assert report.splits[0].m == 10403


def test_small_prime_in_factor_base_is_early_exit():
    report = factor(187, FactorConfig(degree=1, B=50, trial_bound=3))
    assert report.factors == [11, 17]
    assert report.splits[0].early is not None


def test_deterministic_report():
    a = factor(100160063).as_dict()
    b = factor(100160063, FactorConfig(workers=4)).as_dict()
    assert a == b


def test_failure_carries_stats():
    cfg = FactorConfig(M=3, max_enlargements=0)
    with pytest.raises(PipelineFailure) as info:
        nfs_split(1022117, cfg)
    assert info.value.stats["N"] == 1022117
    assert info.value.stats["enlargements"] == 1


def test_size_ceiling():
    with pytest.raises(ValueError):
        factor(2**80 + 1)


def test_default_parameters_table():
    assert default_parameters(45113) == (100, 100)
    assert default_parameters(1022117) == (100, 100)
    assert default_parameters(100160063) == (2000, 1000)
    assert default_parameters(999985999949) == (30000, 4000)
    assert [row[1] for row in SIZE_TABLE] == sorted(row[1] for row in SIZE_TABLE)


def test_unknown_mode():
    with pytest.raises(ValueError):
        FactorConfig(mode="quantum")
