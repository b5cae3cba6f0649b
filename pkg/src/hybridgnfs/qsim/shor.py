"""Statevector simulation of Shor's order-finding circuit for tiny ``N``.

The circuit is built only from ``N`` and ``a``: the work register is
multiplied by ``a`` (a permutation of basis states), controlled powers come
from squaring that permutation, and the counting register goes through an
inverse QFT. The multiplicative order of ``a`` is never computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from hybridgnfs.numtheory import is_prime

MAX_N = 31
NORM_TOL = 1e-10


def work_bits(N: int) -> int:
    return max(1, (N - 1).bit_length())


def default_counting_bits(N: int) -> int:
    return 2 * math.ceil(math.log2(N)) + 1


def modmul_permutation(N: int, a: int, width: int) -> np.ndarray:
    """``x -> a*x mod N`` for ``x < N``, identity on the padding states."""
    x = np.arange(1 << width)
    return np.where(x < N, (a * x) % N, x)


def _check_norm(state: np.ndarray, where: str) -> None:
    total = float(np.vdot(state, state).real)
    if abs(total - 1.0) > NORM_TOL:
        raise FloatingPointError(f"statevector norm {total!r} after {where}")


def period_finding_state(N: int, a: int, t: int) -> np.ndarray:
    """Final ``(2**t, 2**w)`` amplitude array before measurement."""
    w = work_bits(N)
    dim_c = 1 << t
    state = np.zeros((dim_c, 1 << w), dtype=complex)
    # Hadamard layer on the counting register, work register in |1>
    state[:, 1] = 1 / math.sqrt(dim_c)
    _check_norm(state, "hadamard layer")

    counting = np.arange(dim_c)
    perm = modmul_permutation(N, a, w)
    for j in range(t):
        rows = (counting >> j) & 1 == 1
        moved = np.empty_like(state[rows])
        moved[:, perm] = state[rows]
        state[rows] = moved
        _check_norm(state, f"controlled U^(2^{j})")
        perm = perm[perm]

    state = np.fft.fft(state, axis=0) / math.sqrt(dim_c)
    _check_norm(state, "inverse QFT")
    return state


def measurement_distribution(N: int, a: int, t: int) -> np.ndarray:
    """Exact probabilities of each counting-register outcome."""
    state = period_finding_state(N, a, t)
    return np.sum(np.abs(state) ** 2, axis=1)


@dataclass(frozen=True)
class PeriodMeasurement:
    value: int | None
    t: int
    lucky_factor: int | None = None


def _validate_shor_input(N: int) -> None:
    if N > MAX_N:
        raise ValueError(f"N={N} exceeds the statevector ceiling {MAX_N}")
    if N < 3 or N % 2 == 0:
        raise ValueError(f"N={N} must be odd and >= 3")


def run_shor_period_finding(N: int, a: int, t: int | None = None, seed=None) -> PeriodMeasurement:
    """Sample one counting-register measurement.

    When ``gcd(a, N) > 1`` no circuit is run and the factor is returned in
    ``lucky_factor``.
    """
    _validate_shor_input(N)
    g = math.gcd(a, N)
    if g > 1:
        return PeriodMeasurement(None, 0, lucky_factor=g)
    if t is None:
        t = default_counting_bits(N)
    if t < 2 * work_bits(N):
        raise ValueError(f"t={t} counting bits is too few for N={N}")
    probs = measurement_distribution(N, a, t)
    rng = np.random.default_rng(seed)
    value = int(rng.choice(len(probs), p=probs / probs.sum()))
    return PeriodMeasurement(value, t)


def convergents(num: int, den: int):
    """Continued-fraction convergents of ``num/den``."""
    h0, h1, k0, k1 = 0, 1, 1, 0
    while den:
        q, r = divmod(num, den)
        h0, h1 = h1, q * h1 + h0
        k0, k1 = k1, q * k1 + k0
        yield Fraction(h1, k1)
        num, den = den, r


def recover_period(measurement: int, t: int, N: int, a: int) -> int | None:
    """Smallest convergent denominator ``r < N`` with ``a**r == 1 (mod N)``."""
    if measurement == 0:
        return None
    for frac in convergents(measurement, 1 << t):
        r = frac.denominator
        if r >= N:
            break
        if pow(a, r, N) == 1:
            return r
    return None


def shor_postprocess(measurement: int, t: int, N: int, a: int) -> set[int] | None:
    """Nontrivial factors from one measurement, or ``None``."""
    if not 0 <= measurement < 1 << t:
        raise ValueError("measurement out of range")
    r = recover_period(measurement, t, N, a)
    if r is None or r % 2:
        return None
    half = pow(a, r // 2, N)
    if half == N - 1:
        return None
    out = {g for g in (math.gcd(half - 1, N), math.gcd(half + 1, N)) if 1 < g < N}
    return out or None


@dataclass
class ShorAttempt:
    a: int
    measurement: int | None
    period: int | None
    factors: set[int] | None
    lucky: bool = False


@dataclass
class ShorRun:
    N: int
    factors: set[int] | None
    attempts: list[ShorAttempt] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.factors is not None


def shor_factor(N: int, seed=None, budget: int = 10, t: int | None = None) -> ShorRun:
    """Random ``a``, period finding, post-processing; up to ``budget`` attempts."""
    _validate_shor_input(N)
    if is_prime(N):
        raise ValueError(f"N={N} is prime")
    rng = np.random.default_rng(seed)
    run = ShorRun(N, None)
    for _ in range(budget):
        a = int(rng.integers(2, N - 1))
        meas = run_shor_period_finding(N, a, t, seed=rng)
        if meas.lucky_factor is not None:
            run.attempts.append(ShorAttempt(a, None, None, {meas.lucky_factor, N // meas.lucky_factor}, lucky=True))
            run.factors = {meas.lucky_factor, N // meas.lucky_factor}
            return run
        r = recover_period(meas.value, meas.t, N, a)
        found = shor_postprocess(meas.value, meas.t, N, a)
        if found:
            g = min(found)
            found = {g, N // g}
        run.attempts.append(ShorAttempt(a, meas.value, r, found))
        if found:
            run.factors = found
            return run
    return run
