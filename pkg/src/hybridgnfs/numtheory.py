"""Integer primitives shared by the sieve, the tile search and the simulators.

Smoothness is decided by trial division over an explicit factor base; a
cheap product-tree style pre-check rejects most non-smooth inputs before any
division happens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from sympy import isprime as _isprime

if TYPE_CHECKING:
    from hybridgnfs.gnfs.polynomial import NfsPolynomial


def primes_up_to(bound: int) -> list[int]:
    """Return the primes ``p <= bound`` in increasing order."""
    if bound < 2:
        return []
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


def is_prime(n: int) -> bool:
    return n >= 2 and bool(_isprime(n))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    q = max(n + 1, 2)
    while not is_prime(q):
        q += 1
    return q


@dataclass(frozen=True)
class ExponentVector:
    """Sparse factorisation ``sign * prod(keys[i] ** entries[i])``.

    ``entries`` maps a factor-base index to its (positive) exponent; the
    meaning of the index belongs to whoever built the vector.
    """

    entries: dict[int, int]
    sign: int = 1

    def value(self, primes: list[int]) -> int:
        out = self.sign
        for idx, e in self.entries.items():
            out *= primes[idx] ** e
        return out

    def parity(self) -> frozenset[int]:
        return frozenset(i for i, e in self.entries.items() if e & 1)


@dataclass(frozen=True)
class FactorBase:
    """Rational primes, algebraic ideals ``(p, r)`` and character primes."""

    bound: int
    rational_primes: list[int]
    algebraic_primes: list[tuple[int, int]]
    character_primes: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        # precomputed lookup tables; frozen dataclass needs object.__setattr__
        object.__setattr__(self, "_rat_index", {p: i for i, p in enumerate(self.rational_primes)})
        object.__setattr__(self, "_alg_index", {pr: i for i, pr in enumerate(self.algebraic_primes)})
        object.__setattr__(self, "_primorial", math.prod(self.rational_primes))

    @property
    def rational_index(self) -> dict[int, int]:
        return self._rat_index

    @property
    def algebraic_index(self) -> dict[tuple[int, int], int]:
        return self._alg_index

    @property
    def primorial(self) -> int:
        return self._primorial


def is_smooth(x: int, base: FactorBase) -> bool:
    """True iff every prime factor of ``x`` lies in ``base.rational_primes``.

    Uses the fact that ``x`` is smooth iff ``x`` divides ``P**e`` for the
    product ``P`` of the base primes and any ``2**k >= log2 |x|``.
    """
    x = abs(x)
    if x == 0:
        raise ValueError("zero has no factorization")
    if x == 1:
        return True
    r = base.primorial % x
    for _ in range(max(1, x.bit_length()).bit_length()):
        if r == 0:
            return True
        r = r * r % x
    return r == 0


def trial_divide(x: int, primes: list[int]) -> tuple[dict[int, int], int]:
    """Divide ``|x|`` by each prime; returns ``({index: exponent}, cofactor)``."""
    x = abs(x)
    entries: dict[int, int] = {}
    for i, p in enumerate(primes):
        if x == 1:
            break
        if p * p > x:
            # remaining cofactor is 1 or a prime; look it up rather than keep dividing
            break
        if x % p == 0:
            e = 0
            while x % p == 0:
                x //= p
                e += 1
            entries[i] = e
    return entries, x


def factor_over_base(x: int, base: FactorBase) -> ExponentVector | None:
    """Exponent vector of ``x`` over the rational primes, or ``None`` if not smooth."""
    if x == 0:
        raise ValueError("zero has no factorization")
    if not is_smooth(x, base):
        return None
    primes = base.rational_primes
    entries, rest = trial_divide(x, primes)
    if rest != 1:
        idx = base.rational_index.get(rest)
        if idx is None:
            return None
        entries[idx] = entries.get(idx, 0) + 1
    return ExponentVector(dict(sorted(entries.items())), 1 if x > 0 else -1)


def poly_roots_mod(coeffs: list[int], p: int) -> list[int]:
    """All ``r`` in ``[0, p)`` with ``sum(c_i r^i) % p == 0`` (coefficients low to high)."""
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * xs + (c % p)) % p
    return np.flatnonzero(acc == 0).tolist()


def build_factor_base(poly: NfsPolynomial, bound: int, num_characters: int = 6) -> FactorBase:
    """Factor base for ``poly`` with smoothness bound ``bound``.

    Character primes are the smallest primes above ``bound`` at which ``f``
    has a simple root; each root contributes its own character column.
    """
    if bound < 2:
        raise ValueError("smoothness bound must be >= 2")
    coeffs = list(poly.coeffs)
    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    rational = primes_up_to(bound)
    algebraic = [(p, r) for p in rational for r in poly_roots_mod(coeffs, p)]
    characters: list[tuple[int, int]] = []
    q = bound
    while len(characters) < num_characters:
        q = next_prime(q)
        if poly.N % q == 0:
            continue
        for s in poly_roots_mod(coeffs, q):
            if sum(c * pow(s, i, q) for i, c in enumerate(deriv)) % q == 0:
                continue
            characters.append((q, s))
            if len(characters) == num_characters:
                break
    return FactorBase(bound, rational, algebraic, characters)


def poisson_pmf(k: int, lam: float) -> float:
    """``exp(-lam) * lam**k / k!``."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if k < 0:
        return 0.0
    return math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1))


def poisson_tail(k: int, lam: float) -> float:
    """``P(X >= k)`` for ``X ~ Poisson(lam)``."""
    return max(0.0, 1.0 - sum(poisson_pmf(j, lam) for j in range(k)))
