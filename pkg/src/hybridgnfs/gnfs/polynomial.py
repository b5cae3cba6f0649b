"""Base-m polynomial selection and the homogeneous norm form."""

from __future__ import annotations

import math
from dataclasses import dataclass

from sympy import divisors, integer_nthroot, perfect_power

from hybridgnfs.errors import EarlyFactor
from hybridgnfs.numtheory import is_prime

MAX_DEGREE = 3


@dataclass(frozen=True)
class NfsPolynomial:
    """Monic ``f`` of degree ``d`` with ``f(m) == N``.

    ``coeffs`` runs from the constant term up; ``coeffs[-1] == 1``.
    """

    N: int
    d: int
    m: int
    coeffs: tuple[int, ...]

    def __call__(self, x: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def derivative(self) -> tuple[int, ...]:
        return tuple(i * c for i, c in enumerate(self.coeffs))[1:]

    def __str__(self):
        terms = []
        for i in range(self.d, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(f"{coef}{'*' if coef and mono else ''}{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def base_m_digits(N: int, m: int) -> list[int]:
    digits = []
    while N:
        N, r = divmod(N, m)
        digits.append(r)
    return digits


def validate_target(N: int) -> None:
    """Reject inputs the number field sieve cannot or should not handle."""
    if N < 4:
        raise ValueError(f"N={N} is too small")
    if N % 2 == 0:
        raise ValueError(f"N={N} is even; strip the factor 2 first")
    if is_prime(N):
        raise ValueError(f"N={N} is prime")
    if perfect_power(N):
        raise ValueError(f"N={N} is a perfect power")


def select_polynomial(N: int, d: int) -> NfsPolynomial:
    """Choose ``m`` and write ``N`` in base ``m`` to get a monic ``f``.

    For ``d >= 2``, ``m`` starts at ``floor(N**(1/d))`` and is decremented
    while the expansion is not monic with ``d + 1`` digits. For ``d == 1``
    this gives ``m = N`` and ``f = x``: the rational sieve, pairing the
    small algebraic side ``a`` with the rational side ``a + N*b``.

    Raises :class:`EarlyFactor` when ``f`` turns out to be reducible, since
    ``f = g*h`` gives ``N = g(m) * h(m)``.
    """
    validate_target(N)
    if not 1 <= d <= MAX_DEGREE:
        raise ValueError(f"degree must be in 1..{MAX_DEGREE}, got {d}")

    if d == 1:
        return NfsPolynomial(N, 1, N, (0, 1))

    m = int(integer_nthroot(N, d)[0])
    while m >= 2 and 2 * m**d > N:
        digits = base_m_digits(N, m)
        if len(digits) == d + 1 and digits[-1] == 1:
            poly = NfsPolynomial(N, d, m, tuple(digits))
            _check_irreducible(poly)
            return poly
        m -= 1
    raise ValueError(f"no monic base-m expansion of degree {d} for N={N}")


def _check_irreducible(poly: NfsPolynomial) -> None:
    # d <= 3 and monic: reducible iff there is an integer root, which divides c_0.
    # All coefficients are non-negative, so only x = 0 or negative roots are possible.
    c0 = poly.coeffs[0]
    if c0 == 0:
        raise EarlyFactor(math.gcd(poly.m, poly.N), "f(x) divisible by x")
    for t in divisors(c0):
        if poly(-t) == 0:
            g = math.gcd(poly.m + t, poly.N)
            raise EarlyFactor(g, f"f(x) divisible by x + {t}")


def norm(poly: NfsPolynomial, a: int, b: int) -> int:
    """Norm of ``a + b*alpha``: ``sum c_i (-1)**(d-i) a**i b**(d-i)``."""
    d = poly.d
    out = 0
    apow = 1
    for i, c in enumerate(poly.coeffs):
        term = c * apow * b ** (d - i)
        out += -term if (d - i) & 1 else term
        apow *= a
    return out
