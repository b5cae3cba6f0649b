"""Square roots in Z[alpha] and the final congruence of squares.

Elements of Z[alpha] are coefficient lists of length ``d`` (constant term
first), reduced modulo the monic ``f``.
"""

from __future__ import annotations

import math

from hybridgnfs.errors import AlgebraicSqrtError
from hybridgnfs.gnfs.polynomial import NfsPolynomial
from hybridgnfs.gnfs.relations import Relation
from hybridgnfs.numtheory import FactorBase, is_prime, poly_roots_mod

Element = list[int]


def reduce(prod: list[int], f: tuple[int, ...], mod: int | None = None) -> Element:
    d = len(f) - 1
    prod = list(prod) + [0] * max(0, d - len(prod))
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for i in range(d):
                prod[k - d + i] -= c * f[i]
        prod[k] = 0
    out = prod[:d]
    if mod is not None:
        out = [c % mod for c in out]
    return out


def mul(u: Element, v: Element, f: tuple[int, ...], mod: int | None = None) -> Element:
    prod = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        if x:
            for j, y in enumerate(v):
                prod[i + j] += x * y
    return reduce(prod, f, mod)


def power(u: Element, e: int, f: tuple[int, ...], mod: int) -> Element:
    d = len(f) - 1
    out = [1] + [0] * (d - 1)
    base = [c % mod for c in u]
    while e:
        if e & 1:
            out = mul(out, base, f, mod)
        base = mul(base, base, f, mod)
        e >>= 1
    return out


def product(elems: list[Element], f: tuple[int, ...]) -> Element:
    """Exact product over Z[alpha], multiplied pairwise to keep operands balanced."""
    d = len(f) - 1
    if not elems:
        return [1] + [0] * (d - 1)
    layer = elems
    while len(layer) > 1:
        nxt = [mul(layer[i], layer[i + 1], f) for i in range(0, len(layer) - 1, 2)]
        if len(layer) & 1:
            nxt.append(layer[-1])
        layer = nxt
    return layer[0]


def _one(d: int) -> Element:
    return [1] + [0] * (d - 1)


def _is_one(u: Element) -> bool:
    return u[0] == 1 and not any(u[1:])


def field_sqrt(u: Element, f: tuple[int, ...], q: int) -> Element:
    """Tonelli-Shanks in ``F_q[x]/f`` for ``f`` irreducible mod ``q``."""
    d = len(f) - 1
    order = q**d - 1
    if not _is_one(power(u, order // 2, f, q)):
        raise AlgebraicSqrtError("element is not a square in the residue field")
    s, t = 0, order
    while t % 2 == 0:
        s, t = s + 1, t // 2
    z = None
    for c in range(1, q**d):
        cand = [(c // q**i) % q for i in range(d)]
        if not _is_one(power(cand, order // 2, f, q)):
            z = cand
            break
    c = power(z, t, f, q)
    x = power(u, (t + 1) // 2, f, q)
    b = power(u, t, f, q)
    m = s
    while not _is_one(b):
        i, b2 = 0, b
        while not _is_one(b2):
            b2 = mul(b2, b2, f, q)
            i += 1
        g = power(c, 1 << (m - i - 1), f, q)
        x = mul(x, g, f, q)
        c = mul(g, g, f, q)
        b = mul(b, c, f, q)
        m = i
    return x


def inert_prime(poly: NfsPolynomial, start: int) -> int:
    """Smallest prime ``q > start`` with ``f`` irreducible mod ``q`` and ``q`` not dividing N."""
    q = start + 1
    while True:
        if is_prime(q) and poly.N % q and (poly.d == 1 or not poly_roots_mod(list(poly.coeffs), q)):
            return q
        q += 1


def algebraic_sqrt(delta: Element, poly: NfsPolynomial, q_start: int = 1000) -> Element:
    """Exact ``gamma`` in Z[alpha] with ``gamma**2 == delta``.

    Starts from a square root in ``F_{q^d}`` and Newton-lifts the inverse
    square root modulo ``q**(2**k)``; every precision step is checked
    exactly, and the search stops once the modulus outgrows ``delta``.
    """
    f = poly.coeffs
    d = poly.d
    q = inert_prime(poly, q_start)
    while not any(c % q for c in delta):
        q = inert_prime(poly, q)
    root = field_sqrt([c % q for c in delta], f, q)
    r = power(root, q**d - 2, f, q)

    cap_bits = max(abs(c) for c in delta).bit_length() + 64
    mod = q
    while True:
        mod = mod * mod
        # r <- r * (3 - delta * r^2) / 2
        t = mul(mul(r, r, f, mod), delta, f, mod)
        t = [(-c) % mod for c in t]
        t[0] = (t[0] + 3) % mod
        half = pow(2, -1, mod)
        r = [c * half % mod for c in mul(r, t, f, mod)]
        gamma = [c if c <= mod // 2 else c - mod for c in mul(delta, r, f, mod)]
        if mul(gamma, gamma, f) == list(delta):
            return gamma
        if mod.bit_length() > cap_bits:
            raise AlgebraicSqrtError("lifted root does not square to the product")


def _halved_product(vectors, primes: list[int], N: int) -> int:
    total: dict[int, int] = {}
    sign = 1
    for vec in vectors:
        sign *= vec.sign
        for i, e in vec.entries.items():
            total[i] = total.get(i, 0) + e
    if sign < 0 or any(e & 1 for e in total.values()):
        raise ValueError("dependency does not give a square")
    out = 1
    for i, e in total.items():
        out = out * pow(primes[i], e // 2, N) % N
    return out


def congruent_squares(
    poly: NfsPolynomial, base: FactorBase, relations: list[Relation], dependency: tuple[int, ...]
) -> tuple[int, int]:
    """``(x, y)`` with ``x**2 == y**2 (mod N)`` from a verified dependency."""
    N, m = poly.N, poly.m
    chosen = [relations[j] for j in dependency]
    y = _halved_product([r.rational for r in chosen], base.rational_primes, N)
    if poly.d == 1:
        x = _halved_product([r.algebraic for r in chosen], [p for p, _ in base.algebraic_primes], N)
        return x, y
    f = poly.coeffs
    fprime = list(poly.derivative())
    elems = [mul(fprime, fprime, f)] + [[r.a, r.b] + [0] * (poly.d - 2) for r in chosen]
    gamma = algebraic_sqrt(product(elems, f), poly, q_start=max(base.bound, 1000))
    x = sum(c * pow(m, i, N) for i, c in enumerate(gamma)) % N
    fpm = sum(c * pow(m, i, N) for i, c in enumerate(fprime)) % N
    return x, y * fpm % N


def extract_factor(
    poly: NfsPolynomial, base: FactorBase, relations: list[Relation], dependency: tuple[int, ...]
) -> int | None:
    """``gcd(x - y, N)`` if it is a proper factor, else ``None``.

    Raises :class:`AlgebraicSqrtError` when the algebraic product is not a square.
    """
    x, y = congruent_squares(poly, base, relations, dependency)
    N = poly.N
    if (x * x - y * y) % N:
        raise AlgebraicSqrtError("x^2 and y^2 disagree mod N")
    g = math.gcd(x - y, N)
    return g if 1 < g < N else None
