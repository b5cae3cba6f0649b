"""Relations ``(a, b)`` with ``a + m*b`` and ``Norm(a + b*alpha)`` both smooth."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from hybridgnfs.errors import InsufficientRelations
from hybridgnfs.gnfs.polynomial import NfsPolynomial, norm
from hybridgnfs.numtheory import ExponentVector, FactorBase, factor_over_base, is_smooth

DEFAULT_MARGIN = 10


@dataclass(frozen=True)
class Relation:
    a: int
    b: int
    rational: ExponentVector
    algebraic: ExponentVector
    characters: tuple[int, ...]

    def rational_value(self, base: FactorBase) -> int:
        return self.rational.value(base.rational_primes)

    def algebraic_value(self, base: FactorBase) -> int:
        primes = [p for p, _ in base.algebraic_primes]
        return self.algebraic.value(primes)

    def check(self, poly: NfsPolynomial, base: FactorBase) -> bool:
        """Round-trip both exponent vectors against direct evaluation."""
        return (
            self.b >= 1
            and math.gcd(self.a, self.b) == 1
            and self.rational_value(base) == self.a + poly.m * self.b
            and self.algebraic_value(base) == norm(poly, self.a, self.b)
            and self.characters == character_bits(base, self.a, self.b)
        )


def character_bits(base: FactorBase, a: int, b: int) -> tuple[int, ...]:
    """1 where ``a + b*s`` is a non-residue mod ``q``, per character ``(q, s)``."""
    bits = []
    for q, s in base.character_primes:
        v = (a + b * s) % q
        bits.append(1 if pow(v, (q - 1) // 2, q) == q - 1 else 0)
    return tuple(bits)


def _algebraic_vector(norm_vec: ExponentVector, base: FactorBase, a: int, b: int) -> ExponentVector:
    # all of p's exponent belongs to the unique ideal (p, r) with a + b*r == 0 (mod p)
    entries = {}
    for idx, e in norm_vec.entries.items():
        p = base.rational_primes[idx]
        r = (-a * pow(b, -1, p)) % p
        entries[base.algebraic_index[(p, r)]] = e
    return ExponentVector(dict(sorted(entries.items())), norm_vec.sign)


def make_relation(poly: NfsPolynomial, base: FactorBase, a: int, b: int) -> Relation | None:
    """Build the relation for ``(a, b)``, or ``None`` when it is not one."""
    if b < 1 or math.gcd(a, b) != 1:
        return None
    rat = a + poly.m * b
    if rat == 0 or not is_smooth(rat, base):
        return None
    nrm = norm(poly, a, b)
    if nrm == 0 or not is_smooth(nrm, base):
        return None
    rvec = factor_over_base(rat, base)
    nvec = factor_over_base(nrm, base)
    return Relation(a, b, rvec, _algebraic_vector(nvec, base, a, b), character_bits(base, a, b))


def is_double_smooth(poly: NfsPolynomial, base: FactorBase, a: int, b: int) -> bool:
    """Cheap predicate form of :func:`make_relation` (no exponent vectors)."""
    if b < 1 or math.gcd(a, b) != 1:
        return False
    rat = a + poly.m * b
    if rat == 0 or not is_smooth(rat, base):
        return False
    nrm = norm(poly, a, b)
    return nrm != 0 and is_smooth(nrm, base)


def scan_rows(poly: NfsPolynomial, base: FactorBase, a_lo: int, a_hi: int, b_lo: int, b_hi: int) -> list[Relation]:
    """All relations in the rectangle, ordered by increasing ``b`` then ``a``."""
    out = []
    for b in range(b_lo, b_hi + 1):
        for a in range(a_lo, a_hi + 1):
            rel = make_relation(poly, base, a, b)
            if rel is not None:
                out.append(rel)
    return out


def _scan_stripe(args):
    return scan_rows(*args)


@dataclass
class SearchResult:
    relations: list[Relation]
    last: tuple[int, int]
    pairs_scanned: int


def classical_relation_search(
    poly: NfsPolynomial,
    base: FactorBase,
    M: int,
    target: int,
    workers: int = 1,
    rows_per_stripe: int = 4,
) -> SearchResult:
    """Scan ``-M <= a <= M``, ``1 <= b <= M`` until ``target`` relations are found.

    Stripes of ``rows_per_stripe`` rows may run on ``workers`` processes; they
    are merged in stripe order, so the result does not depend on ``workers``.
    """
    found: list[Relation] = []
    width = 2 * M + 1
    stripes = [(poly, base, -M, M, b, min(b + rows_per_stripe - 1, M)) for b in range(1, M + 1, rows_per_stripe)]

    def consume(rels):
        for rel in rels:
            found.append(rel)
            if len(found) == target:
                return True
        return False

    if workers <= 1:
        for stripe in stripes:
            if consume(_scan_stripe(stripe)):
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = False
            for i in range(0, len(stripes), workers):
                for rels in pool.map(_scan_stripe, stripes[i : i + workers]):
                    if consume(rels):
                        done = True
                        break
                if done:
                    break

    if len(found) < target:
        raise InsufficientRelations(
            f"region M={M} yielded {len(found)} of {target} relations", found=len(found)
        )
    last = found[-1]
    scanned = (last.b - 1) * width + (last.a + M + 1)
    return SearchResult(found, (last.a, last.b), scanned)
