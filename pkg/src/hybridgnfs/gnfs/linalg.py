"""GF(2) relation matrix: filtering and bit-packed Gaussian elimination.

Rows are Python ints used as bitsets, one bit per column.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from hybridgnfs.errors import InsufficientRelations
from hybridgnfs.gnfs.relations import Relation
from hybridgnfs.numtheory import FactorBase


def column_layout(base: FactorBase) -> dict[str, int]:
    """Offsets of each column block: rational primes, rational sign, ideals, norm sign, characters."""
    n_rat = len(base.rational_primes)
    n_alg = len(base.algebraic_primes)
    return {
        "rational": 0,
        "rational_sign": n_rat,
        "algebraic": n_rat + 1,
        "algebraic_sign": n_rat + 1 + n_alg,
        "characters": n_rat + 2 + n_alg,
        "total": n_rat + 2 + n_alg + len(base.character_primes),
    }


def relation_row(rel: Relation, base: FactorBase) -> int:
    lay = column_layout(base)
    row = 0
    for i in rel.rational.parity():
        row |= 1 << (lay["rational"] + i)
    if rel.rational.sign < 0:
        row |= 1 << lay["rational_sign"]
    for i in rel.algebraic.parity():
        row |= 1 << (lay["algebraic"] + i)
    if rel.algebraic.sign < 0:
        row |= 1 << lay["algebraic_sign"]
    for j, bit in enumerate(rel.characters):
        if bit:
            row |= 1 << (lay["characters"] + j)
    return row


def bits(row: int):
    while row:
        low = row & -row
        yield low.bit_length() - 1
        row ^= low


@dataclass
class RelationMatrix:
    """Filtered matrix; ``provenance[i]`` is the relation index behind row ``i``."""

    rows: list[int]
    column_count: int
    provenance: list[int]
    original_rows: int
    trivial_dependencies: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def m1(self) -> int:
        return len(self.rows)


def preprocess_matrix(relations: list[Relation], base: FactorBase) -> RelationMatrix:
    """Drop singleton columns, merge duplicate rows, compress empty columns.

    A duplicated row pairs up with its twin into an immediate dependency;
    an all-zero row is a dependency on its own.
    """
    if not relations:
        raise InsufficientRelations("no relations to filter", found=0)
    live: dict[int, int] = {}
    trivial: list[tuple[int, ...]] = []
    seen: dict[int, int] = {}
    for idx, rel in enumerate(relations):
        row = relation_row(rel, base)
        if row == 0:
            trivial.append((idx,))
        elif row in seen:
            trivial.append((seen[row], idx))
        else:
            seen[row] = idx
            live[idx] = row

    while True:
        weight = Counter(c for row in live.values() for c in bits(row))
        singles = {c for c, n in weight.items() if n == 1}
        drop = [idx for idx, row in live.items() if any(c in singles for c in bits(row))]
        if not drop:
            break
        for idx in drop:
            del live[idx]

    if not live and not trivial:
        raise InsufficientRelations("filtering removed every relation", found=0)

    used = sorted({c for row in live.values() for c in bits(row)})
    remap = {c: j for j, c in enumerate(used)}
    rows, prov = [], []
    for idx in sorted(live):
        packed = 0
        for c in bits(live[idx]):
            packed |= 1 << remap[c]
        rows.append(packed)
        prov.append(idx)
    return RelationMatrix(rows, len(used), prov, len(relations), trivial)


def gf2_left_nullspace(rows: list[int]) -> list[int]:
    """Bitmasks ``v`` over row indices with ``XOR_{i in v} rows[i] == 0``.

    The returned vectors are linearly independent and span the left nullspace.
    """
    pivots: dict[int, tuple[int, int]] = {}
    deps = []
    for i, row in enumerate(rows):
        combo = 1 << i
        while row:
            col = (row & -row).bit_length() - 1
            hit = pivots.get(col)
            if hit is None:
                pivots[col] = (row, combo)
                break
            row ^= hit[0]
            combo ^= hit[1]
        if row == 0:
            deps.append(combo)
    return deps


def solve_nullspace(matrix: RelationMatrix) -> list[tuple[int, ...]]:
    """Dependencies as sorted tuples of original relation indices.

    Immediate dependencies from filtering come first, then the eliminated ones.
    """
    deps = list(matrix.trivial_dependencies)
    for combo in gf2_left_nullspace(matrix.rows):
        deps.append(tuple(sorted(matrix.provenance[i] for i in bits(combo))))
    if not deps:
        raise InsufficientRelations("nullspace is empty", found=matrix.original_rows)
    return deps
