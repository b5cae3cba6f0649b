"""Relation search by offloading calibrated tiles to the Grover sampler.

The region is cut into tiles expected to hold one relation each. Every tile
is handed to :func:`hybridgnfs.qsim.run_grover_tile` with the classical
double-smoothness test as its oracle; whatever comes back is re-checked
classically before it becomes a relation.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from hybridgnfs.errors import DensityError, InsufficientRelations
from hybridgnfs.gnfs.polynomial import NfsPolynomial
from hybridgnfs.gnfs.relations import Relation, is_double_smooth, make_relation
from hybridgnfs.numtheory import FactorBase
from hybridgnfs.qsim.grover import CAUSES, GroverConfig, GroverOutcome, run_grover_tile

log = logging.getLogger(__name__)

STRATEGIES = ("single-shot", "retry-short", "boyer")
DEFAULT_BAND = (0.8, 1.25)
# stream ids keep the density sampler and the tile runs on disjoint seeds
_DENSITY_STREAM = 1
_TILE_STREAM = 2


@dataclass(frozen=True)
class Region:
    """Inclusive rectangle ``[a_lo, a_hi] x [b_lo, b_hi]`` with ``b_lo >= 1``."""

    a_lo: int
    a_hi: int
    b_lo: int
    b_hi: int

    def __post_init__(self):
        if self.a_lo > self.a_hi or self.b_lo > self.b_hi or self.b_lo < 1:
            raise ValueError(f"bad region {self}")

    @property
    def width(self) -> int:
        return self.a_hi - self.a_lo + 1

    @property
    def height(self) -> int:
        return self.b_hi - self.b_lo + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    @classmethod
    def square(cls, M: int) -> Region:
        return cls(-M, M, 1, M)


@dataclass(frozen=True)
class Tile:
    a0: int
    a1: int
    b0: int
    b1: int
    expected_count: float
    index: int
    in_band: bool = True

    @property
    def width(self) -> int:
        return self.a1 - self.a0 + 1

    @property
    def area(self) -> int:
        return self.width * (self.b1 - self.b0 + 1)

    def point(self, item: int) -> tuple[int, int]:
        b, a = divmod(item, self.width)
        return self.a0 + a, self.b0 + b

    def points(self):
        for b in range(self.b0, self.b1 + 1):
            for a in range(self.a0, self.a1 + 1):
                yield a, b


@dataclass(frozen=True)
class DensityEstimate:
    density: float
    half_width: float
    hits: int
    samples: int
    draws: int


class SmoothnessMemo:
    """Memoised double-smoothness predicate for one ``(poly, base)``."""

    def __init__(self, poly: NfsPolynomial, base: FactorBase):
        self.poly = poly
        self.base = base
        self.seen: dict[tuple[int, int], bool] = {}

    def __call__(self, a: int, b: int) -> bool:
        v = self.seen.get((a, b))
        if v is None:
            v = self.seen[(a, b)] = is_double_smooth(self.poly, self.base, a, b)
        return v


def estimate_smooth_density(
    poly: NfsPolynomial,
    base: FactorBase,
    region: Region,
    samples: int = 1000,
    seed: int = 0,
    min_hits: int = 0,
    max_samples: int | None = None,
    stream: int = 0,
    predicate=None,
) -> DensityEstimate:
    """Relations per lattice point, from uniformly drawn coprime pairs.

    Non-coprime draws are redrawn, and the hit rate is scaled by the
    observed coprime fraction so the result is per lattice point. With
    ``min_hits`` set, sampling continues in blocks of ``samples`` until that
    many hits are seen or ``max_samples`` is reached. The half-width is the
    95% normal-approximation interval.
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    max_samples = max(samples, max_samples or samples)
    if predicate is None:
        predicate = SmoothnessMemo(poly, base)
    rng = np.random.default_rng([seed, _DENSITY_STREAM, stream])
    hits = taken = draws = 0
    while taken < samples or (hits < min_hits and taken < max_samples):
        want = samples if taken < samples else min(samples, max_samples - taken)
        got = 0
        while got < want:
            n = 2 * (want - got) + 8
            a = rng.integers(region.a_lo, region.a_hi + 1, size=n)
            b = rng.integers(region.b_lo, region.b_hi + 1, size=n)
            ok = np.flatnonzero(np.gcd(a, b) == 1)
            if len(ok) > want - got:
                # count draws only up to the last accepted sample
                ok = ok[: want - got]
                draws += int(ok[-1]) + 1
            else:
                draws += n
            for i in ok:
                hits += predicate(int(a[i]), int(b[i]))
            got += len(ok)
        taken += got
    if hits == 0:
        raise DensityError(
            f"no smooth pairs in {taken} samples; raise the smoothness bound or sample more"
        )
    p = hits / taken
    coprime = taken / draws
    half = 1.96 * math.sqrt(p * (1 - p) / taken) * coprime
    return DensityEstimate(p * coprime, half, hits, taken, draws)


def tile_shape(density: float, region: Region, tile_height: int | None = None) -> tuple[int, int]:
    """``(width, height)`` of a tile with area close to ``1/density``."""
    area = 1 / density
    if tile_height is None:
        # height within a factor 2 of square that makes w*h closest to the target area
        side = math.sqrt(area)
        lo, hi = max(1, math.floor(side / 2)), max(1, min(region.height, math.ceil(2 * side)))
        h = min(
            range(lo, max(lo, hi) + 1),
            key=lambda h: (round(abs(max(1, round(area / h)) * h - area) / area, 3), abs(h - side)),
        )
        h = min(h, region.height)
    else:
        h = max(1, min(region.height, tile_height))
    w = max(1, round(area / h))
    if w > region.width:
        w = region.width
        h = max(1, min(region.height, round(area / w)))
    return w, h


def partition_tiles(
    region: Region,
    density: float,
    band: tuple[float, float] = DEFAULT_BAND,
    tile_height: int | None = None,
    first_index: int = 0,
) -> list[Tile]:
    """Row-major tiles that exactly cover ``region``.

    Tiles clipped by the region edge, or otherwise outside ``band``, carry
    ``in_band=False``.
    """
    if density <= 0:
        raise ValueError("density must be positive")
    if 1 / density >= region.area:
        log.warning("tile area %.1f exceeds region area %d; using one tile", 1 / density, region.area)
        exp = density * region.area
        return [Tile(region.a_lo, region.a_hi, region.b_lo, region.b_hi, exp, first_index, band[0] <= exp <= band[1])]
    w, h = tile_shape(density, region, tile_height)
    tiles = []
    for b0 in range(region.b_lo, region.b_hi + 1, h):
        b1 = min(b0 + h - 1, region.b_hi)
        for a0 in range(region.a_lo, region.a_hi + 1, w):
            a1 = min(a0 + w - 1, region.a_hi)
            exp = density * (a1 - a0 + 1) * (b1 - b0 + 1)
            tiles.append(Tile(a0, a1, b0, b1, exp, first_index + len(tiles), band[0] <= exp <= band[1]))
    return tiles


def tile_truth_table(tile: Tile, poly: NfsPolynomial, base: FactorBase, predicate=None) -> np.ndarray:
    """Oracle values over the tile's points, in the order :meth:`Tile.point` decodes."""
    if predicate is None:
        predicate = SmoothnessMemo(poly, base)
    return np.fromiter((predicate(a, b) for a, b in tile.points()), dtype=bool, count=tile.area)


@dataclass(frozen=True)
class Offload:
    """What the engine hands back: a pair or nothing. ``runs`` keeps the diagnostics."""

    pair: tuple[int, int] | None
    runs: tuple[GroverOutcome, ...]

    @property
    def oracle_calls(self) -> int:
        return sum(r.oracle_calls for r in self.runs)


def offload_tile(
    tile: Tile,
    poly: NfsPolynomial,
    base: FactorBase,
    grover: GroverConfig = GroverConfig(),
    seed=None,
    strategy: str = "single-shot",
    table: np.ndarray | None = None,
) -> Offload:
    """Search one tile; ``retry-short`` reruns at ``1/sqrt(2)`` length after a bottom."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if table is None:
        table = tile_truth_table(tile, poly, base)
    rng = np.random.default_rng(seed)
    if strategy == "boyer":
        cfg = replace(grover, schedule="boyer", iterations=None)
    else:
        cfg = replace(grover, schedule="optimal", iterations=None)
    runs = [run_grover_tile(table, tile.area, cfg, rng)]
    if strategy == "retry-short" and not runs[0].found:
        runs.append(run_grover_tile(table, tile.area, replace(cfg, schedule="half-length"), rng))
    last = runs[-1]
    pair = tile.point(last.item) if last.found else None
    return Offload(pair, tuple(runs))


def verify_candidate(poly: NfsPolynomial, base: FactorBase, a: int, b: int) -> Relation | None:
    """Classical re-check of a returned pair; ``None`` means rejected."""
    return make_relation(poly, base, a, b)


@dataclass
class OffloadReport:
    tiles_dispatched: int = 0
    found: int = 0
    bottoms_by_cause: dict[str, int] = field(default_factory=lambda: {c: 0 for c in CAUSES})
    verified: int = 0
    rejected: int = 0
    oracle_calls_total: int = 0
    area_dispatched: int = 0
    marked_histogram: dict[int, int] = field(default_factory=dict)

    def add(self, tile_result: TileResult) -> None:
        self.tiles_dispatched += 1
        self.area_dispatched += tile_result.area
        self.oracle_calls_total += tile_result.offload.oracle_calls
        k = tile_result.offload.runs[0].marked
        self.marked_histogram[k] = self.marked_histogram.get(k, 0) + 1
        if tile_result.offload.pair is None:
            self.bottoms_by_cause[tile_result.offload.runs[-1].cause] += 1
        else:
            self.found += 1
            if tile_result.relation is None:
                self.rejected += 1
            else:
                self.verified += 1

    def as_dict(self) -> dict:
        return {
            "tiles_dispatched": self.tiles_dispatched,
            "found": self.found,
            "bottoms_by_cause": dict(self.bottoms_by_cause),
            "verified": self.verified,
            "rejected": self.rejected,
            "oracle_calls_total": self.oracle_calls_total,
            "area_dispatched": self.area_dispatched,
            "marked_histogram": {str(k): v for k, v in sorted(self.marked_histogram.items())},
        }


@dataclass(frozen=True)
class TileResult:
    index: int
    offload: Offload
    relation: Relation | None
    area: int = 0


def process_tile(
    tile: Tile, poly, base, grover: GroverConfig, strategy: str, seed: int, predicate=None
) -> TileResult:
    """Offload and verify one tile; a pure function of its arguments."""
    table = tile_truth_table(tile, poly, base, predicate)
    rng = np.random.default_rng([seed, _TILE_STREAM, tile.index])
    off = offload_tile(tile, poly, base, grover, rng, strategy, table=table)
    rel = verify_candidate(poly, base, *off.pair) if off.pair is not None else None
    return TileResult(tile.index, off, rel, tile.area)


def _process(args):
    return process_tile(*args)


@dataclass
class HybridResult:
    relations: list[Relation]
    report: OffloadReport
    densities: list[DensityEstimate]
    tile_count: int

    @property
    def density(self) -> DensityEstimate:
        return self.densities[0]


def _calibrated_blocks(region: Region, stripe_height: int | None):
    # heights 1, 2, 4, ... capped at stripe_height: density changes fastest at small b
    if stripe_height is None:
        yield region
        return
    b, h = region.b_lo, 1
    while b <= region.b_hi:
        yield Region(region.a_lo, region.a_hi, b, min(b + h - 1, region.b_hi))
        b += h
        h = min(2 * h, stripe_height)


def hybrid_relation_search(
    poly: NfsPolynomial,
    base: FactorBase,
    region: Region,
    target: int,
    strategy: str = "retry-short",
    seed: int = 0,
    grover: GroverConfig = GroverConfig(),
    samples: int = 1000,
    band: tuple[float, float] = DEFAULT_BAND,
    workers: int = 1,
    stripe_height: int | None = None,
    min_hits: int = 0,
) -> HybridResult:
    """Estimate density, tile, offload tiles in index order until ``target`` relations verify.

    With ``stripe_height`` set, each horizontal stripe of the region gets its
    own density estimate and tiling, which keeps tiles near one expected
    relation when density falls off with ``b``. Tile indices run on across
    stripes, so per-tile seeds never repeat.
    """
    if target < 1:
        raise ValueError("target must be >= 1")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    report = OffloadReport()
    relations: list[Relation] = []
    densities: list[DensityEstimate] = []
    n_tiles = 0

    def consume(res: TileResult) -> bool:
        report.add(res)
        if res.relation is not None:
            relations.append(res.relation)
        return len(relations) >= target

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    memo = SmoothnessMemo(poly, base)
    try:
        for stream, block in enumerate(_calibrated_blocks(region, stripe_height)):
            try:
                est = estimate_smooth_density(
                    poly,
                    base,
                    block,
                    samples,
                    seed,
                    min_hits=min_hits,
                    max_samples=4 * samples,
                    stream=stream,
                    predicate=memo,
                )
            except DensityError:
                if stripe_height is None:
                    raise
                log.info("no smooth pairs sampled in %s; skipping stripe", block)
                continue
            densities.append(est)
            tiles = partition_tiles(block, est.density, band, first_index=n_tiles)
            n_tiles += len(tiles)
            if _dispatch(tiles, poly, base, grover, strategy, seed, pool, workers, consume, memo):
                return HybridResult(relations, report, densities, n_tiles)
    finally:
        if pool is not None:
            pool.shutdown()
    err = InsufficientRelations(
        f"{n_tiles} tiles yielded {len(relations)} of {target} relations", found=len(relations)
    )
    err.report = report
    raise err


def _dispatch(tiles, poly, base, grover, strategy, seed, pool, workers, consume, memo) -> bool:
    if pool is None:
        return any(consume(process_tile(t, poly, base, grover, strategy, seed, memo)) for t in tiles)
    jobs = [(t, poly, base, grover, strategy, seed) for t in tiles]
    chunk = 8 * workers
    for i in range(0, len(jobs), chunk):
        for res in pool.map(_process, jobs[i : i + chunk]):
            if consume(res):
                return True
    return False


def tile_count_distribution(
    poly: NfsPolynomial, base: FactorBase, tiles: list[Tile]
) -> Counter:
    """Ground-truth number of relations per tile, by exhaustive evaluation."""
    return Counter(int(tile_truth_table(t, poly, base).sum()) for t in tiles)


@dataclass(frozen=True)
class TileStatistics:
    """Empirical relations-per-tile distribution against Poisson(1).

    ``counts`` bins tiles by 0, 1, 2 and 3-or-more relations; only in-band
    tiles are counted.
    """

    tiles: int
    edge_tiles: int
    density: DensityEstimate
    tile_shape: tuple[int, int]
    counts: tuple[int, int, int, int]
    expected: tuple[float, float, float, float]
    chi_square: float
    p_value: float

    @property
    def fractions(self) -> tuple[float, ...]:
        return tuple(c / self.tiles for c in self.counts)


def tile_statistics(
    poly: NfsPolynomial, base: FactorBase, region: Region, samples: int, seed: int = 0
) -> TileStatistics:
    """Calibrate tiles on ``region`` and count relations in each by brute force."""
    from scipy.stats import chisquare

    from hybridgnfs.numtheory import poisson_pmf, poisson_tail

    memo = SmoothnessMemo(poly, base)
    est = estimate_smooth_density(poly, base, region, samples, seed, predicate=memo)
    tiles = partition_tiles(region, est.density)
    inside = [t for t in tiles if t.in_band]
    per_tile = Counter(min(3, int(tile_truth_table(t, poly, base, memo).sum())) for t in inside)
    n = len(inside)
    counts = tuple(per_tile.get(k, 0) for k in range(4))
    probs = (poisson_pmf(0, 1), poisson_pmf(1, 1), poisson_pmf(2, 1), poisson_tail(3, 1))
    expected = tuple(n * p for p in probs)
    if n:
        chi = chisquare(counts, expected)
        stat, pval = float(chi.statistic), float(chi.pvalue)
    else:
        stat, pval = math.nan, math.nan
    return TileStatistics(
        n, len(tiles) - n, est, tile_shape(est.density, region), counts, expected, stat, pval
    )
