"""End-to-end factoring: small-prime stripping, then the number field sieve."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace

from sympy import perfect_power

from hybridgnfs.errors import AlgebraicSqrtError, EarlyFactor, InsufficientRelations, PipelineFailure
from hybridgnfs.gnfs.linalg import column_layout, preprocess_matrix, solve_nullspace
from hybridgnfs.gnfs.polynomial import select_polynomial
from hybridgnfs.gnfs.relations import DEFAULT_MARGIN, classical_relation_search
from hybridgnfs.gnfs.sqrt import extract_factor
from hybridgnfs.numtheory import build_factor_base, is_prime, primes_up_to

log = logging.getLogger(__name__)

# (max bits, smoothness bound, region half-width)
SIZE_TABLE = (
    (20, 100, 100),
    (34, 2000, 1000),
    (48, 30000, 4000),
    (10**9, 100000, 10000),
)
MAX_BITS = 47  # ~10**14
# an offloaded tile returns at most one pair, so it yields P(k >= 1) = 1 - 1/e
# relations on average; the hybrid region grows to compensate
HYBRID_AREA_SCALE = math.sqrt(math.e / (math.e - 1))


def default_parameters(N: int) -> tuple[int, int]:
    """``(B, M)`` from the bit length of ``N``."""
    n = N.bit_length()
    for max_bits, B, M in SIZE_TABLE:
        if n <= max_bits:
            return B, M
    raise AssertionError("unreachable")


@dataclass
class FactorConfig:
    mode: str = "classical"
    B: int | None = None
    degree: int | None = None
    M: int | None = None
    margin: int = DEFAULT_MARGIN
    num_characters: int = 6
    trial_bound: int = 100
    seed: int = 0
    workers: int = 1
    max_dependencies: int = 8
    max_enlargements: int = 3
    strategy: str = "retry-short"
    noise_epsilon: float = 1e-3
    band: tuple[float, float] = (0.8, 1.25)
    density_samples: int = 1000
    density_min_hits: int = 0
    stripe_area: int = 20000
    max_bits: int = MAX_BITS

    def __post_init__(self):
        if self.mode not in ("classical", "hybrid"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class SplitStats:
    """What one number field sieve run did."""

    N: int
    degree: int | None = None
    m: int | None = None
    polynomial: str | None = None
    B: int | None = None
    M: int | None = None
    columns: int | None = None
    relations: int = 0
    m1: int | None = None
    dependencies: int = 0
    dependencies_tried: int = 0
    sqrt_failures: int = 0
    enlargements: int = 0
    early: str | None = None
    factor: int | None = None
    offload: dict | None = None
    timings: dict[str, float] = field(default_factory=dict)


@dataclass
class FactorReport:
    N: int
    factors: list[int]
    stripped: list[int]
    splits: list[SplitStats]

    def as_dict(self, timings: bool = False) -> dict:
        splits = []
        for s in self.splits:
            d = asdict(s)
            if not timings:
                d.pop("timings")
            splits.append(d)
        return {"N": self.N, "factors": self.factors, "stripped": self.stripped, "splits": splits}


def _default_degree(N: int) -> int:
    return 3 if N.bit_length() > 12 else 2


def nfs_split(N: int, config: FactorConfig) -> tuple[int, SplitStats]:
    """One nontrivial factor of the odd composite ``N``."""
    stats = SplitStats(N)
    clock = time.perf_counter

    t0 = clock()
    d = config.degree or _default_degree(N)
    try:
        poly = select_polynomial(N, d)
    except EarlyFactor as ef:
        stats.early = ef.reason
        stats.factor = ef.factor
        return ef.factor, stats
    except ValueError:
        if config.degree is not None or d == 2:
            raise
        d = 2
        poly = select_polynomial(N, d)
    stats.degree, stats.m, stats.polynomial = d, poly.m, str(poly)
    stats.timings["setup"] = clock() - t0

    B0, M0 = default_parameters(N)
    B = config.B or B0
    M = config.M or M0
    if config.mode == "hybrid" and config.M is None:
        M = math.ceil(M * HYBRID_AREA_SCALE)
    characters = config.num_characters
    stats.B = B

    for attempt in range(config.max_enlargements + 1):
        t0 = clock()
        base = build_factor_base(poly, B, characters)
        g = math.gcd(N, base.primorial)
        if g == N:
            g = next(p for p in base.rational_primes if N % p == 0)
        if 1 < g < N:
            stats.early = "factor base prime divides N"
            stats.factor = g
            return g, stats
        stats.timings["sizing"] = stats.timings.get("sizing", 0.0) + clock() - t0
        stats.columns = column_layout(base)["total"]
        target = stats.columns + config.margin
        stats.M = M

        t0 = clock()
        try:
            relations = _search(poly, base, M, target, config, stats)
        except InsufficientRelations as exc:
            stats.timings["relations"] = stats.timings.get("relations", 0.0) + clock() - t0
            log.info("only %d relations at M=%d; enlarging", exc.found, M)
            stats.enlargements += 1
            M *= 2
            continue
        stats.timings["relations"] = stats.timings.get("relations", 0.0) + clock() - t0
        stats.relations = len(relations)

        t0 = clock()
        matrix = preprocess_matrix(relations, base)
        stats.m1 = matrix.m1
        deps = solve_nullspace(matrix)
        stats.dependencies = len(deps)
        stats.timings["linear_algebra"] = clock() - t0

        t0 = clock()
        sqrt_failed = False
        for dep in deps[: config.max_dependencies]:
            stats.dependencies_tried += 1
            try:
                f = extract_factor(poly, base, relations, dep)
            except AlgebraicSqrtError:
                stats.sqrt_failures += 1
                sqrt_failed = True
                continue
            if f is not None:
                stats.timings["square_root"] = clock() - t0
                stats.factor = f
                return f, stats
        stats.timings["square_root"] = clock() - t0
        stats.enlargements += 1
        if sqrt_failed:
            characters += 4
        else:
            config = replace(config, margin=config.margin * 2)

    raise PipelineFailure(f"retry budget exhausted for N={N}", asdict(stats))


def _search(poly, base, M, target, config: FactorConfig, stats: SplitStats):
    if config.mode == "classical":
        return classical_relation_search(poly, base, M, target, workers=config.workers).relations
    from hybridgnfs.hybrid import Region, hybrid_relation_search
    from hybridgnfs.qsim.grover import GroverConfig

    try:
        res = hybrid_relation_search(
            poly,
            base,
            Region.square(M),
            target,
            strategy=config.strategy,
            seed=config.seed,
            grover=GroverConfig(noise_epsilon=config.noise_epsilon),
            samples=config.density_samples,
            band=config.band,
            workers=config.workers,
            stripe_height=max(1, -(-config.stripe_area // (2 * M + 1))),
            min_hits=config.density_min_hits,
        )
    except InsufficientRelations as exc:
        report = getattr(exc, "report", None)
        stats.offload = report.as_dict() if report is not None else None
        raise
    stats.offload = res.report.as_dict()
    return res.relations


def factor(N: int, config: FactorConfig | None = None) -> FactorReport:
    """Prime factorisation of ``N`` (with multiplicity, ascending)."""
    config = config or FactorConfig()
    if N < 2:
        raise ValueError("N must be >= 2")
    if N.bit_length() > config.max_bits:
        raise ValueError(f"N has {N.bit_length()} bits; the ceiling is {config.max_bits}")
    primes: list[int] = []
    stripped: list[int] = []
    rest = N
    for p in primes_up_to(config.trial_bound):
        while rest % p == 0:
            primes.append(p)
            stripped.append(p)
            rest //= p
    splits: list[SplitStats] = []
    stack = [rest] if rest > 1 else []
    while stack:
        c = stack.pop()
        if is_prime(c):
            primes.append(c)
            continue
        pp = perfect_power(c)
        if pp:
            root, e = pp
            stack.extend([root] * e)
            continue
        if c % 2 == 0:
            primes.append(2)
            stack.append(c // 2)
            continue
        g, stats = nfs_split(c, config)
        splits.append(stats)
        stack.extend([g, c // g])
    return FactorReport(N, sorted(primes), stripped, splits)
