"""Closed-form cost models for classical, hybrid and Shor factoring.

Times are kept as natural logarithms. ``o(1)`` terms in the L-notation
exponents are taken as zero, which is optimistic for any real ``n``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass

GNFS_EXPONENT = (64 / 9) ** (1 / 3)
HYBRID_EXPONENT = (8 / 3) ** (1 / 3)
SHOR_QUBIT_OVERHEAD = 3
SHOR_ANCHOR_BITS = 2048
SHOR_ANCHOR_CYCLES = 1e10
QUOTED_CROSSOVER_BITS = 4e5
SECONDS_PER_YEAR = 365.25 * 24 * 3600

O1_CAVEAT = "o(1) term in the L_{1/3} exponent set to 0"
CSV_COLUMNS = ("algorithm", "n", "log_time_natural", "qubits", "notes")


def _ln(N) -> float:
    if isinstance(N, int):
        return math.log(N)
    return math.log(float(N))


def ln_l13(N) -> float:
    """``ln L_{1/3}(N) = (ln N)**(1/3) * (ln ln N)**(2/3)``."""
    lnN = _ln(N)
    if lnN <= 1:
        raise ValueError("L_{1/3} needs N > e")
    return lnN ** (1 / 3) * math.log(lnN) ** (2 / 3)


def ln_l13_bits(n: int) -> float:
    """``ln L_{1/3}`` for an ``n``-bit modulus, taking ``ln N = n ln 2``."""
    lnN = n * math.log(2)
    if lnN <= 1:
        raise ValueError("L_{1/3} needs N > e")
    return lnN ** (1 / 3) * math.log(lnN) ** (2 / 3)


def l13(N) -> float:
    """``L_{1/3}(N)`` itself; overflows to ``inf`` for very large ``N``."""
    v = ln_l13(N)
    return math.exp(v) if v < 709 else math.inf


def gnfs_time(N) -> float:
    """Natural log of ``L_{1/3}(N) ** (64/9)**(1/3)``."""
    return GNFS_EXPONENT * ln_l13(N)


def hybrid_time(N) -> float:
    """Natural log of ``L_{1/3}(N) ** (8/3)**(1/3)``."""
    return HYBRID_EXPONENT * ln_l13(N)


@dataclass(frozen=True)
class ShorCost:
    n: int
    qubits: int
    depth_order: float
    cycles_estimate: float


def shor_cost(n: int, overhead: int = SHOR_QUBIT_OVERHEAD) -> ShorCost:
    """``2n + overhead`` qubits, depth of order ``n**3``, cycles scaled from RSA-2048.

    The cycle count is ``1e10 * (n/2048)**3``: cubic scaling from a single
    anchor, consistent with cubic depth but not an independent estimate.
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    return ShorCost(n, 2 * n + overhead, float(n) ** 3, SHOR_ANCHOR_CYCLES * (n / SHOR_ANCHOR_BITS) ** 3)


def hybrid_qubits(n: float, log_base: str = "e") -> float:
    """``8x + 4x log(1.44x)`` with ``x = n**(2/3)``.

    ``log_base`` is ``"e"`` or ``"2"``; the formula as usually quoted does
    not fix it.
    """
    if n < 8:
        raise ValueError("n must be >= 8")
    x = n ** (2 / 3)
    if log_base == "e":
        lg = math.log(1.44 * x)
    elif log_base in ("2", 2):
        lg = math.log2(1.44 * x)
    else:
        raise ValueError(f"log_base must be 'e' or '2', got {log_base!r}")
    return 8 * x + 4 * x * lg


def hybrid_qubits_both(n: float) -> dict[str, float]:
    return {"e": hybrid_qubits(n, "e"), "2": hybrid_qubits(n, "2")}


@dataclass(frozen=True)
class CrossoverReport:
    log_base: str
    n_star: float
    iterations: int
    bracket: tuple[float, float]
    quoted_n: float = QUOTED_CROSSOVER_BITS

    @property
    def ratio_to_quoted(self) -> float:
        return self.quoted_n / self.n_star

    @property
    def log10_gap(self) -> float:
        return math.log10(self.quoted_n / self.n_star)


class CrossoverError(ValueError):
    pass


def qubit_crossover(
    log_base: str = "e",
    lo: float = 8.0,
    hi: float = 1e9,
    rel_tol: float = 1e-6,
    overhead: int = SHOR_QUBIT_OVERHEAD,
) -> CrossoverReport:
    """Bit length where the hybrid qubit count falls to Shor's ``2n + overhead``.

    Bisects in ``log n`` until the bracket is narrower than ``rel_tol``.
    """

    def gap(n):
        return hybrid_qubits(n, log_base) - (2 * n + overhead)

    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0:
        return CrossoverReport(log_base, lo, 0, (lo, hi))
    if (g_lo > 0) == (g_hi > 0):
        raise CrossoverError(f"no sign change of the qubit gap on [{lo}, {hi}]")
    a, b = lo, hi
    it = 0
    while (b - a) > rel_tol * a:
        mid = math.sqrt(a * b)
        g = gap(mid)
        if g == 0:
            a = b = mid
            break
        if (g > 0) == (g_lo > 0):
            a = mid
        else:
            b = mid
        it += 1
    return CrossoverReport(log_base, (a + b) / 2, it, (lo, hi))


@dataclass(frozen=True)
class ParallelGroverCost:
    space_bits: float
    machines: int
    oracle_latency_s: float
    log2_per_machine_calls: float
    wall_time_s: float

    @property
    def per_machine_calls(self) -> float:
        return 2.0**self.log2_per_machine_calls

    @property
    def wall_time_years(self) -> float:
        return self.wall_time_s / SECONDS_PER_YEAR


def grover_parallel_cost(space: float, machines: int, oracle_latency_s: float) -> ParallelGroverCost:
    """Each of ``machines`` searches ``2**space / machines`` items with Grover.

    Per-machine calls are ``sqrt(2**space / K)``, so quadrupling ``K`` only
    halves the wall time.
    """
    if machines < 1:
        raise ValueError("need at least one machine")
    if math.log2(machines) > space:
        raise ValueError("more machines than items in the search space")
    log2_calls = (space - math.log2(machines)) / 2
    return ParallelGroverCost(space, machines, oracle_latency_s, log2_calls, 2.0**log2_calls * oracle_latency_s)


@dataclass(frozen=True)
class ResourceProfile:
    algorithm: str
    n: int
    log_time_natural: float
    qubits: float
    notes: str


def comparison_table(n: int, log_base: str = "e") -> list[ResourceProfile]:
    """GNFS, Shor and hybrid rows for an ``n``-bit modulus."""
    if n < 8:
        raise ValueError("n must be >= 8")
    lnl = ln_l13_bits(n)
    return [
        ResourceProfile(
            "gnfs", n, GNFS_EXPONENT * lnl, 0.0, f"L^{GNFS_EXPONENT:.4f}; {O1_CAVEAT}"
        ),
        ResourceProfile(
            "shor", n, 3 * math.log(n), float(2 * n), "time O(n^3) as ln(n^3); qubits 2n"
        ),
        ResourceProfile(
            "hybrid",
            n,
            HYBRID_EXPONENT * lnl,
            hybrid_qubits(n, log_base),
            f"L^{HYBRID_EXPONENT:.4f}; {O1_CAVEAT}; qubits 8x+4x*log_{log_base}(1.44x), x=n^(2/3)",
        ),
    ]


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def profiles_to_csv(rows: list[ResourceProfile]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.algorithm, r.n, _fmt(r.log_time_natural), _fmt(r.qubits), r.notes])
    return buf.getvalue()


def profiles_to_json(rows: list[ResourceProfile]) -> str:
    return json.dumps([asdict(r) for r in rows], sort_keys=True)


@dataclass(frozen=True)
class LiteratureDatum:
    source: str
    n: int
    qubits: float | None
    gates: float | None
    depth: float | None
    wall_time_s: float | None
    assumptions: str


def reference_points() -> tuple[LiteratureDatum, ...]:
    """Published RSA-2048 resource estimates."""
    return (
        LiteratureDatum(
            "gidney-ekera",
            2048,
            2e7,
            None,
            None,
            8 * 3600.0,
            "planar grid of qubits with nearest-neighbor connectivity; physical gate error rate 1e-3; "
            "surface code cycle time of 1 microsecond; reaction time of 10 microseconds",
        ),
        LiteratureDatum("gouzien", 2048, None, None, None, 177 * 86400.0, "alternative architecture; same target"),
        LiteratureDatum(
            "yamaguchi", 2048, 10241, 2.22e12, 1.79e12, None, "perfect-device statevector simulation (mpiQulacs)"
        ),
    )
