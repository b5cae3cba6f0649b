"""Command-line entry point.

Every command takes ``--seed``, ``--format``, ``--output``, ``--workers`` and
``--verbose``. Machine-readable output carries no wall-clock values except
the timing columns of ``bench``. Exit codes: 0 success, 1 bad input,
2 algorithmic failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time

import numpy as np

from hybridgnfs import estimator
from hybridgnfs.errors import DensityError, InsufficientRelations, PipelineFailure
from hybridgnfs.gnfs.pipeline import FactorConfig, factor
from hybridgnfs.gnfs.polynomial import select_polynomial
from hybridgnfs.hybrid import STRATEGIES, Region, hybrid_relation_search, tile_statistics
from hybridgnfs.numtheory import build_factor_base, is_prime, poisson_pmf, poisson_tail
from hybridgnfs.qsim.grover import SCHEDULES, GroverConfig, grover_success_prob, run_grover_tile
from hybridgnfs.qsim.shor import MAX_N, shor_factor

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240101
TILES_DEFAULTS = {"N": 100160063, "degree": 3, "B": 30000, "region": (-400, 400, 1500, 1700), "samples": 80000}
BENCH_CORPUS = (45113, 1022117, 100160063)

log = logging.getLogger("hybridgnfs")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_int(text: str) -> int:
    text = text.strip()
    try:
        if text.lower().startswith("0x"):
            return int(text, 16)
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def prob(x: float) -> float:
    return round(float(x), 4)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--verbose", "-v", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="hybridgnfs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("factor", parents=[common], help="factor N with the number field sieve")
    p.add_argument("N", type=parse_int)
    p.add_argument("--mode", choices=("classical", "hybrid"), default="classical")
    p.add_argument("--B", type=int, help="smoothness bound")
    p.add_argument("--degree", type=int, choices=(1, 2, 3))
    p.add_argument("--M", type=int, help="region half-width")
    p.add_argument("--band", type=float, nargs=2, default=(0.8, 1.25), metavar=("LO", "HI"))
    p.add_argument("--strategy", choices=STRATEGIES, default="retry-short")
    p.add_argument("--noise", type=float, default=1e-3, help="per-oracle-call failure probability")
    p.add_argument("--trial-bound", type=int, default=100)

    p = sub.add_parser("estimate", parents=[common], help="resource and complexity estimates")
    p.add_argument("--bits", type=int, default=2048)
    p.add_argument("--log-base", choices=("e", "2"), default="e")
    p.add_argument("--parallel-grover", action="store_true", help="report parallel Grover costs instead")
    p.add_argument("--space", type=float, default=128, help="log2 of the search space")
    p.add_argument("--machines", type=float, nargs="+", default=[1, 1000, 1e6])
    p.add_argument("--latency-ns", type=float, default=1.0)

    p = sub.add_parser("tiles", parents=[common], help="relations-per-tile statistics")
    p.add_argument("--N", type=parse_int, default=TILES_DEFAULTS["N"])
    p.add_argument("--degree", type=int, choices=(1, 2, 3), default=TILES_DEFAULTS["degree"])
    p.add_argument("--B", type=int, default=TILES_DEFAULTS["B"])
    p.add_argument("--region", type=int, nargs=4, default=TILES_DEFAULTS["region"],
                   metavar=("A_LO", "A_HI", "B_LO", "B_HI"))
    p.add_argument("--samples", type=int, default=TILES_DEFAULTS["samples"])

    p = sub.add_parser("shor-sim", parents=[common], help="simulated Shor factoring for N <= 31")
    p.add_argument("N", type=parse_int)
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--counting-bits", type=int)

    p = sub.add_parser("grover-sim", parents=[common], help="Monte-Carlo runs of the Grover sampler")
    p.add_argument("--T", type=int, default=1024)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--schedule", choices=SCHEDULES, default="optimal")
    p.add_argument("--iterations", type=int)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=10000)

    p = sub.add_parser("bench", parents=[common], help="classical vs hybrid relation search timings")
    p.add_argument("--N", type=parse_int, nargs="+", default=list(BENCH_CORPUS))
    p.add_argument("--modes", nargs="+", choices=("classical", "hybrid"), default=["classical", "hybrid"])
    p.add_argument("--B", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--no-timing", action="store_true", help="blank the timing columns")
    return parser


# ----------------------------------------------------------------- commands


def cmd_factor(args) -> tuple[dict, str, int]:
    N = args.N
    if N < 2:
        raise UsageError("N must be >= 2")
    if is_prime(N):
        doc = {"N": N, "prime": True, "factors": [N]}
        return doc, f"{N} is prime\n", 0
    cfg = FactorConfig(
        mode=args.mode,
        B=args.B,
        degree=args.degree,
        M=args.M,
        seed=args.seed,
        workers=args.workers,
        strategy=args.strategy,
        noise_epsilon=args.noise,
        band=tuple(args.band),
        trial_bound=args.trial_bound,
    )
    try:
        report = factor(N, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    doc = {"prime": False, "mode": args.mode, **report.as_dict()}
    lines = [f"N = {N}", f"factors: {' * '.join(map(str, report.factors))}"]
    if report.stripped:
        lines.append(f"trial division: {sorted(set(report.stripped))}")
    for s in report.splits:
        lines.append(f"split {s.N} -> {s.factor}")
        if s.early:
            lines.append(f"  early exit: {s.early}")
            continue
        lines.append(f"  f = {s.polynomial}, m = {s.m}, B = {s.B}, M = {s.M}")
        lines.append(
            f"  relations {s.relations}, columns {s.columns}, M1 {s.m1}, "
            f"dependencies {s.dependencies} (tried {s.dependencies_tried}, sqrt failures {s.sqrt_failures})"
        )
        lines.append("  timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in s.timings.items()))
        if s.offload:
            o = s.offload
            lines.append(
                f"  tiles {o['tiles_dispatched']}, found {o['found']}, verified {o['verified']}, "
                f"rejected {o['rejected']}, oracle calls {o['oracle_calls_total']}"
            )
            lines.append("  bottoms: " + ", ".join(f"{k} {v}" for k, v in o["bottoms_by_cause"].items()))
    return doc, "\n".join(lines) + "\n", 0


def cmd_estimate(args) -> tuple[object, str, int]:
    if args.parallel_grover:
        rows = []
        for K in args.machines:
            K = int(K)
            try:
                c = estimator.grover_parallel_cost(args.space, K, args.latency_ns * 1e-9)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            rows.append({
                "space_bits": args.space,
                "machines": K,
                "latency_s": args.latency_ns * 1e-9,
                "log2_calls_per_machine": round(c.log2_per_machine_calls, 6),
                "wall_time_s": float(f"{c.wall_time_s:.6e}"),
                "wall_time_years": round(c.wall_time_years, 4),
            })
        text = "\n".join(
            f"K={r['machines']:>10}: 2^{r['log2_calls_per_machine']:.3f} calls/machine, "
            f"{r['wall_time_years']:.4f} years"
            for r in rows
        )
        return {"parallel_grover": rows}, text + "\n", 0

    if args.bits < 8:
        raise UsageError("--bits must be >= 8")
    rows = estimator.comparison_table(args.bits, args.log_base)
    crossings = [estimator.qubit_crossover(base) for base in ("e", "2")]
    shor = estimator.shor_cost(args.bits)
    doc = {
        "table": [
            {"algorithm": r.algorithm, "n": r.n, "log_time_natural": round(r.log_time_natural, 6),
             "qubits": round(r.qubits, 6), "notes": r.notes}
            for r in rows
        ],
        "shor_cost": {"qubits": shor.qubits, "depth_order": shor.depth_order, "cycles_estimate": shor.cycles_estimate},
        "hybrid_qubits": {k: round(v, 6) for k, v in estimator.hybrid_qubits_both(args.bits).items()},
        "crossover": [
            {"log_base": c.log_base, "n_star": round(c.n_star, 3), "quoted_n": c.quoted_n,
             "quoted_over_computed": round(c.ratio_to_quoted, 3)}
            for c in crossings
        ],
        "exponents": {"gnfs": round(estimator.GNFS_EXPONENT, 4), "hybrid": round(estimator.HYBRID_EXPONENT, 4)},
        "caveat": estimator.O1_CAVEAT,
    }
    csv_text = estimator.profiles_to_csv(rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for c in crossings:
        q = estimator.hybrid_qubits(c.n_star, c.log_base)
        w.writerow([f"crossover-log{c.log_base}", round(c.n_star), "", f"{q:.6f}",
                    f"quoted n~{c.quoted_n:.0f}; quoted/computed {c.ratio_to_quoted:.3f}"])
    csv_text += buf.getvalue()

    lines = [f"n = {args.bits} bits ({estimator.O1_CAVEAT})"]
    for r in rows:
        lines.append(f"  {r.algorithm:<7} ln(time) {r.log_time_natural:12.4f}   qubits {r.qubits:12.2f}")
    lines.append(f"  shor: 2n+{estimator.SHOR_QUBIT_OVERHEAD} = {shor.qubits} qubits, ~{shor.cycles_estimate:.3e} cycles")
    for c in crossings:
        lines.append(
            f"  crossover (log base {c.log_base}): n* = {c.n_star:.1f}; reported elsewhere n ~ {c.quoted_n:.0e} "
            f"({c.ratio_to_quoted:.1f}x larger)"
        )
    return doc, "\n".join(lines) + "\n", 0, csv_text


def cmd_tiles(args) -> tuple[dict, str, int]:
    a_lo, a_hi, b_lo, b_hi = args.region
    try:
        region = Region(a_lo, a_hi, b_lo, b_hi)
        poly = select_polynomial(args.N, args.degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    base = build_factor_base(poly, args.B, 0)
    try:
        stats = tile_statistics(poly, base, region, args.samples, args.seed)
    except DensityError as exc:
        raise UsageError(str(exc)) from exc
    if stats.tiles < 100:
        raise UsageError(f"only {stats.tiles} calibrated tiles; enlarge --region or lower --B")
    poisson = [poisson_pmf(0, 1), poisson_pmf(1, 1), poisson_pmf(2, 1), poisson_tail(3, 1)]
    labels = ["0", "1", "2", ">=3"]
    rows = [
        {"k": lab, "observed": c, "fraction": prob(f), "poisson": prob(p)}
        for lab, c, f, p in zip(labels, stats.counts, stats.fractions, poisson)
    ]
    doc = {
        "N": args.N,
        "polynomial": str(poly),
        "B": args.B,
        "region": list(args.region),
        "density": round(stats.density.density, 8),
        "density_half_width": round(stats.density.half_width, 8),
        "tile_shape": list(stats.tile_shape),
        "tiles": stats.tiles,
        "edge_tiles": stats.edge_tiles,
        "distribution": rows,
        "chi_square": round(stats.chi_square, 4),
        "p_value": prob(stats.p_value),
    }
    lines = [
        f"f = {poly}, B = {args.B}, region {args.region}",
        f"density {stats.density.density:.6f} +/- {stats.density.half_width:.6f}; tile {stats.tile_shape[0]}x{stats.tile_shape[1]}",
        f"{stats.tiles} calibrated tiles ({stats.edge_tiles} edge tiles excluded)",
    ]
    for r in rows:
        lines.append(f"  k={r['k']:<3} observed {r['fraction']:.4f}   Poisson(1) {r['poisson']:.4f}")
    lines.append(f"chi-square {stats.chi_square:.4f}, p = {stats.p_value:.4f}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "observed", "fraction", "poisson"])
    for r in rows:
        w.writerow([r["k"], r["observed"], f"{r['fraction']:.4f}", f"{r['poisson']:.4f}"])
    return doc, "\n".join(lines) + "\n", 0, buf.getvalue()


def cmd_shor_sim(args) -> tuple[dict, str, int]:
    N = args.N
    if N > MAX_N:
        raise UsageError(f"N={N} exceeds the statevector ceiling of {MAX_N}")
    if N < 3 or N % 2 == 0:
        raise UsageError(f"N={N} rejected: must be odd and >= 3")
    if is_prime(N):
        raise UsageError(f"N={N} rejected: prime")
    run = shor_factor(N, seed=args.seed, budget=args.budget, t=args.counting_bits)
    attempts = [
        {"a": at.a, "measurement": at.measurement, "period": at.period,
         "factors": sorted(at.factors) if at.factors else None, "lucky": at.lucky}
        for at in run.attempts
    ]
    doc = {"N": N, "success": run.success, "factors": sorted(run.factors) if run.factors else None,
           "attempts": attempts}
    lines = [f"N = {N}"]
    for i, at in enumerate(attempts, 1):
        if at["lucky"]:
            lines.append(f"  attempt {i}: a={at['a']} shares a factor with N")
        else:
            lines.append(f"  attempt {i}: a={at['a']} measured {at['measurement']}, period {at['period']}, "
                         f"factors {at['factors']}")
    lines.append(f"factors: {doc['factors']}" if run.success else f"no factors within {args.budget} attempts")
    return doc, "\n".join(lines) + "\n", 0 if run.success else 2


def cmd_grover_sim(args) -> tuple[dict, str, int]:
    T, k = args.T, args.k
    if T < 1 or not 0 <= k <= T:
        raise UsageError("need T >= 1 and 0 <= k <= T")
    try:
        cfg = GroverConfig(schedule=args.schedule, iterations=args.iterations, noise_epsilon=args.noise)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rng = np.random.default_rng(args.seed)
    table = np.zeros(T, dtype=bool)
    table[rng.choice(T, size=k, replace=False)] = True
    found = calls = 0
    causes: dict[str, int] = {}
    for _ in range(args.trials):
        out = run_grover_tile(table, T, cfg, rng)
        calls += out.oracle_calls
        if out.found:
            found += 1
        else:
            causes[out.cause] = causes.get(out.cause, 0) + 1
    doc = {"T": T, "k": k, "schedule": args.schedule, "noise": args.noise, "trials": args.trials,
           "found_rate": prob(found / args.trials), "mean_oracle_calls": round(calls / args.trials, 4),
           "bottoms_by_cause": dict(sorted(causes.items()))}
    if args.schedule != "boyer" or args.iterations is not None:
        r = cfg.fixed_iterations(T)
        doc["iterations"] = r
        doc["closed_form"] = prob((1 - args.noise) ** r * grover_success_prob(T, k, r))
    text = "\n".join(f"{key}: {val}" for key, val in doc.items()) + "\n"
    return doc, text, 0


BENCH_COLUMNS = ("N", "mode", "B", "M", "relations", "pairs_evaluated", "relations_per_kpair", "seconds",
                 "seconds_per_relation")


def cmd_bench(args) -> tuple[list, str, int]:
    from hybridgnfs.gnfs.linalg import column_layout
    from hybridgnfs.gnfs.pipeline import HYBRID_AREA_SCALE, default_parameters
    from hybridgnfs.gnfs.relations import DEFAULT_MARGIN, classical_relation_search

    rows = []
    for N in args.N:
        try:
            poly = select_polynomial(N, 3 if N.bit_length() > 12 else 2)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        B0, M0 = default_parameters(N)
        B = args.B or B0
        base = build_factor_base(poly, B)
        target = column_layout(base)["total"] + DEFAULT_MARGIN
        for mode in args.modes:
            M = args.M or M0
            if mode == "hybrid" and args.M is None:
                M = math.ceil(M0 * HYBRID_AREA_SCALE)
            t0 = time.perf_counter()
            if mode == "classical":
                res = classical_relation_search(poly, base, M, target, workers=args.workers)
                n_rel, pairs = len(res.relations), res.pairs_scanned
            else:
                hres = hybrid_relation_search(
                    poly, base, Region.square(M), target, seed=args.seed, grover=GroverConfig(noise_epsilon=0.0),
                    workers=args.workers, stripe_height=max(1, -(-20000 // (2 * M + 1))),
                )
                n_rel = len(hres.relations)
                pairs = hres.report.area_dispatched + sum(d.samples for d in hres.densities)
            dt = time.perf_counter() - t0
            rows.append({
                "N": N, "mode": mode, "B": B, "M": M, "relations": n_rel, "pairs_evaluated": pairs,
                "relations_per_kpair": round(1000 * n_rel / pairs, 4),
                "seconds": None if args.no_timing else round(dt, 4),
                "seconds_per_relation": None if args.no_timing else round(dt / n_rel, 6),
            })
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if v is None else v) for k, v in r.items()})
    return rows, buf.getvalue(), 0, buf.getvalue()


COMMANDS = {
    "factor": cmd_factor,
    "estimate": cmd_estimate,
    "tiles": cmd_tiles,
    "shor-sim": cmd_shor_sim,
    "grover-sim": cmd_grover_sim,
    "bench": cmd_bench,
}


def _csv_from_doc(doc) -> str:
    rows = doc if isinstance(doc, list) else [doc]
    flat = [{k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v) for k, v in r.items()}
            for r in rows]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(flat)
    return buf.getvalue()


def render(command: str, fmt: str, result) -> str:
    doc, text, _code, *rest = result
    if fmt == "text":
        return text
    if fmt == "csv":
        return rest[0] if rest else _csv_from_doc(doc)
    return json.dumps({"schema_version": SCHEMA_VERSION, "command": command, "result": doc}, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.workers < 1:
        print("--workers must be >= 1", file=sys.stderr)
        return 1
    try:
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hybridgnfs {args.command}: {exc}", file=sys.stderr)
        return 1
    except (PipelineFailure, InsufficientRelations, DensityError) as exc:
        print(f"hybridgnfs {args.command}: failed: {exc}", file=sys.stderr)
        if isinstance(exc, PipelineFailure) and args.format == "json":
            sys.stdout.write(json.dumps({"schema_version": SCHEMA_VERSION, "command": args.command,
                                         "error": str(exc), "stats": exc.stats}, sort_keys=True, default=str) + "\n")
        return 2
    out = render(args.command, args.format, result)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return result[2]


if __name__ == "__main__":
    sys.exit(main())
