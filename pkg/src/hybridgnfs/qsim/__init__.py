from hybridgnfs.qsim.grover import (
    GroverConfig,
    GroverOutcome,
    boyer_schedule,
    grover_success_prob,
    optimal_iterations,
    run_grover_tile,
)
from hybridgnfs.qsim.shor import (
    measurement_distribution,
    run_shor_period_finding,
    shor_factor,
    shor_postprocess,
)

__all__ = [
    "GroverConfig",
    "GroverOutcome",
    "boyer_schedule",
    "grover_success_prob",
    "measurement_distribution",
    "optimal_iterations",
    "run_grover_tile",
    "run_shor_period_finding",
    "shor_factor",
    "shor_postprocess",
]
