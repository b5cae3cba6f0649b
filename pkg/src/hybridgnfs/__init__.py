"""Desk-scale factoring workbench: number field sieve, Grover tile offload, cost models."""

from hybridgnfs.gnfs import FactorConfig, factor

__version__ = "0.1.0"

__all__ = ["FactorConfig", "factor", "__version__"]
