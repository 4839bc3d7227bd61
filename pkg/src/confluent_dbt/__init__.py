"""Confluent Darboux chains and the rational potential extensions they
generate, with exact big-rational verification oracles."""

__version__ = "0.1.0"

from .exactalg import (  # noqa: F401
    ExactPoly,
    RationalFn,
    RootIsolation,
    TrigGauged,
    RadialGauged,
    wronskian,
    count_roots,
    isolate_roots,
    refine_root,
)
