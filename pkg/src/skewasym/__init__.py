"""Metric-adjusted skew informations as U(1) asymmetry monotones.

Spectral evaluation of the whole skew-information family, covariant
channels, the catalytic ladder protocol that breaks superadditivity, and a
small harness for deciding when distributed clocks are worth collecting.
"""
from .monotone import MonotoneFunction, builtin, sld, weight, wigner_yanase, wyd
from .qmat import (
    DensityMatrix,
    Observable,
    SubsystemLayout,
    embed_local_observables,
    partial_trace,
    tensor,
)
from .skewinfo import (
    skew_info,
    skew_value,
    superadditivity_gap,
    variance,
    wy_direct,
    wyd_direct,
)

__version__ = "0.1.0"

__all__ = [
    "MonotoneFunction",
    "builtin",
    "sld",
    "weight",
    "wigner_yanase",
    "wyd",
    "DensityMatrix",
    "Observable",
    "SubsystemLayout",
    "embed_local_observables",
    "partial_trace",
    "tensor",
    "skew_info",
    "skew_value",
    "superadditivity_gap",
    "variance",
    "wy_direct",
    "wyd_direct",
]
