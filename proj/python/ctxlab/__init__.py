"""Measurement-context analysis for POVMs and their dilations."""

from ._ctxlab import (
    DEFAULT_TOL,
    DimensionError,
    Error,
    InputError,
    InvariantError,
    LabelError,
    NumericError,
    Povm,
    hardy_state,
    load_povm,
    max_violation,
    naimark_dilate,
    run_cli,
    three_path_povm,
)

__all__ = [
    "DEFAULT_TOL",
    "DimensionError",
    "Error",
    "InputError",
    "InvariantError",
    "LabelError",
    "NumericError",
    "Povm",
    "hardy_state",
    "load_povm",
    "max_violation",
    "naimark_dilate",
    "run_cli",
    "three_path_povm",
]
