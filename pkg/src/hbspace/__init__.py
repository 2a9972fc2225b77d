"""Interpolation with derivative samples in Paley-Wiener and homogeneous
Bessel de Branges spaces."""

from __future__ import annotations

from .errors import HBSpaceError
from .space import SpaceDescriptor, eval_companions, eval_E, phase_derivative
from .nodes import Node, NodeSet, find_nodes
from .kernels import eval_K, eval_K2, inner_products_PQ
from .interp import (
    SampleSet,
    EvalResult,
    Interpolant,
    interpolate,
    interpolate_bessel_A,
    interpolate_bessel_B,
    interpolate_derivative,
)

__version__ = "0.1.0"

__all__ = [
    "HBSpaceError",
    "SpaceDescriptor",
    "eval_companions",
    "eval_E",
    "phase_derivative",
    "Node",
    "NodeSet",
    "find_nodes",
    "eval_K",
    "eval_K2",
    "inner_products_PQ",
    "SampleSet",
    "EvalResult",
    "Interpolant",
    "interpolate",
    "interpolate_bessel_A",
    "interpolate_bessel_B",
    "interpolate_derivative",
]
