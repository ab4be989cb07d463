"""Connectivity-aware compilation and noise-boundary analysis for k-local IQP circuits."""

from ._accel import BACKEND
from .instance import IqpInstance, gen_pattern, gen_rhg, interaction_graph
from .phase import (MarginReport, NoiseChannel, OperatingPoint, PhaseParams, Regime, critical_depth,
                    effective_p, grid_depth_bounds, margin, noise_budget_ratio, p_required)
from .router import CompilationReport, compile_instance, place_initial, route, schedule_depth
from .synth import Circuit, build_logical_circuit, decompose_term
from .topology import DeviceModel, HardwareGraph, build_topology, get_device, load_device

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Circuit", "CompilationReport", "DeviceModel", "HardwareGraph", "IqpInstance",
    "MarginReport", "NoiseChannel", "OperatingPoint", "PhaseParams", "Regime",
    "build_logical_circuit", "build_topology", "compile_instance", "critical_depth",
    "decompose_term", "effective_p", "gen_pattern", "gen_rhg", "get_device", "grid_depth_bounds",
    "interaction_graph", "load_device", "margin", "noise_budget_ratio", "p_required",
    "place_initial", "route", "schedule_depth",
]
