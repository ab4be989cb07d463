"""Noisy-IQP critical-depth boundary, margins, noise budgets and grid depth bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, ParameterError
from .instance import IqpInstance, interaction_graph
from .topology import DeviceModel, HardwareGraph, subset_diameter

BOUNDARY_EPS = 0.5


@dataclass(frozen=True)
class PhaseParams:
    k: int = 2
    c: float = 1.0

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"locality k must be >= 1, got {self.k}")
        if not self.c > 0:
            raise ParameterError(f"boundary constant c must be positive, got {self.c}")

    @property
    def p_max(self) -> float:
        """Upper end k/e of the decreasing branch."""
        return self.k / math.e


@dataclass(frozen=True)
class NoiseChannel:
    p_I: float
    p_X: float
    p_Y: float
    p_Z: float

    def __post_init__(self):
        probs = (self.p_I, self.p_X, self.p_Y, self.p_Z)
        if any(not 0.0 <= x <= 1.0 for x in probs):
            raise ParameterError(f"Pauli probabilities must lie in [0, 1], got {probs}")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ParameterError(f"Pauli probabilities must sum to 1, got {sum(probs)!r}")

    @classmethod
    def depolarizing(cls, q: float) -> "NoiseChannel":
        return cls(1.0 - q, q / 3, q / 3, q / 3)

    @property
    def probs(self) -> tuple[float, float, float, float]:
        return (self.p_I, self.p_X, self.p_Y, self.p_Z)


def effective_p(ch: NoiseChannel) -> float:
    """Dephasing-like part of the channel: p_Z + min(p_X, p_Y)."""
    return ch.p_Z + min(ch.p_X, ch.p_Y)


def device_p_eff(dev: DeviceModel, idle_per_layer: float = 0.0) -> float:
    """Two-qubit error rate, optionally plus a linear idle-noise term."""
    return dev.two_qubit_error_rate + idle_per_layer


def _check_p(p: float, params: PhaseParams) -> None:
    if not 0.0 < p < params.p_max:
        raise DomainError(f"p = {p!r} outside (0, k/e) = (0, {params.p_max:.6g}) for k = {params.k}")


def critical_depth(p: float, params: PhaseParams = PhaseParams()) -> float:
    """c / (p ln(k/p)) on 0 < p < k/e."""
    _check_p(p, params)
    return params.c / (p * math.log(params.k / p))


def critical_depth_curve(p: np.ndarray, params: PhaseParams = PhaseParams()) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0) | (p >= params.p_max)):
        raise DomainError(f"all p must lie in (0, {params.p_max:.6g})")
    return params.c / (p * np.log(params.k / p))


class Regime(str, Enum):
    SIMULATABLE = "Simulatable"
    POTENTIALLY_HARD = "PotentiallyHard"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class OperatingPoint:
    p_eff: float
    D: float
    k: int = 2
    label: str = ""

    def __post_init__(self):
        if self.D < 1:
            raise ParameterError(f"depth must be >= 1, got {self.D}")


@dataclass(frozen=True)
class MarginReport:
    point: OperatingPoint
    d_star: float
    margin: float
    regime: Regime

    def row(self) -> dict:
        return {"label": self.point.label, "p_eff": self.point.p_eff, "D_H": self.point.D,
                "d_star": self.d_star, "margin": self.margin, "regime": self.regime.value}


def classify(m: float, eps: float = BOUNDARY_EPS) -> Regime:
    if abs(m) < eps:
        return Regime.BOUNDARY
    return Regime.POTENTIALLY_HARD if m > 0 else Regime.SIMULATABLE


def margin(point: OperatingPoint, params: PhaseParams | None = None) -> MarginReport:
    """Signed distance d_star - D of an operating point from the boundary.

    ``params`` defaults to the point's own locality with c = 1.
    """
    params = params or PhaseParams(point.k)
    d_star = critical_depth(point.p_eff, params)
    m = d_star - point.D
    return MarginReport(point, d_star, m, classify(m))


def p_required(D: float, params: PhaseParams = PhaseParams(), rtol: float = 1e-12) -> float:
    """Largest p with D <= D_*(p): the root of D_*(p) = D on (0, k/e).

    Bisection in log p. Depths at or below c*e/k, the boundary's value at
    p = k/e, have no root in the domain.
    """
    floor = params.c * math.e / params.k
    if not D > floor:
        raise DomainError(f"depth {D!r} <= c*e/k = {floor:.6g}; no noise level in (0, k/e) reaches it")
    lo, hi = math.log(1e-300), math.log(params.p_max)
    f = lambda lp: params.c / (math.exp(lp) * (math.log(params.k) - lp)) - D
    if f(lo) <= 0:
        raise DomainError(f"depth {D!r} beyond the bracketed range")
    while hi - lo > rtol * 0.5:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


@dataclass(frozen=True)
class NoiseBudget:
    exact: float
    estimate: float


def noise_budget_ratio(D_FC: float, D_S: float, params: PhaseParams = PhaseParams()) -> NoiseBudget:
    """p_req(D_S)/p_req(D_FC) and its first-order estimate D_FC/D_S."""
    if not D_S >= D_FC >= 1:
        raise ParameterError(f"need D_S >= D_FC >= 1, got D_FC={D_FC}, D_S={D_S}")
    exact = p_required(D_S, params) / p_required(D_FC, params)
    return NoiseBudget(exact, D_FC / D_S)


# -- 2D grid bounds (order-wise, unit constants) ---------------------------


@dataclass(frozen=True)
class DepthBounds:
    lower_dist: int
    lower_diam: int
    upper: int
    lam: int
    note: str = "order-wise; constants fixed to 1"

    @property
    def lower(self) -> int:
        return max(self.lower_dist, self.lower_diam)

    def contains(self, depth: int) -> bool:
        return self.lower <= depth <= self.upper


def term_layers(inst: IqpInstance) -> list[list[int]]:
    """ASAP partition of the term list, each term occupying its support for one slot."""
    ready = [0] * inst.n
    layers: list[list[int]] = []
    for t, (s, _) in enumerate(inst.terms):
        slot = max(ready[q] for q in s)
        if slot == len(layers):
            layers.append([])
        layers[slot].append(t)
        for q in s:
            ready[q] = slot + 1
    return layers


def grid_depth_bounds(inst: IqpInstance, g: HardwareGraph, mapping, D_FC: int,
                      lam: int | None = None) -> DepthBounds:
    """Distance, support-diameter and sqrt(n) bounds on the routed grid depth.

    ``lam`` (parallel SWAP moves per layer) defaults to floor(n/2).
    """
    if g.kind != "grid":
        raise ParameterError(f"{g.name} is not a grid")
    mapping = list(mapping)
    if len(mapping) != inst.n or len(set(mapping)) != inst.n:
        raise ParameterError("mapping must be injective over the instance's qubits")
    lam = max(1, inst.n // 2) if lam is None else lam
    if lam < 1:
        raise ParameterError(f"lam must be >= 1, got {lam}")
    demand = sum(int(g.dist[mapping[u], mapping[v]]) - 1 for u, v in interaction_graph(inst).edges)
    lower_dist = D_FC + math.ceil(demand / lam)
    lower_diam = 0
    for layer in term_layers(inst):
        lower_diam += max(subset_diameter(g, [mapping[q] for q in inst.terms[t][0]]) for t in layer)
    upper = math.isqrt(inst.n - 1) + 1 if inst.n > 1 else 1
    return DepthBounds(lower_dist, lower_diam, upper * D_FC, lam)
