"""Exact small-scale oracles: brute-force IQP distributions, statevector
simulation, component-wise products and Pauli-trajectory noisy sampling."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._accel import kernels
from .errors import PartitionError, ResourceError
from .instance import IqpInstance
from .phase import NoiseChannel
from .router import schedule_depth
from .synth import Circuit, Gate

BRUTE_FORCE_MAX = 22
STATEVECTOR_MAX = 14
TRAJECTORY_MAX = 12

_S2 = 1.0 / math.sqrt(2.0)
_PAULI = {
    1: (0.0, 1.0, 1.0, 0.0),
    2: (0.0, -1.0j, 1.0j, 0.0),
    3: (1.0, 0.0, 0.0, -1.0),
}


@dataclass(frozen=True)
class OutputDistribution:
    """Probabilities indexed by basis state; bit j of the index is qubit j."""

    n: int
    probs: np.ndarray

    def __post_init__(self):
        if self.probs.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} probabilities, got {self.probs.shape}")

    def bitstring(self, x: int) -> str:
        return format_bits(x, self.n)

    def max_deviation(self, other: "OutputDistribution") -> float:
        return float(np.max(np.abs(self.probs - other.probs)))


def format_bits(x: int, n: int) -> str:
    """Bitstring with qubit 0 as the leftmost character."""
    return "".join("1" if (x >> j) & 1 else "0" for j in range(n))


def _guard(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise ResourceError(f"{what} limited to {limit} qubits, got {n}")


def amplitudes(inst: IqpInstance) -> np.ndarray:
    """Output amplitudes via phase vector and a Walsh-Hadamard transform."""
    _guard(inst.n, BRUTE_FORCE_MAX, "brute-force amplitudes")
    masks = np.array([sum(1 << q for q in s) for s, _ in inst.terms], dtype=np.int64)
    thetas = np.array([t for _, t in inst.terms], dtype=np.float64)
    phase = kernels.parity_phases(masks, thetas, inst.n)
    return kernels.fwht(np.exp(1j * phase)) / float(1 << inst.n)


def brute_force_probs(inst: IqpInstance) -> OutputDistribution:
    a = amplitudes(inst)
    p = a.real ** 2 + a.imag ** 2
    return OutputDistribution(inst.n, p / p.sum())


# -- statevector ----------------------------------------------------------


def apply_gate(state: np.ndarray, n: int, g: Gate) -> None:
    k = g.kind
    if k == "H":
        kernels.apply_1q(state, n, g.qubits[0], _S2, _S2, _S2, -_S2)
    elif k == "RZ":
        e = np.exp(-0.5j * g.angle)
        kernels.apply_1q(state, n, g.qubits[0], e, 0.0, 0.0, np.conj(e))
    elif k == "CX":
        kernels.apply_cx(state, n, *g.qubits)
    elif k == "ZZ":
        kernels.apply_zz(state, n, g.qubits[0], g.qubits[1], g.angle)
    elif k == "SWAP":
        kernels.apply_swap(state, n, *g.qubits)
    else:
        raise ValueError(f"unknown gate kind {k!r}")


def apply_pauli(state: np.ndarray, n: int, q: int, which: int) -> None:
    """Apply X (1), Y (2) or Z (3) to qubit ``q``."""
    kernels.apply_1q(state, n, q, *(complex(x) for x in _PAULI[which]))


def simulate_circuit_statevector(c: Circuit, gates: Iterable[Gate] | None = None) -> np.ndarray:
    """Statevector after applying the circuit to |0...0>."""
    _guard(c.n, STATEVECTOR_MAX, "statevector simulation")
    state = np.zeros(1 << c.n, dtype=np.complex128)
    state[0] = 1.0
    for g in c.gates if gates is None else gates:
        apply_gate(state, c.n, g)
    return state


def compact(c: Circuit) -> tuple[Circuit, list[int]]:
    """Restrict a physical circuit to the wires it touches.

    Returns the compacted circuit (layouts relabelled) and the sorted list
    of original wires.
    """
    used = set(c.initial_layout or ()) | set(c.final_layout or ())
    for g in c.gates:
        used.update(g.qubits)
    wires = sorted(used)
    new = {q: i for i, q in enumerate(wires)}
    gates = tuple(Gate(g.kind, tuple(new[q] for q in g.qubits), g.angle) for g in c.gates)
    lay = lambda L: None if L is None else tuple(new[q] for q in L)
    return (Circuit(len(wires), gates, c.frame, lay(c.initial_layout), lay(c.final_layout), dict(c.meta)),
            wires)


def _logical_marginal(probs: np.ndarray, n_wires: int, final: Sequence[int]) -> np.ndarray:
    """Marginal over the wires holding logical qubits, re-indexed logically."""
    idx = np.arange(1 << n_wires, dtype=np.int64)
    x = np.zeros_like(idx)
    for l, p in enumerate(final):
        x |= ((idx >> p) & 1) << l
    return np.bincount(x, weights=probs, minlength=1 << len(final))


def circuit_probs(c: Circuit) -> OutputDistribution:
    """Logical output distribution of a logical or routed physical circuit.

    For physical circuits the touched wires are simulated and the result is
    un-permuted through the final layout; the initial layout must place the
    logical qubits on wires prepared in |0>, which every wire is.
    """
    if c.frame == "logical":
        s = simulate_circuit_statevector(c)
        return OutputDistribution(c.n, np.abs(s) ** 2)
    cc, _ = compact(c)
    s = simulate_circuit_statevector(cc)
    return OutputDistribution(len(cc.final_layout),
                              _logical_marginal(np.abs(s) ** 2, cc.n, cc.final_layout))


# -- component products ---------------------------------------------------


def component_probs(inst: IqpInstance, components: Sequence[Sequence[int]],
                    deleted: Iterable[int] = ()) -> list[OutputDistribution]:
    """Brute-force distribution of each component's restricted instance.

    Terms touching a deleted qubit are dropped first. A remaining term that
    spans two components is a partition error.
    """
    deleted = set(deleted)
    where: dict[int, int] = {}
    for i, comp in enumerate(components):
        for q in comp:
            if q in where or q in deleted or not 0 <= q < inst.n:
                raise PartitionError(f"qubit {q} is repeated, deleted or out of range")
            where[q] = i
    for s, _ in inst.terms:
        if any(q in deleted for q in s):
            continue
        owners = {where.get(q) for q in s}
        if None in owners:
            raise PartitionError(f"term {s} touches a surviving qubit outside every component")
        if len(owners) > 1:
            raise PartitionError(f"term {s} straddles components {sorted(owners)}")
    kept = IqpInstance(inst.n, inst.k, tuple((s, t) for s, t in inst.terms if not deleted & set(s)),
                       inst.seed)
    out = []
    for comp in components:
        _guard(len(comp), BRUTE_FORCE_MAX, "component brute force")
        out.append(brute_force_probs(kept.restricted(comp)))
    return out


def joint_probs(components: Sequence[Sequence[int]], dists: Sequence[OutputDistribution],
                n: int) -> OutputDistribution:
    """Product distribution on ``n`` qubits; qubits outside every component read 0."""
    _guard(n, BRUTE_FORCE_MAX, "joint distribution")
    joint = np.zeros(1 << n)
    joint[0] = 1.0
    placed: list[int] = []
    for comp, d in zip(components, dists):
        comp = sorted(comp)
        sub = np.arange(1 << len(comp), dtype=np.int64)
        full = np.zeros_like(sub)
        for i, q in enumerate(comp):
            full |= ((sub >> i) & 1) << q
        nz = np.nonzero(joint)[0]
        new = np.zeros_like(joint)
        np.add.at(new, (nz[:, None] | full[None, :]).ravel(), (joint[nz][:, None] * d.probs[None, :]).ravel())
        joint = new
        placed.extend(comp)
    return OutputDistribution(n, joint)


# -- noisy trajectories ---------------------------------------------------


@dataclass(frozen=True)
class Histogram:
    n: int
    counts: np.ndarray
    shots: int

    def probs(self) -> np.ndarray:
        return self.counts / self.shots if self.shots else np.zeros_like(self.counts, dtype=float)

    def tv_distance(self, dist: OutputDistribution) -> float:
        return 0.5 * float(np.abs(self.probs() - dist.probs).sum())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bitstring", "count", "probability"])
        p = self.probs()
        for x in np.nonzero(self.counts)[0]:
            w.writerow([format_bits(int(x), self.n), int(self.counts[x]), repr(float(p[x]))])
        return buf.getvalue()


def noisy_trajectory_sample(c: Circuit, ch: NoiseChannel, shots: int, seed: int = 0) -> Histogram:
    """Sample a logical circuit with a Pauli channel on every qubit after each layer.

    Shots with the same Pauli pattern share one statevector simulation.
    """
    _guard(c.n, TRAJECTORY_MAX, "trajectory sampling")
    if shots < 0:
        raise ValueError(f"shots must be >= 0, got {shots}")
    counts = np.zeros(1 << c.n, dtype=np.int64)
    if shots == 0:
        return Histogram(c.n, counts, 0)
    sched = schedule_depth(c)
    rng = np.random.default_rng(seed)
    paulis = rng.choice(4, size=(shots, sched.depth, c.n), p=np.array(ch.probs)).astype(np.uint8)
    patterns, multiplicity = np.unique(paulis.reshape(shots, -1), axis=0, return_counts=True)
    for pat, mult in zip(patterns, multiplicity):
        pat = pat.reshape(sched.depth, c.n)
        state = np.zeros(1 << c.n, dtype=np.complex128)
        state[0] = 1.0
        for t in range(sched.depth):
            for g in sched.layer_gates(t):
                apply_gate(state, c.n, g)
            for q in np.nonzero(pat[t])[0]:
                apply_pauli(state, c.n, int(q), int(pat[t, q]))
        p = np.abs(state) ** 2
        counts += rng.multinomial(int(mult), p / p.sum())
    return Histogram(c.n, counts, shots)
