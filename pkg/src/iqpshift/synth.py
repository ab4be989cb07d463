"""Native-gate synthesis of diagonal IQP terms.

Phase conventions: ``RZ(l) = exp(-i l Z / 2)`` and
``ZZ(l) = exp(-i (l/2) Z (x) Z)``, so ``exp(i theta Z_s)`` is realised with
``l = -2 theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import ParameterError, UnsupportedLocalityError
from .instance import IqpInstance

TWO_QUBIT_KINDS = frozenset({"CX", "ZZ", "SWAP"})


@dataclass(frozen=True)
class GateSet:
    id: str
    two_qubit_primitive: str  # "CX" or "ZZ"
    expand_swaps: bool
    notes: str = ""


CX_GATESET = GateSet("cx", "CX", expand_swaps=True,
                     notes="CNOT-tree parity synthesis; SWAP = 3 CX")
ZZ_GATESET = GateSet("zzphase", "ZZ", expand_swaps=False,
                     notes="native ZZPhase for 2-body terms; native SWAP")
GATESETS = {gs.id: gs for gs in (CX_GATESET, ZZ_GATESET)}


def get_gateset(gs: str | GateSet) -> GateSet:
    if isinstance(gs, GateSet):
        return gs
    try:
        return GATESETS[gs]
    except KeyError:
        raise ParameterError(f"unknown gateset {gs!r}; known: {sorted(GATESETS)}") from None


class Gate(NamedTuple):
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    @property
    def is_two_qubit(self) -> bool:
        return len(self.qubits) == 2

    def __str__(self) -> str:
        ops = " ".join(str(q) for q in self.qubits)
        if self.angle is None:
            return f"{self.kind} {ops}"
        return f"{self.kind} {self.angle!r} {ops}"


def H(q: int) -> Gate:
    return Gate("H", (q,))


def RZ(angle: float, q: int) -> Gate:
    return Gate("RZ", (q,), float(angle))


def CX(c: int, t: int) -> Gate:
    return Gate("CX", (c, t))


def ZZ(angle: float, a: int, b: int) -> Gate:
    return Gate("ZZ", (a, b), float(angle))


def SWAP(a: int, b: int) -> Gate:
    return Gate("SWAP", (a, b))


@dataclass(frozen=True)
class Circuit:
    """Gate list on ``n`` wires.

    Physical circuits carry ``initial_layout`` and ``final_layout``, both
    logical -> physical tuples.
    """

    n: int
    gates: tuple[Gate, ...]
    frame: str = "logical"
    initial_layout: tuple[int, ...] | None = None
    final_layout: tuple[int, ...] | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.frame not in ("logical", "physical"):
            raise ParameterError(f"unknown frame {self.frame!r}")
        for i, g in enumerate(self.gates):
            if len(set(g.qubits)) != len(g.qubits) or min(g.qubits) < 0 or max(g.qubits) >= self.n:
                raise ParameterError(f"gate {i} ({g}) has invalid operands for n={self.n}")
            if g.angle is not None and not math.isfinite(g.angle):
                raise ParameterError(f"gate {i} ({g}) has a non-finite angle")
        if self.frame == "physical":
            for lay in (self.initial_layout, self.final_layout):
                if lay is None or len(set(lay)) != len(lay) or (lay and max(lay) >= self.n):
                    raise ParameterError("physical circuits need injective layouts")

    def __len__(self) -> int:
        return len(self.gates)

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g.is_two_qubit)

    def to_text(self) -> str:
        head = f"qubits {self.n}; frame {self.frame}"
        if self.frame == "physical":
            head += "; initial " + ",".join(map(str, self.initial_layout))
            head += "; final " + ",".join(map(str, self.final_layout))
        return "\n".join([head, *map(str, self.gates)]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines:
            raise ParameterError("empty circuit text")
        fields = dict(part.strip().split(None, 1) for part in lines[0].split(";"))
        n = int(fields["qubits"])
        frame = fields.get("frame", "logical")
        lay = lambda key: tuple(int(x) for x in fields[key].split(",") if x) if key in fields else None
        gates = []
        for lineno, ln in enumerate(lines[1:], start=2):
            tok = ln.split()
            kind = tok[0]
            try:
                if kind in ("RZ", "ZZ"):
                    gates.append(Gate(kind, tuple(int(x) for x in tok[2:]), float(tok[1])))
                elif kind in ("H", "CX", "SWAP"):
                    gates.append(Gate(kind, tuple(int(x) for x in tok[1:])))
                else:
                    raise ParameterError(f"line {lineno}: unknown gate {kind!r}")
            except (ValueError, IndexError) as exc:
                if isinstance(exc, ParameterError):
                    raise
                raise ParameterError(f"line {lineno}: cannot parse {ln!r}") from None
        return cls(n, tuple(gates), frame, lay("initial"), lay("final"))


def decompose_term(s: Sequence[int], theta: float, gs: str | GateSet = CX_GATESET) -> list[Gate]:
    """Native gates for ``exp(i theta Z_s)``.

    Parity is accumulated onto the highest-index qubit by an ascending CNOT
    chain, rotated, then uncomputed.
    """
    gs = get_gateset(gs)
    s = sorted(s)
    if not s:
        raise ParameterError("empty term support")
    if not math.isfinite(theta):
        raise ParameterError("non-finite angle")
    lam = -2.0 * theta
    if len(s) == 1:
        return [RZ(lam, s[0])]
    if gs.two_qubit_primitive == "ZZ":
        if len(s) != 2:
            raise UnsupportedLocalityError(
                f"{gs.id} gateset supports at most 2-body terms, got |s|={len(s)}")
        return [ZZ(lam, s[0], s[1])]
    chain = [CX(a, b) for a, b in zip(s, s[1:])]
    return chain + [RZ(lam, s[-1])] + chain[::-1]


def build_logical_circuit(inst: IqpInstance, gs: str | GateSet = CX_GATESET) -> Circuit:
    gates = [H(q) for q in range(inst.n)]
    for s, theta in inst.terms:
        gates.extend(decompose_term(s, theta, gs))
    gates.extend(H(q) for q in range(inst.n))
    return Circuit(inst.n, tuple(gates), "logical", meta={"gateset": get_gateset(gs).id})


def simplify(c: Circuit) -> Circuit:
    """Cancel adjacent identical CX pairs and fuse consecutive RZ per wire.

    Two gates are adjacent when no other kept gate touches any of their
    wires in between.
    """
    out: list[Gate | None] = []
    stacks: list[list[int]] = [[] for _ in range(c.n)]

    def top(q):
        return stacks[q][-1] if stacks[q] else -1

    def drop(i):
        for q in out[i].qubits:
            stacks[q].pop()
        out[i] = None

    for g in c.gates:
        if g.kind == "CX":
            a, b = g.qubits
            i = top(a)
            if i >= 0 and i == top(b) and out[i] == g:
                drop(i)
                continue
        elif g.kind == "RZ":
            (q,) = g.qubits
            i = top(q)
            if i >= 0 and out[i].kind == "RZ":
                angle = out[i].angle + g.angle
                drop(i)
                if abs(angle) < 1e-15:
                    continue
                g = RZ(angle, q)
        out.append(g)
        for q in g.qubits:
            stacks[q].append(len(out) - 1)
    gates = tuple(g for g in out if g is not None)
    meta = dict(c.meta, simplified=True)
    return Circuit(c.n, gates, c.frame, c.initial_layout, c.final_layout, meta)


def two_qubit_count_formula(inst: IqpInstance, gs: str | GateSet) -> int:
    gs = get_gateset(gs)
    if gs.two_qubit_primitive == "ZZ":
        return sum(1 for s, _ in inst.terms if len(s) == 2)
    return sum(2 * (len(s) - 1) for s, _ in inst.terms if len(s) >= 2)

