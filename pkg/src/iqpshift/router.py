"""Placement, SWAP routing and ASAP depth scheduling."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import asdict, dataclass

import numpy as np

from . import synth
from ._accel import kernels
from .errors import CapacityError, ParameterError, RoutingError
from .instance import InteractionGraph, IqpInstance, interaction_graph
from .synth import CX, SWAP, Circuit, Gate, GateSet
from .topology import DeviceModel, HardwareGraph

PLACEMENTS = ("identity", "bfs_match")


@dataclass(frozen=True)
class Schedule:
    """ASAP layering; ``layers[t]`` holds gate indices acting on disjoint wires."""

    gates: tuple[Gate, ...]
    layers: tuple[tuple[int, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.layers)

    def layer_gates(self, t: int) -> list[Gate]:
        return [self.gates[i] for i in self.layers[t]]


def _layer_index(gates, n: int) -> np.ndarray:
    q0 = np.fromiter((g.qubits[0] for g in gates), dtype=np.int64, count=len(gates))
    q1 = np.fromiter((g.qubits[1] if len(g.qubits) > 1 else -1 for g in gates),
                     dtype=np.int64, count=len(gates))
    return kernels.asap_layers(q0, q1, n)


def schedule_depth(c: Circuit) -> Schedule:
    """Greedy ASAP layering: each gate goes one layer past its latest predecessor."""
    if any(len(g.qubits) > 2 for g in c.gates):
        raise ParameterError("scheduler handles gates on at most two qubits")
    if not c.gates:
        return Schedule((), ())
    idx = _layer_index(c.gates, c.n)
    depth = int(idx.max()) + 1
    buckets: list[list[int]] = [[] for _ in range(depth)]
    for i, t in enumerate(idx):
        buckets[t].append(i)
    return Schedule(c.gates, tuple(tuple(b) for b in buckets))


def two_qubit_depth(c: Circuit) -> int:
    """Depth counting only two-qubit gates (reported, never used in margins)."""
    gates = [g for g in c.gates if g.is_two_qubit]
    if not gates:
        return 0
    return int(_layer_index(gates, c.n).max()) + 1


# -- placement -----------------------------------------------------------


def _bfs_order(adj, start: int, allowed=None) -> list[int]:
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen and (allowed is None or w in allowed):
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def _logical_bfs_order(ig: InteractionGraph) -> list[int]:
    adj = ig.adjacency()
    deg = [len(a) for a in adj]
    order: list[int] = []
    placed = set()
    while len(order) < ig.n:
        seed = max((v for v in range(ig.n) if v not in placed), key=lambda v: (deg[v], -v))
        for v in _bfs_order(adj, seed, None):
            if v not in placed:
                placed.add(v)
                order.append(v)
    return order


def _physical_start(h: HardwareGraph, need: int) -> int:
    # most central vertex of a component large enough for the instance
    reach = (h.dist < h.unreachable).sum(axis=1)
    ok = np.flatnonzero(reach >= need)
    if ok.size == 0:
        raise CapacityError(f"{h.name} has no connected component with {need} qubits")
    total = np.where(h.dist < h.unreachable, h.dist, 0).sum(axis=1)
    return int(ok[np.lexsort((ok, total[ok]))[0]])


def _path_order(ig: InteractionGraph) -> list[int] | None:
    """Vertex order along ig if its edges form one simple path on all n vertices."""
    adj = ig.adjacency()
    if ig.n == 1:
        return [0]
    ends = [v for v in range(ig.n) if len(adj[v]) == 1]
    if any(len(a) not in (1, 2) for a in adj) or len(ends) != 2:
        return None
    order = [ends[0]]
    prev = -1
    while len(order) < ig.n:
        nxt = [w for w in adj[order[-1]] if w != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order if len(set(order)) == ig.n else None


def _find_simple_path(h: HardwareGraph, length: int, budget: int = 200_000) -> list[int] | None:
    """Depth-first search for a simple path of ``length`` vertices.

    Starts are tried from low degree upward; each step prefers the neighbour
    with the fewest free onward neighbours (Warnsdorff), ties by index.
    """
    nbrs = h.neighbors
    starts = sorted(range(h.qubit_count), key=lambda v: (len(nbrs[v]), v))
    steps = 0
    for s in starts:
        path = [s]
        used = np.zeros(h.qubit_count, dtype=bool)
        used[s] = True
        stack = [iter(_warnsdorff(nbrs, s, used))]
        while stack:
            if len(path) == length:
                return path
            steps += 1
            if steps > budget:
                return None
            w = next(stack[-1], None)
            if w is None:
                stack.pop()
                used[path.pop()] = False
                continue
            if used[w]:
                continue
            used[w] = True
            path.append(w)
            stack.append(iter(_warnsdorff(nbrs, w, used)))
    return None


def _warnsdorff(nbrs, v, used):
    free = [w for w in nbrs[v] if not used[w]]
    return sorted(free, key=lambda w: (sum(1 for x in nbrs[w] if not used[x]), w))


def place_initial(ig: InteractionGraph, h: HardwareGraph, strategy: str = "bfs_match") -> tuple[int, ...]:
    """Injective logical -> physical layout.

    ``bfs_match`` pairs a BFS order of the interaction graph (seeded at a
    max-degree vertex) with a BFS order of the hardware from its most central
    vertex. Path-shaped interaction graphs are instead laid along a simple
    path of the hardware when one can be found.
    """
    if h.qubit_count < ig.n:
        raise CapacityError(f"{h.name} has {h.qubit_count} qubits, instance needs {ig.n}")
    if strategy == "identity":
        return tuple(range(ig.n))
    if strategy != "bfs_match":
        raise ParameterError(f"unknown placement {strategy!r}; known: {PLACEMENTS}")
    layout = [-1] * ig.n
    chain = _path_order(ig)
    if chain is not None:
        path = _find_simple_path(h, ig.n)
        if path is not None:
            for v, p in zip(chain, path):
                layout[v] = p
            return tuple(layout)
    logical = _logical_bfs_order(ig)
    start = _physical_start(h, ig.n)
    physical = _bfs_order(h.neighbors, start)
    for v, p in zip(logical, physical):
        layout[v] = p
    return tuple(layout)


# -- routing -------------------------------------------------------------

ROUTING_STRATEGIES = ("shortest_path", "front")


def _next_hop(h: HardwareGraph, u: int, target: int) -> int:
    want = h.dist[u, target] - 1
    return min(w for w in h.neighbors[u] if h.dist[w, target] == want)


class _Mapper:
    """Mutable logical <-> physical layout plus the gate sink."""

    def __init__(self, mapping, n_phys, expand_swaps):
        self.l2p = list(mapping)
        self.p2l = [-1] * n_phys
        for lq, pq in enumerate(self.l2p):
            self.p2l[pq] = lq
        self.expand = expand_swaps
        self.out: list[Gate] = []
        self.swaps = 0

    def emit(self, g: Gate) -> None:
        self.out.append(Gate(g.kind, tuple(self.l2p[q] for q in g.qubits), g.angle))

    def swap(self, p: int, w: int) -> None:
        self.swaps += 1
        if self.expand:
            self.out.extend((CX(p, w), CX(w, p), CX(p, w)))
        else:
            self.out.append(SWAP(p, w))
        lp, lw = self.p2l[p], self.p2l[w]
        self.p2l[p], self.p2l[w] = lw, lp
        if lp >= 0:
            self.l2p[lp] = w
        if lw >= 0:
            self.l2p[lw] = p


def route(c: Circuit, h: HardwareGraph, mapping, seed: int = 0, *,
          expand_swaps: bool = False, lookahead: bool = False,
          strategy: str = "shortest_path") -> Circuit:
    """Insert SWAPs so every two-qubit gate acts on a hardware edge.

    ``shortest_path`` handles gates in program order: for a non-adjacent
    pair the first operand walks toward the second along a shortest path
    (smallest-index intermediate vertex on ties). With ``lookahead`` the
    walking endpoint is picked per step to shorten the next two-qubit gate
    on a different pair.

    ``front`` routes the dependency front instead: ready gates run as soon
    as they are adjacent, and each SWAP is a shortest-path step for some
    blocked front gate, scored on front and upcoming distances with a decay
    penalty on recently swapped qubits.

    Both strategies are deterministic; ``seed`` is only recorded.
    """
    if c.frame != "logical":
        raise ParameterError("route expects a logical circuit")
    if strategy not in ROUTING_STRATEGIES:
        raise ParameterError(f"unknown routing strategy {strategy!r}; known: {ROUTING_STRATEGIES}")
    mapping = tuple(int(p) for p in mapping)
    n_phys = h.qubit_count
    if len(mapping) != c.n or len(set(mapping)) != c.n or min(mapping, default=0) < 0 \
            or max(mapping, default=0) >= n_phys:
        raise CapacityError(f"mapping {mapping} is not an injection into {n_phys} qubits")
    for i, g in enumerate(c.gates):
        if len(g.qubits) > 2:
            raise ParameterError(f"gate {i} ({g}) acts on more than two qubits")
        if g.is_two_qubit and h.dist[mapping[g.qubits[0]], mapping[g.qubits[1]]] >= h.unreachable:
            raise RoutingError(f"gate {i} ({g}): operands lie in different components of {h.name}")
    m = _Mapper(mapping, n_phys, expand_swaps)
    if strategy == "shortest_path":
        _route_in_order(c, h, m, lookahead)
    else:
        _route_front(c, h, m)
    meta = dict(c.meta, swaps=m.swaps, seed=seed, expand_swaps=expand_swaps, lookahead=lookahead,
                strategy=strategy, hardware=h.name)
    return Circuit(n_phys, tuple(m.out), "physical", mapping, tuple(m.l2p), meta)


def _route_in_order(c: Circuit, h: HardwareGraph, m: _Mapper, lookahead: bool) -> None:
    dist = h.dist
    l2p = m.l2p
    # next two-qubit gate on a different operand pair
    upcoming = [-1] * len(c.gates)
    nxt = -1
    for i in range(len(c.gates) - 1, -1, -1):
        g = c.gates[i]
        if g.is_two_qubit:
            upcoming[i] = nxt
            nxt = i
    for i in range(len(c.gates)):
        j = upcoming[i]
        while j >= 0 and set(c.gates[j].qubits) == set(c.gates[i].qubits):
            j = upcoming[j]
        upcoming[i] = j

    for i, g in enumerate(c.gates):
        if not g.is_two_qubit:
            m.emit(g)
            continue
        a, b = g.qubits
        while dist[l2p[a], l2p[b]] > 1:
            pa, pb = l2p[a], l2p[b]
            move = (pa, _next_hop(h, pa, pb))
            if lookahead and upcoming[i] >= 0:
                alt = (pb, _next_hop(h, pb, pa))
                x, y = c.gates[upcoming[i]].qubits
                if _pair_cost(l2p, [alt], x, y, dist) < _pair_cost(l2p, [move], x, y, dist):
                    move = alt
            m.swap(*move)
        m.emit(g)


def _pair_cost(l2p, moves, x, y, dist) -> int:
    where = {}
    for p, w in moves:
        where[p], where[w] = w, p
    px, py = l2p[x], l2p[y]
    return int(dist[where.get(px, px), where.get(py, py)])


_EXTENDED_SIZE = 20
_LOOKAHEAD_WEIGHT = 0.5
_DECAY_STEP = 0.1


def _route_front(c: Circuit, h: HardwareGraph, m: _Mapper) -> None:
    dist = h.dist
    l2p = m.l2p
    gates = c.gates
    queues = [deque() for _ in range(c.n)]
    for i, g in enumerate(gates):
        for q in g.qubits:
            queues[q].append(i)
    decay = np.ones(h.qubit_count)
    remaining = len(gates)
    stalled = 0
    valve = 10 * c.n + 10

    def is_ready(i):
        return all(queues[q][0] == i for q in gates[i].qubits)

    def gdist(i, where=None):
        x, y = gates[i].qubits
        px, py = l2p[x], l2p[y]
        if where:
            px, py = where.get(px, px), where.get(py, py)
        return dist[px, py]

    while remaining:
        ran = False
        while True:
            # lowest-index executable gate first, so unblocked runs keep program order
            ready = [queues[q][0] for q in range(c.n) if queues[q]]
            ready = [i for i in ready if is_ready(i) and not (gates[i].is_two_qubit and gdist(i) > 1)]
            if not ready:
                break
            i = min(ready)
            m.emit(gates[i])
            for x in gates[i].qubits:
                queues[x].popleft()
            remaining -= 1
            ran = True
        if not remaining:
            break
        if ran:
            decay[:] = 1.0
            stalled = 0
        front = sorted({queues[q][0] for q in range(c.n) if queues[q] and is_ready(queues[q][0])})
        if stalled > valve:
            i = min(front, key=lambda i: (gdist(i), i))
            a, b = gates[i].qubits
            while dist[l2p[a], l2p[b]] > 1:
                m.swap(l2p[a], _next_hop(h, l2p[a], l2p[b]))
            stalled = 0
            continue
        extended = _extended_set(c, queues, set(front))
        candidates = set()
        for i in front:
            a, b = gates[i].qubits
            for u, v in ((l2p[a], l2p[b]), (l2p[b], l2p[a])):
                want = dist[u, v] - 1
                for w in h.neighbors[u]:
                    if dist[w, v] == want:
                        candidates.add((min(u, w), max(u, w)))

        def score(edge):
            p, w = edge
            where = {p: w, w: p}
            s = sum(gdist(i, where) for i in front) / len(front)
            if extended:
                s += _LOOKAHEAD_WEIGHT * sum(gdist(i, where) for i in extended) / len(extended)
            return max(decay[p], decay[w]) * s

        best = min(sorted(candidates), key=score)
        m.swap(*best)
        decay[best[0]] += _DECAY_STEP
        decay[best[1]] += _DECAY_STEP
        stalled += 1


def _extended_set(c: Circuit, queues, front: set[int]) -> list[int]:
    """Upcoming two-qubit gates, taken round-robin from each wire's queue."""
    picked: list[int] = []
    seen = set(front)
    ptr = [1] * c.n
    while len(picked) < _EXTENDED_SIZE:
        added = False
        for q in range(c.n):
            qq = queues[q]
            while ptr[q] < len(qq) and not c.gates[qq[ptr[q]]].is_two_qubit:
                ptr[q] += 1
            if ptr[q] < len(qq):
                i = qq[ptr[q]]
                ptr[q] += 1
                added = True
                if i not in seen:
                    seen.add(i)
                    picked.append(i)
                    if len(picked) >= _EXTENDED_SIZE:
                        break
        if not added:
            break
    return picked


# -- replay check --------------------------------------------------------


def _is_swap_triple(gates, i) -> bool:
    if i + 2 >= len(gates) or gates[i].kind != "CX":
        return False
    a, b = gates[i].qubits
    return gates[i + 1] == CX(b, a) and gates[i + 2] == CX(a, b)


def locate_fault(logical: Circuit, routed: Circuit) -> tuple[int, str] | None:
    """Replay ``routed`` against ``logical`` and return the first inconsistency.

    SWAPs (native, or as a CX(a,b) CX(b,a) CX(a,b) triple) update the tracked
    layout; every other gate must be the next pending logical gate on each of
    its wires. The message also names the latest SWAP on the offending
    wires, the usual culprit. Returns ``(gate_index, message)`` or ``None`` when consistent.
    A fault found only at the end is reported at index ``len(routed.gates)``.
    """
    queues = [deque() for _ in range(logical.n)]
    for g in logical.gates:
        for q in g.qubits:
            queues[q].append(g)
    p2l = [-1] * routed.n
    for lq, pq in enumerate(routed.initial_layout):
        p2l[pq] = lq
    gates = routed.gates
    last_swap = [-1] * routed.n
    i = 0
    while i < len(gates):
        g = gates[i]
        lqs = tuple(p2l[p] for p in g.qubits)
        want = Gate(g.kind, lqs, g.angle)
        if min(lqs) >= 0 and all(queues[q] and queues[q][0] == want for q in lqs):
            for q in lqs:
                queues[q].popleft()
            i += 1
            continue
        if g.kind == "SWAP" or _is_swap_triple(gates, i):
            a, b = g.qubits
            p2l[a], p2l[b] = p2l[b], p2l[a]
            last_swap[a] = last_swap[b] = i
            i += 1 if g.kind == "SWAP" else 3
            continue
        msg = f"gate {i} ({g}) matches no pending logical gate under the tracked layout"
        j = max(last_swap[p] for p in g.qubits)
        if j >= 0:
            msg += f"; last SWAP on its wires is gate {j} ({gates[j]})"
        return i, msg
    left = sum(len(qu) for qu in queues)
    if left:
        return len(gates), f"{left} logical gate slots never executed"
    l2p = [-1] * logical.n
    for p, lq in enumerate(p2l):
        if lq >= 0:
            l2p[lq] = p
    if tuple(l2p) != tuple(routed.final_layout):
        return len(gates), "tracked final layout differs from the declared one"
    return None


# -- compile -------------------------------------------------------------


@dataclass(frozen=True)
class CompilationReport:
    instance: str
    n: int
    hardware: str
    gateset: str
    D_FC: int
    D_H: int
    delta_D: int
    eta: float
    swap_count: int
    two_qubit_count_baseline: int
    two_qubit_count_routed: int
    placement: str
    seed: int | None
    simplified: bool
    swap_mode: str
    routing: str
    depth_2q_fc: int
    depth_2q_h: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def compile_circuits(inst: IqpInstance, dev: DeviceModel | HardwareGraph,
                     gs: str | GateSet | None = None, *, placement: str = "bfs_match",
                     simplify: bool = False, lookahead: bool = False,
                     strategy: str = "front", seed: int = 0) -> tuple[Circuit, Circuit]:
    """The (logical, routed) circuit pair that ``compile_instance`` measures.

    The gate set defaults to the device's own, or CX for a bare graph.
    SWAPs are expanded to three CX on CX-family gate sets.
    """
    if isinstance(dev, DeviceModel):
        h = dev.graph
        gs = synth.get_gateset(gs or dev.gateset_id)
    else:
        h = dev
        gs = synth.get_gateset(gs or "cx")
    if h.qubit_count < inst.n:
        raise CapacityError(f"{h.name} has {h.qubit_count} qubits, instance needs {inst.n}")
    logical = synth.build_logical_circuit(inst, gs)
    if simplify:
        logical = synth.simplify(logical)
    layout = place_initial(interaction_graph(inst), h, placement)
    routed = route(logical, h, layout, seed=seed, expand_swaps=gs.expand_swaps,
                   lookahead=lookahead, strategy=strategy)
    return logical, routed


def compile_instance(inst: IqpInstance, dev: DeviceModel | HardwareGraph,
                     gs: str | GateSet | None = None, *, placement: str = "bfs_match",
                     simplify: bool = False, seed: int | None = None,
                     lookahead: bool = False, strategy: str = "front") -> CompilationReport:
    """Compile ``inst`` onto ``dev`` and compare against the all-to-all depth."""
    seed = inst.seed if seed is None else seed
    logical, routed = compile_circuits(inst, dev, gs, placement=placement, simplify=simplify,
                                       lookahead=lookahead, strategy=strategy, seed=seed or 0)
    d_fc = schedule_depth(logical).depth
    d_h = schedule_depth(routed).depth
    return CompilationReport(
        instance=inst.label or "instance",
        n=inst.n,
        hardware=routed.meta["hardware"],
        gateset=logical.meta["gateset"],
        D_FC=d_fc,
        D_H=d_h,
        delta_D=d_h - d_fc,
        eta=d_fc / d_h,
        swap_count=routed.meta["swaps"],
        two_qubit_count_baseline=logical.two_qubit_count(),
        two_qubit_count_routed=routed.two_qubit_count(),
        placement=placement,
        seed=seed,
        simplified=simplify,
        swap_mode="expanded" if routed.meta["expand_swaps"] else "native",
        routing=strategy,
        depth_2q_fc=two_qubit_depth(logical),
        depth_2q_h=two_qubit_depth(routed),
    )


compile = compile_instance
