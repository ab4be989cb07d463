"""k-local IQP instances and their interaction graphs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ParameterError

PATTERNS = ("dense", "sparse_density", "sparse_count", "local_chain", "rhg")


@dataclass(frozen=True)
class IqpInstance:
    """Term list of ``exp(i sum_s theta_s Z_s)`` conjugated by Hadamards.

    Each term is ``(qubits, theta)`` with ``qubits`` a sorted tuple.
    """

    n: int
    k: int
    terms: tuple[tuple[tuple[int, ...], float], ...]
    seed: int | None = None
    label: str = ""

    def __post_init__(self):
        merged: dict[tuple[int, ...], float] = {}
        for qubits, theta in self.terms:
            s = tuple(sorted(int(q) for q in qubits))
            if not 1 <= len(s) <= self.k:
                raise ParameterError(f"term {s} has size outside [1, {self.k}]")
            if len(set(s)) != len(s) or s[0] < 0 or s[-1] >= self.n:
                raise ParameterError(f"term {s} has repeated or out-of-range qubits (n={self.n})")
            theta = float(theta)
            if not math.isfinite(theta):
                raise ParameterError(f"term {s} has non-finite angle")
            if s in merged:
                merged[s] = (merged[s] + theta) % (2 * math.pi)
            else:
                merged[s] = theta
        object.__setattr__(self, "terms", tuple(merged.items()))

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def subsets(self) -> list[tuple[int, ...]]:
        return [s for s, _ in self.terms]

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n, "k": self.k, "seed": self.seed,
            "terms": [{"qubits": list(s), "theta": t} for s, t in self.terms],
        })

    @classmethod
    def from_json(cls, text: str) -> "IqpInstance":
        obj = json.loads(text)
        terms = tuple((tuple(t["qubits"]), t["theta"]) for t in obj["terms"])
        return cls(obj["n"], obj["k"], terms, obj.get("seed"))

    def restricted(self, qubits) -> "IqpInstance":
        """Sub-instance on ``qubits`` (relabelled 0..m-1 in sorted order).

        Terms not fully inside ``qubits`` are dropped.
        """
        qubits = sorted(qubits)
        new = {q: i for i, q in enumerate(qubits)}
        terms = tuple((tuple(new[q] for q in s), t) for s, t in self.terms if all(q in new for q in s))
        return IqpInstance(len(qubits), self.k, terms, self.seed)

    def relabelled(self, perm) -> "IqpInstance":
        """Instance with qubit q renamed to ``perm[q]``."""
        terms = tuple((tuple(perm[q] for q in s), t) for s, t in self.terms)
        return IqpInstance(self.n, self.k, terms, self.seed, self.label)


@dataclass(frozen=True)
class InteractionGraph:
    """Clique expansion of an instance's terms.

    ``edges`` is a multiset: one pair per co-occurrence in a term.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    hyperedges: tuple[tuple[int, ...], ...]

    def unique_edges(self) -> list[tuple[int, int]]:
        return sorted(set(self.edges))

    def adjacency(self) -> list[list[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return [sorted(a) for a in adj]

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency()]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        e = np.array(self.unique_edges(), dtype=np.int64).reshape(-1, 2)
        return e[:, 0].copy(), e[:, 1].copy()


def interaction_graph(inst: IqpInstance) -> InteractionGraph:
    edges = []
    hyper = []
    for s, _ in inst.terms:
        if len(s) >= 2:
            hyper.append(s)
            edges.extend(combinations(s, 2))
    return InteractionGraph(inst.n, tuple(edges), tuple(hyper))


def _angles(rng: np.random.Generator, m: int) -> np.ndarray:
    return rng.uniform(0.0, 2 * math.pi, size=m)


def _pair_instance(n, pairs, seed, label, rng):
    thetas = _angles(rng, len(pairs))
    return IqpInstance(n, 2, tuple(zip(pairs, thetas)), seed, label)


def gen_pattern(pattern: str, n: int = 16, seed: int = 0, *, density: float = 0.4,
                count: int | None = None, cells: tuple[int, int, int] = (2, 2, 2)) -> IqpInstance:
    """Generate a k=2 instance.

    ``pattern`` is one of ``dense``, ``sparse_density`` (uses ``density``),
    ``sparse_count`` (uses ``count``), ``local_chain`` or ``rhg`` (uses
    ``cells`` and ignores ``n``). Pair terms come out in lexicographic order.
    """
    if pattern == "rhg":
        return gen_rhg(*cells, seed=seed)
    if pattern not in PATTERNS:
        raise ParameterError(f"unknown pattern {pattern!r}")
    if n < 2:
        raise ParameterError(f"pairwise patterns need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    all_pairs = list(combinations(range(n), 2))
    if pattern == "dense":
        return _pair_instance(n, all_pairs, seed, "dense", rng)
    if pattern == "local_chain":
        return _pair_instance(n, [(i, i + 1) for i in range(n - 1)], seed, "local_chain", rng)
    if pattern == "sparse_density":
        if not 0.0 < density <= 1.0:
            raise ParameterError(f"density must lie in (0, 1], got {density}")
        m = round(density * len(all_pairs))
        label = f"sparse_density({density:g})"
    else:
        if count is None:
            raise ParameterError("sparse_count needs count")
        m = count
        label = f"sparse_count({count})"
    if not 0 <= m <= len(all_pairs):
        raise ParameterError(f"cannot draw {m} distinct pairs from C({n},2) = {len(all_pairs)}")
    chosen = np.sort(rng.choice(len(all_pairs), size=m, replace=False))
    return _pair_instance(n, [all_pairs[i] for i in chosen], seed, label, rng)


def rhg_counts(l1: int, l2: int, l3: int) -> tuple[int, int, int]:
    """(faces, edges, terms) of the L1 x L2 x L3 cubic cell complex."""
    L = (l1, l2, l3)
    faces = edges = 0
    for a in range(3):
        b, c = (a + 1) % 3, (a + 2) % 3
        faces += (L[a] + 1) * L[b] * L[c]
        edges += L[a] * (L[b] + 1) * (L[c] + 1)
    return faces, edges, 4 * faces


def gen_rhg(l1: int, l2: int, l3: int, seed: int = 0) -> IqpInstance:
    """Face/edge lattice of an L1 x L2 x L3 block of cubic cells.

    Qubits sit on every face and every edge of the complex. In doubled
    coordinates an edge has exactly one odd coordinate and a face exactly
    two; qubits are numbered in (z, y, x) lexicographic order of those
    coordinates. Each face couples to its four bounding edges.
    """
    L = (l1, l2, l3)
    if min(L) < 1:
        raise ParameterError(f"RHG cell counts must be >= 1, got {L}")
    sites = []
    for z in range(2 * l3 + 1):
        for y in range(2 * l2 + 1):
            for x in range(2 * l1 + 1):
                odd = (x & 1) + (y & 1) + (z & 1)
                if odd in (1, 2):
                    sites.append((x, y, z))
    index = {s: i for i, s in enumerate(sites)}
    pairs = []
    for s in sites:
        if sum(c & 1 for c in s) != 2:
            continue
        for axis in range(3):
            if s[axis] & 1:
                for d in (-1, 1):
                    e = list(s)
                    e[axis] += d
                    pairs.append((index[s], index[tuple(e)]))
    rng = np.random.default_rng(seed)
    inst = _pair_instance(len(sites), pairs, seed, f"rhg({l1},{l2},{l3})", rng)
    return inst
