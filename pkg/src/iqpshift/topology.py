"""Hardware connectivity graphs, reference topologies and device files."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable

import numpy as np

from ._accel import kernels
from .errors import DeviceFileError, ParameterError

DEVICE_DIR_ENV = "IQPSHIFT_DEVICE_DIR"
_PACKAGED_DEVICES = Path(__file__).parent / "data" / "devices"
KNOWN_GATESETS = ("cx", "zzphase")


@dataclass(frozen=True, eq=False)
class HardwareGraph:
    """Undirected coupling graph with precomputed hop distances.

    ``dist[u, v]`` equals ``qubit_count`` for disconnected pairs.
    """

    name: str
    qubit_count: int
    edges: tuple[tuple[int, int], ...]
    kind: str = "custom"
    dims: tuple[int, ...] = ()
    dist: np.ndarray = field(init=False, repr=False)
    neighbors: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = self.qubit_count
        if n < 1:
            raise ParameterError(f"qubit_count must be >= 1, got {n}")
        canon = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ParameterError(f"self-loop on qubit {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u},{v}) out of range for {n} qubits")
            canon.add((min(u, v), max(u, v)))
        edges = tuple(sorted(canon))
        nbrs = [[] for _ in range(n)]
        for u, v in edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        nbrs = tuple(tuple(sorted(x)) for x in nbrs)
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(x) for x in nbrs])
        indices = np.array([w for x in nbrs for w in x], dtype=np.int64)
        dist = kernels.bfs_all_pairs(indptr, indices, n, n)
        dist.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "neighbors", nbrs)
        object.__setattr__(self, "dist", dist)

    @property
    def unreachable(self) -> int:
        return self.qubit_count

    @property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def adjacent(self, u: int, v: int) -> bool:
        return self.dist[u, v] == 1

    def is_complete(self) -> bool:
        n = self.qubit_count
        return len(self.edges) == n * (n - 1) // 2

    def is_connected(self) -> bool:
        return bool((self.dist < self.unreachable).all())

    def diameter(self) -> int:
        return int(self.dist.max())

    def grid_coords(self, q: int) -> tuple[int, int]:
        if self.kind != "grid":
            raise ParameterError(f"{self.name} is not a grid")
        return divmod(q, self.dims[1])


@dataclass(frozen=True)
class DeviceModel:
    graph: HardwareGraph
    two_qubit_error_rate: float
    gateset_id: str

    @property
    def name(self) -> str:
        return self.graph.name

    @property
    def p_eff(self) -> float:
        return self.two_qubit_error_rate


def complete(n: int, name: str | None = None) -> HardwareGraph:
    _need(n >= 1, f"complete graph needs n >= 1, got {n}")
    return HardwareGraph(name or f"complete_{n}", n, tuple(combinations(range(n), 2)), "complete", (n,))


def line(n: int, name: str | None = None) -> HardwareGraph:
    _need(n >= 1, f"line needs n >= 1, got {n}")
    return HardwareGraph(name or f"line_{n}", n, tuple((i, i + 1) for i in range(n - 1)), "line", (n,))


def ring(n: int, name: str | None = None) -> HardwareGraph:
    _need(n >= 3, f"ring needs n >= 3, got {n}")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return HardwareGraph(name or f"ring_{n}", n, tuple(edges), "ring", (n,))


def ladder(n: int, name: str | None = None) -> HardwareGraph:
    """Two rails of n/2 qubits; rail 0 holds 0..n/2-1, rail 1 the rest."""
    _need(n >= 2 and n % 2 == 0, f"ladder needs an even n >= 2, got {n}")
    m = n // 2
    edges = [(i, i + 1) for i in range(m - 1)]
    edges += [(m + i, m + i + 1) for i in range(m - 1)]
    edges += [(i, m + i) for i in range(m)]
    return HardwareGraph(name or f"ladder_{n}", n, tuple(edges), "ladder", (2, m))


def grid(rows: int, cols: int, name: str | None = None) -> HardwareGraph:
    """Row-major grid: qubit (r, c) has index r*cols + c."""
    _need(rows >= 1 and cols >= 1, f"grid needs rows, cols >= 1, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows:
                edges.append((q, q + cols))
    return HardwareGraph(name or f"grid_{rows}x{cols}", rows * cols, tuple(edges), "grid", (rows, cols))


def heavy_hex(d: int, name: str | None = None) -> HardwareGraph:
    """Heavy-hex lattice with 2d+1 long rows of 4d+3 sites.

    Bridge qubits join consecutive long rows every fourth column, with the
    column offset alternating between 0 and 2. The first row drops its last
    site and the last row its first site, so d=3 reproduces the 127-qubit
    layout and its qubit numbering (rows interleaved with their bridges).
    """
    _need(d >= 1, f"heavy_hex needs d >= 1, got {d}")
    n_rows = 2 * d + 1
    width = 4 * d + 3
    index: dict[tuple[int, int], int] = {}
    edges = []
    nxt = 0
    for r in range(n_rows):
        cols = range(width)
        if r == 0:
            cols = range(width - 1)
        elif r == n_rows - 1:
            cols = range(1, width)
        for c in cols:
            index[(r, c)] = nxt
            if (r, c - 1) in index:
                edges.append((index[(r, c - 1)], nxt))
            nxt += 1
        if r > 0:
            for c in _bridge_cols(r - 1, width):
                b = bridges[c]
                edges.append((b, index[(r, c)]))
        if r < n_rows - 1:
            bridges = {}
            for c in _bridge_cols(r, width):
                bridges[c] = nxt
                edges.append((index[(r, c)], nxt))
                nxt += 1
    return HardwareGraph(name or f"heavy_hex_{nxt}", nxt, tuple(edges), "heavy_hex", (d,))


def _bridge_cols(r: int, width: int) -> range:
    return range(0 if r % 2 == 0 else 2, width, 4)


def build_topology(kind: str, *dims: int, name: str | None = None) -> HardwareGraph:
    """Build a reference topology by kind name.

    ``grid`` takes ``(rows, cols)``, ``heavy_hex`` takes the row parameter
    ``d``, every other kind takes the qubit count.
    """
    builders = {"complete": complete, "line": line, "ring": ring, "ladder": ladder,
                "grid": grid, "heavy_hex": heavy_hex}
    if kind not in builders:
        raise ParameterError(f"unknown topology kind {kind!r}")
    want = 2 if kind == "grid" else 1
    if len(dims) != want:
        raise ParameterError(f"{kind} takes {want} dimension(s), got {len(dims)}")
    return builders[kind](*dims, name=name)


def near_square_grid(n: int) -> HardwareGraph:
    """Smallest ``floor(sqrt n)``-row grid holding at least n qubits."""
    rows = max(1, math.isqrt(n))
    return grid(rows, -(-n // rows))


def reference_topology(kind: str, n: int) -> HardwareGraph:
    """Reference topology sized for an n-qubit instance."""
    if kind == "grid":
        return near_square_grid(n)
    if kind == "ladder":
        return ladder(n + n % 2)
    if kind == "ring":
        return ring(max(n, 3))
    if kind == "heavy_hex":
        d = 1
        while heavy_hex(d).qubit_count < n:
            d += 1
        return heavy_hex(d)
    return build_topology(kind, n)


def subset_diameter(g: HardwareGraph, s: Iterable[int]) -> int:
    """Largest pairwise hop distance within ``s`` (the sentinel if disconnected)."""
    s = sorted(set(int(q) for q in s))
    if not s:
        raise ParameterError("subset must be non-empty")
    if s[0] < 0 or s[-1] >= g.qubit_count:
        raise ParameterError(f"subset {s} out of range for {g.qubit_count} qubits")
    idx = np.asarray(s)
    return int(g.dist[np.ix_(idx, idx)].max())


# -- device files --------------------------------------------------------


def parse_device(text: str, source: str = "<string>") -> DeviceModel:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DeviceFileError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise DeviceFileError(f"{source}: top level must be an object")
    for key, typ in (("name", str), ("qubit_count", int), ("edges", list),
                     ("two_qubit_error_rate", (int, float)), ("gateset", str)):
        if key not in obj:
            raise DeviceFileError(f"{source}: missing field {key!r}")
        if not isinstance(obj[key], typ) or isinstance(obj[key], bool):
            raise DeviceFileError(f"{source}: field {key!r} has wrong type")
    n = obj["qubit_count"]
    if n < 1:
        raise DeviceFileError(f"{source}: field 'qubit_count' must be positive")
    seen = set()
    for i, e in enumerate(obj["edges"]):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise DeviceFileError(f"{source}: edges[{i}] must be a pair of integers")
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise DeviceFileError(f"{source}: edges[{i}] = {e} has dangling index (qubit_count {n})")
        if u == v:
            raise DeviceFileError(f"{source}: edges[{i}] = {e} is a self-loop")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DeviceFileError(f"{source}: edges[{i}] = {e} duplicates an earlier edge")
        seen.add(key)
    rate = float(obj["two_qubit_error_rate"])
    if not 0.0 < rate < 1.0:
        raise DeviceFileError(f"{source}: field 'two_qubit_error_rate' = {rate} outside (0, 1)")
    gs = obj["gateset"]
    if gs not in KNOWN_GATESETS:
        raise DeviceFileError(f"{source}: field 'gateset' = {gs!r} not in {KNOWN_GATESETS}")
    g = HardwareGraph(obj["name"], n, tuple(sorted(seen)), "complete" if len(seen) == n * (n - 1) // 2 else "device")
    return DeviceModel(g, rate, gs)


def load_device(path: str | os.PathLike) -> DeviceModel:
    path = Path(path)
    return parse_device(path.read_text(encoding="utf-8"), str(path))


def dump_device(dev: DeviceModel) -> str:
    obj = {
        "name": dev.graph.name,
        "qubit_count": dev.graph.qubit_count,
        "edges": [list(e) for e in dev.graph.edges],
        "two_qubit_error_rate": dev.two_qubit_error_rate,
        "gateset": dev.gateset_id,
    }
    return json.dumps(obj)


def device_dir() -> Path:
    """Device registry directory.

    ``$IQPSHIFT_DEVICE_DIR`` if set, else ``./devices`` when it exists, else
    the device files bundled with the package.
    """
    env = os.environ.get(DEVICE_DIR_ENV)
    if env:
        return Path(env)
    local = Path("devices")
    if local.is_dir():
        return local
    return _PACKAGED_DEVICES


def list_devices(directory: Path | None = None) -> list[str]:
    directory = directory or device_dir()
    return sorted(p.stem for p in Path(directory).glob("*.json"))


def get_device(name: str, directory: Path | None = None) -> DeviceModel:
    directory = directory or device_dir()
    path = Path(directory) / f"{name}.json"
    if not path.exists():
        raise ParameterError(f"unknown device {name!r} (looked in {directory})")
    return load_device(path)


def _need(ok: bool, msg: str) -> None:
    if not ok:
        raise ParameterError(msg)

