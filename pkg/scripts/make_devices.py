"""Regenerate the bundled device files under src/iqpshift/data/devices.

The sparse layouts are caption-level approximations of the named devices:

  SC_1  105 qubits, tapered rotated-square (diagonal) lattice
  SC_2   53 qubits, staggered nearest-neighbour lattice (9x6, one site dead)
  SC_3  127 qubits, heavy-hex
  SC_4   82 qubits, 7x12 rectangular grid with two defects
  SC_5   32 qubits, 4x8 brick-wall proxy
"""

from itertools import combinations
from pathlib import Path

from iqpshift.topology import DeviceModel, HardwareGraph, dump_device, grid, heavy_hex

OUT = Path(__file__).resolve().parents[1] / "src" / "iqpshift" / "data" / "devices"


def diagonal_lattice(row_lengths, drop=()):
    """Sites (r, x) with x stepping by 2 and alternating parity by row.

    Each site couples to (r+1, x-1) and (r+1, x+1).
    """
    sites = []
    for r, length in enumerate(row_lengths):
        offset = r % 2 if len(set(row_lengths)) == 1 else -(length - 1)
        for j in range(length):
            sites.append((r, offset + 2 * j))
    sites = [s for s in sites if s not in set(drop)]
    index = {s: i for i, s in enumerate(sites)}
    edges = []
    for (r, x), i in index.items():
        for dx in (-1, 1):
            j = index.get((r + 1, x + dx))
            if j is not None:
                edges.append((i, j))
    return len(sites), edges


def relabel(n, edges, dead):
    keep = [q for q in range(n) if q not in dead]
    new = {q: i for i, q in enumerate(keep)}
    return len(keep), [(new[u], new[v]) for u, v in edges if u in new and v in new]


def brick_wall(rows, cols):
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows and (c + r) % 2 == 1:
                edges.append((q, q + cols))
    return rows * cols, edges


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    devices = []

    devices.append(("FC_1", 98, list(combinations(range(98), 2)), 7.9e-4, "zzphase"))
    devices.append(("FC_2", 36, list(combinations(range(36), 2)), 4.0e-3, "zzphase"))

    n, e = diagonal_lattice([5, 6, 7, 8, 9, 10, 11, 10, 9, 8, 7, 6, 5, 4])
    devices.append(("SC_1", n, e, 3.3e-3, "cx"))

    n, e = diagonal_lattice([6] * 9, drop=[(0, 0)])
    devices.append(("SC_2", n, e, 6.0e-3, "cx"))

    hh = heavy_hex(3)
    devices.append(("SC_3", hh.qubit_count, list(hh.edges), 1.146e-2, "cx"))

    g = grid(7, 12)
    n, e = relabel(g.qubit_count, g.edges, {2 * 12 + 5, 4 * 12 + 8})
    devices.append(("SC_4", n, e, 1.94e-2, "cx"))

    n, e = brick_wall(4, 8)
    devices.append(("SC_5", n, e, 4.6e-2, "cx"))

    for name, n, edges, rate, gs in devices:
        dev = DeviceModel(HardwareGraph(name, n, tuple(edges)), rate, gs)
        assert dev.graph.is_connected(), name
        (OUT / f"{name}.json").write_text(dump_device(dev) + "\n", encoding="utf-8")
        print(f"{name}: {n} qubits, {len(dev.graph.edges)} edges, p={rate}")


if __name__ == "__main__":
    main()
