"""Time the numba and numpy kernel backends side by side.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from iqpshift._accel import numpy_kernels
from iqpshift.instance import gen_pattern, gen_rhg, interaction_graph
from iqpshift.synth import build_logical_circuit
from iqpshift.topology import heavy_hex

try:
    from iqpshift._accel import numba_kernels
except ImportError:  # pragma: no cover
    numba_kernels = None


def _cases():
    rng = np.random.default_rng(0)
    hh = heavy_hex(3)
    n = hh.qubit_count
    deg = np.array([len(x) for x in hh.neighbors])
    indptr = np.concatenate(([0], np.cumsum(deg))).astype(np.int64)
    indices = np.array([w for x in hh.neighbors for w in x], dtype=np.int64)

    c = build_logical_circuit(gen_pattern("dense", 64, 0))
    q0 = np.array([g.qubits[0] for g in c.gates], dtype=np.int64)
    q1 = np.array([g.qubits[1] if g.is_two_qubit else -1 for g in c.gates], dtype=np.int64)

    m = 16
    masks = rng.integers(1, 1 << m, 200).astype(np.int64)
    thetas = rng.uniform(0, 6, 200)
    vec = np.exp(1j * rng.uniform(0, 6, 1 << m))

    ig = interaction_graph(gen_rhg(4, 4, 4))
    eu = np.array([e[0] for e in ig.edges], dtype=np.int64)
    ev = np.array([e[1] for e in ig.edges], dtype=np.int64)
    alive = rng.random(ig.n) > 0.3

    sv = rng.normal(size=1 << 14) + 0j
    return {
        "bfs_all_pairs": lambda k: k.bfs_all_pairs(indptr, indices, n, n),
        "asap_layers": lambda k: k.asap_layers(q0, q1, 64),
        "parity_phases": lambda k: k.parity_phases(masks, thetas, m),
        "fwht": lambda k: k.fwht(vec.copy()),
        "component_sizes": lambda k: k.component_sizes(ig.n, alive, eu, ev),
        "apply_1q": lambda k: k.apply_1q(sv, 14, 5, 0.6, 0.8, -0.8, 0.6),
        "apply_cx": lambda k: k.apply_cx(sv, 14, 2, 9),
        "apply_swap": lambda k: k.apply_swap(sv, 14, 0, 13),
        "apply_zz": lambda k: k.apply_zz(sv, 14, 3, 7, 0.4),
    }


def _time(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<16}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, call in _cases().items():
        t_np = _time(lambda: call(numpy_kernels), args.repeat)
        if numba_kernels is None:
            print(f"{name:<16}{t_np * 1e3:>12.3f}{'n/a':>12}{'':>10}")
            continue
        t_nb = _time(lambda: call(numba_kernels), args.repeat)
        print(f"{name:<16}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
