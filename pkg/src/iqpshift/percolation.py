"""Monte Carlo fragmentation of interaction graphs under random qubit deletion."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._accel import kernels
from .errors import ParameterError
from .instance import InteractionGraph

DEFAULT_THRESHOLD_COEFF = 2.0


@dataclass(frozen=True)
class FragmentationStats:
    q: float
    trials: int
    largest_mean: float
    largest_max: int
    largest_min: int
    frac_below_threshold: float
    threshold: int
    seed: int | None
    n: int = 0
    label: str = ""

    def row(self) -> dict:
        return {"graph_label": self.label, "n": self.n, "q": self.q, "trials": self.trials,
                "largest_mean": self.largest_mean, "largest_max": self.largest_max,
                "frac_below_threshold": self.frac_below_threshold, "threshold": self.threshold}


CSV_COLUMNS = ("graph_label", "n", "q", "trials", "largest_mean", "largest_max",
               "frac_below_threshold", "threshold")


def _check_q(q: float) -> None:
    if not 0.0 <= q <= 1.0:
        raise ParameterError(f"deletion probability must lie in [0, 1], got {q}")


def _sizes(ig: InteractionGraph, alive: np.ndarray, eu: np.ndarray, ev: np.ndarray) -> list[int]:
    return [int(s) for s in kernels.component_sizes(ig.n, alive, eu, ev)]


def sizes_from_uniforms(ig: InteractionGraph, u: np.ndarray, q: float,
                        edge_mode: bool = False) -> list[int]:
    """Component sizes given pre-drawn uniforms: an item survives when u >= q.

    In vertex mode ``u`` has one entry per qubit. In edge mode it has one per
    unique edge and all vertices survive.
    """
    _check_q(q)
    eu, ev = ig.edge_arrays()
    if edge_mode:
        keep = u >= q
        alive = np.ones(ig.n, dtype=np.bool_)
        return _sizes(ig, alive, eu[keep].copy(), ev[keep].copy())
    alive = np.ascontiguousarray(u >= q)
    return _sizes(ig, alive, eu, ev)


def fragment(ig: InteractionGraph, q: float, seed: int | np.random.SeedSequence | None = 0,
             *, edge_mode: bool = False) -> list[int]:
    """Delete each qubit independently with probability ``q``.

    Returns the component sizes of the surviving subgraph in descending
    order. ``edge_mode`` deletes edges instead (sensitivity studies only).
    """
    rng = np.random.default_rng(seed)
    m = len(ig.unique_edges()) if edge_mode else ig.n
    return sizes_from_uniforms(ig, rng.random(m), q, edge_mode)


def threshold_for(n: int, coeff: float = DEFAULT_THRESHOLD_COEFF) -> int:
    return math.ceil(coeff * math.log(n)) if n > 1 else 0


def run_fragmentation(ig: InteractionGraph, q_list: Sequence[float], trials: int = 100,
                      threshold_coeff: float = DEFAULT_THRESHOLD_COEFF, seed: int = 0, *,
                      edge_mode: bool = False, label: str = "") -> list[FragmentationStats]:
    """Aggregate largest-component statistics per deletion probability.

    Trial t draws one uniform per vertex from its own spawned stream and
    reuses it for every q, so survivor sets are nested across q.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    for q in q_list:
        _check_q(q)
    thr = threshold_for(ig.n, threshold_coeff)
    m = len(ig.unique_edges()) if edge_mode else ig.n
    largest = np.zeros((len(q_list), trials), dtype=np.int64)
    for t, ss in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        u = np.random.default_rng(ss).random(m)
        for i, q in enumerate(q_list):
            sizes = sizes_from_uniforms(ig, u, q, edge_mode)
            largest[i, t] = sizes[0] if sizes else 0
    out = []
    for i, q in enumerate(q_list):
        row = largest[i]
        out.append(FragmentationStats(
            q=float(q), trials=trials, largest_mean=float(row.mean()),
            largest_max=int(row.max()), largest_min=int(row.min()),
            frac_below_threshold=float(np.mean(row <= thr)), threshold=thr,
            seed=seed, n=ig.n, label=label))
    return out


def coupled_largest(ig: InteractionGraph, q_list: Sequence[float], trials: int,
                    seed: int = 0) -> np.ndarray:
    """Per-trial largest component, shape (len(q_list), trials), under coupled draws."""
    res = np.zeros((len(q_list), trials), dtype=np.int64)
    for t, ss in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        u = np.random.default_rng(ss).random(ig.n)
        for i, q in enumerate(q_list):
            sizes = sizes_from_uniforms(ig, u, q)
            res[i, t] = sizes[0] if sizes else 0
    return res


def depth_to_deletion(p: float, d: int) -> float:
    """Chance a qubit is hit at least once by ``d`` layers of noise ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    if d < 0:
        raise ParameterError(f"d must be >= 0, got {d}")
    return 1.0 - (1.0 - p) ** d


def stats_to_csv(stats: Sequence[FragmentationStats]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for s in stats:
        w.writerow(s.row())
    return buf.getvalue()
