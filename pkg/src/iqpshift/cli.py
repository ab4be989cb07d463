"""Command-line experiment driver.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import percolation, phase, router, sampler, synth
from .errors import (CapacityError, DeviceFileError, DomainError, ParameterError, ResourceError,
                     RoutingError, UnsupportedLocalityError)
from .instance import IqpInstance, gen_pattern, interaction_graph
from .svg import phase_svg
from .topology import DeviceModel, HardwareGraph, build_topology, get_device, list_devices, \
    reference_topology

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
VERIFY_TOL = 1e-9
VERIFY_MAX_N = 8

REPORT_COLUMNS = ("pattern", "n", "hardware", "gateset", "seed", "D_FC", "D_H", "delta_D", "eta",
                  "swaps", "twoq_fc", "twoq_h")
PHASE_COLUMNS = ("label", "p_eff", "D_H", "d_star", "margin", "regime", "device", "pattern", "n",
                 "seeds", "D_FC_mean", "D_FC_std", "D_H_std", "eta_mean", "c", "k")
SCALING_COLUMNS = ("pattern", "n", "topology", "eta_mean", "eta_std", "D_FC_mean", "D_H_mean",
                   "seeds")
VERIFY_COLUMNS = ("pattern", "n", "target", "gateset", "seed", "swaps", "max_deviation", "status",
                  "fault")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    subcommand: str
    patterns: tuple[str, ...] = ()
    n_list: tuple[int, ...] = ()
    targets: tuple[str, ...] = ()
    gateset: str | None = None
    seeds: int = 1
    seed: int = 0
    trials: int = 100
    out: str | None = None
    fmt: str = "csv"
    c: float = 1.0
    threshold_coeff: float = percolation.DEFAULT_THRESHOLD_COEFF

    def __post_init__(self):
        if self.subcommand in ("phase-diagram", "scaling", "percolation", "verify") and not self.n_list:
            raise UsageError("n list must be non-empty")
        if self.gateset is not None and self.gateset not in synth.GATESETS:
            raise UsageError(f"unknown gateset {self.gateset!r}")


# -- shared helpers --------------------------------------------------------


def make_instance(pattern: str, n: int, seed: int, *, density: float = 0.4,
                  count: int | None = None, cells: Sequence[int] = (2, 2, 2)) -> IqpInstance:
    """Instance for a pattern token.

    Tokens: ``dense``, ``sparse_density``, ``sparse_count`` (count defaults
    to min(2n, C(n,2))), ``local_chain`` (alias ``local``), ``rhg`` or
    ``rhg:AxBxC``.
    """
    if pattern == "local":
        pattern = "local_chain"
    if pattern.startswith("rhg"):
        if ":" in pattern:
            cells = _dims(pattern.split(":", 1)[1], 3)
        return gen_pattern("rhg", seed=seed, cells=tuple(cells))
    if pattern == "sparse_count" and count is None:
        count = min(2 * n, n * (n - 1) // 2)
    return gen_pattern(pattern, n, seed, density=density, count=count)


def _dims(text: str, want: int | None = None) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"bad dimensions {text!r}") from None
    if want is not None and len(dims) != want:
        raise UsageError(f"expected {want} dimensions, got {text!r}")
    return dims


REFERENCE_KINDS = ("complete", "line", "ring", "ladder", "grid", "heavy_hex")


def resolve_target(name: str, n: int) -> DeviceModel | HardwareGraph:
    """Device name, ``kind`` (sized to n) or ``kind:dims`` such as ``grid:2x3``."""
    if ":" in name:
        kind, dims = name.split(":", 1)
        return build_topology(kind, *_dims(dims))
    if name in REFERENCE_KINDS:
        return reference_topology(name, n)
    return get_device(name)


def _mean_std(xs: Sequence[float]) -> tuple[float, float]:
    return statistics.fmean(xs), (statistics.pstdev(xs) if len(xs) > 1 else 0.0)


def _log(args, msg: str) -> None:
    if not getattr(args, "quiet", False):
        print(msg, file=sys.stderr)


def _compile_job(job):
    pattern, n, seed, target, gs, opts = job
    try:
        inst = make_instance(pattern, n, seed, **opts.get("inst", {}))
        rep = router.compile_instance(inst, target, gs, seed=seed, **opts.get("compile", {}))
        return pattern, rep, None
    except (CapacityError, RoutingError, UnsupportedLocalityError) as exc:
        return pattern, None, str(exc)


def _run_jobs(jobs, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_compile_job, jobs))
    return [_compile_job(j) for j in jobs]


def report_row(pattern: str, rep: router.CompilationReport) -> dict:
    return {"pattern": pattern, "n": rep.n, "hardware": rep.hardware, "gateset": rep.gateset,
            "seed": rep.seed, "D_FC": rep.D_FC, "D_H": rep.D_H, "delta_D": rep.delta_D,
            "eta": rep.eta, "swaps": rep.swap_count, "twoq_fc": rep.two_qubit_count_baseline,
            "twoq_h": rep.two_qubit_count_routed}


def render(rows: list[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def emit(args, text: str) -> None:
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")


def _inst_opts(args) -> dict:
    return {"density": args.density, "count": getattr(args, "count", None),
            "cells": tuple(args.cells)}


# -- subcommands -----------------------------------------------------------


def cmd_gen(args) -> int:
    inst = make_instance(args.pattern, args.n, args.seed, **_inst_opts(args))
    if args.format == "json":
        emit(args, inst.to_json() + "\n")
    else:
        rows = [{"qubits": " ".join(map(str, s)), "theta": t} for s, t in inst.terms]
        emit(args, render(rows, ("qubits", "theta"), "csv"))
    return EXIT_OK


def cmd_compile(args) -> int:
    if args.instance:
        inst = IqpInstance.from_json(Path(args.instance).read_text(encoding="utf-8"))
        pattern = inst.label or Path(args.instance).stem
    else:
        inst = make_instance(args.pattern, args.n, args.seed, **_inst_opts(args))
        pattern = args.pattern
    target = resolve_target(args.target, inst.n)
    opts = dict(placement=args.placement, simplify=args.simplify, lookahead=args.lookahead,
                strategy=args.strategy)
    rep = router.compile_instance(inst, target, args.gateset, seed=args.seed, **opts)
    if args.circuit_out:
        _, routed = router.compile_circuits(inst, target, args.gateset, seed=args.seed, **opts)
        Path(args.circuit_out).write_text(routed.to_text(), encoding="utf-8")
    if args.format == "json":
        emit(args, json.dumps(dict(rep.to_dict(), pattern=pattern), indent=2) + "\n")
    else:
        emit(args, render([report_row(pattern, rep)], REPORT_COLUMNS, "csv"))
    return EXIT_OK


def cmd_phase_diagram(args) -> int:
    devices = args.devices or list_devices()
    params = phase.PhaseParams(args.k, args.c)
    n = args.n[0]
    rows, reports = [], []
    opts = {"inst": _inst_opts(args), "compile": {"simplify": args.simplify}}
    for name in devices:
        dev = get_device(name)
        for pattern in args.patterns:
            jobs = [(pattern, n, args.seed + i, dev, None, opts) for i in range(args.seeds)]
            results = _run_jobs(jobs, args.workers)
            skipped = [msg for _, rep, msg in results if rep is None]
            if skipped:
                _log(args, f"skip {name} {pattern}: {skipped[0]}")
                continue
            reps = [rep for _, rep, _ in results]
            d_fc, s_fc = _mean_std([r.D_FC for r in reps])
            d_h, s_h = _mean_std([r.D_H for r in reps])
            eta, _ = _mean_std([r.eta for r in reps])
            label = f"{name} {pattern}"
            point = phase.OperatingPoint(dev.two_qubit_error_rate, d_h, args.k, label)
            mr = phase.margin(point, params)
            reports.append(mr)
            rows.append(dict(mr.row(), device=name, pattern=pattern, n=reps[0].n, seeds=args.seeds,
                             D_FC_mean=d_fc, D_FC_std=s_fc, D_H_std=s_h, eta_mean=eta,
                             c=params.c, k=params.k))
            _log(args, f"{label}: D_FC={d_fc:.1f} D_H={d_h:.1f} margin={mr.margin:.1f} "
                       f"{mr.regime.value}")
    emit(args, render(rows, PHASE_COLUMNS, args.format))
    if args.svg:
        Path(args.svg).write_text(phase_svg(reports, params, f"n = {n}"), encoding="utf-8")
    return EXIT_OK


def cmd_scaling(args) -> int:
    rows = []
    opts = {"inst": _inst_opts(args), "compile": {"simplify": args.simplify}}
    for pattern in args.patterns:
        for n in args.n:
            for topo in args.topologies:
                try:
                    target = resolve_target(topo, n)
                except (ParameterError, UsageError) as exc:
                    _log(args, f"skip {pattern} n={n} {topo}: {exc}")
                    continue
                jobs = [(pattern, n, args.seed + i, target, args.gateset, opts)
                        for i in range(args.seeds)]
                results = _run_jobs(jobs, args.workers)
                reps = [rep for _, rep, _ in results if rep is not None]
                if len(reps) < len(results):
                    _log(args, f"skip {pattern} n={n} {topo}: "
                               f"{next(m for _, r, m in results if r is None)}")
                    continue
                eta, eta_s = _mean_std([r.eta for r in reps])
                rows.append({"pattern": pattern, "n": n, "topology": topo, "eta_mean": eta,
                             "eta_std": eta_s,
                             "D_FC_mean": statistics.fmean(r.D_FC for r in reps),
                             "D_H_mean": statistics.fmean(r.D_H for r in reps),
                             "seeds": args.seeds})
                _log(args, f"{pattern} n={n} {topo}: eta={eta:.3f}")
    emit(args, render(rows, SCALING_COLUMNS, args.format))
    return EXIT_OK


def cmd_percolation(args) -> int:
    rows = []
    for pattern in args.patterns:
        for n in args.n:
            inst = make_instance(pattern, n, args.seed, **_inst_opts(args))
            stats = percolation.run_fragmentation(
                interaction_graph(inst), args.q, args.trials, args.threshold_coeff, args.seed,
                edge_mode=args.edge_mode, label=inst.label or pattern)
            for s in stats:
                rows.append(s.row())
                _log(args, f"{s.label} n={s.n} q={s.q:g}: largest_mean={s.largest_mean:.2f} "
                           f"frac_below={s.frac_below_threshold:.2f} (threshold {s.threshold}, "
                           f"coeff {args.threshold_coeff:g})")
    emit(args, render(rows, percolation.CSV_COLUMNS, args.format))
    return EXIT_OK


def corrupt_first_swap(c: synth.Circuit, h: HardwareGraph) -> synth.Circuit:
    """Test fixture: retarget the first SWAP (native or CX triple) to another neighbour."""
    gates = list(c.gates)
    for i, g in enumerate(gates):
        if g.kind == "SWAP" or router._is_swap_triple(gates, i):
            a, b = g.qubits
            other = [w for w in h.neighbors[a] if w != b]
            if not other:
                continue
            width = 1 if g.kind == "SWAP" else 3
            gates[i:i + width] = [synth.SWAP(a, other[0])]
            return dataclasses.replace(c, gates=tuple(gates))
    raise ParameterError("circuit has no SWAP to corrupt")


def verify_case(inst: IqpInstance, target: DeviceModel | HardwareGraph, gs: str | None = None, *,
                seed: int = 0, corrupt: bool = False, strategy: str = "front") -> dict:
    """Route ``inst`` and compare its output distribution with brute force."""
    logical, routed = router.compile_circuits(inst, target, gs, seed=seed, strategy=strategy)
    h = target.graph if isinstance(target, DeviceModel) else target
    if corrupt:
        routed = corrupt_first_swap(routed, h)
    dev = sampler.circuit_probs(routed).max_deviation(sampler.brute_force_probs(inst))
    ok = dev <= VERIFY_TOL
    fault = ""
    if not ok:
        where = router.locate_fault(logical, routed)
        fault = where[1] if where else "distribution mismatch with consistent gate replay"
    return {"n": inst.n, "target": target.name, "gateset": logical.meta["gateset"],
            "seed": seed, "swaps": routed.meta["swaps"], "max_deviation": dev,
            "status": "pass" if ok else "fail", "fault": fault}


def cmd_verify(args) -> int:
    if any(n > VERIFY_MAX_N for n in args.n):
        raise UsageError(f"verify is limited to n <= {VERIFY_MAX_N}")
    targets = args.targets or ["line", "ring", "ladder", "grid", *list_devices()]
    rows, failed = [], 0
    for pattern in args.patterns:
        for n in args.n:
            for name in targets:
                target = resolve_target(name, n)
                for i in range(args.seeds):
                    inst = make_instance(pattern, n, args.seed + i, **_inst_opts(args))
                    try:
                        row = verify_case(inst, target, args.gateset, seed=args.seed + i,
                                          corrupt=args.corrupt_swap)
                    except (CapacityError, RoutingError, UnsupportedLocalityError) as exc:
                        _log(args, f"skip {pattern} n={n} {name}: {exc}")
                        continue
                    row["pattern"] = pattern
                    rows.append(row)
                    if row["status"] != "pass":
                        failed += 1
                        print(f"FAIL {pattern} n={n} {row['target']} seed={row['seed']}: "
                              f"deviation {row['max_deviation']:.3e}; {row['fault']}", file=sys.stderr)
    emit(args, render(rows, VERIFY_COLUMNS, args.format))
    _log(args, f"verify: {len(rows) - failed}/{len(rows)} passed (tolerance {VERIFY_TOL:g})")
    return EXIT_VERIFY if failed else EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iqpshift", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="csv"):
        sp.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=fmt)
        sp.add_argument("--density", type=float, default=0.4, help="sparse_density fraction")
        sp.add_argument("--cells", type=int, nargs=3, default=(2, 2, 2), metavar=("L1", "L2", "L3"),
                        help="RHG cell counts")
        sp.add_argument("--quiet", action="store_true", help="no progress on stderr")

    g = sub.add_parser("gen", help="generate an instance")
    common(g, "json")
    g.add_argument("--pattern", default="dense")
    g.add_argument("--n", type=int, default=16)
    g.add_argument("--count", type=int, default=None, help="sparse_count pair count")

    c = sub.add_parser("compile", help="compile one instance and report depths")
    common(c, "json")
    c.add_argument("--instance", help="instance JSON file (else generate from --pattern/--n)")
    c.add_argument("--pattern", default="dense")
    c.add_argument("--n", type=int, default=16)
    c.add_argument("--count", type=int, default=None)
    c.add_argument("--target", default="grid", help="device name, kind, or kind:dims")
    c.add_argument("--gateset", choices=sorted(synth.GATESETS), default=None)
    c.add_argument("--placement", choices=router.PLACEMENTS, default="bfs_match")
    c.add_argument("--strategy", choices=router.ROUTING_STRATEGIES, default="front")
    c.add_argument("--lookahead", action="store_true")
    c.add_argument("--simplify", action="store_true")
    c.add_argument("--circuit-out", help="write the routed circuit text here")

    ph = sub.add_parser("phase-diagram", help="operating points of devices against the boundary")
    common(ph)
    ph.add_argument("--devices", nargs="*", default=None)
    ph.add_argument("--patterns", nargs="+", default=["dense", "sparse_density", "local_chain", "rhg"])
    ph.add_argument("--n", type=int, nargs=1, default=[16])
    ph.add_argument("--seeds", type=int, default=20)
    ph.add_argument("--c", type=float, default=1.0, help="boundary constant")
    ph.add_argument("--k", type=int, default=2)
    ph.add_argument("--svg", help="also write an SVG phase diagram")
    ph.add_argument("--simplify", action="store_true")
    ph.add_argument("--workers", type=int, default=1)

    sc = sub.add_parser("scaling", help="compilation efficiency versus n")
    common(sc)
    sc.add_argument("--patterns", nargs="+", default=["dense", "sparse_count", "local_chain"])
    sc.add_argument("--n", type=int, nargs="+", default=[4, 8, 12, 16, 20, 24, 28, 32])
    sc.add_argument("--topologies", nargs="+", default=list(REFERENCE_KINDS))
    sc.add_argument("--gateset", choices=sorted(synth.GATESETS), default=None)
    sc.add_argument("--seeds", type=int, default=10)
    sc.add_argument("--simplify", action="store_true")
    sc.add_argument("--workers", type=int, default=1)

    pc = sub.add_parser("percolation", help="fragmentation under random qubit deletion")
    common(pc)
    pc.add_argument("--patterns", nargs="+", default=["dense", "sparse_density", "local_chain", "rhg"])
    pc.add_argument("--n", type=int, nargs="+", default=[16])
    pc.add_argument("--q", type=float, nargs="+", default=[0.0, 0.25, 0.5])
    pc.add_argument("--trials", type=int, default=100)
    pc.add_argument("--threshold-coeff", type=float, default=percolation.DEFAULT_THRESHOLD_COEFF)
    pc.add_argument("--edge-mode", action="store_true", help="delete edges instead of qubits")

    v = sub.add_parser("verify", help="routed circuits against the brute-force oracle")
    common(v)
    v.add_argument("--patterns", nargs="+", default=["dense", "sparse_density", "local_chain"])
    v.add_argument("--n", type=int, nargs="+", default=[6])
    v.add_argument("--targets", nargs="*", default=None)
    v.add_argument("--gateset", choices=sorted(synth.GATESETS), default=None)
    v.add_argument("--seeds", type=int, default=3)
    v.add_argument("--corrupt-swap", action="store_true", help=argparse.SUPPRESS)
    return p


COMMANDS = {"gen": cmd_gen, "compile": cmd_compile, "phase-diagram": cmd_phase_diagram,
            "scaling": cmd_scaling, "percolation": cmd_percolation, "verify": cmd_verify}


def _config(args) -> ExperimentConfig:
    return ExperimentConfig(
        subcommand=args.command,
        patterns=tuple(getattr(args, "patterns", None) or [getattr(args, "pattern", "")]),
        n_list=tuple(args.n if isinstance(getattr(args, "n", None), list) else [getattr(args, "n", 0)]),
        targets=tuple(getattr(args, "devices", None) or getattr(args, "targets", None)
                      or getattr(args, "topologies", None) or ()),
        gateset=getattr(args, "gateset", None), seeds=getattr(args, "seeds", 1), seed=args.seed,
        trials=getattr(args, "trials", 100), out=args.out, fmt=args.format,
        c=getattr(args, "c", 1.0),
        threshold_coeff=getattr(args, "threshold_coeff", percolation.DEFAULT_THRESHOLD_COEFF))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        _config(args)
        for attr in ("seeds", "trials"):
            if getattr(args, attr, 1) < 1:
                raise UsageError(f"--{attr} must be >= 1")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"iqpshift: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DeviceFileError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"iqpshift: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ParameterError, CapacityError, RoutingError, UnsupportedLocalityError,
            ResourceError, DomainError) as exc:
        print(f"iqpshift: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
