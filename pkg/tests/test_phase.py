import math

import numpy as np
import pytest

from iqpshift.errors import DomainError, ParameterError
from iqpshift.instance import IqpInstance, gen_pattern
from iqpshift.phase import (NoiseChannel, OperatingPoint, PhaseParams, Regime, classify,
                            critical_depth, critical_depth_curve, device_p_eff, effective_p,
                            grid_depth_bounds, margin, noise_budget_ratio, p_required,
                            term_layers)
from iqpshift.router import compile_circuits, compile_instance, schedule_depth
from iqpshift.topology import get_device, grid, line, list_devices


def test_effective_p_examples():
    assert effective_p(NoiseChannel(1, 0, 0, 0)) == 0
    assert effective_p(NoiseChannel(0.9, 0.05, 0.02, 0.03)) == pytest.approx(0.05)
    q = 0.09
    assert effective_p(NoiseChannel.depolarizing(q)) == pytest.approx(2 * q / 3)


def test_noise_channel_validation():
    with pytest.raises(ParameterError):
        NoiseChannel(0.5, 0.5, 0.1, 0.0)
    with pytest.raises(ParameterError):
        NoiseChannel(1.1, -0.1, 0, 0)


@pytest.mark.parametrize("p,d", [(3.3e-3, 47), (1.146e-2, 17), (4.6e-2, 6)])
def test_critical_depth_quoted_values(p, d):
    assert abs(round(critical_depth(p)) - d) <= 1


def test_critical_depth_formula_and_domain():
    assert critical_depth(0.01, PhaseParams(3, 2.0)) == pytest.approx(2.0 / (0.01 * math.log(300)))
    for bad in (0.0, -1e-3, 2 / math.e, 0.9):
        with pytest.raises(DomainError, match="k/e"):
            critical_depth(bad)
    with pytest.raises(ParameterError):
        PhaseParams(0)
    with pytest.raises(ParameterError):
        PhaseParams(2, 0.0)


def test_critical_depth_monotone():
    ps = np.logspace(-6, math.log10(0.7), 400)
    d = critical_depth_curve(ps)
    assert (np.diff(d) < 0).all()
    for p in (1e-4, 1e-2, 0.3):
        # ln(k/p) grows with k, so the boundary falls as k rises
        vals = [critical_depth(p, PhaseParams(k)) for k in range(1, 8)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


def test_margin_examples():
    m = margin(OperatingPoint(3.3e-3, 126))
    assert m.margin == pytest.approx(m.d_star - 126) and m.regime is Regime.SIMULATABLE
    assert round(m.margin) == -79
    m = margin(OperatingPoint(1.146e-2, 51))
    assert round(m.margin) == -34 and m.regime is Regime.SIMULATABLE
    m = margin(OperatingPoint(3.3e-3, 1))
    assert round(m.margin) == 46 and m.regime is Regime.POTENTIALLY_HARD


def test_margin_antisymmetry_and_boundary():
    a = margin(OperatingPoint(0.01, 10))
    for delta in (0.5, 3.0, 17.25):
        b = margin(OperatingPoint(0.01, 10 + delta))
        assert a.margin - b.margin == pytest.approx(delta, abs=1e-12)
    d = critical_depth(0.01)
    assert margin(OperatingPoint(0.01, d + 0.2)).regime is Regime.BOUNDARY
    assert classify(-0.49) is Regime.BOUNDARY and classify(0.5) is Regime.POTENTIALLY_HARD
    with pytest.raises(ParameterError):
        OperatingPoint(0.01, 0.5)
    with pytest.raises(DomainError):
        margin(OperatingPoint(0.9, 5))


def test_p_required_round_trip():
    for p in np.logspace(-5, math.log10(0.3), 50):
        assert p_required(critical_depth(p)) == pytest.approx(p, rel=1e-9)
    assert p_required(critical_depth(3.3e-3)) == pytest.approx(3.3e-3, rel=1e-9)
    assert p_required(critical_depth(1e-4)) == pytest.approx(1e-4, rel=1e-9)


def test_p_required_monotone_and_domain():
    ds = [3, 10, 47, 200, 5000]
    ps = [p_required(d) for d in ds]
    assert all(a > b for a, b in zip(ps, ps[1:]))
    with pytest.raises(DomainError):
        p_required(math.e / 2)
    with pytest.raises(DomainError):
        p_required(1.0)


def test_noise_budget_examples():
    nb = noise_budget_ratio(238, 674)
    assert nb.estimate == pytest.approx(0.353, abs=1e-3)
    assert 0 < nb.exact < 1
    same = noise_budget_ratio(50, 50)
    assert same.exact == pytest.approx(1.0) and same.estimate == 1.0
    with pytest.raises(ParameterError):
        noise_budget_ratio(100, 50)


def test_device_p_eff_add_on():
    dev = get_device("SC_1")
    assert device_p_eff(dev) == dev.two_qubit_error_rate
    assert device_p_eff(dev, 1e-4) == pytest.approx(dev.two_qubit_error_rate + 1e-4)


def test_grid_bounds_local_chain_zero_demand():
    inst = gen_pattern("local_chain", 16, 0)
    g = grid(4, 4)
    snake = [r * 4 + (c if r % 2 == 0 else 3 - c) for r in range(4) for c in range(4)]
    b = grid_depth_bounds(inst, g, snake, D_FC=47)
    assert b.lower_dist == 47


def test_grid_bounds_single_corner_gate():
    inst = IqpInstance(2, 2, (((0, 1), 0.3),))
    b = grid_depth_bounds(inst, grid(4, 4), [0, 15], D_FC=7, lam=1)
    assert b.lower_dist == 7 + 5
    assert b.lower_diam == 6
    assert b.upper == 2 * 7


def test_grid_bounds_errors():
    inst = gen_pattern("dense", 4)
    with pytest.raises(ParameterError):
        grid_depth_bounds(inst, line(4), range(4), 10)
    with pytest.raises(ParameterError):
        grid_depth_bounds(inst, grid(2, 2), [0, 0, 1, 2], 10)


def test_term_layers_partition():
    inst = gen_pattern("dense", 6, 0)
    layers = term_layers(inst)
    assert sorted(i for L in layers for i in L) == list(range(inst.num_terms))
    for L in layers:
        qs = [q for i in L for q in inst.terms[i][0]]
        assert len(qs) == len(set(qs))


def test_sandwich_dense_4x4():
    g = grid(4, 4)
    for seed in range(3):
        inst = gen_pattern("dense", 16, seed)
        logical, routed = compile_circuits(inst, g)
        d_fc = schedule_depth(logical).depth
        d_h = schedule_depth(routed).depth
        b = grid_depth_bounds(inst, g, routed.initial_layout, d_fc)
        assert b.lower <= d_h <= b.upper


def test_shift_dominance():
    for pattern in ("dense", "sparse_density", "local_chain"):
        inst = gen_pattern(pattern, 16, 2)
        for name in list_devices():
            dev = get_device(name)
            if dev.graph.is_complete():
                continue
            rep = compile_instance(inst, dev)
            p = dev.two_qubit_error_rate
            m_h = margin(OperatingPoint(p, rep.D_H)).margin
            m_fc = margin(OperatingPoint(p, rep.D_FC)).margin
            assert m_h <= m_fc
