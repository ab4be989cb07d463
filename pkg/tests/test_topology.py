import json
import math

import numpy as np
import pytest

from iqpshift.errors import DeviceFileError, ParameterError
from iqpshift.topology import (HardwareGraph, build_topology, complete, device_dir, get_device,
                               grid, heavy_hex, ladder, line, list_devices, load_device,
                               near_square_grid, parse_device, reference_topology, ring,
                               subset_diameter)
from oracles import floyd_warshall


def test_complete_16_has_120_edges():
    g = build_topology("complete", 16)
    assert len(g.edges) == 120
    off = g.dist[~np.eye(16, dtype=bool)]
    assert (off == 1).all()


def test_line_16():
    g = build_topology("line", 16)
    assert len(g.edges) == 15
    assert g.dist[0, 15] == 15


def test_grid_corner_distance():
    g = build_topology("grid", 4, 4)
    assert g.dist[0, 15] == 6


def test_heavy_hex_127():
    assert heavy_hex(3).qubit_count == 127
    assert heavy_hex(3).is_connected()


def test_heavy_hex_degree_at_most_three():
    for d in (1, 2, 3, 4):
        g = heavy_hex(d)
        assert max(len(x) for x in g.neighbors) <= 3


@pytest.mark.parametrize("kind,args", [("ladder", (5,)), ("ring", (2,)), ("grid", (0, 3)),
                                       ("line", (0,)), ("torus", (4,))])
def test_invalid_dimensions(kind, args):
    with pytest.raises(ParameterError):
        build_topology(kind, *args)


def test_graph_rejects_bad_edges():
    with pytest.raises(ParameterError):
        HardwareGraph("x", 3, ((0, 0),))
    with pytest.raises(ParameterError):
        HardwareGraph("x", 3, ((0, 3),))


@pytest.mark.parametrize("g", [complete(9), line(17), ring(12), ladder(14), grid(5, 7),
                               heavy_hex(1), heavy_hex(2)], ids=lambda g: g.name)
def test_bfs_matches_floyd_warshall(g):
    ref = floyd_warshall(g.qubit_count, g.edges, g.unreachable)
    assert np.array_equal(g.dist, ref)


def test_shipped_devices_match_floyd_warshall():
    for name in list_devices():
        g = get_device(name).graph
        if g.qubit_count > 64:
            continue
        assert np.array_equal(g.dist, floyd_warshall(g.qubit_count, g.edges, g.unreachable))


def test_disconnected_uses_sentinel():
    g = HardwareGraph("two", 4, ((0, 1), (2, 3)))
    assert g.dist[0, 2] == 4 == g.unreachable
    assert not g.is_connected()
    assert subset_diameter(g, [0, 3]) == 4


def test_distance_matrix_invariants():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(2, 30))
        edges = {tuple(sorted(map(int, rng.choice(n, 2, replace=False)))) for _ in range(n)}
        g = HardwareGraph("rand", n, tuple(edges))
        D = g.dist
        assert (D == D.T).all() and (np.diag(D) == 0).all()
        assert ((D == 1) == np.array([[(min(u, v), max(u, v)) in g.edge_set for v in range(n)]
                                      for u in range(n)])).all()
        tri = D[:, None, :] <= D[:, :, None] + D[None, :, :]  # d(u,w) <= d(u,v) + d(v,w)
        assert tri.all()


def test_grid_is_manhattan():
    r, c = 5, 6
    g = grid(r, c)
    for u in range(r * c):
        for v in range(r * c):
            assert g.dist[u, v] == abs(u // c - v // c) + abs(u % c - v % c)


def test_mean_grid_distance_scales_with_sqrt_n():
    rng = np.random.default_rng(0)
    means = []
    for n in (16, 64, 256):
        side = math.isqrt(n)
        g = grid(side, side)
        u = rng.integers(0, n, 10_000)
        v = rng.integers(0, n, 10_000)
        m = g.dist[u, v].mean()
        means.append(m)
        assert abs(m - 2 / 3 * side) / (2 / 3 * side) < 0.10
    assert means[0] < means[1] < means[2]


def test_subset_diameter_examples():
    assert subset_diameter(grid(4, 4), [0, 15]) == 6
    assert subset_diameter(ring(7), [3]) == 0
    assert subset_diameter(line(16), [0, 7, 15]) == 15
    with pytest.raises(ParameterError):
        subset_diameter(line(4), [])


def test_reference_topology_sizes():
    assert near_square_grid(12).qubit_count >= 12
    assert reference_topology("ladder", 7).qubit_count == 8
    assert reference_topology("ring", 2).qubit_count == 3
    assert reference_topology("grid", 16).dims == (4, 4)


# -- device files


def test_shipped_device_examples():
    fc1 = get_device("FC_1")
    assert fc1.graph.qubit_count == 98 and fc1.graph.is_complete()
    assert fc1.two_qubit_error_rate == 7.9e-4
    sc3 = get_device("SC_3")
    assert sc3.graph.qubit_count == 127 and sc3.two_qubit_error_rate == 1.146e-2
    assert set(list_devices()) >= {"FC_1", "FC_2", "SC_1", "SC_2", "SC_3", "SC_4", "SC_5"}
    for name in list_devices():
        assert get_device(name).graph.is_connected()


def _device_text(**kw):
    obj = {"name": "t", "qubit_count": 127, "edges": [[0, 1]], "two_qubit_error_rate": 0.01,
           "gateset": "cx"}
    obj.update(kw)
    return json.dumps(obj)


def test_dangling_edge_rejected():
    with pytest.raises(DeviceFileError, match="dangling"):
        parse_device(_device_text(edges=[[0, 200]]))


@pytest.mark.parametrize("kw,match", [
    ({"edges": [[0, 1], [1, 0]]}, "duplicates"),
    ({"two_qubit_error_rate": 1.5}, "two_qubit_error_rate"),
    ({"two_qubit_error_rate": 0.0}, "two_qubit_error_rate"),
    ({"gateset": "iswap"}, "gateset"),
    ({"qubit_count": "x"}, "qubit_count"),
    ({"edges": [[0, 1, 2]]}, r"edges\[0\]"),
])
def test_device_field_diagnostics(kw, match):
    with pytest.raises(DeviceFileError, match=match):
        parse_device(_device_text(**kw))


def test_device_parse_error_has_line():
    with pytest.raises(DeviceFileError, match=r"f.json:2:"):
        parse_device('{"name": "x",\n  "qubit_count": ,}', "f.json")


def test_device_dir_env(tmp_path, monkeypatch):
    (tmp_path / "MINE.json").write_text(_device_text(name="MINE", qubit_count=2), encoding="utf-8")
    monkeypatch.setenv("IQPSHIFT_DEVICE_DIR", str(tmp_path))
    assert device_dir() == tmp_path
    assert list_devices() == ["MINE"]
    assert load_device(tmp_path / "MINE.json").graph.qubit_count == 2


def test_reference_heavy_hex_is_smallest_fit():
    assert reference_topology("heavy_hex", 16).qubit_count == heavy_hex(1).qubit_count
    assert reference_topology("heavy_hex", 30).qubit_count == heavy_hex(2).qubit_count
