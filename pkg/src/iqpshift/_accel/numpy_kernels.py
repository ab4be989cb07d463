"""Pure-numpy reference versions of the hot kernels.

Every function here has the same signature and return contract as its
counterpart in ``numba_kernels``.
"""

import numpy as np


def bfs_all_pairs(indptr, indices, n, unreachable):
    """All-sources BFS as repeated boolean frontier expansion."""
    adj = np.zeros((n, n), dtype=bool)
    for u in range(n):
        adj[u, indices[indptr[u]:indptr[u + 1]]] = True
    dist = np.full((n, n), unreachable, dtype=np.int64)
    reached = np.eye(n, dtype=bool)
    frontier = reached.copy()
    dist[reached] = 0
    d = 0
    while frontier.any():
        d += 1
        nxt = (frontier.astype(np.uint8) @ adj.astype(np.uint8)) > 0
        nxt &= ~reached
        dist[nxt] = d
        reached |= nxt
        frontier = nxt
    return dist


def asap_layers(q0, q1, n_qubits):
    layer = np.empty(len(q0), dtype=np.int64)
    ready = np.zeros(n_qubits, dtype=np.int64)
    for g in range(len(q0)):
        a = q0[g]
        b = q1[g]
        t = ready[a] if b < 0 else max(ready[a], ready[b])
        layer[g] = t
        ready[a] = t + 1
        if b >= 0:
            ready[b] = t + 1
    return layer


def parity_phases(masks, thetas, n):
    y = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.float64)
    for mask, theta in zip(masks, thetas):
        bits = y & mask
        parity = np.zeros_like(bits)
        while bits.any():
            parity ^= bits & 1
            bits = bits >> 1
        out += theta * (1 - 2 * parity)
    return out


def fwht(a):
    """Unnormalized Walsh-Hadamard transform, returned as a new array."""
    a = np.array(a, dtype=np.complex128, copy=True)
    size = a.shape[0]
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        x = v[:, 0, :].copy()
        y = v[:, 1, :]
        v[:, 0, :] = x + y
        v[:, 1, :] = x - y
        h *= 2
    return a


def component_sizes(n, alive, eu, ev):
    """Component sizes of the alive-induced subgraph, descending.

    Uses min-label propagation rather than union-find; both backends are
    checked against each other in the test suite.
    """
    alive = np.asarray(alive, dtype=bool)
    if not alive.any():
        return np.zeros(0, dtype=np.int64)
    keep = alive[eu] & alive[ev]
    u = np.asarray(eu)[keep]
    v = np.asarray(ev)[keep]
    label = np.arange(n, dtype=np.int64)
    while True:
        old = label.copy()
        m = np.minimum(label[u], label[v])
        np.minimum.at(label, u, m)
        np.minimum.at(label, v, m)
        label = label[label]
        if np.array_equal(old, label):
            break
    counts = np.bincount(label[alive], minlength=n)
    sizes = counts[counts > 0]
    return np.sort(sizes)[::-1].astype(np.int64)


def _axes(state, n, q):
    # qubit q is bit q of the basis index; axis n-1-q after reshape
    return state.reshape((2,) * n), n - 1 - q


def apply_1q(state, n, q, m00, m01, m10, m11):
    psi, ax = _axes(state, n, q)
    a0 = np.take(psi, 0, axis=ax).copy()
    a1 = np.take(psi, 1, axis=ax)
    idx0 = [slice(None)] * n
    idx1 = [slice(None)] * n
    idx0[ax] = 0
    idx1[ax] = 1
    new1 = m10 * a0 + m11 * a1
    psi[tuple(idx0)] = m00 * a0 + m01 * a1
    psi[tuple(idx1)] = new1


def apply_cx(state, n, c, t):
    idx = np.arange(state.shape[0])
    sel = ((idx >> c) & 1).astype(bool) & ~((idx >> t) & 1).astype(bool)
    src = idx[sel]
    dst = src | (1 << t)
    tmp = state[src].copy()
    state[src] = state[dst]
    state[dst] = tmp


def apply_swap(state, n, a, b):
    idx = np.arange(state.shape[0])
    sel = (((idx >> a) & 1) == 1) & (((idx >> b) & 1) == 0)
    src = idx[sel]
    dst = (src & ~(1 << a)) | (1 << b)
    tmp = state[src].copy()
    state[src] = state[dst]
    state[dst] = tmp


def apply_zz(state, n, a, b, angle):
    idx = np.arange(state.shape[0])
    par = ((idx >> a) ^ (idx >> b)) & 1
    # exp(-i angle/2 Z⊗Z): eigenvalue +1 on even parity
    phase = np.where(par == 0, np.exp(-0.5j * angle), np.exp(0.5j * angle))
    state *= phase
