import numpy as np
from numba import njit


@njit(cache=True)
def bfs_all_pairs(indptr, indices, n, unreachable):
    dist = np.full((n, n), unreachable, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[s, s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[s, u] + 1
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if dist[s, w] == unreachable and w != s:
                    dist[s, w] = du
                    queue[tail] = w
                    tail += 1
    return dist


@njit(cache=True)
def asap_layers(q0, q1, n_qubits):
    layer = np.empty(q0.shape[0], dtype=np.int64)
    ready = np.zeros(n_qubits, dtype=np.int64)
    for g in range(q0.shape[0]):
        a = q0[g]
        b = q1[g]
        t = ready[a]
        if b >= 0 and ready[b] > t:
            t = ready[b]
        layer[g] = t
        ready[a] = t + 1
        if b >= 0:
            ready[b] = t + 1
    return layer


@njit(cache=True)
def _popcount_parity(x):
    p = 0
    while x:
        p ^= 1
        x &= x - 1
    return p


@njit(cache=True)
def parity_phases(masks, thetas, n):
    size = 1 << n
    out = np.zeros(size, dtype=np.float64)
    for y in range(size):
        acc = 0.0
        for j in range(masks.shape[0]):
            if _popcount_parity(y & masks[j]):
                acc -= thetas[j]
            else:
                acc += thetas[j]
        out[y] = acc
    return out


@njit(cache=True)
def fwht(a):
    out = a.astype(np.complex128).copy()
    size = out.shape[0]
    h = 1
    while h < size:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                x = out[j]
                y = out[j + h]
                out[j] = x + y
                out[j + h] = x - y
        h *= 2
    return out


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def component_sizes(n, alive, eu, ev):
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    for k in range(eu.shape[0]):
        a = eu[k]
        b = ev[k]
        if not (alive[a] and alive[b]):
            continue
        ra = _find(parent, a)
        rb = _find(parent, b)
        if ra == rb:
            continue
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
    count = 0
    for v in range(n):
        if alive[v] and _find(parent, v) == v:
            count += 1
    out = np.empty(count, dtype=np.int64)
    i = 0
    for v in range(n):
        if alive[v] and parent[v] == v:
            out[i] = size[v]
            i += 1
    return np.sort(out)[::-1]


@njit(cache=True)
def apply_1q(state, n, q, m00, m01, m10, m11):
    bit = 1 << q
    for i in range(state.shape[0]):
        if i & bit:
            continue
        j = i | bit
        a0 = state[i]
        a1 = state[j]
        state[i] = m00 * a0 + m01 * a1
        state[j] = m10 * a0 + m11 * a1


@njit(cache=True)
def apply_cx(state, n, c, t):
    cb = 1 << c
    tb = 1 << t
    for i in range(state.shape[0]):
        if (i & cb) and not (i & tb):
            j = i | tb
            tmp = state[i]
            state[i] = state[j]
            state[j] = tmp


@njit(cache=True)
def apply_swap(state, n, a, b):
    ab = 1 << a
    bb = 1 << b
    for i in range(state.shape[0]):
        if (i & ab) and not (i & bb):
            j = (i & ~ab) | bb
            tmp = state[i]
            state[i] = state[j]
            state[j] = tmp


@njit(cache=True)
def apply_zz(state, n, a, b, angle):
    even = np.exp(-0.5j * angle)
    odd = np.exp(0.5j * angle)
    for i in range(state.shape[0]):
        if ((i >> a) ^ (i >> b)) & 1:
            state[i] *= odd
        else:
            state[i] *= even
