"""Numba kernels for the decoder inner loop, PEG construction and girth search.

Graphs are passed as flat index arrays. Edges are numbered in check order:

- ``check_ptr`` (M+1) and ``edge_bit`` (E): edges ``check_ptr[c]:check_ptr[c+1]``
  belong to check ``c`` and ``edge_bit[e]`` is the bit of edge ``e``.
- ``bit_ptr`` (N+1) and ``bit_edge`` (E): the edges of bit ``b`` are
  ``bit_edge[bit_ptr[b]:bit_ptr[b+1]]``.

Workspaces are allocated by the Python callers.
"""
from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    _NUMBA_AVAILABLE = True
except Exception:  # pragma: no cover

    def njit(*args, **kwargs):  # type: ignore
        def _wrap(fn):
            return fn

        return _wrap

    _NUMBA_AVAILABLE = False


def numba_available() -> bool:
    """Return True if Numba is importable in this environment."""
    return _NUMBA_AVAILABLE


@njit(cache=True)
def boxplus(a: float, b: float) -> float:
    """2*atanh(tanh(a/2)*tanh(b/2)) in the overflow-free Jacobian form."""
    abs_a = abs(a)
    abs_b = abs(b)
    # magnitude first so that negating an input negates the result exactly
    mag = (
        min(abs_a, abs_b)
        + math.log1p(math.exp(-(abs_a + abs_b)))
        - math.log1p(math.exp(-abs(abs_a - abs_b)))
    )
    if (a < 0.0) != (b < 0.0):
        return -mag
    return mag


@njit(cache=True)
def boxplus_exclusive(incoming: np.ndarray, out: np.ndarray, work: np.ndarray) -> None:
    """out[k] = boxplus of every incoming message except incoming[k].

    ``work`` needs room for ``len(incoming)`` backward partial results.
    """
    d = incoming.shape[0]
    if d == 0:
        return
    if d == 1:
        out[0] = np.inf
        return
    work[d - 1] = incoming[d - 1]
    for k in range(d - 2, -1, -1):
        work[k] = boxplus(incoming[k], work[k + 1])
    forward = incoming[0]
    out[0] = work[1]
    for k in range(1, d - 1):
        out[k] = boxplus(forward, work[k + 1])
        forward = boxplus(forward, incoming[k])
    out[d - 1] = forward


@njit(cache=True)
def variable_update(
    channel_llr: np.ndarray,
    c2v: np.ndarray,
    bit_ptr: np.ndarray,
    bit_edge: np.ndarray,
    v2c: np.ndarray,
    app: np.ndarray,
    clip: float,
) -> None:
    """Sum incoming check messages into ``app`` and emit extrinsic bit messages."""
    n_bits = channel_llr.shape[0]
    for b in range(n_bits):
        total = channel_llr[b]
        for k in range(bit_ptr[b], bit_ptr[b + 1]):
            total += c2v[bit_edge[k]]
        # extrinsic messages subtract from the unclipped sum
        if total > clip:
            app[b] = clip
        elif total < -clip:
            app[b] = -clip
        else:
            app[b] = total
        for k in range(bit_ptr[b], bit_ptr[b + 1]):
            e = bit_edge[k]
            val = total - c2v[e]
            if val > clip:
                val = clip
            elif val < -clip:
                val = -clip
            v2c[e] = val


@njit(cache=True)
def check_update(
    v2c: np.ndarray,
    check_ptr: np.ndarray,
    c2v: np.ndarray,
    clip: float,
    work: np.ndarray,
) -> None:
    """Check-node update on every check, clipped to +-clip."""
    n_checks = check_ptr.shape[0] - 1
    for c in range(n_checks):
        lo = check_ptr[c]
        hi = check_ptr[c + 1]
        boxplus_exclusive(v2c[lo:hi], c2v[lo:hi], work)
        for e in range(lo, hi):
            if c2v[e] > clip:
                c2v[e] = clip
            elif c2v[e] < -clip:
                c2v[e] = -clip


@njit(cache=True)
def check_message_sums(
    c2v: np.ndarray, bit_ptr: np.ndarray, bit_edge: np.ndarray, out: np.ndarray
) -> None:
    """Per-bit sum of incoming check messages (the code's extrinsic LLR)."""
    n_bits = out.shape[0]
    for b in range(n_bits):
        total = 0.0
        for k in range(bit_ptr[b], bit_ptr[b + 1]):
            total += c2v[bit_edge[k]]
        out[b] = total


@njit(cache=True)
def syndrome_bits(
    bits: np.ndarray, check_ptr: np.ndarray, edge_bit: np.ndarray, out: np.ndarray
) -> int:
    """Write H*bits over GF(2) into ``out`` and return its weight."""
    n_checks = check_ptr.shape[0] - 1
    weight = 0
    for c in range(n_checks):
        parity = 0
        for e in range(check_ptr[c], check_ptr[c + 1]):
            parity ^= bits[edge_bit[e]]
        out[c] = parity
        weight += parity
    return weight


@njit(cache=True)
def peg_build(
    d_v: int,
    m: int,
    target: np.ndarray,
    vn_adj: np.ndarray,
    cn_adj: np.ndarray,
    cn_deg: np.ndarray,
) -> int:
    """Place ``d_v`` edges per bit in ascending bit order.

    A check is allowed when it has residual capacity and holds no bit of the
    current bit's symbol. Unreached allowed checks are preferred; otherwise the
    allowed checks at the deepest BFS level compete. Ties go to the lowest
    fill ratio ``deg/target`` and then to the lowest index.

    Returns -1 on success, otherwise the bit that could not be connected.
    ``vn_adj`` must come in filled with -1.
    """
    n_bits = vn_adj.shape[0]
    n_checks = target.shape[0]
    level = np.empty(n_checks, dtype=np.int64)
    blocked = np.zeros(n_checks, dtype=np.int64)
    bit_seen = np.zeros(n_bits, dtype=np.int64)
    bit_queue = np.empty(n_bits, dtype=np.int64)
    check_queue = np.empty(n_checks, dtype=np.int64)
    stamp = 0
    for b in range(n_bits):
        first = (b // m) * m
        for k in range(d_v):
            stamp += 1
            for j in range(first, first + m):
                for t in range(d_v):
                    c = vn_adj[j, t]
                    if c >= 0:
                        blocked[c] = stamp

            level[:] = -1
            bit_seen[b] = stamp
            bit_queue[0] = b
            n_bq = 1
            depth = 0
            while n_bq > 0:
                n_cq = 0
                for i in range(n_bq):
                    v = bit_queue[i]
                    for t in range(d_v):
                        c = vn_adj[v, t]
                        if c >= 0 and level[c] < 0:
                            level[c] = depth
                            check_queue[n_cq] = c
                            n_cq += 1
                n_bq = 0
                for i in range(n_cq):
                    c = check_queue[i]
                    for t in range(cn_deg[c]):
                        v = cn_adj[c, t]
                        if bit_seen[v] != stamp:
                            bit_seen[v] = stamp
                            bit_queue[n_bq] = v
                            n_bq += 1
                depth += 1

            best = -1
            for c in range(n_checks):
                if level[c] >= 0 or blocked[c] == stamp or cn_deg[c] >= target[c]:
                    continue
                if best < 0 or cn_deg[c] * target[best] < cn_deg[best] * target[c]:
                    best = c
            if best < 0:
                deepest = -1
                for c in range(n_checks):
                    if blocked[c] != stamp and cn_deg[c] < target[c]:
                        if level[c] > deepest:
                            deepest = level[c]
                for c in range(n_checks):
                    if level[c] != deepest or deepest < 0:
                        continue
                    if blocked[c] == stamp or cn_deg[c] >= target[c]:
                        continue
                    if best < 0 or cn_deg[c] * target[best] < cn_deg[best] * target[c]:
                        best = c
            if best < 0:
                return b
            vn_adj[b, k] = best
            cn_adj[best, cn_deg[best]] = b
            cn_deg[best] += 1
    return -1


@njit(cache=True)
def girth_search(
    n_bits: int,
    bit_ptr: np.ndarray,
    bit_check: np.ndarray,
    check_ptr: np.ndarray,
    edge_bit: np.ndarray,
) -> int:
    """Shortest cycle length of the Tanner graph, or -1 if it has none.

    Nodes ``0..N-1`` are bits and ``N..N+M-1`` are checks. A BFS runs from
    every bit; every cycle passes through a bit so this finds the girth.
    """
    n_checks = check_ptr.shape[0] - 1
    n_nodes = n_bits + n_checks
    dist = np.full(n_nodes, -1, dtype=np.int64)
    parent = np.full(n_nodes, -1, dtype=np.int64)
    queue = np.empty(n_nodes, dtype=np.int64)
    touched = np.empty(n_nodes, dtype=np.int64)
    best = n_nodes + 1
    for root in range(n_bits):
        n_touched = 0
        head = 0
        tail = 1
        queue[0] = root
        dist[root] = 0
        touched[n_touched] = root
        n_touched += 1
        while head < tail:
            u = queue[head]
            head += 1
            if 2 * dist[u] + 1 >= best:
                break
            if u < n_bits:
                lo = bit_ptr[u]
                hi = bit_ptr[u + 1]
            else:
                lo = check_ptr[u - n_bits]
                hi = check_ptr[u - n_bits + 1]
            for k in range(lo, hi):
                if u < n_bits:
                    w = n_bits + bit_check[k]
                else:
                    w = edge_bit[k]
                if w == parent[u]:
                    continue
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue[tail] = w
                    tail += 1
                    touched[n_touched] = w
                    n_touched += 1
                else:
                    length = dist[u] + dist[w] + 1
                    if length < best:
                        best = length
        for i in range(n_touched):
            dist[touched[i]] = -1
            parent[touched[i]] = -1
    if best > n_nodes:
        return -1
    return best
