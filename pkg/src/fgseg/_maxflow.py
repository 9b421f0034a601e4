"""Boykov-Kolmogorov max-flow on an implicit 6-neighbour grid.

Nodes are indexed ``f*H*W + i*W + j``. Direction ``d`` and ``d ^ 1`` are
opposite: 0/1 = +j/-j, 2/3 = +i/-i, 4/5 = +f/-f.
"""

import numpy as np
from numba import njit

_TERMINAL = -2
_ORPHAN = -3
_NONE = -1
_INF_DIST = np.iinfo(np.int64).max


def grid_neighbors(frames, height, width):
    """Neighbour table of shape (n, 6), -1 where a neighbour is missing."""
    idx = np.arange(frames * height * width, dtype=np.int32).reshape(frames, height, width)
    nbr = np.full((frames, height, width, 6), -1, dtype=np.int32)
    nbr[:, :, :-1, 0] = idx[:, :, 1:]
    nbr[:, :, 1:, 1] = idx[:, :, :-1]
    nbr[:, :-1, :, 2] = idx[:, 1:, :]
    nbr[:, 1:, :, 3] = idx[:, :-1, :]
    nbr[:-1, :, :, 4] = idx[1:, :, :]
    nbr[1:, :, :, 5] = idx[:-1, :, :]
    return nbr.reshape(-1, 6)


@njit(cache=True, nogil=True)
def _origin_dist(y, parent, nbr, ts, dist, time):
    # distance to a terminal along parent links, or _INF_DIST if the chain hits an orphan
    d = 0
    while True:
        if ts[y] == time:
            return d + dist[y]
        d += 1
        p = parent[y]
        if p == _TERMINAL:
            ts[y] = time
            dist[y] = 1
            return d
        if p == _ORPHAN or p == _NONE:
            return _INF_DIST
        y = nbr[y, p]


@njit(cache=True, nogil=True)
def bk_maxflow(tcap, res, nbr):
    """Run max-flow in place.

    ``tcap[v] > 0`` is residual source->v capacity, ``tcap[v] < 0`` is
    residual v->sink capacity. ``res[v, d]`` is residual capacity of the edge
    from ``v`` to ``nbr[v, d]``. Returns ``(flow, tree)`` where ``tree == 1``
    marks nodes reachable from the source in the final residual graph.
    """
    n = tcap.shape[0]
    tree = np.zeros(n, np.int8)
    parent = np.full(n, _NONE, np.int32)
    ts = np.zeros(n, np.int64)
    dist = np.zeros(n, np.int64)

    queue = np.empty(n, np.int32)
    in_queue = np.zeros(n, np.bool_)
    q_head = 0
    q_len = 0

    orphans = np.empty(n, np.int32)
    o_head = 0
    o_len = 0

    for v in range(n):
        if tcap[v] > 0.0:
            tree[v] = 1
        elif tcap[v] < 0.0:
            tree[v] = 2
        else:
            continue
        parent[v] = _TERMINAL
        dist[v] = 1
        queue[(q_head + q_len) % n] = v
        q_len += 1
        in_queue[v] = True

    flow = 0.0
    time = 0

    while q_len > 0:
        v = queue[q_head]
        q_head = (q_head + 1) % n
        q_len -= 1
        in_queue[v] = False

        while tree[v] != 0:
            # grow the tree from v until it touches the other tree
            a = -1
            b = -1
            mid = -1
            tv = tree[v]
            for d in range(6):
                u = nbr[v, d]
                if u < 0:
                    continue
                if tv == 1:
                    cap = res[v, d]
                else:
                    cap = res[u, d ^ 1]
                if cap <= 0.0:
                    continue
                if tree[u] == 0:
                    tree[u] = tv
                    parent[u] = d ^ 1
                    ts[u] = ts[v]
                    dist[u] = dist[v] + 1
                    if not in_queue[u]:
                        queue[(q_head + q_len) % n] = u
                        q_len += 1
                        in_queue[u] = True
                elif tree[u] != tv:
                    if tv == 1:
                        a = v
                        b = u
                        mid = d
                    else:
                        a = u
                        b = v
                        mid = d ^ 1
                    break
            if a < 0:
                break

            time += 1

            # bottleneck along s -> ... -> a -> b -> ... -> t
            bn = res[a, mid]
            x = a
            while parent[x] != _TERMINAL:
                pd = parent[x]
                p = nbr[x, pd]
                if res[p, pd ^ 1] < bn:
                    bn = res[p, pd ^ 1]
                x = p
            if tcap[x] < bn:
                bn = tcap[x]
            x = b
            while parent[x] != _TERMINAL:
                pd = parent[x]
                if res[x, pd] < bn:
                    bn = res[x, pd]
                x = nbr[x, pd]
            if -tcap[x] < bn:
                bn = -tcap[x]

            res[a, mid] -= bn
            res[b, mid ^ 1] += bn
            x = a
            while parent[x] != _TERMINAL:
                pd = parent[x]
                p = nbr[x, pd]
                res[p, pd ^ 1] -= bn
                res[x, pd] += bn
                if res[p, pd ^ 1] <= 0.0:
                    parent[x] = _ORPHAN
                    orphans[(o_head + o_len) % n] = x
                    o_len += 1
                x = p
            tcap[x] -= bn
            if tcap[x] <= 0.0:
                tcap[x] = 0.0
                parent[x] = _ORPHAN
                orphans[(o_head + o_len) % n] = x
                o_len += 1
            x = b
            while parent[x] != _TERMINAL:
                pd = parent[x]
                p = nbr[x, pd]
                res[x, pd] -= bn
                res[p, pd ^ 1] += bn
                if res[x, pd] <= 0.0:
                    parent[x] = _ORPHAN
                    orphans[(o_head + o_len) % n] = x
                    o_len += 1
                x = p
            tcap[x] += bn
            if tcap[x] >= 0.0:
                tcap[x] = 0.0
                parent[x] = _ORPHAN
                orphans[(o_head + o_len) % n] = x
                o_len += 1
            flow += bn

            # adoption
            while o_len > 0:
                x = orphans[o_head]
                o_head = (o_head + 1) % n
                o_len -= 1
                tx = tree[x]
                best = -1
                best_dist = _INF_DIST
                for d in range(6):
                    u = nbr[x, d]
                    if u < 0 or tree[u] != tx:
                        continue
                    if tx == 1:
                        cap = res[u, d ^ 1]
                    else:
                        cap = res[x, d]
                    if cap <= 0.0:
                        continue
                    k = _origin_dist(u, parent, nbr, ts, dist, time)
                    if k == _INF_DIST:
                        continue
                    if k < best_dist:
                        best = d
                        best_dist = k
                    y = u
                    while ts[y] != time:
                        ts[y] = time
                        dist[y] = k
                        k -= 1
                        y = nbr[y, parent[y]]
                if best >= 0:
                    parent[x] = best
                    ts[x] = time
                    dist[x] = best_dist + 1
                    continue
                for d in range(6):
                    u = nbr[x, d]
                    if u < 0 or tree[u] != tx:
                        continue
                    if tx == 1:
                        cap = res[u, d ^ 1]
                    else:
                        cap = res[x, d]
                    if cap > 0.0 and not in_queue[u]:
                        queue[(q_head + q_len) % n] = u
                        q_len += 1
                        in_queue[u] = True
                    pu = parent[u]
                    if pu >= 0 and nbr[u, pu] == x:
                        parent[u] = _ORPHAN
                        orphans[(o_head + o_len) % n] = u
                        o_len += 1
                tree[x] = 0
                parent[x] = _NONE

    return flow, tree
