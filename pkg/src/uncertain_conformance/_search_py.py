"""Pure-Python shortest-path kernel over a compiled product net.

The net is given in CSR form: transition ``i`` consumes one token from each
place in ``pre_idx[pre_ptr[i]:pre_ptr[i + 1]]`` and produces one in each place
of the matching ``post`` slice. Transitions must already be sorted in
tie-break order. Returns ``(status, cost, path, n_states)`` where status is
0 (found), 1 (final marking unreachable) or 2 (state cap exceeded).
"""
from heapq import heappop, heappush

FOUND = 0
UNREACHABLE = 1
CAP_EXCEEDED = 2


def search(n_places, pre_ptr, pre_idx, post_ptr, post_idx, costs, init, final, max_states, heuristic=None):
    nt = len(costs)
    pre = [tuple(pre_idx[pre_ptr[i]:pre_ptr[i + 1]]) for i in range(nt)]
    post = [tuple(post_idx[post_ptr[i]:post_ptr[i + 1]]) for i in range(nt)]
    init = tuple(init)
    final = tuple(final)

    index = {init: 0}
    markings = [init]
    g = [0]
    h = [heuristic(init) if heuristic else 0]
    parent = [-1]
    via = [-1]
    closed = [False]
    heap = [(h[0], 0, 0)]
    seq = 1

    while heap:
        _, _, s = heappop(heap)
        if closed[s]:
            continue
        closed[s] = True
        m = markings[s]
        if m == final:
            cost = g[s]
            path = []
            while parent[s] >= 0:
                path.append(via[s])
                s = parent[s]
            path.reverse()
            return FOUND, cost, path, len(markings)
        gs = g[s]
        for ti in range(nt):
            ins = pre[ti]
            ok = True
            for p in ins:
                if not m[p]:
                    ok = False
                    break
            if not ok:
                continue
            child = list(m)
            for p in ins:
                child[p] -= 1
            for p in post[ti]:
                child[p] += 1
            child = tuple(child)
            ng = gs + costs[ti]
            s2 = index.get(child)
            if s2 is None:
                s2 = len(markings)
                if s2 >= max_states:
                    return CAP_EXCEEDED, -1, [], s2
                index[child] = s2
                markings.append(child)
                g.append(ng)
                h.append(heuristic(child) if heuristic else 0)
                parent.append(s)
                via.append(ti)
                closed.append(False)
            elif closed[s2] or ng >= g[s2]:
                continue
            else:
                g[s2] = ng
                parent[s2] = s
                via[s2] = ti
            heappush(heap, (ng + h[s2], seq, s2))
            seq += 1
    return UNREACHABLE, -1, [], len(markings)
