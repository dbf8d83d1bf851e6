# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shortest-path kernel; same contract and tie-breaking as _search_py."""
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy
from cpython.bytes cimport PyBytes_FromStringAndSize

cdef enum:
    FOUND = 0
    UNREACHABLE = 1
    CAP_EXCEEDED = 2

ctypedef long long i64

ctypedef struct HeapItem:
    i64 f
    i64 seq
    int state


cdef inline bint _less(HeapItem* a, HeapItem* b) nogil:
    return a.f < b.f or (a.f == b.f and a.seq < b.seq)


cdef struct Heap:
    HeapItem* items
    Py_ssize_t size
    Py_ssize_t cap


cdef int _heap_push(Heap* h, i64 f, i64 seq, int state) except -1:
    cdef Py_ssize_t i, parent
    cdef HeapItem tmp
    if h.size == h.cap:
        h.cap = h.cap * 2
        h.items = <HeapItem*> realloc(h.items, h.cap * sizeof(HeapItem))
        if h.items == NULL:
            raise MemoryError()
    i = h.size
    h.size += 1
    h.items[i].f = f
    h.items[i].seq = seq
    h.items[i].state = state
    while i > 0:
        parent = (i - 1) >> 1
        if _less(&h.items[i], &h.items[parent]):
            tmp = h.items[i]
            h.items[i] = h.items[parent]
            h.items[parent] = tmp
            i = parent
        else:
            break
    return 0


cdef int _heap_pop(Heap* h) nogil:
    cdef int state = h.items[0].state
    cdef Py_ssize_t i = 0, l, r, m
    cdef HeapItem tmp
    h.size -= 1
    h.items[0] = h.items[h.size]
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < h.size and _less(&h.items[l], &h.items[m]):
            m = l
        if r < h.size and _less(&h.items[r], &h.items[m]):
            m = r
        if m == i:
            break
        tmp = h.items[i]
        h.items[i] = h.items[m]
        h.items[m] = tmp
        i = m
    return state


cdef int* _int_array(object seq, Py_ssize_t n) except NULL:
    cdef int* out = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    cdef Py_ssize_t i
    if out == NULL:
        raise MemoryError()
    for i in range(n):
        out[i] = seq[i]
    return out


def search(int n_places, pre_ptr, pre_idx, post_ptr, post_idx, costs, init, final,
           Py_ssize_t max_states, heuristic=None):
    cdef Py_ssize_t nt = len(costs)
    cdef Py_ssize_t width = n_places if n_places > 0 else 1
    cdef Py_ssize_t nbytes = n_places * sizeof(int)
    cdef int* c_pre_ptr = NULL
    cdef int* c_pre_idx = NULL
    cdef int* c_post_ptr = NULL
    cdef int* c_post_idx = NULL
    cdef int* c_costs = NULL
    cdef int* c_final = NULL
    cdef int* marks = NULL
    cdef int* child = NULL
    cdef i64* g = NULL
    cdef i64* h = NULL
    cdef int* parent = NULL
    cdef int* via = NULL
    cdef char* closed = NULL
    cdef Heap heap
    cdef Py_ssize_t n_states = 0, cap = 1024, ti, k, p, s, s2
    cdef int* cur
    cdef bint ok, is_final
    cdef i64 ng, seq = 0, cost
    cdef dict index = {}
    cdef bytes key
    cdef list path

    heap.items = NULL
    try:
        c_pre_ptr = _int_array(pre_ptr, nt + 1)
        c_pre_idx = _int_array(pre_idx, len(pre_idx))
        c_post_ptr = _int_array(post_ptr, nt + 1)
        c_post_idx = _int_array(post_idx, len(post_idx))
        c_costs = _int_array(costs, nt)
        c_final = _int_array(final, n_places)
        child = _int_array(init, n_places)

        marks = <int*> malloc(cap * width * sizeof(int))
        g = <i64*> malloc(cap * sizeof(i64))
        h = <i64*> malloc(cap * sizeof(i64))
        parent = <int*> malloc(cap * sizeof(int))
        via = <int*> malloc(cap * sizeof(int))
        closed = <char*> malloc(cap * sizeof(char))
        heap.cap = 1024
        heap.size = 0
        heap.items = <HeapItem*> malloc(heap.cap * sizeof(HeapItem))
        if (marks == NULL or g == NULL or h == NULL or parent == NULL or via == NULL
                or closed == NULL or heap.items == NULL):
            raise MemoryError()

        memcpy(marks, child, nbytes)
        index[PyBytes_FromStringAndSize(<char*> child, nbytes)] = 0
        g[0] = 0
        h[0] = heuristic(tuple(init)) if heuristic is not None else 0
        parent[0] = -1
        via[0] = -1
        closed[0] = 0
        n_states = 1
        _heap_push(&heap, h[0], seq, 0)
        seq += 1

        while heap.size > 0:
            s = _heap_pop(&heap)
            if closed[s]:
                continue
            closed[s] = 1
            cur = marks + s * width
            is_final = True
            for p in range(n_places):
                if cur[p] != c_final[p]:
                    is_final = False
                    break
            if is_final:
                cost = g[s]
                path = []
                while parent[s] >= 0:
                    path.append(via[s])
                    s = parent[s]
                path.reverse()
                return FOUND, cost, path, n_states

            for ti in range(nt):
                ok = True
                for k in range(c_pre_ptr[ti], c_pre_ptr[ti + 1]):
                    if cur[c_pre_idx[k]] == 0:
                        ok = False
                        break
                if not ok:
                    continue
                memcpy(child, cur, nbytes)
                for k in range(c_pre_ptr[ti], c_pre_ptr[ti + 1]):
                    child[c_pre_idx[k]] -= 1
                for k in range(c_post_ptr[ti], c_post_ptr[ti + 1]):
                    child[c_post_idx[k]] += 1
                ng = g[s] + c_costs[ti]
                key = PyBytes_FromStringAndSize(<char*> child, nbytes)
                found = index.get(key)
                if found is None:
                    s2 = n_states
                    if s2 >= max_states:
                        return CAP_EXCEEDED, -1, [], n_states
                    if s2 == cap:
                        cap *= 2
                        marks = <int*> realloc(marks, cap * width * sizeof(int))
                        g = <i64*> realloc(g, cap * sizeof(i64))
                        h = <i64*> realloc(h, cap * sizeof(i64))
                        parent = <int*> realloc(parent, cap * sizeof(int))
                        via = <int*> realloc(via, cap * sizeof(int))
                        closed = <char*> realloc(closed, cap * sizeof(char))
                        if (marks == NULL or g == NULL or h == NULL or parent == NULL
                                or via == NULL or closed == NULL):
                            raise MemoryError()
                        cur = marks + s * width
                    index[key] = s2
                    memcpy(marks + s2 * width, child, nbytes)
                    g[s2] = ng
                    if heuristic is not None:
                        h[s2] = heuristic(tuple([child[p] for p in range(n_places)]))
                    else:
                        h[s2] = 0
                    parent[s2] = s
                    via[s2] = ti
                    closed[s2] = 0
                    n_states += 1
                else:
                    s2 = found
                    if closed[s2] or ng >= g[s2]:
                        continue
                    g[s2] = ng
                    parent[s2] = s
                    via[s2] = ti
                _heap_push(&heap, ng + h[s2], seq, s2)
                seq += 1
        return UNREACHABLE, -1, [], n_states
    finally:
        free(c_pre_ptr)
        free(c_pre_idx)
        free(c_post_ptr)
        free(c_post_idx)
        free(c_costs)
        free(c_final)
        free(child)
        free(marks)
        free(g)
        free(h)
        free(parent)
        free(via)
        free(closed)
        free(heap.items)
