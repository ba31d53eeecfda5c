# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same signatures and outputs as ``amor._pykernels``."""
from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t

BACKEND = "cython"

cdef int RESAMPLE_CAP = 100

cdef uint64_t GOLDEN_GAMMA = 0x9E3779B97F4A7C15ULL
cdef object TWO64 = 2**64


cdef inline uint64_t _next(uint64_t* state) noexcept nogil:
    state[0] += GOLDEN_GAMMA
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef struct Model:
    int n
    uint64_t* thresh
    char* always
    int n_tog
    int* tog
    int n_adj
    int* adj
    char* vis
    int* buf
    int* pos


cdef int _load(Model* m, thresholds, together, adjacent) except -1:
    cdef int i
    m.n = len(thresholds)
    m.n_tog = len(together)
    m.n_adj = len(adjacent)
    m.thresh = <uint64_t*> malloc(max(m.n, 1) * sizeof(uint64_t))
    m.always = <char*> malloc(max(m.n, 1))
    m.tog = <int*> malloc(max(2 * m.n_tog, 1) * sizeof(int))
    m.adj = <int*> malloc(max(2 * m.n_adj, 1) * sizeof(int))
    m.vis = <char*> malloc(max(m.n, 1))
    m.buf = <int*> malloc(max(m.n, 1) * sizeof(int))
    m.pos = <int*> malloc(max(m.n, 1) * sizeof(int))
    if not (m.thresh and m.always and m.tog and m.adj and m.vis and m.buf and m.pos):
        _release(m)
        raise MemoryError()
    for i in range(m.n):
        t = thresholds[i]
        if t >= TWO64:
            m.always[i] = 1
            m.thresh[i] = 0
        else:
            m.always[i] = 0
            m.thresh[i] = <uint64_t> t
    for i in range(m.n_tog):
        m.tog[2 * i] = together[i][0]
        m.tog[2 * i + 1] = together[i][1]
    for i in range(m.n_adj):
        m.adj[2 * i] = adjacent[i][0]
        m.adj[2 * i + 1] = adjacent[i][1]
    return 0


cdef void _release(Model* m) noexcept:
    free(m.thresh)
    free(m.always)
    free(m.tog)
    free(m.adj)
    free(m.vis)
    free(m.buf)
    free(m.pos)


cdef int _draw(Model* m, uint64_t* state) noexcept nogil:
    """Fill m.vis; return number visible."""
    cdef int i, a, b, k = 0
    cdef uint64_t u
    for i in range(m.n):
        u = _next(state)
        m.vis[i] = 1 if (m.always[i] or u < m.thresh[i]) else 0
    for i in range(m.n_tog):
        a = m.tog[2 * i]
        b = m.tog[2 * i + 1]
        if m.vis[a] and m.vis[b]:
            u = _next(state)
            if u % 2 == 0:
                m.vis[a] = 0
            else:
                m.vis[b] = 0
    for i in range(m.n):
        k += m.vis[i]
    return k


cdef int _sample_visible(Model* m, uint64_t* state) noexcept nogil:
    """Write visible indices (input order) into m.buf; return count."""
    cdef int attempt, i, a, b, k = 0
    for attempt in range(1 + RESAMPLE_CAP):
        if _draw(m, state) > 0:
            break
    else:
        for i in range(m.n):
            m.vis[i] = 1
        for i in range(m.n_tog):
            a = m.tog[2 * i]
            b = m.tog[2 * i + 1]
            if m.vis[a] and m.vis[b]:
                m.vis[b] = 0
    for i in range(m.n):
        if m.vis[i]:
            m.buf[k] = i
            k += 1
    return k


cdef inline void _shuffle(int* arr, int k, uint64_t* state) noexcept nogil:
    cdef int i, j, tmp
    for i in range(k - 1, 0, -1):
        j = <int> (_next(state) % <uint64_t> (i + 1))
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp


cdef int _first_violation(Model* m, int* frame, int k) noexcept nogil:
    cdef int i, a, b, d
    for i in range(m.n):
        m.pos[i] = -1
    for i in range(k):
        m.pos[frame[i]] = i
    for i in range(m.n_tog):
        if m.pos[m.tog[2 * i]] >= 0 and m.pos[m.tog[2 * i + 1]] >= 0:
            return i
    for i in range(m.n_adj):
        a = m.pos[m.adj[2 * i]]
        b = m.pos[m.adj[2 * i + 1]]
        if a >= 0 and b >= 0:
            d = a - b
            if d == 1 or d == -1:
                return m.n_tog + i
    return -1


def splitmix64_next(state):
    cdef uint64_t s = state
    cdef uint64_t u = _next(&s)
    return s, u


def shuffle_indices(state, items):
    cdef uint64_t s = state
    cdef int k = len(items), i
    cdef int* arr = <int*> malloc(max(k, 1) * sizeof(int))
    if not arr:
        raise MemoryError()
    try:
        for i in range(k):
            arr[i] = items[i]
        _shuffle(arr, k, &s)
        return s, [arr[i] for i in range(k)]
    finally:
        free(arr)


def sample_visible(state, thresholds, together):
    cdef uint64_t s = state
    cdef Model m
    cdef int k, i
    _load(&m, thresholds, together, ())
    try:
        k = _sample_visible(&m, &s)
        return s, [m.buf[i] for i in range(k)]
    finally:
        _release(&m)


def sample_frames(state, thresholds, together, adjacent, count, attempt_cap):
    cdef uint64_t s = state
    cdef Model m
    cdef int f, attempt, k, bad, c, worst, i
    cdef int n_frames = count, cap = attempt_cap
    cdef int* hits
    frames = []
    _load(&m, thresholds, together, adjacent)
    cdef int n_pairs = m.n_tog + m.n_adj
    hits = <int*> malloc(max(n_pairs, 1) * sizeof(int))
    if not hits:
        _release(&m)
        raise MemoryError()
    try:
        for f in range(n_frames):
            for c in range(n_pairs):
                hits[c] = 0
            bad = 0
            for attempt in range(cap):
                k = _sample_visible(&m, &s)
                _shuffle(m.buf, k, &s)
                bad = _first_violation(&m, m.buf, k)
                if bad < 0:
                    break
                hits[bad] += 1
            if bad < 0 and cap > 0:
                frames.append(tuple([m.buf[i] for i in range(k)]))
            else:
                worst = -1
                for c in range(n_pairs):
                    if worst < 0 or hits[c] > hits[worst]:
                        worst = c
                return s, frames, (f, worst)
        return s, frames, None
    finally:
        free(hits)
        _release(&m)


def enumerate_valid(n, together, adjacent):
    cdef Model m
    cdef int i, j, tmp, nn = n
    out = []
    _load(&m, [TWO64] * nn, together, adjacent)
    try:
        for i in range(nn):
            m.buf[i] = i
        while True:
            if _first_violation(&m, m.buf, nn) < 0:
                out.append(tuple([m.buf[i] for i in range(nn)]))
            # next lexicographic permutation
            i = nn - 2
            while i >= 0 and m.buf[i] >= m.buf[i + 1]:
                i -= 1
            if i < 0:
                break
            j = nn - 1
            while m.buf[j] <= m.buf[i]:
                j -= 1
            tmp = m.buf[i]; m.buf[i] = m.buf[j]; m.buf[j] = tmp
            i += 1
            j = nn - 1
            while i < j:
                tmp = m.buf[i]; m.buf[i] = m.buf[j]; m.buf[j] = tmp
                i += 1
                j -= 1
        return out
    finally:
        _release(&m)


def shuffle_many(seeds, n):
    cdef int k = n, i
    cdef uint64_t s
    cdef int* arr = <int*> malloc(max(k, 1) * sizeof(int))
    if not arr:
        raise MemoryError()
    out = []
    try:
        for seed in seeds:
            s = seed
            for i in range(k):
                arr[i] = i
            _shuffle(arr, k, &s)
            out.append(tuple([arr[i] for i in range(k)]))
        return out
    finally:
        free(arr)


def position_counts(frames, n):
    cdef int nn = n, p, a
    cdef long* counts = <long*> malloc(max(nn * nn, 1) * sizeof(long))
    if not counts:
        raise MemoryError()
    try:
        for p in range(nn * nn):
            counts[p] = 0
        for frame in frames:
            p = 0
            for a in frame:
                if a < 0 or a >= nn or p >= nn:
                    raise IndexError(f"author index {a} at position {p} outside 0..{nn - 1}")
                counts[a * nn + p] += 1
                p += 1
        return [[counts[a * nn + p] for p in range(nn)] for a in range(nn)]
    finally:
        free(counts)
