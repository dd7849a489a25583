# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``_pykernels``."""

from libc.stdlib cimport malloc, realloc, free

BACKEND = "cython"

DEF UNDEF = -1


def free_reduce(codes):
    cdef list stack = []
    cdef Py_ssize_t top = 0
    cdef long c
    for c in codes:
        if top and <long>stack[top - 1] == (c ^ 1):
            stack.pop()
            top -= 1
        else:
            stack.append(c)
            top += 1
    return stack


def pieces(words):
    """Nonempty maximal common prefixes over pairs of distinct words; in
    sorted order adjacent pairs suffice."""
    cdef list ws = sorted(set(tuple(w) for w in words))
    cdef Py_ssize_t n = len(ws), i, k, m
    cdef tuple a, b
    cdef set out = set()
    for i in range(n - 1):
        a = ws[i]
        b = ws[i + 1]
        m = min(len(a), len(b))
        k = 0
        while k < m and <long>a[k] == <long>b[k]:
            k += 1
        if k:
            out.add(a[:k])
    return out


cdef class _Enum:
    cdef int ncols
    cdef long cap
    cdef long n
    cdef long max_cosets
    cdef long *table
    cdef long *parent
    cdef long *queue
    cdef long qlen
    cdef bint overflow

    def __cinit__(self, int ncols, long max_cosets):
        self.ncols = ncols
        self.max_cosets = max_cosets
        self.cap = 64 if max_cosets > 64 else max_cosets
        self.n = 0
        self.table = <long *> malloc(self.cap * ncols * sizeof(long))
        self.parent = <long *> malloc(self.cap * sizeof(long))
        self.queue = <long *> malloc(self.cap * sizeof(long))
        if self.table == NULL or self.parent == NULL or self.queue == NULL:
            raise MemoryError()
        self.overflow = False

    def __dealloc__(self):
        free(self.table)
        free(self.parent)
        free(self.queue)

    cdef bint grow(self) except -1:
        cdef long newcap = self.cap * 2
        if newcap > self.max_cosets:
            newcap = self.max_cosets
        self.table = <long *> realloc(self.table, newcap * self.ncols * sizeof(long))
        self.parent = <long *> realloc(self.parent, newcap * sizeof(long))
        self.queue = <long *> realloc(self.queue, newcap * sizeof(long))
        if self.table == NULL or self.parent == NULL or self.queue == NULL:
            raise MemoryError()
        self.cap = newcap
        return True

    cdef long new_coset(self) except -2:
        cdef long b, x
        if self.n >= self.max_cosets:
            self.overflow = True
            return -1
        if self.n >= self.cap:
            self.grow()
        b = self.n
        self.n += 1
        for x in range(self.ncols):
            self.table[b * self.ncols + x] = UNDEF
        self.parent[b] = b
        return b

    cdef inline long rep(self, long c):
        cdef long root = c, nxt
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            nxt = self.parent[c]
            self.parent[c] = root
            c = nxt
        return root

    cdef bint define(self, long c, int x) except -1:
        cdef long b = self.new_coset()
        if b < 0:
            return False
        self.table[c * self.ncols + x] = b
        self.table[b * self.ncols + (x ^ 1)] = c
        return True

    cdef void merge(self, long k, long l):
        cdef long a = self.rep(k), b = self.rep(l), tmp
        if a != b:
            if a > b:
                tmp = a
                a = b
                b = tmp
            self.parent[b] = a
            self.queue[self.qlen] = b
            self.qlen += 1

    cdef void coincidence(self, long a, long b):
        cdef long i = 0, g, d, mu, nu
        cdef int x
        cdef int nc = self.ncols
        cdef long *T = self.table
        self.qlen = 0
        self.merge(a, b)
        while i < self.qlen:
            g = self.queue[i]
            i += 1
            for x in range(nc):
                d = T[g * nc + x]
                if d == UNDEF:
                    continue
                T[d * nc + (x ^ 1)] = UNDEF
                mu = self.rep(g)
                nu = self.rep(d)
                if T[mu * nc + x] != UNDEF:
                    self.merge(nu, T[mu * nc + x])
                elif T[nu * nc + (x ^ 1)] != UNDEF:
                    self.merge(mu, T[nu * nc + (x ^ 1)])
                else:
                    T[mu * nc + x] = nu
                    T[nu * nc + (x ^ 1)] = mu

    cdef bint scan_and_fill(self, long c, long *w, long length) except -1:
        cdef long f = c, b = c, i = 0, j = length - 1
        cdef int nc = self.ncols
        while True:
            while i <= j and self.table[f * nc + w[i]] != UNDEF:
                f = self.table[f * nc + w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return True
            while j >= i and self.table[b * nc + (w[j] ^ 1)] != UNDEF:
                b = self.table[b * nc + (w[j] ^ 1)]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                self.table[f * nc + w[i]] = b
                self.table[b * nc + (w[i] ^ 1)] = f
                return True
            if not self.define(f, w[i]):
                return False


def coset_enumerate(n_gens, relators, subgroup, max_cosets):
    cdef int ncols = 2 * n_gens
    cdef _Enum e = _Enum(ncols, max_cosets)
    cdef list rels = [list(r) for r in relators if len(r)]
    cdef list subs = [list(h) for h in subgroup if len(h)]
    cdef Py_ssize_t nr = len(rels), total = 0, i, k
    cdef long *buf
    cdef long *offs
    cdef long a, x
    for r in rels:
        total += len(r)
    for h in subs:
        total += len(h)
    buf = <long *> malloc((total + 1) * sizeof(long))
    offs = <long *> malloc((nr + len(subs) + 1) * sizeof(long))
    if buf == NULL or offs == NULL:
        free(buf)
        free(offs)
        raise MemoryError()
    try:
        total = 0
        for i, r in enumerate(rels + subs):
            offs[i] = total
            for k in range(len(r)):
                buf[total + k] = r[k]
            total += len(r)
        offs[nr + len(subs)] = total
        e.new_coset()
        for i in range(len(subs)):
            if not e.scan_and_fill(0, buf + offs[nr + i], offs[nr + i + 1] - offs[nr + i]):
                return False, None
        a = 0
        while a < e.n:
            if e.parent[a] == a:
                for i in range(nr):
                    if not e.scan_and_fill(a, buf + offs[i], offs[i + 1] - offs[i]):
                        return False, None
                    if e.parent[a] != a:
                        break
                if e.parent[a] == a:
                    for x in range(ncols):
                        if e.table[a * ncols + x] == UNDEF and not e.define(a, x):
                            return False, None
            a += 1
        live = [c for c in range(e.n) if e.parent[c] == c]
        index = {c: j for j, c in enumerate(live)}
        out = [[index[e.rep(e.table[c * ncols + x])] for x in range(ncols)] for c in live]
        return True, out
    finally:
        free(buf)
        free(offs)
