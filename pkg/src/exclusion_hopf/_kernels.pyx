# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled multiplication kernel for cyclotomic coefficient vectors.

Products are computed in 64-bit integers when a conservative magnitude bound
guarantees no overflow; otherwise the pure-Python kernel is used.
"""

from libc.stdlib cimport malloc, free

from ._pykernels import mulmod_py

DEF MAXN = 256
cdef long long _LIMIT = 1LL << 62


cdef class MulKernel:
    cdef int _n
    cdef long long *rows
    cdef object growth
    cdef object _sparse

    compiled = True

    def __cinit__(self, high_rows, int n):
        cdef int nrows = len(high_rows)
        cdef int e, i
        self._n = n
        self.rows = <long long *> malloc(max(nrows, 1) * n * sizeof(long long))
        if self.rows == NULL:
            raise MemoryError()
        growth = 1
        for e in range(nrows):
            row = high_rows[e]
            growth += max([abs(v) for v in row] + [0])
            for i in range(n):
                self.rows[e * n + i] = row[i]
        self.growth = growth
        self._sparse = [
            tuple((i, v) for i, v in enumerate(row) if v) for row in high_rows
        ]

    def __dealloc__(self):
        if self.rows != NULL:
            free(self.rows)

    @property
    def n(self):
        return self._n

    def mul(self, a, b):
        cdef int n = self._n
        cdef long long ca[MAXN]
        cdef long long cb[MAXN]
        cdef long long conv[2 * MAXN]
        cdef int i, j, e
        cdef long long x, c
        amax = max(map(abs, a))
        bmax = max(map(abs, b))
        if amax == 0 or bmax == 0:
            return (0,) * n
        if n > MAXN or amax * bmax * n * self.growth >= _LIMIT:
            return mulmod_py(a, b, self._sparse, n)
        for i in range(n):
            ca[i] = a[i]
            cb[i] = b[i]
        for i in range(2 * n - 1):
            conv[i] = 0
        for i in range(n):
            x = ca[i]
            if x != 0:
                for j in range(n):
                    conv[i + j] += x * cb[j]
        for e in range(n, 2 * n - 1):
            c = conv[e]
            if c != 0:
                for i in range(n):
                    conv[i] += c * self.rows[(e - n) * n + i]
        return tuple([conv[i] for i in range(n)])
