# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the kernels in _pykernels."""

from libc.stdlib cimport malloc, free

cdef long long _LIMIT = 1 << 62


def conv_trunc(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t size, i, j, stop
    cdef long long *ca
    cdef long long *cb
    cdef long long *co
    cdef long long ai
    if la == 0 or lb == 0:
        return []
    size = la + lb - 1
    if n < size:
        size = n
    if size <= 0:
        return []

    maxa = max(abs(v) for v in a)
    maxb = max(abs(v) for v in b)
    terms = la if la < lb else lb
    if maxa < _LIMIT and maxb < _LIMIT and maxa * maxb * terms < _LIMIT:
        ca = <long long *> malloc(la * sizeof(long long))
        cb = <long long *> malloc(lb * sizeof(long long))
        co = <long long *> malloc(size * sizeof(long long))
        if ca == NULL or cb == NULL or co == NULL:
            free(ca)
            free(cb)
            free(co)
            raise MemoryError()
        try:
            for i in range(la):
                ca[i] = a[i]
            for j in range(lb):
                cb[j] = b[j]
            for i in range(size):
                co[i] = 0
            for i in range(la if la < size else size):
                ai = ca[i]
                if ai == 0:
                    continue
                stop = lb if lb < size - i else size - i
                for j in range(stop):
                    co[i + j] += ai * cb[j]
            return [co[i] for i in range(size)]
        finally:
            free(ca)
            free(cb)
            free(co)

    cdef list out = [0] * size
    for i in range(la if la < size else size):
        av = a[i]
        if not av:
            continue
        stop = lb if lb < size - i else size - i
        for j in range(stop):
            bv = b[j]
            if bv:
                out[i + j] += av * bv
    return out


