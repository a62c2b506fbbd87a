# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_bareiss_py``: same algorithm, typed loop indices.

Entries stay arbitrary-precision Python ints; the speed-up comes from
removing interpreter dispatch around the inner update.
"""


def eliminate(list M, Py_ssize_t ncols):
    cdef Py_ssize_t m = len(M)
    if m == 0:
        return 0
    cdef Py_ssize_t width = len(<list>M[0])
    cdef Py_ssize_t k, piv, i, j
    cdef list rowk, rowi
    cdef object p, a, prev = 1
    for k in range(ncols):
        piv = k
        while piv < m and (<list>M[piv])[k] == 0:
            piv += 1
        if piv >= m:
            return k
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        rowk = <list>M[k]
        p = rowk[k]
        for i in range(k + 1, m):
            rowi = <list>M[i]
            a = rowi[k]
            if a == 0:
                if prev == p:
                    continue
                for j in range(k + 1, width):
                    rowi[j] = (p * rowi[j]) // prev
            else:
                for j in range(k + 1, width):
                    rowi[j] = (p * rowi[j] - a * rowk[j]) // prev
            rowi[k] = 0
        prev = p
    return ncols


def back_substitute(list M, Py_ssize_t n):
    if n == 0:
        return 1, []
    cdef Py_ssize_t width = len(<list>M[0])
    cdef Py_ssize_t i, j, c
    cdef list row, out
    cdef object D = (<list>M[n - 1])[n - 1]
    cdef object s, piv
    cdef list X = [None] * n
    for i in range(n - 1, -1, -1):
        row = <list>M[i]
        piv = row[i]
        out = []
        for c in range(n, width):
            s = D * row[c]
            for j in range(i + 1, n):
                s -= row[j] * (<list>X[j])[c - n]
            out.append(s // piv)
        X[i] = out
    return D, X
