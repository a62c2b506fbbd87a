"""Fraction-free (Bareiss) elimination on integer matrices, pure Python.

Mirrors ``_bareiss.pyx`` line for line; used when the compiled module is
unavailable or ``METRIZED_PURE=1`` is set.
"""


def eliminate(M, ncols):
    """Forward Bareiss elimination of ``M`` in place over its first ``ncols`` columns.

    Rows may be longer than ``ncols`` (augmented right-hand sides) and there
    may be more rows than columns.  Returns the number of pivots found
    before the first column without one; equals ``ncols`` iff the
    coefficient block has full column rank.
    """
    m = len(M)
    if m == 0:
        return 0
    width = len(M[0])
    prev = 1
    for k in range(ncols):
        piv = k
        while piv < m and M[piv][k] == 0:
            piv += 1
        if piv >= m:
            return k
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        rowk = M[k]
        p = rowk[k]
        for i in range(k + 1, m):
            rowi = M[i]
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


def back_substitute(M, n):
    """Solve the upper-triangular top ``n`` rows left by :func:`eliminate`.

    Returns ``(D, X)`` with ``X[i][c] / D`` the solution for right-hand side
    column ``c``.  ``D`` is the last pivot, which by Cramer's rule clears
    every denominator, so all divisions are exact.
    """
    if n == 0:
        return 1, []
    width = len(M[0])
    D = M[n - 1][n - 1]
    X = [None] * n
    for i in range(n - 1, -1, -1):
        row = M[i]
        piv = row[i]
        out = []
        for c in range(n, width):
            s = D * row[c]
            for j in range(i + 1, n):
                s -= row[j] * X[j][c - n]
            out.append(s // piv)
        X[i] = out
    return D, X
