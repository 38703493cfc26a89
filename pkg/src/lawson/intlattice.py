"""Exact integer row-lattice algebra: Hermite and Smith normal forms.

Matrices are lists of rows of Python ints, so intermediate coefficient
growth never overflows.
"""

from __future__ import annotations


def _copy(m):
    return [list(map(int, row)) for row in m]


def hermite_normal_form(rows):
    """Row-style HNF of the lattice spanned by ``rows``.

    Returns the nonzero rows in echelon form with positive pivots and
    entries above each pivot reduced into ``[0, pivot)``.
    """
    m = _copy(rows)
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # Euclid on column c among rows r..end
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[piv] = m[piv], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    return [row for row in m[:r] if any(row)]


def reduce_vector(v, hnf):
    """Reduce ``v`` modulo the lattice with HNF basis ``hnf``.

    The result is zero exactly when ``v`` lies in the lattice.
    """
    v = list(map(int, v))
    for row in hnf:
        c = next(j for j, a in enumerate(row) if a)
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return v


def in_lattice(v, hnf) -> bool:
    return not any(reduce_vector(v, hnf))


def smith_normal_form(rows):
    """Diagonal of the Smith normal form (invariant factors, zeros dropped)."""
    m = _copy(rows)
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    diag = []
    t = 0
    while t < min(nr, nc):
        nz = [(abs(m[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if m[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = m[t][t]
            changed = False
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // p
                    m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                    if m[i][t]:
                        changed = True
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // p
                    for row in m:
                        row[j] -= q * row[t]
                    if m[t][j]:
                        changed = True
            if not changed:
                # divisibility condition on the remaining block
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                            if m[i][j] % p), None)
                if bad is None:
                    break
                m[t] = [a + b for a, b in zip(m[t], m[bad[0]])]
                continue
            nz = [(abs(m[i][j]), i, j) for i in range(t, nr) for j in range(t, nc)
                  if m[i][j] and (i == t or j == t)]
            _, pi, pj = min(nz)
            m[t], m[pi] = m[pi], m[t]
            for row in m:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(m[t][t]))
        t += 1
    return diag
