"""Exact linear algebra over the rationals, plus integer Smith form.

Matrices are lists of rows; entries are ints or fractions.Fraction.
Sizes here are small (ranks up to ~200), so plain Gauss-Jordan with exact
arithmetic is the right tool.  The integer mode is diagnostics only:
Smith-type invariant factors, no division.
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows, ncols):
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_cols).  Input rows are not modified.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of the right kernel, one vector per free column."""
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def in_row_span(rows, ncols, vec):
    """Is vec in the row span of rows?"""
    r0 = rank(rows, ncols)
    return rank(list(rows) + [vec], ncols) == r0


def span_contains_all(rows, ncols, vecs):
    r0 = rank(rows, ncols)
    return rank(list(rows) + list(vecs), ncols) == r0


def reduce_mod_rows(red, pivots, vec):
    """Reduce vec modulo an RREF row space; the result is supported on the
    free columns and is zero iff vec lies in the span."""
    v = [Fraction(x) for x in vec]
    for r, pc in enumerate(pivots):
        if v[pc] != 0:
            f = v[pc]
            v = [a - f * b for a, b in zip(v, red[r])]
    return v


class RationalSubspace:
    """Incrementally built subspace of Q^n with exact membership tests."""

    def __init__(self, ncols):
        self.ncols = ncols
        self.red = []
        self.pivots = []

    @property
    def dim(self):
        return len(self.pivots)

    def contains(self, vec):
        return all(x == 0 for x in reduce_mod_rows(self.red, self.pivots, vec))

    def add(self, vec):
        """Add a vector; returns True if the dimension grew."""
        v = reduce_mod_rows(self.red, self.pivots, vec)
        for c in range(self.ncols):
            if v[c] != 0:
                f = v[c]
                v = [x / f for x in v]
                for i in range(len(self.red)):
                    if self.red[i][c] != 0:
                        g = self.red[i][c]
                        self.red[i] = [a - g * b for a, b in zip(self.red[i], v)]
                at = 0
                while at < len(self.pivots) and self.pivots[at] < c:
                    at += 1
                self.red.insert(at, v)
                self.pivots.insert(at, c)
                return True
        return False


def mat_mul(a, b):
    n, k = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = [[Fraction(0)] * cols for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for j in range(k):
            x = ai[j]
            if x:
                bj = b[j]
                for c in range(cols):
                    if bj[c]:
                        oi[c] += x * bj[c]
    return out


def identity_matrix(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def smith_invariants(rows, ncols):
    """Invariant factors of an integer matrix (no division, classical
    pivot-and-reduce).  Returns the nonzero diagonal entries d1 | d2 | ...
    """
    m = [[int(x) for x in row] for row in rows]
    nrows = len(m)
    invs = []
    r = c = 0
    while r < nrows and c < ncols:
        # find a nonzero pivot in the remaining block
        pi, pj = None, None
        best = None
        for i in range(r, nrows):
            for j in range(c, ncols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < best):
                    best, pi, pj = abs(m[i][j]), i, j
        if pi is None:
            break
        m[r], m[pi] = m[pi], m[r]
        for row in m:
            row[c], row[pj] = row[pj], row[c]
        # clear the row and column by repeated remainder steps
        while True:
            dirty = False
            for i in range(r + 1, nrows):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    if m[i][c] != 0:
                        m[r], m[i] = m[i], m[r]
                        dirty = True
            for j in range(c + 1, ncols):
                if m[r][j] != 0:
                    q = m[r][j] // m[r][c]
                    for row in m:
                        row[j] -= q * row[c]
                    if m[r][j] != 0:
                        for row in m:
                            row[c], row[j] = row[j], row[c]
                        dirty = True
            if not dirty:
                break
        invs.append(abs(m[r][c]))
        r += 1
        c += 1
    # enforce divisibility d1 | d2 | ...
    import math
    changed = True
    while changed:
        changed = False
        for i in range(len(invs) - 1):
            a, b = invs[i], invs[i + 1]
            if b % a != 0:
                g = math.gcd(a, b)
                invs[i], invs[i + 1] = g, a * b // g
                changed = True
    return invs
