"""Column Hermite normal form over k[x].

Matrices are lists of rows of flint polynomials; the lattice is the
k[x]-span of the columns.  The canonical form is upper triangular with
monic diagonal pivots, and each entry above a pivot has degree below the
pivot sitting in its row.
"""
from ..errors import RankDeficient, NotContained
from . import polys


def columns(rows):
    if not rows:
        return []
    return [list(c) for c in zip(*rows)]


def from_columns(cols, n):
    return [[c[i] for c in cols] for i in range(n)]


def _reduce_above(F, H):
    """H is a list of pivot columns (column j has its pivot at row j)."""
    n = len(H)
    for j in range(n):
        col = H[j]
        for r in range(j - 1, -1, -1):
            if col[r].degree() >= H[r][r].degree():
                q = col[r] // H[r][r]
                col = [a - q * b for a, b in zip(col, H[r])]
        H[j] = col
    return H


def hnf_columns(F, cols, n):
    """Canonical pivot columns of the span of ``cols`` (each of length n)."""
    remaining = [list(c) for c in cols if any(e.degree() >= 0 for e in c)]
    piv = [None] * n
    for r in range(n - 1, -1, -1):
        nz = [c for c in remaining if c[r].degree() >= 0]
        zs = [c for c in remaining if c[r].degree() < 0]
        if not nz:
            raise RankDeficient(f"no pivot available in row {r}")
        while len(nz) > 1:
            nz.sort(key=lambda c: c[r].degree())
            p = nz[0]
            nxt = [p]
            for c in nz[1:]:
                q = c[r] // p[r]
                c2 = [a - q * b for a, b in zip(c, p)]
                if c2[r].degree() >= 0:
                    nxt.append(c2)
                elif any(e.degree() >= 0 for e in c2):
                    zs.append(c2)
            nz = nxt
        p = nz[0]
        lc = p[r].leading_coefficient()
        if lc != 1:
            p = [e / lc for e in p]
        piv[r] = p
        remaining = zs
    return _reduce_above(F, piv)


def poly_hnf(F, rows, n=None):
    """Column HNF of the n x m polynomial matrix ``rows``; returns n x n rows."""
    if n is None:
        n = len(rows)
    if len(rows) != n:
        raise ValueError("row count differs from declared rank")
    H = hnf_columns(F, columns(rows), n)
    return from_columns(H, n)


def is_hnf(F, rows):
    n = len(rows)
    for j in range(n):
        if rows[j][j].degree() < 0 or rows[j][j].leading_coefficient() != 1:
            return False
        for i in range(j + 1, n):
            if rows[i][j].degree() >= 0:
                return False
        for c in range(j + 1, n):
            if rows[j][c].degree() >= rows[j][j].degree():
                return False
    return True


def triangular_solve(F, H, v):
    """Polynomial x with H x = v, or None when x would need denominators.

    H is an upper-triangular HNF (rows), v a polynomial vector."""
    n = len(H)
    x = [None] * n
    v = list(v)
    for r in range(n - 1, -1, -1):
        acc = v[r]
        for j in range(r + 1, n):
            if H[r][j].degree() >= 0 and x[j].degree() >= 0:
                acc = acc - H[r][j] * x[j]
        q, rem = divmod(acc, H[r][r])
        if rem.degree() >= 0:
            return None
        x[r] = q
    return x


def contains(F, H, v):
    return triangular_solve(F, H, v) is not None


def det_degree(H):
    return sum(H[i][i].degree() for i in range(len(H)))


def lattice_index_length(F, outer, inner):
    """dim_k(outer / inner) for full-rank k[x]-lattices given by bases."""
    n = len(outer)
    O = outer if is_hnf(F, outer) else poly_hnf(F, outer, n)
    I = inner if is_hnf(F, inner) else poly_hnf(F, inner, n)
    for c in columns(I):
        if triangular_solve(F, O, c) is None:
            raise NotContained("inner lattice has a column outside the outer lattice")
    return det_degree(I) - det_degree(O)


def hnf_to_json(F, H):
    return [[polys.poly_to_json(F, e) for e in row] for row in H]


def hnf_key(F, H):
    return tuple(tuple(tuple(F.sort_key(c) for c in e.coeffs()) for e in row) for row in H)
