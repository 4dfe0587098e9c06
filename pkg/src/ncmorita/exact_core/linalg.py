"""Exact linear algebra over the base field, backed by flint matrices.

Vectors are python lists of field scalars; matrices are lists of rows.
"""
import flint


def mat(F, rows, ncols=None):
    return F.matrix(rows, ncols)


def rows_of(M):
    m, n = M.nrows(), M.ncols()
    e = M.entries()
    return [list(e[i * n:(i + 1) * n]) for i in range(m)]


def rref(F, rows, ncols=None):
    """Reduced row echelon form of the row list.

    Returns (nonzero rows, pivot columns)."""
    if not rows:
        return [], []
    M = F.matrix(rows, ncols)
    R, r = M.rref()
    n = M.ncols()
    e = R.entries()
    out, piv = [], []
    for i in range(r):
        row = list(e[i * n:(i + 1) * n])
        for j in range(n):
            if row[j] != 0:
                piv.append(j)
                break
        out.append(row)
    return out, piv


def rank(F, rows, ncols=None):
    if not rows:
        return 0
    return F.matrix(rows, ncols).rank()


def nullspace(F, rows, ncols):
    """Basis of {v : M v = 0} in reduced echelon form (one vector per free column)."""
    if not rows:
        return [[F.one if i == j else F.zero for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(F, rows, ncols)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [F.zero] * ncols
        v[f] = F.one
        for row, p in zip(R, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def left_nullspace(F, rows, ncols):
    """Basis of {w : w M = 0}."""
    m = len(rows)
    if m == 0:
        return []
    cols = [[rows[i][j] for i in range(m)] for j in range(ncols)]
    return nullspace(F, cols, m)


def transpose(rows, ncols=None):
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*rows)]


def solve_left(F, basis_rows, target_rows):
    """Coefficients c with c * basis = target, one per target row.

    The basis rows must be independent.  Raises ValueError when a target
    lies outside the row span."""
    if not target_rows:
        return []
    m = len(basis_rows)
    if m == 0:
        for t in target_rows:
            if any(x != 0 for x in t):
                raise ValueError("not in span")
        return [[] for _ in target_rows]
    n = len(basis_rows[0])
    sel = _independent_columns(F, basis_rows, n)
    if len(sel) != m:
        raise ValueError("basis rows are dependent")
    inv = F.matrix([[basis_rows[i][j] for j in sel] for i in range(m)], m).inv()
    T = F.matrix([[t[j] for j in sel] for t in target_rows], m)
    C = T * inv
    back = C * F.matrix(basis_rows, n)
    if back != F.matrix(target_rows, n):
        raise ValueError("not in span")
    return rows_of(C)


def _independent_columns(F, rows, ncols):
    _, piv = rref(F, rows, ncols)
    return piv


def in_span(F, echelon_rows, pivots, v):
    r = list(v)
    for row, p in zip(echelon_rows, pivots):
        c = r[p]
        if c != 0:
            r = [a - c * b for a, b in zip(r, row)]
    return all(x == 0 for x in r)


def inverse(F, rows):
    M = F.matrix(rows)
    try:
        return rows_of(M.inv())
    except (ZeroDivisionError, ValueError):
        raise ZeroDivisionError("singular matrix")


def matmul(F, A, B):
    if not A or not B:
        return [[F.zero] * (len(B[0]) if B else 0) for _ in A]
    return rows_of(F.matrix(A) * F.matrix(B))


def identity(F, n):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def is_fmpq(x):
    return isinstance(x, flint.fmpq)
