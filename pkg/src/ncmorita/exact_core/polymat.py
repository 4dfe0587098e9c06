"""Determinants and adjugates of small polynomial and Laurent matrices."""
import numpy as np

from . import dense


def bareiss_det(F, M):
    """Determinant of a square matrix of flint polynomials (fraction-free)."""
    n = len(M)
    if n == 0:
        return F.poly([1])
    A = [list(r) for r in M]
    sign = 1
    prev = F.poly([1])
    for k in range(n - 1):
        if A[k][k].degree() < 0:
            sw = next((i for i in range(k + 1, n) if A[i][k].degree() >= 0), None)
            if sw is None:
                return F.poly([])
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                q, r = divmod(num, prev)
                assert r.degree() < 0
                A[i][j] = q
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return d if sign == 1 else -d


def adjugate(F, M):
    n = len(M)
    if n == 1:
        return [[F.poly([1])]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            d = bareiss_det(F, minor)
            out[i][j] = d if (i + j) % 2 == 0 else -d
    return out


def _val(f):
    for i, c in enumerate(f.coeffs()):
        if c != 0:
            return i
    return None


def laurent_adjugate(F, U, lo):
    """(adj array, adj offset, valuation of det) for a natural matrix array U (n, n, W) at lo.

    Writing U = t^lo P with P polynomial: adj U = t^(lo (n-1)) adj P and
    det U = t^(lo n) det P."""
    n = U.shape[0]
    P = [[F.poly(dense.to_scalars(F, U[i, j])) for j in range(n)] for i in range(n)]
    det = bareiss_det(F, P)
    if det.degree() < 0:
        raise ZeroDivisionError("singular matrix")
    adj = adjugate(F, P)
    W = max(1, max(a.degree() + 1 for row in adj for a in row))
    out = dense.zeros(F, (n, n, W))
    for i in range(n):
        for j in range(n):
            for e, c in enumerate(adj[i][j].coeffs()):
                out[i, j, e] = dense.scalar(F, c)
    return out, lo * (n - 1), lo * n + _val(det)
