"""Dense numpy arrays of field scalars.

Over F_p arrays are int64 reduced into [0, p); over Q they are object
arrays of fmpq.  Exact linear algebra is delegated to flint.  The int64
path requires p^2 times the inner dimension to stay below 2^63, which
holds comfortably for the primes and sizes used here.
"""
import flint
import numpy as np

_I64_SAFE = 1 << 62
_F64_EXACT = 1 << 53
_NUMPY_RREF_P = 1 << 31
_FLINT_MATMUL = 512


def is_modular(F):
    return not F.is_rational


def zeros(F, shape):
    if is_modular(F):
        return np.zeros(shape, dtype=np.int64)
    a = np.empty(shape, dtype=object)
    a.fill(flint.fmpq(0))
    return a


def asarray(F, data):
    """Array from nested lists of flint scalars or python ints."""
    if is_modular(F):
        a = np.array(data, dtype=object)
        f = np.frompyfunc(int, 1, 1)
        return np.asarray(f(a) if a.size else a, dtype=np.int64).reshape(a.shape) % F.characteristic
    a = np.array(data, dtype=object)
    if a.size:
        f = np.frompyfunc(flint.fmpq, 1, 1)
        a = f(a)
    return a.astype(object)


def red(F, a):
    if is_modular(F):
        return a % F.characteristic
    return a


def matmul(F, a, b):
    if is_modular(F):
        p = F.characteristic
        k = a.shape[-1]
        if k * (p - 1) * (p - 1) < _F64_EXACT:
            # float64 products and sums stay exact integers below 2^53
            c = np.matmul(a.astype(np.float64), b.astype(np.float64))
            return c.astype(np.int64) % p
        if k * (p - 1) * (p - 1) < _I64_SAFE:
            return np.matmul(a, b) % p
        return (np.matmul(a.astype(object), b.astype(object)) % p).astype(np.int64)
    if a.ndim == 2 and b.ndim == 2 and a.shape[0] * a.shape[1] * b.shape[1] > _FLINT_MATMUL:
        if a.shape[1] == 0:
            return zeros(F, (a.shape[0], b.shape[1]))
        return from_flint(F, to_flint(F, a) * to_flint(F, b))
    return np.matmul(a, b)


def scalar_mul(F, c, a):
    if is_modular(F):
        return (int(c) * a) % F.characteristic
    return a * flint.fmpq(c)


def neg(F, a):
    return red(F, -a)


def to_flint(F, a):
    m, n = a.shape
    if is_modular(F):
        return flint.nmod_mat(m, n, a.ravel().tolist(), F.characteristic)
    return flint.fmpq_mat(m, n, a.ravel().tolist())


def from_flint(F, M):
    m, n = M.nrows(), M.ncols()
    e = M.entries()
    if is_modular(F):
        return np.array([int(x) for x in e], dtype=np.int64).reshape(m, n)
    out = np.empty(m * n, dtype=object)
    out[:] = e
    return out.reshape(m, n)


def _rref_mod(a, p):
    """Gauss-Jordan elimination mod a prime p < 2^31 on int64 arrays."""
    A = a % p
    m, n = A.shape
    piv, r = [], 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if not len(nz):
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r, c:] = (A[r, c:] * pow(int(A[r, c]), p - 2, p)) % p
        f = A[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if len(rows):
            A[rows, c:] = (A[rows, c:] - np.outer(f[rows], A[r, c:])) % p
        piv.append(c)
        r += 1
    return A[:r], piv


def rref(F, a):
    """(rows, pivots) of the reduced echelon form; zero rows dropped."""
    m, n = a.shape
    if m == 0 or n == 0:
        return zeros(F, (0, n)), []
    if is_modular(F) and F.characteristic < _NUMPY_RREF_P:
        keep = np.any(a != 0, axis=1)
        return _rref_mod(a[keep], F.characteristic)
    R, r = to_flint(F, a).rref()
    R = from_flint(F, R)[:r]
    piv = []
    for i in range(r):
        nz = np.flatnonzero(R[i] != 0)
        piv.append(int(nz[0]))
    return R, piv


def rank(F, a):
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    if is_modular(F) and F.characteristic < _NUMPY_RREF_P:
        return len(rref(F, a)[1])
    return to_flint(F, a).rank()


def nullspace(F, a, ncols=None):
    """Rows spanning {v : a v = 0}."""
    n = a.shape[1] if ncols is None else ncols
    if a.shape[0] == 0:
        return identity(F, n)
    R, piv = rref(F, a)
    free = [j for j in range(n) if j not in set(piv)]
    out = zeros(F, (len(free), n))
    one = 1 if is_modular(F) else flint.fmpq(1)
    for k, f in enumerate(free):
        out[k, f] = one
        for row, p in zip(R, piv):
            out[k, p] = red(F, -row[f]) if is_modular(F) else -row[f]
    return out


def left_nullspace(F, a):
    """Rows w with w a = 0."""
    return nullspace(F, a.T.copy())


def identity(F, n):
    if is_modular(F):
        return np.eye(n, dtype=np.int64)
    out = zeros(F, (n, n))
    for i in range(n):
        out[i, i] = flint.fmpq(1)
    return out


def inv(F, a):
    M = to_flint(F, a)
    try:
        return from_flint(F, M.inv())
    except (ZeroDivisionError, ValueError):
        raise ZeroDivisionError("singular matrix")


def reduce_rows(F, v, R, piv):
    """v minus its projection on the RREF rows R (pivot coordinates cleared)."""
    if len(piv) == 0:
        return v.copy()
    c = v[:, piv]
    return red(F, v - matmul(F, c, R))


def solve_rows(F, basis, targets):
    """Coefficients c with c @ basis = targets; basis rows independent.

    Raises ValueError when some target is not in the row span."""
    R, piv = rref(F, basis)
    if len(piv) != basis.shape[0]:
        raise ValueError("basis rows are dependent")
    S = basis[:, piv]
    c = matmul(F, targets[:, piv], inv(F, S))
    back = matmul(F, c, basis)
    if not np.array_equal(red(F, back - targets) != 0, np.zeros(back.shape, dtype=bool)):
        raise ValueError("target outside the span")
    return c


def scalar(F, x):
    if is_modular(F):
        return int(x) % F.characteristic
    return flint.fmpq(x)


def to_scalars(F, row):
    """Python list of flint field scalars."""
    return [F(int(x)) if is_modular(F) else x for x in row]
