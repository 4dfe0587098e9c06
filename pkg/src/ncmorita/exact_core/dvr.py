"""Lattices over the valuation ring k[[t]] and their canonical form.

A full lattice L in k((t))^N with t^hi R^N inside L and L inside t^lo R^N
is the same thing as a t-stable k-subspace of the window
t^lo R^N / t^hi R^N.  Ordering window coordinates by (row descending,
exponent ascending) makes the reduced row echelon basis of that subspace
contain exactly the canonical columns: the vector leading at (r, e_r) has
entry t^e_r in row r, zeros below, and entries above reduced below the
pivot of their row.  All canonical data is therefore exact.

Vectors are numpy arrays of shape (m, N, W): generator, coordinate,
exponent offset from ``lo``.  Truncated generators (known modulo t^P) are
handled by Nakayama: the span W = L + t^P R^N equals L as soon as
t^(P-1) R^N lies in W, which the echelon form shows directly.
"""
import numpy as np

from ..errors import PrecisionExhausted, RankDeficient, SchemaError
from . import dense
from .series import TruncLaurent


class Window:
    """Coordinates for t^lo R^N / t^hi R^N."""

    __slots__ = ("N", "lo", "hi", "W")

    def __init__(self, N, lo, hi):
        if hi <= lo:
            raise ValueError("empty window")
        self.N, self.lo, self.hi = N, lo, hi
        self.W = hi - lo

    @property
    def dim(self):
        return self.N * self.W

    def flat(self, a):
        """(m, N, W) natural layout to (m, N*W) echelon layout."""
        return np.ascontiguousarray(a[:, ::-1, :]).reshape(a.shape[0], self.dim)

    def unflat(self, f):
        return np.ascontiguousarray(f.reshape(f.shape[0], self.N, self.W)[:, ::-1, :])

    def position(self, idx):
        b, i = divmod(idx, self.W)
        return self.N - 1 - b, self.lo + i


def refit(F, a, lo, new_lo, new_hi):
    """Re-express a natural array given at offset ``lo`` on [new_lo, new_hi).

    Terms below new_lo must vanish; terms at or above new_hi are dropped."""
    m, N, W = a.shape
    out = dense.zeros(F, (m, N, new_hi - new_lo))
    if lo < new_lo and np.any(a[:, :, :min(W, new_lo - lo)] != 0):
        raise ValueError("terms below the window")
    src_lo, src_hi = max(lo, new_lo), min(lo + W, new_hi)
    if src_hi > src_lo:
        out[:, :, src_lo - new_lo:src_hi - new_lo] = a[:, :, src_lo - lo:src_hi - lo]
    return out


def shift_natural(F, a, k):
    """Multiply by t^k (k >= 0) inside a fixed window."""
    out = dense.zeros(F, a.shape)
    W = a.shape[-1]
    if k < W:
        out[..., k:] = a[..., :W - k]
    return out


def saturate(F, win, flat_rows):
    """RREF (rows, pivots) of the t-stable span of the given flat rows."""
    rows, piv = dense.rref(F, flat_rows)
    k = 1
    while k < win.W and len(piv):
        sh = win.flat(shift_natural(F, win.unflat(rows), k))
        rows, piv = dense.rref(F, np.concatenate([rows, sh]))
        k *= 2
    return rows, piv


def vectors_to_array(F, vectors, lo, hi):
    """Natural array of TruncLaurent vectors on [lo, hi)."""
    m, N = len(vectors), len(vectors[0])
    out = dense.zeros(F, (m, N, hi - lo))
    for k, v in enumerate(vectors):
        for r, s in enumerate(v):
            for e, c in s.terms():
                if e < lo:
                    raise ValueError("vector leaves the window")
                if e < hi:
                    out[k, r, e - lo] = dense.scalar(F, c)
    return out


def array_to_laurent(F, row, lo):
    """Exact TruncLaurent from a 1-d coefficient array at offset lo."""
    return TruncLaurent(F, lo, F.poly(dense.to_scalars(F, row)), None)


def image_vectors(F, M, m_lo, V, v_lo):
    """Products M v for v in V: natural (m, N', W_M + W_V - 1) at offset m_lo + v_lo."""
    Np, N, WM = M.shape
    m, _, WV = V.shape
    out = dense.zeros(F, (m, Np, WM + WV - 1))
    for a in range(WM):
        Ma = M[:, :, a]
        if not np.any(Ma != 0):
            continue
        for b in range(WV):
            Vb = V[:, :, b]
            if not np.any(Vb != 0):
                continue
            out[:, :, a + b] = dense.red(F, out[:, :, a + b] + dense.matmul(F, Vb, Ma.T))
    return out


class DvrLattice:
    """A full k[[t]]-lattice in k((t))^N held as a certified window subspace.

    ``exps[j]`` is the pivot exponent of canonical column j and ``bound``
    the least b with t^b R^N inside L.  Canonical columns are exact.
    """

    __slots__ = ("F", "win", "rows", "piv", "exps", "bound", "_key", "_basis", "_floor")

    def __init__(self, F, win, rows, piv, exps, bound):
        self.F, self.win, self.rows, self.piv = F, win, rows, piv
        self.exps, self.bound = tuple(exps), bound
        self._key = self._basis = self._floor = None

    # -- construction -------------------------------------------------
    @classmethod
    def _certify(cls, F, win, rows, piv):
        by_pos = {win.position(p): i for i, p in enumerate(piv)}
        nnz = (rows != 0).sum(axis=1) if len(piv) else np.zeros(0, dtype=int)
        exps, bound = [], None
        for r in range(win.N):
            last = by_pos.get((r, win.hi - 1))
            if last is None or nnz[last] != 1:
                return None
            er = next(e for e in range(win.lo, win.hi) if (r, e) in by_pos)
            b = win.hi - 1
            while b - 1 >= er and nnz[by_pos[(r, b - 1)]] == 1:
                b -= 1
            bound = b if bound is None else max(bound, b)
            exps.append(er)
        return cls(F, win, rows, piv, exps, bound)

    @classmethod
    def from_array(cls, F, arr, lo, prec=None):
        """Canonical lattice spanned by the natural array ``arr`` at offset lo.

        With ``prec`` the generators are known modulo t^prec; otherwise
        they are exact and the window grows until certified."""
        m, N, W = arr.shape
        nz = np.flatnonzero(np.any(arr != 0, axis=(0, 1)))
        if prec is not None:
            nz = nz[nz + lo < prec]
        if len(nz) == 0:
            raise RankDeficient("all generators vanish at the working precision")
        lo2, top = lo + int(nz[0]), lo + int(nz[-1])
        if prec is not None:
            win = Window(N, lo2, prec)
            rows, piv = saturate(F, win, win.flat(refit(F, arr, lo, lo2, prec)))
            lat = cls._certify(F, win, rows, piv)
            if lat is not None:
                return lat.tight()
            if _generic_rank(F, arr, lo, min(top, prec - 1)) < N:
                raise RankDeficient("generators have rank below N")
            raise PrecisionExhausted(f"pivots cannot be certified below precision {prec}")
        if _generic_rank(F, arr, lo, top) < N:
            raise RankDeficient("generators have rank below N")
        hi = top + 2
        while True:
            win = Window(N, lo2, hi)
            rows, piv = saturate(F, win, win.flat(refit(F, arr, lo, lo2, hi)))
            lat = cls._certify(F, win, rows, piv)
            if lat is not None:
                return lat.tight()
            hi = lo2 + 2 * (hi - lo2)

    @classmethod
    def from_vectors(cls, F, N, vectors):
        """Canonical form of the span of TruncLaurent vectors of length N."""
        vectors = [list(v) for v in vectors]
        if not vectors:
            raise RankDeficient("no generators")
        for v in vectors:
            if len(v) != N:
                raise ValueError("vector length differs from rank")
        precs = [s.prec for v in vectors for s in v if s.prec is not None]
        P = min(precs) if precs else None
        vals = [s.valuation() for v in vectors for s in v]
        vals = [x for x in vals if x is not None and (P is None or x < P)]
        if not vals:
            raise RankDeficient("all generators vanish at the working precision")
        lo = min(vals)
        tops = [s.max_exponent() for v in vectors for s in v if s.max_exponent() is not None]
        hi = (max(tops) + 1) if P is None else P
        arr = vectors_to_array(F, vectors, lo, max(hi, lo + 1))
        return cls.from_array(F, arr, lo, P)

    @classmethod
    def unit(cls, F, N):
        return cls.diagonal(F, [0] * N)

    @classmethod
    def diagonal(cls, F, exps):
        N = len(exps)
        lo = min(exps)
        arr = dense.zeros(F, (N, N, max(exps) - lo + 1))
        one = dense.scalar(F, 1)
        for j, e in enumerate(exps):
            arr[j, j, e - lo] = one
        return cls.from_array(F, arr, lo)

    # -- basic data ---------------------------------------------------
    @property
    def N(self):
        return self.win.N

    @property
    def lo(self):
        return self.win.lo

    @property
    def hi(self):
        return self.win.hi

    def basis(self):
        """Canonical columns as a natural array (N, N, W) at offset ``lo``."""
        if self._basis is None:
            idx = {self.win.position(p): i for i, p in enumerate(self.piv)}
            rows = np.stack([self.rows[idx[(r, e)]] for r, e in enumerate(self.exps)])
            self._basis = self.win.unflat(rows)
        return self._basis

    def window_basis(self):
        """All RREF rows as a natural array: a k-basis of L / t^hi R^N."""
        return self.win.unflat(self.rows)

    @property
    def floor(self):
        """Least exponent occurring in L."""
        if self._floor is None:
            nz = np.flatnonzero(np.any(self.basis() != 0, axis=(0, 1)))
            self._floor = self.lo + int(nz[0])
        return self._floor

    def cols(self):
        B = self.basis()
        return [[array_to_laurent(self.F, B[j, r], self.lo) for r in range(self.N)]
                for j in range(self.N)]

    def matrix(self):
        """Rows of exact Laurent polynomials (columns are the canonical basis)."""
        c = self.cols()
        return [[c[j][r] for j in range(self.N)] for r in range(self.N)]

    def key(self):
        if self._key is None:
            B = self.basis()
            sk = self.F.sort_key
            terms = tuple((int(j), int(r), int(e) + self.lo, sk(self.F(B[j, r, e]) if self.F.characteristic else B[j, r, e]))
                          for j, r, e in zip(*np.nonzero(B)))
            self._key = (self.N, self.exps, terms)
        return self._key

    def __eq__(self, other):
        return isinstance(other, DvrLattice) and self.F == other.F and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"DvrLattice(N={self.N}, exps={self.exps}, bound={self.bound})"

    def index_valuation(self):
        """Valuation of the determinant of a basis."""
        return sum(self.exps)

    def is_diagonal(self):
        B = self.basis()
        return all(not np.any(B[j, :j] != 0) for j in range(self.N))

    # -- windows ------------------------------------------------------
    def rewindow(self, lo, hi):
        """Same lattice on the window [lo, hi); needs lo <= floor and hi > bound."""
        if lo > self.floor or hi <= self.bound:
            raise PrecisionExhausted("window does not contain the lattice")
        if lo == self.lo and hi == self.hi:
            return self
        F = self.F
        win = Window(self.N, lo, hi)
        nat = refit(F, self.window_basis(), self.lo, lo, hi)
        if hi > self.hi:
            one = dense.scalar(F, 1)
            extra = dense.zeros(F, ((hi - self.hi) * self.N, self.N, win.W))
            k = 0
            for e in range(self.hi, hi):
                for r in range(self.N):
                    extra[k, r, e - lo] = one
                    k += 1
            nat = np.concatenate([nat, extra])
        nat = nat[np.any(nat != 0, axis=(1, 2))]
        rows, piv = dense.rref(F, win.flat(nat))
        lat = DvrLattice._certify(F, win, rows, piv)
        assert lat is not None
        return lat

    def tight(self):
        """Same lattice on the smallest certified window [floor, bound + 1)."""
        lo, hi = self.floor, self.bound + 1
        if lo == self.lo and hi == self.hi:
            return self
        return self.rewindow(lo, max(hi, lo + 1))

    def reduce(self, arr, lo):
        """Residues of natural vectors modulo L on this window (flat layout).

        A vector lies in L iff its residue is zero.  Terms below the window
        make the vector a non-member; terms at or above ``hi`` are ignored."""
        F = self.F
        m, N, W = arr.shape
        low = None
        if lo < self.lo:
            k = min(W, self.lo - lo)
            low = np.any(arr[:, :, :k] != 0, axis=(1, 2))
            arr = arr.copy()
            arr[:, :, :k] = dense.scalar(F, 0)
        if lo != self.lo or W != self.win.W:
            arr = refit(F, arr, lo, self.lo, self.hi)
        res = dense.reduce_rows(F, self.win.flat(arr), self.rows, self.piv)
        if low is not None and np.any(low):
            res = res.copy()
            res[low, 0] = dense.scalar(F, 1)
        return res

    def residues(self, arr, lo):
        """Residues modulo L on a window reaching down to the given vectors.

        Unlike ``reduce`` the result is a faithful coset representative, so
        ranks of residues are dimensions of images in V / L."""
        nz = np.flatnonzero(np.any(arr != 0, axis=(0, 1)))
        low = lo + int(nz[0]) if len(nz) else self.lo
        lat = self.rewindow(low, self.hi) if low < self.lo else self
        return lat.reduce(arr, lo)

    def contains_array(self, arr, lo):
        return ~np.any(self.reduce(arr, lo) != 0, axis=1)

    def contains(self, v):
        """Membership of a TruncLaurent vector known to enough precision."""
        precs = [s.prec for s in v if s.prec is not None]
        if precs and min(precs) <= self.bound:
            raise PrecisionExhausted(
                f"membership needs precision above {self.bound}, have {min(precs)}")
        vals = [s.valuation() for s in v if not s.is_zero()]
        lo = min(vals + [self.lo])
        arr = vectors_to_array(self.F, [v], lo, max(self.hi, lo + 1))
        return bool(self.contains_array(arr, lo)[0])

    def contains_lattice(self, other):
        if other.floor < self.floor:
            return False
        o = other.rewindow(other.lo, max(other.hi, self.hi))
        return bool(np.all(self.contains_array(o.window_basis(), o.lo)))

    # -- derived lattices ---------------------------------------------
    def scaled(self, k):
        win = Window(self.N, self.lo + k, self.hi + k)
        return DvrLattice(self.F, win, self.rows, self.piv, [e + k for e in self.exps], self.bound + k)

    def __add__(self, other):
        lo, hi = min(self.floor, other.floor), max(self.hi, other.hi)
        a, b = self.rewindow(lo, hi), other.rewindow(lo, hi)
        rows, piv = dense.rref(self.F, np.concatenate([a.rows, b.rows]))
        return DvrLattice._certify(self.F, a.win, rows, piv)

    def intersect(self, other):
        F = self.F
        lo, hi = min(self.floor, other.floor), max(self.hi, other.hi)
        a, b = self.rewindow(lo, hi), other.rewindow(lo, hi)
        ker = dense.left_nullspace(F, np.concatenate([a.rows, b.rows]))
        vecs = dense.matmul(F, ker[:, :a.rows.shape[0]], a.rows)
        rows, piv = dense.rref(F, vecs)
        lat = DvrLattice._certify(F, a.win, rows, piv)
        assert lat is not None
        return lat

    def dual(self):
        """{y : sum_r y_r x_r in R for all x in L}."""
        F, N = self.F, self.N
        lo_y, hi_y = -self.bound, -self.floor + 1
        Wy = hi_y - lo_y
        B = self.basis()
        s_vals = list(range(lo_y + self.floor, 0))
        win = Window(N, lo_y, hi_y)
        if not s_vals:
            # L = t^f R^N exactly, so the dual is t^-f R^N
            return DvrLattice.unit(F, N).scaled(-self.floor).rewindow(lo_y, hi_y)
        # the functional (j, s) on y = t^e u_r is the t^s coefficient of t^e B[j, r]
        Phi = dense.zeros(F, (N, Wy, N, len(s_vals)))
        for ei in range(Wy):
            e = lo_y + ei
            for si, s in enumerate(s_vals):
                idx = s - e - self.lo
                if 0 <= idx < self.win.W:
                    Phi[:, ei, :, si] = B[:, :, idx].T
        ker = dense.left_nullspace(F, Phi.reshape(N * Wy, N * len(s_vals)))
        rows, piv = dense.rref(F, win.flat(ker.reshape(ker.shape[0], N, Wy)))
        lat = DvrLattice._certify(F, win, rows, piv)
        assert lat is not None
        return lat

    def image(self, M, m_lo):
        """Canonical form of M L for a natural matrix array M (N', N, W_M) at offset m_lo."""
        out = image_vectors(self.F, M, m_lo, self.basis(), self.lo)
        return DvrLattice.from_array(self.F, out, m_lo + self.lo)

    # -- JSON ---------------------------------------------------------
    def check_precision(self, prec):
        if prec <= self.bound:
            raise PrecisionExhausted(f"precision {prec} does not certify pivots up to t^{self.bound}")

    def to_json(self, prec):
        self.check_precision(prec)
        return [[s.to_json(prec) for s in row] for row in self.matrix()]

    def truncated_matrix(self, prec):
        self.check_precision(prec)
        return [[s.truncate(prec) for s in row] for row in self.matrix()]


def _generic_rank(F, arr, lo, top):
    """Rank over k((t)) of exact generators: evaluation first, elimination as fallback."""
    m, N, W = arr.shape
    if m < N:
        return m
    deg = top - lo + 1
    cols = arr[:, :, :deg]
    pts = range(1, 8) if F.is_rational else range(1, min(F.characteristic, 8))
    for x in pts:
        powers = dense.asarray(F, [F(x) ** i for i in range(deg)])
        ev = dense.red(F, np.tensordot(cols, powers, axes=([2], [0])))
        if dense.rank(F, ev) == N:
            return N
    vecs = [[F.poly(dense.to_scalars(F, arr[k, r, :deg])) for r in range(N)] for k in range(m)]
    return _poly_rank([[vecs[k][r] for k in range(m)] for r in range(N)])


def _poly_rank(A):
    """Rank of a polynomial matrix by fraction-free elimination."""
    A = [list(r) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    rank, row = 0, 0
    for col in range(n):
        p = next((i for i in range(row, m) if A[i][col].degree() >= 0), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        for i in range(row + 1, m):
            if A[i][col].degree() >= 0:
                a, b = A[row][col], A[i][col]
                g = a.gcd(b)
                fa, fb = divmod(a, g)[0], divmod(b, g)[0]
                A[i] = [fa * x - fb * y for x, y in zip(A[i], A[row])]
        row += 1
        rank += 1
        if row == m:
            break
    return rank


def matrix_from_json(F, obj, path="$", default_prec=None):
    """Rows of TruncLaurent from row-major JSON; bare scalars get ``default_prec``."""
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError("matrix must be a nonempty array of rows", path)
    ncols = len(obj[0])
    rows = []
    for i, r in enumerate(obj):
        if len(r) != ncols or ncols == 0:
            raise SchemaError("ragged matrix", f"{path}[{i}]")
        row = []
        for j, e in enumerate(r):
            s = TruncLaurent.from_json(F, e, f"{path}[{i}][{j}]")
            if s.prec is None and default_prec is not None:
                s = s.truncate(default_prec)
            row.append(s)
        rows.append(row)
    return rows


def dvr_canonical(F, rows, n=None):
    """Canonical upper-triangular basis of the column span of ``rows``."""
    n = len(rows) if n is None else n
    if len(rows) != n:
        raise ValueError("row count differs from declared rank")
    cols = [[rows[i][j] for i in range(n)] for j in range(len(rows[0]))]
    return DvrLattice.from_vectors(F, n, cols)
