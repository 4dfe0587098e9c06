"""Orders over k[[t]] inside Mat_n(k((t))).

An order is a DvrLattice in k((t))^(n*n) (row-major matrix coordinates).
Matrix elements are numpy arrays of shape (m, rows, cols, W) at an
exponent offset; all products are exact Laurent polynomial products.
"""
import numpy as np

from .errors import (BadParameters, NotAnOrder, NotCentral, NotHereditary, NotInvertible,
                     PrecisionExhausted, SchemaError)
from .exact_core import dense
from .exact_core.dvr import DvrLattice, Window, matrix_from_json
from .exact_core.field import FieldSpec
from .exact_core.polymat import laurent_adjugate
from .exact_core.series import TruncLaurent
from . import findim_algebra as fa

DEFAULT_PRECISION = 12


# -- matrix arrays -----------------------------------------------------
def mat_products(F, X, x_lo, Y, y_lo):
    """All products X[a] @ Y[b]: array (a, b, rows, cols, W) at offset x_lo + y_lo."""
    a, n, p, WX = X.shape
    b, p2, q, WY = Y.shape
    out = dense.zeros(F, (a, b, n, q, WX + WY - 1))
    xs = [e for e in range(WX) if np.any(X[..., e] != 0)]
    ys = [e for e in range(WY) if np.any(Y[..., e] != 0)]
    # one 2-d product per exponent pair: (a n, p) times (p, b q)
    Xs = {e: np.ascontiguousarray(X[..., e]).reshape(a * n, p) for e in xs}
    Ys = {e: np.ascontiguousarray(Y[..., e].transpose(1, 0, 2)).reshape(p, b * q) for e in ys}
    for ex in xs:
        for ey in ys:
            Z = dense.matmul(F, Xs[ex], Ys[ey]).reshape(a, n, b, q).transpose(0, 2, 1, 3)
            out[..., ex + ey] = dense.red(F, out[..., ex + ey] + Z)
    return out, x_lo + y_lo


def as_vectors(X):
    """(m, rows, cols, W) matrices as natural lattice vectors (m, rows*cols, W)."""
    m, r, c, W = X.shape
    return X.reshape(m, r * c, W)


def as_matrices(V, rows, cols):
    m, N, W = V.shape
    return V.reshape(m, rows, cols, W)


def identity_array(F, n):
    out = dense.zeros(F, (1, n, n, 1))
    one = dense.scalar(F, 1)
    for i in range(n):
        out[0, i, i, 0] = one
    return out


def copies(F, X, k):
    """Block-diagonal diag(x, ..., x) with k copies."""
    if k == 1:
        return X
    m, n, _, W = X.shape
    out = dense.zeros(F, (m, n * k, n * k, W))
    for c in range(k):
        out[:, c * n:(c + 1) * n, c * n:(c + 1) * n, :] = X
    return out


def transpose_lattice(lat, rows, cols):
    """Image of a lattice in Mat_{rows x cols} under transposition."""
    B = as_matrices(lat.basis(), rows, cols).transpose(0, 2, 1, 3)
    return DvrLattice.from_array(lat.F, as_vectors(np.ascontiguousarray(B)), lat.lo)


def span_of_products(F, X, x_lo, Y, y_lo):
    """R-lattice spanned by all products X[a] Y[b]."""
    P, lo = mat_products(F, X, x_lo, Y, y_lo)
    a, b, r, c, W = P.shape
    return DvrLattice.from_array(F, P.reshape(a * b, r * c, W), lo)


def matrix_to_array(F, M):
    """Natural matrix array (1, n, m, W) and offset from rows of TruncLaurent (exact part)."""
    vals = [s.valuation() for row in M for s in row if not s.is_zero()]
    if not vals:
        raise NotInvertible("zero matrix")
    lo = min(vals)
    top = max(s.max_exponent() for row in M for s in row if not s.is_zero())
    out = dense.zeros(F, (1, len(M), len(M[0]), top - lo + 1))
    for i, row in enumerate(M):
        for j, s in enumerate(row):
            for e, c in s.terms():
                out[0, i, j, e - lo] = dense.scalar(F, c)
    return out, lo


def array_to_matrix(F, X, lo):
    """Rows of exact TruncLaurent from a (rows, cols, W) array."""
    r, c, W = X.shape
    return [[TruncLaurent(F, lo, F.poly(dense.to_scalars(F, X[i, j])), None) for j in range(c)]
            for i in range(r)]


# -- local orders ------------------------------------------------------
class LocalOrder:
    """A k[[t]]-lattice in Mat_n(k((t))) claimed to be an order.

    ``adequacy`` certifies t^adequacy Mat_n(R) inside the lattice; the
    working precision must be at least 2 * adequacy + 2."""

    __slots__ = ("F", "n", "lat", "prec", "adequacy", "_cache")

    def __init__(self, F, n, lat, prec=DEFAULT_PRECISION, adequacy=None, relax=False):
        if lat.N != n * n:
            raise SchemaError("lattice rank differs from n^2")
        self.F, self.n, self.lat = F, n, lat
        need = max(lat.bound, 0)
        if adequacy is None:
            adequacy = need
        elif adequacy < need:
            raise BadParameters(f"adequacy {adequacy} does not certify t^a Mat_n inside the lattice (needs {need})")
        if prec < 2 * adequacy + 2:
            if not relax:
                raise PrecisionExhausted(f"precision {prec} below 2*adequacy+2 = {2 * adequacy + 2}")
            prec = 2 * adequacy + 2
        self.prec, self.adequacy = prec, adequacy
        self._cache = {}

    # -- construction -------------------------------------------------
    @classmethod
    def from_generators(cls, F, n, gens, prec, adequacy=None):
        vecs = []
        for g in gens:
            if len(g) != n or any(len(r) != n for r in g):
                raise SchemaError("generator is not n x n")
            vecs.append([s if s.prec is not None else s.truncate(prec) for r in g for s in r])
        lat = DvrLattice.from_vectors(F, n * n, vecs)
        return cls(F, n, lat, prec, adequacy)

    @classmethod
    def from_json(cls, obj, F=None, prec=None, path="$"):
        if not isinstance(obj, dict):
            raise SchemaError("order must be an object", path)
        if F is None:
            F = FieldSpec.from_json(obj.get("field"), path + ".field")
        if "hereditary" in obj:
            h = obj["hereditary"]
            parts = h.get("parts") if isinstance(h, dict) else None
            if not isinstance(parts, list) or not parts or not all(isinstance(x, int) and x >= 1 for x in parts):
                raise SchemaError("hereditary shorthand needs positive integer 'parts'", path + ".hereditary")
            p = obj.get("prec", prec if prec is not None else DEFAULT_PRECISION)
            return standard_hereditary(F, parts, p)
        for k in ("n", "generators"):
            if k not in obj:
                raise SchemaError(f"order missing '{k}'", path)
        n = obj["n"]
        if not isinstance(n, int) or n < 1:
            raise SchemaError("n must be a positive integer", path + ".n")
        p = obj.get("prec", prec if prec is not None else DEFAULT_PRECISION)
        if not isinstance(p, int):
            raise SchemaError("prec must be an integer", path + ".prec")
        gens = obj["generators"]
        if not isinstance(gens, list) or not gens:
            raise SchemaError("generators must be a nonempty array", path + ".generators")
        mats = [matrix_from_json(F, g, f"{path}.generators[{i}]", default_prec=p) for i, g in enumerate(gens)]
        a = obj.get("adequacy")
        if a is not None and not isinstance(a, int):
            raise SchemaError("adequacy must be an integer", path + ".adequacy")
        return cls.from_generators(F, n, mats, p, a)

    def to_json(self, prec=None):
        prec = self.prec if prec is None else prec
        B = as_matrices(self.lat.basis(), self.n, self.n)
        gens = []
        for k in range(B.shape[0]):
            M = array_to_matrix(self.F, B[k], self.lat.lo)
            gens.append([[s.to_json(prec) for s in row] for row in M])
        return {"field": self.F.to_json(), "n": self.n, "prec": prec,
                "adequacy": self.adequacy, "generators": gens}

    # -- data ---------------------------------------------------------
    def basis(self):
        """Canonical basis as matrices (n*n, n, n, W) and offset."""
        return as_matrices(self.lat.basis(), self.n, self.n), self.lat.lo

    def key(self):
        return (self.n, self.lat.key())

    def __eq__(self, other):
        return isinstance(other, LocalOrder) and self.F == other.F and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"LocalOrder(n={self.n}, exps={self.lat.exps})"

    def valuation_pattern(self):
        """Entry-wise least valuations (meaningful for monomial orders)."""
        B = self.lat.basis()
        out = []
        for r in range(self.n * self.n):
            nz = np.flatnonzero(np.any(B[:, r, :] != 0, axis=0))
            out.append(self.lat.lo + int(nz[0]))
        return [out[i * self.n:(i + 1) * self.n] for i in range(self.n)]

    def with_precision(self, prec):
        return LocalOrder(self.F, self.n, self.lat, prec, self.adequacy)


def order_from_lattice(F, n, lat, prec):
    """Order built from an exactly known lattice; precision raised to its contract."""
    return LocalOrder(F, n, lat, prec, relax=True)


def standard_hereditary(F, parts, prec=DEFAULT_PRECISION):
    """Block (i, j) entries in R for i >= j and in tR for i < j."""
    parts = [int(x) for x in parts]
    if not parts or any(x < 1 for x in parts):
        raise BadParameters("type tuple needs positive entries")
    if prec < 4:
        raise PrecisionExhausted("standard hereditary orders need precision >= 4")
    blk = [b for b, m in enumerate(parts) for _ in range(m)]
    n = len(blk)
    exps = [0 if blk[i] >= blk[j] else 1 for i in range(n) for j in range(n)]
    return LocalOrder(F, n, DvrLattice.diagonal(F, exps), prec, adequacy=1)


# -- verification ------------------------------------------------------
def verify_order(L):
    """(ok, diagnostic) for unit membership, closure on basis pairs and full rank."""
    F, n = L.F, L.n
    diag = {"full_rank": True, "certified_precision": L.prec, "bound": L.lat.bound}
    unit = as_vectors(identity_array(F, n))
    diag["unit"] = bool(L.lat.contains_array(unit, 0)[0])
    B, lo = L.basis()
    P, plo = mat_products(F, B, lo, B, lo)
    a, b, r, c, W = P.shape
    inside = L.lat.contains_array(P.reshape(a * b, r * c, W), plo)
    diag["closed"] = bool(np.all(inside))
    if not diag["closed"]:
        i = int(np.flatnonzero(~inside)[0])
        diag["first_failure"] = [i // b, i % b]
    return diag["unit"] and diag["closed"], diag


def require_order(L):
    if "verified" not in L._cache:
        ok, diag = verify_order(L)
        L._cache["verified"] = (ok, diag)
    ok, diag = L._cache["verified"]
    if not ok:
        raise NotAnOrder("lattice is not an order: " + ("unit missing" if not diag["unit"] else "not closed"))


def _check_central(L):
    """Z(L) = L intersected with the scalars must be R: 1 in L and 1/t not in L."""
    n = L.n
    one = as_vectors(identity_array(L.F, n))
    if not L.lat.contains_array(one, 0)[0] or L.lat.contains_array(one, -1)[0]:
        raise NotCentral("center of the order is not the valuation ring")


# -- residue algebra and radical ---------------------------------------
def residue_data(L):
    """Lambda/t Lambda as a StructAlgebra, its radical and the lift J."""
    if "residue" in L._cache:
        return L._cache["residue"]
    require_order(L)
    F, n = L.F, L.n
    N = n * n
    lat = L.lat
    tl = lat.scaled(1)
    lo, hi = lat.floor, tl.hi
    Lw, Tw = lat.rewindow(lo, hi), tl.rewindow(lo, hi)
    win = Lw.win
    red = dense.reduce_rows(F, Lw.rows, Tw.rows, Tw.piv)
    Q, qpiv = dense.rref(F, red)
    assert Q.shape[0] == N
    Qm = as_matrices(win.unflat(Q), n, n)
    P, plo = mat_products(F, Qm, lo, Qm, lo)
    pr = Tw.reduce(P.reshape(N * N, N, P.shape[-1]), plo)
    coords = pr[:, qpiv]
    unit = Tw.reduce(as_vectors(identity_array(F, n)), 0)[:, qpiv][0]
    A = fa.StructAlgebra(F, coords.reshape(N, N, N), unit, check=False)
    rad = fa.jacobson_radical(A)
    lifts = dense.matmul(F, rad, Q) if rad.shape[0] else rad.reshape(0, Q.shape[1])
    jrows, jpiv = dense.rref(F, np.concatenate([Tw.rows, lifts]))
    J = DvrLattice._certify(F, win, jrows, jpiv)
    assert J is not None
    Abar, lift_bar = A.quotient(rad)
    data = {"A": A, "Q": Q, "qpiv": qpiv, "win": win, "rad": rad, "J": J, "T": Tw,
            "Abar": Abar, "lift_bar": lift_bar}
    L._cache["residue"] = data
    return data


def _residue_to_matrices(L, rows):
    """Window matrices (m, n, n, W) at the residue window offset for Lambda/t coordinates."""
    d = residue_data(L)
    flat = dense.matmul(L.F, rows, d["Q"])
    return as_matrices(d["win"].unflat(flat), L.n, L.n), d["win"].lo


def radical_lift(L):
    """The Jacobson radical J of L as a lattice (t L inside J inside L)."""
    return residue_data(L)["J"]


def block_data(L):
    """Central idempotents of L/J (as window matrices) and their Wedderburn sizes."""
    if "blocks" in L._cache:
        return L._cache["blocks"]
    d = residue_data(L)
    Abar = d["Abar"]
    blocks = fa.block_decompose(Abar)
    sizes = fa.wedderburn_sizes(Abar)
    rows = dense.matmul(L.F, np.stack(blocks), d["lift_bar"])
    mats, lo = _residue_to_matrices(L, rows)
    out = (mats, lo, sizes, blocks)
    L._cache["blocks"] = out
    return out


def radical_square(L):
    if "J2" in L._cache:
        return L._cache["J2"]
    F, n = L.F, L.n
    J = radical_lift(L)
    Jm = as_matrices(J.basis(), n, n)
    P, plo = mat_products(F, Jm, J.lo, Jm, J.lo)
    a, b, r, c, W = P.shape
    J2 = DvrLattice.from_array(F, P.reshape(a * b, r * c, W), plo, prec=L.lat.bound + 3)
    L._cache["J2"] = J2
    return J2


def ext1_lattice(L):
    """Arrow multiplicities from J/J^2: entry (i, j) = dim(c_j J c_i mod J^2) / (m_i m_j)."""
    F, n = L.F, L.n
    J, J2 = radical_lift(L), radical_square(L)
    J2 = J2.rewindow(min(J.floor, J2.floor), J2.hi)
    mats, lo, sizes, _ = block_data(L)
    Jm = as_matrices(J.basis(), n, n)
    t = len(sizes)
    out = [[0] * t for _ in range(t)]
    for i in range(t):
        right, rlo = mat_products(F, Jm, J.lo, mats[i:i + 1], lo)
        both, blo = mat_products(F, mats, lo, right[:, 0], rlo)
        a, b, r, c, W = both.shape
        res = J2.reduce(both.reshape(a * b, r * c, W), blo).reshape(a, b, -1)
        for j in range(t):
            q, rem = divmod(dense.rank(F, res[j]), sizes[i] * sizes[j])
            if rem:
                raise fa.NotSplit("bimodule dimension is not a multiple of the simple sizes")
            out[i][j] = q
    return out


def quotient_algebra(L, ideal):
    """L / ideal as a StructAlgebra for an ideal lattice containing t^k L."""
    F, n = L.F, L.n
    lo, hi = L.lat.floor, max(L.lat.hi, ideal.hi)
    Lw, Iw = L.lat.rewindow(lo, hi), ideal.rewindow(lo, hi)
    red = dense.reduce_rows(F, Lw.rows, Iw.rows, Iw.piv)
    Q, qpiv = dense.rref(F, red)
    d = Q.shape[0]
    Qm = as_matrices(Lw.win.unflat(Q), n, n)
    P, plo = mat_products(F, Qm, lo, Qm, lo)
    pr = Iw.reduce(P.reshape(d * d, n * n, P.shape[-1]), plo)
    unit = Iw.reduce(as_vectors(identity_array(F, n)), 0)[:, qpiv][0]
    return fa.StructAlgebra(F, pr[:, qpiv].reshape(d, d, d), unit, check=False)


def is_maximal(L):
    """Every simple has a single loop and no other arrows in the quiver of L/J^2."""
    require_order(L)
    _check_central(L)
    E = ext1_lattice(L)
    for i, row in enumerate(E):
        for j, v in enumerate(row):
            if v != (1 if i == j else 0):
                return False
    return True


# -- hereditary recognition --------------------------------------------
def _column_lattice(L):
    """L R^n: the span of all columns of a basis."""
    B, lo = L.basis()
    m, n, _, W = B.shape
    cols = np.ascontiguousarray(B.transpose(0, 2, 1, 3)).reshape(m * n, n, W)
    return DvrLattice.from_array(L.F, cols, lo)


def _apply(F, X, x_lo, M):
    """Span of x v for x in X (matrices) and v in the lattice M of column vectors."""
    V = M.basis()
    Vm = V.reshape(V.shape[0], V.shape[1], 1, V.shape[2])
    P, plo = mat_products(F, X, x_lo, Vm, M.lo)
    a, b, r, c, W = P.shape
    return DvrLattice.from_array(F, P.reshape(a * b, r, W), plo)


def conjugate_lattice(F, n, lat, U, u_lo, inverse=False):
    """u L u^-1 (or u^-1 L u) computed exactly as t^-v(det u) u L adj(u)."""
    adj, a_lo, dv = laurent_adjugate(F, U, u_lo)
    B = as_matrices(lat.basis(), n, n)
    left, right = (U, u_lo), (adj, a_lo)
    if inverse:
        left, right = right, left
    P, plo = mat_products(F, left[0][None], left[1], B, lat.lo)
    P = P[0]
    P2, plo2 = mat_products(F, P, plo, right[0][None], right[1])
    P2 = P2[:, 0]
    return DvrLattice.from_array(F, as_vectors(P2), plo2 - dv)


def recognize_hereditary(L):
    """(tuple in chain order, u, u_lo) with u^-1 L u = H(tuple), or None.

    The chain M, J M, J^2 M, ... from M = L R^n must reach t M with strict
    steps; a basis of M adapted to the chain conjugates L onto the
    standard form exactly when L is hereditary."""
    if "hered" in L._cache:
        return L._cache["hered"]
    F, n = L.F, L.n
    J = radical_lift(L)
    Jm = as_matrices(J.basis(), n, n)
    M = _column_lattice(L)
    tM = M.scaled(1)
    chain = [M]
    result = None
    for _ in range(n + 1):
        nxt = _apply(F, Jm, J.lo, chain[-1])
        if nxt == chain[-1]:
            break
        if tM.contains_lattice(nxt):
            if nxt == tM:
                result = chain
            break
        chain.append(nxt)
    if result is not None:
        result = _adapted_conjugator(L, chain, tM)
    L._cache["hered"] = result
    return result


def _adapted_conjugator(L, chain, tM):
    F, n = L.F, L.n
    M = chain[0]
    lo, hi = M.floor, tM.hi
    T = tM.rewindow(lo, hi)
    dims = [chain[i + 1].index_valuation() - chain[i].index_valuation() for i in range(len(chain) - 1)]
    dims.append(tM.index_valuation() - chain[-1].index_valuation())
    picked = {}
    cur = dense.zeros(F, (0, T.win.dim))
    for i in range(len(chain) - 1, -1, -1):
        Li = chain[i].rewindow(lo, hi)
        Ri, _ = dense.rref(F, dense.reduce_rows(F, Li.rows, T.rows, T.piv))
        got = []
        for row in Ri:
            trial = np.concatenate([cur, row[None]])
            if dense.rank(F, trial) > cur.shape[0]:
                cur = trial
                got.append(row)
        picked[i] = got
    cols = []
    for i in range(len(chain)):
        if len(picked[i]) != dims[i]:
            return None
        cols.extend(picked[i])
    V = T.win.unflat(np.stack(cols))  # (n, n, W): basis vectors
    U = np.ascontiguousarray(V.transpose(1, 0, 2))
    std = conjugate_lattice(F, n, L.lat, U, lo, inverse=True)
    if std != standard_hereditary(F, dims, max(L.prec, 4)).lat:
        return None
    return tuple(dims), U, lo


def canonical_rotation(parts):
    parts = tuple(parts)
    return min(parts[i:] + parts[:i] for i in range(len(parts)))


def order_type(L):
    """(number of simple modules, canonical type tuple or None)."""
    _, _, sizes, _ = block_data(L)
    rec = recognize_hereditary(L)
    return len(sizes), (canonical_rotation(rec[0]) if rec is not None else None)


# -- bimodules ---------------------------------------------------------
class LocalBimodule:
    """A (B, A)-bimodule lattice P in Mat_{p x q}(k((t))).

    B is an order in Mat_nb acting on the left through ``left_copies``
    diagonal copies (p = nb * left_copies); likewise A on the right."""

    __slots__ = ("F", "p", "q", "lat", "left", "right", "left_copies", "right_copies", "prec")

    def __init__(self, lat, left, right, left_copies=1, right_copies=1, prec=None):
        self.F = left.F
        self.left, self.right = left, right
        self.left_copies, self.right_copies = left_copies, right_copies
        self.p, self.q = left.n * left_copies, right.n * right_copies
        if lat.N != self.p * self.q:
            raise SchemaError("bimodule lattice has the wrong rank")
        self.lat = lat
        self.prec = max(left.prec, right.prec) if prec is None else prec

    def basis(self):
        return as_matrices(self.lat.basis(), self.p, self.q), self.lat.lo

    def to_json(self, prec=None):
        prec = self.prec if prec is None else prec
        B, lo = self.basis()
        gens = [[[s.to_json(prec) for s in row] for row in array_to_matrix(self.F, B[k], lo)]
                for k in range(B.shape[0])]
        return {"field": self.F.to_json(), "p": self.p, "q": self.q, "prec": prec,
                "left_copies": self.left_copies, "right_copies": self.right_copies,
                "left": self.left.to_json(prec), "right": self.right.to_json(prec),
                "generators": gens}

    @classmethod
    def from_json(cls, obj, F=None, prec=None, path="$"):
        if not isinstance(obj, dict):
            raise SchemaError("bimodule must be an object", path)
        if F is None:
            F = FieldSpec.from_json(obj.get("field"), path + ".field")
        for k in ("left", "right", "generators"):
            if k not in obj:
                raise SchemaError(f"bimodule missing '{k}'", path)
        p_ = obj.get("prec", prec if prec is not None else DEFAULT_PRECISION)
        left = LocalOrder.from_json(obj["left"], F, p_, path + ".left")
        right = LocalOrder.from_json(obj["right"], F, p_, path + ".right")
        lc, rc = obj.get("left_copies", 1), obj.get("right_copies", 1)
        if not isinstance(lc, int) or not isinstance(rc, int) or lc < 1 or rc < 1:
            raise SchemaError("copies must be positive integers", path)
        p, q = left.n * lc, right.n * rc
        mats = [matrix_from_json(F, g, f"{path}.generators[{i}]", default_prec=p_)
                for i, g in enumerate(obj["generators"])]
        for i, m in enumerate(mats):
            if len(m) != p or len(m[0]) != q:
                raise SchemaError(f"generator must be {p} x {q}", f"{path}.generators[{i}]")
        vecs = [[s for row in m for s in row] for m in mats]
        lat = DvrLattice.from_vectors(F, p * q, vecs)
        return cls(lat, left, right, lc, rc, p_)


def _trace_dual(lat, rows, cols):
    """{y in Mat_{cols x rows} : tr(x y) in R for all x in lat}."""
    return transpose_lattice(lat.dual(), rows, cols)


def left_idealizer(P):
    """{b in Mat_p : b P inside P}, via the pairing with P P^dual."""
    F = P.F
    Pd = _trace_dual(P.lat, P.p, P.q)  # q x p
    X, xlo = P.basis()
    Y = as_matrices(Pd.basis(), P.q, P.p)
    Z = span_of_products(F, X, xlo, Y, Pd.lo)  # p x p
    return _trace_dual(Z, P.p, P.p)


def right_idealizer(P):
    """{a in Mat_q : P a inside P}."""
    F = P.F
    Pd = _trace_dual(P.lat, P.p, P.q)
    X, xlo = P.basis()
    Y = as_matrices(Pd.basis(), P.q, P.p)
    Z = span_of_products(F, Y, Pd.lo, X, xlo)  # q x q
    return _trace_dual(Z, P.q, P.q)


def _stable(P):
    F = P.F
    X, xlo = P.basis()
    Bm, blo = P.left.basis()
    Am, alo = P.right.basis()
    L1, l1 = mat_products(F, copies(F, Bm, P.left_copies), blo, X, xlo)
    R1, r1 = mat_products(F, X, xlo, copies(F, Am, P.right_copies), alo)
    ok = True
    for arr, lo in ((L1, l1), (R1, r1)):
        a, b, r, c, W = arr.shape
        ok = ok and bool(np.all(P.lat.contains_array(arr.reshape(a * b, r * c, W), lo)))
    return ok


def projective_data(A):
    """Per block of A/J: lifted primitive idempotent (window matrix) and dim eps (A/tA)."""
    if "proj" in A._cache:
        return A._cache["proj"]
    F = A.F
    d = residue_data(A)
    Ar, Abar, lift = d["A"], d["Abar"], d["lift_bar"]
    out = []
    for e in fa.block_decompose(Abar):
        f = fa.rank_one_idempotent(Abar, e)
        g = dense.matmul(F, f.reshape(1, -1), lift).reshape(-1)
        for _ in range(Ar.dim + 2):
            g2 = Ar.mul(g, g)
            if not np.any(dense.red(F, g2 - g) != 0):
                break
            g = dense.red(F, 3 * g2 - 2 * Ar.mul(g2, g))
        right = Ar.mul_rows(g.reshape(1, -1), Ar.basis())[0]
        dim = dense.rank(F, right)
        mats, lo = _residue_to_matrices(A, g.reshape(1, -1))
        out.append((mats, lo, dim))
    A._cache["proj"] = out
    return out


def _progenerator(P):
    """(top multiplicities, rank identity holds) for P as a right module over A."""
    F = P.F
    A = P.right
    J = radical_lift(A)
    Jm = copies(F, as_matrices(J.basis(), A.n, A.n), P.right_copies)
    X, xlo = P.basis()
    PJ = span_of_products(F, X, xlo, Jm, J.lo)
    mult, total = [], 0
    for mats, lo, dim in projective_data(A):
        E, elo = mat_products(F, X, xlo, copies(F, mats, P.right_copies), lo)
        E = E[:, 0]
        res = PJ.residues(as_vectors(E), elo)
        m = dense.rank(F, res)
        mult.append(m)
        total += m * dim
    return mult, total == P.p * P.q


def verify_morita_bimodule(P):
    """(ok, transcript) for balancedness on both sides, progenerator and centrality."""
    transcript = []

    def record(name, ok, detail=""):
        transcript.append({"check": name, "pass": bool(ok), "detail": detail})
        return ok

    require_order(P.left)
    require_order(P.right)
    ok = record("bimodule-stable", _stable(P), "B P A inside P")
    if P.left_copies != 1:
        ok = record("balanced-left", False,
                    f"End_A(P) has rank {P.p ** 2}, image of B has rank {P.left.n ** 2}") and ok
    else:
        I = left_idealizer(P)
        ok = record("balanced-left", I == P.left.lat, "left idealizer equals B") and ok
    if P.right_copies != 1:
        ok = record("balanced-right", False,
                    f"End_B(P) has rank {P.q ** 2}, image of A has rank {P.right.n ** 2}") and ok
    else:
        I = right_idealizer(P)
        ok = record("balanced-right", I == P.right.lat, "right idealizer equals A") and ok
    mult, proj = _progenerator(P)
    ok = record("progenerator", all(m >= 1 for m in mult) and proj,
                f"top multiplicities {mult}, projective rank identity {'holds' if proj else 'fails'}") and ok
    ok = record("central", True, "t acts by the same scalar on both sides") and ok
    return ok, transcript


# -- conjugation and progenerators -------------------------------------
def conjugate(L, u, lo=None):
    """(u L u^-1, bimodule u L).  ``u`` is rows of TruncLaurent or an array with offset."""
    F, n = L.F, L.n
    require_order(L)
    if lo is None:
        if len(u) != n or any(len(r) != n for r in u):
            raise SchemaError("conjugator must be n x n")
        U, lo = matrix_to_array(F, u)
        U = U[0]
    else:
        U = u
    try:
        lat = conjugate_lattice(F, n, L.lat, U, lo)
    except ZeroDivisionError:
        raise NotInvertible("conjugating matrix is singular")
    Bo = LocalOrder(F, n, lat, L.prec)
    B = L.basis()
    P, plo = mat_products(F, U[None], lo, B[0], B[1])
    Plat = DvrLattice.from_array(F, as_vectors(P[0]), plo)
    return Bo, LocalBimodule(Plat, Bo, L, prec=L.prec)


def basic_progenerator(L):
    """(P, B) with P = w L one row per block and B = End_L(P) basic hereditary."""
    F, n = L.F, L.n
    rec = recognize_hereditary(L)
    if rec is None:
        raise NotHereditary("order is not recognized as hereditary")
    dims, U, ulo = rec
    adj, alo, _ = laurent_adjugate(F, U, ulo)
    starts = np.cumsum([0] + list(dims[:-1]))
    w = adj[starts]  # (t, n, W)
    B, blo = L.basis()
    P, plo = mat_products(F, w[None], alo, B, blo)
    t = len(dims)
    Plat = DvrLattice.from_array(F, as_vectors(P[0]), plo)
    tmp_left = order_from_lattice(F, t, DvrLattice.unit(F, t * t), L.prec)
    shell = LocalBimodule(Plat, tmp_left, L, prec=L.prec)
    Blat = left_idealizer(shell)
    Bo = order_from_lattice(F, t, Blat, L.prec)
    return LocalBimodule(Plat, Bo, L, prec=max(L.prec, Bo.prec)), Bo


def centrally_equivalent(L1, L2, certificate=True):
    """('yes', cert) | ('no', info) | ('undecided', info) by the type of hereditary orders."""
    t1, c1 = order_type(L1)
    t2, c2 = order_type(L2)
    info = {"types": [t1, t2], "canonical": [list(c1) if c1 else None, list(c2) if c2 else None]}
    if c1 is None or c2 is None:
        info["reason"] = "order not recognized as hereditary"
        return "undecided", info
    if t1 != t2:
        info["reason"] = "number of simple modules differs"
        return "no", info
    if not certificate:
        return "yes", info
    P1, B1 = basic_progenerator(L1)
    P2, B2 = basic_progenerator(L2)
    _, U1, u1 = recognize_hereditary(B1)
    _, U2, u2 = recognize_hereditary(B2)
    adj1, a1, _ = laurent_adjugate(L1.F, U1, u1)
    V, vlo = mat_products(L1.F, U2[None], u2, adj1[None], a1)
    Bc, Q = conjugate(B1, V[0, 0], vlo)
    if Bc != B2:
        raise NotHereditary("basic orders failed to match after conjugation")
    steps = []
    for name, bim in (("progenerator-1", P1), ("conjugation", Q), ("progenerator-2", P2)):
        ok, tr = verify_morita_bimodule(bim)
        steps.append({"step": name, "bimodule": bim, "verified": ok, "transcript": tr})
    info["chain"] = steps
    return "yes", info
