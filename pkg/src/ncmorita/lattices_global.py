"""Lattices over k[x], completions at rational points and local modification."""
import numpy as np

from .errors import (ClosureCheckFailed, InconsistentRank, NonRationalPoint, NotStable,
                     PrecisionExhausted, SchemaError, BadParameters)
from .exact_core import dense, polys
from .exact_core.dvr import DvrLattice, matrix_from_json
from .exact_core.field import FieldSpec
from .exact_core.hnf import columns, from_columns, hnf_columns, triangular_solve, hnf_key
from .exact_core.points import ClosedPoint
from .exact_core.polys import RatFunc
from .exact_core.series import _series_inverse
from . import local_orders as lo

DEFAULT_PRECISION = 12


def _one(F):
    return F.poly([1])


def _is_zero(f):
    return f.degree() < 0


# -- global lattices ---------------------------------------------------
class GlobalLattice:
    """(1/den) times the column span of an HNF basis over k[x]."""

    __slots__ = ("F", "n", "den", "H", "_key")

    def __init__(self, F, n, den, H):
        self.F, self.n, self.den, self.H = F, n, den, H
        self._key = None

    @classmethod
    def from_numerators(cls, F, n, cols, den=None):
        """Span of polynomial columns divided by a common denominator."""
        den = _one(F) if den is None else polys.monic(den)
        H = hnf_columns(F, [[F.coerce_poly(e) for e in c] for c in cols], n)
        g = den
        for c in H:
            for e in c:
                if not _is_zero(e):
                    g = g.gcd(e)
        if g.degree() > 0:
            g = polys.monic(g)
            den = polys.exact_div(den, g)
            H = [[polys.exact_div(e, g) if not _is_zero(e) else e for e in c] for c in H]
        return cls(F, n, den, from_columns(H, n))

    @classmethod
    def from_columns(cls, F, n, cols):
        """Span of RatFunc (or polynomial) columns."""
        cols = [[e if isinstance(e, RatFunc) else RatFunc(F, e) for e in c] for c in cols]
        D = _one(F)
        for c in cols:
            for e in c:
                D = polys.lcm(D, e.den)
        nums = [[e.num * polys.exact_div(D, e.den) for e in c] for c in cols]
        return cls.from_numerators(F, n, nums, D)

    @classmethod
    def standard(cls, F, n):
        return cls.from_numerators(F, n, [[_one(F) if i == j else F.poly([]) for i in range(n)]
                                          for j in range(n)])

    @classmethod
    def diagonal(cls, F, diag):
        n = len(diag)
        return cls.from_columns(F, n, [[d if i == j else F.poly([]) for i in range(n)]
                                       for j, d in enumerate(diag)])

    # -- data ---------------------------------------------------------
    def numerator_columns(self):
        return columns(self.H)

    def cols(self):
        return [[RatFunc(self.F, e, self.den) for e in c] for c in columns(self.H)]

    def key(self):
        if self._key is None:
            self._key = (self.n, polys.poly_key(self.F, self.den), hnf_key(self.F, self.H))
        return self._key

    def __eq__(self, other):
        return isinstance(other, GlobalLattice) and self.F == other.F and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GlobalLattice(n={self.n}, den={self.den}, diag={[self.H[i][i] for i in range(self.n)]})"

    def index_poly(self):
        """den^n / det: its zeros and poles are where L differs from k[x]^n."""
        d = _one(self.F)
        for i in range(self.n):
            d = d * self.H[i][i]
        return d, polys.poly_pow(self.F, self.den, self.n)

    def special_points(self):
        """Closed points where the completion can differ from the standard lattice."""
        d, e = self.index_poly()
        pts = {}
        for f in (d, e):
            for g, _ in polys.factor(self.F, f):
                p = ClosedPoint(self.F, g)
                pts[p.key()] = p
        return [pts[k] for k in sorted(pts)]

    # -- membership ---------------------------------------------------
    def solve_numerator(self, P, D=None):
        """Polynomial coordinates q with P / D = (1/den) H q, or None."""
        F = self.F
        D = _one(F) if D is None else D
        v = []
        for e in P:
            q, r = divmod(F.coerce_poly(e) * self.den, D)
            if not _is_zero(r):
                return None
            v.append(q)
        return triangular_solve(F, self.H, v)

    def contains_numerator(self, P, D=None):
        return self.solve_numerator(P, D) is not None

    def contains(self, v):
        """Membership of a vector of RatFunc."""
        D = _one(self.F)
        for e in v:
            D = polys.lcm(D, e.den)
        P = [e.num * polys.exact_div(D, e.den) for e in v]
        return self.contains_numerator(P, D)

    def contains_lattice(self, other):
        return all(self.contains_numerator(c, other.den) for c in other.numerator_columns())

    # -- arithmetic ---------------------------------------------------
    def scaled(self, c):
        """c L for a nonzero RatFunc or polynomial c."""
        c = c if isinstance(c, RatFunc) else RatFunc(self.F, c)
        return GlobalLattice.from_numerators(self.F, self.n,
                                             [[e * c.num for e in col] for col in self.numerator_columns()],
                                             self.den * c.den)

    def __add__(self, other):
        D = polys.lcm(self.den, other.den)
        a, b = polys.exact_div(D, self.den), polys.exact_div(D, other.den)
        cols = [[e * a for e in c] for c in self.numerator_columns()]
        cols += [[e * b for e in c] for c in other.numerator_columns()]
        return GlobalLattice.from_numerators(self.F, self.n, cols, D)

    def dual(self):
        """{y : y^T x in k[x] for all x in L} = den (H^-1)^T k[x]^n."""
        F, n = self.F, self.n
        # H^-1 by back substitution on the upper-triangular H, with denominator det
        det = _one(F)
        for i in range(n):
            det = det * self.H[i][i]
        inv_cols = []
        for j in range(n):
            e = [F.poly([]) for _ in range(n)]
            e[j] = det
            x = triangular_solve(F, self.H, e)
            assert x is not None
            inv_cols.append(x)
        # inverse has columns inv_cols / det; the dual is spanned by the rows of den * H^-1
        rows = [[inv_cols[j][i] * self.den for j in range(n)] for i in range(n)]
        return GlobalLattice.from_numerators(F, n, rows, det)

    def intersect(self, other):
        return (self.dual() + other.dual()).dual()

    # -- JSON ---------------------------------------------------------
    def to_json(self):
        return {"field": self.F.to_json(), "n": self.n, "den": polys.poly_to_json(self.F, self.den),
                "basis": [[polys.poly_to_json(self.F, e) for e in row] for row in self.H]}

    @classmethod
    def from_json(cls, obj, F=None, path="$"):
        if not isinstance(obj, dict):
            raise SchemaError("lattice must be an object", path)
        if F is None:
            F = FieldSpec.from_json(obj.get("field"), path + ".field")
        for k in ("n", "basis"):
            if k not in obj:
                raise SchemaError(f"lattice missing '{k}'", path)
        n = obj["n"]
        if not isinstance(n, int) or n < 1:
            raise SchemaError("n must be a positive integer", path + ".n")
        den = polys.poly_from_json(F, obj.get("den", [1]), path + ".den")
        if den.degree() < 0:
            raise SchemaError("denominator must be nonzero", path + ".den")
        B = obj["basis"]
        if not isinstance(B, list) or len(B) != n or not all(isinstance(r, list) for r in B):
            raise SchemaError("basis must have n rows", path + ".basis")
        m = len(B[0])
        rows = []
        for i, r in enumerate(B):
            if len(r) != m:
                raise SchemaError("ragged basis", f"{path}.basis[{i}]")
            rows.append([polys.poly_from_json(F, e, f"{path}.basis[{i}][{j}]") for j, e in enumerate(r)])
        return cls.from_numerators(F, n, columns(rows), den)


# -- completion --------------------------------------------------------
def _rational_root(m):
    if m.is_infinity:
        raise NonRationalPoint("the affine chart has no point at infinity")
    if not m.is_rational:
        raise NonRationalPoint(f"completion at {m} needs residue field arithmetic beyond the base field")
    return m.root()


def expand_at(F, P, D, a, hi):
    """Laurent expansions of P(x)/D(x) at x = a + t, exponents below hi.

    P is a list of polynomial vectors; returns a natural array (m, n, W) and offset."""
    Ds = polys.taylor_shift(F, D, a)
    v = polys.valuation(Ds, F.gen())
    u = polys.exact_div(Ds, polys.poly_pow(F, F.gen(), v))
    lo_ = -v
    W = max(hi - lo_, 1)
    uinv = _series_inverse(F, u, W)
    m, n = len(P), len(P[0])
    out = dense.zeros(F, (m, n, W))
    for k, vec in enumerate(P):
        for r, e in enumerate(vec):
            if _is_zero(e):
                continue
            s = (polys.taylor_shift(F, F.coerce_poly(e), a) * uinv).coeffs()[:W]
            for i, c in enumerate(s):
                if c != 0:
                    out[k, r, i] = dense.scalar(F, c)
    return out, lo_


def complete_at(L, m):
    """The completion of L at a rational point as an exact DvrLattice.

    With den(a + t) = t^v u(t) the completion is t^-v times the span S of
    the shifted numerator columns, since u is a unit.  S has index
    d = v_t(det) in R^n, so t^d R^n lies in S and the columns only matter
    modulo t^(d+1)."""
    F, n = L.F, L.n
    a = _rational_root(m)
    t = F.gen()
    v = polys.valuation(polys.taylor_shift(F, L.den, a), t)
    d = sum(polys.valuation(polys.taylor_shift(F, L.H[i][i], a), t) for i in range(n))
    if d == 0:
        return DvrLattice.unit(F, n).scaled(-v)
    arr = dense.zeros(F, (n, n, d + 1))
    for j, c in enumerate(L.numerator_columns()):
        for r, e in enumerate(c):
            if _is_zero(e):
                continue
            for i, x in enumerate(polys.taylor_shift(F, e, a).coeffs()[:d + 1]):
                if x != 0:
                    arr[j, r, i] = dense.scalar(F, x)
    return DvrLattice.from_array(F, arr, 0, prec=d + 1).scaled(-v)


class CompletionAssignment:
    """A prescribed lattice in the completion at a rational point."""

    __slots__ = ("point", "lat", "prec")

    def __init__(self, point, lat, prec=DEFAULT_PRECISION):
        self.point, self.lat, self.prec = point, lat, prec
        need = 2 * max(abs(e) for e in lat.exps + (lat.bound, lat.floor))
        if prec <= need:
            raise PrecisionExhausted(f"precision {prec} must exceed {need} for this assignment")

    @classmethod
    def from_json(cls, obj, F, prec=None, path="$"):
        if not isinstance(obj, dict):
            raise SchemaError("assignment must be an object", path)
        for k in ("point", "basis"):
            if k not in obj:
                raise SchemaError(f"assignment missing '{k}'", path)
        point = ClosedPoint.from_json(F, obj["point"], path + ".point")
        p = obj.get("prec", prec if prec is not None else DEFAULT_PRECISION)
        if not isinstance(p, int):
            raise SchemaError("prec must be an integer", path + ".prec")
        rows = matrix_from_json(F, obj["basis"], path + ".basis", default_prec=p)
        n = len(rows)
        cols = [[rows[i][j] for i in range(n)] for j in range(len(rows[0]))]
        return cls(point, DvrLattice.from_vectors(F, n, cols), p)

    def to_json(self, prec=None):
        prec = self.prec if prec is None else prec
        return {"point": self.point.to_json(), "prec": prec, "basis": self.lat.to_json(prec)}


def _check_assignments(L_n, assignments):
    seen = set()
    for a in assignments:
        if a.point.key() in seen:
            raise BadParameters(f"point {a.point} assigned twice")
        seen.add(a.point.key())
        if a.lat.N != L_n:
            raise InconsistentRank(f"assignment at {a.point} has rank {a.lat.N}, lattice has rank {L_n}")
        _rational_root(a.point)


def _gap(inner, outer):
    """Least s >= 0 with t^s inner inside outer."""
    s = max(0, outer.bound - inner.floor)
    while s > 0 and outer.contains_lattice(inner.scaled(s - 1)):
        s -= 1
    return s


def regular_scaling_element(L, assignments):
    """a = prod p_m^e_m with e_m minimal such that a N(m) lies in the completion of L."""
    F = L.F
    _check_assignments(L.n, assignments)
    a = _one(F)
    for asg in assignments:
        e = _gap(asg.lat, complete_at(L, asg.point))
        a = a * polys.poly_pow(F, asg.point.poly, e)
    return a


def local_modification(L, assignments):
    """The unique lattice with the prescribed completions and L elsewhere.

    Scale by the regular element a so every N(m) lies in M = L/a, take
    f = prod p_m^g_m with f M inside every N(m), then lift the kernel of
    the finite map M/fM -> sum of M(m)/N(m) and add f M."""
    F, n = L.F, L.n
    _check_assignments(n, assignments)
    if not assignments:
        return L
    a = regular_scaling_element(L, assignments)
    M = L.scaled(RatFunc(F, _one(F), a)) if a.degree() > 0 else L
    f = _one(F)
    for asg in assignments:
        g = _gap(complete_at(M, asg.point), asg.lat)
        f = f * polys.poly_pow(F, asg.point.poly, g)
    d = f.degree()
    Mcols = M.numerator_columns()
    if d == 0:
        return M
    x = F.gen()
    basis = []
    xk = _one(F)
    for k in range(d):
        for c in Mcols:
            basis.append([e * xk for e in c])
        xk = xk * x
    blocks = []
    for asg in assignments:
        arr, alo = expand_at(F, basis, M.den, asg.point.root(), asg.lat.bound + 1)
        blocks.append(asg.lat.residues(arr, alo))
    Phi = np.concatenate(blocks, axis=1)
    ker = dense.left_nullspace(F, Phi)
    gens = [[e * f for e in c] for c in Mcols]
    for row in ker:
        vec = [F.poly([]) for _ in range(n)]
        for coef, b in zip(dense.to_scalars(F, row), basis):
            if coef != 0:
                vec = [v + coef * e for v, e in zip(vec, b)]
        gens.append(vec)
    return GlobalLattice.from_numerators(F, n, gens, M.den)


def _single_point_oracle(cur, asg):
    """cur modified at one point by sums and intersections of global lattices."""
    F, n = cur.F, cur.n
    m, N = asg.point, asg.lat
    a = m.root()
    p = m.poly
    # global lattice G whose completion at m is N: canonical columns in x - a
    Lm = complete_at(cur, m)
    B = N.basis()
    cols = []
    for j in range(n):
        col = []
        for r in range(n):
            c = F.poly(dense.to_scalars(F, B[j, r]))
            col.append(polys.taylor_shift(F, c, -a) if c.degree() > 0 else c)
        cols.append(col)
    shift = -N.lo if N.lo < 0 else 0
    G = GlobalLattice.from_numerators(F, n, cols, polys.poly_pow(F, p, shift)) if shift else \
        GlobalLattice.from_numerators(F, n, [[e * polys.poly_pow(F, p, N.lo) for e in c] for c in cols])
    K = max(0, N.bound - Lm.floor)
    K2 = max(0, Lm.bound - N.floor)
    X = G + cur.scaled(polys.poly_pow(F, p, K))
    Y = cur.scaled(RatFunc(F, _one(F), polys.poly_pow(F, p, K2)))
    return X.intersect(Y)


def intersect_from_completions(reference, overrides):
    """{x : x in the prescribed lattice at each listed point, in the reference elsewhere}."""
    _check_assignments(reference.n, overrides)
    cur = reference
    for asg in overrides:
        cur = _single_point_oracle(cur, asg)
    return cur


# -- global orders -----------------------------------------------------
def _poly_matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][l] * B[l][j] for l in range(k)), A[0][0] * 0) for j in range(m)] for i in range(n)]


class GlobalOrder:
    """A k[x]-lattice in Mat_n(k(x)) (row-major coordinates) claimed to be an order."""

    __slots__ = ("F", "n", "lat")

    def __init__(self, n, lat):
        if lat.n != n * n:
            raise SchemaError("order lattice rank differs from n^2")
        self.F, self.n, self.lat = lat.F, n, lat

    @classmethod
    def matrix_algebra(cls, F, n):
        return cls(n, GlobalLattice.standard(F, n * n))

    def basis_numerators(self):
        """Basis elements as polynomial n x n matrices over the common denominator."""
        n = self.n
        return [[c[i * n:(i + 1) * n] for i in range(n)] for c in self.lat.numerator_columns()]

    def contains_matrix(self, P, D=None):
        return self.lat.contains_numerator([e for row in P for e in row], D)

    def verify(self):
        """(ok, diagnostic) for unit membership and closure of basis products."""
        F, n = self.F, self.n
        I = [[_one(F) if i == j else F.poly([]) for j in range(n)] for i in range(n)]
        diag = {"unit": self.contains_matrix(I)}
        B = self.basis_numerators()
        D2 = self.lat.den * self.lat.den
        closed = True
        for X in B:
            for Y in B:
                if not self.contains_matrix(_poly_matmul(X, Y), D2):
                    closed = False
                    break
            if not closed:
                break
        diag["closed"] = closed
        return diag["unit"] and closed, diag

    def complete_at(self, m, prec=DEFAULT_PRECISION):
        return lo.LocalOrder(self.F, self.n, complete_at(self.lat, m), prec, relax=True)

    def __eq__(self, other):
        return isinstance(other, GlobalOrder) and self.n == other.n and self.lat == other.lat

    def __hash__(self):
        return hash((self.n, self.lat.key()))

    def to_json(self):
        F = self.F
        gens = [[[polys.poly_to_json(F, e) for e in row] for row in X] for X in self.basis_numerators()]
        return {"field": F.to_json(), "n": self.n, "den": polys.poly_to_json(F, self.lat.den),
                "generators": gens}

    @classmethod
    def from_json(cls, obj, F=None, path="$"):
        if not isinstance(obj, dict):
            raise SchemaError("global order must be an object", path)
        if F is None:
            F = FieldSpec.from_json(obj.get("field"), path + ".field")
        if "matrix_algebra" in obj:
            n = obj["matrix_algebra"]
            if not isinstance(n, int) or n < 1:
                raise SchemaError("matrix_algebra must be a positive integer", path + ".matrix_algebra")
            return cls.matrix_algebra(F, n)
        for k in ("n", "generators"):
            if k not in obj:
                raise SchemaError(f"global order missing '{k}'", path)
        n = obj["n"]
        if not isinstance(n, int) or n < 1:
            raise SchemaError("n must be a positive integer", path + ".n")
        den = polys.poly_from_json(F, obj.get("den", [1]), path + ".den")
        gens = obj["generators"]
        if not isinstance(gens, list) or not gens:
            raise SchemaError("generators must be a nonempty array", path + ".generators")
        cols = []
        for k, g in enumerate(gens):
            p = f"{path}.generators[{k}]"
            if not isinstance(g, list) or len(g) != n or any(not isinstance(r, list) or len(r) != n for r in g):
                raise SchemaError("generator must be an n x n matrix", p)
            cols.append([RatFunc.from_json(F, e, f"{p}[{i}][{j}]") / RatFunc(F, den)
                         for i, r in enumerate(g) for j, e in enumerate(r)])
        return cls(n, GlobalLattice.from_columns(F, n * n, cols))


def local_modification_order(A, assignments):
    """Order with prescribed completions (LocalOrder per point), A elsewhere."""
    asg = [CompletionAssignment(m, L.lat, max(L.prec, 2 * max(abs(e) for e in L.lat.exps + (L.lat.bound,
                                                                                               L.lat.floor)) + 1))
           for m, L in assignments]
    lat = local_modification(A.lat, asg)
    out = GlobalOrder(A.n, lat)
    ok, diag = out.verify()
    if not ok:
        raise ClosureCheckFailed(f"modified lattice is not an order: {diag}")
    return out


def _stable_under(order_lat, n, N):
    """Is N (rank n*k, row-major n x k matrices) stable under the completed order (rank n^2)?"""
    F = N.F
    k = N.N // n
    X = lo.as_matrices(order_lat.basis(), n, n)
    V = N.basis()
    P, plo = lo.mat_products(F, X, order_lat.lo, V.reshape(V.shape[0], n, k, V.shape[2]), N.lo)
    a, b, r, c, W = P.shape
    return bool(np.all(N.contains_array(P.reshape(a * b, r * c, W), plo)))


def local_modification_module(A, L, assignments):
    """A-lattice with prescribed completions (DvrLattice per point), L elsewhere.

    L has rank n*k and lives in n x k matrices (row-major coordinates); A acts
    on the left.  k = 1 is a column module, k = n makes A itself a module."""
    n = A.n
    if L.n % n:
        raise InconsistentRank("module rank is not a multiple of the matrix size of the order")
    k = L.n // n
    for m, N in assignments:
        if N.N != L.n:
            raise InconsistentRank(f"assignment at {m} has rank {N.N}")
        if not _stable_under(complete_at(A.lat, m), n, N):
            raise NotStable(f"assigned lattice at {m} is not stable under the completed order")
    asg = [CompletionAssignment(m, N, 2 * max(abs(e) for e in N.exps + (N.bound, N.floor)) + 1 + DEFAULT_PRECISION)
           for m, N in assignments]
    out = local_modification(L, asg)
    D = A.lat.den * out.den
    zero = A.F.poly([])
    for X in A.basis_numerators():
        for c in out.numerator_columns():
            v = [sum((X[i][j] * c[j * k + s] for j in range(n)), zero) for i in range(n) for s in range(k)]
            if not out.contains_numerator(v, D):
                raise ClosureCheckFailed("modified lattice is not stable under the order")
    return out


# -- lattices over conductor-presented subrings -------------------------
class RLattice:
    """{v in hull : coordinates of v modulo conductor * hull lie in a k-subspace}.

    Coordinates of v = (1/den) H q are the coefficients of q_j mod conductor,
    ordered (basis column j, power k) with index j * deg(conductor) + k."""

    __slots__ = ("F", "hull", "conductor", "sub", "piv")

    def __init__(self, hull, conductor, subspace):
        self.F = hull.F
        self.hull = hull
        self.conductor = polys.monic(hull.F.coerce_poly(conductor))
        dim = hull.n * self.conductor.degree()
        sub = dense.asarray(self.F, subspace) if not isinstance(subspace, np.ndarray) else subspace
        sub = sub.reshape(-1, dim) if sub.size else dense.zeros(self.F, (0, dim))
        self.sub, self.piv = dense.rref(self.F, sub)

    @property
    def n(self):
        return self.hull.n

    @property
    def dim(self):
        return self.hull.n * self.conductor.degree()

    def coordinates(self, q):
        F, d = self.F, self.conductor.degree()
        out = dense.zeros(F, (self.dim,))
        for j, e in enumerate(q):
            r = divmod(e, self.conductor)[1]
            for k, c in enumerate(r.coeffs()):
                if c != 0:
                    out[j * d + k] = dense.scalar(F, c)
        return out

    def _in_sub(self, coords):
        res = dense.reduce_rows(self.F, coords.reshape(1, -1), self.sub, self.piv)
        return not np.any(res != 0)

    def contains_numerator(self, P, D=None):
        q = self.hull.solve_numerator(P, D)
        return q is not None and self._in_sub(self.coordinates(q))

    def contains(self, v):
        D = _one(self.F)
        for e in v:
            D = polys.lcm(D, e.den)
        return self.contains_numerator([e.num * polys.exact_div(D, e.den) for e in v], D)

    def check_action(self, gens):
        """Is the subspace stable under multiplication by the given polynomials?"""
        F, d = self.F, self.conductor.degree()
        x = F.gen()
        for r in gens:
            r = F.coerce_poly(r)
            for row in self.sub:
                q = []
                for j in range(self.hull.n):
                    e = F.poly(dense.to_scalars(F, row[j * d:(j + 1) * d]))
                    q.append(r * e)
                if not self._in_sub(self.coordinates(q)):
                    return False
        return True

    def conditions(self):
        """Rows c with c . coords = 0 exactly on the subspace."""
        return dense.nullspace(self.F, self.sub, self.dim) if self.sub.shape[0] else dense.identity(self.F, self.dim)

    def to_json(self):
        F = self.F
        return {"hull": self.hull.to_json(), "conductor": polys.poly_to_json(F, self.conductor),
                "subspace": [[F.to_json_scalar(c) for c in dense.to_scalars(F, r)] for r in self.sub]}

    @classmethod
    def from_json(cls, obj, F=None, path="$"):
        if not isinstance(obj, dict):
            raise SchemaError("RLattice must be an object", path)
        if F is None:
            F = FieldSpec.from_json(obj.get("field"), path + ".field")
        for k in ("hull", "conductor", "subspace"):
            if k not in obj:
                raise SchemaError(f"RLattice missing '{k}'", path)
        hull = GlobalLattice.from_json(obj["hull"], F, path + ".hull")
        c = polys.poly_from_json(F, obj["conductor"], path + ".conductor")
        if c.degree() < 1:
            raise SchemaError("conductor must have positive degree", path + ".conductor")
        dim = hull.n * c.degree()
        sub = obj["subspace"]
        if not isinstance(sub, list) or any(not isinstance(r, list) or len(r) != dim for r in sub):
            raise SchemaError(f"subspace rows must have length {dim}", path + ".subspace")
        rows = [[F.from_json_scalar(e, f"{path}.subspace[{i}][{j}]") for j, e in enumerate(r)]
                for i, r in enumerate(sub)]
        return cls(hull, c, dense.asarray(F, rows) if rows else dense.zeros(F, (0, dim)))


def rlattice_membership(L, v):
    return L.contains(v)
