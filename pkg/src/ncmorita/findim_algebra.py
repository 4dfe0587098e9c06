"""Finite-dimensional algebras given by structure constants.

Elements are coordinate row vectors (numpy arrays, see ``exact_core.dense``).
``mult[i, j, k]`` is the coefficient of b_k in b_i * b_j.
"""
import random
from dataclasses import dataclass, field

import flint
import numpy as np

from .errors import (LengthMismatch, NotSemisimple, NotSplit, SchemaError, SplitFailure,
                     UnsupportedField, BadParameters)
from .exact_core import dense, polys
from .exact_core.field import FieldSpec


class StructAlgebra:
    __slots__ = ("F", "dim", "mult", "unit", "_flat")

    def __init__(self, F, mult, unit, check=True):
        self.F = F
        self.mult = mult if isinstance(mult, np.ndarray) else dense.asarray(F, mult)
        self.unit = unit if isinstance(unit, np.ndarray) else dense.asarray(F, unit)
        d = self.mult.shape[0]
        if self.mult.shape != (d, d, d) or self.unit.shape != (d,):
            raise SchemaError("structure constants must be dim^3 with a dim-vector unit")
        self.dim = d
        self._flat = None
        if check:
            self.verify()

    # -- arithmetic ---------------------------------------------------
    def _mflat(self):
        if self._flat is None:
            self._flat = self.mult.reshape(self.dim, self.dim * self.dim)
        return self._flat

    def left_matrix(self, x):
        """M with y @ M = x * y."""
        return dense.matmul(self.F, x.reshape(1, -1), self._mflat()).reshape(self.dim, self.dim)

    def right_matrix(self, x):
        """M with y @ M = y * x."""
        d = self.dim
        m = np.ascontiguousarray(self.mult.transpose(1, 0, 2)).reshape(d, d * d)
        return dense.matmul(self.F, x.reshape(1, -1), m).reshape(d, d)

    def mul(self, x, y):
        return dense.matmul(self.F, y.reshape(1, -1), self.left_matrix(x)).reshape(-1)

    def mul_rows(self, X, Y):
        """All products X[a] * Y[b] as an array (len X, len Y, dim)."""
        d = self.dim
        a, b = X.shape[0], Y.shape[0]
        XL = dense.matmul(self.F, X, self._mflat()).reshape(a, d, d)
        XL = np.ascontiguousarray(XL.transpose(1, 0, 2)).reshape(d, a * d)
        return np.ascontiguousarray(dense.matmul(self.F, Y, XL).reshape(b, a, d).transpose(1, 0, 2))

    def basis(self):
        return dense.identity(self.F, self.dim)

    def verify(self):
        """Associativity on basis triples and two-sided unit; raises SchemaError."""
        F, d, m = self.F, self.dim, self.mult
        # (b_i b_j) b_k = sum_l m[i,j,l] b_l b_k
        lhs = dense.matmul(F, m.reshape(d * d, d), m.reshape(d, d * d)).reshape(d, d, d, d)
        # b_i (b_j b_k) = sum_l m[j,k,l] b_i b_l
        rhs = np.stack([dense.matmul(F, m.reshape(d * d, d), m[i]).reshape(d, d, d) for i in range(d)])
        if np.any(dense.red(F, lhs - rhs) != 0):
            raise SchemaError("structure constants are not associative")
        I = dense.identity(F, d)
        for M in (self.left_matrix(self.unit), self.right_matrix(self.unit)):
            if np.any(dense.red(F, M - I) != 0):
                raise SchemaError("unit is not a two-sided identity")
        return True

    def trace(self, x):
        M = self.left_matrix(x)
        return dense.red(self.F, np.trace(M)) if not self.F.is_rational else np.trace(M)

    # -- JSON ---------------------------------------------------------
    def to_json(self):
        F = self.F
        sc = lambda c: F.to_json_scalar(F(int(c)) if not F.is_rational else c)
        return {"field": F.to_json(), "dim": self.dim,
                "unit": [sc(c) for c in self.unit],
                "mult": [[[sc(c) for c in row] for row in plane] for plane in self.mult]}

    @classmethod
    def from_json(cls, obj, F=None, path="$"):
        if not isinstance(obj, dict):
            raise SchemaError("algebra must be an object", path)
        if F is None:
            F = FieldSpec.from_json(obj.get("field"), path + ".field")
        for k in ("dim", "unit", "mult"):
            if k not in obj:
                raise SchemaError(f"algebra missing '{k}'", path)
        d = obj["dim"]
        if not isinstance(d, int) or d < 1:
            raise SchemaError("dim must be a positive integer", path + ".dim")
        mult, unit = obj["mult"], obj["unit"]
        if not isinstance(unit, list) or len(unit) != d:
            raise SchemaError("unit must have dim entries", path + ".unit")
        if not isinstance(mult, list) or len(mult) != d:
            raise SchemaError("mult must be dim x dim x dim", path + ".mult")
        m = []
        for i, plane in enumerate(mult):
            if not isinstance(plane, list) or len(plane) != d:
                raise SchemaError("mult must be dim x dim x dim", f"{path}.mult[{i}]")
            rows = []
            for j, row in enumerate(plane):
                if not isinstance(row, list) or len(row) != d:
                    raise SchemaError("mult must be dim x dim x dim", f"{path}.mult[{i}][{j}]")
                rows.append([F.from_json_scalar(c, f"{path}.mult[{i}][{j}][{k}]") for k, c in enumerate(row)])
            m.append(rows)
        u = [F.from_json_scalar(c, f"{path}.unit[{k}]") for k, c in enumerate(unit)]
        return cls(F, dense.asarray(F, m), dense.asarray(F, u))

    # -- constructions ------------------------------------------------
    @classmethod
    def from_matrices(cls, F, mats, check=False):
        """Algebra with the given k-basis of square matrices (closed under products)."""
        B = dense.asarray(F, mats) if not isinstance(mats, np.ndarray) else mats
        d, n, _ = B.shape
        flat = B.reshape(d, n * n)
        prods = np.stack([dense.matmul(F, B[i][None], B).reshape(d, n * n) for i in range(d)])
        coords = dense.solve_rows(F, flat, prods.reshape(d * d, n * n))
        ident = dense.identity(F, n).reshape(1, n * n)
        unit = dense.solve_rows(F, flat, ident).reshape(d)
        return cls(F, coords.reshape(d, d, d), unit, check=check)

    def subquotient(self, basis_rows, ideal_rows=None):
        """Algebra on span(basis_rows) modulo span(ideal_rows).

        basis_rows must span a subalgebra containing the unit and the ideal a
        two-sided ideal of it.  Returns (algebra, lift) where lift rows are
        representatives in the ambient coordinates."""
        F = self.F
        if ideal_rows is None or ideal_rows.shape[0] == 0:
            IR, ipiv = dense.zeros(F, (0, self.dim)), []
        else:
            IR, ipiv = dense.rref(F, ideal_rows)
        red = dense.reduce_rows(F, basis_rows, IR, ipiv)
        Q, qpiv = dense.rref(F, red)
        d = Q.shape[0]
        prods = self.mul_rows(Q, Q).reshape(d * d, self.dim)
        pr = dense.reduce_rows(F, prods, IR, ipiv)
        back = dense.reduce_rows(F, pr, Q, qpiv)
        if np.any(back != 0):
            raise BadParameters("span is not closed under multiplication")
        coords = pr[:, qpiv]
        u = dense.reduce_rows(F, self.unit.reshape(1, -1), IR, ipiv)
        unit = u[:, qpiv].reshape(d)
        return StructAlgebra(F, coords.reshape(d, d, d), unit, check=False), Q

    def quotient(self, ideal_rows):
        return self.subquotient(self.basis(), ideal_rows)


@dataclass
class ModuleRep:
    """Left module: ``action[i]`` is the matrix of b_i acting on column vectors."""
    algebra: StructAlgebra
    dim: int
    action: list = field(default_factory=list)

    def verify(self):
        A, F = self.algebra, self.algebra.F
        acts = [a if isinstance(a, np.ndarray) else dense.asarray(F, a) for a in self.action]
        if len(acts) != A.dim or any(a.shape != (self.dim, self.dim) for a in acts):
            return False
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = dense.matmul(F, acts[i], acts[j])
                rhs = dense.zeros(F, (self.dim, self.dim))
                for k in range(A.dim):
                    c = A.mult[i, j, k]
                    if c != 0:
                        rhs = dense.red(F, rhs + dense.scalar_mul(F, c, acts[k]))
                if np.any(dense.red(F, lhs - rhs) != 0):
                    return False
        U = dense.zeros(F, (self.dim, self.dim))
        for k in range(A.dim):
            if A.unit[k] != 0:
                U = dense.red(F, U + dense.scalar_mul(F, A.unit[k], acts[k]))
        return not np.any(dense.red(F, U - dense.identity(F, self.dim)) != 0)

    @classmethod
    def regular(cls, A):
        acts = [A.left_matrix(A.basis()[i]).T.copy() for i in range(A.dim)]
        return cls(A, A.dim, acts)


# -- center and radical ------------------------------------------------
def center_basis(A):
    """Echelonized basis of {z : z b_i = b_i z for all i}."""
    F, d = A.F, A.dim
    # C[z, (i, k)] = m[z, i, k] - m[i, z, k]
    C = dense.red(F, A.mult - A.mult.transpose(1, 0, 2)).reshape(d, d * d)
    ker = dense.left_nullspace(F, C)
    R, _ = dense.rref(F, ker)
    return R


def _trace_vector(A):
    """tau[k] = trace of left multiplication by b_k."""
    t = np.einsum("kjj->k", A.mult)
    return dense.red(A.F, t)


def _trace_form(A):
    return dense.matmul(A.F, A.mult.reshape(A.dim * A.dim, A.dim),
                        _trace_vector(A).reshape(-1, 1)).reshape(A.dim, A.dim)


def _radical_trace(A):
    ker = dense.left_nullspace(A.F, _trace_form(A))
    return dense.rref(A.F, ker)[0]


def _radical_modular(A):
    """Iterated trace method for small characteristic.

    I_0 = A; I_i = {x in I_(i-1) : g_i(x y) = 0 for all y}, where
    g_i(a) = Tr(lift(L_a)^(p^i)) / p^i mod p on integer lifts of the left
    regular matrices.  The radical is I_l with p^l <= dim < p^(l+1)."""
    F, d = A.F, A.dim
    p = F.characteristic
    I = dense.identity(F, d)
    i = 0
    basisA = A.basis()
    while True:
        q = p ** i
        if q > d or I.shape[0] == 0:
            break
        prods = A.mul_rows(I, basisA)  # (k, j, d)
        vals = np.zeros((I.shape[0], d), dtype=np.int64)
        for k in range(I.shape[0]):
            for j in range(d):
                M = A.left_matrix(prods[k, j])
                Z = flint.fmpz_mat(d, d, [int(c) for c in M.ravel()])
                P = Z ** q if q > 1 else Z
                tr = sum(int(P[r, r]) for r in range(d))
                if tr % q:
                    raise UnsupportedField("trace lift not divisible; hypotheses of the iterated trace method fail")
                vals[k, j] = (tr // q) % p
        ker = dense.left_nullspace(F, vals)
        if ker.shape[0] == 0:
            I = dense.zeros(F, (0, d))
            break
        I = dense.rref(F, dense.matmul(F, ker, I))[0]
        i += 1
    return I


def _span_rref(F, rows, dim):
    if rows.shape[0] == 0:
        return dense.zeros(F, (0, dim)), []
    return dense.rref(F, rows)


def ideal_power_chain(A, J):
    """Spans of J, J^2, ... until zero or stable."""
    F = A.F
    chain = [J]
    cur = J
    for _ in range(A.dim + 1):
        if cur.shape[0] == 0:
            break
        nxt, _ = _span_rref(F, A.mul_rows(cur, J).reshape(-1, A.dim), A.dim)
        if nxt.shape[0] == cur.shape[0]:
            break
        chain.append(nxt)
        cur = nxt
    return chain


def jacobson_radical(A, verify=True):
    """Basis of the Jacobson radical (echelonized)."""
    F = A.F
    if F.is_rational or F.characteristic > A.dim:
        J = _radical_trace(A)
    else:
        J = _radical_modular(A)
    if verify and J.shape[0]:
        chain = ideal_power_chain(A, J)
        if chain[-1].shape[0] != 0:
            raise UnsupportedField("computed radical is not nilpotent")
        # two-sided ideal check
        basisA = A.basis()
        for side in (A.mul_rows(J, basisA), A.mul_rows(basisA, J)):
            R, piv = dense.rref(F, J)
            if np.any(dense.reduce_rows(F, side.reshape(-1, A.dim), R, piv) != 0):
                raise UnsupportedField("computed radical is not an ideal")
        Q, _ = A.quotient(J)
        if F.is_rational or F.characteristic > Q.dim:
            if _radical_trace(Q).shape[0] != 0:
                raise UnsupportedField("quotient by the computed radical is not semisimple")
    return J


# -- idempotents -------------------------------------------------------
def minimal_polynomial(A, x, u=None):
    """Minimal polynomial of x inside the corner algebra with unit u."""
    F = A.F
    u = A.unit if u is None else u
    powers = [u]
    while True:
        P = np.stack(powers)
        ker = dense.left_nullspace(F, P)
        if ker.shape[0]:
            c = ker[0]
            cs = dense.to_scalars(F, c)
            lead = cs[-1]
            return F.poly([ci / lead for ci in cs])
        powers.append(A.mul(powers[-1], x))


def eval_poly(A, f, x, u=None):
    """f(x) computed in the corner with unit u."""
    F = A.F
    u = A.unit if u is None else u
    acc = dense.zeros(F, A.dim)
    for c in reversed(f.coeffs()):
        acc = A.mul(acc, x)
        acc = dense.red(F, acc + dense.scalar_mul(F, c, u))
    return acc


def _crt_idempotents(A, x, u, mp):
    """Idempotents splitting u along the primary factors of mp (>= 2 of them)."""
    F = A.F
    fac = polys.factor(F, mp)
    parts = [polys.poly_pow(F, g, e) for g, e in fac]
    out = []
    for i, q in enumerate(parts):
        Q = F.poly([1])
        for j, r in enumerate(parts):
            if j != i:
                Q = Q * r
        g, s, _ = Q.xgcd(q)
        # s Q = 1 mod q (g is 1 since the parts are coprime)
        out.append(eval_poly(A, divmod(s * Q, mp)[1], x, u))
    return out, fac


def _candidates(A, S, rng_seed=0, extra=64):
    """Deterministic candidate elements of span(S): basis, products, pseudo-random combinations."""
    F = A.F
    m = S.shape[0]
    for i in range(m):
        yield S[i]
    for i in range(m):
        for j in range(i + 1, m):
            yield dense.red(F, S[i] + S[j])
    rng = random.Random(rng_seed)
    for _ in range(extra):
        c = dense.asarray(F, [F(rng.randint(-3, 3)) for _ in range(m)])
        yield dense.matmul(F, c.reshape(1, -1), S).reshape(-1)


def _corner_basis(A, u):
    """Basis of u A u."""
    F = A.F
    B = A.basis()
    left = A.mul_rows(u.reshape(1, -1), B).reshape(A.dim, A.dim)
    both = A.mul_rows(left, u.reshape(1, -1)).reshape(A.dim, A.dim)
    return _span_rref(F, both, A.dim)[0]


def central_idempotents(A):
    """Primitive idempotents of the center, unsorted; SplitFailure on field factors."""
    F = A.F
    Zb = center_basis(A)
    todo = [A.unit]
    done = []
    while todo:
        e = todo.pop()
        split = None
        nonlinear = False
        for z in Zb:
            y = A.mul(z, e)
            mp = minimal_polynomial(A, y, e)
            fac = polys.factor(F, mp)
            if len(fac) >= 2:
                split, _ = _crt_idempotents(A, y, e, mp)
                break
            if fac and fac[0][0].degree() > 1:
                nonlinear = True
        if split is not None:
            todo.extend(split)
            continue
        if nonlinear:
            raise SplitFailure("a central factor is a proper field extension of the base field")
        done.append(e)
    return done


def _sort_rows(F, rows):
    # descending, so a block on the leading basis vectors comes first
    return sorted(rows, key=lambda v: tuple(F.sort_key(c) for c in dense.to_scalars(F, v)), reverse=True)


def block_decompose(A):
    """Central primitive idempotents, sorted lexicographically (descending) by coordinates."""
    return _sort_rows(A.F, central_idempotents(A))


# -- zero divisors in quaternion corners over Q ---------------------------
def _squarefree(n):
    """(s, k) with n = s k^2 and s squarefree (n a nonzero integer)."""
    s, k = (-1 if n < 0 else 1), 1
    for p, e in flint.fmpz(abs(n)).factor():
        p = int(p)
        s *= p ** (e % 2)
        k *= p ** (e // 2)
    return s, k


def _sqrt_mod(a, n):
    """r with r^2 = a mod n for squarefree n > 0, or None."""
    r, m = 0, 1
    for p, _ in flint.fmpz(n).factor():
        p = int(p)
        try:
            rp = int(flint.nmod(a % p, p).sqrt())
        except Exception:
            return None
        # CRT: r = r mod m, r = rp mod p
        r = r + m * ((rp - r) * pow(m, -1, p) % p)
        m *= p
    return r % n if n > 1 else 0


def _legendre(a, b):
    """Nontrivial integers (x, y, z) with a x^2 + b y^2 = z^2 for squarefree a, b, or None."""
    if a == 1:
        return 1, 0, 1
    if b == 1:
        return 0, 1, 1
    if a < 0 and b < 0:
        return None
    if abs(a) > abs(b):
        sol = _legendre(b, a)
        return None if sol is None else (sol[1], sol[0], sol[2])
    if a == b:
        # a x^2 + a y^2 = z^2 iff -1 is a norm from Q(sqrt a): solve x'^2 + y'^2 = a z'^2 via (a, -1)
        sol = _legendre(-1, a)
        if sol is None:
            return None
        u, v, w = sol  # -u^2 + a v^2 = w^2, so a v^2 = u^2 + w^2
        # (u + w)^2 + (u - w)^2 = 2 a v^2; use the composition x = u, y = w, z = a v
        return u, w, a * v
    r = _sqrt_mod(a, abs(b))
    if r is None:
        return None
    if r > abs(b) // 2:
        r -= abs(b)
    c, k = _squarefree((r * r - a) // b)
    sol = _legendre(a, c)
    if sol is None:
        return None
    X, Y, Z = sol
    # N(r + sqrt a) N(Z + X sqrt a) = b c^2 k^2 Y^2
    return r * X + Z, c * k * Y, r * Z + a * X


def _scalar_of(F, x, u):
    """c with x = c u, or None."""
    k = int(np.flatnonzero(u != 0)[0])
    c = dense.to_scalars(F, x)[k] / dense.to_scalars(F, u)[k]
    if np.any(dense.red(F, x - dense.scalar_mul(F, c, u)) != 0):
        return None
    return c


def _quaternion_zero_divisor(A, u, S):
    """A nonzero non-invertible element of the 4-dimensional central simple corner
    span(S) with unit u over Q, or None if the corner is a division algebra."""
    F = A.F
    # reduced trace is half the trace of left multiplication on the corner
    def trd(x):
        L = dense.solve_rows(F, S, A.mul_rows(x.reshape(1, -1), S).reshape(S.shape[0], A.dim))
        return sum(dense.to_scalars(F, np.diagonal(L))) / 2
    tu = trd(u)
    pure = []
    for b in S:
        c = trd(b) / tu
        pure.append(dense.red(F, b - dense.scalar_mul(F, c, u)))
    B0 = _span_rref(F, np.stack(pure), A.dim)[0]
    def sq(x):
        return _scalar_of(F, A.mul(x, x), u)
    i = next(x for x in B0 if np.any(x != 0))
    a = sq(i)
    if a == 0:
        return i
    # anticommutant of i inside the pure part
    M = dense.red(F, A.mul_rows(B0, i.reshape(1, -1)).reshape(-1, A.dim)
                  + A.mul_rows(i.reshape(1, -1), B0).reshape(-1, A.dim))
    ker = dense.left_nullspace(F, M)
    j = dense.matmul(F, ker[:1], B0).reshape(-1)
    b = sq(j)
    if b == 0:
        return j
    # integral squarefree parameters: i -> q i / s with (q i)^2 = p q
    def normalize(x, v):
        v = flint.fmpq(v)
        num, den = int(v.p), int(v.q)
        sf, k = _squarefree(num * den)
        return dense.scalar_mul(F, F(flint.fmpq(den, k)), x), sf
    i, a = normalize(i, a)
    j, b = normalize(j, b)
    sol = _legendre(a, b)
    if sol is None:
        return None
    x, y, z = (F(v) for v in sol)
    # norm of z + x i + y j is z^2 - a x^2 - b y^2 = 0
    w = dense.red(F, dense.scalar_mul(F, z, u) + dense.scalar_mul(F, x, i) + dense.scalar_mul(F, y, j))
    return w


def rank_one_idempotent(A, u):
    """Idempotent f <= u with f A f = k f, inside a simple corner u A u.

    Raises NotSplit when the deterministic search finds none."""
    F = A.F
    for _ in range(A.dim + 1):
        S = _corner_basis(A, u)
        if S.shape[0] == 1:
            return u
        nxt = None
        for x in _candidates(A, S):
            mp = minimal_polynomial(A, x, u)
            fac = polys.factor(F, mp)
            if len(fac) >= 2:
                nxt = _smallest_piece(A, _crt_idempotents(A, x, u, mp)[0])
                break
            g, k = fac[0]
            if k >= 2:
                y = eval_poly(A, polys.poly_pow(F, g, k - 1), x, u)
                nxt = _split_from_nilpotent(A, u, y, S)
                if nxt is not None:
                    break
        if nxt is None and F.is_rational and S.shape[0] == 4:
            w = _quaternion_zero_divisor(A, u, S)
            if w is None:
                raise NotSplit("block is a quaternion division algebra over Q")
            nxt = _split_zero_divisor(A, u, w, S)
        if nxt is None:
            raise NotSplit("no rank-one idempotent found; block is not split over the base field")
        u = nxt
    raise NotSplit("idempotent search did not terminate")


def _split_zero_divisor(A, u, w, S):
    F = A.F
    mp = minimal_polynomial(A, w, u)
    fac = polys.factor(F, mp)
    if len(fac) >= 2:
        return _smallest_piece(A, _crt_idempotents(A, w, u, mp)[0])
    g, k = fac[0]
    return _split_from_nilpotent(A, u, eval_poly(A, polys.poly_pow(F, g, k - 1), w, u), S)


def _smallest_piece(A, ids):
    return min(ids, key=lambda e: _corner_basis(A, e).shape[0])


def _split_from_nilpotent(A, u, y, S):
    F = A.F
    yS = A.mul_rows(y.reshape(1, -1), S).reshape(S.shape[0], A.dim)
    yS = _span_rref(F, yS, A.dim)[0]
    for w in _candidates(A, yS, rng_seed=1):
        mp = minimal_polynomial(A, w, u)
        fac = polys.factor(F, mp)
        if len(fac) >= 2:
            return _smallest_piece(A, _crt_idempotents(A, w, u, mp)[0])
    return None


def wedderburn_sizes(A):
    """Matrix sizes of the simple blocks, ordered as block_decompose."""
    if jacobson_radical(A).shape[0]:
        raise NotSemisimple("algebra has nonzero radical")
    try:
        blocks = block_decompose(A)
    except SplitFailure as exc:
        raise NotSplit(exc.message)
    return [_block_size(A, e) for e in blocks]


def _block_size(A, e):
    F = A.F
    d = _corner_basis(A, e).shape[0]
    f = rank_one_idempotent(A, e)
    Af = _span_rref(F, A.mul_rows(A.basis(), f.reshape(1, -1)).reshape(A.dim, A.dim), A.dim)[0]
    m = Af.shape[0]
    if m * m != d:
        raise NotSplit("block dimension is not the square of its simple module dimension")
    return m


# -- quiver data -------------------------------------------------------
def ext1_matrix(A):
    """Arrow multiplicities: entry (i, j) = multiplicity of S_j in rad P_i / rad^2 P_i."""
    F = A.F
    J = jacobson_radical(A)
    Q, lift = A.quotient(J)
    sizes = wedderburn_sizes(Q)
    blocks = [dense.matmul(F, e.reshape(1, -1), lift).reshape(-1) for e in block_decompose(Q)]
    t = len(blocks)
    J2, _ = _span_rref(F, A.mul_rows(J, J).reshape(-1, A.dim), A.dim) if J.shape[0] else (J, [])
    base = J2.shape[0]
    out = [[0] * t for _ in range(t)]
    for i in range(t):
        Jc = A.mul_rows(J, blocks[i].reshape(1, -1)).reshape(-1, A.dim) if J.shape[0] else J
        for j in range(t):
            if J.shape[0] == 0:
                continue
            cJc = A.mul_rows(blocks[j].reshape(1, -1), Jc).reshape(-1, A.dim)
            r = dense.rank(F, np.concatenate([J2, cJc])) - base
            q, rem = divmod(r, sizes[i] * sizes[j])
            if rem:
                raise NotSplit("bimodule dimension is not a multiple of the simple sizes")
            out[i][j] = q
    return out


def semisimple_bimodule_equal(p, q):
    if len(p) != len(q):
        raise LengthMismatch(f"dimension vectors of lengths {len(p)} and {len(q)}")
    return list(p) == list(q)


# -- global orders by polynomial structure constants -------------------
class PolyStructOrder:
    """A k[x]-order of rank r: ``mult[i][j][k]`` are polynomials, ``unit`` a polynomial vector."""

    def __init__(self, F, mult, unit):
        self.F = F
        self.rank = len(unit)
        self.mult = mult
        self.unit = unit

    def specialize(self, point):
        """A / pA as a k-algebra of dimension rank * deg p (basis x^s b_i)."""
        F, r = self.F, self.rank
        p = point.poly
        dg = p.degree()
        D = r * dg
        idx = lambda i, s: i * dg + s
        m = [[[F.zero] * D for _ in range(D)] for _ in range(D)]
        xs = [divmod(F.poly([0] * s + [1]), p)[1] for s in range(2 * dg - 1)]
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    c = self.mult[i][j][k]
                    if c.degree() < 0:
                        continue
                    for s in range(dg):
                        for u in range(dg):
                            val = divmod(c * xs[s + u], p)[1]
                            for w, cw in enumerate(val.coeffs()):
                                if cw != 0:
                                    m[idx(i, s)][idx(j, u)][idx(k, w)] += cw
        unit = [F.zero] * D
        for i in range(r):
            val = divmod(self.unit[i], p)[1]
            for w, cw in enumerate(val.coeffs()):
                unit[idx(i, w)] += cw
        return StructAlgebra(F, dense.asarray(F, m), dense.asarray(F, unit), check=False)

    @classmethod
    def from_json(cls, F, obj, path="$"):
        if not isinstance(obj, dict) or "mult" not in obj or "unit" not in obj:
            raise SchemaError("polynomial order needs 'mult' and 'unit'", path)
        unit = [polys.poly_from_json(F, u, f"{path}.unit[{i}]") for i, u in enumerate(obj["unit"])]
        r = len(unit)
        mult = obj["mult"]
        if not isinstance(mult, list) or len(mult) != r:
            raise SchemaError("mult must be rank^3", path + ".mult")
        m = [[[polys.poly_from_json(F, c, f"{path}.mult[{i}][{j}][{k}]") for k, c in enumerate(row)]
              for j, row in enumerate(plane)] for i, plane in enumerate(mult)]
        for i, plane in enumerate(m):
            if len(plane) != r or any(len(row) != r for row in plane):
                raise SchemaError("mult must be rank^3", f"{path}.mult[{i}]")
        return cls(F, m, unit)

    def to_json(self):
        F = self.F
        return {"rank": self.rank,
                "unit": [polys.poly_to_json(F, u) for u in self.unit],
                "mult": [[[polys.poly_to_json(F, c) for c in row] for row in plane] for plane in self.mult]}


def maximal_ideals_over_point(order, point):
    """(block index, matrix size) for the blocks of (A/mA)/rad."""
    A = order.specialize(point)
    J = jacobson_radical(A)
    Q, _ = A.quotient(J)
    return list(enumerate(wedderburn_sizes(Q)))
