"""Marked non-commutative curves over the affine and projective line.

A descriptor carries marked local data (type tuples or completed local
orders) and optionally a global order in Mat_n(k(x)), either as a
k[x]-lattice or as an RLattice over a conductor-presented subring.  The
rational algebra is always the split algebra Mat_n(k(x)).
"""
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (BadParameters, ClosureCheckFailed, NonRationalPoint, NotCentral, NotHereditary,
                     SchemaError)
from .exact_core import dense, polys
from .exact_core.dvr import DvrLattice, refit
from .exact_core.field import FieldSpec
from .exact_core.points import ClosedPoint
from .exact_core.series import _series_inverse
from . import findim_algebra as fa
from . import lattices_global as lg
from . import local_orders as lo

DEFAULT_PRECISION = 12
CURVES = ("A1", "P1")


def _zero_poly(F):
    return F.poly([])


def _identity_numerator(F, n):
    return [[F.poly([1]) if i == j else _zero_poly(F) for j in range(n)] for i in range(n)]


def _flat(P):
    return [e for row in P for e in row]


def _hnf_residue(F, H, v):
    """Remainder of the polynomial vector v modulo the column span of the HNF H (linear in v)."""
    n = len(H)
    v = list(v)
    res = [None] * n
    for r in range(n - 1, -1, -1):
        q, rem = divmod(v[r], H[r][r])
        res[r] = rem
        if q.degree() >= 0:
            for i in range(r):
                v[i] = v[i] - q * H[i][r]
    return res


def _coeff_row(F, ps, widths):
    out = []
    for p, w in zip(ps, widths):
        c = list(p.coeffs())[:w] if p.degree() >= 0 else []
        out.extend(dense.scalar(F, x) for x in c)
        out.extend([dense.scalar(F, 0)] * (w - len(c)))
    return out


# -- orders presented over a conductor ---------------------------------
class RLatticeOrder:
    """An order in Mat_n(k(x)) given as an RLattice of rank n^2.

    Elements are hull elements whose coordinates modulo conductor * hull
    lie in the stored subspace; the subring R is spanned by the optional
    center generators."""

    __slots__ = ("n", "rl", "center_generators")

    def __init__(self, n, rl, center_generators=None):
        if rl.n != n * n:
            raise SchemaError("RLattice rank differs from n^2")
        self.n, self.rl = n, rl
        self.center_generators = list(center_generators or [])

    @property
    def F(self):
        return self.rl.F

    @property
    def hull(self):
        return self.rl.hull

    def lifts(self):
        """Numerator matrices (over hull.den) of the subspace basis lifted to the hull."""
        F, n, d = self.F, self.n, self.rl.conductor.degree()
        Hc = self.hull.numerator_columns()
        out = []
        for row in self.rl.sub:
            v = [_zero_poly(F)] * (n * n)
            for j, col in enumerate(Hc):
                q = F.poly(dense.to_scalars(F, row[j * d:(j + 1) * d]))
                if q.degree() >= 0:
                    v = [a + q * b for a, b in zip(v, col)]
            out.append([v[i * n:(i + 1) * n] for i in range(n)])
        return out

    def contains_matrix(self, P, D=None):
        return self.rl.contains_numerator(_flat(P), D)

    def verify(self):
        """(ok, diagnostic): the hull is an order, 1 is a member and lifts multiply into the order.

        With W the lifted subspace, the order is W + c H; since c H is an
        ideal of H only the products of lifts need checking."""
        F, n = self.F, self.n
        ok_hull, _ = lg.GlobalOrder(n, self.hull).verify()
        diag = {"hull_order": ok_hull, "unit": self.contains_matrix(_identity_numerator(F, n))}
        L = self.lifts()
        D2 = self.hull.den * self.hull.den
        coords, closed = [], True
        for X in L:
            for Y in L:
                q = self.hull.solve_numerator(_flat(lg._poly_matmul(X, Y)), D2)
                if q is None:
                    closed = False
                    break
                coords.append(self.rl.coordinates(q))
            if not closed:
                break
        if closed and coords:
            res = dense.reduce_rows(F, np.stack(coords), self.rl.sub, self.rl.piv)
            closed = not np.any(res != 0)
        diag["closed"] = closed
        if self.center_generators:
            diag["center_action"] = self.rl.check_action(self.center_generators)
        return all(diag.values()), diag

    def to_json(self):
        F = self.F
        out = {"field": F.to_json(), "n": self.n, "rlattice": self.rl.to_json()}
        if self.center_generators:
            out["center_generators"] = [polys.poly_to_json(F, g) for g in self.center_generators]
        return out

    @classmethod
    def from_json(cls, obj, F=None, path="$"):
        if F is None:
            F = FieldSpec.from_json(obj.get("field"), path + ".field")
        n = obj.get("n")
        if not isinstance(n, int) or n < 1:
            raise SchemaError("n must be a positive integer", path + ".n")
        rl = lg.RLattice.from_json(obj["rlattice"], F, path + ".rlattice")
        gens = obj.get("center_generators", [])
        if not isinstance(gens, list):
            raise SchemaError("center_generators must be an array", path + ".center_generators")
        gens = [polys.poly_from_json(F, g, f"{path}.center_generators[{i}]") for i, g in enumerate(gens)]
        return cls(n, rl, gens)


def global_order_from_json(obj, F, path="$"):
    if not isinstance(obj, dict):
        raise SchemaError("global order must be an object", path)
    if "rlattice" in obj:
        return RLatticeOrder.from_json(obj, F, path)
    return lg.GlobalOrder.from_json(obj, F, path)


def structure_order(A):
    """Polynomial structure constants of a k[x]-order in its HNF basis."""
    F, n = A.F, A.n
    B = A.basis_numerators()
    den = A.lat.den
    D2 = den * den
    mult = []
    for X in B:
        plane = []
        for Y in B:
            q = A.lat.solve_numerator(_flat(lg._poly_matmul(X, Y)), D2)
            if q is None:
                raise ClosureCheckFailed("basis product leaves the lattice")
            plane.append(q)
        mult.append(plane)
    unit = A.lat.solve_numerator(_flat(_identity_numerator(F, n)))
    if unit is None:
        raise ClosureCheckFailed("identity is not in the lattice")
    return fa.PolyStructOrder(F, mult, unit)


def _fiber_invariants(S, m):
    """(maximal, number of simples) of the completion at m from the fiber S/pS.

    The completion is maximal iff its radical is pS, i.e. the fiber is
    semisimple; the simples correspond to the central components of the
    fiber modulo its radical, each of dimension deg p over k."""
    A = S.specialize(m)
    J = fa.jacobson_radical(A)
    if J.shape[0] == 0:
        return True, 1
    Q, _ = A.quotient(J)
    return False, fa.center_basis(Q).shape[0] // m.degree


# -- the non-regular locus ---------------------------------------------
@dataclass
class LocusPoint:
    """A point of the non-regular locus.

    ``points`` lists the closed points of the line over one point of the
    center (several only for a singular point of the center)."""
    points: tuple
    t: object = None
    canonical: object = None
    hereditary: object = None
    singular_center: bool = False
    center: object = None
    order: object = field(default=None, repr=False)

    @property
    def point(self):
        return self.points[0]

    def key(self):
        return tuple(p.key() for p in self.points)

    def to_json(self):
        F = self.points[0].F
        out = {"points": [p.to_json() for p in self.points], "t": self.t,
               "canonical": list(self.canonical) if self.canonical is not None else None,
               "hereditary": self.hereditary, "singular_center": self.singular_center}
        if self.center is not None:
            out["center"] = [F.to_json_scalar(c) for c in self.center]
        return out


def _local_entry(m, L):
    """LocusPoint for a completed order at a rational point, or None if maximal."""
    try:
        if lo.is_maximal(L):
            return None
    except NotCentral:
        return LocusPoint((m,), singular_center=True, hereditary=False, order=L)
    t, can = lo.order_type(L)
    return LocusPoint((m,), t, can, can is not None, order=L)


def _locus_kx(A, candidates, prec, S=None):
    out = []
    for m in candidates:
        if m.is_rational:
            e = _local_entry(m, A.complete_at(m, prec))
        else:
            S = structure_order(A) if S is None else S
            mx, t = _fiber_invariants(S, m)
            e = None if mx else LocusPoint((m,), t)
        if e is not None:
            out.append(e)
    return out


def _rl_rows(A):
    F, d = A.F, A.rl.conductor.degree()
    N = A.n * A.n
    return [[F.poly(dense.to_scalars(F, row[j * d:(j + 1) * d])) for j in range(N)] for row in A.rl.sub]


def _proj_rank(F, rows, f):
    if not rows:
        return 0
    w = f.degree()
    M = [_coeff_row(F, [divmod(q, f)[1] for q in r], [w] * len(r)) for r in rows]
    return dense.rank(F, dense.asarray(F, M))


def _linkage(F, rows, comps):
    """Finest partition of the conductor components splitting the subspace as a direct sum."""
    def mod(block):
        f = F.poly([1])
        for i in block:
            f = f * comps[i][1]
        return f

    rk = {}

    def rank(block):
        b = tuple(sorted(block))
        if b not in rk:
            rk[b] = _proj_rank(F, rows, mod(b))
        return rk[b]

    def split(block):
        if len(block) == 1:
            return [block]
        first, rest = block[0], block[1:]
        for k in range(0, len(rest)):
            for other in itertools.combinations(rest, k):
                S = (first,) + other
                T = tuple(i for i in block if i not in S)
                if rank(block) == rank(S) + rank(T):
                    return split(S) + split(T)
        return [block]

    return split(tuple(range(len(comps))))


def _rl_completion(A, m, e):
    """Completion of an RLattice order at a rational point isolated in the linkage.

    It equals span_k(images of the lifted subspace) + t^e H^, known
    modulo t^(e + bound(H^) + 1).  Returns None when that k-span is not
    t-stable, i.e. the completed center is not k[[t]]."""
    F, n = A.F, A.n
    a = lg._rational_root(m)
    Hh = lg.complete_at(A.hull, m)
    top = e + Hh.bound + 1
    P, plo = lg.expand_at(F, [_flat(X) for X in A.lifts()], A.hull.den, a, top)
    tail = Hh.scaled(e)
    low = min(plo, tail.floor)
    T = tail.rewindow(low, top)
    G = refit(F, P, plo, low, top)
    gen = np.concatenate([G, T.window_basis()])
    lat = DvrLattice.from_array(F, gen, low, prec=top)
    span = dense.rank(F, T.win.flat(gen))
    if span - T.rows.shape[0] != tail.index_valuation() - lat.index_valuation():
        return None
    return lo.order_from_lattice(F, n, lat, DEFAULT_PRECISION)


def _center_values(gens, pts):
    if not gens or not all(p.is_rational and not p.is_infinity for p in pts):
        return None
    vals = [tuple(g(p.root()) for g in gens) for p in pts]
    return vals[0] if all(v == vals[0] for v in vals) else None


def _locus_rlattice(A, prec):
    F = A.F
    c = A.rl.conductor
    comps = [(ClosedPoint(F, g), polys.poly_pow(F, g, k), k) for g, k in polys.factor(F, c)]
    ckeys = {m.key() for m, _, _ in comps}
    extra = [m for m in A.hull.special_points() if m.key() not in ckeys]
    out = _locus_kx(lg.GlobalOrder(A.n, A.hull), extra, prec)
    rows = _rl_rows(A)
    for block in _linkage(F, rows, [(m, f) for m, f, _ in comps]):
        pts = tuple(sorted((comps[i][0] for i in block), key=lambda p: p.key()))
        if len(block) > 1:
            out.append(LocusPoint(pts, singular_center=True, hereditary=False))
            continue
        m, _, k = comps[block[0]]
        if not m.is_rational:
            raise NonRationalPoint(f"completion of a conductor-presented order at {m}")
        L = _rl_completion(A, m, k)
        if L is None:
            out.append(LocusPoint(pts, singular_center=True, hereditary=False))
            continue
        L = L.with_precision(max(prec, L.prec))
        ent = _local_entry(m, L)
        if ent is not None:
            out.append(ent)
    for ent in out:
        ent.center = _center_values(A.center_generators, ent.points)
    return out


# -- descriptors -------------------------------------------------------
@dataclass
class Mark:
    point: ClosedPoint
    parts: object = None
    order: object = None

    def to_json(self, prec=None):
        out = {"point": self.point.to_json()}
        if self.parts is not None:
            out["type"] = list(self.parts)
        else:
            out["order"] = self.order.to_json(prec)
        return out


class NccDescriptor:
    """A marked curve (A1 or P1) with split rational algebra Mat_rank(k(x)).

    ``global_order`` lives on the affine chart; on P1 the optional
    ``at_infinity`` order lives on the chart y = 1/x and is consulted only
    at y = 0.  Without it the order at infinity is taken to be maximal."""

    def __init__(self, curve, F, rank, marks=(), global_order=None, at_infinity=None, prec=DEFAULT_PRECISION):
        if curve not in CURVES:
            raise SchemaError(f"curve must be one of {CURVES}")
        self.curve, self.F, self.rank = curve, F, rank
        self.marks = sorted(marks, key=lambda mk: mk.point.key())
        self.global_order, self.at_infinity, self.prec = global_order, at_infinity, prec
        keys = [mk.point.key() for mk in self.marks]
        if len(set(keys)) != len(keys):
            raise SchemaError("marked points must be pairwise distinct", "$.marked")
        if curve == "A1" and any(mk.point.is_infinity for mk in self.marks):
            raise SchemaError("the affine line has no point at infinity", "$.marked")
        if curve == "A1" and at_infinity is not None:
            raise SchemaError("'at_infinity' needs the projective line", "$.at_infinity")
        self._locus = None

    @classmethod
    def from_json(cls, obj, prec=None, path="$"):
        if not isinstance(obj, dict):
            raise SchemaError("descriptor must be an object", path)
        curve = obj.get("curve")
        if curve not in CURVES:
            raise SchemaError(f"curve must be one of {CURVES}", path + ".curve")
        F = FieldSpec.from_json(obj.get("field"), path + ".field")
        rank = obj.get("rank")
        if not isinstance(rank, int) or rank < 1:
            raise SchemaError("rank must be a positive integer", path + ".rank")
        prec = DEFAULT_PRECISION if prec is None else prec
        marks = []
        ms = obj.get("marked", [])
        if not isinstance(ms, list):
            raise SchemaError("marked must be an array", path + ".marked")
        for i, mk in enumerate(ms):
            p = f"{path}.marked[{i}]"
            if not isinstance(mk, dict) or "point" not in mk:
                raise SchemaError("mark needs 'point'", p)
            pt = ClosedPoint.from_json(F, mk["point"], p + ".point")
            if "type" in mk:
                parts = mk["type"]
                if (not isinstance(parts, list) or not parts
                        or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in parts)):
                    raise SchemaError("type must be a nonempty list of positive integers", p + ".type")
                if sum(parts) != rank:
                    raise SchemaError(f"type {parts} does not sum to the rank {rank}", p + ".type")
                marks.append(Mark(pt, tuple(parts)))
            elif "order" in mk:
                if not pt.is_rational:
                    raise NonRationalPoint("local orders need a rational point", p + ".point")
                L = lo.LocalOrder.from_json(mk["order"], F, prec, p + ".order")
                if L.n != rank:
                    raise SchemaError("local order size differs from the rank", p + ".order")
                marks.append(Mark(pt, order=L))
            else:
                raise SchemaError("mark needs 'type' or 'order'", p)
        A = obj.get("global_order")
        if A is not None:
            A = global_order_from_json(A, F, path + ".global_order")
            if A.n != rank:
                raise SchemaError("global order size differs from the rank", path + ".global_order")
        B = obj.get("at_infinity")
        if B is not None:
            B = lg.GlobalOrder.from_json(B, F, path + ".at_infinity")
            if B.n != rank:
                raise SchemaError("chart order size differs from the rank", path + ".at_infinity")
        try:
            return cls(curve, F, rank, marks, A, B, prec)
        except SchemaError as exc:
            raise SchemaError(exc.message, exc.path.replace("$", path, 1) if exc.path else path)

    def to_json(self):
        out = {"curve": self.curve, "field": self.F.to_json(), "rank": self.rank,
               "marked": [mk.to_json(self.prec) for mk in self.marks]}
        if self.global_order is not None:
            out["global_order"] = self.global_order.to_json()
        if self.at_infinity is not None:
            out["at_infinity"] = self.at_infinity.to_json()
        return out

    # -- local data ---------------------------------------------------
    def _global_locus(self):
        A = self.global_order
        if isinstance(A, RLatticeOrder):
            out = _locus_rlattice(A, self.prec)
        else:
            out = _locus_kx(A, A.lat.special_points(), self.prec)
        if self.curve == "P1" and self.at_infinity is not None:
            y0 = ClosedPoint.rational(self.F, 0)
            for ent in _locus_kx(self.at_infinity, [y0], self.prec):
                ent.points = (ClosedPoint.infinity(self.F),)
                out.append(ent)
        return out

    def _mark_entry(self, mk):
        if mk.parts is not None:
            if len(mk.parts) == 1:
                return None
            return LocusPoint((mk.point,), len(mk.parts), lo.canonical_rotation(mk.parts), True)
        return _local_entry(mk.point, mk.order)

    def locus(self):
        """Sorted non-regular locus, from the global order when present, else from the marks."""
        if self._locus is not None:
            return self._locus
        if self.global_order is None:
            out = [e for e in (self._mark_entry(mk) for mk in self.marks) if e is not None]
        else:
            out = self._global_locus()
            self._check_marks(out)
        out.sort(key=LocusPoint.key)
        self._locus = out
        return out

    def _check_marks(self, locus):
        by_point = {p.key(): e for e in locus for p in e.points}
        for mk in self.marks:
            e = by_point.get(mk.point.key())
            mine = self._mark_entry(mk)
            if mk.order is not None and mk.point.is_rational:
                ref = self.local_order(mk.point, use_marks=False)
                if ref != mk.order:
                    raise BadParameters(f"marked order at {mk.point} differs from the completed global order")
            t_mark = 1 if mine is None else mine.t
            t_glob = 1 if e is None else e.t
            if t_mark != t_glob or (e is not None and mine is not None and e.canonical is not None
                                    and mine.canonical != e.canonical):
                raise BadParameters(f"marked data at {mk.point} disagree with the global order")

    def local_order(self, m, prec=None, use_marks=True):
        """The completed local order at a rational point (Mat_n(k[[t]]) where regular)."""
        F, n = self.F, self.rank
        prec = self.prec if prec is None else prec
        if use_marks:
            for mk in self.marks:
                if mk.point == m:
                    if mk.order is not None:
                        return mk.order.with_precision(max(prec, mk.order.prec))
                    return lo.standard_hereditary(F, mk.parts, prec)
        if not m.is_rational:
            raise NonRationalPoint(f"completion at {m}")
        A = self.global_order
        if m.is_infinity:
            if self.at_infinity is not None:
                return self.at_infinity.complete_at(ClosedPoint.rational(F, 0), prec)
            return lo.standard_hereditary(F, [n], prec)
        if A is None:
            return lo.standard_hereditary(F, [n], prec)
        if isinstance(A, RLatticeOrder):
            c = A.rl.conductor
            k = polys.valuation(c, m.poly)
            if k == 0:
                return lg.GlobalOrder(n, A.hull).complete_at(m, prec)
            for ent in self.locus():
                if m in ent.points and ent.order is not None:
                    return ent.order
                if m in ent.points:
                    raise NotCentral(f"the center is singular at {m}")
            L = _rl_completion(A, m, k)
            return L.with_precision(max(prec, L.prec))
        return A.complete_at(m, prec)


def non_regular_locus(X):
    if X.global_order is None:
        raise BadParameters("non_regular_locus needs a global order")
    return X.locus()


# -- curve automorphisms -----------------------------------------------
def _proj(F, p):
    if p.is_infinity:
        return (F.one, F.zero)
    return (p.root(), F.one)


def _from_proj(F, v):
    u, w = v
    if w == 0:
        return ClosedPoint.infinity(F)
    return ClosedPoint.rational(F, u / w)


def apply_mobius(F, M, p):
    (a, b), (c, d) = M
    u, w = _proj(F, p)
    return _from_proj(F, (a * u + b * w, c * u + d * w))


def _normalize(F, M):
    flat = [M[0][0], M[0][1], M[1][0], M[1][1]]
    lead = next(x for x in flat if x != 0)
    inv = F.one / lead
    return [[M[0][0] * inv, M[0][1] * inv], [M[1][0] * inv, M[1][1] * inv]]


def _frame(F, pts):
    """Matrix sending infinity, 0, 1 to the three given distinct points."""
    p1, p2, p3 = (_proj(F, p) for p in pts)
    det = p1[0] * p2[1] - p2[0] * p1[1]
    lam = (p3[0] * p2[1] - p2[0] * p3[1]) / det
    mu = (p1[0] * p3[1] - p3[0] * p1[1]) / det
    return [[lam * p1[0], mu * p2[0]], [lam * p1[1], mu * p2[1]]]


def _mat_mul(A, B):
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


def _mat_inv(F, A):
    (a, b), (c, d) = A
    det = a * d - b * c
    return [[d / det, -b / det], [-c / det, a / det]]


def _solve_mobius(F, ys, xs):
    return _normalize(F, _mat_mul(_frame(F, xs), _mat_inv(F, _frame(F, ys))))


def _solve_affine(F, ys, xs):
    if not ys:
        al, be = F.one, F.zero
    elif len(ys) == 1:
        al, be = F.one, xs[0].root() - ys[0].root()
    else:
        y0, y1, x0, x1 = ys[0].root(), ys[1].root(), xs[0].root(), xs[1].root()
        al = (x1 - x0) / (y1 - y0)
        be = x0 - al * y0
    return [[al, be], [F.zero, F.one]]


def _aux_points(F, avoid, k):
    keys = {p.key() for p in avoid}
    out, i = [], 0
    cands = [ClosedPoint.rational(F, 0), ClosedPoint.rational(F, 1), ClosedPoint.infinity(F)]
    while len(out) < k:
        if i < len(cands):
            p = cands[i]
        else:
            j = i - len(cands) + 2
            v = (j // 2) * (1 if j % 2 == 0 else -1)
            p = ClosedPoint.rational(F, v)
        i += 1
        if p.key() not in keys:
            keys.add(p.key())
            out.append(p)
    return out


def point_match(curve, F, src, dst, src_labels=None, dst_labels=None):
    """(Mobius matrix, matching) carrying dst onto src with equal labels, or None.

    ``src`` and ``dst`` are sorted lists of rational points; the first
    success in lexicographic order of the images of dst wins."""
    if len(src) != len(dst):
        return None
    for p in list(src) + list(dst):
        if not p.is_rational:
            raise NonRationalPoint(f"point matching across the non-linear point {p}")
        if curve == "A1" and p.is_infinity:
            raise SchemaError("the affine line has no point at infinity")
    sl = list(src_labels) if src_labels is not None else [0] * len(src)
    dl = list(dst_labels) if dst_labels is not None else [0] * len(dst)
    need = 3 if curve == "P1" else 2
    k = min(need, len(dst))
    aux = _aux_points(F, list(src) + list(dst), need - k) if curve == "P1" else []
    skeys = {p.key(): i for i, p in enumerate(src)}
    for img in itertools.permutations(range(len(src)), k):
        if any(sl[i] != dl[j] for j, i in enumerate(img)):
            continue
        ys = list(dst[:k]) + aux
        xs = [src[i] for i in img] + aux
        M = _solve_mobius(F, ys, xs) if curve == "P1" else _solve_affine(F, ys, xs)
        match, used, ok = [], set(), True
        for j, y in enumerate(dst):
            x = apply_mobius(F, M, y)
            i = skeys.get(x.key())
            if i is None or i in used or sl[i] != dl[j]:
                ok = False
                break
            used.add(i)
            match.append((i, j))
        if ok:
            return M, match
    return None


def pgl2_point_match(src, dst, labels=None):
    """Mobius map over the base field carrying dst onto src, or None."""
    if not src and not dst:
        return None
    F = (src or dst)[0].F
    ls, ld = (labels if labels is not None else (None, None))
    src = sorted(src, key=lambda p: p.key())
    dst = sorted(dst, key=lambda p: p.key())
    out = point_match("P1", F, src, dst, ls, ld)
    return None if out is None else out[0]


# -- Morita decision for hereditary curves -----------------------------
def _mobius_to_json(F, M):
    return [[F.to_json_scalar(c) for c in row] for row in M]


def _mobius_from_json(F, obj, path):
    if not isinstance(obj, list) or len(obj) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in obj):
        raise SchemaError("mobius must be a 2 x 2 matrix", path)
    return [[F.from_json_scalar(e, f"{path}[{i}][{j}]") for j, e in enumerate(r)] for i, r in enumerate(obj)]


def _require_hereditary(X, name):
    for e in X.locus():
        where = ", ".join(str(p) for p in e.points)
        if e.singular_center or e.hereditary is False:
            exc = NotHereditary(f"{name}: local order at {where} is not hereditary")
            exc.points = [p.to_json() for p in e.points]
            raise exc
        if e.hereditary is None:
            exc = NonRationalPoint(f"{name}: heredity at the non-rational point {where} is not decidable")
            exc.points = [p.to_json() for p in e.points]
            raise exc


def _locus_summary(X):
    return [{"point": e.point.to_json(), "t": e.t} for e in X.locus()]


def hereditary_morita_equivalent(X, Y):
    """('yes', certificate) or ('no', info) for hereditary marked curves."""
    if X.curve != Y.curve:
        raise BadParameters("curves of different kinds")
    if X.F != Y.F:
        raise BadParameters("descriptors over different fields")
    F = X.F
    LX, LY = X.locus(), Y.locus()
    info = {"locus_x": _locus_summary(X), "locus_y": _locus_summary(Y)}
    lab = lambda L: sorted((e.t, e.point.degree) for e in L if e.t is not None)
    for e in LX + LY:
        if e.t is None and not e.singular_center:
            raise NonRationalPoint("type at a locus point is unknown")
    _require_hereditary(X, "X")
    _require_hereditary(Y, "Y")
    if lab(LX) != lab(LY):
        info["reason"] = "the multisets of types over the loci differ"
        return "no", info
    src, dst = [e.point for e in LX], [e.point for e in LY]
    res = point_match(X.curve, F, src, dst, [e.t for e in LX], [e.t for e in LY])
    if res is None:
        info["reason"] = "no automorphism of the curve matches the loci with equal types"
        return "no", info
    M, match = res
    cert = {"curve": X.curve, "field": F.to_json(), "mobius": _mobius_to_json(F, M),
            "point_matching": [{"x": LX[i].point.to_json(), "y": LY[j].point.to_json(), "t": LX[i].t}
                               for i, j in match],
            "local_certificates": [{"kind": "hereditary-type", "t": LX[i].t} for i, _ in match]}
    ok, tr = verify_morita_certificate(X, Y, cert)
    if not ok:
        raise ClosureCheckFailed("emitted certificate does not verify")
    cert["transcript"] = tr
    return "yes", cert


# -- certificate verification ------------------------------------------
def _param_series(F, M, y, x, W):
    """Coefficients of t_x = s(t_y) for x = M(y) with W terms (s has valuation 1)."""
    t = F.gen()
    (a, b), (c, d) = M
    ny, dy = (F.poly([1]), t) if y.is_infinity else (F.poly([y.root(), 1]), F.poly([1]))
    P = ny * a + dy * b
    Q = ny * c + dy * d
    if x.is_infinity:
        num, den = Q, P
    else:
        num, den = P - Q * x.root(), Q
    v = polys.valuation(den, t)
    den = polys.exact_div(den, polys.poly_pow(F, t, v))
    num = polys.exact_div(num, polys.poly_pow(F, t, v))
    s = (num * _series_inverse(F, den, W + 1))
    return [F(c) for c in s.coeffs()[:W + 1]] + [F.zero] * max(0, W + 1 - len(s.coeffs()))


def _truncate(F, f, W):
    cs = f.coeffs()[:W]
    return F.poly(cs)


def substitute_lattice(F, lat, s):
    """The lattice with the parameter t replaced by the series s(t) = s_1 t + ... (s_1 != 0)."""
    base_lo, hi = lat.lo, lat.hi
    W = hi - base_lo
    s = list(s)
    if s[0] != 0 or s[1] == 0:
        raise BadParameters("parameter change must have valuation one")
    w = F.poly(s[1:W + 1])  # s = t w
    if base_lo >= 0:
        wl = polys.poly_pow(F, w, base_lo)
    else:
        wl = polys.poly_pow(F, _series_inverse(F, w, W), -base_lo)
    wl = _truncate(F, wl, W)
    B = lat.window_basis()
    m, N, Wb = B.shape
    tw = [F.poly([1])]
    sw = _truncate(F, F.poly(s[:W + 1]), W)
    for _ in range(1, Wb):
        tw.append(_truncate(F, tw[-1] * sw, W))
    out = dense.zeros(F, (m, N, W))
    for k in range(m):
        for r in range(N):
            g = _zero_poly(F)
            for e in range(Wb):
                c = B[k, r, e]
                if c != 0:
                    g = g + tw[e] * F(c)
            g = _truncate(F, g * wl, W)
            for e, c in enumerate(g.coeffs()):
                if c != 0:
                    out[k, r, e] = dense.scalar(F, c)
    return DvrLattice.from_array(F, out, base_lo, prec=hi)


def _transport(F, L, M, y, x):
    """The order at x rewritten in the local parameter at y = M^-1(x)."""
    s = _param_series(F, M, y, x, L.lat.hi - L.lat.lo + 2)
    if s[1] == 1 and all(c == 0 for c in s[2:]):
        return L
    lat = substitute_lattice(F, L.lat, s)
    return lo.LocalOrder(F, L.n, lat, L.prec, relax=True)


def verify_morita_certificate(X, Y, cert, prec=None):
    """(ok, transcript) checking a certificate against two descriptors; stops at the first failure."""
    F = X.F
    tr = []

    def record(name, ok, detail=""):
        tr.append({"check": name, "pass": bool(ok), "detail": detail})
        return ok

    if not isinstance(cert, dict):
        raise SchemaError("certificate must be an object")
    for k in ("mobius", "point_matching", "local_certificates"):
        if k not in cert:
            raise SchemaError(f"certificate missing '{k}'", "$." + k)
    M = _mobius_from_json(F, cert["mobius"], "$.mobius")
    pm = cert["point_matching"]
    lc = cert["local_certificates"]
    if not isinstance(pm, list) or not isinstance(lc, list):
        raise SchemaError("point_matching and local_certificates must be arrays")
    pairs = []
    for i, e in enumerate(pm):
        if not isinstance(e, dict) or "x" not in e or "y" not in e:
            raise SchemaError("matching entry needs 'x' and 'y'", f"$.point_matching[{i}]")
        pairs.append((ClosedPoint.from_json(F, e["x"], f"$.point_matching[{i}].x"),
                      ClosedPoint.from_json(F, e["y"], f"$.point_matching[{i}].y")))
    # (a) the map is an automorphism matching the loci
    (a, b), (c, d) = M
    det = a * d - b * c
    iso = X.curve == Y.curve and det != 0 and (X.curve == "P1" or c == 0)
    if not record("curve-isomorphism", iso,
                  f"{X.curve} vs {Y.curve}, det {F.to_json_scalar(det)}"
                  + ("" if X.curve == "P1" or c == 0 else ", not affine")):
        return False, tr
    LX, LY = X.locus(), Y.locus()
    kx = {p.key(): e for e in LX for p in e.points}
    ky = {p.key(): e for e in LY for p in e.points}
    bad = None
    for x, y in pairs:
        if not (x.is_rational and y.is_rational):
            raise NonRationalPoint("matching across non-rational points")
        if apply_mobius(F, M, y) != x:
            bad = f"map sends {y} to {apply_mobius(F, M, y)}, not {x}"
            break
    if bad is None:
        xs = sorted(x.key() for x, _ in pairs)
        ys = sorted(y.key() for _, y in pairs)
        if (len(set(xs)) != len(xs) or len(set(ys)) != len(ys)
                or xs != sorted(kx) or ys != sorted(ky)):
            bad = "matching is not a bijection between the non-regular loci"
    if not record("locus-matching", bad is None, bad or f"{len(pairs)} matched points"):
        return False, tr
    # (b) split rational algebras of any ranks are Morita equivalent
    record("rational-algebras", True, f"Mat_{X.rank} and Mat_{Y.rank} over k(x) are split")
    # (c) per-point local equivalences
    if len(lc) != len(pairs):
        record("local-certificates", False, "one local certificate per matched pair is required")
        return False, tr
    prec = X.prec if prec is None else prec
    for i, ((x, y), tok) in enumerate(zip(pairs, lc)):
        name = f"local[{i}]"
        if not isinstance(tok, dict) or tok.get("kind") not in ("hereditary-type", "bimodule"):
            raise SchemaError("local certificate kind must be 'hereditary-type' or 'bimodule'",
                              f"$.local_certificates[{i}]")
        ex, ey = kx[x.key()], ky[y.key()]
        if tok["kind"] == "hereditary-type":
            ok = (ex.hereditary is True and ey.hereditary is True and ex.t == ey.t
                  and tok.get("t", ex.t) == ex.t)
            if not record(name, ok, f"types {ex.t} at {x} and {ey.t} at {y}"
                          + ("" if ex.hereditary and ey.hereditary else ", not both hereditary")):
                return False, tr
            continue
        P = lo.LocalBimodule.from_json(tok.get("bimodule"), F, prec, f"$.local_certificates[{i}].bimodule")
        Ax = _transport(F, X.local_order(x, prec), M, y, x)
        By = Y.local_order(y, prec)
        if P.left_copies != 1 or P.right_copies != 1:
            left_ok = right_ok = True
        else:
            left_ok, right_ok = P.left == Ax, P.right == By
        if not record(name + ".orders", left_ok and right_ok,
                      "bimodule acts by the completed orders" if left_ok and right_ok else
                      f"left order matches: {left_ok}, right order matches: {right_ok}"):
            return False, tr
        ok, sub = lo.verify_morita_bimodule(P)
        failed = next((s for s in sub if not s["pass"]), None)
        if not record(name + ".bimodule", ok,
                      "balanced progenerator" if ok else f"{failed['check']}: {failed['detail']}"):
            return False, tr
    return True, tr


# -- centers -----------------------------------------------------------
def _echelon_polys(F, rows, D):
    """RREF with the highest degree as the leading coordinate; polynomials ascending by degree."""
    if rows.shape[0] == 0:
        return []
    R, _ = dense.rref(F, rows[:, ::-1].copy())
    out = [F.poly(dense.to_scalars(F, r[::-1])) for r in R]
    return sorted(out, key=lambda p: p.degree())


def global_center_basis(A, D):
    """k-basis of {p in k[x] : deg p <= D and p Id in A}, echelonized.

    Scalar matrices commute with everything, so membership is the only
    condition."""
    if D < 0:
        return []
    F, n = A.F, A.n
    I = _flat(_identity_numerator(F, n))
    hull = A.hull if isinstance(A, RLatticeOrder) else A.lat
    x = F.gen()
    widths = [hull.H[r][r].degree() for r in range(len(hull.H))]
    rows = []
    for i in range(D + 1):
        v = [e * hull.den * polys.poly_pow(F, x, i) for e in I]
        rows.append(_coeff_row(F, _hnf_residue(F, hull.H, v), widths))
    C = dense.asarray(F, rows)
    S = dense.left_nullspace(F, C) if C.shape[1] else dense.identity(F, D + 1)
    if isinstance(A, RLatticeOrder) and S.shape[0]:
        coords = []
        for row in S:
            p = F.poly(dense.to_scalars(F, row))
            q = hull.solve_numerator([e * p for e in I])
            coords.append(A.rl.coordinates(q))
        res = dense.reduce_rows(F, np.stack(coords), A.rl.sub, A.rl.piv)
        K = dense.left_nullspace(F, res)
        S = dense.matmul(F, K, S) if K.shape[0] else K
    return _echelon_polys(F, S, D)


# -- the nodal example --------------------------------------------------
@dataclass
class NodalExample:
    lambda1: object
    lambda2: object
    plus: RLatticeOrder
    minus: RLatticeOrder
    center_generators: tuple

    def descriptor(self, which):
        A = self.plus if which == "plus" else self.minus
        return NccDescriptor("A1", A.F, 3, (), A)


def nodal_example(lambda1, lambda2, F=None):
    """The pair of orders in Mat_3(k(x)) glued from the tiled order H.

    H has entries in J = (x - l1)(x - l2)(x^2 - 1) above the diagonal and
    k[x] elsewhere; both orders impose p11(1) = p11(-1), and p22 = p33 at
    x = 1 (plus) or at x = -1 (minus)."""
    from .exact_core.field import QQ
    F = QQ if F is None else F
    if F.size() is not None and F.size() < 5:
        raise BadParameters("the field needs at least 5 elements")
    l1, l2 = F(lambda1), F(lambda2)
    one = F.one
    if l1 == l2 or l1 in (one, -one) or l2 in (one, -one):
        raise BadParameters("lambda1 != lambda2 and both must avoid 1 and -1")
    x = F.gen()
    q = x * x - F.poly([1])
    J = (x - F.poly([l1])) * (x - F.poly([l2])) * q
    c = J * q
    n = 3
    hull = lg.GlobalLattice.diagonal(F, [J if i < j else F.poly([1]) for i in range(n) for j in range(n)])
    d = c.degree()
    dim = n * n * d

    def ev(r, a):
        row = [F.zero] * dim
        for k in range(d):
            row[r * d + k] = a ** k
        return row

    def cond(pm):
        rows = [[u - v for u, v in zip(ev(0, one), ev(0, -one))],
                [u - v for u, v in zip(ev(4, pm), ev(8, pm))]]
        C = dense.asarray(F, rows)
        return dense.nullspace(F, C, dim)

    gens = (q, x * q)
    plus = RLatticeOrder(n, lg.RLattice(hull, c, cond(one)), gens)
    minus = RLatticeOrder(n, lg.RLattice(hull, c, cond(-one)), gens)
    return NodalExample(l1, l2, plus, minus, gens)
