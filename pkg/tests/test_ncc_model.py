from fractions import Fraction
import itertools
import random

import pytest

from ncmorita.errors import BadParameters, NonRationalPoint, NotHereditary, SchemaError
from ncmorita.exact_core import QQ, GF, ClosedPoint
from ncmorita import lattices_global as lg, local_orders as lo, ncc_model as nm

from algebras import unit_matrix
from ncc_helpers import INF, at, conjugate_global, desc, typed

F = QQ
x = F.gen()
one, zero = F.poly([1]), F.poly([])
p0 = ClosedPoint.rational(F, 0)


def hereditary_at_zero():
    A = lg.GlobalOrder.matrix_algebra(F, 2)
    return lg.local_modification_order(A, [(p0, lo.standard_hereditary(F, [1, 1]))])


def a1(order):
    return nm.NccDescriptor("A1", F, order.n, global_order=order)


# -- non-regular locus ---------------------------------------------------
def test_locus_of_matrix_algebra_is_empty():
    assert nm.non_regular_locus(a1(lg.GlobalOrder.matrix_algebra(F, 2))) == []


def test_locus_of_hereditary_gluing():
    loc = nm.non_regular_locus(a1(hereditary_at_zero()))
    assert len(loc) == 1
    e = loc[0]
    assert e.points == (p0,) and e.t == 2 and e.canonical == (1, 1) and e.hereditary


def test_locus_at_degree_two_point():
    q = x * x + 1
    lat = lg.GlobalLattice.diagonal(F, [one, q, one, one])
    A = lg.GlobalOrder(2, lat)
    assert A.verify()[0]
    loc = nm.non_regular_locus(a1(A))
    assert len(loc) == 1
    e = loc[0]
    assert e.points == (ClosedPoint(F, q),) and e.t == 2


def test_locus_requires_global_order():
    with pytest.raises(BadParameters):
        nm.non_regular_locus(typed([at(0)]))


def test_fiber_route_matches_completion_route():
    """Maximality from the fiber A/pA versus is_maximal of the completion."""
    orders = [hereditary_at_zero(), lg.GlobalOrder.matrix_algebra(F, 3)]
    A3 = lg.GlobalOrder.matrix_algebra(F, 3)
    orders.append(lg.local_modification_order(A3, [(ClosedPoint.rational(F, 1), lo.standard_hereditary(F, [2, 1])),
                                                   (ClosedPoint.rational(F, -2), lo.standard_hereditary(F, [1, 1, 1]))]))
    for A in orders:
        S = nm.structure_order(A)
        for a in (-2, -1, 0, 1, 2):
            m = ClosedPoint.rational(F, a)
            L = A.complete_at(m)
            maximal, t = nm._fiber_invariants(S, m)
            assert maximal == lo.is_maximal(L)
            assert t == lo.order_type(L)[0]


def test_locus_invariant_under_global_conjugation():
    A3 = lg.GlobalOrder.matrix_algebra(F, 3)
    A = lg.local_modification_order(A3, [(ClosedPoint.rational(F, 1), lo.standard_hereditary(F, [2, 1])),
                                         (p0, lo.standard_hereditary(F, [1, 1, 1]))])
    u = [[one, x, zero], [zero, one, x * x - 3], [zero, zero, one]]
    uinv = [[one, -x, x * (x * x - 3)], [zero, one, -(x * x - 3)], [zero, zero, one]]
    assert lg._poly_matmul(u, uinv) == [[one if i == j else zero for j in range(3)] for i in range(3)]
    B = conjugate_global(A, u, uinv)
    assert B.verify()[0]
    la = [(e.key(), e.t, e.canonical) for e in nm.non_regular_locus(a1(A))]
    lb = [(e.key(), e.t, e.canonical) for e in nm.non_regular_locus(a1(B))]
    assert la == lb and len(la) == 2


def test_marks_consistency_check():
    A = hereditary_at_zero()
    good = nm.NccDescriptor("A1", F, 2, [nm.Mark(p0, (1, 1))], global_order=A)
    assert len(good.locus()) == 1
    bad = nm.NccDescriptor("A1", F, 2, [nm.Mark(p0, (2,))], global_order=A)
    with pytest.raises(BadParameters):
        bad.locus()


def test_descriptor_schema_errors():
    with pytest.raises(SchemaError):
        desc([{"point": at(0), "type": [1, 2]}])  # sums to 3, rank 2
    with pytest.raises(SchemaError):
        desc([{"point": INF, "type": [1, 1]}], curve="A1")
    with pytest.raises(SchemaError):
        desc([{"point": at(0), "type": [1, 1]}, {"point": at(0), "type": [2]}])


def test_descriptor_json_roundtrip():
    X = nm.nodal_example(2, 3).descriptor("plus")
    Y = nm.NccDescriptor.from_json(X.to_json())
    assert [e.to_json() for e in Y.locus()] == [e.to_json() for e in X.locus()]


# -- the nodal example ---------------------------------------------------
@pytest.fixture(scope="module")
def nodal():
    return nm.nodal_example(2, 3)


def test_nodal_orders_verify(nodal):
    for A in (nodal.plus, nodal.minus):
        ok, diag = A.verify()
        assert ok, diag


def test_nodal_membership(nodal):
    I = lambda p: [[p if i == j else zero for j in range(3)] for i in range(3)]
    for A in (nodal.plus, nodal.minus):
        assert not A.contains_matrix(I(x))
        assert A.contains_matrix(I(x * x - 1))
        assert A.contains_matrix(I(x ** 3 - x))
        assert A.contains_matrix(I(one))


def test_nodal_sign_condition(nodal):
    # A+ ties the (2,2) and (3,3) entries at x = 1, A- at x = -1
    E = lambda p: [[p if (r == c == 1) else zero for c in range(3)] for r in range(3)]
    assert nodal.plus.contains_matrix(E(x - 1)) and not nodal.minus.contains_matrix(E(x - 1))
    assert nodal.minus.contains_matrix(E(x + 1)) and not nodal.plus.contains_matrix(E(x + 1))


def test_nodal_locus(nodal):
    want = {(2,): (3, (3, 6)), (3,): (3, (8, 24))}
    for which in ("plus", "minus"):
        loc = nm.non_regular_locus(nodal.descriptor(which))
        assert len(loc) == 3
        sing = [e for e in loc if e.singular_center]
        assert len(sing) == 1
        assert sorted(int(p.root()) for p in sing[0].points) == [-1, 1]
        assert tuple(sing[0].center) == (0, 0)
        for e in loc:
            if e.singular_center:
                continue
            t, center = want[(int(e.point.root()),)]
            assert e.t == t and e.canonical == (1, 1, 1)
            assert tuple(int(c) for c in e.center) == center


def test_nodal_invariants_agree(nodal):
    lp = [e.to_json() for e in nm.non_regular_locus(nodal.descriptor("plus"))]
    lm = [e.to_json() for e in nm.non_regular_locus(nodal.descriptor("minus"))]
    assert lp == lm
    for D in range(0, 9):
        assert nm.global_center_basis(nodal.plus, D) == nm.global_center_basis(nodal.minus, D)


def _span_equal(F, A, B, D):
    import numpy as np
    from ncmorita.exact_core import dense
    def rows(ps):
        return dense.asarray(F, [[p[k] if k <= p.degree() else 0 for k in range(D + 1)] for p in ps]) \
            if ps else dense.zeros(F, (0, D + 1))
    ra, rb = rows(A), rows(B)
    return dense.rank(F, ra) == dense.rank(F, rb) == dense.rank(F, np.concatenate([ra, rb]))


def test_nodal_center_basis(nodal):
    for D in (2, 4, 8):
        got = nm.global_center_basis(nodal.plus, D)
        expect = [one] + [(x * x - 1) * x ** k for k in range(D - 1)]
        assert len(got) == D and _span_equal(F, got, expect, D)
    got = nm.global_center_basis(nodal.plus, 4)
    assert got == [one, x * x, x ** 3 - x, x ** 4]


def test_center_basis_multiplicatively_closed(nodal):
    D = 8
    basis = nm.global_center_basis(nodal.plus, D)
    for a, b in itertools.combinations_with_replacement(basis, 2):
        if a.degree() + b.degree() <= D:
            assert _span_equal(F, basis, basis + [a * b], D)


def test_center_basis_matrix_algebra():
    assert nm.global_center_basis(lg.GlobalOrder.matrix_algebra(F, 2), 3) == [one, x, x * x, x ** 3]


def test_nodal_parameters():
    for args in ((2, 2), (1, 3), (2, -1)):
        with pytest.raises(BadParameters):
            nm.nodal_example(*args)
    with pytest.raises(BadParameters):
        nm.nodal_example(2, 3, GF(3))
    ex = nm.nodal_example(2, 3, GF(7))
    assert ex.plus.verify()[0]
    assert len(nm.non_regular_locus(ex.descriptor("plus"))) == 3


# -- hereditary decision -------------------------------------------------
def test_p1_worked_cases():
    s, cert = nm.hereditary_morita_equivalent(typed([at(0), at(1), INF]), typed([at(0), at(2), INF]))
    assert s == "yes"
    X, Y = typed([at(0), at(1), INF]), typed([at(0), at(2), INF])
    ok, tr = nm.verify_morita_certificate(X, Y, cert)
    assert ok, tr
    assert nm.hereditary_morita_equivalent(typed([at(0)]), typed([at(0)], (1, 1, 1)))[0] == "no"
    X = typed([at(0), at(1), at(2), INF])
    assert nm.hereditary_morita_equivalent(X, typed([at(0), at(1), at(3), INF]))[0] == "no"


def test_rank_equality_not_required():
    s, cert = nm.hereditary_morita_equivalent(typed([at(0)], (1, 1)), typed([at(5)], (2, 3)))
    assert s == "yes"


def test_affine_line_cases():
    A1 = lambda pts, parts=(1, 1): typed([at(a) for a in pts], parts, curve="A1")
    assert nm.hereditary_morita_equivalent(A1([0, 1]), A1([3, 7]))[0] == "yes"
    # three points: affine maps preserve ratios of distances
    assert nm.hereditary_morita_equivalent(A1([0, 1, 2]), A1([0, 2, 4]))[0] == "yes"
    assert nm.hereditary_morita_equivalent(A1([0, 1, 2]), A1([0, 1, 3]))[0] == "no"
    # on P1, 3 points are always equivalent
    assert nm.hereditary_morita_equivalent(typed([at(0), at(1), at(2)]), typed([at(0), at(1), at(3)]))[0] == "yes"


def test_labels_respected():
    X = desc([{"point": at(0), "type": [1, 1]}, {"point": at(1), "type": [2]}])
    Y = desc([{"point": at(5), "type": [2]}, {"point": at(7), "type": [1, 1]}])
    s, cert = nm.hereditary_morita_equivalent(X, Y)
    # only the non-maximal marks count; one t = 2 point each
    assert s == "yes"
    Z = desc([{"point": at(0), "type": [1, 1]}, {"point": at(1), "type": [1, 1]}], rank=2)
    W = desc([{"point": at(0), "type": [1, 1]}], rank=2)
    assert nm.hereditary_morita_equivalent(Z, W)[0] == "no"


def test_nonrational_marks_undecidable():
    X = desc([{"point": {"poly": [1, 0, 1]}, "type": [1, 1]}])
    with pytest.raises(NonRationalPoint):
        nm.hereditary_morita_equivalent(X, X)


def test_unrecognized_local_order():
    P = 12
    from ncmorita.exact_core import TruncLaurent
    t = TruncLaurent.monomial(F, 1, 1, P)
    s = lambda c: TruncLaurent.scalar(F, c, P)
    z = s(0)
    gens = [[[s(1), z], [z, s(1)]], [[t, z], [z, z]], [[z, t], [z, z]], [[z, z], [t, z]]]
    L = lo.LocalOrder.from_generators(F, 2, gens, P)
    X = nm.NccDescriptor("P1", F, 2, [nm.Mark(p0, order=L)])
    with pytest.raises(NotHereditary) as exc:
        nm.hereditary_morita_equivalent(X, X)
    assert exc.value.points == [p0.to_json()]


def j_invariant(lam):
    lam = Fraction(lam)
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


def test_four_point_matching_against_j_invariant():
    """Cross-ratio orbit of {0, 1, lam, inf} is decided by the j-invariant."""
    vals = ["2", "-1", "1/2", "3", "-2", "3/2", "1/3", "2/3", "-1/2", "4"]
    for a in vals:
        for b in vals:
            X = typed([at(0), at(1), at(a), INF])
            Y = typed([at(0), at(1), at(b), INF])
            s, _ = nm.hereditary_morita_equivalent(X, Y)
            assert (s == "yes") == (j_invariant(a) == j_invariant(b)), (a, b)


def test_pgl2_point_match_examples():
    pts = lambda vals: [ClosedPoint.from_json(F, v) for v in vals]
    M = nm.pgl2_point_match(pts([at(0), at(1), INF]), pts([at(0), at(2), INF]), None)
    assert M is not None
    src = pts([at(0), at(1), at(2), INF])
    I = nm.pgl2_point_match(src, src, None)
    assert I is not None and nm._normalize(F, I) == nm._normalize(F, [[F(1), F(0)], [F(0), F(1)]])
    assert nm.pgl2_point_match(src, pts([at(0), at(1), at(3), INF]), None) is None


def _random_descriptor(rng):
    k = rng.randint(1, 4)
    pool = [at(0), at(1), at(-1), at(2), at("1/2"), INF]
    pts = rng.sample(pool, k)
    # rank 3: types (1,2), (2,1) have t = 2 and (1,1,1) has t = 3
    return desc([{"point": p, "type": rng.choice([[1, 2], [2, 1], [1, 1, 1]])} for p in pts], rank=3)


def test_equivalence_relation():
    rng = random.Random(17)
    Ds = [_random_descriptor(rng) for _ in range(10)]
    ans = {}
    for i, X in enumerate(Ds):
        s, cert = nm.hereditary_morita_equivalent(X, X)
        assert s == "yes" and nm.verify_morita_certificate(X, X, cert)[0]
        for j, Y in enumerate(Ds):
            ans[i, j] = nm.hereditary_morita_equivalent(X, Y)[0]
    for i, j in ans:
        assert ans[i, j] == ans[j, i]
    for i, j, k in itertools.permutations(range(len(Ds)), 3):
        if ans[i, j] == "yes" and ans[j, k] == "yes":
            assert ans[i, k] == "yes"
    assert "yes" in {ans[i, j] for i, j in ans if i != j}


# -- certificates with explicit bimodules --------------------------------
def _conjugated_pair():
    from ncmorita.exact_core import TruncLaurent
    H = lo.standard_hereditary(F, [1, 1])
    t = TruncLaurent(F, 1, [1])
    s = lambda c: TruncLaurent.scalar(F, c)
    B, P = lo.conjugate(H, [[t, s(0)], [s(1), s(1)]])
    return H, B, P


def test_certificate_identity_with_conjugation_bimodule():
    H, B, P = _conjugated_pair()
    X = nm.NccDescriptor("P1", F, 2, [nm.Mark(p0, order=B)])
    Y = nm.NccDescriptor("P1", F, 2, [nm.Mark(p0, order=H)])
    cert = {"mobius": [[1, 0], [0, 1]], "point_matching": [{"x": at(0), "y": at(0)}],
            "local_certificates": [{"kind": "bimodule", "bimodule": P.to_json()}]}
    ok, tr = nm.verify_morita_certificate(X, Y, cert)
    assert ok, tr
    # translation: Y marked at 1, x = y - 1
    Y1 = nm.NccDescriptor("P1", F, 2, [nm.Mark(ClosedPoint.rational(F, 1), order=H)])
    cert1 = dict(cert, mobius=[[1, -1], [0, 1]], point_matching=[{"x": at(0), "y": at(1)}])
    assert nm.verify_morita_certificate(X, Y1, cert1)[0]


def test_certificate_with_doubled_bimodule_fails_locally():
    from test_local_orders import _doubled
    H, B, P = _conjugated_pair()
    X = nm.NccDescriptor("P1", F, 2, [nm.Mark(p0, order=H)])
    cert = {"mobius": [[1, 0], [0, 1]], "point_matching": [{"x": at(0), "y": at(0)}],
            "local_certificates": [{"kind": "bimodule", "bimodule": _doubled(H).to_json()}]}
    ok, tr = nm.verify_morita_certificate(X, X, cert)
    assert not ok
    assert tr[-1]["check"].startswith("local") and not tr[-1]["pass"]
    assert [c["check"] for c in tr[:3]] == ["curve-isomorphism", "locus-matching", "rational-algebras"]


def test_certificate_tampering_detected():
    X, Y = typed([at(0), at(1), INF]), typed([at(0), at(2), INF])
    s, cert = nm.hereditary_morita_equivalent(X, Y)
    ok, tr = nm.verify_morita_certificate(X, Y, dict(cert, mobius=[[1, 1], [1, 1]]))
    assert not ok and tr[-1]["check"] == "curve-isomorphism"
    # an automorphism that does not carry the marked points onto each other
    ok, tr = nm.verify_morita_certificate(X, Y, dict(cert, mobius=[[1, 0], [0, 3]]))
    assert not ok and tr[-1]["check"] == "locus-matching"
    Z = typed([at(0), at(2), INF], (1, 1, 1))
    ok, tr = nm.verify_morita_certificate(X, Z, cert)
    assert not ok
    missing = dict(cert, point_matching=cert["point_matching"][:2])
    assert not nm.verify_morita_certificate(X, Y, missing)[0]
