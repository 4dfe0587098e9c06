import flint
import pytest

from ncmorita.errors import NotContained, NotIrreducible, PrecisionExhausted, RankDeficient, SchemaError
from ncmorita.exact_core import QQ, GF, ClosedPoint, DvrLattice, TruncLaurent, dvr_canonical, lattice_index_length, poly_hnf
from ncmorita.exact_core import dense, polys
from ncmorita.exact_core.field import FieldSpec
from ncmorita.exact_core.hnf import det_degree, is_hnf, triangular_solve
from ncmorita.exact_core.polys import RatFunc

from conftest import poly, series


def z(F):
    return F.poly([])


# -- fields and polynomials ---------------------------------------------
def test_field_json_roundtrip():
    for F in (QQ, GF(7)):
        assert FieldSpec.from_json(F.to_json()) == F
    with pytest.raises(SchemaError):
        FieldSpec.from_json({"kind": "Fp", "p": 8})


def test_scalar_json():
    assert QQ.to_json_scalar(QQ("3/4")) == "3/4"
    assert QQ.from_json_scalar("3/4") == flint.fmpq(3, 4)
    assert GF(7).from_json_scalar(10) == GF(7)(3)


def test_ratfunc_is_reduced():
    F = QQ
    x = F.gen()
    r = RatFunc(F, x * x - 1, 2 * (x - 1))
    assert r.den == F.poly([1])
    assert r.num * 2 == x + 1
    r = RatFunc(F, x, 3 * x * x + 3)
    assert r.den == x * x + 1 and r.num * 3 == x


def test_closed_points():
    F = QQ
    x = F.gen()
    assert ClosedPoint(F, x * x + 1).degree == 2
    with pytest.raises(NotIrreducible):
        ClosedPoint(F, x * x - 1)
    p = ClosedPoint.rational(F, 3)
    assert p.root() == 3 and ClosedPoint.from_json(F, p.to_json()) == p
    assert ClosedPoint.from_json(F, {"infinity": True}).is_infinity


def test_truncated_series_precision_rules():
    F = QQ
    a = series(F, 0, [1, 2, 3], 3)
    b = series(F, 0, [1, 2, 3, 4], 4)
    with pytest.raises(PrecisionExhausted):
        a == b
    assert (a * series(F, 1, [1], 5)).prec == 4
    inv = a.inverse()
    assert (a * inv) == TruncLaurent.scalar(F, 1, 3)


# -- HNF -----------------------------------------------------------------
def test_hnf_examples():
    F = QQ
    x = F.gen()
    one = poly(F, 1)
    # columns (x,0), (x,1)
    assert poly_hnf(F, [[x, x], [z(F), one]]) == [[x, z(F)], [z(F), one]]
    I = [[one, z(F)], [z(F), one]]
    assert poly_hnf(F, I) == I
    # redundant column
    H = poly_hnf(F, [[x ** 2, x ** 2, z(F)], [z(F), z(F), one]])
    assert H == [[x ** 2, z(F)], [z(F), one]]


def test_hnf_rank_deficient():
    F = QQ
    x = F.gen()
    with pytest.raises(RankDeficient):
        poly_hnf(F, [[x, x], [x, x]])


def test_hnf_generators_are_members_both_ways():
    F = QQ
    x = F.gen()
    M = [[x ** 2 + 1, x, poly(F, 3)], [x - 1, x ** 3, x]]
    H = poly_hnf(F, M, 2)
    assert is_hnf(F, H)
    for j in range(3):
        assert triangular_solve(F, H, [M[0][j], M[1][j]]) is not None
    # a 2x2 minor generates the index ideal, so H is no larger than the span
    sub = poly_hnf(F, [M[0][:2], M[1][:2]], 2)
    assert lattice_index_length(F, H, sub) == det_degree(sub) - det_degree(H)


def test_lattice_index_length_examples():
    F = QQ
    x = F.gen()
    one = poly(F, 1)
    assert lattice_index_length(F, [[one]], [[x * x - 1]]) == 2
    I = [[one, z(F)], [z(F), one]]
    assert lattice_index_length(F, I, I) == 0
    assert lattice_index_length(F, I, [[x, z(F)], [z(F), x ** 3]]) == 4
    with pytest.raises(NotContained):
        lattice_index_length(F, [[x, z(F)], [z(F), one]], I)


# -- DVR canonical form --------------------------------------------------
def test_dvr_canonical_examples():
    F = QQ
    P = 8
    t = series(F, 1, [1], P)
    zero = TruncLaurent.zero(F, P)
    one = TruncLaurent.scalar(F, 1, P)
    L = dvr_canonical(F, [[t, t], [zero, t]])
    assert L == DvrLattice.diagonal(F, [1, 1])
    assert dvr_canonical(F, [[one, zero], [zero, one]]) == DvrLattice.unit(F, 2)


def test_dvr_example_three_corrected():
    """Columns (1,0), (t^-1, t) do not span diag(t^-1, t): the determinant valuations differ."""
    F = QQ
    P = 8
    one = TruncLaurent.scalar(F, 1, P)
    zero = TruncLaurent.zero(F, P)
    L = dvr_canonical(F, [[one, series(F, -1, [1], P)], [zero, series(F, 1, [1], P)]])
    assert L.index_valuation() == 1
    assert L != DvrLattice.diagonal(F, [-1, 1])
    M = L.matrix()
    assert [[s.valuation() for s in r] for r in M] == [[0, -1], [None, 1]]


def test_dvr_precision_exhausted():
    F = QQ
    P = 2
    with pytest.raises((PrecisionExhausted, RankDeficient)):
        dvr_canonical(F, [[series(F, 2, [1], P), TruncLaurent.zero(F, P)],
                          [TruncLaurent.zero(F, P), series(F, 2, [1], P)]])


def test_dvr_lattice_operations():
    F = GF(5)
    A = DvrLattice.diagonal(F, [0, 2])
    B = DvrLattice.diagonal(F, [1, 1])
    assert A + B == DvrLattice.diagonal(F, [0, 1])
    assert A.intersect(B) == DvrLattice.diagonal(F, [1, 2])
    assert A.dual() == DvrLattice.diagonal(F, [0, -2])
    assert A.contains_lattice(A.scaled(3))


def test_dense_modular_matmul_matches_flint():
    import numpy as np
    F = GF(10007)
    rng = np.random.default_rng(3)
    a = rng.integers(0, 10007, (40, 70))
    b = rng.integers(0, 10007, (70, 30))
    got = dense.matmul(F, a, b)
    ref = flint.nmod_mat(a.tolist(), 10007) * flint.nmod_mat(b.tolist(), 10007)
    assert got.tolist() == [[int(ref[i, j]) for j in range(30)] for i in range(40)]


def test_dense_modular_rref_matches_flint():
    import numpy as np
    F = GF(101)
    rng = np.random.default_rng(4)
    a = rng.integers(0, 101, (12, 20)) * (rng.random((12, 20)) < 0.3)
    R, piv = dense.rref(F, a)
    M, r = flint.nmod_mat(a.tolist(), 101).rref()
    assert len(piv) == r
    assert R.tolist() == [[int(M[i, j]) for j in range(20)] for i in range(r)]
