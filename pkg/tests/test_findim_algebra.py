import numpy as np
import pytest

from ncmorita.errors import LengthMismatch, NotSemisimple, NotSplit, SchemaError
from ncmorita.exact_core import QQ, GF, ClosedPoint, dense
from ncmorita import findim_algebra as fa
from ncmorita.findim_algebra import PolyStructOrder, StructAlgebra, ModuleRep

from algebras import block_diagonal, conjugated, dual_numbers, idempotent_split, upper_triangular


def test_center_examples():
    assert len(fa.center_basis(block_diagonal(QQ, [2]))) == 1
    assert len(fa.center_basis(block_diagonal(QQ, [1, 1]))) == 2
    assert len(fa.center_basis(upper_triangular(QQ))) == 1


def test_center_of_mat2_is_identity():
    A = block_diagonal(QQ, [2])
    Z = fa.center_basis(A)
    assert dense.to_scalars(QQ, Z[0]) == dense.to_scalars(QQ, A.unit)


def test_radical_examples():
    assert fa.jacobson_radical(block_diagonal(QQ, [2])).shape[0] == 0
    assert fa.jacobson_radical(dual_numbers(QQ)).shape[0] == 1
    J = fa.jacobson_radical(upper_triangular(QQ))
    assert J.shape[0] == 1
    # basis E11, E12, E22: the radical is E12
    assert dense.to_scalars(QQ, J[0]) == [0, 1, 0]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_radical_small_characteristic(p):
    F = GF(p)
    # the trace form is degenerate on Mat_p(F_p); the radical is still zero
    assert fa.jacobson_radical(block_diagonal(F, [p])).shape[0] == 0
    assert fa.jacobson_radical(upper_triangular(F, 3)).shape[0] == 3
    J = fa.jacobson_radical(dual_numbers(F))
    assert J.shape[0] == 1


def test_blocks_examples():
    assert len(fa.block_decompose(block_diagonal(QQ, [1, 2]))) == 2
    assert len(fa.block_decompose(block_diagonal(QQ, [3]))) == 1
    F = GF(5)
    ids = fa.block_decompose(idempotent_split(F))
    got = sorted(tuple(int(c) for c in dense.to_scalars(F, e)) for e in ids)
    # basis (1, c): c = (0, 1), 1 - c = (1, -1) = (1, 4)
    assert got == [(0, 1), (1, 4)]


def test_blocks_nonsplit_center():
    F = QQ
    # Q(i) as the matrices a + b J with J^2 = -1
    A = StructAlgebra.from_matrices(F, [[[1, 0], [0, 1]], [[0, -1], [1, 0]]], check=True)
    with pytest.raises(NotSplit):
        fa.wedderburn_sizes(A)


def test_wedderburn_examples():
    assert fa.wedderburn_sizes(block_diagonal(QQ, [2])) == [2]
    assert fa.wedderburn_sizes(block_diagonal(QQ, [1, 2])) == [1, 2]
    assert fa.wedderburn_sizes(block_diagonal(GF(7), [1, 3, 2])) == [1, 3, 2]
    with pytest.raises(NotSemisimple):
        fa.wedderburn_sizes(upper_triangular(QQ))


def test_wedderburn_scrambled_basis():
    A = conjugated(block_diagonal(QQ, [2, 1]), seed=4)
    assert sorted(fa.wedderburn_sizes(A)) == [1, 2]


def test_ext1_examples():
    E = fa.ext1_matrix(upper_triangular(QQ))
    assert E[0][0] == 0 and E[1][1] == 0
    assert sorted([E[0][1], E[1][0]]) == [0, 1]
    assert fa.ext1_matrix(block_diagonal(QQ, [2])) == [[0]]
    assert fa.ext1_matrix(dual_numbers(QQ)) == [[1]]


def test_ext1_linear_quiver():
    """Upper triangular 3x3 has the quiver 1 -> 2 -> 3."""
    F = QQ
    A = upper_triangular(F, 3)
    E = fa.ext1_matrix(A)
    assert sum(map(sum, E)) == 2
    assert all(E[i][i] == 0 for i in range(3))
    assert all(sum(row) <= 1 for row in E)
    assert all(sum(E[i][j] for i in range(3)) <= 1 for j in range(3))


def test_semisimple_bimodule_equal():
    assert fa.semisimple_bimodule_equal([1, 2], [1, 2])
    assert not fa.semisimple_bimodule_equal([1, 2], [2, 1])
    assert fa.semisimple_bimodule_equal([], [])
    with pytest.raises(LengthMismatch):
        fa.semisimple_bimodule_equal([1], [1, 1])


def test_structure_json_roundtrip_and_errors():
    A = upper_triangular(GF(7))
    B = StructAlgebra.from_json(A.to_json(), GF(7))
    assert np.array_equal(A.mult, B.mult)
    bad = A.to_json()
    bad["mult"][0][0][0] = 5
    with pytest.raises(SchemaError):
        StructAlgebra.from_json(bad, GF(7))


def test_regular_module_rep():
    A = upper_triangular(QQ)
    assert ModuleRep.regular(A).verify()


# -- fibers of polynomial orders -----------------------------------------
def _poly_order_from_matrices(F, mats):
    alg = StructAlgebra.from_matrices(F, mats)
    d = alg.dim
    mult = [[[F.poly([alg.mult[i, j, k]]) for k in range(d)] for j in range(d)] for i in range(d)]
    return PolyStructOrder(F, mult, [F.poly([c]) for c in dense.to_scalars(F, alg.unit)])


def test_maximal_ideals_over_point_examples():
    F = QQ
    x = F.gen()
    M2 = _poly_order_from_matrices(F, [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]])
    assert fa.maximal_ideals_over_point(M2, ClosedPoint.rational(F, 0)) == [(0, 2)]
    prod = _poly_order_from_matrices(F, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    assert [s for _, s in fa.maximal_ideals_over_point(prod, ClosedPoint.rational(F, 1))] == [1, 1]
    ut = _poly_order_from_matrices(F, [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]]])
    assert [s for _, s in fa.maximal_ideals_over_point(ut, ClosedPoint.rational(F, 0))] == [1, 1]


def test_fiber_at_degree_two_point():
    F = QQ
    x = F.gen()
    M2 = _poly_order_from_matrices(F, [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]])
    # Mat_2(Q[x]/(x^2+1)) = Mat_2(Q(i)) is not split over Q
    with pytest.raises(NotSplit):
        fa.maximal_ideals_over_point(M2, ClosedPoint(F, x * x + 1))
    A = M2.specialize(ClosedPoint(F, x * x + 1))
    assert A.dim == 8 and fa.jacobson_radical(A).shape[0] == 0
    assert len(fa.center_basis(A)) == 2


def test_fiber_with_nilpotent_part():
    F = QQ
    x = F.gen()
    # k[x]-order spanned by 1 and x*E12 inside the upper triangular matrices
    z, one = F.poly([]), F.poly([1])
    mult = [[[one, z], [z, one]], [[z, one], [z, z]]]
    A = PolyStructOrder(F, mult, [one, z])
    # (x*E12)^2 = 0: the fiber at every point is k[eps]/eps^2
    assert fa.maximal_ideals_over_point(A, ClosedPoint.rational(F, 3)) == [(0, 1)]


def _quaternions(F, a, b):
    """(a, b)_F in the basis 1, i, j, ij."""
    import itertools
    # i^2 = a, j^2 = b, ij = -ji
    table = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
             (1, 0): (1, 1), (1, 1): (a, 0), (1, 2): (1, 3), (1, 3): (a, 2),
             (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (b, 0), (2, 3): (-b, 1),
             (3, 0): (1, 3), (3, 1): (-a, 2), (3, 2): (b, 1), (3, 3): (-a * b, 0)}
    m = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    for (p, q), (c, r) in table.items():
        m[p][q][r] = c
    return StructAlgebra(F, dense.asarray(F, m), dense.asarray(F, [1, 0, 0, 0]), check=True)


def test_quaternion_division_algebra_is_not_split():
    with pytest.raises(NotSplit):
        fa.wedderburn_sizes(_quaternions(QQ, -1, -1))
    with pytest.raises(NotSplit):
        fa.wedderburn_sizes(_quaternions(QQ, 3, 5))  # 3 is not a square mod 5
    with pytest.raises(NotSplit):
        fa.wedderburn_sizes(_quaternions(QQ, 6, -7))  # 6 is not a square mod 7


@pytest.mark.parametrize("a,b", [(1, 7), (-1, 2), (6, -5), (2, 7), (3, -2)])
def test_split_quaternion_algebras(a, b):
    # a x^2 + b y^2 = z^2 is solvable for these pairs, so (a, b) is Mat_2(Q)
    assert fa.wedderburn_sizes(_quaternions(QQ, a, b)) == [2]


@pytest.mark.parametrize("seed", range(6))
def test_scrambled_matrix_blocks_over_q(seed):
    A = conjugated(block_diagonal(QQ, [1, 2, 2]), seed)
    assert sorted(fa.wedderburn_sizes(A)) == [1, 2, 2]
