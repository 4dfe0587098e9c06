"""Descriptor builders for the curve-level tests."""
from ncmorita import lattices_global as lg
from ncmorita import ncc_model as nm

INF = {"infinity": True}


def at(a):
    return {"at": a}


def desc(marks, curve="P1", rank=2, field=None):
    obj = {"curve": curve, "rank": rank, "marked": marks}
    if field is not None:
        obj["field"] = field
    return nm.NccDescriptor.from_json(obj)


def typed(points, parts=(1, 1), curve="P1"):
    return desc([{"point": p, "type": list(parts)} for p in points], curve, sum(parts))


def conjugate_global(A, u, uinv):
    """u A u^-1 for polynomial matrices u, uinv with u uinv = Id."""
    F, n = A.lat.F, A.n
    pm = lg._poly_matmul
    cols = []
    for X in A.basis_numerators():
        Y = pm(pm(u, X), uinv)
        cols.append([Y[i][j] for i in range(n) for j in range(n)])
    return lg.GlobalOrder(n, lg.GlobalLattice.from_numerators(F, n * n, cols, A.lat.den))
