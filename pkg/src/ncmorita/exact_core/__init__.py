"""Exact arithmetic kernels: fields, polynomials, series, lattices."""
from .field import FieldSpec, QQ, GF
from .series import TruncLaurent
from .points import ClosedPoint
from .dvr import DvrLattice, dvr_canonical
from .hnf import poly_hnf, lattice_index_length
