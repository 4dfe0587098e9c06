"""Exact computations for orders, lattices and Morita equivalence on curves."""
