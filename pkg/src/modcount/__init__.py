"""Exact lattice-point counts in moduli spaces of curves.

Submodules: ``exactnum`` (rationals, polynomials, quasi-polynomials),
``fatgraph`` (ribbon graphs), ``polytope`` (vector partition functions),
``moduli`` (N_{g,n} and invariants), ``hurwitz`` (branched covers),
``laplace`` (series and transform forms), ``cli`` and ``verify``.
"""
from .exactnum import Polynomial, QuasiPolynomial, qp_evaluate, qp_fit, zeta_neg
from .fatgraph import Fatgraph, FatgraphCatalog, enumerate_fatgraphs
from .moduli import (
    euler_characteristic,
    intersection_numbers,
    kontsevich_volume,
    n_direct,
    n_quasipolynomial,
    n_recursive,
)

__all__ = [
    "Polynomial",
    "QuasiPolynomial",
    "qp_evaluate",
    "qp_fit",
    "zeta_neg",
    "Fatgraph",
    "FatgraphCatalog",
    "enumerate_fatgraphs",
    "euler_characteristic",
    "intersection_numbers",
    "kontsevich_volume",
    "n_direct",
    "n_quasipolynomial",
    "n_recursive",
]
