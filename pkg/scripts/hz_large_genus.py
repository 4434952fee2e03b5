"""Tabulate N_{g,1}(b) / N_{g,1}(0) from the Harer-Zagier numbers.

The polynomial N_{g,1} has degree 3g - 2 in b^2; it is interpolated from
the lattice counts at b = 2, 4, ..., and normalized by its constant term
N_{g,1}(0) = zeta(1 - 2g).  Nothing is asserted about limits; the table is
data for inspection.
"""
import argparse

from modcount.exactnum import interpolate_univariate, zeta_neg
from modcount.moduli import n_g1_hz


def normalized_poly(g: int):
    """Coefficients a_k of N_{g,1}(b) / N_{g,1}(0) = sum a_k b^(2k)."""
    deg = 3 * g - 2
    bs = [2 * j for j in range(1, deg + 3)]  # one spare point as a check
    poly = interpolate_univariate([b * b for b in bs], [n_g1_hz(g, b) for b in bs], deg)
    n0 = poly.coefficient((0,))
    assert n0 == zeta_neg(g)
    return [poly.coefficient((k,)) / n0 for k in range(deg + 1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-genus", type=int, default=12)
    ap.add_argument("--terms", type=int, default=4, help="leading low-order coefficients to show")
    args = ap.parse_args()
    for g in range(1, args.max_genus + 1):
        a = normalized_poly(g)
        shown = "  ".join(f"b^{2 * k}: {float(a[k]):.6g}" for k in range(min(args.terms, len(a))))
        print(f"g={g:2d}  N(0)={zeta_neg(g)}  {shown}")


if __name__ == "__main__":
    main()
