"""Fatgraph counts by edge number and the signed Euler sums, per (g, n)."""
from collections import Counter
from fractions import Fraction

from modcount.fatgraph import enumerate_fatgraphs, euler_sum, unlabeled_fatgraphs
from modcount.moduli import euler_characteristic

FRONTIER = [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (0, 5), (1, 3)]


def main():
    for g, n in FRONTIER:
        cat = enumerate_fatgraphs(g, n)
        by_edges = Counter(fg.num_edges for fg, _ in cat)
        weight = Counter()
        for fg, aut in cat:
            weight[fg.num_edges] += Fraction(1, aut)
        cells = ", ".join(f"E={e}: {by_edges[e]} ({weight[e]})" for e in sorted(by_edges))
        chi = euler_sum(cat)
        assert chi == euler_characteristic(g, n, "zeta")
        print(f"({g},{n}) unlabeled={len(unlabeled_fatgraphs(g, n))} labeled={len(cat)} chi={chi}")
        print(f"    {cells}")


if __name__ == "__main__":
    main()
