from collections import Counter
from fractions import Fraction
from itertools import permutations
from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modcount.fatgraph import (
    Fatgraph,
    UnsupportedSizeError,
    automorphism_order,
    boundary_profile,
    enumerate_fatgraphs,
    euler_sum,
    format_fatgraph,
    incidence_matrix,
    parse_fatgraph,
    unlabeled_fatgraphs,
)

FRONTIER = [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (0, 5), (1, 3)]


def _from_cycles(H, cycles):
    p = list(range(H))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            p[a] = b
    return tuple(p)


def _n_cycles(p):
    seen, c = set(), 0
    for i in range(len(p)):
        if i not in seen:
            c += 1
            while i not in seen:
                seen.add(i)
                i = p[i]
    return c


# -- independent oracle: weighted counts by orbit counting ------------------
#
# The number of fatgraph structures (tau0, tau1, labeling) on a fixed set of
# 2E half-edges is (2E)! * sum 1/|Aut| over labeled classes.  Conjugating
# tau0 to a fixed representative of its cycle type lambda, this becomes
# sum over lambda of n! * #{valid tau1} / z_lambda.


def _partitions_min3(m, maxpart=None):
    maxpart = m if maxpart is None else maxpart
    if m == 0:
        yield ()
        return
    for p in range(min(m, maxpart), 2, -1):
        for rest in _partitions_min3(m - p, p):
            yield (p,) + rest


def _fpf_involutions(points):
    if not points:
        yield []
        return
    a = points[0]
    for k in range(1, len(points)):
        for rest in _fpf_involutions(points[1:k] + points[k + 1:]):
            yield [(a, points[k])] + rest


def _oracle_weighted_count(g, n, E):
    H = 2 * E
    total = Fraction(0)
    for lam in _partitions_min3(H):
        cycles, start = [], 0
        for p in lam:
            cycles.append(list(range(start, start + p)))
            start += p
        tau0 = _from_cycles(H, cycles)
        z = prod(lam) * prod(factorial(lam.count(p)) for p in set(lam))
        good = 0
        for pairs in _fpf_involutions(list(range(H))):
            tau1 = list(range(H))
            for a, b in pairs:
                tau1[a], tau1[b] = b, a
            # connected?
            seen, stack = {0}, [0]
            while stack:
                h = stack.pop()
                for k in (tau0[h], tau1[h]):
                    if k not in seen:
                        seen.add(k)
                        stack.append(k)
            if len(seen) != H:
                continue
            faces = _n_cycles(tuple(tau0[tau1[h]] for h in range(H)))
            if faces == n and len(lam) - E + faces == 2 - 2 * g:
                good += 1
        total += Fraction(factorial(n) * good, z)
    return total


@pytest.mark.parametrize("g,n", FRONTIER)
def test_weighted_counts_match_orbit_counting_oracle(g, n):
    cat = enumerate_fatgraphs(g, n)
    by_E = Counter()
    for fg, aut in cat:
        by_E[fg.num_edges] += Fraction(1, aut)
    for E in range(2 * g - 1 + n, min(6 * g - 6 + 3 * n, 6) + 1):
        assert by_E[E] == _oracle_weighted_count(g, n, E), E


# -- examples ----------------------------------------------------------------


def test_figure_eight_genus_one():
    fg = Fatgraph(_from_cycles(4, [[0, 1, 2, 3]]), _from_cycles(4, [[0, 2], [1, 3]]), (1,))
    assert boundary_profile(fg) == (1, [(1, 4)])
    assert automorphism_order(fg) == 4
    assert incidence_matrix(fg) == [[2, 2]]


def test_figure_eight_planar():
    fg = Fatgraph(_from_cycles(4, [[0, 1, 2, 3]]), _from_cycles(4, [[0, 1], [2, 3]]), (1, 2, 3))
    g, bds = boundary_profile(fg)
    assert g == 0 and len(bds) == 3


def _theta():
    return Fatgraph(_from_cycles(6, [[0, 1, 2], [3, 4, 5]]), _from_cycles(6, [[0, 3], [1, 5], [2, 4]]), (1, 2, 3))


def test_theta_graph():
    fg = _theta()
    g, bds = boundary_profile(fg)
    assert g == 0 and len(bds) == 3
    A = incidence_matrix(fg)
    assert sorted(tuple(r[j] for r in A) for j in range(3)) == [(0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert automorphism_order(fg) == 1


def test_trivalent_genus_one():
    fg = Fatgraph(_from_cycles(6, [[0, 1, 2], [3, 4, 5]]), _from_cycles(6, [[0, 3], [1, 4], [2, 5]]), (1,))
    assert boundary_profile(fg)[0] == 1
    assert incidence_matrix(fg) == [[2, 2, 2]]
    assert automorphism_order(fg) == 6


def test_fat11():
    cat = enumerate_fatgraphs(1, 1)
    assert len(cat) == 2
    assert sorted(aut for _, aut in cat) == [4, 6]


def test_fat04_counts():
    assert len(unlabeled_fatgraphs(0, 4)) == 21
    assert len(enumerate_fatgraphs(0, 4)) == 327


def test_fat03_enumeration_settles_count():
    # the enumerator is the ground truth: 7 labeled from 3 unlabeled
    assert len(unlabeled_fatgraphs(0, 3)) == 3
    assert len(enumerate_fatgraphs(0, 3)) == 7
    assert all(aut == 1 for _, aut in enumerate_fatgraphs(0, 3))


def test_fat04_signed_cell_counts():
    cells = Counter(fg.num_edges for fg, _ in enumerate_fatgraphs(0, 4))
    assert cells == {6: 64, 5: 144, 4: 99, 3: 20}
    assert 64 - 144 + 99 - 20 == -1


@pytest.mark.parametrize(
    "g,n,chi",
    [(0, 3, 1), (1, 1, Fraction(-1, 12)), (0, 4, -1), (1, 2, Fraction(1, 12)), (2, 1, Fraction(1, 120)), (0, 5, 2), (1, 3, Fraction(-1, 6))],
)
def test_euler_sum(g, n, chi):
    assert euler_sum(enumerate_fatgraphs(g, n)) == chi


def test_unsupported_sizes():
    with pytest.raises(UnsupportedSizeError):
        enumerate_fatgraphs(2, 2)
    with pytest.raises(UnsupportedSizeError):
        enumerate_fatgraphs(0, 2)


# -- structural invariants -----------------------------------------------------


@pytest.mark.parametrize("g,n", FRONTIER)
def test_catalog_invariants(g, n):
    for fg, aut in enumerate_fatgraphs(g, n):
        A = incidence_matrix(fg)
        assert all(sum(r[j] for r in A) == 2 for j in range(fg.num_edges))
        genus, bds = boundary_profile(fg)
        assert genus == g
        assert sum(length for _, length in bds) == 2 * fg.num_edges
        assert [sum(r) for r in A] == [length for _, length in bds]
        assert 2 * g - 1 + n <= fg.num_edges <= 6 * g - 6 + 3 * n
        assert automorphism_order(fg) == aut


def _isomorphic(a: Fatgraph, b: Fatgraph) -> bool:
    """Brute-force labeled isomorphism test."""
    if a.num_edges != b.num_edges or sorted(map(len, a.vertices())) != sorted(map(len, b.vertices())):
        return False
    H = a.num_half_edges
    la = {h: lab for lab, c in zip(a.labels, a.boundary_cycles()) for h in c}
    lb = {h: lab for lab, c in zip(b.labels, b.boundary_cycles()) for h in c}
    for target in range(H):
        phi = {0: target}
        stack, ok = [0], True
        while stack and ok:
            h = stack.pop()
            for ta, tb in ((a.tau0, b.tau0), (a.tau1, b.tau1)):
                x, y = ta[h], tb[phi[h]]
                if x not in phi:
                    phi[x] = y
                    stack.append(x)
                elif phi[x] != y:
                    ok = False
        if ok and len(set(phi.values())) == H and all(la[h] == lb[phi[h]] for h in range(H)):
            return True
    return False


@pytest.mark.parametrize("g,n", [(0, 3), (1, 1), (0, 4), (1, 2)])
def test_no_duplicates_and_closed_under_relabeling(g, n):
    cat = list(enumerate_fatgraphs(g, n))
    by_E = {}
    for fg, _ in cat:
        by_E.setdefault(fg.num_edges, []).append(fg)
    for group in by_E.values():
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                assert not _isomorphic(a, b)
    for fg, _ in cat:
        for perm in permutations(range(1, n + 1)):
            moved = Fatgraph(fg.tau0, fg.tau1, tuple(perm[l - 1] for l in fg.labels))
            assert any(_isomorphic(moved, other) for other in by_E[fg.num_edges])


@given(st.data())
def test_text_format_round_trip(data):
    g, n = data.draw(st.sampled_from([(0, 3), (1, 1), (0, 4), (1, 2)]))
    cat = enumerate_fatgraphs(g, n)
    fg, _ = cat.entries[data.draw(st.integers(0, len(cat) - 1))]
    assert parse_fatgraph(format_fatgraph(fg)) == fg


def test_text_format_example():
    fg = parse_fatgraph("3;(0 1 2)(3 4 5);(0 3)(1 5)(2 4);0->1,1->2,2->3")
    assert fg.num_edges == 3 and boundary_profile(fg)[0] == 0


def test_rejects_invalid_structures():
    with pytest.raises(ValueError):  # valence two
        Fatgraph(_from_cycles(4, [[0, 1], [2, 3]]), _from_cycles(4, [[0, 2], [1, 3]]), (1, 2))
    with pytest.raises(ValueError):  # tau1 has a fixed point
        Fatgraph(_from_cycles(4, [[0, 1, 2, 3]]), (1, 0, 2, 3), (1,))
    with pytest.raises(ValueError):  # labels not a bijection
        Fatgraph(_from_cycles(4, [[0, 1, 2, 3]]), _from_cycles(4, [[0, 1], [2, 3]]), (1, 1, 2))
    with pytest.raises(ValueError):
        parse_fatgraph("garbage")
