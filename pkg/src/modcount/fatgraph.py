"""Labeled fatgraphs (ribbon graphs) as permutation pairs on half-edges.

A fatgraph on half-edges ``0..2E-1`` is a vertex rotation ``tau0`` and a
fixed-point-free involution ``tau1``.  Boundary cycles are the cycles of
``tau2 = tau0 . tau1`` (apply ``tau1`` first).

Enumeration is by rooted canonical generation: every connected rooted
fatgraph has a unique breadth-first labeling from its root, and we grow
exactly those labelings.  A rooted graph is kept when its root gives the
lexicographically smallest code among all roots; the number of roots
achieving that code is the automorphism order.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import List, Sequence, Tuple

Perm = Tuple[int, ...]

MAX_DIMENSION = 9  # 6g - 6 + 3n frontier for enumeration


class UnsupportedSizeError(ValueError):
    pass


def cycles_of(perm: Sequence[int]) -> List[Tuple[int, ...]]:
    """Cycles of ``perm``, each starting at its smallest element, sorted."""
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        h = start
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = perm[h]
        out.append(tuple(cyc))
    return out


def compose(f: Sequence[int], g: Sequence[int]) -> Perm:
    """``f . g``: apply g first."""
    return tuple(f[g[h]] for h in range(len(g)))


@dataclass(frozen=True)
class Fatgraph:
    tau0: Perm
    tau1: Perm
    labels: Tuple[int, ...]  # label of each boundary cycle, in boundary_cycles() order

    def __post_init__(self):
        n = len(self.tau0)
        if n == 0 or n % 2 or len(self.tau1) != n:
            raise ValueError("need an even, positive number of half-edges")
        if sorted(self.tau0) != list(range(n)) or sorted(self.tau1) != list(range(n)):
            raise ValueError("tau0 and tau1 must be permutations")
        for h in range(n):
            if self.tau1[h] == h or self.tau1[self.tau1[h]] != h:
                raise ValueError("tau1 must be a fixed-point-free involution")
        if any(len(c) < 3 for c in cycles_of(self.tau0)):
            raise ValueError("vertices must have valency at least 3")
        if not _connected(self.tau0, self.tau1):
            raise ValueError("fatgraph is not connected")
        nb = len(self.boundary_cycles())
        if sorted(self.labels) != list(range(1, nb + 1)):
            raise ValueError("labels must be a bijection onto 1..n")
        if (2 - len(self.vertices()) + self.num_edges - nb) % 2:
            raise ValueError("Euler relation gives a non-integer genus")

    @property
    def num_half_edges(self) -> int:
        return len(self.tau0)

    @property
    def num_edges(self) -> int:
        return len(self.tau0) // 2

    @property
    def tau2(self) -> Perm:
        return compose(self.tau0, self.tau1)

    def vertices(self) -> List[Tuple[int, ...]]:
        return cycles_of(self.tau0)

    def edges(self) -> List[Tuple[int, int]]:
        return [c for c in cycles_of(self.tau1)]

    def boundary_cycles(self) -> List[Tuple[int, ...]]:
        return cycles_of(self.tau2)

    @property
    def genus(self) -> int:
        return boundary_profile(self)[0]

    @property
    def num_boundaries(self) -> int:
        return len(self.labels)

    def to_text(self) -> str:
        return format_fatgraph(self)


def _connected(tau0: Sequence[int], tau1: Sequence[int]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        h = stack.pop()
        for k in (tau0[h], tau1[h]):
            if k not in seen:
                seen.add(k)
                stack.append(k)
    return len(seen) == len(tau0)


def boundary_profile(fg: Fatgraph) -> Tuple[int, List[Tuple[int, int]]]:
    """Genus and ``(label, length in half-edges)`` for each boundary."""
    V = len(fg.vertices())
    E = fg.num_edges
    bds = fg.boundary_cycles()
    twice_g = 2 - V + E - len(bds)
    if twice_g < 0 or twice_g % 2:
        raise ValueError(f"corrupted fatgraph: 2g = {twice_g}")
    profile = sorted((lab, len(c)) for lab, c in zip(fg.labels, bds))
    return twice_g // 2, profile


def incidence_matrix(fg: Fatgraph) -> List[List[int]]:
    """Rows are boundary labels 1..n, columns are edges by smallest half-edge."""
    n = fg.num_boundaries
    face_of = [0] * fg.num_half_edges
    for lab, cyc in zip(fg.labels, fg.boundary_cycles()):
        for h in cyc:
            face_of[h] = lab - 1
    edges = fg.edges()
    A = [[0] * len(edges) for _ in range(n)]
    for j, (h, k) in enumerate(edges):
        A[face_of[h]][j] += 1
        A[face_of[k]][j] += 1
    return A


def incidence_columns(fg: Fatgraph) -> Tuple[Tuple[int, ...], ...]:
    A = incidence_matrix(fg)
    return tuple(sorted(tuple(row[j] for row in A) for j in range(fg.num_edges)))


def automorphism_order(fg: Fatgraph) -> int:
    """Half-edge bijections commuting with tau0 and tau1 that fix every label.

    An automorphism is determined by the image of half-edge 0, so we try the
    2E candidates and propagate.
    """
    face_label = _face_labels(fg)
    count = 0
    for target in range(fg.num_half_edges):
        phi = _propagate(fg.tau0, fg.tau1, 0, target)
        if phi is None:
            continue
        if all(face_label[phi[h]] == face_label[h] for h in range(fg.num_half_edges)):
            count += 1
    return count


def _face_labels(fg: Fatgraph) -> List[int]:
    out = [0] * fg.num_half_edges
    for lab, cyc in zip(fg.labels, fg.boundary_cycles()):
        for h in cyc:
            out[h] = lab
    return out


def _propagate(tau0, tau1, src: int, dst: int):
    """Extend ``src -> dst`` to a map commuting with tau0, tau1, or None."""
    n = len(tau0)
    phi = [-1] * n
    phi[src] = dst
    stack = [src]
    while stack:
        h = stack.pop()
        for t in (tau0, tau1):
            a, b = t[h], t[phi[h]]
            if phi[a] == -1:
                phi[a] = b
                stack.append(a)
            elif phi[a] != b:
                return None
    if len(set(phi)) != n:
        return None
    return tuple(phi)


# ---------------------------------------------------------------------------
# canonical codes


def _canonical_code(tau0: Sequence[int], tau1: Sequence[int], root: int):
    """Breadth-first relabeling from ``root``: (valences, relabeled tau1, order)."""
    n = len(tau0)
    label = [-1] * n
    order: List[int] = []

    def open_vertex(h):
        valence = 0
        k = h
        while True:
            label[k] = len(order)
            order.append(k)
            valence += 1
            k = tau0[k]
            if k == h:
                return valence

    valences = [open_vertex(root)]
    i = 0
    while i < len(order):
        h = order[i]
        partner = tau1[h]
        if label[partner] == -1:
            valences.append(open_vertex(partner))
        i += 1
    code = tuple(label[tau1[order[i]]] for i in range(n))
    return tuple(valences), code, order


def _rooted_maps(num_edges: int, num_vertices: int):
    """All connected rooted maps with the given edge and vertex counts, all
    vertices of valency >= 3, in canonical breadth-first labeling.

    Yields ``(valences, tau1)``.
    """
    H = 2 * num_edges
    tau1 = [-1] * H
    valences: List[int] = []

    def rec(i: int, nxt: int):
        while i < nxt and tau1[i] != -1:
            i += 1
        if i == nxt:
            if nxt == H and len(valences) == num_vertices:
                yield tuple(valences), tuple(tau1)
            return
        for j in range(i + 1, nxt):
            if tau1[j] == -1:
                tau1[i], tau1[j] = j, i
                yield from rec(i + 1, nxt)
                tau1[i] = tau1[j] = -1
        remaining = num_vertices - len(valences) - 1
        if remaining < 0:
            return
        for v in range(3, H - nxt - 3 * remaining + 1):
            tau1[i], tau1[nxt] = nxt, i
            valences.append(v)
            yield from rec(i + 1, nxt + v)
            valences.pop()
            tau1[i] = tau1[nxt] = -1

    for v0 in range(3, H - 3 * (num_vertices - 1) + 1):
        valences.append(v0)
        yield from rec(0, v0)
        valences.pop()


def _tau0_from_valences(valences: Sequence[int]) -> Perm:
    tau0 = []
    start = 0
    for v in valences:
        tau0.extend(start + (k + 1) % v for k in range(v))
        start += v
    return tuple(tau0)


@dataclass(frozen=True)
class UnlabeledClass:
    tau0: Perm
    tau1: Perm
    automorphisms: Tuple[Perm, ...]


@lru_cache(maxsize=None)
def unlabeled_fatgraphs(g: int, n: int) -> Tuple[UnlabeledClass, ...]:
    """Isomorphism classes of unlabeled fatgraphs of type (g, n)."""
    _check_supported(g, n)
    out = []
    for E in range(2 * g - 1 + n, 6 * g - 6 + 3 * n + 1):
        V = E + 2 - 2 * g - n
        if V < 1:
            continue
        for valences, tau1 in _rooted_maps(E, V):
            tau0 = _tau0_from_valences(valences)
            if len(cycles_of(compose(tau0, tau1))) != n:
                continue
            my_code = (valences, tau1)
            auts = []
            minimal = True
            for r in range(2 * E):
                vals, code, order = _canonical_code(tau0, tau1, r)
                c = (vals, code)
                if c < my_code:
                    minimal = False
                    break
                if c == my_code:
                    auts.append(tuple(order))  # label k -> half-edge order[k]
            if minimal:
                out.append(UnlabeledClass(tau0, tuple(tau1), tuple(auts)))
    return tuple(out)


@dataclass(frozen=True)
class FatgraphCatalog:
    g: int
    n: int
    entries: Tuple[Tuple[Fatgraph, int], ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "entries": [
                {"fatgraph": fg.to_text(), "aut_order": aut, "edges": fg.num_edges}
                for fg, aut in self.entries
            ],
        }


@lru_cache(maxsize=None)
def enumerate_fatgraphs(g: int, n: int) -> FatgraphCatalog:
    """All labeled fatgraphs of type (g, n) up to isomorphism, with the order
    of their labeled automorphism groups."""
    entries = []
    for cls in unlabeled_fatgraphs(g, n):
        faces = cycles_of(compose(cls.tau0, cls.tau1))
        face_index = {}
        for idx, cyc in enumerate(faces):
            for h in cyc:
                face_index[h] = idx
        # action of each automorphism on the boundary cycles
        actions = []
        for phi in cls.automorphisms:
            actions.append(tuple(face_index[phi[faces[i][0]]] for i in range(n)))
        kernel = sum(1 for a in actions if a == tuple(range(n)))
        seen = set()
        for labels in permutations(range(1, n + 1)):
            if labels in seen:
                continue
            for a in actions:
                moved = [0] * n
                for i in range(n):
                    moved[a[i]] = labels[i]
                seen.add(tuple(moved))
            entries.append((Fatgraph(cls.tau0, cls.tau1, tuple(labels)), kernel))
    return FatgraphCatalog(g, n, tuple(entries))


def _check_supported(g: int, n: int) -> None:
    if g < 0 or n < 1 or 2 - 2 * g - n >= 0:
        raise UnsupportedSizeError(f"(g, n) = ({g}, {n}) is not stable")
    if 6 * g - 6 + 3 * n > MAX_DIMENSION:
        raise UnsupportedSizeError(
            f"(g, n) = ({g}, {n}) has 6g-6+3n = {6 * g - 6 + 3 * n} > {MAX_DIMENSION}"
        )


def euler_sum(catalog: FatgraphCatalog):
    """Alternating sum over cells: sum of (-1)^(E-n) / |Aut|."""
    from fractions import Fraction

    return sum(
        (Fraction((-1) ** ((fg.num_edges - catalog.n) % 2), aut) for fg, aut in catalog),
        Fraction(0),
    )


# ---------------------------------------------------------------------------
# text format:  E;(0 1 2)(3 4 5);(0 3)(1 4)(2 5);0->1,1->2,2->3


def format_fatgraph(fg: Fatgraph) -> str:
    v = "".join("(" + " ".join(map(str, c)) + ")" for c in fg.vertices())
    e = "".join(f"({a} {b})" for a, b in fg.edges())
    lab = ",".join(f"{c[0]}->{l}" for c, l in zip(fg.boundary_cycles(), fg.labels))
    return f"{fg.num_edges};{v};{e};{lab}"


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_fatgraph(text: str) -> Fatgraph:
    try:
        e_str, v_str, p_str, l_str = (s.strip() for s in text.strip().split(";"))
        E = int(e_str)
        H = 2 * E
        tau0 = list(range(H))
        for body in _CYCLE.findall(v_str):
            cyc = [int(x) for x in body.split()]
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                tau0[a] = b
        tau1 = [-1] * H
        for body in _CYCLE.findall(p_str):
            a, b = (int(x) for x in body.split())
            tau1[a], tau1[b] = b, a
        rep_label = {}
        for item in l_str.split(","):
            h, lab = item.split("->")
            rep_label[int(h)] = int(lab)
    except (ValueError, IndexError) as exc:
        raise ValueError(f"malformed fatgraph text: {text!r}") from exc
    faces = cycles_of(compose(tau0, tau1))
    labels = []
    for cyc in faces:
        hits = [rep_label[h] for h in cyc if h in rep_label]
        if len(hits) != 1:
            raise ValueError(f"boundary {cyc} needs exactly one label")
        labels.append(hits[0])
    return Fatgraph(tuple(tau0), tuple(tau1), tuple(labels))


def catalog_to_json(catalog: FatgraphCatalog) -> str:
    return json.dumps(catalog.to_json(), sort_keys=True, indent=1)
