"""Branched covers of the sphere counted as permutation factorizations.

All counts weight a cover by 1/|Aut|.  Permutations are tuples on 0..d-1
and ``_mul(a, b)`` applies ``b`` first.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial, prod
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .fatgraph import UnsupportedSizeError, cycles_of

__all__ = [
    "FrontierError",
    "Partition",
    "BranchData",
    "belyi_count",
    "simple_hurwitz",
    "class_trace",
    "elsv_hurwitz",
    "labeled_hurwitz",
    "ELSV_TABLE",
]

Perm = Tuple[int, ...]

BELYI_MAX_DEGREE = 12
SIMPLE_MAX_DEGREE = 6
SIMPLE_MAX_BRANCH = 12
TRACE_MAX_DEGREE = 8


class FrontierError(UnsupportedSizeError):
    pass


@dataclass(frozen=True)
class Partition:
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if not parts or parts[-1] < 1:
            raise ValueError("a partition needs at least one positive part")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        try:
            return cls(tuple(int(x) for x in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"malformed partition {text!r}") from exc

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def aut_order(self) -> int:
        """|Aut mu|: permutations of equal parts."""
        return prod(factorial(self.parts.count(p)) for p in set(self.parts))

    def centralizer_order(self) -> int:
        return prod(self.parts) * self.aut_order()

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


@dataclass(frozen=True)
class BranchData:
    degree: int
    profiles: Tuple[Partition, ...]

    def __post_init__(self):
        object.__setattr__(self, "profiles", tuple(self.profiles))
        for p in self.profiles:
            if p.size != self.degree:
                raise ValueError(f"profile {p} is not a partition of {self.degree}")

    def genus(self) -> Optional[int]:
        """Genus from Riemann-Hurwitz for a connected cover, or None."""
        twice = 2 - 2 * self.degree + sum(self.degree - len(p) for p in self.profiles)
        if twice % 2 or twice < 0:
            return None
        return twice // 2


# ---------------------------------------------------------------------------
# permutation helpers


def _mul(a: Perm, b: Perm) -> Perm:
    return tuple(a[x] for x in b)


def _inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _ncycles(a: Perm) -> int:
    seen = [False] * len(a)
    c = 0
    for i in range(len(a)):
        if not seen[i]:
            c += 1
            while not seen[i]:
                seen[i] = True
                i = a[i]
    return c


def _cycle_type(a: Perm) -> Tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles_of(a)), reverse=True))


def _canonical(parts: Sequence[int]) -> Perm:
    """Permutation whose cycles are consecutive blocks of the given lengths."""
    out = []
    start = 0
    for p in parts:
        out.extend(start + (i + 1) % p for i in range(p))
        start += p
    return tuple(out)


def _transitive(d: int, gens: Sequence[Perm]) -> bool:
    parent = list(range(d))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = d
    for gen in gens:
        for i, j in enumerate(gen):
            a, b = find(i), find(j)
            if a != b:
                parent[a] = b
                comps -= 1
    return comps == 1


def _involutions(points: List[int], partial: List[int]) -> Iterator[List[int]]:
    if not points:
        yield partial
        return
    a = points[0]
    for k in range(1, len(points)):
        b = points[k]
        partial[a], partial[b] = b, a
        yield from _involutions(points[1:k] + points[k + 1:], partial)


# ---------------------------------------------------------------------------
# Belyi covers


def _belyi_branch(args) -> int:
    g, sigma3, forbid_units, first = args
    d = len(sigma3)
    target = 2 - 2 * g
    hits = 0
    partial = [0] * d
    partial[0], partial[first] = first, 0
    rest = [i for i in range(1, d) if i != first]
    for inv in _involutions(rest, partial):
        s2 = tuple(inv)
        s1 = _inv(_mul(s2, sigma3))
        if forbid_units and any(s1[i] == i for i in range(d)):
            continue
        if _ncycles(s1) + d // 2 + _ncycles(sigma3) - d != target:
            continue
        if _transitive(d, (s2, sigma3)):
            hits += 1
    return hits


def belyi_count(
    g: int,
    b: Sequence[int],
    forbid_units: bool = True,
    relabel: Optional[Sequence[int]] = None,
    jobs: int = 1,
) -> Fraction:
    """Weighted count of connected genus-g covers with profile (2,...,2)
    over 1 and (b_1,...,b_n) over infinity, the points over infinity labeled.

    With ``forbid_units`` the profile over 0 has no part equal to 1 and the
    count equals N_{g,n}(b).  ``relabel`` conjugates the fixed permutation
    over infinity by the given permutation of the points.
    """
    b = tuple(int(x) for x in b)
    if not b or any(x < 1 for x in b):
        raise ValueError("lengths must be positive")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    d = sum(b)
    if d % 2:
        return Fraction(0)
    if d > BELYI_MAX_DEGREE:
        raise FrontierError(f"degree {d} exceeds the Belyi frontier {BELYI_MAX_DEGREE}")
    sigma3 = _canonical(b)
    if relabel is not None:
        pi = tuple(relabel)
        if sorted(pi) != list(range(d)):
            raise ValueError("relabel must be a permutation of the points")
        sigma3 = _mul(_mul(pi, sigma3), _inv(pi))
    tasks = [(g, sigma3, forbid_units, first) for first in range(1, d)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            hits = sum(ex.map(_belyi_branch, tasks))
    else:
        hits = sum(map(_belyi_branch, tasks))
    return Fraction(hits, prod(b))


# ---------------------------------------------------------------------------
# simple Hurwitz numbers


def _orbits_merge(orbits: Tuple[int, ...], i: int, j: int) -> Tuple[int, ...]:
    """Orbits as a tuple of representative labels, merged on a transposition."""
    a, b = orbits[i], orbits[j]
    if a == b:
        return orbits
    lo, hi = min(a, b), max(a, b)
    return tuple(lo if x == hi else x for x in orbits)


def simple_hurwitz(g: int, mu: Partition) -> Fraction:
    """H_{g,mu}: profile mu over infinity and r = 2g - 2 + l(mu) + |mu|
    simple branch points, by counting transposition factorizations."""
    d = mu.size
    r = 2 * g - 2 + len(mu) + d
    if g < 0:
        raise ValueError("genus must be nonnegative")
    if d > SIMPLE_MAX_DEGREE or r > SIMPLE_MAX_BRANCH:
        raise FrontierError(f"degree {d} / {r} branch points exceed the search budget")
    if r < 0:
        return Fraction(0)
    target = _inv(_canonical(mu.parts))
    transpositions = [(i, j) for i in range(d) for j in range(i + 1, d)]

    @lru_cache(maxsize=None)
    def count(pi: Perm, orbits: Tuple[int, ...], k: int) -> int:
        if k == 0:
            return 1 if pi == target and len(set(orbits)) == 1 else 0
        # transpositions needed to reach the target, and to connect the orbits
        dist = d - _ncycles(_mul(_inv(pi), target))
        if dist > k or (k - dist) % 2 or len(set(orbits)) - 1 > k:
            return 0
        total = 0
        for i, j in transpositions:
            t = list(range(d))
            t[i], t[j] = j, i
            total += count(_mul(tuple(t), pi), _orbits_merge(orbits, i, j), k - 1)
        return total

    hits = count(tuple(range(d)), tuple(range(d)), r)
    return Fraction(hits, mu.centralizer_order())


# ---------------------------------------------------------------------------
# the class-algebra trace


@lru_cache(maxsize=None)
def _class_members(d: int, parts: Tuple[int, ...]) -> Tuple[Perm, ...]:
    return tuple(p for p in permutations(range(d)) if _cycle_type(p) == parts)


def _class_table(d: int, parts: Tuple[int, ...]) -> Dict[Tuple[int, ...], Dict[Tuple[int, ...], int]]:
    """T[lam][nu] = #{s in C_parts : pi_lam * s has type nu}."""
    members = _class_members(d, parts)
    table: Dict[Tuple[int, ...], Dict[Tuple[int, ...], int]] = {}
    for lam in _partitions(d):
        pi = _canonical(lam)
        row: Dict[Tuple[int, ...], int] = {}
        for s in members:
            nu = _cycle_type(_mul(pi, s))
            row[nu] = row.get(nu, 0) + 1
        table[lam] = row
    return table


def _partitions(d: int, maxpart: Optional[int] = None) -> List[Tuple[int, ...]]:
    if maxpart is None:
        maxpart = d
    if d == 0:
        return [()]
    out = []
    for p in range(min(d, maxpart), 0, -1):
        out.extend((p,) + rest for rest in _partitions(d - p, p))
    return out


def class_trace(data: BranchData) -> Fraction:
    """Disconnected weighted count: tr(C_1 ... C_k) / d!^2 in the regular
    representation, i.e. tuples in the classes with product 1, over d!."""
    d = data.degree
    if d > TRACE_MAX_DEGREE:
        raise FrontierError(f"degree {d} exceeds the trace frontier {TRACE_MAX_DEGREE}")
    if not data.profiles:
        return Fraction(1, factorial(d))
    first = data.profiles[0].parts
    dist: Dict[Tuple[int, ...], int] = {first: len(_class_members(d, first))}
    for prof in data.profiles[1:]:
        table = _class_table(d, prof.parts)
        new: Dict[Tuple[int, ...], int] = {}
        for lam, w in dist.items():
            for nu, c in table[lam].items():
                new[nu] = new.get(nu, 0) + w * c
        dist = new
    return Fraction(dist.get((1,) * d, 0), factorial(d))


# ---------------------------------------------------------------------------
# ELSV


def _p03(mu):
    return Fraction(1)


def _p11(mu):
    return Fraction(mu[0] - 1, 24)


def _p04(mu):
    return Fraction(sum(mu))


def _p12(mu):
    a, b = mu
    return Fraction(a * a + a * b + b * b - a - b, 24)


def _p01(mu):
    return Fraction(1, mu[0] ** 2)


def _p02(mu):
    return Fraction(1, mu[0] + mu[1])


# (g, n) -> (P_{g,n}, is_table_row).  The (0,1) and (0,2) entries are the
# standard unstable conventions, not polynomials.
ELSV_TABLE: Dict[Tuple[int, int], Tuple[Callable[[Sequence[int]], Fraction], bool]] = {
    (0, 3): (_p03, True),
    (1, 1): (_p11, True),
    (0, 4): (_p04, True),
    (1, 2): (_p12, True),
    (0, 1): (_p01, False),
    (0, 2): (_p02, False),
}


def elsv_hurwitz(g: int, mu: Partition) -> Fraction:
    """(r!/|Aut mu|) prod(mu_i^mu_i / mu_i!) P_{g,n}(mu)."""
    key = (g, len(mu))
    if key not in ELSV_TABLE:
        raise FrontierError(f"no P_{{g,n}} row for (g, n) = {key}")
    P, _ = ELSV_TABLE[key]
    r = 2 * g - 2 + len(mu) + mu.size
    pref = Fraction(factorial(r), mu.aut_order())
    for m in mu.parts:
        pref *= Fraction(m**m, factorial(m))
    return pref * P(mu.parts)


def labeled_hurwitz(g: int, mu: Partition, method: str = "search") -> Fraction:
    """H_{g,n}(mu) = (|Aut mu| / r!) H_{g,mu}."""
    r = 2 * g - 2 + len(mu) + mu.size
    h = simple_hurwitz(g, mu) if method == "search" else elsv_hurwitz(g, mu)
    return Fraction(mu.aut_order(), factorial(r)) * h
