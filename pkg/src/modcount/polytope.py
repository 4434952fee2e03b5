"""Vector partition functions of P_A(b) = {x > 0 : Ax = b}.

Lattice counts by bounded search, the lattice index of A Z^N, volumes by
dilation and exact interpolation, Ehrhart fits, and the product form of
the discrete Laplace transform.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import List, Sequence, Tuple

from .exactnum import InconsistentError, Polynomial, UnderdeterminedError, interpolate_univariate

Matrix = Tuple[Tuple[int, ...], ...]


class RankDeficientError(ValueError):
    pass


class DegenerateDirectionError(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    A: Matrix

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        object.__setattr__(self, "A", A)
        if not A or not A[0]:
            raise ValueError("A must have at least one row and one column")
        if len({len(r) for r in A}) != 1:
            raise ValueError("ragged matrix")
        if any(x < 0 for r in A for x in r):
            raise ValueError("entries must be nonnegative")
        if any(all(r[j] == 0 for r in A) for j in range(len(A[0]))):
            raise ValueError("A has a zero column")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ConstraintSystem":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def N(self) -> int:
        return len(self.A[0])

    def columns(self) -> List[Tuple[int, ...]]:
        return [tuple(r[j] for r in self.A) for j in range(self.N)]


def count_lattice_points(sys: ConstraintSystem, b: Sequence[int], strict: bool = True) -> int:
    """Number of integer x with Ax = b and x_i >= 1 (strict) or x_i >= 0."""
    b = tuple(int(x) for x in b)
    if len(b) != sys.n:
        raise ValueError(f"b must have {sys.n} entries")
    if any(x < 0 for x in b):
        raise ValueError("b must be nonnegative")
    return _count(tuple(sorted(sys.columns(), key=lambda c: -sum(c))), b, strict)


@lru_cache(maxsize=1 << 18)
def _count(cols: Tuple[Tuple[int, ...], ...], b: Tuple[int, ...], strict: bool) -> int:
    lo = 1 if strict else 0
    n = len(b)
    N = len(cols)
    # suffix sums: minimum that columns j.. must still contribute to each row
    need = [[0] * n for _ in range(N + 1)]
    alive = [[False] * n for _ in range(N + 1)]
    for j in range(N - 1, -1, -1):
        for i in range(n):
            need[j][i] = need[j + 1][i] + lo * cols[j][i]
            alive[j][i] = alive[j + 1][i] or cols[j][i] > 0
    if any(need[0][i] > b[i] for i in range(n)):
        return 0

    def rec(j: int, r: List[int]) -> int:
        if j == N:
            return 1 if not any(r) else 0
        for i in range(n):
            if r[i] and not alive[j][i]:
                return 0
        col = cols[j]
        hi = min((r[i] - need[j + 1][i]) // col[i] for i in range(n) if col[i])
        total = 0
        for x in range(lo, hi + 1):
            r2 = [r[i] - x * col[i] for i in range(n)]
            total += rec(j + 1, r2)
        return total

    return rec(0, list(b))


def _det(M: List[List[int]]) -> int:
    """Integer determinant by Bareiss elimination."""
    M = [row[:] for row in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def lattice_index(sys: ConstraintSystem) -> int:
    """Index of A Z^N in Z^n, the product of the elementary divisors of A.

    Integer column operations bring A to lower-triangular form without
    changing the column lattice; the index is the product of the diagonal.
    """
    return _index_of_columns(tuple(sys.columns()))


@lru_cache(maxsize=None)
def _index_of_columns(cols: Tuple[Tuple[int, ...], ...]) -> int:
    n = len(cols[0])
    M = [list(c) for c in cols]  # each entry is one generator
    index = 1
    for i in range(n):
        live = [c for c in M[i:] if c[i]]
        dead = [c for c in M[i:] if not c[i]]
        if not live:
            raise RankDeficientError("A does not have full row rank")
        while len(live) > 1:
            live.sort(key=lambda c: abs(c[i]))
            piv = live[0]
            rest = []
            for c in live[1:]:
                q = c[i] // piv[i]
                c = [a - q * b for a, b in zip(c, piv)]
                (rest if c[i] else dead).append(c)
            live = [piv] + rest
        M = M[:i] + live + dead
        index *= abs(live[0][i])
    return index


def lattice_index_by_minors(sys: ConstraintSystem) -> int:
    """The same index as the gcd of the maximal minors (slow oracle)."""
    cols = sys.columns()
    d = 0
    for subset in combinations(range(sys.N), sys.n):
        minor = [[cols[j][i] for j in subset] for i in range(sys.n)]
        d = gcd(d, _det(minor))
    if d == 0:
        raise RankDeficientError("A does not have full row rank")
    return d


def _fit_dilation(counts_at, degree: int, steps=(1, 2, 3, 4, 6, 12), extra: int = 3):
    """Fit k -> counts_at(step * k) by a degree-``degree`` polynomial on the
    first residue class that is consistent with ``extra`` held-out points."""
    for step in steps:
        ks = list(range(1, degree + 2 + extra))
        ys = [counts_at(step * k) for k in ks]
        try:
            return step, interpolate_univariate(ks, ys, degree), ys
        except InconsistentError:
            continue
    raise InconsistentError("no residue class gives polynomial counts")


def polytope_volume(sys: ConstraintSystem, b: Sequence[int]) -> Fraction:
    """Quotient volume V_{P_A}(b) from the leading dilation coefficient."""
    ind = lattice_index(sys)
    D = sys.N - sys.n
    step, poly, ys = _fit_dilation(lambda t: count_lattice_points(sys, [t * x for x in b]), D)
    if not any(ys):
        return Fraction(0)
    lead = poly.coefficient((D,))
    if lead == 0:
        raise DegenerateDirectionError(f"counts along {tuple(b)} grow slower than degree {D}")
    return lead / (Fraction(step) ** D * ind)


def ehrhart_polynomial(sys: ConstraintSystem, b0: Sequence[int], T: int, step: int = 1) -> Polynomial:
    """p(k) with p(k) = #{x >= 0 : Ax = k step b0} for k = 1..T, checked at T+1."""
    D = sys.N - sys.n
    if T < D + 2:
        raise ValueError(f"T must be at least {D + 2}")
    ks = list(range(1, T + 1))
    ys = [count_lattice_points(sys, [step * k * x for x in b0], strict=False) for k in ks]
    poly = interpolate_univariate(ks, ys, D)
    check = count_lattice_points(sys, [step * (T + 1) * x for x in b0], strict=False)
    if poly.evaluate([T + 1]) != check:
        raise InconsistentError(f"fit fails at k = {T + 1}")
    return poly


def reciprocity_holds(sys: ConstraintSystem, b0: Sequence[int], poly: Polynomial, kmax: int, step: int = 1) -> bool:
    """Interior count at k b0 equals (-1)^(N-n) p(-k) for k = 1..kmax."""
    sign = (-1) ** (sys.N - sys.n)
    return all(
        count_lattice_points(sys, [step * k * x for x in b0], strict=True) == sign * poly.evaluate([-k])
        for k in range(1, kmax + 1)
    )


@dataclass(frozen=True)
class LaplaceProductForm:
    """prod over columns a of z^a / (1 - z^a)."""

    columns: Tuple[Tuple[int, ...], ...]

    @property
    def nvars(self) -> int:
        return len(self.columns[0])

    def to_expr(self):
        from .laplace import Const, Monomial

        expr = Const(1)
        for a in self.columns:
            m = Monomial(a)
            expr = expr * (m / (Const(1) - m))
        return expr


def vpf_laplace_form(sys: ConstraintSystem) -> LaplaceProductForm:
    return LaplaceProductForm(tuple(sys.columns()))


def parse_matrix(text: str) -> ConstraintSystem:
    """``"1,2,2;1,0,0"`` -> ConstraintSystem."""
    try:
        rows = [[int(x) for x in r.split(",")] for r in text.split(";")]
    except ValueError as exc:
        raise ValueError(f"malformed matrix {text!r}") from exc
    return ConstraintSystem.from_rows(rows)


__all__ = [
    "ConstraintSystem",
    "LaplaceProductForm",
    "RankDeficientError",
    "DegenerateDirectionError",
    "UnderdeterminedError",
    "count_lattice_points",
    "lattice_index",
    "lattice_index_by_minors",
    "polytope_volume",
    "ehrhart_polynomial",
    "reciprocity_holds",
    "vpf_laplace_form",
    "parse_matrix",
]
