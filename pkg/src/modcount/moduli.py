"""Lattice-point counts N_{g,n} and the invariants read off from them.

Two independent routes to N_{g,n}(b): summing strict lattice counts over the
fatgraph catalog (``n_direct``) and the edge/lollipop-removal recursion
(``n_recursive``).  Quasi-polynomials are fitted to recursion samples and
everything downstream (Euler characteristics, Kontsevich volumes,
intersection numbers, dilaton) is read off the fitted polynomials.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, factorial, prod
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .exactnum import (
    InconsistentError,
    Polynomial,
    QuasiPolynomial,
    fit_polynomial,
    all_monomials,
    interpolate_univariate,
    qp_evaluate,
    qp_fit,
    symmetric_square_basis,
    zeta_neg,
)
from .fatgraph import enumerate_fatgraphs, incidence_columns
from .polytope import _count

__all__ = [
    "is_stable",
    "n_direct",
    "n_recursive",
    "recursion_summands",
    "n_quasipolynomial",
    "euler_characteristic",
    "kontsevich_volume",
    "intersection_numbers",
    "dilaton_check",
    "hz_c",
    "hz_epsilon",
    "hz_mu",
    "n_g1_hz",
    "binomial_coefficients_from_poly",
    "binomial_coefficients_from_catalog",
    "wp_volume",
    "wp_top_degree",
]


def is_stable(g: int, n: int) -> bool:
    return g >= 0 and n >= 1 and 2 * g - 2 + n > 0


def _check_b(n: int, b: Sequence[int]) -> Tuple[int, ...]:
    b = tuple(int(x) for x in b)
    if len(b) != n:
        raise ValueError(f"expected {n} boundary lengths, got {len(b)}")
    if any(x < 1 for x in b):
        raise ValueError("boundary lengths must be positive")
    return b


# ---------------------------------------------------------------------------
# direct enumeration


@lru_cache(maxsize=None)
def _catalog_cells(g: int, n: int) -> Tuple[Tuple[int, Tuple[Tuple[int, ...], ...], Fraction], ...]:
    """(E, columns, total weight) with identical column multisets merged,
    sorted by edge count."""
    weights: Dict[Tuple[Tuple[int, ...], ...], Fraction] = {}
    for fg, aut in enumerate_fatgraphs(g, n):
        cols = incidence_columns(fg)
        weights[cols] = weights.get(cols, Fraction(0)) + Fraction(1, aut)
    cells = [(len(cols), tuple(sorted(cols, key=lambda c: -sum(c))), w) for cols, w in weights.items()]
    cells.sort(key=lambda t: t[0])
    return tuple(cells)


def n_direct(g: int, n: int, b: Sequence[int]) -> Fraction:
    """Sum over labeled fatgraphs of strict lattice counts / |Aut|."""
    b = _check_b(n, b)
    total = Fraction(0)
    for E, cols, w in _catalog_cells(g, n):
        if 2 * E > sum(b):
            break  # every edge has length >= 1 and is counted twice in sum(b)
        c = _count(cols, b, True)
        if c:
            total += c * w
    return total


# ---------------------------------------------------------------------------
# recursion


class ParityViolation(AssertionError):
    pass


def _base(g: int, b: Tuple[int, ...]) -> Optional[Fraction]:
    n = len(b)
    if 2 * g - 2 + n <= 0:
        return Fraction(0)
    if sum(b) % 2:
        return Fraction(0)
    if (g, n) == (0, 3):
        return Fraction(1)
    if (g, n) == (1, 1):
        return Fraction(b[0] ** 2 - 4, 48)
    return None


def _N(g: int, b: Sequence[int]) -> Fraction:
    if g < 0:
        return Fraction(0)
    return _N_sorted(g, tuple(sorted(b)))


@lru_cache(maxsize=None)
def _N_sorted(g: int, b: Tuple[int, ...]) -> Fraction:
    v = _base(g, b)
    if v is not None:
        return v
    return sum((t for _, _, t in recursion_summands(g, b)), Fraction(0)) / sum(b)


def recursion_summands(g: int, b: Sequence[int]) -> Iterator[Tuple[str, int, Fraction]]:
    """Nonzero summands of the right-hand side as ``(case, q_or_r, value)``.

    Case 1 removes an edge between boundaries i and j; case 2 removes one
    bounding a single boundary i, splitting it into p and q with r left over.
    """
    b = tuple(b)
    n = len(b)
    for i, j in combinations(range(n), 2):
        rest = tuple(b[k] for k in range(n) if k not in (i, j))
        s = b[i] + b[j]
        for p in range(1, s):
            q = s - p
            v = _N(g, (p,) + rest)
            if v:
                yield "edge", q, p * q * v
    for i in range(n):
        rest = tuple(b[k] for k in range(n) if k != i)
        m = len(rest)
        for p in range(1, b[i] - 1):
            for q in range(1, b[i] - p):
                r = b[i] - p - q
                inner = _N(g - 1, (p, q) + rest)
                for g1 in range(g + 1):
                    for mask in range(1 << m):
                        I = tuple(rest[k] for k in range(m) if mask >> k & 1)
                        J = tuple(rest[k] for k in range(m) if not mask >> k & 1)
                        left = _N(g1, (p,) + I)
                        if left:
                            inner += left * _N(g - g1, (q,) + J)
                if inner:
                    yield "lollipop", r, Fraction(p * q * r) * inner / 2


def n_recursive(g: int, n: int, b: Sequence[int], check_parity: bool = False) -> Fraction:
    """N_{g,n}(b) from the recursion with N_{0,3} and N_{1,1} as base cases."""
    b = _check_b(n, b)
    if not is_stable(g, n):
        return Fraction(0)
    if check_parity and _base(g, tuple(sorted(b))) is None:
        for case, qr, _ in recursion_summands(g, b):
            if qr % 2:
                raise ParityViolation(f"nonzero {case} summand with odd {qr} at {b}")
    return _N(g, b)


# ---------------------------------------------------------------------------
# quasi-polynomials


def _canonical_parity(n: int, k: int) -> Tuple[int, ...]:
    return (1,) * k + (0,) * (n - k)


def _block_sorted_points(k: int, n: int) -> Iterator[Tuple[int, ...]]:
    """Points with odd entries first, each block weakly decreasing, in order
    of increasing total."""
    total = n + (n - k)  # minimal sum: odd entries 1, even entries 2
    while True:
        for pt in _points_with_sum(k, n, total):
            yield pt
        total += 2


def _points_with_sum(k: int, n: int, total: int):
    def blocks(count, start, remaining, maxv):
        if count == 0:
            if remaining == 0:
                yield ()
            return
        top = min(maxv, remaining)
        top -= (top - start) % 2
        for v in range(top, start - 1, -2):
            for tail in blocks(count - 1, start, remaining - v, v):
                yield (v,) + tail

    for odd_sum in range(k, total + 1):
        for odd in blocks(k, 1, odd_sum, odd_sum):
            for even in blocks(n - k, 2, total - odd_sum, total):
                yield odd + even


def _select_samples(g: int, n: int, k: int, degree: int, extra: int = 3):
    parity = _canonical_parity(n, k)
    basis = symmetric_square_basis(parity, degree)
    m = len(basis)
    chosen: List[Tuple[int, ...]] = []
    echelon: List[Tuple[int, List[Fraction]]] = []
    holdouts: List[Tuple[int, ...]] = []
    for pt in _block_sorted_points(k, n):
        row = [
            sum((Fraction(prod(x**e for x, e in zip(pt, exp))) for exp in elem), Fraction(0))
            for elem in basis
        ]
        for piv, erow in echelon:
            if row[piv]:
                f = row[piv] / erow[piv]
                row = [a - f * c for a, c in zip(row, erow)]
        piv = next((i for i, a in enumerate(row) if a), None)
        if piv is not None and len(echelon) < m:
            echelon.append((piv, row))
            chosen.append(pt)
        elif len(echelon) == m:
            holdouts.append(pt)
            if len(holdouts) == extra:
                break
    return parity, chosen + holdouts


_QP_MEMO: Dict[Tuple[int, int], QuasiPolynomial] = {}


def _expand_classes(n: int, canonical: Dict[int, Polynomial]) -> Dict[Tuple[int, ...], Polynomial]:
    out = {}
    for parity in product((0, 1), repeat=n):
        k = sum(parity)
        if k % 2 or k not in canonical or not canonical[k]:
            continue
        odd = [i for i in range(n) if parity[i]]
        even = [i for i in range(n) if not parity[i]]
        out[parity] = canonical[k].permute(odd + even)
    return out


def _cache_path(cache_dir, g: int, n: int) -> Optional[Path]:
    env = os.environ.get("MODCOUNT_CACHE")
    d = env or cache_dir
    if not d:
        return None
    return Path(d) / f"N_g{g}_n{n}.json"


def n_quasipolynomial(g: int, n: int, cache_dir: Optional[str] = None, verify_direct: bool = True) -> QuasiPolynomial:
    """Fit N_{g,n} as a quasi-polynomial of degree 3g-3+n in the b_i**2.

    Raises :class:`InconsistentError` if the recursion values are not
    polynomial on some parity class.
    """
    if not is_stable(g, n):
        raise ValueError(f"(g, n) = ({g}, {n}) is not stable")
    if (g, n) in _QP_MEMO:
        return _QP_MEMO[(g, n)]
    path = _cache_path(cache_dir, g, n)
    if path is not None and path.exists():
        try:
            qp = QuasiPolynomial.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError, TypeError):
            qp = None  # unreadable cache entry: recompute and overwrite
        if qp is not None and qp.nvars == n:
            _QP_MEMO[(g, n)] = qp
            return qp

    degree = 3 * g - 3 + n
    canonical: Dict[int, Polynomial] = {}
    for k in range(0, n + 1, 2):
        parity, pts = _select_samples(g, n, k, degree)
        samples = [(pt, _N(g, pt)) for pt in pts]
        fitted = qp_fit(samples, n, degree)
        canonical[k] = fitted.polynomial(parity)
    qp = QuasiPolynomial(n, _expand_classes(n, canonical))

    if verify_direct and 6 * g - 6 + 3 * n <= 9:
        for k in range(0, n + 1):
            low = k + 2 * (n - k)
            for pt in (q for t in range(low, low + 5, 2) for q in _points_with_sum(k, n, t)):
                if n_direct(g, n, pt) != qp_evaluate(qp, pt):
                    raise InconsistentError(f"fitted N_{g},{n} disagrees with enumeration at {pt}")

    _QP_MEMO[(g, n)] = qp
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(qp.to_json(), sort_keys=True, indent=1))
    return qp


# ---------------------------------------------------------------------------
# invariants


def euler_characteristic(g: int, n: int, method: str = "lattice") -> Fraction:
    """Orbifold Euler characteristic of M_{g,n}."""
    if not is_stable(g, n):
        raise ValueError(f"(g, n) = ({g}, {n}) is not stable")
    if method == "lattice":
        return qp_evaluate(n_quasipolynomial(g, n), (0,) * n)
    if method == "zeta":
        m = n - 1
        if g == 0:
            return Fraction((-1) ** m * factorial(m - 2))
        return (-1) ** m * Fraction(factorial(2 * g - 2 + m), factorial(2 * g - 2)) * zeta_neg(g)
    raise ValueError(f"unknown method {method!r}")


def kontsevich_volume(g: int, n: int) -> Polynomial:
    even = n_quasipolynomial(g, n).polynomial((0,) * n)
    return even.homogeneous_part(6 * g - 6 + 2 * n) / 2


def intersection_numbers(g: int, n: int) -> Dict[Tuple[int, ...], Fraction]:
    """<tau_{d_1} ... tau_{d_n}> for |d| = 3g-3+n from the top coefficients."""
    even = n_quasipolynomial(g, n).polynomial((0,) * n)
    scale = Fraction(2) ** (5 * g - 6 + 2 * n)
    out = {}
    top = 3 * g - 3 + n
    for d in product(range(top + 1), repeat=n):
        if sum(d) != top:
            continue
        c = even.coefficient(tuple(2 * x for x in d))
        out[d] = c * scale * prod(factorial(x) for x in d)
    return out


def dilaton_check(g: int, n: int, b: Sequence[int]) -> Tuple[Fraction, Fraction]:
    """Both sides of N_{g,n+1}(2, b) - N_{g,n+1}(0, b) = (2g-2+n) N_{g,n}(b)."""
    if not is_stable(g, n):
        raise ValueError(f"(g, n) = ({g}, {n}) is not stable")
    b = tuple(int(x) for x in b)
    if len(b) != n:
        raise ValueError(f"expected {n} entries")
    qp = n_quasipolynomial(g, n + 1)
    lhs = qp_evaluate(qp, (2,) + b) - qp_evaluate(qp, (0,) + b)
    if all(x >= 1 for x in b):
        base = n_recursive(g, n, b)
    else:
        base = qp_evaluate(n_quasipolynomial(g, n), b)
    return lhs, (2 * g - 2 + n) * base


# ---------------------------------------------------------------------------
# the n = 1 case


@lru_cache(maxsize=None)
def _hz_table(nmax: int, kmax: int) -> Dict[Tuple[int, int], int]:
    c: Dict[Tuple[int, int], int] = {}
    for k in range(kmax + 1):
        c[(0, k)] = k
    for n in range(1, nmax + 1):
        c[(n, 0)] = 0
        for k in range(1, kmax + 1):
            c[(n, k)] = c[(n, k - 1)] + c[(n - 1, k)] + c[(n - 1, k - 1)]
    return c


def hz_c(nmax: int, kmax: int) -> Dict[Tuple[int, int], int]:
    """c(n, k) for 0 <= n <= nmax, 0 <= k <= kmax."""
    if nmax < 0 or kmax < 0:
        raise ValueError("bounds must be nonnegative")
    return dict(_hz_table(nmax, kmax))


def _double_factorial(m: int) -> int:
    return prod(range(m, 0, -2)) if m > 0 else 1


@lru_cache(maxsize=None)
def _epsilon_row(n: int) -> Tuple[Fraction, ...]:
    """Coefficients in k of (2n-1)!! c(n, k), a polynomial of degree n+1."""
    table = _hz_table(n, n + 1)
    ks = list(range(n + 2))
    ys = [_double_factorial(2 * n - 1) * table[(n, k)] for k in ks]
    poly = interpolate_univariate(ks, ys)
    return tuple(poly.coefficient((d,)) for d in range(n + 2))


def hz_epsilon(g: int, n: int) -> int:
    """Genus-g gluings of a 2n-gon with a distinguished edge."""
    if n < 0 or g < 0 or 2 * g > n + 1:
        return 0
    v = _epsilon_row(n)[n + 1 - 2 * g]
    assert v.denominator == 1
    return int(v)


@lru_cache(maxsize=None)
def hz_mu(g: int, n: int) -> int:
    """Genus-g gluings of a 2n-gon with no two neighbouring edges identified."""
    if n <= 0 or n < 2 * g:
        return 0
    if g == 0:
        # every planar gluing of a 2n-gon, n >= 2, folds some adjacent pair
        return 1 if n == 1 else 0
    return hz_epsilon(g, n) - sum(comb(2 * n, i) * hz_mu(g, n - i) for i in range(1, n))


def n_g1_hz(g: int, b: int) -> Fraction:
    """N_{g,1}(b) = mu_g(b/2) / b."""
    if g < 1:
        raise ValueError("g must be >= 1")
    if b < 2 or b % 2:
        raise ValueError("b must be even and at least 2")
    return Fraction(hz_mu(g, b // 2), b)


def binomial_coefficients_from_poly(g: int) -> Dict[int, Fraction]:
    """c_k with N_{g,1}(b) = sum_k c_k binom(b/2 - 1, k - 1), from the fitted
    polynomial by forward differences."""
    qp = n_quasipolynomial(g, 1)
    f = [qp_evaluate(qp, (2 * (j + 1),)) for j in range(6 * g - 3)]
    out = {}
    for t in range(6 * g - 3):
        ck = sum((-1) ** (t - s) * comb(t, s) * f[s] for s in range(t + 1))
        if ck:
            out[t + 1] = Fraction(ck)
    return out


def binomial_coefficients_from_catalog(g: int) -> Dict[int, Fraction]:
    """c_k = sum of 1/|Aut| over genus-g one-boundary fatgraphs with k edges."""
    out: Dict[int, Fraction] = {}
    for fg, aut in enumerate_fatgraphs(g, 1):
        out[fg.num_edges] = out.get(fg.num_edges, Fraction(0)) + Fraction(1, aut)
    return out


def cell_count_fit(columns: Sequence[Sequence[int]], points: Sequence[Sequence[int]], degree: int) -> Polynomial:
    """Fit strict lattice counts of one cell by a general polynomial of the
    given degree; raises if the points are not all on one polynomial."""
    cols = tuple(sorted(tuple(c) for c in columns))
    n = len(points[0])
    values = [_count(cols, tuple(p), True) for p in points]
    return fit_polynomial(points, values, all_monomials(n, degree))


# ---------------------------------------------------------------------------
# Weil-Petersson table, stored in variables (L_1, ..., L_n, pi^2)


def wp_volume(g: int, n: int) -> Polynomial:
    m = n + 1
    L = [Polynomial.var(i, m) for i in range(n)]
    P = Polynomial.var(n, m)
    sq = sum((x * x for x in L), Polynomial.zero(m))
    rows = {
        (0, 3): lambda: Polynomial.const(1, m),
        (1, 1): lambda: (sq + 4 * P) / 48,
        (0, 4): lambda: (sq + 4 * P) / 2,
        (1, 2): lambda: (sq + 4 * P) * (sq + 12 * P) / 192,
        (2, 1): lambda: (sq + 4 * P) * (sq + 12 * P) * (5 * sq * sq + 384 * P * sq + 6960 * P * P)
        / (2**14 * 3**3 * 5),
    }
    if (g, n) not in rows:
        raise KeyError(f"no Weil-Petersson row for ({g}, {n})")
    return rows[(g, n)]()


def wp_top_degree(g: int, n: int) -> Polynomial:
    """Terms of the Weil-Petersson row free of pi, as a polynomial in L."""
    full = wp_volume(g, n)
    return Polynomial(n, {e[:n]: c for e, c in full.terms.items() if e[n] == 0})
