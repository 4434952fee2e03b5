"""Exact rational arithmetic: sparse polynomials, parity quasi-polynomials,
fraction-free linear solving and Bernoulli numbers.

Everything here works over :class:`fractions.Fraction`; there is no floating
point path anywhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import comb, lcm
from typing import Dict, List, Mapping, Sequence, Tuple

Exp = Tuple[int, ...]
Parity = Tuple[int, ...]

__all__ = [
    "Polynomial",
    "QuasiPolynomial",
    "FitError",
    "UnderdeterminedError",
    "InconsistentError",
    "solve_exact",
    "fit_polynomial",
    "interpolate_univariate",
    "qp_fit",
    "qp_evaluate",
    "symmetric_square_basis",
    "bernoulli_numbers",
    "zeta_neg",
    "parity_of",
]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Polynomial:
    """Sparse multivariate polynomial with rational coefficients.

    ``terms`` maps exponent vectors of length ``nvars`` to nonzero
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exp, object] | None = None):
        self.nvars = nvars
        clean: Dict[Exp, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have length {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = _frac(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c, nvars: int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, nvars: int) -> "Polynomial":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Polynomial.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = _frac(c)
        return Polynomial(self.nvars, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        result = Polynomial.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"b{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # queries ----------------------------------------------------------
    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(point)}")
        pt = [_frac(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x**k
            total += v
        return total

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def permute(self, perm: Sequence[int]) -> "Polynomial":
        """Substitute variable ``i`` by variable ``perm[i]``."""
        out = {}
        for e, c in self.terms.items():
            new = [0] * self.nvars
            for i, k in enumerate(e):
                new[perm[i]] = k
            out[tuple(new)] = c
        return Polynomial(self.nvars, out)

    def substitute_squares(self) -> "Polynomial":
        """Map a polynomial in u_i to the same polynomial in b_i**2."""
        return Polynomial(self.nvars, {tuple(2 * k for k in e): c for e, c in self.terms.items()})

    def only_even_powers(self) -> bool:
        return all(k % 2 == 0 for e in self.terms for k in e)

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "monomials": [
                {"exp": list(e), "coef": str(self.terms[e])} for e in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Polynomial":
        return cls(
            int(data["vars"]),
            {tuple(m["exp"]): Fraction(m["coef"]) for m in data["monomials"]},
        )


def parity_of(b: Sequence[int]) -> Parity:
    return tuple(int(x) % 2 for x in b)


@dataclass(frozen=True)
class QuasiPolynomial:
    """A polynomial per parity class of Z^n modulo 2Z^n.

    Classes absent from ``classes`` are the zero polynomial.
    """

    nvars: int
    classes: Dict[Parity, Polynomial] = field(default_factory=dict)

    def __post_init__(self):
        for p, poly in self.classes.items():
            if len(p) != self.nvars or poly.nvars != self.nvars:
                raise ValueError("parity class / polynomial dimension mismatch")

    def polynomial(self, parity: Sequence[int]) -> Polynomial:
        return self.classes.get(tuple(parity), Polynomial.zero(self.nvars))

    def evaluate(self, b: Sequence[int]) -> Fraction:
        return qp_evaluate(self, b)

    def __eq__(self, other):
        if not isinstance(other, QuasiPolynomial):
            return NotImplemented
        keys = set(self.classes) | set(other.classes)
        return self.nvars == other.nvars and all(
            self.polynomial(k) == other.polynomial(k) for k in keys
        )

    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "classes": [
                {"parity": list(p), "poly": self.classes[p].to_json()}
                for p in sorted(self.classes)
                if self.classes[p]
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QuasiPolynomial":
        n = int(data["vars"])
        return cls(
            n,
            {tuple(c["parity"]): Polynomial.from_json(c["poly"]) for c in data["classes"]},
        )


def qp_evaluate(qp: QuasiPolynomial, b: Sequence[int]) -> Fraction:
    """Evaluate ``qp`` at the integer vector ``b`` using b's parity class."""
    if len(b) != qp.nvars:
        raise ValueError(f"expected {qp.nvars} values, got {len(b)}")
    if any(int(x) != x for x in b):
        raise ValueError("quasi-polynomials are evaluated at integers only")
    return qp.polynomial(parity_of(b)).evaluate(b)


# ---------------------------------------------------------------------------
# exact linear algebra


class FitError(ValueError):
    pass


class UnderdeterminedError(FitError):
    pass


class InconsistentError(FitError):
    pass


def solve_exact(rows: Sequence[Sequence], rhs: Sequence) -> List[Fraction]:
    """Solve the (possibly overdetermined) system ``rows @ x = rhs`` exactly.

    Rows are scaled to integers and reduced by Bareiss fraction-free
    elimination.  Raises :class:`UnderdeterminedError` when the columns are
    not independent and :class:`InconsistentError` when extra rows disagree.
    """
    m = len(rows)
    if m != len(rhs):
        raise ValueError("row / right-hand side count mismatch")
    k = len(rows[0]) if m else 0
    if m < k or k == 0:
        raise UnderdeterminedError(f"{m} equations for {k} unknowns")
    M: List[List[int]] = []
    for r, y in zip(rows, rhs):
        fr = [_frac(v) for v in r] + [_frac(y)]
        scale = lcm(*(v.denominator for v in fr))
        M.append([int(v * scale) for v in fr])

    prev = 1
    for col in range(k):
        piv = next((i for i in range(col, m) if M[i][col] != 0), None)
        if piv is None:
            raise UnderdeterminedError(f"no pivot in column {col}")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        for i in range(col + 1, m):
            a = M[i][col]
            row_i, row_c = M[i], M[col]
            for j in range(col + 1, k + 1):
                row_i[j] = (row_i[j] * p - a * row_c[j]) // prev
            row_i[col] = 0
        prev = p
    for i in range(k, m):
        if M[i][k] != 0:
            raise InconsistentError(f"equation {i} is not satisfied by the fit")

    x = [Fraction(0)] * k
    for i in range(k - 1, -1, -1):
        s = Fraction(M[i][k])
        for j in range(i + 1, k):
            s -= M[i][j] * x[j]
        x[i] = s / M[i][i]
    return x


def _monomial_value(point: Sequence[Fraction], exp: Exp) -> Fraction:
    v = Fraction(1)
    for x, e in zip(point, exp):
        if e:
            v *= x**e
    return v


def fit_polynomial(
    points: Sequence[Sequence[int]],
    values: Sequence,
    basis: Sequence[Sequence[Exp]],
) -> Polynomial:
    """Fit a polynomial that is a linear combination of ``basis`` elements.

    Each basis element is a list of exponent vectors summed with coefficient 1
    (orbit sums for symmetric ansatzes; singletons otherwise).
    """
    if not points:
        raise UnderdeterminedError("no samples")
    n = len(points[0])
    pts = [[_frac(x) for x in p] for p in points]
    rows = [[sum(_monomial_value(p, e) for e in elem) for elem in basis] for p in pts]
    coeffs = solve_exact(rows, values)
    terms: Dict[Exp, Fraction] = {}
    for c, elem in zip(coeffs, basis):
        for e in elem:
            terms[e] = terms.get(e, Fraction(0)) + c
    return Polynomial(n, terms)


def all_monomials(nvars: int, max_degree: int) -> List[List[Exp]]:
    out = []
    for exp in product(range(max_degree + 1), repeat=nvars):
        if sum(exp) <= max_degree:
            out.append([exp])
    out.sort(key=lambda el: (sum(el[0]), el[0]))
    return out


def interpolate_univariate(xs: Sequence[int], ys: Sequence, degree: int | None = None) -> Polynomial:
    """Polynomial in one variable through the given points.

    With ``degree`` set the system is overdetermined and the extra points act
    as a consistency check.
    """
    if degree is None:
        degree = len(xs) - 1
    basis = [[(d,)] for d in range(degree + 1)]
    return fit_polynomial([(x,) for x in xs], ys, basis)


def _blocks_of(parity: Parity) -> List[List[int]]:
    odd = [i for i, p in enumerate(parity) if p]
    even = [i for i, p in enumerate(parity) if not p]
    return [blk for blk in (odd, even) if blk]


def symmetric_square_basis(parity: Parity, max_degree: int) -> List[List[Exp]]:
    """Orbit sums of monomials in b_i**2 of degree <= ``max_degree``,
    symmetric within the odd block and within the even block of ``parity``.
    """
    n = len(parity)
    blocks = _blocks_of(parity)
    basis: List[List[Exp]] = []
    seen = set()
    for exp in product(range(max_degree + 1), repeat=n):
        if sum(exp) > max_degree:
            continue
        orbit = set()
        for perms in product(*(permutations(blk) for blk in blocks)):
            new = [0] * n
            for blk, pb in zip(blocks, perms):
                for src, dst in zip(blk, pb):
                    new[dst] = exp[src]
            orbit.add(tuple(new))
        key = min(orbit)
        if key in seen:
            continue
        seen.add(key)
        basis.append(sorted(tuple(2 * k for k in e) for e in orbit))
    basis.sort(key=lambda el: (sum(el[0]), el[0]))
    return basis


def qp_fit(
    samples: Sequence[Tuple[Sequence[int], object]],
    n: int,
    max_degree_in_squares: int,
    symmetric: bool = True,
) -> QuasiPolynomial:
    """Fit a quasi-polynomial in the b_i**2 to exact samples.

    Samples are grouped by parity class; each class is solved separately with
    the block-symmetric ansatz (or the full monomial ansatz when
    ``symmetric`` is false).  Every sample must be reproduced exactly.
    """
    by_class: Dict[Parity, List[Tuple[Tuple[int, ...], Fraction]]] = {}
    for b, v in samples:
        b = tuple(int(x) for x in b)
        if len(b) != n:
            raise ValueError(f"sample {b} does not have {n} entries")
        by_class.setdefault(parity_of(b), []).append((b, _frac(v)))

    classes: Dict[Parity, Polynomial] = {}
    for parity, pts in sorted(by_class.items()):
        if symmetric:
            basis = symmetric_square_basis(parity, max_degree_in_squares)
        else:
            basis = [
                [tuple(2 * k for k in el[0])] for el in all_monomials(n, max_degree_in_squares)
            ]
        if len(pts) < len(basis):
            raise UnderdeterminedError(
                f"class {parity}: {len(pts)} samples for {len(basis)} unknowns"
            )
        poly = fit_polynomial([p for p, _ in pts], [v for _, v in pts], basis)
        if poly:
            classes[parity] = poly
    return QuasiPolynomial(n, classes)


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> Tuple[Fraction, ...]:
    B = [Fraction(1)]
    for k in range(1, m + 1):
        s = sum(comb(k + 1, j) * B[j] for j in range(k))
        B.append(-s / (k + 1))
    return tuple(B)


def bernoulli_numbers(m: int) -> List[Fraction]:
    """B_0..B_m with the B_1 = -1/2 convention."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return list(_bernoulli_table(m))


def zeta_neg(g: int) -> Fraction:
    """zeta(1 - 2g) = -B_{2g} / (2g)."""
    if g < 1:
        raise ValueError("g must be >= 1")
    return -_bernoulli_table(2 * g)[2 * g] / (2 * g)
