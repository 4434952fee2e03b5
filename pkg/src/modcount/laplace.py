"""Truncated power series, rational expressions, and the Laplace-transform
forms attached to N_{g,n} and V_{g,n}.

Differentials are dropped: a form ``f(z) dz_1 ... dz_n`` is represented by
its coefficient function ``f``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import factorial, prod
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exactnum import Polynomial

__all__ = [
    "AIRY_FORMS",
    "DISCRETE_FORMS",
    "AsymptoticReport",
    "Const",
    "Expr",
    "Monomial",
    "NotExpandableError",
    "TruncatedSeries",
    "airy_form_from_volume",
    "asymptotic_airy_check",
    "closed_form_expr",
    "closed_form_omega",
    "compare_airy_form",
    "compare_discrete_form",
    "discrete_omega_series",
    "first_mismatch",
    "laurent_terms",
    "series_expand",
    "var",
]

Exp = Tuple[int, ...]


class NotExpandableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# truncated series


class TruncatedSeries:
    """Multivariate power series with rational coefficients, exact up to
    total degree ``order``."""

    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs: Optional[Dict[Exp, object]] = None):
        self.nvars = nvars
        self.order = order
        self.coeffs: Dict[Exp, Fraction] = {}
        for e, c in (coeffs or {}).items():
            if len(e) != nvars:
                raise ValueError("exponent length mismatch")
            if sum(e) <= order and c:
                self.coeffs[tuple(e)] = Fraction(c)

    @classmethod
    def const(cls, c, nvars: int, order: int) -> "TruncatedSeries":
        return cls(nvars, order, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: Exp, nvars: int, order: int, c=1) -> "TruncatedSeries":
        return cls(nvars, order, {tuple(exp): c})

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return TruncatedSeries.const(other, self.nvars, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        out = {e: c for e, c in self.coeffs.items() if sum(e) <= order}
        for e, c in other.coeffs.items():
            if sum(e) <= order:
                out[e] = out.get(e, Fraction(0)) + c
        return TruncatedSeries(self.nvars, order, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.nvars, self.order, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        by_deg: Dict[int, List[Tuple[Exp, Fraction]]] = {}
        for e, c in other.coeffs.items():
            by_deg.setdefault(sum(e), []).append((e, c))
        out: Dict[Exp, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for d2, terms in by_deg.items():
                if d1 + d2 > order:
                    continue
                for e2, c2 in terms:
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
        return TruncatedSeries(self.nvars, order, out)

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        c0 = self.coeffs.get((0,) * self.nvars, Fraction(0))
        if c0 == 0:
            raise NotExpandableError("series has zero constant term")
        # 1/(c0 (1 - w)) = (1/c0) sum w^k, w without constant term
        w = TruncatedSeries.const(1, self.nvars, self.order) - self * (1 / c0)
        result = TruncatedSeries.const(1, self.nvars, self.order)
        term = result
        for _ in range(self.order):
            term = term * w
            if not term.coeffs:
                break
            result = result + term
        return result * (1 / c0)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return self * (1 / Fraction(other))

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        result = TruncatedSeries.const(1, self.nvars, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.nvars, min(order, self.order), self.coeffs)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        exp = tuple(exp)
        if sum(exp) > self.order:
            raise ValueError(f"{exp} is beyond the truncation order {self.order}")
        return self.coeffs.get(exp, Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.nvars, self.order, self.coeffs) == (other.nvars, other.order, other.coeffs)

    def __repr__(self):
        return f"TruncatedSeries(nvars={self.nvars}, order={self.order}, terms={len(self.coeffs)})"


def first_mismatch(lhs: TruncatedSeries, rhs: TruncatedSeries) -> Optional[dict]:
    order = min(lhs.order, rhs.order)
    keys = sorted(
        {e for e in lhs.coeffs if sum(e) <= order} | {e for e in rhs.coeffs if sum(e) <= order},
        key=lambda e: (sum(e), e),
    )
    for e in keys:
        a, b = lhs.coeffs.get(e, Fraction(0)), rhs.coeffs.get(e, Fraction(0))
        if a != b:
            return {"exp": list(e), "lhs": str(a), "rhs": str(b)}
    return None


# ---------------------------------------------------------------------------
# rational expressions


class Expr:
    def __add__(self, other):
        return Add(self, _wrap(other))

    def __radd__(self, other):
        return Add(_wrap(other), self)

    def __sub__(self, other):
        return Add(self, Neg(_wrap(other)))

    def __rsub__(self, other):
        return Add(_wrap(other), Neg(self))

    def __mul__(self, other):
        return Mul(self, _wrap(other))

    def __rmul__(self, other):
        return Mul(_wrap(other), self)

    def __truediv__(self, other):
        return Div(self, _wrap(other))

    def __rtruediv__(self, other):
        return Div(_wrap(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, k: int):
        return Pow(self, int(k))

    def nvars(self) -> int:
        raise NotImplementedError

    def series(self, n: int, M: int) -> TruncatedSeries:
        raise NotImplementedError

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        raise NotImplementedError

    def laurent(self, n: int) -> Dict[Exp, Fraction]:
        raise NotExpandableError(f"{type(self).__name__} is not a Laurent polynomial")


def _wrap(x) -> Expr:
    return x if isinstance(x, Expr) else Const(x)


def _laurent_mul(a: Dict[Exp, Fraction], b: Dict[Exp, Fraction]) -> Dict[Exp, Fraction]:
    out: Dict[Exp, Fraction] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c}


@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def nvars(self):
        return 0

    def series(self, n, M):
        return TruncatedSeries.const(self.value, n, M)

    def evaluate(self, point):
        return self.value

    def laurent(self, n):
        return {(0,) * n: self.value} if self.value else {}


@dataclass(frozen=True, eq=False)
class Monomial(Expr):
    """z^exp; negative exponents are allowed for Laurent forms."""

    exp: Tuple[int, ...]

    def nvars(self):
        return len(self.exp)

    def series(self, n, M):
        if any(e < 0 for e in self.exp):
            raise NotExpandableError(f"z^{self.exp} has a pole at 0")
        return TruncatedSeries.monomial(self.exp, n, M)

    def evaluate(self, point):
        return prod((Fraction(x) ** e for x, e in zip(point, self.exp)), start=Fraction(1))

    def laurent(self, n):
        return {tuple(self.exp): Fraction(1)}


def var(i: int, n: int) -> Monomial:
    e = [0] * n
    e[i] = 1
    return Monomial(tuple(e))


@dataclass(frozen=True, eq=False)
class Add(Expr):
    a: Expr
    b: Expr

    def nvars(self):
        return max(self.a.nvars(), self.b.nvars())

    def series(self, n, M):
        return self.a.series(n, M) + self.b.series(n, M)

    def evaluate(self, point):
        return self.a.evaluate(point) + self.b.evaluate(point)

    def laurent(self, n):
        out = dict(self.a.laurent(n))
        for e, c in self.b.laurent(n).items():
            out[e] = out.get(e, Fraction(0)) + c
        return {e: c for e, c in out.items() if c}


@dataclass(frozen=True, eq=False)
class Neg(Expr):
    a: Expr

    def nvars(self):
        return self.a.nvars()

    def series(self, n, M):
        return -self.a.series(n, M)

    def evaluate(self, point):
        return -self.a.evaluate(point)

    def laurent(self, n):
        return {e: -c for e, c in self.a.laurent(n).items()}


@dataclass(frozen=True, eq=False)
class Mul(Expr):
    a: Expr
    b: Expr

    def nvars(self):
        return max(self.a.nvars(), self.b.nvars())

    def series(self, n, M):
        return self.a.series(n, M) * self.b.series(n, M)

    def evaluate(self, point):
        return self.a.evaluate(point) * self.b.evaluate(point)

    def laurent(self, n):
        return _laurent_mul(self.a.laurent(n), self.b.laurent(n))


@dataclass(frozen=True, eq=False)
class Div(Expr):
    a: Expr
    b: Expr

    def nvars(self):
        return max(self.a.nvars(), self.b.nvars())

    def series(self, n, M):
        return self.a.series(n, M) * self.b.series(n, M).reciprocal()

    def evaluate(self, point):
        d = self.b.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.a.evaluate(point) / d

    def laurent(self, n):
        den = self.b.laurent(n)
        if len(den) != 1:
            raise NotExpandableError("division by a non-monomial")
        (e, c), = den.items()
        inv = {tuple(-x for x in e): 1 / c}
        return _laurent_mul(self.a.laurent(n), inv)


@dataclass(frozen=True, eq=False)
class Pow(Expr):
    a: Expr
    k: int

    def nvars(self):
        return self.a.nvars()

    def series(self, n, M):
        return self.a.series(n, M) ** self.k

    def evaluate(self, point):
        return self.a.evaluate(point) ** self.k

    def laurent(self, n):
        base = self.a.laurent(n)
        if self.k < 0:
            if len(base) != 1:
                raise NotExpandableError("negative power of a non-monomial")
            (e, c), = base.items()
            base = {tuple(-x for x in e): 1 / c}
        out = {(0,) * n: Fraction(1)}
        for _ in range(abs(self.k)):
            out = _laurent_mul(out, base)
        return out


def series_expand(expr: Expr, M: int, nvars: Optional[int] = None) -> TruncatedSeries:
    """Expand ``expr`` around 0 to total order ``M``."""
    n = expr.nvars() if nvars is None else nvars
    return expr.series(max(n, 1), M)


def laurent_terms(expr: Expr, nvars: Optional[int] = None) -> Dict[Exp, Fraction]:
    """Coefficients of an expression that is a finite sum of Laurent monomials."""
    n = expr.nvars() if nvars is None else nvars
    return expr.laurent(n)


# ---------------------------------------------------------------------------
# forms attached to N_{g,n} and V_{g,n}


def discrete_omega_series(g: int, n: int, M: int, N: Optional[Callable] = None) -> TruncatedSeries:
    """Series with coefficient prod(b_i) N_{g,n}(b) at prod z_i^(b_i - 1)."""
    if N is None:
        from .moduli import n_recursive

        N = lambda b: n_recursive(g, n, b)  # noqa: E731
    coeffs = {}
    for exp in product(range(M + 1), repeat=n):
        if sum(exp) > M:
            continue
        b = tuple(e + 1 for e in exp)
        v = N(b)
        if v:
            coeffs[exp] = prod(b) * v
    return TruncatedSeries(n, M, coeffs)


def _prod_expr(factors: Sequence[Expr]) -> Expr:
    out: Expr = Const(1)
    for f in factors:
        out = out * f
    return out


def _omega03(n=3) -> Expr:
    z = [var(i, n) for i in range(n)]
    minus = _prod_expr([(1 - zi) ** 2 for zi in z])
    plus = _prod_expr([(1 + zi) ** 2 for zi in z])
    return Const(Fraction(1, 2)) / minus - Const(Fraction(1, 2)) / plus


def _omega11() -> Expr:
    z = var(0, 1)
    return z**3 / (1 - z**2) ** 4


def _omega04(pair_coef: Fraction = Fraction(1, 2)) -> Expr:
    """The printed form has pair_coef = 1/2; the series of N_{0,4} needs 2."""
    n = 4
    z = [var(i, n) for i in range(n)]
    minus = _prod_expr([(1 - zi) ** 2 for zi in z])
    plus = _prod_expr([(1 + zi) ** 2 for zi in z])
    s_minus = sum((zi / (1 - zi) ** 2 for zi in z), Const(0))
    s_plus = sum((zi / (1 + zi) ** 2 for zi in z), Const(0))
    pair_sum: Expr = Const(0)
    for i, j in combinations(range(n), 2):
        k, l = (m for m in range(n) if m not in (i, j))
        pair_sum = pair_sum + z[i] * z[j] * (1 + z[k] ** 2) * (1 + z[l] ** 2)
    sq = _prod_expr([(1 - zi**2) ** 2 for zi in z])
    return (
        Const(Fraction(3, 4)) / minus * s_minus
        - Const(Fraction(3, 4)) / plus * s_plus
        + Const(pair_coef) * pair_sum / sq
    )


def _airy_printed(form_id: str) -> Expr:
    if form_id == "w03_airy":
        return Const(Fraction(-1, 2)) * Monomial((-2, -2, -2))
    if form_id == "w11_airy":
        return Const(Fraction(-1, 16)) * Monomial((-4,))
    if form_id == "w04_airy":
        inv = sum((Monomial(tuple(-2 if j == i else 0 for j in range(4))) for i in range(4)), Const(0))
        return Const(Fraction(1, 2)) * Monomial((-2, -2, -2, -2)) * inv
    raise KeyError(form_id)


DISCRETE_FORMS = {
    "w03": (0, 3, _omega03),
    "w11": (1, 1, _omega11),
    "w04": (0, 4, _omega04),
    "w04_corrected": (0, 4, lambda: _omega04(Fraction(2))),
}
AIRY_FORMS = ("w03_airy", "w11_airy", "w04_airy")


def closed_form_expr(form_id: str) -> Expr:
    form_id = _normalize_id(form_id)
    if form_id in DISCRETE_FORMS:
        return DISCRETE_FORMS[form_id][2]()
    return _airy_printed(form_id)


def closed_form_omega(form_id: str, M: int = 12):
    """Series of a printed discrete form, or the printed Airy form itself."""
    form_id = _normalize_id(form_id)
    if form_id in DISCRETE_FORMS:
        g, n, build = DISCRETE_FORMS[form_id]
        return series_expand(build(), M, n)
    if form_id in AIRY_FORMS:
        return _airy_printed(form_id)
    raise KeyError(f"unknown form {form_id!r}")


def _normalize_id(form_id: str) -> str:
    return form_id.replace("ω", "w").replace("⁰", "0").replace("¹", "1").lower()


def airy_form_from_volume(g: int, n: int, volume: Optional[Polynomial] = None) -> Expr:
    """Laplace transform of V_{g,n} followed by d/ds_i in every variable.

    Uses L{b^m}(s) = m! / s^(m+1), so each monomial prod b_i^(m_i) becomes
    prod -(m_i + 1)! / s_i^(m_i + 2).
    """
    if volume is None:
        from .moduli import kontsevich_volume

        volume = kontsevich_volume(g, n)
    terms = {}
    for exp, c in volume.terms.items():
        coef = c * prod((-factorial(m + 1) for m in exp), start=1)
        terms[tuple(-(m + 2) for m in exp)] = Fraction(coef)
    expr: Expr = Const(0)
    for e in sorted(terms):
        expr = expr + Const(terms[e]) * Monomial(e)
    return expr


@dataclass(frozen=True)
class AsymptoticReport:
    g: int
    n: int
    ratios: Tuple[Tuple[Fraction, Fraction], ...]  # (s, ratio) by decreasing s
    monotone: bool

    @property
    def passed(self) -> bool:
        return self.monotone

    def deviation(self, s: Fraction) -> Fraction:
        for t, r in self.ratios:
            if t == s:
                return abs(abs(r) - 1)
        raise KeyError(s)


def asymptotic_airy_check(g: int, n: int, s_values: Sequence) -> AsymptoticReport:
    """Compare the discrete form near z_i = 1 with its Airy limit.

    With z_i = 1 + s x_i and x_i = 1, each dz_i pulls back to s dx_i, so the
    coefficient function is multiplied by s^n before dividing by
    s^(6 - 6g - 3n) times the Airy form at x = 1.
    """
    ids = {(0, 3): ("w03", "w03_airy"), (1, 1): ("w11", "w11_airy")}
    if (g, n) not in ids:
        raise ValueError(f"no closed discrete form for (g, n) = ({g}, {n})")
    disc, airy = (closed_form_expr(i) for i in ids[(g, n)])
    airy_at_one = airy.evaluate([Fraction(1)] * n)
    out = []
    for s in sorted((Fraction(s) for s in s_values), reverse=True):
        if not 0 < s <= Fraction(1, 4):
            raise ValueError(f"s = {s} outside (0, 1/4]")
        val = disc.evaluate([1 + s] * n) * s**n
        out.append((s, val / (s ** (6 - 6 * g - 3 * n) * airy_at_one)))
    devs = [abs(abs(r) - 1) for _, r in out]
    monotone = all(a >= b for a, b in zip(devs, devs[1:]))
    return AsymptoticReport(g, n, tuple(out), monotone)


def compare_discrete_form(form_id: str, M: int = 12) -> dict:
    """Diff of a printed discrete form against the series built from N."""
    form_id = _normalize_id(form_id)
    g, n, build = DISCRETE_FORMS[form_id]
    lhs = series_expand(build(), M, n)
    rhs = discrete_omega_series(g, n, M)
    exps = sorted(set(lhs.coeffs) | set(rhs.coeffs), key=lambda e: (sum(e), e))
    bad = [e for e in exps if lhs.coefficient(e) != rhs.coefficient(e)]
    return {
        "form": form_id,
        "order": M,
        "matched": not bad,
        "first_mismatch": first_mismatch(lhs, rhs),
        "mismatches": len(bad),
        "compared": len(exps),
    }


def compare_airy_form(g: int, n: int) -> dict:
    """Printed Airy form against the one computed from V_{g,n}; reports the
    constant ratio printed/computed when the two are proportional."""
    ids = {(0, 3): "w03_airy", (1, 1): "w11_airy", (0, 4): "w04_airy"}
    printed = laurent_terms(_airy_printed(ids[(g, n)]), n)
    computed = laurent_terms(airy_form_from_volume(g, n), n)
    ratio = None
    if printed.keys() == computed.keys():
        ratios = {printed[e] / computed[e] for e in printed}
        if len(ratios) == 1:
            ratio = ratios.pop()
    return {
        "g": g,
        "n": n,
        "matched": printed == computed,
        "ratio_printed_over_computed": None if ratio is None else str(ratio),
        "printed": {str(list(e)): str(c) for e, c in sorted(printed.items())},
        "computed": {str(list(e)): str(c) for e, c in sorted(computed.items())},
    }
