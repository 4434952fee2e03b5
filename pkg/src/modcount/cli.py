"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 frontier exceeded or unsupported
size, 3 a ``verify`` run with failing checks.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .fatgraph import UnsupportedSizeError

__all__ = [
    "Command",
    "EXIT_FAILED",
    "EXIT_FRONTIER",
    "EXIT_OK",
    "EXIT_USAGE",
    "UsageError",
    "main",
    "parse_command",
    "run",
]

EXIT_OK, EXIT_USAGE, EXIT_FRONTIER, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        # only reached through --help
        if message:
            sys.stderr.write(message)
        raise SystemExit(status)


@dataclass(frozen=True)
class Command:
    verb: str
    options: Dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, key):
        return self.options[key]


# ---------------------------------------------------------------------------
# argument types


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def _nonneg(text: str) -> int:
    v = _int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return v


def _positive(text: str) -> int:
    v = _int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _vector(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed vector {text!r}")


def _matrix(text: str):
    from .polytope import parse_matrix

    try:
        return parse_matrix(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _classes(text: str):
    from .hurwitz import Partition

    try:
        return tuple(Partition.parse(p) for p in text.split(";"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)

    p = _Parser(prog="modcount", description="Lattice points in moduli spaces of curves.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name, parent=sub, **kw):
        return parent.add_parser(name, parents=[common], **kw)

    def gn(sp, lengths=False):
        sp.add_argument("--genus", type=_nonneg, required=True)
        if lengths:
            sp.add_argument("--lengths", type=_vector, required=True)
        else:
            sp.add_argument("--boundaries", type=_positive, required=True)

    gn(add("fatgraphs"))
    c = add("count")
    gn(c, lengths=True)
    c.add_argument("--method", choices=("recursive", "direct", "belyi", "hz", "poly"), default="recursive")
    gn(add("poly"))
    e = add("euler")
    gn(e)
    e.add_argument("--method", choices=("lattice", "zeta"), default="lattice")
    gn(add("volume"))
    gn(add("intersections"))
    gn(add("dilaton"), lengths=True)
    hz = add("hz")
    hz.add_argument("--genus", type=_positive, required=True)
    hz.add_argument("--max-n", type=_positive, default=6)

    hur = sub.add_parser("hurwitz")
    hsub = hur.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("simple", "elsv"):
        sp = add(name, hsub)
        sp.add_argument("--genus", type=_nonneg, required=True)
        sp.add_argument("--mu", type=_vector, required=True)
    sp = add("belyi", hsub)
    sp.add_argument("--genus", type=_nonneg, required=True)
    sp.add_argument("--lengths", type=_vector, required=True)
    sp.add_argument("--allow-units", action="store_true")
    sp = add("trace", hsub)
    sp.add_argument("--degree", type=_positive, required=True)
    sp.add_argument("--classes", type=_classes, required=True)

    vpf = sub.add_parser("vpf")
    vsub = vpf.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("count", "index", "volume", "laplace", "ehrhart"):
        sp = add(name, vsub)
        sp.add_argument("--matrix", type=_matrix, required=True)
        if name in ("count", "volume", "ehrhart"):
            sp.add_argument("--b", type=_vector, required=True)
        if name == "count":
            sp.add_argument("--non-strict", action="store_true")
        if name == "laplace":
            sp.add_argument("--order", type=_nonneg, default=12)
        if name == "ehrhart":
            sp.add_argument("--T", type=_positive, default=None)

    lap = sub.add_parser("laplace")
    lsub = lap.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = add("series", lsub)
    gn(sp)
    sp.add_argument("--order", type=_nonneg, default=12)
    sp.add_argument("--compare-form", action="store_true")

    v = add("verify")
    v.add_argument("--criteria", type=_vector, default=None)
    v.add_argument("--artifact-dir", default=None)
    return p


def _duplicate_flags(argv: Sequence[str]) -> List[str]:
    seen, dup = set(), []
    for tok in argv:
        if tok.startswith("--"):
            flag = tok.split("=", 1)[0]
            if flag in seen:
                dup.append(flag)
            seen.add(flag)
    return dup


def parse_command(argv: Sequence[str]) -> Command:
    """Validate ``argv`` into a :class:`Command`; raises :class:`UsageError`."""
    argv = list(argv)
    dup = _duplicate_flags(argv)
    if dup:
        raise UsageError(f"duplicate flag {dup[0]}")
    ns = _build_parser().parse_args(argv)
    opts = vars(ns)
    verb = opts.pop("verb")
    subverb = opts.pop("sub", None)
    if subverb:
        verb = f"{verb}-{subverb}"
    if "lengths" in opts and any(x < 1 for x in opts["lengths"]):
        raise UsageError("lengths must be positive")
    if "mu" in opts:
        from .hurwitz import Partition

        try:
            opts["mu"] = Partition(opts["mu"])
        except ValueError as exc:
            raise UsageError(str(exc))
    return Command(verb, opts)


# ---------------------------------------------------------------------------
# rendering


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _render(cmd: Command, data, table: Optional[str] = None) -> str:
    if cmd.options.get("format") == "json":
        return json.dumps(_jsonable(data), sort_keys=True, indent=1)
    if table is not None:
        return table
    if isinstance(data, dict):
        return "\n".join(f"{k}: {_jsonable(v)}" for k, v in sorted(data.items()))
    return str(_jsonable(data))


def _qp(cmd: Command, g: int, n: int):
    from .moduli import n_quasipolynomial

    return n_quasipolynomial(g, n, cache_dir=cmd.options.get("cache_dir"))


# ---------------------------------------------------------------------------
# dispatch


def _run_fatgraphs(cmd):
    from .fatgraph import enumerate_fatgraphs, euler_sum, format_fatgraph, unlabeled_fatgraphs

    g, n = cmd["genus"], cmd["boundaries"]
    cat = enumerate_fatgraphs(g, n)
    if cmd["format"] == "json":
        return json.dumps(cat.to_json(), sort_keys=True, indent=1)
    lines = [
        f"# g={g} n={n} unlabeled={len(unlabeled_fatgraphs(g, n))} labeled={len(cat)} euler={euler_sum(cat)}"
    ]
    lines += [f"{format_fatgraph(fg)}\taut={aut}" for fg, aut in cat]
    return "\n".join(lines)


def _run_count(cmd):
    from . import moduli
    from .exactnum import qp_evaluate
    from .hurwitz import belyi_count

    g, b, m = cmd["genus"], cmd["lengths"], cmd["method"]
    n = len(b)
    if m == "recursive":
        v = moduli.n_recursive(g, n, b)
    elif m == "direct":
        v = moduli.n_direct(g, n, b)
    elif m == "belyi":
        v = belyi_count(g, b, jobs=cmd["jobs"] if sum(b) >= 10 else 1)
    elif m == "hz":
        if n != 1:
            raise UsageError("--method hz needs a single length")
        v = moduli.n_g1_hz(g, b[0])
    else:
        v = qp_evaluate(_qp(cmd, g, n), b)
    return _render(cmd, {"g": g, "b": list(b), "method": m, "value": v}, str(v))


def _run_poly(cmd):
    qp = _qp(cmd, cmd["genus"], cmd["boundaries"])
    if cmd["format"] == "json":
        return json.dumps(qp.to_json(), sort_keys=True, indent=1)
    return "\n".join(f"{''.join(map(str, p))}: {poly}" for p, poly in sorted(qp.classes.items()))


def _run_euler(cmd):
    from .moduli import euler_characteristic

    g, n = cmd["genus"], cmd["boundaries"]
    if cmd["method"] == "lattice":
        _qp(cmd, g, n)
    v = euler_characteristic(g, n, cmd["method"])
    return _render(cmd, {"g": g, "n": n, "method": cmd["method"], "value": v}, str(v))


def _run_volume(cmd):
    from .moduli import kontsevich_volume

    g, n = cmd["genus"], cmd["boundaries"]
    _qp(cmd, g, n)
    V = kontsevich_volume(g, n)
    if cmd["format"] == "json":
        return json.dumps(V.to_json(), sort_keys=True, indent=1)
    return str(V)


def _run_intersections(cmd):
    from .moduli import intersection_numbers

    g, n = cmd["genus"], cmd["boundaries"]
    _qp(cmd, g, n)
    ints = intersection_numbers(g, n)
    data = {",".join(map(str, d)): v for d, v in sorted(ints.items())}
    table = "\n".join(
        "<" + " ".join(f"tau_{x}" for x in d) + f"> = {v}" for d, v in sorted(ints.items())
    )
    return _render(cmd, data, table)


def _run_dilaton(cmd):
    from .moduli import dilaton_check

    g, b = cmd["genus"], cmd["lengths"]
    _qp(cmd, g, len(b) + 1)
    lhs, rhs = dilaton_check(g, len(b), b)
    return _render(cmd, {"lhs": lhs, "rhs": rhs, "holds": lhs == rhs})


def _run_hz(cmd):
    from .exactnum import zeta_neg
    from .moduli import hz_epsilon, hz_mu, n_g1_hz

    g = cmd["genus"]
    rows = []
    chi = zeta_neg(g)
    for m in range(1, cmd["max_n"] + 1):
        N = n_g1_hz(g, 2 * m)
        rows.append({"n": m, "epsilon": hz_epsilon(g, m), "mu": hz_mu(g, m), "b": 2 * m, "N": N, "N_over_N0": N / chi})
    table = "\n".join(
        [f"# g={g}  N_g1(0) = zeta(1-2g) = {chi}", "n\tepsilon\tmu\tN_g1(2n)\tN/N(0)"]
        + [f"{r['n']}\t{r['epsilon']}\t{r['mu']}\t{r['N']}\t{r['N_over_N0']}" for r in rows]
    )
    return _render(cmd, {"g": g, "N0": chi, "rows": rows}, table)


def _run_hurwitz(cmd):
    from . import hurwitz as H

    sub = cmd.verb.split("-", 1)[1]
    if sub == "simple":
        v = H.simple_hurwitz(cmd["genus"], cmd["mu"])
        data = {"g": cmd["genus"], "mu": str(cmd["mu"]), "value": v}
    elif sub == "elsv":
        v = H.elsv_hurwitz(cmd["genus"], cmd["mu"])
        data = {"g": cmd["genus"], "mu": str(cmd["mu"]), "value": v}
    elif sub == "belyi":
        b = cmd["lengths"]
        v = H.belyi_count(cmd["genus"], b, not cmd["allow_units"], jobs=cmd["jobs"] if sum(b) >= 10 else 1)
        data = {"g": cmd["genus"], "lengths": list(b), "value": v}
    else:
        try:
            bd = H.BranchData(cmd["degree"], cmd["classes"])
        except ValueError as exc:
            raise UsageError(str(exc))
        v = H.class_trace(bd)
        data = {"degree": bd.degree, "classes": [str(p) for p in bd.profiles], "value": v}
    return _render(cmd, data, str(v))


def _run_vpf(cmd):
    from . import polytope as P

    sub = cmd.verb.split("-", 1)[1]
    A = cmd["matrix"]
    if sub in ("count", "volume", "ehrhart") and len(cmd["b"]) != A.n:
        raise UsageError(f"--b needs {A.n} entries")
    if sub == "count":
        v = P.count_lattice_points(A, cmd["b"], strict=not cmd["non_strict"])
        return _render(cmd, {"value": v}, str(v))
    if sub == "index":
        v = P.lattice_index(A)
        return _render(cmd, {"value": v}, str(v))
    if sub == "volume":
        v = P.polytope_volume(A, cmd["b"])
        return _render(cmd, {"value": v}, str(v))
    if sub == "ehrhart":
        D = A.N - A.n
        T = cmd["T"] or D + 3
        poly = P.ehrhart_polynomial(A, cmd["b"], T)
        rec = P.reciprocity_holds(A, cmd["b"], poly, 6)
        return _render(cmd, {"polynomial": str(poly), "reciprocity": rec})
    from .laplace import series_expand

    M = cmd["order"]
    series = series_expand(P.vpf_laplace_form(A).to_expr(), M, A.n)
    coeffs = {",".join(map(str, e)): c for e, c in sorted(series.coeffs.items()) if c}
    mismatch = None
    for e, c in sorted(series.coeffs.items()):
        if c != P.count_lattice_points(A, e):
            mismatch = {"exp": list(e), "series": c, "count": P.count_lattice_points(A, e)}
            break
    return _render(cmd, {"coefficients": coeffs, "matches_counts": mismatch is None, "first_mismatch": mismatch})


def _run_laplace(cmd):
    from . import laplace as L

    g, n, M = cmd["genus"], cmd["boundaries"], cmd["order"]
    _qp(cmd, g, n)
    if cmd["compare_form"]:
        ids = {(0, 3): "w03", (1, 1): "w11", (0, 4): "w04"}
        if (g, n) not in ids:
            raise UnsupportedSizeError(f"no printed form for ({g}, {n})")
        diff = L.compare_discrete_form(ids[(g, n)], M)
        return json.dumps(_jsonable(diff), sort_keys=True, indent=1)
    series = L.discrete_omega_series(g, n, M)
    coeffs = {",".join(map(str, e)): c for e, c in sorted(series.coeffs.items()) if c}
    return _render(cmd, coeffs)


def _run_verify(cmd):
    from .verify import CHECKS, VerifyConfig, format_matrix, run_verify

    crit = cmd["criteria"]
    unknown = [c for c in crit or () if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown criterion {unknown[0]}")
    config = VerifyConfig(
        criteria=tuple(crit) if crit else VerifyConfig().criteria,
        artifact_dir=cmd["artifact_dir"],
    )
    results = run_verify(config)
    if cmd["format"] == "json":
        out = json.dumps([r.to_json() for r in results], sort_keys=True, indent=1)
    else:
        out = format_matrix(results)
    return out, all(r.passed for r in results)


_DISPATCH = {
    "fatgraphs": _run_fatgraphs,
    "count": _run_count,
    "poly": _run_poly,
    "euler": _run_euler,
    "volume": _run_volume,
    "intersections": _run_intersections,
    "dilaton": _run_dilaton,
    "hz": _run_hz,
}


def run(cmd: Command) -> Tuple[int, str]:
    """Execute ``cmd``; returns ``(exit_code, output)``."""
    try:
        if cmd.verb == "verify":
            out, ok = _run_verify(cmd)
            return (EXIT_OK if ok else EXIT_FAILED), out
        if cmd.verb.startswith("hurwitz-"):
            return EXIT_OK, _run_hurwitz(cmd)
        if cmd.verb.startswith("vpf-"):
            return EXIT_OK, _run_vpf(cmd)
        if cmd.verb.startswith("laplace-"):
            return EXIT_OK, _run_laplace(cmd)
        return EXIT_OK, _DISPATCH[cmd.verb](cmd)
    except UnsupportedSizeError as exc:
        return EXIT_FRONTIER, f"error: {exc}"
    except KeyError as exc:
        return EXIT_FRONTIER, f"error: unsupported {exc}"
    except (UsageError, ValueError) as exc:
        return EXIT_USAGE, f"error: {exc}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_command(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    code, out = run(cmd)
    print(out, file=sys.stdout if code in (EXIT_OK, EXIT_FAILED) else sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
