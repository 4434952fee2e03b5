import json
import subprocess
import sys
from fractions import Fraction

import pytest

from modcount import moduli
from modcount.cli import EXIT_FRONTIER, EXIT_OK, EXIT_USAGE, Command, UsageError, main, parse_command, run
from modcount.exactnum import QuasiPolynomial, qp_evaluate


def _run(*argv):
    return run(parse_command(list(argv)))


# -- parsing --------------------------------------------------------------------------


def test_parse_count():
    cmd = parse_command(["count", "--genus", "1", "--lengths", "4"])
    assert isinstance(cmd, Command)
    assert cmd.verb == "count" and cmd["genus"] == 1 and cmd["lengths"] == (4,)


def test_parse_vpf_count():
    cmd = parse_command(["vpf", "count", "--matrix", "1,2,2;1,0,0", "--b", "7,3"])
    assert cmd.verb == "vpf-count"
    assert cmd["matrix"].A == ((1, 2, 2), (1, 0, 0))
    assert cmd["b"] == (7, 3)


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--genus", "-1", "--lengths", "4"],
        ["count", "--genus", "1"],
        ["count", "--genus", "1", "--genus", "1", "--lengths", "4"],
        ["count", "--genus", "1", "--lengths", "4,x"],
        ["count", "--genus", "1", "--lengths", "4,0"],
        ["frobnicate"],
        ["vpf", "count", "--matrix", "1,-2", "--b", "1"],
        ["hurwitz", "simple", "--genus", "0", "--mu", "0"],
        ["hurwitz", "trace", "--degree", "4", "--classes", "4;2,x"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_command(argv)
    assert main(argv) == EXIT_USAGE


# -- running -------------------------------------------------------------------------


def test_count_methods_agree():
    outs = {m: _run("count", "--genus", "0", "--lengths", "2,2,2,2", "--method", m) for m in ("recursive", "direct", "belyi", "poly")}
    assert all(v == (EXIT_OK, "3") for v in outs.values())
    assert _run("count", "--genus", "2", "--lengths", "8", "--method", "hz") == (EXIT_OK, "21/8")


def test_euler_zeta():
    assert _run("euler", "--genus", "2", "--boundaries", "1", "--method", "zeta") == (EXIT_OK, "1/120")
    assert _run("euler", "--genus", "0", "--boundaries", "4") == (EXIT_OK, "-1")


def test_poly_json_is_table_row():
    code, out = _run("poly", "--genus", "1", "--boundaries", "1", "--format", "json")
    assert code == EXIT_OK
    qp = QuasiPolynomial.from_json(json.loads(out))
    assert qp_evaluate(qp, (6,)) == Fraction(32, 48)


def test_frontier_exit_codes():
    assert _run("count", "--genus", "3", "--lengths", "8", "--method", "direct")[0] == EXIT_FRONTIER
    assert _run("fatgraphs", "--genus", "2", "--boundaries", "2")[0] == EXIT_FRONTIER
    assert _run("hurwitz", "belyi", "--genus", "0", "--lengths", "7,7")[0] == EXIT_FRONTIER
    assert _run("hurwitz", "elsv", "--genus", "2", "--mu", "3")[0] == EXIT_FRONTIER
    assert _run("laplace", "series", "--genus", "1", "--boundaries", "2", "--compare-form")[0] == EXIT_FRONTIER


def test_runtime_usage_errors():
    assert _run("count", "--genus", "1", "--lengths", "4,2", "--method", "hz")[0] == EXIT_USAGE
    assert _run("vpf", "count", "--matrix", "1,2,2;1,0,0", "--b", "7")[0] == EXIT_USAGE
    assert _run("hurwitz", "trace", "--degree", "4", "--classes", "4;2,1")[0] == EXIT_USAGE


def test_hurwitz_verbs():
    assert _run("hurwitz", "simple", "--genus", "0", "--mu", "1,1,2") == (EXIT_OK, "120")
    assert _run("hurwitz", "elsv", "--genus", "1", "--mu", "2") == (EXIT_OK, "1/2")
    assert _run("hurwitz", "belyi", "--genus", "1", "--lengths", "4") == (EXIT_OK, "1/4")
    assert _run("hurwitz", "trace", "--degree", "4", "--classes", "4;2,2;4") == (EXIT_OK, "1/4")
    code, out = _run("hurwitz", "simple", "--genus", "0", "--mu", "1,2,1", "--format", "json")
    assert json.loads(out)["mu"] == "2,1,1"


def test_vpf_verbs():
    assert _run("vpf", "count", "--matrix", "1,2,2;1,0,0", "--b", "7,3") == (EXIT_OK, "1")
    assert _run("vpf", "index", "--matrix", "2,2,2") == (EXIT_OK, "2")
    assert _run("vpf", "volume", "--matrix", "1,2,2;1,0,0", "--b", "3,1") == (EXIT_OK, "1/2")
    code, out = _run("vpf", "laplace", "--matrix", "1,2,2;1,0,0", "--order", "8", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["matches_counts"]
    code, out = _run("vpf", "ehrhart", "--matrix", "1,1,1", "--b", "1", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["reciprocity"]


def test_laplace_compare_form():
    code, out = _run("laplace", "series", "--genus", "1", "--boundaries", "1", "--order", "9", "--compare-form")
    assert code == EXIT_OK and json.loads(out)["matched"]
    code, out = _run("laplace", "series", "--genus", "0", "--boundaries", "4", "--order", "6", "--compare-form")
    diff = json.loads(out)
    assert not diff["matched"]
    assert diff["first_mismatch"] == {"exp": [0, 0, 1, 1], "lhs": "13/2", "rhs": "8"}


def test_misc_verbs():
    assert _run("volume", "--genus", "1", "--boundaries", "1")[0] == EXIT_OK
    code, out = _run("intersections", "--genus", "1", "--boundaries", "1", "--format", "json")
    assert json.loads(out) == {"1": "1/24"}
    code, out = _run("dilaton", "--genus", "1", "--lengths", "4", "--format", "json")
    assert json.loads(out) == {"holds": True, "lhs": "1/4", "rhs": "1/4"}
    code, out = _run("hz", "--genus", "1", "--max-n", "3", "--format", "json")
    assert [r["mu"] for r in json.loads(out)["rows"]] == [0, 1, 4]
    code, out = _run("fatgraphs", "--genus", "1", "--boundaries", "1")
    assert code == EXIT_OK and "labeled=2" in out


def test_json_is_deterministic():
    argv = ["poly", "--genus", "0", "--boundaries", "4", "--format", "json"]
    a = _run(*argv)[1]
    moduli._QP_MEMO.clear()
    b = _run(*argv)[1]
    assert a == b
    c = subprocess.run([sys.executable, "-m", "modcount.cli", *argv], capture_output=True, text=True, check=True)
    assert c.stdout.rstrip("\n") == a


# -- cache ---------------------------------------------------------------------------


@pytest.mark.parametrize("g,n", [(1, 1), (0, 4), (1, 2)])
def test_cache_dir_round_trip(tmp_path, monkeypatch, g, n):
    monkeypatch.delenv("MODCOUNT_CACHE", raising=False)
    monkeypatch.setattr(moduli, "_QP_MEMO", {})
    argv = ["poly", "--genus", str(g), "--boundaries", str(n), "--format", "json", "--cache-dir", str(tmp_path)]
    fresh = _run(*argv)[1]
    assert (tmp_path / f"N_g{g}_n{n}.json").exists()
    monkeypatch.setattr(moduli, "_QP_MEMO", {})
    cached = _run(*argv)[1]
    assert cached == fresh
    qp = QuasiPolynomial.from_json(json.loads(cached))
    for b in [(2,) * n, (3,) * n, tuple(range(1, n + 1))]:
        assert qp_evaluate(qp, b) == moduli.n_recursive(g, n, b)


def test_environment_overrides_cache_dir(tmp_path, monkeypatch):
    env_dir, flag_dir = tmp_path / "env", tmp_path / "flag"
    monkeypatch.setenv("MODCOUNT_CACHE", str(env_dir))
    monkeypatch.setattr(moduli, "_QP_MEMO", {})
    assert _run("poly", "--genus", "1", "--boundaries", "1", "--cache-dir", str(flag_dir))[0] == EXIT_OK
    assert (env_dir / "N_g1_n1.json").exists()
    assert not flag_dir.exists()


def test_corrupt_cache_is_recomputed(tmp_path, monkeypatch):
    monkeypatch.delenv("MODCOUNT_CACHE", raising=False)
    monkeypatch.setattr(moduli, "_QP_MEMO", {})
    (tmp_path / "N_g1_n1.json").write_text("{not json")
    code, out = _run("count", "--genus", "1", "--lengths", "6", "--method", "poly", "--cache-dir", str(tmp_path))
    assert (code, out) == (EXIT_OK, "2/3")


# -- verify --------------------------------------------------------------------------


def test_verify_subset(tmp_path):
    code, out = _run("verify", "--criteria", "2,7", "--artifact-dir", str(tmp_path))
    assert code == EXIT_OK
    lines = [l for l in out.splitlines() if l.startswith(("[PASS]", "[FAIL]"))]
    assert len(lines) == 2 and all(l.startswith("[PASS]") for l in lines)
    code, out = _run("verify", "--criteria", "7", "--format", "json")
    assert json.loads(out)[0]["passed"]


def test_verify_unknown_criterion():
    assert _run("verify", "--criteria", "11")[0] != EXIT_OK
