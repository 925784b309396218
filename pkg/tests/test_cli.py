import dataclasses
import json

import pytest
from hypothesis import given, settings, strategies as st

from padic_towers.cli import main
from padic_towers.emit import padic_json, to_json
from padic_towers.errors import PolynomialSyntaxError
from padic_towers.exact_poly import IntPolynomial, format_polynomial
from padic_towers.padic import PadicScalar, from_rational
from padic_towers.parse import parse_polynomial
from padic_towers.selfcheck import run_selfcheck


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- parsing ---------------------------------------------------------------

def test_parse_examples():
    assert parse_polynomial("t^2-3t+1") == IntPolynomial([1, -3, 1])
    assert parse_polynomial("  -t^2 + 3*t - 1 ") == IntPolynomial([-1, 3, -1])
    assert parse_polynomial("5 + t^2 - t") == IntPolynomial([5, -1, 1])
    assert parse_polynomial("coeffs=[1,-3,1]") == IntPolynomial([1, -3, 1])
    assert parse_polynomial("t + t") == IntPolynomial([0, 2])


@pytest.mark.parametrize("text,pos", [("t^2-3x+1", 5), ("", 0), ("t^", 2), ("coeffs=[1,a]", 10), ("2t 3", 3)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial(text)
    assert info.value.position == pos
    assert f"position {pos}" in str(info.value)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=8))
def test_parse_roundtrip(coeffs):
    f = IntPolynomial(coeffs)
    if f.is_zero():
        return
    assert parse_polynomial(format_polynomial(f)) == f
    assert parse_polynomial("coeffs=[" + ",".join(map(str, coeffs)) + "]") == f


# --- emission --------------------------------------------------------------

def test_padic_json_examples():
    js = padic_json(from_rational(-3, 1, 2, 4))
    assert js["unit_digits"] == [1, 0, 1, 1] and js["residue"] == "13"
    zero = padic_json(PadicScalar.zero(5, 6))
    assert zero == {"zero_to_precision": True, "p": 5, "precision": 6}
    assert json.loads(to_json({"x": 10**40}))["x"] == 10**40


# --- commands --------------------------------------------------------------

def test_res_command(capsys):
    code, out, _ = run(capsys, "res", "-f", "2t^2-3t+2", "-n", "4")
    assert code == 0 and out.strip() == "63"
    code, out, _ = run(capsys, "res", "-f", "t^2-t+5", "-n", "125", "--format", "json")
    data = json.loads(out)
    assert isinstance(data["resultant"], str) and int(data["resultant"]) > 0


def test_limit_command_json(capsys):
    code, out, _ = run(capsys, "limit", "-f=-t^2+3t-1", "-p", "2", "-N", "8", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["limit"]["residue"] == "3" and data["lambda"] == 0
    code, out, _ = run(capsys, "limit", "-f", "t^2-t+5", "-p", "5", "-N", "6", "--method", "both",
                       "--format", "json")
    data = json.loads(out)
    assert data["limit"]["zero_to_precision"] and data["nonp_limit"]["residue"] == "14071"
    assert (data["lambda"], data["mu"], data["nu"]) == (1, 0, 1)


def test_invariants_command(capsys):
    code, out, _ = run(capsys, "invariants", "-f", "t^2+14t+125", "-p", "2")
    assert code == 0 and "lambda = 2" in out and "nu = 4" in out


def test_knot_commands(capsys):
    code, out, _ = run(capsys, "knot", "torus", "-a", "2", "-b", "3", "alexander")
    assert out.strip() == "t^2-t+1"
    code, out, _ = run(capsys, "knot", "twist", "-m", "-1", "order", "-n", "4")
    assert out.strip() == "45"
    code, out, _ = run(capsys, "knot", "poly", "-f", "t^8+t^7-t^5-t^4-t^3+t+1", "livingston")
    assert out.startswith("true")
    code, out, _ = run(capsys, "knot", "twist", "-m", "-1", "tower", "-p", "2", "-m", "3",
                       "--format", "json")
    data = json.loads(out)
    assert [lv["non_p_part"] for lv in data["levels"][:4]] == ["1", "5", "405", "10498005"]


def test_curve_commands(capsys):
    code, out, _ = run(capsys, "curve", "--l", "7", "--a", "1", "--b", "0", "classify", "--D", "-4")
    assert code == 0 and out.startswith("supersingular")
    code, out, _ = run(capsys, "curve", "--l", "5", "--a", "1", "--b", "1", "--ext", "2", "count")
    assert code == 0 and int(out) > 0
    code, out, _ = run(capsys, "curve", "--l", "5", "--a", "3", "--b", "0", "tower", "-p", "5",
                       "--format", "json")
    assert code == 0 and json.loads(out)["limit_is_zero"]


def test_exit_code_domain(capsys):
    code, _, err = run(capsys, "limit", "-f", "t-1", "-p", "3", "-N", "4", "--method", "sequence")
    assert code == 1 and "error" in err
    code, _, _ = run(capsys, "limit", "-f", "t^2+1", "-p", "6")
    assert code == 1
    code, _, err = run(capsys, "res", "-f", "t^2-3x", "-n", "3")
    assert code == 1 and "position 5" in err


def test_exit_code_precision(capsys):
    code, _, _ = run(capsys, "limit", "-f", "t^2-t+5", "-p", "37", "-N", "12", "--method", "sequence")
    assert code == 2


def test_exit_code_usage(capsys):
    with pytest.raises(SystemExit) as info:
        main(["limit", "-p", "5"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 64
    code, _, _ = run(capsys, "table", "run")
    assert code == 64


def test_exit_code_table_mismatch(capsys, monkeypatch):
    from padic_towers import tables

    real = tables.REGISTRY["fig8-p7"]

    def broken():
        result = real.build()
        result.rows[0].expected[1] += 1
        return result

    monkeypatch.setitem(tables.REGISTRY, "fig8-p7", dataclasses.replace(real, build=broken))
    code, out, err = run(capsys, "table", "run", "fig8-p7")
    assert code == 3 and "FAIL" in out


def test_table_run_all(capsys):
    code, out, _ = run(capsys, "table", "run", "--all", "--format", "json")
    assert code == 0
    assert all(t["passed"] for t in json.loads(out))
    code, out, _ = run(capsys, "table", "list")
    assert "fig8-p7" in out


def test_selfcheck_deterministic_across_jobs():
    a = run_selfcheck(12, seed=3, N=5, jobs=1)
    b = run_selfcheck(12, seed=3, N=5, jobs=2)
    assert [(r.coeffs, r.p, r.status) for r in a] == [(r.coeffs, r.p, r.status) for r in b]
    assert all(r.status != "fail" for r in a)
