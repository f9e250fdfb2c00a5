import json
import subprocess
import sys

import pytest

from fglcalc.cli import (
    EXIT_BAD_INPUT,
    EXIT_OK,
    ExponentOverflow,
    JSONFormatError,
    PolySyntaxError,
    UnknownVariable,
    main,
    parse_poly,
    poly_from_json,
    render_json,
)
from fglcalc.cobordism import ChernRootContext, universal_schur
from fglcalc.fgl import fgl_make
from fglcalc.ring import theory_ring
from fglcalc.series import Poly

A = theory_ring("additive")
Y = ("y1", "y2")


def test_parse_example():
    p = parse_poly("y1^3*y2 + 2*y2^2", Y, A)
    assert p == Poly(A, Y, 4, {(3, 1): 1, (0, 2): 2})


def test_parse_precedence_and_parentheses():
    p = parse_poly("2*(y1 - y2)^2 - 3 + y1^2^2", Y, A)
    assert p == Poly(A, Y, 4, {(2, 0): 2, (1, 1): -4, (0, 2): 2, (0, 0): -3, (4, 0): 1})
    assert parse_poly("0", Y, A).is_zero()


@pytest.mark.parametrize(
    "text,offset",
    [("y1^(2)", 3), ("y1 +", 4), ("-y1", 0), ("y1 y2", 3), ("(y1", 3), ("y1 $ 2", 3), ("y1^-2", 3)],
)
def test_syntax_errors_report_byte_offsets(text, offset):
    with pytest.raises(PolySyntaxError) as err:
        parse_poly(text, Y, A)
    assert err.value.offset == offset


def test_offsets_count_bytes():
    with pytest.raises(PolySyntaxError) as err:
        parse_poly("y1 + é", Y, A)
    assert err.value.offset == 5


def test_unknown_variable_and_overflow():
    with pytest.raises(UnknownVariable):
        parse_poly("y5", Y, A)
    with pytest.raises(ExponentOverflow):
        parse_poly("y1^256", Y, A)
    with pytest.raises(ExponentOverflow):
        parse_poly("(y1^200)^2", Y, A)


def _samples():
    law = fgl_make("universal", 4)
    yield law.F
    yield law.logarithm()
    yield fgl_make("hyperbolic", 4).chi()
    yield universal_schur(ChernRootContext("universal", 4, ("x1", "x2")), (1,))
    yield Poly.zero(A, Y, 3)


@pytest.mark.parametrize("p", list(_samples()))
def test_json_round_trip_is_bit_identical(p):
    text = render_json(p)
    back = poly_from_json(text)
    assert back == p
    assert render_json(back) == text


def test_json_schema_shape():
    law = fgl_make("multiplicative", 2)
    obj = json.loads(render_json(law.F))
    assert list(obj) == ["ring", "variables", "cap", "terms"]
    assert obj["ring"] == {"base": "integers", "generators": [{"name": "beta", "grade": -1}]}
    assert obj["terms"] == [
        {"exps": [1, 0], "coeff": [{"mono": {}, "num": 1, "den": 1}]},
        {"exps": [0, 1], "coeff": [{"mono": {}, "num": 1, "den": 1}]},
        {"exps": [1, 1], "coeff": [{"mono": {"beta": 1}, "num": -1, "den": 1}]},
    ]


def test_json_rejects_malformed():
    good = json.loads(render_json(fgl_make("multiplicative", 2).F))
    bad = dict(good, cap=1)
    with pytest.raises(JSONFormatError):
        poly_from_json(bad)
    bad = json.loads(json.dumps(good))
    bad["terms"][0]["coeff"][0]["den"] = 2
    with pytest.raises(JSONFormatError):
        poly_from_json(bad)
    with pytest.raises(JSONFormatError):
        poly_from_json("{not json")


def test_fgl_command(capsys):
    assert main(["fgl", "--theory", "multiplicative", "--cap", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "F(u,v) = u + v - beta*u*v" in out
    assert "chi(u) = -u - beta*u^2 - beta^2*u^3 - beta^3*u^4" in out


def test_schur_json_carries_a12(capsys):
    argv = ["schur", "--kind", "universal", "--index", "0", "--nvars", "2", "--theory", "universal", "--cap", "4", "--out", "json"]
    assert main(argv) == EXIT_OK
    p = poly_from_json(capsys.readouterr().out)
    R = p.ring
    assert p.coefficient((1, 1)) == R.gen("m1") * R.gen("m1") * 4 - R.gen("m2") * 3


def test_schur_routes_agree(capsys):
    outs = []
    for route in ("default", "closed"):
        main(["schur", "--kind", "new", "--index", "2", "--nvars", "2", "--theory", "hyperbolic", "--route", route])
        outs.append(capsys.readouterr().out.split(" = ", 1)[1])
    assert outs[0] == outs[1]
    main(["schur", "--kind", "quadratic", "--index", "2,1", "--nvars", "2", "--theory", "multiplicative", "--route", "kdet"])
    kdet = capsys.readouterr().out.split(" = ", 1)[1]
    main(["schur", "--kind", "quadratic", "--index", "2,1", "--nvars", "2", "--theory", "multiplicative"])
    assert capsys.readouterr().out.split(" = ", 1)[1] == kdet


def test_segre_command(capsys):
    assert main(["segre", "--nvars", "1", "--m", "0:2"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["S[0] = 1", "S[1] = x1", "S[2] = x1^2"]
    assert main(["segre", "--kind", "relative", "--nvars", "2", "--sub", "1", "--m", "0:1", "--out", "json"]) == EXIT_OK
    obj = json.loads(capsys.readouterr().out)
    assert [row["m"] for row in obj["classes"]] == [0, 1]


def test_gysin_command(capsys):
    argv = ["gysin", "--type", "C", "--rank", "4", "--q-seq", "1,2", "--poly", "y1^4*y2", "--theory", "multiplicative", "--out", "json"]
    assert main(argv) == EXIT_OK
    obj = json.loads(capsys.readouterr().out)
    assert obj["agree"] is True and obj["extraction"] == obj["symmetrizer"]
    argv = ["gysin", "--type", "BD", "--rank", "5", "--q-seq", "1", "--poly", "y1^4"]
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out.startswith("extraction = ")


@pytest.mark.parametrize(
    "argv",
    [
        ["gysin", "--type", "A", "--rank", "3", "--q-seq", "2", "--poly", "y5"],
        ["gysin", "--type", "A", "--rank", "3", "--q-seq", "1", "--poly", "y1^(2)"],
        ["gysin", "--type", "A", "--rank", "3", "--q-seq", "2", "--poly", "y1^2"],
        ["schur", "--kind", "universal", "--index", "a", "--nvars", "2"],
        ["fgl", "--theory", "elliptic"],
        ["verify", "--suite", "nope"],
        ["fgl", "--cap", "0"],
    ],
)
def test_bad_input_exits_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_BAD_INPUT
    assert "error" in capsys.readouterr().err


def test_verify_appendix_suite_passes():
    run = subprocess.run(
        [sys.executable, "-m", "fglcalc", "verify", "--suite", "appendix", "--cap", "6"],
        capture_output=True,
        text=True,
    )
    assert run.returncode == 0, run.stdout + run.stderr
    assert run.stdout.strip().endswith("0 failed")


def test_verify_output_is_independent_of_jobs(capsys):
    main(["verify", "--suite", "segre", "--out", "json"])
    one = capsys.readouterr().out
    main(["verify", "--suite", "segre", "--out", "json", "--jobs", "3"])
    assert capsys.readouterr().out == one
