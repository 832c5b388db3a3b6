import io
import json

import pytest

from maxsemi.cli import ArityError, ParseError, main, parse_expr, print_expr
from maxsemi.mapexpr import (
    AffinePeriodic,
    CantorProj,
    Compose,
    affine,
    evaluate,
)

from oracles import eval_equal


def run_cli(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    text = buf.getvalue()
    payload = json.loads(text) if text.strip().startswith("{") else text
    return code, payload


def test_parse_examples():
    assert parse_expr("times(2)") == affine(0, 1, 2, [0])
    e = parse_expr("compose(times(2), divfloor(2))")
    assert isinstance(e, Compose)
    assert parse_expr("affine(0,4,8,[0,2,5,7])") == affine(0, 4, 8, [0, 2, 5, 7])
    assert isinstance(parse_expr("cantor_proj"), CantorProj)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_expr("times(2) trailing")
    with pytest.raises(ParseError):
        parse_expr("nonsense(3)")
    with pytest.raises(ArityError):
        parse_expr("affine(0,2,1,[0])")
    with pytest.raises(ArityError):
        parse_expr("perm([0,0])")


SUGAR_CATALOG = [
    "id",
    "shift(4)",
    "times(2)",
    "times(0)",
    "divfloor(3)",
    "perm([2,0,1])",
    "affine(1,2,3,[5,0,1])",
    "cantor_proj",
    "compose(times(2),divfloor(2))",
    "compose(compose(id,shift(1)),cantor_proj)",
]


@pytest.mark.parametrize("text", SUGAR_CATALOG)
def test_print_parse_round_trip(text):
    e = parse_expr(text)
    again = parse_expr(print_expr(e))
    assert eval_equal(e, again, 1000)


def test_cli_certify():
    code, payload = run_cli("certify", "times(2)")
    assert code == 0
    assert payload["inj"] == "yes" and payload["surj"] == "no"
    assert payload["d"] == {"lo": "aleph0", "hi": "aleph0"}


def test_cli_classify_decided_and_unknown():
    code, payload = run_cli("classify", "S5", "cantor_proj")
    assert code == 0 and payload["answer"] == "no"
    assert "k(f,aleph0)" in payload["reason"]

    code, payload = run_cli(
        "classify", "A1", "compose(times(2),cantor_proj)", "--n", "2"
    )
    assert code == 2 and payload["answer"] == "unknown"

    code, payload = run_cli("classify", "F1", "times(2)", "--gamma", "0", "--mu", "aleph0plus")
    assert code == 0 and payload["answer"] == "yes"

    code, payload = run_cli("classify", "U1", "times(2)", "--filter", "frechet", "--mu", "aleph0plus")
    assert code == 0 and payload["answer"] == "yes"


def test_cli_genpair():
    code, payload = run_cli("genpair", "sym", "times(2)", "cantor_proj")
    assert code == 0 and payload["answer"] == "generates"
    code, payload = run_cli("genpair", "sym", "times(2)", "divfloor(2)")
    assert code == 0 and payload["answer"] == "does_not_generate"
    assert payload["witness"]["family"] == "S5"
    code, payload = run_cli(
        "genpair", "filter", "times(2)", "cantor_proj", "--filter", "principal", "--gamma", "0"
    )
    assert code == 0 and payload["witness"]["family"] == "U2"


def test_cli_rho_and_bfin():
    code, payload = run_cli("rho", "divfloor(2)", "--n", "2")
    assert code == 0 and payload["relation"] == "{(0,0),(0,1),(1,0),(1,1)}"
    code, payload = run_cli(
        "bfin", "{(0,0),(0,1),(1,0)}", "{(0,0),(0,1),(1,0)}", "--n", "2"
    )
    assert code == 0 and payload["isFull"] and payload["word"] == ["rho", "rho"]
    code, payload = run_cli(
        "bfin",
        "{(0,0),(0,1),(1,0)}",
        "{(0,0),(0,1),(1,0)}",
        "--n",
        "2",
        "--algorithm",
        "greedy",
    )
    assert code == 0 and payload["isFull"]


def test_cli_maxtn():
    code, payload = run_cli("maxtn", "--n", "3")
    assert code == 0 and payload["count"] == 5


def test_cli_errors_exit_one():
    code, payload = run_cli("certify", "nonsense(")
    assert code == 1 and payload["error"] == "ParseError"
    code, payload = run_cli("genpair", "filter", "id", "id", "--filter", "frechet")
    assert code == 1 and payload["error"] == "UnsupportedFilter"
    code, payload = run_cli("classify", "F2", "id", "--gamma", "0", "--mu", "aleph0")
    assert code == 1 and payload["error"] == "InvalidParameters"
    code, payload = run_cli("rho", "compose(times(2),cantor_proj)", "--n", "2")
    assert code == 1 and payload["error"] == "RhoUndecidable"


def test_cli_byte_identical_reruns():
    buf1, buf2 = io.StringIO(), io.StringIO()
    main(["certify", "compose(times(2),divfloor(2))"], out=buf1)
    main(["certify", "compose(times(2),divfloor(2))"], out=buf2)
    assert buf1.getvalue() == buf2.getvalue()


def test_cli_pretty_mode():
    buf = io.StringIO()
    code = main(["--pretty", "certify", "times(2)"], out=buf)
    assert code == 0
    assert "inj" in buf.getvalue()


def test_cli_selftest_quick():
    code, payload = run_cli("selftest", "--suite", "quick")
    assert code == 0
    assert payload["ok"] is True
    assert all(item["pass"] for item in payload["results"])
