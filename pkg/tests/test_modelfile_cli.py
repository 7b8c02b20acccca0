import json
import subprocess
import sys

import pytest

from dgkit.cli import main
from dgkit.errors import ModelError
from dgkit.modelfile import (
    ParseError,
    parse_model,
    serialize_connection_model,
    serialize_model,
)
from dgkit.models import dots_squares_model, torus_model
from dgkit.qdolbeault import autoduality_check

GOOD = """
kind associative

degrees
0 : one
1 : a
2 : b

map d0 shift 1
a -> b : 1/2

structure
one a -> a : 1
"""


def test_parse_and_canonical_round_trip():
    parsed = parse_model(GOOD)
    text = serialize_model(parsed.algebra)
    again = parse_model(text)
    assert serialize_model(again.algebra) == text


def test_generated_models_round_trip():
    b = dots_squares_model({0: 1, 1: 2}, [0], [1], seed=13)
    text = serialize_model(b.algebra)
    parsed = parse_model(text)
    assert serialize_model(parsed.algebra) == text

    torus_text = serialize_connection_model(torus_model(1))
    parsed = parse_model(torus_text)
    assert parsed.is_full()
    model = parsed.to_connection_model()
    assert autoduality_check(model).autodual
    assert serialize_model(parsed.algebra) == torus_text


def test_zero_denominator_scalar_is_parse_error():
    bad = GOOD.replace("1/2", "1/0")
    with pytest.raises(ParseError) as err:
        parse_model(bad)
    assert "denominator" in str(err.value)
    assert "line" in str(err.value)


def test_unknown_label_is_semantic_error():
    bad = GOOD.replace("a -> b", "a -> zz")
    with pytest.raises(ModelError):
        parse_model(bad)


def test_grading_violation_names_the_triple():
    bad = GOOD + "structure\na b -> a : 1\n"
    with pytest.raises(ModelError) as err:
        parse_model(bad)
    assert "grading" in str(err.value)


def test_malformed_line_reports_position():
    with pytest.raises(ParseError) as err:
        parse_model("kind associative\n\nnonsense here\n")
    assert err.value.line == 3


# -- CLI ----------------------------------------------------------------------


def run_cli(args):
    # run in-process for speed; capture stdout via subprocess for byte checks
    return main(args)


def test_cli_dgms_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.model"
    good.write_text(serialize_model(dots_squares_model({0: 1}, [0], seed=1).algebra))
    assert run_cli(["dgms", str(good)]) == 0
    bad = tmp_path / "bad.model"
    bad.write_text(serialize_model(
        dots_squares_model({0: 1}, [], [0], seed=1).algebra))
    assert run_cli(["dgms", str(bad)]) == 1
    capsys.readouterr()


def test_cli_validate_and_cohomology(tmp_path, capsys):
    path = tmp_path / "m.model"
    path.write_text(serialize_model(dots_squares_model({0: 1, 1: 1}, [0], seed=2).algebra))
    assert run_cli(["validate", str(path)]) == 0
    assert run_cli(["cohomology", str(path), "--differential", "d0"]) == 0
    out = capsys.readouterr().out
    assert "dims" in out


def test_cli_qdolbeault_on_torus(tmp_path, capsys):
    path = tmp_path / "torus.model"
    path.write_text(serialize_connection_model(torus_model(1)))
    assert run_cli(["--format", "json", "qdolbeault", str(path), "--phi"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    assert payload["report"]["dims"] == {"0": 1, "1": 4, "2": 3}
    assert payload["report"]["phi"]["certified"] is True


def test_cli_spectral_and_deform(tmp_path, capsys):
    path = tmp_path / "sq.model"
    sq = dots_squares_model({0: 1, 1: 1}, [0], seed=4, unit=True)
    from dgkit.models import connection_from_bicomplex
    text = serialize_model(connection_from_bicomplex(sq).dolbeault)
    path.write_text(text)
    assert run_cli(["spectral", str(path)]) == 0
    assert run_cli(["deform", str(path), "--order", "3", "--samples", "5",
                    "--seed", "1"]) == 0
    capsys.readouterr()


def test_cli_json_reports_are_deterministic(tmp_path):
    path = tmp_path / "m.model"
    path.write_text(serialize_model(dots_squares_model({0: 2}, [0], seed=3).algebra))
    cmd = [sys.executable, "-m", "dgkit.cli", "--format", "json", "dgms", str(path)]
    first = subprocess.run(cmd, capture_output=True, cwd="/root/pkg")
    second = subprocess.run(cmd, capture_output=True, cwd="/root/pkg")
    assert first.stdout == second.stdout and first.returncode == 0

    dcmd = [sys.executable, "-m", "dgkit.cli", "--format", "json", "deform",
            str(path), "--order", "3", "--samples", "4", "--seed", "7"]
    a = subprocess.run(dcmd, capture_output=True, cwd="/root/pkg")
    b = subprocess.run(dcmd, capture_output=True, cwd="/root/pkg")
    assert a.stdout == b.stdout


def test_cli_generate_round_trip(tmp_path, capsys):
    out = tmp_path / "t.model"
    assert run_cli(["generate", "torus", "--rank", "1", "-o", str(out)]) == 0
    assert run_cli(["qdolbeault", str(out)]) == 0
    capsys.readouterr()


def test_cli_unknown_subcommand_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code != 0
    capsys.readouterr()


def test_cli_parse_error_reported(tmp_path, capsys):
    path = tmp_path / "broken.model"
    path.write_text("kind associative\n\ndegrees\n0 : x\n\nmap d shift 1\nx -> x : 1/0\n")
    assert run_cli(["validate", str(path)]) == 1
    out = capsys.readouterr().out
    assert "error" in out


def test_cli_formality_and_sl2(tmp_path, capsys):
    ds = tmp_path / "ds.model"
    ds.write_text(serialize_model(dots_squares_model({0: 1, 1: 1}, [0], seed=9).algebra))
    assert run_cli(["formality", str(ds)]) == 0
    torus = tmp_path / "torus.model"
    torus.write_text(serialize_connection_model(torus_model(1)))
    assert run_cli(["sl2", str(torus)]) == 0
    assert run_cli(["--format", "json", "qdolbeault", str(torus),
                    "--extended", "--window", "3"]) == 0
    capsys.readouterr()


def test_cli_formality_fails_on_zigzag(tmp_path, capsys):
    from dgkit.models import zigzag_model
    zz = tmp_path / "zz.model"
    zz.write_text(serialize_model(zigzag_model(0).algebra))
    assert run_cli(["formality", str(zz)]) == 1
    capsys.readouterr()


def test_text_and_json_reports_carry_the_same_verdicts(tmp_path):
    from dgkit.cli import Report

    report = Report("demo", {"model": "m"})
    report.put("alpha", {"passed": True, "dims": {"0": 2}}, asserted=True)
    report.put("beta", [1, 2, 3])
    text = report.to_text()
    payload = report.to_dict()

    def leaves(obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                yield from leaves(v)
        elif isinstance(obj, list):
            for v in obj:
                yield from leaves(v)
        else:
            yield obj

    for leaf in leaves(payload["report"]):
        assert str(leaf) in text
    assert ("PASS" in text) == payload["passed"]
