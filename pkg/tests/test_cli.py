import json

import jsonschema
import pytest

from lgsurf.cli import EXIT_INPUT, EXIT_NOT_APPLICABLE, EXIT_OK, RunConfig, InputError, main, parse_assignments
from lgsurf.schema import SCHEMA


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == EXIT_OK else out)


def test_surface_implicit_report_matches_schema(capsys):
    code, doc = run_json(capsys, ["surface", "--implicit", "r*t = -1", "--at", "r=1,s=0,t=-1"])
    assert code == EXIT_OK
    jsonschema.validate(doc, SCHEMA)
    g = doc["report"]["invariants"]["generic"]
    assert g["tau"] == pytest.approx(2.0, rel=1e-7)
    assert doc["report"]["invariants"]["dupin"] is True
    assert abs(doc["report"]["checks"]["integrability"]) <= 1e-8


def test_surface_solves_missing_coordinates(capsys):
    code, doc = run_json(capsys, ["surface", "--implicit", "s = t^3", "--at", "t=1"])
    assert code == EXIT_OK
    jsonschema.validate(doc, SCHEMA)
    assert doc["report"]["invariants"]["base_point"][1:] == pytest.approx([1.0, 1.0])
    assert doc["report"]["invariants"]["ruled"]["delta1"] == -1


def test_surface_param(capsys):
    code, doc = run_json(capsys, ["surface", "--param", "r=u,s=0,t=v", "--no-integrability"])
    assert code == EXIT_OK
    jsonschema.validate(doc, SCHEMA)
    assert doc["report"]["invariants"]["class2"] == "2-isotropic"


def test_pde_json_and_csv(capsys, tmp_path):
    code, doc = run_json(capsys, ["pde", "--eq", "s = exp(t)", "--samples", "3"])
    assert code == EXIT_OK
    jsonschema.validate(doc, SCHEMA)
    assert doc["report"]["pde_class"] == "Goursat"
    out = tmp_path / "r.csv"
    assert main(["pde", "--eq", "r*t - s^2 + 1", "--samples", "3", "--format", "csv", "--out", str(out)]) == EXIT_OK
    text = out.read_text().splitlines()
    assert text[0].startswith("key") or "," in text[0]


def test_paper_tables_json(capsys, tmp_path):
    out = tmp_path / "t.json"
    assert main(["paper-tables", "--group", "ruled-catalog", "--format", "json", "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert doc["report"]["passed"] == doc["report"]["total"] > 0


def test_schema_command(capsys):
    assert main(["schema"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["title"] == "lgsurf report"


@pytest.mark.parametrize("argv,code", [
    (["surface", "--implicit", "r*t = 1", "--at", "r=1,s=0,t=1"], EXIT_NOT_APPLICABLE),
    (["surface", "--implicit", "r*t = -1", "--at", "r=1,s=0,t=1"], EXIT_INPUT),
    (["surface", "--implicit", "r*t + * 1", "--at", "r=1,s=0,t=-1"], EXIT_INPUT),
    (["surface", "--implicit", "r*t = -1", "--at", "r=1,s=0,t=-1", "--order", "4"], EXIT_INPUT),
    (["surface", "--bogus"], EXIT_INPUT),
    (["pde", "--eq", "r*t - 1", "--samples", "2"], EXIT_NOT_APPLICABLE),
])
def test_exit_codes(argv, code, capsys):
    try:
        got = main(argv)
    except SystemExit as exc:
        got = exc.code
    assert got == code


def test_parse_error_shows_caret(capsys):
    main(["surface", "--implicit", "r*t + * 1", "--at", "r=1,s=0,t=-1"])
    err = capsys.readouterr().err
    assert "^" in err


def test_plot_writes_files(tmp_path, capsys):
    prefix = tmp_path / "rt"
    assert main(["plot", "--implicit", "r*t = -1", "--at", "r=1,s=0,t=-1", "--region", "0.5",
                 "--grid", "9", "--glyphs", "4", "--out", str(prefix)]) == EXIT_OK
    assert (tmp_path / "rt.obj").read_text().startswith(("#", "v", "o"))
    assert "<svg" in (tmp_path / "rt.svg").read_text()


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig("surface", order=4)
    with pytest.raises(InputError):
        RunConfig("surface", tol=-1.0)
    assert parse_assignments("r=1, s=exp(0)", "rst", "--at") == {"r": 1.0, "s": 1.0}
    with pytest.raises(InputError):
        parse_assignments("r=1, r=2", "rst", "--at")
    with pytest.raises(InputError):
        parse_assignments("w=1", "rst", "--at")
