import json

import pytest

from siegelinv import catalog, pipeline
from siegelinv.cli import main

PREC = 300


def coeffs(i):
    return list(catalog.get(i).coefficients)


@pytest.fixture(scope="module")
def point4():
    return pipeline.analytic_point(coeffs(4), PREC)


def test_precision_floor():
    with pytest.raises(ValueError):
        pipeline.verify_lockhart(coeffs(3), 128)


def test_lockhart_and_vanishing_at_low_precision(point4):
    assert pipeline.verify_lockhart(coeffs(4), PREC, point=point4).passed
    v = pipeline.verify_vanishing(coeffs(4), PREC, point=point4)
    assert v.passed and v.details["odd_vanishing"] == 28 and len(v.details["even_vanishing"]) == 1


def test_lockhart_error_tracks_precision():
    """The residual sits a fixed number of bits below the working precision."""
    gaps = []
    for prec in (300, 500):
        r = pipeline.verify_lockhart(coeffs(9), prec)
        gaps.append(r.residual_log2 + prec)
    assert all(g < 64 for g in gaps)
    assert abs(gaps[0] - gaps[1]) < 48


def test_thomae_negative_control():
    ok = pipeline.verify_thomae(coeffs(4), PREC)
    bad = pipeline.verify_thomae(coeffs(4), PREC, drop_det=True)
    assert ok.passed and ok.details["skipped"] == 0
    assert not bad.passed and bad.residual_log2 > -10


def test_modularity_small(point4):
    r = pipeline.verify_modularity(coeffs(4), PREC, trials=2, point=point4)
    assert r.passed, r.details


def test_modular_report_curve4_is_zero(point4):
    rep = pipeline.modular_invariants_report(coeffs(4), PREC, point=point4)
    assert [r.value for r in rep.reports] == [0, 0, 0]


def test_unrecognized_at_low_precision():
    rep = pipeline.modular_invariants_report(coeffs(13), PREC)
    assert any(r.value is None for r in rep.reports)
    for r in rep.reports:
        if r.value is None:
            assert "raise precision" in r.note


def test_basis_independence_small():
    r = pipeline.basis_independence(coeffs(3), PREC)
    assert r.passed, r.details


# -- command line -------------------------------------------------------------


def test_cli_invariants_json(capsys):
    assert main(["invariants", "--curve", "13", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["discriminant"]["factors"] == [[2, 28], [41, 6]]
    assert len(out["absolute"]) == 9


def test_cli_model_file(tmp_path, capsys):
    p = tmp_path / "f.txt"
    p.write_text(" ".join(map(str, coeffs(9))))
    assert main(["invariants", "--model", str(p)]) == 0
    assert "1063" in capsys.readouterr().out
    p.write_text("not numbers")
    assert main(["invariants", "--model", str(p)]) == 2


def test_cli_input_errors(capsys):
    assert main(["invariants"]) == 2
    assert main(["invariants", "--curve", "99"]) == 2
    assert main(["verify", "lockhart", "--curve", "3", "--prec", "100"]) == 2
    assert main(["verify", "nonsense", "--curve", "3"]) == 2


def test_cli_singular_model(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"coefficients": [0, 0, 1, 2, 3, 4, 5, 6, 7]}))
    assert main(["invariants", "--model", str(p)]) == 2


def test_cli_verify_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "thomae", "--curve", "4", "--prec", "300", "--out", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["passed"] is True and rec["check"] == "thomae"
    assert "PASS" in capsys.readouterr().out


def test_cli_output_is_deterministic(capsys):
    main(["verify", "vanishing", "--curve", "3", "--prec", "300", "--json"])
    a = capsys.readouterr().out
    main(["verify", "vanishing", "--curve", "3", "--prec", "300", "--json"])
    assert capsys.readouterr().out == a


def test_cli_table1_empty_and_paper_scale(capsys):
    assert main(["table1", "--curves", ""]) == 0
    assert "empty selection" in capsys.readouterr().out
    assert main(["table1", "--curves", "1", "--prec", "1000"]) == 0
    assert "paper-scale precision (30,000 bits)" in capsys.readouterr().out


def test_cli_catalog(capsys):
    assert main(["catalog", "--json"]) == 0
    assert len(json.loads(capsys.readouterr().out)["curves"]) == 13
