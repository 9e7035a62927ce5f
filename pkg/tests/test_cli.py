import json

import pytest

from arclocus.cli import run
from arclocus.schemas import validate_document, validate_report

BLOWUP_DOC = {
    "resolution_data": {
        "d": 2, "r": 1, "k": [1], "y": [[1]], "z": [0],
        "in_w": [True], "eq_w": [True], "nerve": [[], [0]],
    },
    "pair": {"q": ["1/2"], "w_is_proper": True},
    "contact": {"m": [2], "e": 0},
}

XY_PAIR_DOC = {
    "monomial_pair": {
        "d": 2,
        "ideals": [{"generators": [[1, 0], [0, 1]]}],
        "q": [2],
    },
}

QUADRIC4_DOC = {
    "hypersurface": {
        "variables": ["x", "y", "z", "w"],
        "f": "x^2 + y^2 + z^2 + w^2",
        "nondegenerate_asserted": True,
        "singular_locus_is_origin_asserted": True,
    },
}

LIFT_DOC = {
    "hypersurface": {"variables": ["x", "y", "z"], "f": "x*y + z^2"},
    "arc": {"coefficients": [[0, 1], [0, -1], [0, 1]],
            "order": 1, "jacobian_order": 1},
}

IOA_DOC = {
    "adjunction_case": {
        "d": 3,
        "divisor_support": [[2, 0, 0], [0, 2, 0], [0, 0, 2]],
        "boundary": [],
        "center": {"kind": "origin"},
        "divisor_side": {
            "resolution_data": {"d": 2, "r": 1, "k": [0], "y": [], "z": [0],
                                "in_w": [True]},
            "q": [],
        },
    },
}

SEMI_DOC = {
    "semicontinuity_case": {
        "pair": {"d": 2, "ideals": [{"generators": [[1, 1]]}], "q": [1]},
        "v": {"kind": "origin"},
        "w": {"kind": "subspace", "coords": [0]},
    },
}


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def _run_json(args):
    code, text = run(args)
    return code, json.loads(text)


def test_contact_codim_resolution(tmp_path):
    path = _write(tmp_path, "blowup.json", BLOWUP_DOC)
    code, report = _run_json(["contact-codim", path])
    assert code == 0
    assert report["results"]["codim_exact_orders"] == "4"
    assert report["results"]["codim_min_orders"] == "4"


def test_contact_codim_monomial(tmp_path):
    doc = dict(XY_PAIR_DOC)
    doc["contact"] = {"m": [2]}
    path = _write(tmp_path, "xy.json", doc)
    code, report = _run_json(["contact-codim", path, "--center", "origin"])
    assert code == 0
    assert report["results"]["codim"] == "4"
    assert report["results"]["witness_weights"] == [2, 2]


def test_mld_monomial(tmp_path):
    path = _write(tmp_path, "xy.json", XY_PAIR_DOC)
    code, report = _run_json(["mld", path, "--center", "origin"])
    assert code == 0
    assert report["results"]["mld"] == "0"
    assert report["results"]["witness_weights"] == [1, 1]
    # Same pair at a line center via the subspace flag syntax.
    code, report = _run_json(["mld", path, "--center", "subspace:0"])
    assert code == 0
    assert report["results"]["mld"] == "0"


def test_contact_codim_classical_route(tmp_path):
    doc = {
        "resolution_data": {"d": 2, "r": 1, "k": [0], "y": [], "z": [2],
                            "in_w": [True]},
        "contact": {"m": [], "e": 2},
    }
    path = _write(tmp_path, "classical.json", doc)
    code, report = _run_json(["contact-codim", path])
    assert code == 0
    assert report["results"]["codim_classical"] == "3"


def test_mld_resolution_and_generic(tmp_path):
    doc = {k: v for k, v in BLOWUP_DOC.items() if k != "contact"}
    path = _write(tmp_path, "blowup.json", doc)
    code, report = _run_json(["mld", path])
    assert code == 0
    assert report["results"]["mld"] == "3/2"
    assert report["results"]["witness_divisor"] == 0
    code, report = _run_json(["mld", path, "--generic"])
    assert code == 0
    assert report["results"]["mld"] == "3/2"


def test_mld_check_verdicts(tmp_path):
    doc = {k: v for k, v in BLOWUP_DOC.items() if k != "contact"}
    path = _write(tmp_path, "blowup.json", doc)
    code, report = _run_json(["mld-check", path, "--tau", "3/2"])
    assert code == 0 and report["results"]["verdict"] is True
    code, report = _run_json(["mld-check", path, "--tau", "2"])
    assert code == 1
    assert report["results"]["verdict"] is False
    assert report["results"]["counterexample"] == {
        "m": [1], "e": 0, "condition": "exact-order"}


def test_classify_terminal(tmp_path):
    path = _write(tmp_path, "quadric4.json", QUADRIC4_DOC)
    code, report = _run_json(["classify", path, "--method", "both",
                              "--jet-bound", "1"])
    assert code == 0
    assert report["results"]["verdict"] == "TERMINAL"
    assert report["results"]["newton_mld"] == "2"
    assert all(row["pure_dimension"] for row in report["results"]["jets"])


def test_count_jets(tmp_path):
    doc = {"hypersurface": {"variables": ["x", "y", "z"],
                            "f": "x^2 + y^2 + z^2"}}
    path = _write(tmp_path, "quadric.json", doc)
    code, report = _run_json(["count-jets", path, "--prime", "3",
                              "--jet-bound", "1"])
    assert code == 0
    assert report["results"]["counts"] == [[3, 0, 9], [3, 1, 99]]


def test_lift(tmp_path):
    path = _write(tmp_path, "lift.json", LIFT_DOC)
    code, report = _run_json(["lift", path, "--target", "4"])
    assert code == 0
    rows = report["results"]["arc_coefficients"]
    assert rows[0][:2] == ["0", "1"]
    assert report["results"]["residual_order_at_least"] == 5
    assert len(rows[0]) == 5


def test_check_ioa_and_negative_control(tmp_path):
    path = _write(tmp_path, "ioa.json", IOA_DOC)
    code, report = _run_json(["check-ioa", path])
    assert code == 0
    assert report["results"] == {"lhs": "1", "rhs": "1", "equal": True,
                                 "lc_adjunction_agrees": True}
    corrupted = json.loads(json.dumps(IOA_DOC))
    corrupted["adjunction_case"]["divisor_side"]["resolution_data"]["k"] = [1]
    path = _write(tmp_path, "bad.json", corrupted)
    code, report = _run_json(["check-ioa", path])
    assert code == 1
    assert report["results"]["equal"] is False


def test_check_semicontinuity(tmp_path):
    path = _write(tmp_path, "semi.json", SEMI_DOC)
    code, report = _run_json(["check-semicontinuity", path])
    assert code == 0
    assert report["results"] == {"mld_v": "0", "mld_w": "0", "codim_vw": 1,
                                 "holds": True}


def test_reports_are_byte_identical(tmp_path):
    path = _write(tmp_path, "xy.json", XY_PAIR_DOC)
    outputs = {run(["mld", path, "--center", "origin"])[1] for _ in range(3)}
    assert len(outputs) == 1


def test_report_revalidates(tmp_path):
    path = _write(tmp_path, "xy.json", XY_PAIR_DOC)
    _, text = run(["mld", path, "--center", "origin"])
    validate_report(json.loads(text))


def test_markdown_format(tmp_path):
    path = _write(tmp_path, "xy.json", XY_PAIR_DOC)
    code, text = run(["mld", path, "--center", "origin", "--format", "md"])
    assert code == 0
    assert text.startswith("| field | value |")
    assert "| results.mld | \"0\" |" in text


def test_input_error_exit_code(tmp_path):
    path = _write(tmp_path, "bad.json", {"monomial_pair": {"d": 2}})
    code, text = run(["mld", path])
    assert code == 2 and "error" in text

    path2 = _write(tmp_path, "unknown.json",
                   {"monomial_pair": XY_PAIR_DOC["monomial_pair"],
                    "extra": {}})
    code, text = run(["mld", path2])
    assert code == 2 and "unknown document keys" in text

    code, text = run(["mld", str(tmp_path / "missing.json")])
    assert code == 2


def test_budget_error_exit_code(tmp_path):
    doc = {"hypersurface": {"variables": ["x", "y", "z"],
                            "f": "x^2 + y^2 + z^2"}}
    path = _write(tmp_path, "quadric.json", doc)
    code, text = run(["count-jets", path, "--jet-bound", "3", "--budget", "100"])
    assert code == 3 and "budget" in text


def test_schema_rejects_floats_and_unknown_keys():
    with pytest.raises(Exception):
        validate_document({"monomial_pair": {"d": 2, "ideals": [], "q": [0.5]}})
    with pytest.raises(Exception):
        validate_document({"resolution_data": {"d": 2, "r": 1, "k": [1],
                                               "y": [], "z": [0],
                                               "in_w": [True], "bogus": 1}})


def test_polynomial_syntax_error_is_input_error(tmp_path):
    doc = {"hypersurface": {"variables": ["x"], "f": "x^-1"}}
    path = _write(tmp_path, "bad.json", doc)
    code, text = run(["classify", path, "--method", "newton"])
    assert code == 2 and "exponent" in text
