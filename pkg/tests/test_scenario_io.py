import json
import math

import pytest

from measure_limits import (
    ScenarioFormatError,
    canonical_json,
    doc_hash,
    parse_scenario,
    run_checks,
)

MINIMAL = """
{
  "name": "point-vs-constant",
  "space": {"lo": 0.0, "hi": 1.0},
  "n_max": 2,
  "measures": {"explicit": [
    {"atoms": [[0.5, 1.0]]},
    {"atoms": [[0.5, 1.0]]}
  ]},
  "limit_measure": {"atoms": [[0.5, 1.0]]},
  "functions": {"explicit": [
    {"breakpoints": [], "values": [], "default": 2.0},
    {"breakpoints": [], "values": [], "default": 2.0}
  ]},
  "checks": ["fatou"],
  "convergence_certificate": {"kind": "tv"}
}
"""


def test_minimal_document_parses_and_runs():
    doc = parse_scenario(MINIMAL)
    assert doc.name == "point-vs-constant"
    report = run_checks(doc)
    assert report.results[0].name == "fatou"
    assert report.results[0].verdict == "holds"
    assert report.exit_code == 0


def test_builder_document_resolves_gallery():
    text = json.dumps({
        "name": "comb-via-builder",
        "space": {"lo": 0.0, "hi": "inf"},
        "n_max": 10,
        "measures": {"builder": "dyadic_comb"},
        "limit_measure": {"segments": [{"name": "exp2", "lo": 0.0, "hi": "inf"}]},
        "functions": {"builder": "dyadic_comb"},
        "checks": ["fatou"],
        "convergence_certificate": {"kind": "tv"},
    })
    doc = parse_scenario(text)
    sc = doc.build_scenario()
    assert sc.n_max == 10
    assert sc.f_seq.epi_liminf_cert is not None  # builder carries certificates
    report = run_checks(doc)
    assert report.results[0].verdict == "violated"
    assert report.exit_code == 2


def test_builder_document_inherits_tuned_grid():
    text = json.dumps({
        "name": "spikes-via-builder",
        "space": {"lo": -1.0, "hi": 1.0},
        "n_max": 60,
        "measures": {"builder": "twin_spikes"},
        "limit_measure": {"cells": [[-1.0, 1.0, 1.0]]},
        "functions": {"builder": "twin_spikes"},
        "checks": ["aui"],
        "convergence_certificate": {"kind": "tv"},
    })
    doc = parse_scenario(text)
    sc = doc.build_scenario()
    # fixture grid is capped at n_max/2 so the finite index range cannot
    # masquerade as a vanishing tail
    assert max(sc.k_grid) == 30.0
    report = run_checks(doc)
    assert report.results[0].verdict == "fail"


def test_overlapping_cells_rejected_with_both_named():
    text = json.dumps({
        "name": "bad",
        "space": {"lo": 0.0, "hi": 3.0},
        "n_max": 1,
        "measures": {"explicit": [{"cells": [[0.0, 2.0, 1.0], [1.0, 3.0, 1.0]]}]},
        "limit_measure": {"atoms": [[0.0, 1.0]]},
        "functions": {"explicit": [{"breakpoints": [], "values": [],
                                    "default": 0.0}]},
    })
    with pytest.raises(ScenarioFormatError) as err:
        parse_scenario(text)
    msg = str(err.value)
    assert "$.measures.explicit[0]" in msg
    assert "[0.0, 2.0)" in msg and "[1.0, 3.0)" in msg


def test_unknown_builder_and_cdf_rejected():
    base = {
        "name": "x", "space": {"lo": 0.0, "hi": 1.0}, "n_max": 1,
        "limit_measure": {"atoms": [[0.5, 1.0]]},
        "functions": {"explicit": [{"breakpoints": [], "values": [],
                                    "default": 0.0}]},
    }
    with pytest.raises(ScenarioFormatError) as err:
        parse_scenario(json.dumps({**base, "measures": {"builder": "missing"}}))
    assert "unknown builder" in str(err.value)
    with pytest.raises(ScenarioFormatError) as err:
        parse_scenario(json.dumps({
            **base,
            "measures": {"explicit": [{"segments": [
                {"name": "gauss", "lo": 0.0, "hi": 1.0}]}]},
        }))
    assert "unknown CDF" in str(err.value)


def test_json_error_reports_line_and_column():
    with pytest.raises(ScenarioFormatError) as err:
        parse_scenario("{\n  \"name\": oops\n}")
    assert "line 2" in str(err.value)


def test_field_errors_carry_paths():
    with pytest.raises(ScenarioFormatError) as err:
        parse_scenario(json.dumps({
            "name": "x", "space": {"lo": 1.0, "hi": 0.0}, "n_max": 1,
            "measures": {"explicit": []}, "limit_measure": {},
            "functions": {"explicit": []},
        }))
    assert "$.space" in str(err.value)
    with pytest.raises(ScenarioFormatError) as err:
        parse_scenario(json.dumps({
            "name": "x", "space": {"lo": 0.0, "hi": 1.0}, "n_max": 1,
            "measures": {"explicit": [{"atoms": []}]},
            "limit_measure": {"atoms": []},
            "functions": {"explicit": [{"breakpoints": [0.0, 1.0], "values": [],
                                        "default": 0.0}]},
        }))
    assert "$.functions.explicit[0]" in str(err.value)
    with pytest.raises(ScenarioFormatError) as err:
        parse_scenario(json.dumps({
            "name": "x", "space": {"lo": 0.0, "hi": 1.0}, "n_max": 1,
            "measures": {"explicit": [{"atoms": []}]},
            "limit_measure": {"atoms": []},
            "functions": {"explicit": [{"breakpoints": [], "values": [],
                                        "default": 0.0}]},
            "checks": ["nope"],
        }))
    assert "$.checks[0]" in str(err.value)


def test_roundtrip_identity():
    doc = parse_scenario(MINIMAL)
    emitted = doc.canonical()
    doc2 = parse_scenario(emitted)
    assert doc2.raw == doc.raw
    assert doc2.canonical() == emitted
    assert doc2.hash() == doc.hash()


def test_seventeen_digit_floats_roundtrip():
    x = 0.1 + 0.2  # classic non-representable decimal
    text = json.dumps({
        "name": "r", "space": {"lo": 0.0, "hi": 1.0}, "n_max": 1,
        "measures": {"explicit": [{"atoms": [[x, 1.0]]}]},
        "limit_measure": {"atoms": [[x, 1.0]]},
        "functions": {"explicit": [{"breakpoints": [], "values": [],
                                    "default": 0.0}]},
    })
    doc = parse_scenario(text)
    doc2 = parse_scenario(doc.canonical())
    assert doc2.raw["measures"]["explicit"][0]["atoms"][0][0] == x


def test_infinity_encoding():
    assert canonical_json({"a": math.inf, "b": -math.inf}) == \
        '{"a":"inf","b":"-inf"}'


def test_report_hash_stability():
    doc = parse_scenario(MINIMAL)
    r1 = run_checks(doc)
    r2 = run_checks(doc)
    assert r1.to_json() == r2.to_json()
    assert r1.scenario_hash == doc_hash(doc.raw)


def test_unknown_check_requested():
    doc = parse_scenario(MINIMAL)
    with pytest.raises(ScenarioFormatError):
        run_checks(doc, ("bogus",))


def test_missing_pieces_become_error_verdicts():
    doc = parse_scenario(MINIMAL)  # no g_functions, no limit_function
    report = run_checks(doc, ("minorant", "uniform_fatou"))
    verdicts = {r.name: r.verdict for r in report.results}
    assert verdicts == {"minorant": "error", "uniform_fatou": "error"}
    assert report.exit_code == 1


def test_staircase_builder_doc_all_pass_exit_zero():
    text = json.dumps({
        "name": "staircase-via-builder",
        "space": {"lo": 0.0, "hi": 1.0},
        "n_max": 32,
        "measures": {"builder": "staircase"},
        "limit_measure": {"atoms": [[0.0, 1.0]]},
        "functions": {"builder": "staircase"},
        "checks": ["ui", "fatou"],
        "convergence_certificate": {"kind": "builder"},
    })
    report = run_checks(parse_scenario(text))
    verdicts = {r.name: r.verdict for r in report.results}
    assert verdicts == {"ui": "pass", "fatou": "holds"}
    assert report.exit_code == 0


def test_empty_checks_list_reports_nothing_exit_zero():
    doc = parse_scenario(MINIMAL)
    report = run_checks(doc, ())
    assert report.results == ()
    assert report.exit_code == 0
