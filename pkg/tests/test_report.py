"""Check records and the JSON report."""

import json
import math

import numpy as np
import pytest

from rieszweak.report import (Check, VerificationReport, at_least, at_most, close, flagged,
                              passed_if, timed)


def test_close():
    assert close("a", "x", 1.0 + 1e-7, 1.0, 1e-6).status == "pass"
    assert close("a", "x", 1.1, 1.0, 1e-6).status == "fail"
    assert close("a", "x", float("nan"), 1.0, 1e-6).status == "fail"
    assert close("a", "x", 1e-20, 0.0, 1e-6).status == "pass"


def test_one_sided():
    assert at_least("a", "x", 0.9999, 1.0, 1e-3).status == "pass"
    assert at_least("a", "x", 0.99, 1.0, 1e-3).status == "fail"
    assert at_most("a", "x", 1.0005, 1.0, 1e-3).status == "pass"
    assert at_most("a", "x", 1.01, 1.0, 1e-3).status == "fail"


def test_flagged_is_not_failure():
    rep = VerificationReport()
    rep.add(flagged("f", "x", "outside window"), passed_if("p", "x", True))
    assert rep.summary() == {"total": 2, "pass": 1, "fail": 0, "flagged": 1}
    assert rep.exit_code() == 0
    rep.add(passed_if("q", "x", False))
    assert rep.exit_code() == 1


def test_bad_status():
    with pytest.raises(ValueError):
        Check("a", "x", "maybe")


def test_duplicate_ids():
    rep = VerificationReport()
    rep.add(passed_if("a", "x", True))
    with pytest.raises(ValueError):
        rep.add(passed_if("a", "x", True))


def test_json_round_trip():
    rep = VerificationReport(params=[{"n": 3, "s": 1.0}])
    rep.add(Check("a", "anchor text", "pass", np.float64(2.0), math.inf, 1e-3),
            Check("b", "anchor", "fail", [np.float64(1.0), math.nan], None))
    doc = json.loads(rep.to_json())
    assert doc["schema"] == 1
    assert doc["params"] == [{"n": 3, "s": 1.0}]
    assert doc["checks"][0]["expected"] == "inf"
    assert doc["checks"][1]["measured"] == [1.0, "nan"]
    assert set(doc["checks"][0]) == {"id", "anchor", "status", "measured", "expected",
                                     "tolerance", "runtime_ms", "detail"}
    assert doc["summary"]["fail"] == 1


def test_timed_spreads_runtime():
    checks = []
    with timed(checks):
        checks.append(passed_if("a", "x", True))
        checks.append(passed_if("b", "x", True))
    assert checks[0].runtime_ms == checks[1].runtime_ms >= 0
