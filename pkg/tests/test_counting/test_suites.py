import json

import numpy as np
import pytest

from spinorgp.core.grid import Grid
from spinorgp.counting.suites import SUITES, Check, SuiteReport, run_suite, scaled_interaction_norms
from spinorgp.utils.errors import ConfigurationError


def test_registry_names():
    assert {"lemma31", "lemma32", "lemma33", "lemma41", "lemma51", "lemma61"} <= set(SUITES)


def test_unknown_suite_is_rejected():
    with pytest.raises(ConfigurationError):
        run_suite("lemma99")


def test_check_constructors():
    ok = Check.below("residual", 1e-14, 1e-12)
    assert ok.passed
    bad = Check.holds("bound", 2.0, 1.0, extra=3.0)
    assert not bad.passed
    assert bad.residual == 1.0
    assert bad.constants == {"lhs": 2.0, "rhs": 1.0, "extra": 3.0}


def test_report_serialization_is_deterministic(tmp_path):
    report = SuiteReport("lemma31", 7, [Check.below("a", 0.0, 1e-12), Check.holds("b", 3.0, 1.0)])
    assert not report.passed
    assert [c.name for c in report.breaches()] == ["b"]

    first = report.to_json(tmp_path / "one.json")
    second = report.to_json(tmp_path / "two.json")
    assert first.read_bytes() == second.read_bytes()
    payload = json.loads(first.read_text())
    assert payload["schema_version"] == 1
    assert payload["suite"] == "lemma31"
    assert payload["checks"][1]["passed"] is False


@pytest.mark.slow
def test_algebra_suite_passes():
    report = run_suite("lemma31", seed=0)
    assert report.checks
    assert report.passed, [c.name for c in report.breaches()]


@pytest.mark.slow
@pytest.mark.parametrize("name", ["lemma32", "lemma33", "lemma41", "lemma51", "lemma61"])
def test_suite_passes(name):
    report = run_suite(name, seed=0)
    assert report.checks
    assert report.passed, [c.name for c in report.breaches()]


def test_xi_reaches_the_suite_and_report(monkeypatch, tmp_path):
    seen = []

    def recording(rng, threads, xi):
        seen.append(xi)
        return [Check.below("m_offset", 100.0 ** (-xi), 1.0)]

    monkeypatch.setitem(SUITES, "lemma31", recording)
    report = run_suite("lemma31", xi=0.25)
    assert seen == [0.25]
    assert report.xi == 0.25
    assert report.checks[0].residual == pytest.approx(100.0 ** -0.25)
    assert json.loads(report.to_json(tmp_path / "r.json").read_text())["xi"] == 0.25

    assert run_suite("lemma31").xi == 0.1
    with pytest.raises(ConfigurationError):
        run_suite("lemma31", xi=0.5)


def test_scaled_interaction_norms_match_gaussian_closed_forms():
    ns = np.array([1.0, 2.0, 3.0])
    full, dressed = scaled_interaction_norms(Grid.cube(3, 64, 6.0), ns)
    # V(z) = exp(-|z|^2), |phi|^2 = exp(-|x|^2) / pi^(3/2)
    full_exact = np.sqrt(ns ** 4 * (np.pi / (2 * ns ** 2 + 0.5)) ** 1.5 / (2 * np.pi) ** 1.5)
    s = ns ** 2 / (ns ** 2 + 1)
    dressed_exact = np.sqrt(ns ** 4 * (ns ** 2 + 1) ** -3 * (1 + 2 * s) ** -1.5)
    assert np.allclose(full, full_exact, rtol=1e-3)
    assert np.allclose(dressed, dressed_exact, rtol=1e-3)


def test_scaled_interaction_norms_need_three_dimensions():
    with pytest.raises(ConfigurationError):
        scaled_interaction_norms(Grid.cube(1, 64, 6.0), [2])


@pytest.mark.slow
def test_interaction_norm_exponents_follow_envelopes():
    checks = {c.name: c for c in run_suite("lemma33", seed=1).checks}
    full, dressed = checks["scaled/exponent_full"], checks["scaled/exponent_dressed"]
    assert full.passed and dressed.passed
    assert abs(full.constants["measured"] - 0.5) < 0.1
    assert abs(dressed.constants["measured"] + 1.0) < 0.1
    assert checks["scaled/c_full_band"].passed
    assert checks["scaled/c_dressed_band"].passed
