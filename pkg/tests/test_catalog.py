"""Tests for catalog.py - tolerance rules, catalog lint and deterministic reports."""

import json
import math
from pathlib import Path

import pytest

from src.harness.catalog import (
    DEFAULT_K,
    STATISTICS,
    Catalog,
    CatalogError,
    CatalogRunner,
    CheckResult,
    EntryContext,
    Observation,
    ScenarioCatalogEntry,
    SuiteReport,
    Tolerance,
    ToleranceKind,
    run_catalog,
)

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "config" / "scenarios" / "v1"


def entry_context(scenario: str, **settings) -> EntryContext:
    entry = ScenarioCatalogEntry("entry", scenario, settings, ())
    return EntryContext(entry, SCENARIOS, seed=5)


class TestTolerance:
    def test_k_se(self):
        tol = Tolerance(ToleranceKind.K_SE, 3.0)
        assert tol.accepts(Observation(1.05, se=0.02), 1.0)
        assert not tol.accepts(Observation(1.1, se=0.02), 1.0)
        assert not tol.accepts(Observation(1.0), 1.0)

    def test_abs(self):
        tol = Tolerance(ToleranceKind.ABS, 0.01)
        assert tol.accepts(Observation(0.755), 0.75)
        assert not tol.accepts(Observation(0.77), 0.75)

    def test_upper_and_lower(self):
        assert Tolerance(ToleranceKind.UPPER).accepts(Observation(1e-12), 1e-10)
        assert not Tolerance(ToleranceKind.UPPER).accepts(Observation(1e-10), 1e-10)
        assert Tolerance(ToleranceKind.LOWER).accepts(Observation(2.0), 1.0)

    def test_exact(self):
        assert Tolerance(ToleranceKind.EXACT).accepts(Observation(4.0), 4.0)
        assert not Tolerance(ToleranceKind.EXACT).accepts(Observation(3.0), 4.0)

    def test_ks(self):
        obs = Observation(0.01, critical=0.016)
        assert Tolerance(ToleranceKind.KS).accepts(obs, None)
        assert not Tolerance(ToleranceKind.KS_REJECT).accepts(obs, None)

    def test_missing_value_fails(self):
        assert not Tolerance(ToleranceKind.UPPER).accepts(Observation(None), 1.0)
        assert not Tolerance(ToleranceKind.UPPER).accepts(Observation(math.nan), 1.0)

    def test_from_dict_defaults(self):
        assert Tolerance.from_dict({"kind": "k_se"}).width == DEFAULT_K
        assert Tolerance.from_dict({"kind": "k_se", "k": 2}).width == 2.0
        assert Tolerance.from_dict({"kind": "abs", "width": 0.1}).width == 0.1

    def test_abs_needs_width(self):
        with pytest.raises(ValueError, match="width"):
            Tolerance.from_dict({"kind": "abs"})


class TestCatalog:
    def test_shipped_catalog_lints_clean(self):
        catalog = Catalog.load(ROOT / "config" / "catalog.yaml")
        assert catalog.lint() == []
        names = {c.name for e in catalog.entries for c in e.checks}
        assert {"bessel-symmetric-mean-square", "skewbm-occupation", "gnu-residuals"} <= names

    def test_shipped_statistics_are_registered(self):
        catalog = Catalog.load(ROOT / "config" / "catalog.yaml")
        for entry in catalog.entries:
            for check in entry.checks:
                assert check.statistic in STATISTICS

    def test_missing_file(self, tmp_path):
        with pytest.raises(CatalogError, match="cannot load"):
            Catalog.load(tmp_path / "nope.yaml")

    def test_select_by_check_and_entry(self, tiny_catalog):
        catalog = Catalog.load(tiny_catalog)
        chosen = catalog.select(["gnu-residuals"])
        assert [(e.name, [c.name for c in cs]) for e, cs in chosen] == [
            ("gnu", ["gnu-residuals"])
        ]
        chosen = catalog.select(["bessel-verdicts"])
        assert len(chosen[0][1]) == 2

    def test_unknown_selection(self, tiny_catalog):
        with pytest.raises(CatalogError, match="unknown selection: nope"):
            Catalog.load(tiny_catalog).select(["nope"])

    def test_lint_refuses_missing_provenance(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text(
            """
entries:
  - name: gnu
    checks:
      - name: gnu-residuals
        statistic: g_nu_residual
        target: 1.0e-8
        tolerance: {kind: upper}
        reference: "somewhere"
        params: {measures: [{atoms: []}]}
"""
        )
        catalog = Catalog.load(path)
        assert any("provenance" in p for p in catalog.lint())
        with pytest.raises(CatalogError, match="metadata lint"):
            CatalogRunner(catalog)

    def test_lint_flags_unknown_statistic_and_duplicates(self, tmp_path):
        path = tmp_path / "bad.yaml"
        check = """
      - name: twice
        statistic: astrology
        target: 1
        provenance: trivial
        reference: "none"
"""
        path.write_text("entries:\n  - name: a\n    checks:" + check + check)
        problems = Catalog.load(path).lint()
        assert any("unknown statistic 'astrology'" in p for p in problems)
        assert any("defined twice" in p for p in problems)


class TestRunner:
    def test_tiny_catalog_passes(self, tiny_catalog):
        report = run_catalog(None, seed=42, catalog=tiny_catalog)
        assert report.passed
        assert [c.name for c in report.checks] == sorted(c.name for c in report.checks)
        assert report.to_dict()["n_checks"] == 3

    def test_report_is_deterministic(self, tiny_catalog):
        first = run_catalog(["gnu-residuals"], seed=7, catalog=tiny_catalog).to_json()
        second = run_catalog(["gnu-residuals"], seed=7, catalog=tiny_catalog).to_json()
        assert first == second
        assert json.loads(first)["seed"] == 7

    def test_failed_statistic_is_reported(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text(
            """
entries:
  - name: gnu
    checks:
      - name: gnu-bad-measure
        statistic: g_nu_residual
        target: 1.0e-8
        tolerance: {kind: upper}
        provenance: derived
        reference: "a reflecting atom has no g_nu"
        params: {measures: [{atoms: [{point: 0.0, mass: 0.5}]}]}
"""
        )
        report = run_catalog(None, catalog=path)
        (check,) = report.checks
        assert not check.passed
        assert "not positive" in check.error


class TestSuiteReport:
    def test_json_spells_out_infinities(self):
        result = CheckResult(
            name="c",
            entry="e",
            statistic="mean",
            value=math.inf,
            target=1.0,
            tolerance=Tolerance(ToleranceKind.UPPER),
            passed=False,
            provenance="trivial",
            reference="r",
            se=math.nan,
        )
        data = json.loads(SuiteReport(0, ["c"], [result]).to_json())
        assert data["checks"][0]["value"] == "inf"
        assert data["checks"][0]["se"] is None
        assert data["n_failed"] == 1


class TestPathStatistics:
    def test_no_occupation_falls_with_the_window(self):
        ctx = entry_context("bessel-1.5.json", n_paths=40, step=1.0e-3, T=0.25)
        obs = STATISTICS["no_occupation"](ctx, {"eps": [0.01, 0.1]})
        assert obs.detail["points"] == [0.0]
        assert obs.detail["eps"] == [0.1, 0.01]
        wide, narrow = obs.detail["fractions"]
        assert obs.detail["decreasing"]
        assert narrow < wide
        assert obs.value == narrow

    def test_no_occupation_single_width(self):
        ctx = entry_context("bessel-1.5.json", n_paths=10, step=1.0e-2, T=0.25)
        obs = STATISTICS["no_occupation"](ctx, {"eps": 0.05})
        assert obs.detail["fractions"] == [obs.value]

    def test_no_occupation_without_points_is_zero(self):
        ctx = entry_context("constant.json", n_paths=10, step=1.0e-2, T=0.25)
        obs = STATISTICS["no_occupation"](ctx, {})
        assert obs.detail["points"] == []
        assert obs.value == 0.0

    def test_square_integral_stability_halves_the_step(self):
        ctx = entry_context("bessel-1.5.json", n_paths=40, step=1.0e-2, T=0.5)
        obs = STATISTICS["square_integral_stability"](ctx, {})
        coarse, fine = obs.detail["coarse"], obs.detail["fine"]
        assert 0.0 < coarse < math.inf
        assert 0.0 < fine < math.inf
        assert obs.value == pytest.approx(abs(coarse - fine) / fine)
        (batch,) = ctx.recorded({"step": 5.0e-3})
        assert batch.times[1] == pytest.approx(5.0e-3)

    def test_slow_entries_are_skipped_on_request(self):
        catalog = Catalog.load(ROOT / "config" / "catalog.yaml")
        slow = {e.name for e in catalog.entries if e.slow}
        assert {"bessel-localtime", "bessel-skew-localtime"} <= slow
        quick = {e.name for e, _ in catalog.select(None, include_slow=False)}
        assert not slow & quick
        assert {e.name for e, _ in catalog.select(["bessel-localtime"], include_slow=False)} == {
            "bessel-localtime"
        }
