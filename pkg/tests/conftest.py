"""Pytest fixtures for singular drift lab tests."""

from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
SCENARIO_DIR = ROOT / "config" / "scenarios" / "v1"


@pytest.fixture
def scenario_dir():
    """Directory of the shipped scenario files."""
    return SCENARIO_DIR


@pytest.fixture
def small_settings():
    """Cheap settings: ten steps of 0.01, a handful of paths."""
    from src.simulation.scenario import SimulationSettings

    return SimulationSettings(T=0.1, step=0.01, n_paths=20, seed=3)


@pytest.fixture
def bessel(small_settings):
    """Symmetric Bessel-type scenario, f = |x|^0.5, b = 1."""
    from src.simulation.scenario import bessel_scenario

    return bessel_scenario(1.5, settings=small_settings)


@pytest.fixture
def skew_bm(small_settings):
    """f = 1 left of 0 and 3 right of it."""
    from src.simulation.scenario import skew_bm_scenario

    return skew_bm_scenario(small_settings)


@pytest.fixture
def synthetic_path():
    """One hand-made recorded path with constant quadratic variation per step."""
    times = np.array([0.0, 0.1, 0.2, 0.3, 0.4])
    X = np.array([[0.0, 0.02, 0.06, 0.5, 1.0]])
    return SimpleNamespace(times=times, X=X, Y=X.copy(), qv=np.full((1, 4), 0.1))


@pytest.fixture
def tiny_catalog(tmp_path):
    """Catalog with analytic checks only, pointing at the shipped scenarios."""
    text = f"""
version: 1
scenario_dir: {SCENARIO_DIR}
entries:
  - name: gnu
    checks:
      - name: gnu-residuals
        statistic: g_nu_residual
        target: 1.0e-8
        tolerance: {{kind: upper}}
        provenance: derived
        reference: "g_nu solves its integral equation"
        params:
          lower: -2.0
          upper: 2.0
          measures:
            - atoms: [{{point: 0.0, mass: 0.25}}]
  - name: bessel-verdicts
    scenario: bessel-1.5.json
    checks:
      - name: bessel-verdicts-hold
        statistic: verdict
        target: 4
        tolerance: {{kind: exact}}
        provenance: closed-form
        reference: "b = 1 has no zeros"
      - name: bessel-singular-sets-empty
        statistic: singular_sets_empty
        target: 1
        tolerance: {{kind: exact}}
        provenance: closed-form
        reference: "N_b and E are empty"
"""
    path = tmp_path / "catalog.yaml"
    path.write_text(text)
    return path
