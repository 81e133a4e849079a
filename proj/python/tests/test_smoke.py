import json
import math
from pathlib import Path

import numpy as np
import pytest

import radialwave as rw

ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="module")
def h3():
    return rw.DensityModel.jacobi(0.5, -0.5)


def test_model_properties(h3):
    assert h3.rho == pytest.approx(1.0)
    assert h3.dim == 3
    assert h3.polynomial_plancherel
    assert h3.density(1.0) == pytest.approx(4.0 * math.sinh(1.0) ** 2, rel=1e-12)


def test_phi_matches_closed_form(h3):
    r, values = rw.phi(h3, 2.0, 10.0, 0.05)
    expected = np.ones_like(r)
    expected[1:] = np.sin(2.0 * r[1:]) / (2.0 * np.sinh(r[1:]))
    assert np.max(np.abs(values - expected)) < 1e-8


def test_dirichlet_frequencies(h3):
    lambdas = rw.dirichlet_spectrum(h3, math.pi, 4)
    assert np.allclose(lambdas, [1, 2, 3, 4], atol=1e-9)


def test_transform_round_trip(h3):
    f = rw.bump(1.0, 1e-4)
    lam, F, w = rw.forward_transform(h3, f, 1e-4, extent=1.1)
    r, back = rw.inverse_transform(h3, lam, F, w, r_max=1.0, dr=1e-3)
    assert np.max(np.abs(back - f[: 10 * len(back) : 10])) < 1e-6


def test_spectral_solution_at_zero_is_the_data(h3):
    f = rw.bump(0.5)
    state = rw.propagate_spectral(h3, f, t=0.0, r_max=1.5, out_dr=0.01)
    expected = np.zeros(len(state["r"]))
    expected[:51] = f[:5001:100].real
    assert np.max(np.abs(state["u"] - expected)) < 1e-10


def test_energy_is_conserved(h3):
    rows = rw.energy(h3, rw.bump(0.5), times=[0.0, 1.0, 3.0])
    e0 = rows[0]["E"]
    assert all(abs(row["E"] - e0) <= 1e-6 * e0 for row in rows)
    assert rows[-1]["K"] == pytest.approx(rows[-1]["P"], rel=1e-6)


def test_fdtd_rejects_cfl_violation(h3):
    with pytest.raises(rw.CFLError):
        rw.propagate_fdtd(h3, rw.bump(0.5), t=0.5, fdtd_dr=1e-3, fdtd_dt=2e-3)


def test_run_scenario_check_mode(tmp_path):
    result = rw.run_scenario(str(ROOT / "scenarios" / "h3_huygens.cfg"), "check", str(tmp_path))
    assert result["pass"], result["failures"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["calibration"]["c0"] == pytest.approx(1.0 / (2.0 * math.pi**2), rel=1e-10)
