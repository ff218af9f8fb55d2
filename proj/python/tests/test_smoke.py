import json
import math
import os
import pathlib

import pytest

import casimir_bec as cb

CONFIG_DIR = pathlib.Path(os.environ.get("CASIMIR_BEC_CONFIG_DIR", pathlib.Path(__file__).parents[2] / "configs"))


@pytest.fixture(scope="module")
def bench():
    cfg = cb.benchmark_config()
    params = cb.derive_quasi1d(cfg)
    pot = cb.lateral_coefficients(cfg)
    return cfg, params, pot


def test_reduction(bench):
    _, p, _ = bench
    assert p.sigma * 1e6 == pytest.approx(0.20754, rel=1e-4)
    assert cb.energy_to_frequency(p.mu_tilde) == pytest.approx(495.22, rel=1e-4)
    assert p.radial_frozen and p.elongated


def test_gap_report(bench):
    _, p, pot = bench
    report = cb.perturbative_gaps(p, pot)
    (entry,) = report.entries
    assert cb.energy_to_frequency(entry.gap) == pytest.approx(0.017575, rel=1e-4)
    assert entry.F == pytest.approx(entry.gap / abs(entry.U_n))
    assert pot(0.0) == pytest.approx(entry.U_n)


def test_bdg_oracle(bench):
    _, p, pot = bench
    bands = cb.solve_bdg_bands(p, pot, q_points=3, band_count=4)
    rows = cb.oracle_compare(cb.perturbative_gaps(p, pot), bands)
    assert len(rows) == 1 and rows[0].pass_
    assert len(bands.bands) == 3 and len(bands.bands[0]) == 4


def test_dsf_and_bragg(bench):
    _, p, pot = bench
    entry = cb.perturbative_gaps(p, pot).entries[0]
    omega = cb.linspace(0.05 * entry.E_B / cb.HBAR, 1.2 * entry.E_B / cb.HBAR, 4096)
    s = cb.dsf_lda(entry.q_n, omega, p, entry.U_n)
    assert [b.sign for b in s.branches] == [-1, 1]
    assert s.weight(0) == pytest.approx(s.weight(1), rel=1e-3)
    tau = 100 * cb.HBAR / entry.E_B
    assert cb.bragg_momentum(s, entry.E_B / cb.HBAR, 0.0, tau) == 0.0
    assert cb.bragg_momentum(s, entry.E_B / cb.HBAR, 1.0, tau) > 0.0


def test_config_errors():
    with pytest.raises(cb.ConfigError) as err:
        cb.parse_config_text("[trap]\nomega_r = 3 m\n")
    assert "expected a frequency" in str(err.value)
    assert issubclass(cb.ConfigError, cb.Error)


def test_run_scenario(tmp_path):
    cfg = cb.parse_config(str(CONFIG_DIR / "benchmark.ini"))
    summary = cb.run_scenario(cfg, "spectrum", str(tmp_path))
    assert summary["command"] == "spectrum"
    on_disk = json.loads((tmp_path / "run_summary.json").read_text())
    assert on_disk["manifest"] == summary["manifest"]
    assert (tmp_path / "gaps.csv").exists()


def test_validate_rows():
    rows = cb.validate_paper()
    assert len(rows) >= 20
    assert all(r.pass_ for r in rows)
    assert all(math.isfinite(r.computed) for r in rows)
