import json
from pathlib import Path

import numpy as np
import pytest

from molhhg.cli import main
from molhhg.ingest import write_native
from conftest import h2_like

TINY_GRID = {
    "samples_per_cycle": 64,
    "n_cycles": 3,
    "discard_cycles": 1,
    "tau_min": 0.05,
    "tau_max_cycles": 0.6,
    "tau_nodes": 48,
    "epsilon": 1e-4,
}


@pytest.fixture
def toy_config(tmp_path):
    molecule = tmp_path / "toy.json"
    molecule.write_text(write_native(h2_like()))
    config = {
        "molecule": str(molecule),
        "orbitals": ["HOMO"],
        "drive_axes": ["x"],
        "grid": TINY_GRID,
        "analyses": {
            "spectra": True,
            "scans": True,
            "scan_orders": [12, 40],
            "minima_correlation": True,
        },
        "output_dir": str(tmp_path / "out"),
        "plots": False,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path, tmp_path


class TestDiagnose:
    def test_table_output(self, capsys):
        assert main(["diagnose", "--molecule", "fixture:ring"]) == 0
        out = capsys.readouterr().out
        assert "HOMO" in out and "cutoff" in out

    def test_json_output(self, capsys):
        assert main(["diagnose", "--molecule", "fixture:bowl", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        rows = payload["diagnostics"]
        assert rows[0]["q"] == pytest.approx(0.165, abs=0.001)
        assert rows[0]["cutoff_order"] == pytest.approx(67.38, abs=0.01)

    def test_unknown_fixture_is_config_error(self):
        assert main(["diagnose", "--molecule", "fixture:nonexistent"]) == 2


class TestRun:
    def test_full_pipeline_outputs_and_manifest(self, toy_config):
        config, tmp_path = toy_config
        assert main(["run", "--config", str(config)]) == 0
        out = tmp_path / "out"
        expected = {
            "dipole_x.csv",
            "spectrum_x_x.csv",
            "spectrum_x_y.csv",
            "spectrum_x_z.csv",
            "scan_x.csv",
            "scan_y.csv",
            "scan_z.csv",
            "zeros.json",
            "manifest.json",
        }
        assert {p.name for p in out.iterdir()} == expected

        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["status"] == "complete"
        # every output file is listed with its digest; no orphans
        listed = set(manifest["outputs"]) | {"manifest.json"}
        assert {p.name for p in out.iterdir()} == listed
        import hashlib

        for name, digest in manifest["outputs"].items():
            actual = hashlib.sha256((out / name).read_bytes()).hexdigest()
            assert actual == digest
        assert manifest["config"]["channels"] == "all"
        assert any(manifest["inputs"])

    def test_byte_identical_reruns(self, toy_config, tmp_path):
        config, base = toy_config
        assert main(["run", "--config", str(config)]) == 0
        first = {
            p.name: p.read_bytes()
            for p in (base / "out").iterdir()
            if p.suffix == ".csv"
        }
        assert main(["run", "--config", str(config)]) == 0
        for p in (base / "out").iterdir():
            if p.suffix == ".csv":
                assert p.read_bytes() == first[p.name], p.name

    def test_plots_rendered_when_enabled(self, toy_config):
        config, tmp_path = toy_config
        raw = json.loads(config.read_text())
        raw["plots"] = True
        raw["analyses"]["scans"] = False
        raw["output_dir"] = str(tmp_path / "out_plots")
        config.write_text(json.dumps(raw))
        assert main(["run", "--config", str(config)]) == 0
        out = tmp_path / "out_plots"
        pngs = {p.name for p in out.iterdir() if p.suffix == ".png"}
        assert {"dipole_x.png", "spectrum_x_x.png", "spectrum_x_y.png",
                "spectrum_x_z.png"} <= pngs
        manifest = json.loads((out / "manifest.json").read_text())
        assert "spectrum_x_x.png" in manifest["outputs"]

    def test_zero_amplitude_field_is_success(self, toy_config):
        config, tmp_path = toy_config
        raw = json.loads(config.read_text())
        raw["field"] = {"e0_au": 0.0, "wavelength_nm": 800}
        raw["analyses"] = {"spectra": True}
        raw["output_dir"] = str(tmp_path / "out_zero")
        config.write_text(json.dumps(raw))
        assert main(["run", "--config", str(config)]) == 0
        data = np.loadtxt(tmp_path / "out_zero" / "spectrum_x_x.csv",
                          delimiter=",", skiprows=1)
        assert np.all(data[:, 1] == 0.0)

    def test_unknown_config_key_exit_2(self, toy_config):
        config, _ = toy_config
        raw = json.loads(config.read_text())
        raw["mystery"] = 1
        config.write_text(json.dumps(raw))
        assert main(["run", "--config", str(config)]) == 2

    def test_bad_molecule_exit_3(self, toy_config, tmp_path):
        config, base = toy_config
        raw = json.loads(config.read_text())
        bad = base / "bad.json"
        bad.write_text("{ not json")
        raw["molecule"] = str(bad)
        config.write_text(json.dumps(raw))
        assert main(["run", "--config", str(config)]) == 3

    def test_failed_run_writes_partial_manifest(self, toy_config, tmp_path):
        config, base = toy_config
        raw = json.loads(config.read_text())
        bad = base / "bad.json"
        bad.write_text("{ not json")
        raw["molecule"] = str(bad)
        raw["output_dir"] = str(base / "out_fail")
        config.write_text(json.dumps(raw))
        assert main(["run", "--config", str(config)]) == 3
        manifest = json.loads((base / "out_fail" / "manifest.json").read_text())
        assert manifest["status"] == "failed"
        assert manifest["failed_stage"] == "parse"

    def test_convergence_gate_failure_exit_4(self, toy_config, tmp_path):
        config, base = toy_config
        raw = json.loads(config.read_text())
        raw["grid"]["tau_nodes"] = 8      # deliberately unconverged
        raw["grid"]["tau_max_cycles"] = 1.2
        raw["analyses"] = {"spectra": True, "convergence_check": True}
        raw["output_dir"] = str(base / "out_gate")
        config.write_text(json.dumps(raw))
        code = main(["run", "--config", str(config)])
        assert code == 4
        manifest = json.loads((base / "out_gate" / "manifest.json").read_text())
        assert manifest["status"] == "failed"
        assert manifest["failed_stage"] == "convergence"


class TestScanVerb:
    def test_scan_outputs(self, tmp_path):
        out = tmp_path / "scan_out"
        code = main([
            "scan", "--molecule", "fixture:ring", "--axes", "x",
            "--orders", "9:70", "--output-dir", str(out), "--no-plots",
        ])
        assert code == 0
        files = {p.name for p in out.iterdir()}
        assert files == {"scan_x.csv", "zeros.json", "manifest.json"}
        zeros = json.loads((out / "zeros.json").read_text())
        x_zeros = [z["order"] for z in zeros["zeros"]
                   if z["component"] == "x" and z["scanned_axis"] == "x"]
        assert any(37 <= z <= 47 for z in x_zeros)
        assert any(51 <= z <= 65 for z in x_zeros)


class TestGaborVerb:
    def test_gabor_outputs(self, toy_config):
        config, tmp_path = toy_config
        raw = json.loads(config.read_text())
        raw["analyses"] = {"gabor": True, "spectra": False}
        raw["output_dir"] = str(tmp_path / "out_gabor")
        config.write_text(json.dumps(raw))
        code = main(["gabor", "--config", str(config), "--component", "parallel"])
        assert code == 0
        out = tmp_path / "out_gabor"
        assert (out / "gabor_x_x.csv").exists()
        header = (out / "gabor_x_x.csv").read_text().splitlines()[0]
        assert header.startswith("t,o")


class TestOrbitalValidation:
    def test_unknown_orbital_label_exit_2(self, toy_config):
        config, _ = toy_config
        raw = json.loads(config.read_text())
        raw["orbitals"] = ["LUMO"]
        config.write_text(json.dumps(raw))
        assert main(["run", "--config", str(config)]) == 2


class TestIncoherentSuperposition:
    def test_incoherent_spectra_add_in_intensity(self, toy_config, tmp_path):
        from molhhg.cli import RunConfig, GridConfig, spectra_for_axis, load_config_molecule
        from molhhg.molecule import MolecularOrbital, Molecule
        from molhhg.ingest import write_native
        import numpy as np

        base = h2_like()
        orb2 = MolecularOrbital(np.array([0.6, -0.2]), 0.7, "HOMO-1")
        mol2 = Molecule(base.centers, base.orbitals + (orb2,))
        path = tmp_path / "two.json"
        path.write_text(write_native(mol2))
        config = RunConfig(
            molecule=str(path),
            orbitals=["HOMO", "HOMO-1"],
            superposition="incoherent",
            drive_axes=["x"],
            grid=GridConfig(**TINY_GRID),
        )
        molecule = load_config_molecule(config)
        _, spec_inc = spectra_for_axis(molecule, config, "x", config.grid)
        totals = None
        for label in ("HOMO", "HOMO-1"):
            single = RunConfig(
                molecule=str(path), orbitals=[label], drive_axes=["x"],
                grid=GridConfig(**TINY_GRID),
            )
            _, spec_one = spectra_for_axis(molecule, single, "x", single.grid)
            totals = spec_one.intensity if totals is None else totals + spec_one.intensity
        np.testing.assert_allclose(spec_inc.intensity, totals, rtol=1e-12, atol=1e-30)
