"""Command-line front end: diagnose, run, scan, and gabor verbs.

A run resolves its configuration (JSON file plus flag overrides), computes
the requested dipole series, spectra, RME scans, time-frequency maps, and
minima correlation for each drive axis, and writes plot-ready CSV/JSON
artifacts (and matplotlib figures) into one output directory together with a
manifest of every file and its digest.

Exit codes: 0 success, 2 configuration error, 3 molecule parse error,
4 numerical non-convergence (the optional convergence gate failed).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field as dataclass_field, asdict
from pathlib import Path

import numpy as np

from . import __version__
from .field import LaserField, make_field, diagnostics
from .fixtures import FIXTURE_NAMES, fixture_path
from .ingest import IngestError, load_molecule
from .lewenstein import DipoleTimeSeries, TauGrid, dipole_time_series
from .molecule import Molecule
from .rme_scan import correlate_minima, find_rme_zeros, scan_rme
from .spectrum import (
    HarmonicSpectrum,
    find_envelope_minima,
    gabor_map,
    harmonic_peaks,
    harmonic_polarization,
    retained,
    spectrum_from_dipole,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_CONVERGENCE = 4

QUICK_GRID = {
    "samples_per_cycle": 256,
    "n_cycles": 6,
    "tau_nodes": 384,
    "tau_max_cycles": 1.25,
}


class ConfigError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass
class GridConfig:
    samples_per_cycle: int = 512
    n_cycles: int = 8
    discard_cycles: int = 2
    tau_min: float = 0.05
    tau_max_cycles: float = 1.5
    tau_nodes: int = 640
    epsilon: float = 1e-4

    def validate(self) -> None:
        if self.samples_per_cycle < 4:
            raise ConfigError("samples_per_cycle must be at least 4")
        if self.n_cycles <= self.discard_cycles:
            raise ConfigError("n_cycles must exceed discard_cycles")
        if not 0 < self.tau_min < self.tau_max_cycles * 100:
            raise ConfigError("invalid tau window")
        if self.tau_nodes < 8:
            raise ConfigError("tau_nodes must be at least 8")


@dataclass
class AnalysisConfig:
    spectra: bool = True
    scans: bool = False
    scan_axes: list[str] = dataclass_field(default_factory=lambda: ["x", "y", "z"])
    scan_orders: list[float] = dataclass_field(default_factory=lambda: [7.0, 81.0])
    gabor: bool = False
    gabor_components: list[str] = dataclass_field(default_factory=lambda: ["parallel"])
    polarization: bool = False
    minima_correlation: bool = False
    convergence_check: bool = False
    minima_depth_factor: float = 10.0
    zero_depth_factor: float = 100.0


@dataclass
class RunConfig:
    molecule: str = ""
    ionization_potentials: list[float] | None = None
    orbitals: list[str] = dataclass_field(default_factory=lambda: ["HOMO"])
    superposition: str = "coherent"
    field: dict = dataclass_field(default_factory=lambda: {
        "intensity_w_cm2": 5e14, "wavelength_nm": 800.0,
    })
    drive_axes: list[str] = dataclass_field(default_factory=lambda: ["x"])
    channels: str = "all"
    window: str = "hann"
    grid: GridConfig = dataclass_field(default_factory=GridConfig)
    analyses: AnalysisConfig = dataclass_field(default_factory=AnalysisConfig)
    output_dir: str = "runs/latest"
    plots: bool = True
    quick: bool = False

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(raw)
        if "grid" in data:
            grid_raw = data["grid"]
            bad = set(grid_raw) - set(GridConfig.__dataclass_fields__)
            if bad:
                raise ConfigError(f"unknown grid keys: {sorted(bad)}")
            data["grid"] = GridConfig(**grid_raw)
        if "analyses" in data:
            an_raw = data["analyses"]
            bad = set(an_raw) - set(AnalysisConfig.__dataclass_fields__)
            if bad:
                raise ConfigError(f"unknown analyses keys: {sorted(bad)}")
            data["analyses"] = AnalysisConfig(**an_raw)
        try:
            config = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        config.validate()
        return config

    def validate(self) -> None:
        if not self.molecule:
            raise ConfigError("config needs a molecule (path or 'fixture:<name>')")
        if not self.drive_axes:
            raise ConfigError("at least one drive axis is required")
        for axis in self.drive_axes:
            if axis not in ("x", "y", "z"):
                raise ConfigError(f"unknown drive axis {axis!r}")
        if not self.orbitals:
            raise ConfigError("at least one orbital label is required")
        if self.superposition not in ("coherent", "incoherent"):
            raise ConfigError(f"unknown superposition {self.superposition!r}")
        if self.channels not in ("all", "direct", "transfer"):
            raise ConfigError(f"unknown channel filter {self.channels!r}")
        self.grid.validate()

    def effective_grid(self) -> GridConfig:
        if not self.quick:
            return self.grid
        merged = asdict(self.grid)
        merged.update(QUICK_GRID)
        return GridConfig(**merged)


def resolve_molecule_path(spec: str) -> Path:
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1]
        if name not in FIXTURE_NAMES:
            raise ConfigError(f"unknown fixture {name!r}; available: {FIXTURE_NAMES}")
        return fixture_path(name)
    path = Path(spec)
    if not path.exists():
        raise ConfigError(f"molecule file not found: {spec}")
    return path


def load_config_molecule(config: RunConfig) -> Molecule:
    path = resolve_molecule_path(config.molecule)
    kwargs = {}
    if path.suffix.lower() != ".json" and config.ionization_potentials:
        kwargs["ionization_potentials"] = config.ionization_potentials
    return load_molecule(path, **kwargs)


def build_field(config: RunConfig, axis: str) -> LaserField:
    raw = dict(config.field)
    convention = raw.pop("convention", "semi_infinite")
    allowed = {"intensity_w_cm2", "e0_au", "wavelength_nm", "omega_au"}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"unknown field keys: {sorted(unknown)}")
    try:
        return make_field(polarization=axis, convention=convention, **raw)
    except ValueError as exc:
        raise ConfigError(f"invalid field parameters: {exc}") from None


def build_tau_grid(field: LaserField, grid: GridConfig) -> TauGrid:
    return TauGrid.for_field(
        field,
        tau_min=grid.tau_min,
        tau_max_cycles=grid.tau_max_cycles,
        n_nodes=grid.tau_nodes,
        epsilon=grid.epsilon,
    )


def time_grid(field: LaserField, grid: GridConfig) -> np.ndarray:
    n_samples = grid.samples_per_cycle * grid.n_cycles
    dt = field.period / grid.samples_per_cycle
    return field.turn_on_time + dt * np.arange(1, n_samples + 1)


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    lines = [",".join(header)]
    n = len(columns[0])
    for k in range(n):
        lines.append(",".join(_fmt(float(col[k])) for col in columns))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    digest.update(path.read_bytes())
    return digest.hexdigest()


class RunWriter:
    """Collects output files and assembles the manifest."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.files: list[Path] = []
        self.timings: dict[str, float] = {}

    def register(self, path: Path) -> Path:
        self.files.append(path)
        return path

    def csv(self, name: str, header: list[str], columns: list[np.ndarray]) -> Path:
        path = self.out_dir / name
        write_csv(path, header, columns)
        return self.register(path)

    def json(self, name: str, payload: dict) -> Path:
        path = self.out_dir / name
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")
        return self.register(path)

    def write_manifest(
        self,
        config: RunConfig,
        inputs: dict[str, str],
        status: str = "complete",
        failed_stage: str | None = None,
    ) -> Path:
        manifest = {
            "tool": "molhhg",
            "version": __version__,
            "status": status,
            "failed_stage": failed_stage,
            "config": _config_dict(config),
            "inputs": inputs,
            "outputs": {
                str(p.relative_to(self.out_dir)): sha256_file(p) for p in self.files
            },
            "timings_s": {k: round(v, 3) for k, v in self.timings.items()},
        }
        path = self.out_dir / "manifest.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")
        os.replace(tmp, path)
        return path


def _config_dict(config: RunConfig) -> dict:
    data = asdict(config)
    data["grid"] = asdict(config.effective_grid())
    return data


def _log(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------

def compute_series(
    molecule: Molecule,
    config: RunConfig,
    axis: str,
    grid: GridConfig,
    *,
    orbital_subset: list[str] | None = None,
    tau_nodes_override: int | None = None,
    samples_override: int | None = None,
) -> DipoleTimeSeries:
    field = build_field(config, axis)
    gc = GridConfig(**asdict(grid))
    if tau_nodes_override:
        gc.tau_nodes = tau_nodes_override
    if samples_override:
        gc.samples_per_cycle = samples_override
    tau = build_tau_grid(field, gc)
    times = time_grid(field, gc)
    return dipole_time_series(
        molecule,
        orbital_subset or config.orbitals,
        field,
        times,
        tau,
        config.channels,
    )


def spectra_for_axis(
    molecule: Molecule, config: RunConfig, axis: str, grid: GridConfig
) -> tuple[DipoleTimeSeries, HarmonicSpectrum]:
    """Dipole series and spectrum honoring the orbital superposition mode."""
    if config.superposition == "coherent" or len(config.orbitals) == 1:
        series = compute_series(molecule, config, axis, grid)
        spec = spectrum_from_dipole(retained(series, grid.discard_cycles), config.window)
        return series, spec
    # incoherent: per-orbital runs, intensities added
    total_intensity = None
    series = None
    spec = None
    for label in config.orbitals:
        series = compute_series(molecule, config, axis, grid, orbital_subset=[label])
        spec = spectrum_from_dipole(retained(series, grid.discard_cycles), config.window)
        total_intensity = (
            spec.intensity if total_intensity is None else total_intensity + spec.intensity
        )
    spec = HarmonicSpectrum(
        spec.orders, spec.amplitudes, total_intensity, spec.drive_axis, spec.omega0,
        {**spec.metadata, "superposition": "incoherent"},
    )
    return series, spec


def convergence_gate(
    molecule: Molecule,
    config: RunConfig,
    axis: str,
    grid: GridConfig,
    base_spectrum: HarmonicSpectrum,
    tolerance: float = 0.05,
) -> dict:
    """Doubling tau nodes and t samples must move plateau peaks < 5% each."""
    field = build_field(config, axis)
    ip = min(
        molecule.orbitals[i].ionization_potential
        for i in molecule.orbitals_by_label(config.orbitals)
    )
    cutoff = (ip + 3.17 * field.amplitude**2 / (4 * field.omega**2)) / field.omega
    order_hi = min(int(cutoff) - 4, base_spectrum.orders[-1] - 2)
    peak_orders = np.arange(11, order_hi, 2)

    def plateau(spec: HarmonicSpectrum) -> np.ndarray:
        return harmonic_peaks(spec, axis, peak_orders)

    base = plateau(base_spectrum)
    valid = base > 0
    if peak_orders.size == 0 or not valid.any():
        raise ConvergenceError(
            "no plateau signal available for the convergence comparison"
        )
    report = {}
    for stage, kwargs in (
        ("tau_doubling", {"tau_nodes_override": 2 * grid.tau_nodes}),
        ("time_doubling", {"samples_override": 2 * grid.samples_per_cycle}),
    ):
        series = compute_series(molecule, config, axis, grid, **kwargs)
        spec = spectrum_from_dipole(retained(series, grid.discard_cycles), config.window)
        refined = plateau(spec)
        scale = np.median(base[valid])
        rel = (
            np.abs(refined - base)[valid]
            / np.maximum(base[valid], 0.02 * scale)
        )
        worst = float(np.median(rel))
        report[stage] = worst
        if worst > tolerance:
            raise ConvergenceError(
                f"{stage}: median plateau peak change {worst:.1%} exceeds "
                f"{tolerance:.0%}; refine the grids"
            )
    return report


def run_pipeline(config: RunConfig, out_dir: Path) -> Path:
    writer = RunWriter(out_dir)
    inputs: dict[str, str] = {}
    stage = "setup"
    try:
        mol_path = resolve_molecule_path(config.molecule)
        inputs[str(mol_path)] = sha256_file(mol_path)
        t0 = time.perf_counter()
        stage = "parse"
        molecule = load_config_molecule(config)
        writer.timings["parse"] = time.perf_counter() - t0
        try:
            molecule.orbitals_by_label(config.orbitals)
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
        grid = config.effective_grid()

        all_minima = {}
        spectra = {}
        for axis in config.drive_axes:
            stage = f"dipole[{axis}]"
            _log(f"molhhg: computing dipole, drive {axis} "
                 f"({grid.samples_per_cycle}/cycle x {grid.n_cycles} cycles, "
                 f"{grid.tau_nodes} tau nodes)")
            t0 = time.perf_counter()
            series, spectrum = spectra_for_axis(molecule, config, axis, grid)
            writer.timings[stage] = time.perf_counter() - t0
            _log(f"molhhg: drive {axis} done in {writer.timings[stage]:.1f} s")

            writer.csv(
                f"dipole_{axis}.csv",
                ["t", "dx", "dy", "dz"],
                [series.times] + [series.dipole[:, c].real for c in range(3)],
            )
            field = build_field(config, axis)
            diag = diagnostics(
                field, molecule, molecule.orbitals_by_label(config.orbitals)[0]
            )

            if config.analyses.spectra:
                stage = f"spectrum[{axis}]"
                spectra[axis] = spectrum
                for resp in ("x", "y", "z"):
                    writer.csv(
                        f"spectrum_{axis}_{resp}.csv",
                        ["order", "intensity", "amp_re", "amp_im"],
                        [
                            spectrum.orders,
                            spectrum.component(resp),
                            spectrum.amplitudes[:, "xyz".index(resp)].real,
                            spectrum.amplitudes[:, "xyz".index(resp)].imag,
                        ],
                    )
                    if config.plots:
                        from . import plots

                        plots.plot_spectrum(
                            spectrum, resp,
                            writer.register(writer.out_dir / f"spectrum_{axis}_{resp}.png"),
                            cutoff_order=diag.cutoff_order,
                        )
                minima = find_envelope_minima(
                    spectrum, axis,
                    depth_factor=config.analyses.minima_depth_factor,
                    order_hi=diag.cutoff_order,
                )
                all_minima[axis] = minima
            if config.plots:
                from . import plots

                plots.plot_dipole(
                    series, writer.register(writer.out_dir / f"dipole_{axis}.png")
                )

            if config.analyses.gabor:
                stage = f"gabor[{axis}]"
                components = [
                    axis if c == "parallel" else c
                    for c in config.analyses.gabor_components
                ]
                for comp in dict.fromkeys(components):
                    tf = gabor_map(
                        retained(series, grid.discard_cycles), comp,
                        max_order=diag.cutoff_order + 15,
                    )
                    writer.csv(
                        f"gabor_{axis}_{comp}.csv",
                        ["t"] + [f"o{_fmt(float(o))}" for o in tf.orders],
                        [tf.times] + [tf.magnitude[:, k] for k in range(tf.orders.size)],
                    )
                    if config.plots:
                        from . import plots

                        plots.plot_gabor(
                            tf,
                            writer.register(
                                writer.out_dir / f"gabor_{axis}_{comp}.png"
                            ),
                            period=field.period,
                        )

            if config.analyses.polarization and config.analyses.spectra:
                stage = f"polarization[{axis}]"
                orders = np.arange(11, int(diag.cutoff_order), 2)
                ellipses = [harmonic_polarization(spectrum, float(o)) for o in orders]
                writer.csv(
                    f"polarization_{axis}.csv",
                    ["order", "ellipticity", "angle_from_drive_deg",
                     "major_x", "major_y", "major_z"],
                    [
                        orders.astype(float),
                        np.array([e.ellipticity for e in ellipses]),
                        np.array([e.angle_from_drive_deg for e in ellipses]),
                        np.array([e.major_axis[0] for e in ellipses]),
                        np.array([e.major_axis[1] for e in ellipses]),
                        np.array([e.major_axis[2] for e in ellipses]),
                    ],
                )

        zeros_payload: dict = {}
        if config.analyses.scans:
            stage = "scan"
            field = build_field(config, config.drive_axes[0])
            zeros_by_axis = {}
            for scan_axis in config.analyses.scan_axes:
                scan = scan_rme(
                    molecule, config.orbitals, field, scan_axis,
                    tuple(config.analyses.scan_orders),
                    superposition=config.superposition,
                )
                writer.csv(
                    f"scan_{scan_axis}.csv",
                    ["order", "pi", "mag_x", "mag_y", "mag_z"],
                    [scan.orders, scan.pi_values]
                    + [scan.component(c) for c in "xyz"],
                )
                zeros = []
                for comp in "xyz":
                    zeros.extend(
                        find_rme_zeros(
                            scan, comp,
                            depth_factor=config.analyses.zero_depth_factor,
                        )
                    )
                zeros_by_axis[scan_axis] = zeros
                if config.plots:
                    from . import plots

                    plots.plot_scan(
                        scan,
                        writer.register(writer.out_dir / f"scan_{scan_axis}.png"),
                        zeros=zeros,
                    )
            zeros_payload["zeros"] = [
                {
                    "scanned_axis": z.scanned_axis,
                    "component": z.component,
                    "order": z.order,
                    "magnitude": z.magnitude,
                }
                for axis_zeros in zeros_by_axis.values()
                for z in axis_zeros
            ]
            if config.analyses.minima_correlation and all_minima:
                stage = "correlation"
                all_zeros = [z for zs in zeros_by_axis.values() for z in zs]
                zeros_payload["correlation"] = {
                    axis: correlate_minima(all_zeros, minima).to_dict()
                    for axis, minima in all_minima.items()
                }
        if zeros_payload:
            writer.json("zeros.json", zeros_payload)

        if config.analyses.convergence_check:
            stage = "convergence"
            axis = config.drive_axes[0]
            _log("molhhg: running convergence gate (doubled tau nodes and t samples)")
            t0 = time.perf_counter()
            report = convergence_gate(molecule, config, axis, grid, spectra[axis])
            writer.timings[stage] = time.perf_counter() - t0
            writer.json("convergence.json", {"axis": axis, "median_change": report})

        stage = "manifest"
        manifest = writer.write_manifest(config, inputs)
        _log(f"molhhg: run complete, manifest at {manifest}")
        return manifest
    except Exception as exc:
        writer.write_manifest(config, inputs, status="failed", failed_stage=stage)
        _log(f"molhhg: stage {stage} failed: {exc}")
        raise


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def _add_molecule_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="JSON", help="run configuration file")
    parser.add_argument(
        "--molecule",
        metavar="SRC",
        help=f"molecule path or fixture:<name> ({', '.join(FIXTURE_NAMES)})",
    )
    parser.add_argument("--orbitals", metavar="L1,L2", help="orbital labels")
    parser.add_argument("--intensity", type=float, metavar="W_CM2")
    parser.add_argument("--wavelength", type=float, metavar="NM")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    raw: dict = {}
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {args.config}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    config = RunConfig.from_dict(raw) if raw else RunConfig(molecule="fixture:ring")
    if args.molecule:
        config.molecule = args.molecule
    if getattr(args, "orbitals", None):
        config.orbitals = [s.strip() for s in args.orbitals.split(",") if s.strip()]
    if getattr(args, "intensity", None):
        config.field["intensity_w_cm2"] = args.intensity
        config.field.pop("e0_au", None)
    if getattr(args, "wavelength", None):
        config.field["wavelength_nm"] = args.wavelength
        config.field.pop("omega_au", None)
    if getattr(args, "drive", None):
        config.drive_axes = [s.strip() for s in args.drive.split(",") if s.strip()]
    if getattr(args, "output_dir", None):
        config.output_dir = args.output_dir
    if getattr(args, "quick", False):
        config.quick = True
    if getattr(args, "no_plots", False):
        config.plots = False
    if getattr(args, "check_convergence", False):
        config.analyses.convergence_check = True
    if getattr(args, "workers", None):
        os.environ["MOLHHG_WORKERS"] = str(args.workers)
    config.validate()
    return config


def cmd_diagnose(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    molecule = load_config_molecule(config)
    rows = []
    for axis in config.drive_axes or ["x"]:
        field = build_field(config, axis)
        for k, orb in enumerate(molecule.orbitals):
            d = diagnostics(field, molecule, k)
            rows.append(
                {
                    "drive": axis,
                    "orbital": orb.label,
                    "ip_hartree": orb.ionization_potential,
                    "up_hartree": d.up,
                    "alpha0_bohr": d.alpha0,
                    "q": d.q_parameter,
                    "cutoff_order": d.cutoff_order,
                }
            )
        break  # diagnostics do not depend on the drive direction
    if args.json:
        print(json.dumps({"molecule": molecule.name, "diagnostics": rows}, indent=2))
    else:
        print(f"molecule: {molecule.name}")
        print(f"{'orbital':9s} {'Ip':>8s} {'Up':>8s} {'alpha0':>8s} {'Q':>7s} {'cutoff':>8s}")
        for r in rows:
            print(
                f"{r['orbital']:9s} {r['ip_hartree']:8.4f} {r['up_hartree']:8.4f} "
                f"{r['alpha0_bohr']:8.2f} {r['q']:7.3f} {r['cutoff_order']:8.2f}"
            )
        if rows and rows[0]["q"] > 0.5:
            print("warning: Q exceeds 0.5; the length-gauge multi-center model "
                  "may develop translation artifacts", file=sys.stderr)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    run_pipeline(config, Path(config.output_dir))
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    config.analyses.scans = True
    config.analyses.spectra = False
    config.analyses.gabor = False
    config.analyses.convergence_check = False
    if args.axes:
        config.analyses.scan_axes = [s.strip() for s in args.axes.split(",")]
    if args.orders:
        lo, hi = args.orders.split(":")
        config.analyses.scan_orders = [float(lo), float(hi)]
    molecule = load_config_molecule(config)
    writer = RunWriter(Path(config.output_dir))
    inputs = {config.molecule: sha256_file(resolve_molecule_path(config.molecule))}
    field = build_field(config, config.drive_axes[0])
    payload = []
    for scan_axis in config.analyses.scan_axes:
        scan = scan_rme(
            molecule, config.orbitals, field, scan_axis,
            tuple(config.analyses.scan_orders), superposition=config.superposition,
        )
        writer.csv(
            f"scan_{scan_axis}.csv",
            ["order", "pi", "mag_x", "mag_y", "mag_z"],
            [scan.orders, scan.pi_values] + [scan.component(c) for c in "xyz"],
        )
        zeros = []
        for comp in "xyz":
            zeros.extend(find_rme_zeros(scan, comp))
        payload.extend(
            {
                "scanned_axis": z.scanned_axis,
                "component": z.component,
                "order": z.order,
                "magnitude": z.magnitude,
            }
            for z in zeros
        )
        if config.plots:
            from . import plots

            plots.plot_scan(
                scan, writer.register(writer.out_dir / f"scan_{scan_axis}.png"),
                zeros=zeros,
            )
    writer.json("zeros.json", {"zeros": payload})
    writer.write_manifest(config, inputs)
    return EXIT_OK


def cmd_gabor(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    config.analyses.gabor = True
    config.analyses.spectra = False
    config.analyses.scans = False
    config.analyses.convergence_check = False
    if args.component:
        config.analyses.gabor_components = [args.component]
    run_pipeline(config, Path(config.output_dir))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="molhhg",
        description="Multi-center strong-field simulator for molecular "
        "high-order harmonic spectra.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    diag = sub.add_parser("diagnose", help="Up, quiver radius, Q, and cutoff per orbital.")
    _add_molecule_flags(diag)
    diag.add_argument("--json", action="store_true", help="machine-readable output")
    diag.set_defaults(func=cmd_diagnose)

    run = sub.add_parser("run", help="Full run: dipole, spectra, scans, maps, manifest.")
    _add_molecule_flags(run)
    run.add_argument("--drive", metavar="x,y,z", help="drive axes to run")
    run.add_argument("--output-dir", metavar="DIR")
    run.add_argument("--quick", action="store_true", help="reduced grids for CI/desk runs")
    run.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    run.add_argument("--check-convergence", action="store_true",
                     help="double the grids and verify plateau stability")
    run.add_argument("--workers", type=int, metavar="N")
    run.set_defaults(func=cmd_run)

    scan = sub.add_parser("scan", help="RME component scans and zero finding.")
    _add_molecule_flags(scan)
    scan.add_argument("--axes", metavar="x,y,z")
    scan.add_argument("--orders", metavar="LO:HI")
    scan.add_argument("--output-dir", metavar="DIR")
    scan.add_argument("--no-plots", action="store_true")
    scan.set_defaults(func=cmd_scan)

    gabor = sub.add_parser("gabor", help="Time-frequency (Gabor) maps of the dipole.")
    _add_molecule_flags(gabor)
    gabor.add_argument("--drive", metavar="x,y,z")
    gabor.add_argument("--component", metavar="x|y|z|parallel")
    gabor.add_argument("--output-dir", metavar="DIR")
    gabor.add_argument("--quick", action="store_true")
    gabor.add_argument("--no-plots", action="store_true")
    gabor.add_argument("--workers", type=int, metavar="N")
    gabor.set_defaults(func=cmd_gabor)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _log(f"molhhg: configuration error: {exc}")
        return EXIT_CONFIG
    except IngestError as exc:
        _log(f"molhhg: molecule parse error: {exc}")
        return EXIT_PARSE
    except ConvergenceError as exc:
        _log(f"molhhg: convergence gate failed: {exc}")
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
