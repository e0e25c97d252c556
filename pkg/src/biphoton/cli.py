"""Command-line front end: scans, classification, CHSH, and cross-checks.

Configurations are JSON files with four blocks (source, grid, scan,
analysis); every physical quantity carries its unit as a key suffix
(_nm, _fs, _rad, _rad_per_s) and unknown keys are rejected by full path.
Bundled configurations ship with the package and are addressed by name.
All outputs are deterministic: identical configuration, identical bytes.

Exit codes: 0 success, 2 configuration error, 3 invariant failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .beamsplitter import (
    apply_path1_delay,
    coherence_time,
    coincidence_probability,
    delay_scan,
)
from .core import FrequencyGrid, TwoPhotonState, wavelength_to_angular_frequency
from .correlation import DEFAULT_CHSH_ANGLES, chsh
from .oracle import apply_bs_exact, discretize, outcome_probabilities, reconstruct
from .sources import (
    FilterParams,
    SpdcParams,
    apply_filters,
    build_antisymmetric,
    build_bell_psi_minus,
    build_two_color,
    build_type2_ultrafast,
    gaussian_line,
    type2_joint_envelope,
)
from .symmetry import DEFAULT_CLASSIFICATION_THRESHOLD, classify

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3

_FS = 1e-15
_NM = 1e-9

#: run_oracle_check rejects relative deviations above this.
ORACLE_DEVIATION_LIMIT = 1e-6
ORACLE_UNITARITY_LIMIT = 1e-12


class ConfigError(ValueError):
    """A configuration file could not be loaded or validated."""


def _number(block: dict, path: str, key: str, *, positive=False, nonnegative=False):
    if key not in block:
        raise ConfigError(f"missing key {path}.{key}")
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path}.{key} must be finite, got {value!r}")
    if positive and value <= 0.0:
        raise ConfigError(f"{path}.{key} must be positive, got {value!r}")
    if nonnegative and value < 0.0:
        raise ConfigError(f"{path}.{key} must be nonnegative, got {value!r}")
    return value


def _integer(block: dict, path: str, key: str, *, minimum: int):
    if key not in block:
        raise ConfigError(f"missing key {path}.{key}")
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{path}.{key} must be at least {minimum}, got {value}")
    return value


def _reject_unknown(block: dict, path: str, allowed) -> None:
    for key in block:
        if key not in allowed:
            raise ConfigError(f"unknown key {path}.{key}")


@dataclass(frozen=True)
class ScanSettings:
    delay_min: float
    delay_max: float
    n_delays: int

    def delays(self) -> np.ndarray:
        return np.linspace(self.delay_min, self.delay_max, self.n_delays)


@dataclass(frozen=True)
class AnalysisSettings:
    chsh_angles: tuple[float, float, float, float]
    classification_threshold: float
    mode_overlap_epsilon: float


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated configuration with all quantities converted to SI."""

    description: str
    source: dict
    grid_center: float
    grid_half_width: float
    grid_points: int
    scan: ScanSettings
    analysis: AnalysisSettings

    def frequency_grid(self, n_points: int | None = None) -> FrequencyGrid:
        return FrequencyGrid.centered(
            self.grid_center, self.grid_half_width, n_points or self.grid_points
        )

    def build_state(self, n_points: int | None = None) -> TwoPhotonState:
        grid = self.frequency_grid(n_points)
        return _build_source(self.source, grid)


def _parse_filter(block, path: str) -> FilterParams:
    if not isinstance(block, dict):
        raise ConfigError(f"{path} must be an object")
    _reject_unknown(block, path, {"center_wavelength_nm", "fwhm_nm", "shape"})
    shape = block.get("shape", "gaussian")
    if shape not in ("gaussian", "tophat"):
        raise ConfigError(f"{path}.shape must be 'gaussian' or 'tophat', got {shape!r}")
    return FilterParams(
        center_wavelength=_number(block, path, "center_wavelength_nm", positive=True) * _NM,
        fwhm=_number(block, path, "fwhm_nm", positive=True) * _NM,
        shape=shape,
    )


def _parse_spdc_params(block, path: str, *, with_phase: bool) -> SpdcParams:
    kwargs = dict(
        pump_center_wavelength=_number(block, path, "pump_center_wavelength_nm", positive=True) * _NM,
        pump_duration_fwhm=_number(block, path, "pump_duration_fs", positive=True) * _FS,
        sigma_h=_number(block, path, "sigma_h_rad_per_s", positive=True),
        sigma_v=_number(block, path, "sigma_v_rad_per_s", positive=True),
        t_h=0.0,
        t_v=_number(block, path, "walkoff_fs") * _FS,
    )
    if with_phase:
        kwargs["phi"] = _number(block, path, "phase_rad")
        kwargs["extra_group_delay_arm2"] = (
            _number(block, path, "extra_group_delay_arm2_fs") * _FS
        )
    return SpdcParams(**kwargs)


_SOURCE_KEYS = {
    "type2_ultrafast": {
        "type",
        "pump_center_wavelength_nm",
        "pump_duration_fs",
        "sigma_h_rad_per_s",
        "sigma_v_rad_per_s",
        "walkoff_fs",
        "phase_rad",
        "extra_group_delay_arm2_fs",
        "filter",
    },
    "antisymmetric": {
        "type",
        "pump_center_wavelength_nm",
        "pump_duration_fs",
        "sigma_h_rad_per_s",
        "sigma_v_rad_per_s",
        "walkoff_fs",
        "filter",
    },
    "bell_psi_minus": {
        "type",
        "center_offset1_rad_per_s",
        "sigma1_rad_per_s",
        "center_offset2_rad_per_s",
        "sigma2_rad_per_s",
    },
    "two_color": {
        "type",
        "case",
        "red_offset_rad_per_s",
        "blue_offset_rad_per_s",
        "bandwidth_rad_per_s",
    },
}


def _parse_source(block, path: str) -> dict:
    if not isinstance(block, dict):
        raise ConfigError(f"{path} must be an object")
    stype = block.get("type")
    if stype not in _SOURCE_KEYS:
        raise ConfigError(
            f"{path}.type must be one of {sorted(_SOURCE_KEYS)}, got {stype!r}"
        )
    _reject_unknown(block, path, _SOURCE_KEYS[stype])
    parsed: dict = {"type": stype}
    if stype in ("type2_ultrafast", "antisymmetric"):
        parsed["params"] = _parse_spdc_params(
            block, path, with_phase=(stype == "type2_ultrafast")
        )
        parsed["filter"] = (
            _parse_filter(block["filter"], f"{path}.filter") if "filter" in block else None
        )
    elif stype == "bell_psi_minus":
        parsed["center_offset1"] = _number(block, path, "center_offset1_rad_per_s")
        parsed["sigma1"] = _number(block, path, "sigma1_rad_per_s", positive=True)
        parsed["center_offset2"] = _number(block, path, "center_offset2_rad_per_s")
        parsed["sigma2"] = _number(block, path, "sigma2_rad_per_s", positive=True)
    else:
        case = block.get("case")
        if case not in ("i", "ii"):
            raise ConfigError(f"{path}.case must be 'i' or 'ii', got {case!r}")
        parsed["case"] = case
        parsed["red_offset"] = _number(block, path, "red_offset_rad_per_s")
        parsed["blue_offset"] = _number(block, path, "blue_offset_rad_per_s")
        parsed["bandwidth"] = _number(block, path, "bandwidth_rad_per_s", positive=True)
    return parsed


def _build_source(source: dict, grid: FrequencyGrid) -> TwoPhotonState:
    stype = source["type"]
    center = grid_center_of(grid)
    if stype == "bell_psi_minus":
        g1 = gaussian_line(grid, center + source["center_offset1"], source["sigma1"])
        g2 = gaussian_line(grid, center + source["center_offset2"], source["sigma2"])
        return build_bell_psi_minus(g1, g2, grid)
    if stype == "two_color":
        return build_two_color(
            source["case"],
            center + source["red_offset"],
            center + source["blue_offset"],
            source["bandwidth"],
            grid,
        )
    if stype == "type2_ultrafast":
        state = build_type2_ultrafast(source["params"], grid)
    else:
        state = build_antisymmetric(type2_joint_envelope(source["params"], grid))
    if source.get("filter") is not None:
        state = apply_filters(state, source["filter"])
    return state


def grid_center_of(grid: FrequencyGrid) -> float:
    return 0.5 * (grid.omega_min + grid.omega_max)


def parse_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("configuration root must be an object")
    _reject_unknown(raw, "<root>", {"description", "source", "grid", "scan", "analysis"})
    for required in ("source", "grid", "scan"):
        if required not in raw:
            raise ConfigError(f"missing block {required}")
    description = raw.get("description", "")
    if not isinstance(description, str):
        raise ConfigError("description must be a string")

    grid_block = raw["grid"]
    if not isinstance(grid_block, dict):
        raise ConfigError("grid must be an object")
    _reject_unknown(
        grid_block, "grid", {"center_wavelength_nm", "half_width_rad_per_s", "n_points"}
    )
    grid_center = wavelength_to_angular_frequency(
        _number(grid_block, "grid", "center_wavelength_nm", positive=True) * _NM
    )
    grid_half_width = _number(grid_block, "grid", "half_width_rad_per_s", positive=True)
    grid_points = _integer(grid_block, "grid", "n_points", minimum=2)

    scan_block = raw["scan"]
    if not isinstance(scan_block, dict):
        raise ConfigError("scan must be an object")
    _reject_unknown(scan_block, "scan", {"delay_min_fs", "delay_max_fs", "n_delays"})
    delay_min = _number(scan_block, "scan", "delay_min_fs") * _FS
    delay_max = _number(scan_block, "scan", "delay_max_fs") * _FS
    if delay_min >= delay_max:
        raise ConfigError("scan.delay_min_fs must be below scan.delay_max_fs")
    scan = ScanSettings(
        delay_min=delay_min,
        delay_max=delay_max,
        n_delays=_integer(scan_block, "scan", "n_delays", minimum=2),
    )

    analysis_block = raw.get("analysis", {})
    if not isinstance(analysis_block, dict):
        raise ConfigError("analysis must be an object")
    _reject_unknown(
        analysis_block,
        "analysis",
        {"chsh_angles_rad", "classification_threshold", "mode_overlap_epsilon"},
    )
    angles = analysis_block.get("chsh_angles_rad", list(DEFAULT_CHSH_ANGLES))
    if (
        not isinstance(angles, list)
        or len(angles) != 4
        or any(isinstance(a, bool) or not isinstance(a, (int, float)) for a in angles)
    ):
        raise ConfigError("analysis.chsh_angles_rad must be a list of 4 numbers")
    threshold = DEFAULT_CLASSIFICATION_THRESHOLD
    if "classification_threshold" in analysis_block:
        threshold = _number(analysis_block, "analysis", "classification_threshold", positive=True)
    epsilon = 1.0
    if "mode_overlap_epsilon" in analysis_block:
        epsilon = _number(analysis_block, "analysis", "mode_overlap_epsilon", nonnegative=True)
        if epsilon > 1.0:
            raise ConfigError("analysis.mode_overlap_epsilon must lie in [0, 1]")
    analysis = AnalysisSettings(
        chsh_angles=tuple(float(a) for a in angles),
        classification_threshold=threshold,
        mode_overlap_epsilon=epsilon,
    )

    return ExperimentConfig(
        description=description,
        source=_parse_source(raw["source"], "source"),
        grid_center=grid_center,
        grid_half_width=grid_half_width,
        grid_points=grid_points,
        scan=scan,
        analysis=analysis,
    )


def _preset_root():
    return resources.files("biphoton").joinpath("presets")


def list_presets() -> list[tuple[str, str]]:
    """Bundled configuration names with their one-line descriptions."""
    entries = []
    for item in _preset_root().iterdir():
        if item.name.endswith(".json"):
            raw = json.loads(item.read_text(encoding="utf-8"))
            entries.append((item.name[: -len(".json")], raw.get("description", "")))
    return sorted(entries)


def load_config(name_or_path: str) -> ExperimentConfig:
    """Load a configuration from a file path or a bundled preset name."""
    path = Path(name_or_path)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    else:
        candidate = _preset_root().joinpath(
            name_or_path if name_or_path.endswith(".json") else name_or_path + ".json"
        )
        if not candidate.is_file():
            known = ", ".join(name for name, _ in list_presets())
            raise ConfigError(
                f"no such config file or preset: {name_or_path!r} (presets: {known})"
            )
        text = candidate.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {name_or_path!r}: {exc}") from exc
    return parse_config(raw)


def _fmt(x: float) -> str:
    # 12 significant digits, scientific notation.
    return f"{x:.11e}"


def _round_for_report(x: float) -> float:
    return float(_fmt(x))


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def run_scan(config: ExperimentConfig, out: Path, *, grid_points=None, epsilon=None) -> int:
    epsilon = config.analysis.mode_overlap_epsilon if epsilon is None else epsilon
    state = config.build_state(grid_points)
    curve = delay_scan(state, config.scan.delays(), mode_overlap=epsilon)
    lines = ["delay_s,normalized_rate"]
    lines.extend(
        f"{_fmt(float(d))},{_fmt(float(r))}" for d, r in zip(curve.delays, curve.rates)
    )
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    report_path = out.with_suffix(".report.json")
    report = {
        "background": _round_for_report(curve.background),
        "visibility": _round_for_report(curve.visibility),
        "extremum": _round_for_report(curve.extremum),
        "extremum_delay_s": _round_for_report(curve.extremum_delay),
        "delay_min_s": _round_for_report(float(curve.delays[0])),
        "delay_max_s": _round_for_report(float(curve.delays[-1])),
        "n_samples": int(curve.delays.size),
        "mode_overlap_epsilon": _round_for_report(epsilon),
    }
    _write_json(report_path, report)
    print(f"csv = {out}")
    print(f"report = {report_path}")
    print(f"background = {_fmt(curve.background)}")
    print(f"visibility = {_fmt(curve.visibility)}")
    print(f"extremum_delay_s = {_fmt(curve.extremum_delay)}")
    return EXIT_OK


def run_classify(config: ExperimentConfig, *, grid_points=None, out: Path | None = None) -> int:
    state = config.build_state(grid_points)
    report = classify(
        state,
        threshold=config.analysis.classification_threshold,
        chsh_angles=config.analysis.chsh_angles,
    )
    print(f"label = {report.label}")
    print(f"as_residual = {_fmt(report.as_residual)}")
    print(f"bell_residual = {_fmt(report.bell_residual)}")
    print(f"coincidence_at_zero_delay = {_fmt(report.coincidence_at_zero_delay)}")
    print(f"chsh_value = {_fmt(report.chsh_value)}")
    print(f"basis45_visibility = {_fmt(report.basis45_visibility)}")
    print(f"threshold = {_fmt(config.analysis.classification_threshold)}")
    if out is not None:
        _write_json(
            out,
            {
                "label": report.label,
                "as_residual": _round_for_report(report.as_residual),
                "bell_residual": _round_for_report(report.bell_residual),
                "coincidence_at_zero_delay": _round_for_report(
                    report.coincidence_at_zero_delay
                ),
                "chsh_value": _round_for_report(report.chsh_value),
                "basis45_visibility": _round_for_report(report.basis45_visibility),
                "threshold": _round_for_report(config.analysis.classification_threshold),
            },
        )
        print(f"report = {out}")
    return EXIT_OK


def run_chsh(config: ExperimentConfig, *, grid_points=None, out: Path | None = None) -> int:
    state = config.build_state(grid_points)
    angles = config.analysis.chsh_angles
    s_value = chsh(state, angles)
    print(f"chsh_value = {_fmt(s_value)}")
    print(f"angles_rad = {','.join(_fmt(a) for a in angles)}")
    if out is not None:
        _write_json(
            out,
            {
                "chsh_value": _round_for_report(s_value),
                "angles_rad": [_round_for_report(a) for a in angles],
            },
        )
        print(f"report = {out}")
    return EXIT_OK


def run_oracle_check(config: ExperimentConfig, k_bins: int, *, grid_points=None) -> int:
    """Compare quadrature and discrete-mode coincidence probabilities.

    The configured state is projected onto k_bins flat frequency bins.
    The discrete route sends the projection through the exact mode
    unitary; the quadrature route evaluates the same projected state
    (embedded back on the grid) with the analytic formula.  Checked at
    zero delay and at two delays of order the coherence time.
    """
    if not 2 <= k_bins <= 32:
        raise ConfigError(f"--bins must lie in [2, 32], got {k_bins}")
    state = config.build_state(grid_points)
    grid = state.grid
    tau_c = coherence_time(state)
    max_deviation = 0.0
    max_unitarity_defect = 0.0
    for delay in (0.0, 2.0 * tau_c, -5.0 * tau_c):
        delayed = apply_path1_delay(state, delay)
        basis = discretize(delayed, k_bins)
        transformed = apply_bs_exact(basis)
        max_unitarity_defect = max(
            max_unitarity_defect, abs(transformed.total_probability() - 1.0)
        )
        p_oracle = outcome_probabilities(transformed)["coincidence"]
        p_analytic = coincidence_probability(reconstruct(basis, grid), 0.0)
        deviation = abs(p_oracle - p_analytic) / max(abs(p_oracle), abs(p_analytic), 1e-6)
        max_deviation = max(max_deviation, deviation)
    print(f"k_bins = {k_bins}")
    print(f"max_relative_deviation = {max_deviation:.3e}")
    print(f"unitarity_defect = {max_unitarity_defect:.3e}")
    ok = (
        max_deviation < ORACLE_DEVIATION_LIMIT
        and max_unitarity_defect < ORACLE_UNITARITY_LIMIT
    )
    print(f"result = {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_INVARIANT


def run_presets_list() -> int:
    for name, description in list_presets():
        print(f"{name}: {description}" if description else name)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biphoton",
        description="Two-photon beamsplitter interference simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_out: bool = False):
        p.add_argument("--config", required=True, help="config file path or preset name")
        p.add_argument("--grid-points", type=int, default=None, help="override grid.n_points")
        if needs_out:
            p.add_argument("--out", required=True, help="output CSV path")
        else:
            p.add_argument("--out", default=None, help="optional JSON report path")

    p_scan = sub.add_parser("scan", help="coincidence rate vs path-1 delay, to CSV")
    add_common(p_scan, needs_out=True)
    p_scan.add_argument(
        "--epsilon", type=float, default=None, help="override mode-overlap epsilon"
    )

    p_classify = sub.add_parser("classify", help="symmetry classification report")
    add_common(p_classify)

    p_chsh = sub.add_parser("chsh", help="CHSH S value at the configured angles")
    add_common(p_chsh)

    p_oracle = sub.add_parser("oracle-check", help="discrete-mode cross-check")
    add_common(p_oracle)
    p_oracle.add_argument(
        "--bins", type=int, default=8, help="frequency bin count K in [2, 32]"
    )

    p_presets = sub.add_parser("presets", help="bundled configurations")
    p_presets.add_argument("action", nargs="?", default="list", choices=["list"])

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "presets":
            return run_presets_list()
        config = load_config(args.config)
        if args.grid_points is not None and args.grid_points < 2:
            raise ConfigError(f"--grid-points must be at least 2, got {args.grid_points}")
        if args.command == "scan":
            if args.epsilon is not None and not 0.0 <= args.epsilon <= 1.0:
                raise ConfigError(f"--epsilon must lie in [0, 1], got {args.epsilon}")
            return run_scan(
                config,
                Path(args.out),
                grid_points=args.grid_points,
                epsilon=args.epsilon,
            )
        if args.command == "classify":
            return run_classify(
                config,
                grid_points=args.grid_points,
                out=Path(args.out) if args.out else None,
            )
        if args.command == "chsh":
            return run_chsh(
                config,
                grid_points=args.grid_points,
                out=Path(args.out) if args.out else None,
            )
        if args.command == "oracle-check":
            return run_oracle_check(config, args.bins, grid_points=args.grid_points)
        raise AssertionError(f"unhandled command {args.command!r}")
    except ValueError as exc:
        # Library preconditions triggered by configuration values land
        # here too (grid too narrow, scan span too small, ...).
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
