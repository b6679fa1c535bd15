"""
Subcommand implementations. Each takes the parsed arguments and the
validated RunConfig, writes its results and returns nothing; errors
propagate to cli.main, which maps them to exit codes.
"""

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.table import Table

from scatterqubit.atomic.levels import LevelStructure, build_levels
from scatterqubit.cli.plotting import SvgPlotBuilder
from scatterqubit.cli.run_config import RunConfig
from scatterqubit.dynamics.density import DensityMatrix
from scatterqubit.dynamics.sequences import ramsey_analytic, simulate_sequence, spin_echo_analytic
from scatterqubit.dynamics.trajectories import run_trajectories
from scatterqubit.experiment.calibration import StarkMeasurement, calibrate_rabi
from scatterqubit.experiment.fitting import fit_rates
from scatterqubit.experiment.sweep import (
    SweepRow,
    find_crossings,
    raman_population_curve,
    resonance_window,
    sweep,
)
from scatterqubit.scattering.rates import RateSet, rates
from scatterqubit.scattering.stark import bisect_null, resolve_polarization, stark_components
from scatterqubit.utils.config import config
from scatterqubit.utils.constants import (
    STARK_CSV_COLUMNS,
    SWEEP_CSV_COLUMNS,
    CurveKind,
    FitMethod,
    Qubit,
    SequenceKind,
)
from scatterqubit.utils.file_loader import load_stark_csv, load_timeseries_csv
from scatterqubit.utils.logger import logger
from scatterqubit.utils.output_writer import OutputWriter, format_cell

writer = OutputWriter()


def _provenance(run_cfg: RunConfig) -> Dict[str, Any]:
    return {"config_hash": run_cfg.config_hash, "seed": run_cfg.seed}


def _log_provenance(provenance: Dict[str, Any]) -> None:
    logger.info(f"Provenance: config_hash={provenance['config_hash']} seed={provenance['seed']}")


def _emit_json(args: argparse.Namespace, payload: Dict[str, Any]) -> None:
    if args.out:
        writer.write_json(args.out, payload)
        logger.success(f"Wrote {args.out}")
    else:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _emit_csv(args: argparse.Namespace, header, rows: List[list], meta: Dict[str, Any]) -> None:
    if args.out:
        writer.write_csv(args.out, header, rows, meta=meta)
        logger.success(f"Wrote {args.out} ({len(rows)} rows) and {OutputWriter.meta_path(args.out).name}")
    else:
        _log_provenance(meta)
        lines = [",".join(header)] + [",".join(format_cell(v) for v in row) for row in rows]
        sys.stdout.write("\n".join(lines) + "\n")


def _svg_path(args: argparse.Namespace, default_name: str) -> Path:
    if args.out:
        return Path(args.out).with_suffix(".svg")
    return config.output_dir / default_name


def _want_svg(args: argparse.Namespace, run_cfg: RunConfig) -> bool:
    return bool(args.svg or run_cfg.output.svg)


# === levels ===

def cmd_levels(args: argparse.Namespace, run_cfg: RunConfig) -> None:
    levels = build_levels(run_cfg.physical)
    logger.success(f"Built level structure at B = {levels.magnetic_field:.6f} T")

    if args.out:
        rows = [[level.label, level.energy / 1e9] for level in levels.levels]
        meta = {
            **_provenance(run_cfg),
            "magnetic_field_t": levels.magnetic_field,
            "qubit_splitting_ghz": levels.qubit_splitting / 1e9,
            "resonances": [
                {"transition": r.label, "polarization": r.polarization, "detuning_ghz": r.detuning / 1e9}
                for r in levels.resonances()
            ],
        }
        _emit_csv(args, ("label", "energy_ghz"), rows, meta)
        return

    _log_provenance(_provenance(run_cfg))
    console = Console(highlight=False)
    table = Table(title="Zeeman levels")
    table.add_column("Label")
    table.add_column("Energy (GHz)", justify="right")
    for level in levels.levels:
        table.add_row(level.label, f"{level.energy / 1e9:.3f}")
    console.print(table)
    console.print(f"Qubit splitting: {levels.qubit_splitting / 1e9:.3f} GHz")
    console.print(f"Magnetic field: {levels.magnetic_field:.6f} T")

    resonances = Table(title="Resonances (detuning from the cycling line)")
    resonances.add_column("Transition")
    resonances.add_column("lam", justify="right")
    resonances.add_column("Detuning (GHz)", justify="right")
    for r in levels.resonances():
        resonances.add_row(r.label, f"{r.polarization:+d}", f"{r.detuning / 1e9:.3f}")
    console.print(resonances)


# === sweep ===

def _headline(levels: LevelStructure, rows: List[SweepRow]) -> Dict[str, Any]:
    lo, hi = resonance_window(levels)
    crossings = find_crossings(rows, lo, hi)
    summary: Dict[str, Any] = {
        "resonance_window_ghz": [lo / 1e9, hi / 1e9],
        "crossings_ghz": [c / 1e9 for c in crossings],
    }
    for crossing in crossings:
        nearest = min((r for r in rows if not r.skipped), key=lambda r: abs(r.detuning - crossing))
        ratio = nearest.total_full / nearest.total_ratediff if nearest.total_ratediff > 0 else math.inf
        logger.info(
            f"Elastic rates cross at {crossing / 1e9:.2f} GHz; "
            f"amplitude model / rate-difference model = {ratio:.2f}"
        )
    return summary


def cmd_sweep(args: argparse.Namespace, run_cfg: RunConfig) -> None:
    levels = build_levels(run_cfg.physical)
    rows = sweep(levels, run_cfg.sweep_spec(), max_workers=config.max_parallel_processes)

    meta = {
        **_provenance(run_cfg),
        "n_points": len(rows),
        "n_skipped": sum(r.skipped for r in rows),
        "n_nulled": sum(r.nulled for r in rows),
        **_headline(levels, rows),
    }
    _emit_csv(args, SWEEP_CSV_COLUMNS, [row.csv_cells() for row in rows], meta)

    if _want_svg(args, run_cfg):
        detuning_ghz = [r.detuning / 1e9 for r in rows]
        svg = SvgPlotBuilder().line_chart(
            series=[
                ("full (amplitude difference)", detuning_ghz, [r.total_full for r in rows]),
                ("rate difference", detuning_ghz, [r.total_ratediff for r in rows]),
                ("Raman only", detuning_ghz, [r.total_raman_only for r in rows]),
            ],
            title="Total decoherence rate",
            x_label="Detuning from cycling transition (GHz)",
            y_label="Decoherence rate (1/s)",
        )
        path = writer.write_text(_svg_path(args, "sweep.svg"), svg)
        logger.success(f"Wrote {path}")


# === sequence ===

def _analytic_population(run_cfg: RunConfig, rate_set: RateSet, tau: float) -> Optional[float]:
    settings = run_cfg.sequence
    if settings.kind is SequenceKind.SPIN_ECHO:
        return spin_echo_analytic(rate_set, tau)
    if settings.kind is SequenceKind.RAMSEY:
        return ramsey_analytic(rate_set, tau, math.radians(settings.phase_deg))
    if settings.kind is SequenceKind.RAMAN_FROM_D:
        return float(raman_population_curve(rate_set, Qubit.D, [tau])[0])
    if settings.kind is SequenceKind.RAMAN_FROM_U:
        return float(raman_population_curve(rate_set, Qubit.U, [tau])[0])
    return None


def cmd_sequence(args: argparse.Namespace, run_cfg: RunConfig) -> None:
    levels = build_levels(run_cfg.physical)
    settings = run_cfg.laser
    laser, nulled = resolve_polarization(levels, settings, settings.detuning)
    rate_set = rates(levels, laser, settings.resonance_floor)

    seq_settings = run_cfg.sequence
    seq = seq_settings.build()
    rho0 = DensityMatrix.basis(Qubit.U)
    final = simulate_sequence(rho0, seq, rate_set, seq_settings.integrator)
    mc = run_trajectories(rho0, seq, rate_set, run_cfg.trajectories) if run_cfg.trajectories.enabled else None
    logger.success(f"Simulated {seq.name} over {seq.light_time:.6g} s of light")

    payload: Dict[str, Any] = {
        **_provenance(run_cfg),
        "sequence": seq.name,
        "light_time": seq.light_time,
        "polarization_angle_deg": math.degrees(laser.polarization_angle),
        "nulled": nulled,
        "final_rho_uu": final.rho_uu,
        "analytic_rho_uu": _analytic_population(run_cfg, rate_set, seq_settings.tau),
        "mc_estimate": mc.rho_uu if mc is not None else None,
        "mc_stderr": mc.rho_uu_stderr if mc is not None else None,
        "mc_trajectories": mc.n_trajectories if mc is not None else 0,
        "rates": rate_set.as_dict(),
    }
    if seq_settings.taus:
        curve = [
            [tau, simulate_sequence(rho0, seq_settings.build(tau), rate_set, seq_settings.integrator).rho_uu]
            for tau in seq_settings.taus
        ]
        if args.out:
            out = Path(args.out)
            curve_path = out.with_name(f"{out.stem}.curve.csv")
            writer.write_csv(curve_path, ("time", "population"), curve, meta=_provenance(run_cfg))
            payload["curve_file"] = curve_path.name
        else:
            payload["curve"] = curve
    _emit_json(args, payload)


# === fit ===

def cmd_fit(args: argparse.Namespace, run_cfg: RunConfig) -> None:
    times, populations, sigma = load_timeseries_csv(args.input)
    result = fit_rates(times, populations, CurveKind(args.curve), FitMethod(args.method), sigma)
    logger.success(f"Fitted {result.curve.value} rate {result.rate:.6g} +- {result.uncertainty:.3g} /s")
    payload = {**_provenance(run_cfg), "input": Path(args.input).name, **result.as_dict()}
    if args.calibrate:
        levels = build_levels(run_cfg.physical)
        settings = run_cfg.laser
        laser, _ = resolve_polarization(levels, settings, settings.detuning)
        payload["calibration"] = calibrate_rabi(levels, laser, result, settings.resonance_floor).as_dict()
    _emit_json(args, payload)


# === stark ===

def _angle_grid(step: float) -> List[float]:
    n = int(math.floor(90.0 / step + 1e-9))
    angles = [i * step for i in range(n + 1)]
    if angles[-1] < 90.0 - 1e-9:
        angles.append(90.0)
    return angles


def cmd_stark(args: argparse.Namespace, run_cfg: RunConfig) -> None:
    levels = build_levels(run_cfg.physical)
    settings = run_cfg.laser
    pi_light = settings.to_field(polarization_angle=0.0)
    components = stark_components(levels, pi_light, settings.resonance_floor)
    calibration = None
    if args.measured:
        measurement = StarkMeasurement.from_degrees(*load_stark_csv(args.measured))
        calibration = calibrate_rabi(levels, pi_light, measurement, settings.resonance_floor).as_dict()
    null_angle = bisect_null(components.shift)

    angles = _angle_grid(run_cfg.stark.angle_step_deg)
    rows = [[angle, components.shift(math.radians(angle))] for angle in angles]
    summary = {
        **_provenance(run_cfg),
        "detuning_ghz": settings.detuning / 1e9,
        "null_angle_deg": math.degrees(null_angle),
    }
    if calibration is not None:
        summary["calibration"] = calibration
    logger.success(f"Light-shift null at {summary['null_angle_deg']:.6f} deg")
    _emit_csv(args, STARK_CSV_COLUMNS, rows, summary)
    if args.out:
        sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")

    if _want_svg(args, run_cfg):
        svg = SvgPlotBuilder().line_chart(
            series=[("differential shift", angles, [row[1] for row in rows])],
            title=f"Differential light shift at {settings.detuning / 1e9:.1f} GHz",
            x_label="Polarization angle (deg)",
            y_label="Shift (Hz)",
        )
        path = writer.write_text(_svg_path(args, "stark.svg"), svg)
        logger.success(f"Wrote {path}")
