"""Command-line entry point.

Subcommands:

  simulate  - run one application (noise-filter or assoc) on a pattern,
              emitting a trajectory CSV, frame images, the final pattern
              and a run manifest.
  train     - Hebbian training of space-varying templates from cue:target
              pattern pairs, written as a plain-text template file.
  sweep     - voltage/size design-space sweep with a Pareto frontier and a
              comparison report against the calibrated CMOS baseline.
  oracle    - cross-checks of analytically known quantities against their
              independent numeric computations; exits nonzero on
              disagreement.

Exit codes: 0 converged / agreed, 2 not converged, 1 error.

All CSV output is byte-stable across reruns with identical flags and seed
(including ``--jobs > 1``); wall-clock timestamps appear only in the
manifest. The configuration file may also be supplied through the
``SPINCNN_CONFIG`` environment variable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import GLYPHS, load_glyph
from .analysis import (EnergyParams, Scenario, aggregate, cmos_sweep, compare,
                       pareto, records_to_csv, sweep_voltage)
from .config import ConfigError, FullConfig, load_config_file
from .core import (Pattern, SimConfig, frame_to_pgm, load_pattern_file,
                   save_pattern)
from .dynamics import (analytic_critical_current, critical_spin_current,
                       switch_time)
from .network import (CellModel, CnnGrid, hebbian_train, load_templates,
                      noise_filter_templates, run, run_associative,
                      save_templates)
from .readpath import read_cell
from .synapse import unit_current
from .transport import numeric_transmission, spin_transmission

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2

MAX_FRAME_IMAGES = 16


class CliError(Exception):
    """User-facing error: message printed to stderr, exit code 1."""


# ---------------------------------------------------------------------------
# plumbing

def _load_config(path: str | None) -> tuple[FullConfig, str]:
    """Resolve --config / SPINCNN_CONFIG / defaults; returns (config, digest)."""
    path = path or os.environ.get("SPINCNN_CONFIG")
    if path is None:
        return FullConfig(), "defaults"
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"config {path}: {exc.strerror}") from exc
    try:
        cfg = load_config_file(path)
    except ConfigError as exc:
        raise CliError(f"config {path}: {exc}") from exc
    return cfg, hashlib.sha256(text.encode()).hexdigest()


def _load_pattern_arg(value: str) -> Pattern:
    """A pattern file path, or the name of a bundled glyph."""
    if value in GLYPHS and not os.path.exists(value):
        return load_glyph(value)
    try:
        return load_pattern_file(value)
    except OSError as exc:
        raise CliError(f"pattern {value}: {exc.strerror}") from exc
    except ValueError as exc:
        raise CliError(f"pattern {value}: {exc}") from exc


def _demo_i0(full: FullConfig) -> float:
    """Unit-weight spin current from config: absolute override or a multiple
    of the analytic critical current."""
    if full.drive.i0 is not None:
        return full.drive.i0
    return full.drive.i0_over_ic * analytic_critical_current(full.magnet)


class _Manifest:
    """Run manifest: command line, config digest, seed, wall time, outputs."""

    def __init__(self, argv: list[str], config_digest: str, seed: int | None):
        self.data = {
            "command_line": argv,
            "config_digest": config_digest,
            "seed": seed,
            "start_time": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "end_time": None,
            "outputs": [],
        }

    def add(self, path: str):
        self.data["outputs"].append(os.path.basename(path))

    def write(self, out_dir: str):
        self.data["end_time"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
        path = os.path.join(out_dir, "manifest.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.data, fh, indent=2)
            fh.write("\n")


def _write(out_dir: str, name: str, text: str, manifest: _Manifest) -> str:
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    manifest.add(path)
    return path


def _trajectory_csv(traj) -> str:
    """Per-sample summary: saturation and distance from the initial pattern."""
    init = traj.initial_pattern.to_array()
    lines = ["time_ns,mean_mz,min_abs_mz,n_black,hamming_to_initial"]
    for t, frame in zip(traj.times, traj.mz):
        logic = np.where(frame > 0.0, 1, -1)
        lines.append(",".join([
            f"{t * 1e9:.6g}",
            f"{float(np.mean(frame)):.6g}",
            f"{float(np.min(np.abs(frame))):.6g}",
            str(int(np.sum(logic == 1))),
            str(int(np.sum(logic != init))),
        ]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args, argv: list[str]) -> int:
    full, digest = _load_config(args.config)
    cfg = full.sim
    if args.seed is not None:
        from dataclasses import replace
        cfg = replace(cfg, seed=args.seed)
    pattern = _load_pattern_arg(args.pattern)
    model = full.cell_model(_demo_i0(full))

    if args.app == "assoc":
        if not args.templates:
            raise CliError("assoc requires --templates (from `spincnn train`)")
        try:
            with open(args.templates, "r", encoding="utf-8") as fh:
                templates = load_templates(fh.read())
        except OSError as exc:
            raise CliError(f"templates {args.templates}: {exc.strerror}") from exc
        except ValueError as exc:
            raise CliError(f"templates {args.templates}: {exc}") from exc
        ta = np.asarray(templates.A)
        if ta.shape[:2] != (pattern.rows, pattern.cols):
            raise CliError(f"templates {args.templates}: trained for "
                           f"{ta.shape[0]}x{ta.shape[1]} grids, pattern is "
                           f"{pattern.rows}x{pattern.cols}")
        traj = run_associative(pattern, templates, cfg, model)
    else:
        templates = noise_filter_templates()
        grid = CnnGrid.from_pattern(pattern, pattern, templates)
        traj = run(grid, cfg, model)

    os.makedirs(args.out, exist_ok=True)
    manifest = _Manifest(argv, digest, cfg.seed)
    _write(args.out, "trajectory.csv", _trajectory_csv(traj), manifest)
    stride = max(1, math.ceil(len(traj.mz) / MAX_FRAME_IMAGES))
    indices = list(range(0, len(traj.mz), stride))
    if indices[-1] != len(traj.mz) - 1:
        indices.append(len(traj.mz) - 1)
    for k, idx in enumerate(indices):
        _write(args.out, f"frame_{k:04d}.pgm", frame_to_pgm(traj.mz[idx]),
               manifest)
    _write(args.out, "final.pat", save_pattern(traj.final_pattern), manifest)
    manifest.write(args.out)

    if traj.converged:
        print(f"converged at {traj.convergence_time * 1e9:.3f} ns "
              f"({traj.flipped_pixels} pixels flipped)")
        return EXIT_OK
    print(f"not converged within {cfg.t_max * 1e9:.3f} ns")
    return EXIT_NOT_CONVERGED


# ---------------------------------------------------------------------------
# train

def cmd_train(args, argv: list[str]) -> int:
    pairs = []
    for spec_ in args.pairs:
        if ":" not in spec_:
            raise CliError(f"--pairs entry {spec_!r} must be cue:target")
        cue_s, target_s = spec_.split(":", 1)
        pairs.append((_load_pattern_arg(cue_s), _load_pattern_arg(target_s)))
    try:
        templates = hebbian_train(pairs)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    rows, cols = pairs[0][0].rows, pairs[0][0].cols
    out_dir = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(out_dir, exist_ok=True)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(save_templates(templates, rows, cols))
    print(f"trained on {len(pairs)} pair(s); templates written to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep

def _float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise CliError(f"{flag}: {exc}") from exc
    if not values:
        raise CliError(f"{flag}: empty list")
    return values


def _int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise CliError(f"{flag}: {exc}") from exc
    if not values:
        raise CliError(f"{flag}: empty list")
    return values


def _scenario(app: str, full: FullConfig) -> Scenario:
    """Built-in sweep scenarios on the bundled glyph set."""
    if app == "assoc":
        one, two = load_glyph("one"), load_glyph("two")
        three, four = load_glyph("three"), load_glyph("four")
        templates = hebbian_train([(one, two), (three, four)])
        return Scenario("assoc", one, templates, 4 / 600, two,
                        programmable=True, associative=True)
    zero = load_glyph("zero")
    return Scenario("noise-filter", zero, noise_filter_templates(), 0.1, zero)


def _pareto_csv(frontier) -> str:
    lines = ["size_mult,v_drive_V,delay_ns,e_total_fJ,area_um2"]
    for a in frontier:
        lines.append(",".join([
            str(a["size_mult"]),
            f"{a['v_drive']:.6g}",
            f"{a['delay'] * 1e9:.6g}",
            f"{a['energy'] * 1e15:.6g}",
            f"{a['area'] * 1e12:.6g}",
        ]))
    return "\n".join(lines) + "\n"


def _comparison_report(report: dict, scenario: Scenario) -> str:
    lines = [
        f"Scenario: {scenario.name}",
        "",
        "Spintronic minimum-energy point versus the CMOS analog baseline at",
        "matched delay (nearest pairing within 2x). The CMOS numbers come",
        "from a calibrated scaling model, not from independent circuit",
        "simulation.",
        "",
    ]
    for key in ("spin_energy_J", "spin_delay_s", "spin_area_m2",
                "cmos_energy_J", "cmos_delay_s", "cmos_area_m2",
                "energy_ratio", "area_ratio", "meets_10x", "cmos_label"):
        value = report[key]
        if isinstance(value, float):
            lines.append(f"{key}: {value:.6g}")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def cmd_sweep(args, argv: list[str]) -> int:
    full, digest = _load_config(args.config)
    voltages = _float_list(args.voltages, "--voltages")
    sizes = _int_list(args.sizes, "--sizes")
    seeds = _int_list(args.seeds, "--seeds")
    if len(voltages) < 3:
        raise CliError("--voltages: need at least 3 sweep voltages")
    if args.jobs < 1:
        raise CliError("--jobs must be >= 1")
    scenario = _scenario(args.app, full)
    os.makedirs(args.out, exist_ok=True)
    manifest = _Manifest(argv, digest, None)

    records = []
    try:
        for size in sizes:
            records.extend(sweep_voltage(
                scenario, voltages, size, seeds, full.sim, full.cell_model(0.0),
                full.drive_model, full.energy, jobs=args.jobs))
    finally:
        # flush whatever finished, even on interruption
        records.sort(key=lambda r: (r.v_drive, r.size_mult, r.seed))
        if records:
            _write(args.out, "sweep.csv", records_to_csv(records), manifest)
            manifest.write(args.out)

    frontier = pareto(records)
    if not frontier:
        print("no sweep point converged; no Pareto frontier")
        manifest.write(args.out)
        return EXIT_NOT_CONVERGED
    _write(args.out, "pareto.csv", _pareto_csv(frontier), manifest)
    cmos_records = cmos_sweep(scenario, [1, 2, 5, 10, 20, 50], full.amplifier)
    report = compare(frontier, cmos_records)
    _write(args.out, "comparison.txt", _comparison_report(report, scenario),
           manifest)
    manifest.write(args.out)
    print(f"{len(records)} sweep points, {len(frontier)} Pareto points; "
          f"energy ratio {report['energy_ratio']:.3g}x at matched delay")
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle

def _oracle_critical_current(full: FullConfig) -> int:
    analytic = analytic_critical_current(full.magnet)
    numeric = critical_spin_current(full.magnet)
    ratio = numeric / analytic
    ok = 0.5 <= ratio <= 2.0
    print(f"analytic small-angle estimate: {analytic:.6e} A")
    print(f"numeric bisection:             {numeric:.6e} A")
    print(f"ratio numeric/analytic:        {ratio:.4f} (tolerance: factor 2)")
    print("agreement: " + ("yes" if ok else "NO"))
    return EXIT_OK if ok else EXIT_ERROR


def _oracle_transmission(full: FullConfig) -> int:
    ch = full.channel
    analytic = spin_transmission(ch.L, ch.l_sf)
    numeric = numeric_transmission(1024, ch)
    err = abs(numeric - analytic)
    ok = err <= 1e-6
    print(f"analytic 1/cosh(L/l_sf): {analytic:.10f}")
    print(f"numeric BVP (N=1024):    {numeric:.10f}")
    print(f"absolute error:          {err:.3e} (tolerance: 1e-06)")
    print("agreement: " + ("yes" if ok else "NO"))
    return EXIT_OK if ok else EXIT_ERROR


def _oracle_read_curve(full: FullConfig) -> int:
    from dataclasses import replace

    from .readpath import divider_voltage
    thicknesses = (1.9e-9, 2.0e-9, 2.1e-9)
    mz = np.linspace(-1.0, 1.0, 41)
    header = "mz," + ",".join(
        f"v_div_tox_{t * 1e9:.1f}nm_V,v_out_tox_{t * 1e9:.1f}nm_V"
        for t in thicknesses)
    print(header)
    columns = []
    for t_ox in thicknesses:
        mtj = replace(full.mtj, t_ox_ref=t_ox, t_ox_read=t_ox)
        columns.append(([divider_voltage(mtj, v) for v in mz],
                        [read_cell(mtj, full.inverter, v)[0] for v in mz]))
    for i, v in enumerate(mz):
        print(f"{v:.6g}," + ",".join(
            f"{div[i]:.6g},{out[i]:.6g}" for div, out in columns))
    ok = all(all(out[i] <= out[i + 1] + 1e-12 for i in range(len(out) - 1))
             for _, out in columns)
    print("# monotone in mz: " + ("yes" if ok else "NO"))
    return EXIT_OK if ok else EXIT_ERROR


def _deterministic_switch_time(p, i0: float, cfg: SimConfig) -> float | None:
    """T = 0 switch time from a 1-degree tilt (the exact pole is a fixed
    point, so the zero-temperature reference needs a seed tilt)."""
    from .dynamics import heun_step, stt_rate
    tilt = math.radians(1.0)
    m = np.array([math.sin(tilt), 0.0, math.cos(tilt)])
    torque = stt_rate(p, -i0)
    zero = np.zeros(3)
    n_steps = int(round(cfg.t_max / cfg.dt))
    for n in range(1, n_steps + 1):
        m = heun_step(m, p, torque, zero, cfg.dt)
        if m[2] <= -cfg.mz_threshold:
            return n * cfg.dt
    return None


def _oracle_switch_stats(full: FullConfig) -> int:
    p = full.magnet
    i0 = _demo_i0(full)
    t0 = _deterministic_switch_time(p, i0, full.sim)
    if t0 is None:
        print(f"drive {-i0:.3e} A does not switch at T = 0")
        return EXIT_ERROR
    times = []
    for seed in range(20):
        t = switch_time(p, -i0, full.sim.temperature, seed=seed)
        if t is not None:
            times.append(t)
    if not times:
        print("no stochastic realization switched")
        return EXIT_ERROR
    mean = float(np.mean(times))
    ratio = mean / t0
    ok = 1 / 3 <= ratio <= 3.0 and len(times) >= 18
    print(f"deterministic (T = 0) switch time: {t0 * 1e9:.4f} ns")
    print(f"stochastic mean over {len(times)}/20 seeds at "
          f"{full.sim.temperature:.0f} K: {mean * 1e9:.4f} ns "
          f"(std {float(np.std(times)) * 1e9:.4f} ns)")
    print(f"ratio stochastic/deterministic: {ratio:.3f} (tolerance: factor 3)")
    print("agreement: " + ("yes" if ok else "NO"))
    return EXIT_OK if ok else EXIT_ERROR


def cmd_oracle(args, argv: list[str]) -> int:
    full, _ = _load_config(args.config)
    dispatch = {
        "critical-current": _oracle_critical_current,
        "transmission": _oracle_transmission,
        "read-curve": _oracle_read_curve,
        "switch-stats": _oracle_switch_stats,
    }
    return dispatch[args.check](full)


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincnn",
        description="Spintronic cellular neural network simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one application on a pattern")
    p.add_argument("--config", help="config file (or $SPINCNN_CONFIG)")
    p.add_argument("--pattern", required=True,
                   help="pattern file or bundled glyph name")
    p.add_argument("--app", choices=("noise-filter", "assoc"),
                   default="noise-filter")
    p.add_argument("--templates", help="template file (required for assoc)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("train", help="Hebbian-train space-varying templates")
    p.add_argument("--pairs", nargs="+", required=True, metavar="CUE:TARGET",
                   help="pattern file pairs, cue:target")
    p.add_argument("--out", required=True, help="output template file")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sweep", help="voltage/size design-space sweep")
    p.add_argument("--config", help="config file (or $SPINCNN_CONFIG)")
    p.add_argument("--app", choices=("noise-filter", "assoc"),
                   default="noise-filter")
    p.add_argument("--voltages",
                   default="0.01,0.05,0.11,0.14,0.19,0.27,0.52,1.0",
                   help="comma-separated drive voltages [V]")
    p.add_argument("--sizes", default="1", help="comma-separated driver sizes")
    p.add_argument("--seeds", default="0,1,2", help="comma-separated seeds")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="analytic-versus-numeric cross-checks")
    p.add_argument("check", choices=("critical-current", "transmission",
                                     "read-curve", "switch-stats"))
    p.add_argument("--config", help="config file (or $SPINCNN_CONFIG)")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, ["spincnn"] + argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
