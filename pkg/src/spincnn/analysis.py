"""Energy, delay and area accounting plus design-space sweeps.

Spintronic per-operation energy has three components, all integrated from
stimulus to convergence:

  joule    - drive-current heating of every active synapse branch,
  leakage  - static read path (MTJ divider + inverter) per cell,
  dynamic  - gate charge/discharge of the drivers fed by flipped outputs.

The CMOS side of every comparison comes from the calibrated amplifier
model in `cmos` and is labeled "calibrated to published claims" in all
reports; it is not independently derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from . import cmos as cmos_mod
from .core import Pattern, SimConfig, TemplateSet, add_noise
from .dynamics import analytic_critical_current
from .network import (CellModel, CnnGrid, Trajectory, run, run_associative)
from .readpath import mtj_resistance
from .synapse import BRANCH_SIZES, DriveModel, LEVELS_PER_UNIT_WEIGHT, unit_current

CSV_HEADER = ("v_drive_V,size_mult,seed,converged,delay_ns,"
              "e_joule_fJ,e_leak_fJ,e_dyn_fJ,e_total_fJ,area_um2")

# gross width units of one programmable 4-magnet synapse, in units of the
# unit-weight (level 4) driver: (4+2+1+1)/4
PROGRAMMABLE_GROSS_UNITS = sum(BRANCH_SIZES) / LEVELS_PER_UNIT_WEIGHT


@dataclass(frozen=True)
class EnergyParams:
    """Calibration knobs of the spintronic energy/area model."""

    c_gate_unit: float = 4e-15      # gate capacitance per unit driver width [F]
    inverter_leakage: float = 8e-6  # static read-path current per cell [A]
    feature_size: float = 16e-9     # minimum feature size F [m]
    min_width_f: float = 4.0        # unit driver width in units of F
    inverter_width_units: float = 4.0
    mtj_footprint: float = 900e-18  # [m^2] each, two per cell
    magnet_footprint: float = 900e-18  # 30 nm x 30 nm


@dataclass(frozen=True)
class EnergyBreakdown:
    joule: float
    leakage: float
    dynamic: float

    def __post_init__(self):
        for name in ("joule", "leakage", "dynamic"):
            if getattr(self, name) < 0:
                raise ValueError(f"negative energy component {name}")

    @property
    def total(self) -> float:
        return self.joule + self.leakage + self.dynamic


@dataclass(frozen=True)
class SweepRecord:
    v_drive: float
    size_mult: int
    seed: int
    converged: bool
    delay: float                  # [s]; t_max when not converged
    energy: EnergyBreakdown
    area: float                   # [m^2]


@dataclass(frozen=True)
class ScenarioHardware:
    """Synapse provisioning of one application, per cell.

    Fixed-weight synapses carry |w| width units each; programmable ones
    always drive all four quantized branches (gross 2 units), which is the
    cancellation overhead of small net weights.
    """

    n_synapses: float             # synapses per cell
    gross_units: float            # summed driver width units per cell
    driven_gates: float           # synapse gates fed by one cell's output
    magnets_per_synapse: int
    resolution_bits: int

    @classmethod
    def fixed(cls, templates: TemplateSet) -> "ScenarioHardware":
        A, B = np.asarray(templates.A), np.asarray(templates.B)
        nz_a = int(np.count_nonzero(A))
        nz_b = int(np.count_nonzero(B))
        gross = float(np.sum(np.abs(A)) + np.sum(np.abs(B)))
        return cls(nz_a + nz_b, gross, nz_a, 1, 1)

    @classmethod
    def programmable(cls, n_feedback: int = 9, n_feedforward: int = 9,
                     bits: int = 3) -> "ScenarioHardware":
        n = n_feedback + n_feedforward
        return cls(n, n * PROGRAMMABLE_GROSS_UNITS, n_feedback, 4, bits)


@dataclass(frozen=True)
class Scenario:
    """One application run: clean image, templates, noise injection."""

    name: str
    clean: Pattern
    templates: TemplateSet
    noise_fraction: float
    target: Pattern               # expected final pattern
    programmable: bool = False
    associative: bool = False

    @property
    def hardware(self) -> ScenarioHardware:
        if self.programmable:
            return ScenarioHardware.programmable()
        return ScenarioHardware.fixed(self.templates)

    @property
    def n_cells(self) -> int:
        return self.clean.rows * self.clean.cols


def run_scenario(s: Scenario, cfg: SimConfig, model: CellModel) -> Trajectory:
    """One seeded realization of the scenario (seed taken from cfg)."""
    noisy = add_noise(s.clean, s.noise_fraction, cfg.seed)
    if s.associative:
        return run_associative(noisy, s.templates, cfg, model)
    grid = CnnGrid.from_pattern(noisy, noisy, s.templates)
    return run(grid, cfg, model)


def spin_energy(traj: Trajectory, drive: DriveModel, model: CellModel,
                ep: EnergyParams, hw: ScenarioHardware,
                t_max: float) -> EnergyBreakdown:
    """Energy breakdown of one run; non-converged runs integrate to t_max."""
    t = traj.convergence_time if traj.converged else t_max
    n_cells = traj.final_pattern.rows * traj.final_pattern.cols
    if t == 0.0:
        return EnergyBreakdown(0.0, 0.0, 0.0)
    i_unit = unit_current(drive) * drive.size_multiplier
    joule = hw.gross_units * n_cells * drive.V_drive * i_unit * t
    r_stack = (mtj_resistance(model.mtj, model.mtj.t_ox_ref, 1.0)
               + mtj_resistance(model.mtj, model.mtj.t_ox_read, 1.0))
    p_read = model.mtj.V_read ** 2 / r_stack
    p_inv = model.inverter.V_dd * ep.inverter_leakage
    leakage = n_cells * (p_read + p_inv) * t
    c_gate = ep.c_gate_unit * (hw.gross_units / max(hw.n_synapses, 1)) \
        * drive.size_multiplier
    dynamic = traj.flipped_pixels * hw.driven_gates * c_gate \
        * model.inverter.V_dd ** 2
    return EnergyBreakdown(joule, leakage, dynamic)


def spin_area(n_cells: int, hw: ScenarioHardware, size_multiplier: int,
              ep: EnergyParams) -> float:
    """Cell area: drivers + inverter (width x 8F) + MTJ and magnet footprints."""
    if n_cells <= 0 or size_multiplier < 1:
        raise ValueError("positive cell count and size required")
    w_min = ep.min_width_f * ep.feature_size
    driver_w = hw.gross_units * size_multiplier * w_min
    inverter_w = ep.inverter_width_units * w_min
    transistor_area = (driver_w + inverter_w) * 8.0 * ep.feature_size
    magnets = 1 + hw.n_synapses * hw.magnets_per_synapse
    passive_area = 2 * ep.mtj_footprint + magnets * ep.magnet_footprint
    return n_cells * (transistor_area + passive_area)


def idle_power(hw: ScenarioHardware, n_cells: int,
               amp: cmos_mod.AmplifierModel) -> dict:
    """Idle (retention) power: magnets are non-volatile, SRAM is not."""
    return {
        "spin_W": 0.0,
        "cmos_W": n_cells * hw.n_synapses * amp.sram_retention,
    }


def _point(s: Scenario, v: float, size: int, seed: int, cfg: SimConfig,
           base_model: CellModel, drive: DriveModel,
           ep: EnergyParams) -> SweepRecord:
    d = dc_replace(drive, V_drive=v, size_multiplier=size)
    i0 = base_model.channel.beta * unit_current(d) * size
    model = dc_replace(base_model, i0=i0)
    traj = run_scenario(s, dc_replace(cfg, seed=seed), model)
    ok = traj.converged
    delay = traj.convergence_time if ok else cfg.t_max
    energy = spin_energy(traj, d, model, ep, s.hardware, cfg.t_max)
    area = spin_area(s.n_cells, s.hardware, size, ep)
    return SweepRecord(v, size, seed, ok, delay, energy, area)


def sweep_voltage(s: Scenario, voltages, size_multiplier: int, seeds,
                  cfg: SimConfig, base_model: CellModel, drive: DriveModel,
                  ep: EnergyParams, jobs: int = 1) -> list[SweepRecord]:
    """Run the scenario at every (voltage, seed); i0 follows the IV model."""
    voltages = sorted(voltages)
    if len(voltages) < 3:
        raise ValueError("need at least 3 sweep voltages")
    points = [(v, size_multiplier, seed) for v in voltages for seed in seeds]
    if jobs > 1:
        import multiprocessing as mp
        with mp.Pool(jobs) as pool:
            records = pool.starmap(
                _point, [(s, v, sz, seed, cfg, base_model, drive, ep)
                         for v, sz, seed in points])
    else:
        records = [_point(s, v, sz, seed, cfg, base_model, drive, ep)
                   for v, sz, seed in points]
    records.sort(key=lambda r: (r.v_drive, r.size_mult, r.seed))
    return records


def aggregate(records: list[SweepRecord]):
    """Per (voltage, size): median delay and mean energy over converged seeds.

    Returns a list of dicts sorted by (voltage, size); entries with no
    converged seed carry converged=False and delay=t_max.
    """
    keys = sorted({(r.v_drive, r.size_mult) for r in records})
    out = []
    for v, size in keys:
        group = [r for r in records if r.v_drive == v and r.size_mult == size]
        good = [r for r in group if r.converged]
        if good:
            delay = float(np.median([r.delay for r in good]))
            energy = float(np.mean([r.energy.total for r in good]))
        else:
            delay = max(r.delay for r in group)
            energy = float(np.mean([r.energy.total for r in group]))
        out.append({"v_drive": v, "size_mult": size, "converged": bool(good),
                    "delay": delay, "energy": energy, "area": group[0].area})
    return out


def pareto(records: list[SweepRecord]):
    """Minimum-energy converged point per driver size, sorted by area."""
    if not records:
        raise ValueError("empty sweep")
    agg = aggregate(records)
    frontier = []
    for size in sorted({a["size_mult"] for a in agg}):
        cands = [a for a in agg if a["size_mult"] == size and a["converged"]]
        if not cands:
            continue
        frontier.append(min(cands, key=lambda a: a["energy"]))
    frontier.sort(key=lambda a: a["area"])
    return frontier


def compare(spin_frontier, cmos_records, delay_window: float = 2.0) -> dict:
    """Energy/area ratios at matched delay (nearest pairing within window).

    cmos_records: list of dicts with delay / energy / area keys, produced
    by `cmos_sweep`. The CMOS side is calibrated to published claims, not
    independently derived, and the report says so.
    """
    if not spin_frontier or not cmos_records:
        raise ValueError("both frontiers must be non-empty")
    spin_best = min(spin_frontier, key=lambda a: a["energy"])
    pairs = [(c, max(c["delay"], spin_best["delay"])
              / min(c["delay"], spin_best["delay"])) for c in cmos_records]
    cmos_pt, ratio = min(pairs, key=lambda p: p[1])
    if ratio > delay_window:
        raise ValueError(f"no CMOS record within {delay_window}x of the "
                         f"spintronic delay {spin_best['delay']:.3e} s")
    return {
        "spin_energy_J": spin_best["energy"],
        "spin_delay_s": spin_best["delay"],
        "spin_area_m2": spin_best["area"],
        "cmos_energy_J": cmos_pt["energy"],
        "cmos_delay_s": cmos_pt["delay"],
        "cmos_area_m2": cmos_pt["area"],
        "energy_ratio": cmos_pt["energy"] / spin_best["energy"],
        "area_ratio": cmos_pt["area"] / spin_best["area"],
        "meets_10x": cmos_pt["energy"] / spin_best["energy"] >= 10.0,
        "cmos_label": "calibrated-to-published-claims",
    }


def cmos_sweep(s: Scenario, scales, amp: cmos_mod.AmplifierModel):
    """CMOS design points for the scenario (calibrated model)."""
    hw = s.hardware
    syn_factor = 1.5 if s.programmable else 1.0
    out = []
    for scale in scales:
        energy, delay = cmos_mod.cmos_energy(amp, scale, s.n_cells,
                                             int(hw.n_synapses), syn_factor)
        area = cmos_mod.cmos_area(int(hw.n_synapses), hw.resolution_bits,
                                  amp, s.n_cells)
        out.append({"scale": scale, "delay": delay, "energy": energy,
                    "area": area})
    return out


def records_to_csv(records: list[SweepRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        e = r.energy
        lines.append(",".join([
            f"{r.v_drive:.6g}",
            str(r.size_mult),
            str(r.seed),
            "1" if r.converged else "0",
            f"{r.delay * 1e9:.6g}",
            f"{e.joule * 1e15:.6g}",
            f"{e.leakage * 1e15:.6g}",
            f"{e.dynamic * 1e15:.6g}",
            f"{e.total * 1e15:.6g}",
            f"{r.area * 1e12:.6g}",
        ]))
    return "\n".join(lines) + "\n"
