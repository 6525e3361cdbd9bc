"""Spintronic CNN engine: a grid of macrospin neurons coupled through
spin-current synapses with strictly nearest-neighbor (3x3) connectivity.

Update semantics are synchronous: every cell's logic output is read from
the current magnetizations, all net spin currents are assembled from those
outputs, and only then is every magnet advanced one LLG step. Thermal
noise is drawn from a counter-based stream keyed by (seed, step), so
trajectories are bit-reproducible regardless of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .core import (Pattern, SimConfig, TemplateSet, make_rng, STREAM_LLG)
from .core import MagnetParams
from .readpath import InverterModel, MtjParams, logic_mz_boundary
from .synapse import LEVELS_PER_UNIT_WEIGHT, quantize_weight
from .transport import ChannelParams, spin_transmission

BOUNDARY_MINUS_ONE = "minus-one"
BOUNDARY_ZERO_FLUX = "zero-flux"


@dataclass(frozen=True)
class CellModel:
    """Everything a neuron needs besides its state: device parameters and
    the unit-weight spin current."""

    magnet: MagnetParams = MagnetParams()
    channel: ChannelParams = ChannelParams()
    mtj: MtjParams = MtjParams()
    inverter: InverterModel = InverterModel()
    i0: float = 0.0               # injected spin current per unit weight [A]
    boundary: str = BOUNDARY_MINUS_ONE

    def __post_init__(self):
        if self.boundary not in (BOUNDARY_MINUS_ONE, BOUNDARY_ZERO_FLUX):
            raise ValueError(f"unknown boundary rule {self.boundary!r}")

    @property
    def logic_boundary_mz(self) -> float:
        b = logic_mz_boundary(self.mtj, self.inverter)
        return 0.0 if abs(b) < 1e-12 else b

    @property
    def delivery_factor(self) -> float:
        ch = self.channel
        return (1.0 - ch.ground_spin_sink) * spin_transmission(ch.L, ch.l_sf)


@dataclass
class CnnGrid:
    """Mutable network state: per-cell magnetization and fixed inputs."""

    m: np.ndarray                 # (rows, cols, 3) unit vectors
    u: np.ndarray                 # (rows, cols) bipolar inputs
    templates: TemplateSet
    step_index: int = 0

    @property
    def rows(self) -> int:
        return self.m.shape[0]

    @property
    def cols(self) -> int:
        return self.m.shape[1]

    @classmethod
    def from_pattern(cls, initial: Pattern, inputs: Pattern,
                     templates: TemplateSet) -> "CnnGrid":
        if (initial.rows, initial.cols) != (inputs.rows, inputs.cols):
            raise ValueError("initial state and input shapes differ")
        state = initial.to_array().astype(float)
        m = np.zeros((initial.rows, initial.cols, 3))
        m[:, :, 2] = state
        return cls(m, inputs.to_array().astype(float), templates)

    def logic_pattern(self, model: CellModel) -> Pattern:
        logic = np.where(self.m[:, :, 2] > model.logic_boundary_mz, 1, -1)
        return Pattern.from_array(logic)


@dataclass
class Trajectory:
    """Sampled m_z frames plus convergence and activity bookkeeping."""

    times: np.ndarray                 # strictly increasing sample times [s]
    mz: np.ndarray                    # (n_samples, rows, cols)
    convergence_time: float | None
    final_pattern: Pattern
    initial_pattern: Pattern
    flipped_pixels: int               # Hamming(initial, final) activity count
    seed: int

    @property
    def converged(self) -> bool:
        return self.convergence_time is not None


def _pad(arr: np.ndarray, boundary: str) -> np.ndarray:
    if boundary == BOUNDARY_ZERO_FLUX:
        return np.pad(arr, 1, mode="edge")
    return np.pad(arr, 1, mode="constant", constant_values=-1.0)


def _template_drive(y: np.ndarray, u: np.ndarray, templates: TemplateSet,
                    boundary: str) -> np.ndarray:
    """Per-cell weighted sum of neighbor outputs/inputs plus bias."""
    rows, cols = y.shape
    A, B, I = templates.per_cell(rows, cols)
    yp = _pad(y, boundary)
    up = _pad(u, boundary)
    acc = np.array(np.broadcast_to(I, (rows, cols)), dtype=float, copy=True)
    for dr in range(3):
        for dc in range(3):
            a = A[:, :, dr, dc]
            b = B[:, :, dr, dc]
            if np.any(a):
                acc += a * yp[dr:dr + rows, dc:dc + cols]
            if np.any(b):
                acc += b * up[dr:dr + rows, dc:dc + cols]
    return acc


def _currents_from_outputs(y: np.ndarray, grid: CnnGrid,
                           model: CellModel) -> np.ndarray:
    weights = _template_drive(y, grid.u, grid.templates, model.boundary)
    return model.i0 * weights * model.delivery_factor


def net_currents(grid: CnnGrid, model: CellModel) -> np.ndarray:
    """Net perpendicular spin current per neuron [A] at the current state."""
    y = np.where(grid.m[:, :, 2] > model.logic_boundary_mz, 1.0, -1.0)
    return _currents_from_outputs(y, grid, model)


def step(grid: CnnGrid, cfg: SimConfig, model: CellModel,
         currents: np.ndarray | None = None) -> CnnGrid:
    """One synchronous update; outputs for step n+1 use magnetizations
    from step n."""
    if cfg.dt > dynamics.MAX_DT:
        raise ValueError(f"dt = {cfg.dt} exceeds stability guard {dynamics.MAX_DT}")
    Is = net_currents(grid, model) if currents is None else currents
    torque = dynamics.stt_rate(model.magnet, Is)
    sigma = dynamics.thermal_sigma(model.magnet, cfg.temperature, cfg.dt)
    if sigma:
        rng = make_rng(cfg.seed, STREAM_LLG, grid.step_index)
        thermal = rng.standard_normal(grid.m.shape) * sigma
    else:
        thermal = np.zeros(grid.m.shape)
    m = dynamics.heun_step(grid.m, model.magnet, torque, thermal, cfg.dt)
    return CnnGrid(m, grid.u, grid.templates, grid.step_index + 1)


def _settled(grid: CnnGrid, model: CellModel, cfg: SimConfig,
             Is: np.ndarray) -> bool:
    """All magnets saturated and no net current opposes its magnet.

    The torque-consistency clause distinguishes a genuine fixed point from
    the slow early escape from the pole, where a driven magnet still sits
    at |m_z| > threshold, and keeps sub-critically driven wrong pixels
    reported as non-converged.
    """
    mz = grid.m[:, :, 2]
    if not np.all(np.abs(mz) >= cfg.mz_threshold):
        return False
    return bool(np.all(Is * np.sign(mz) >= 0.0))


def run(grid: CnnGrid, cfg: SimConfig, model: CellModel) -> Trajectory:
    """Step until settled continuously for hold_time, or t_max.

    Settled means every |m_z| is at or above the threshold and no cell's
    net spin current opposes its magnetization.
    """
    initial = grid.logic_pattern(model)
    times = [0.0]
    frames = [grid.m[:, :, 2].copy()]
    sample_every = max(int(round(cfg.sample_interval / cfg.dt)), 1)
    hold_steps = max(int(round(cfg.hold_time / cfg.dt)), 0)
    n_steps = int(round(cfg.t_max / cfg.dt))
    y = np.where(grid.m[:, :, 2] > model.logic_boundary_mz, 1.0, -1.0)
    Is = _currents_from_outputs(y, grid, model)
    ok_run = 1 if _settled(grid, model, cfg, Is) else 0
    conv_time = 0.0 if (hold_steps == 0 and ok_run) else None
    for n in range(1, n_steps + 1):
        grid = step(grid, cfg, model, currents=Is)
        t = n * cfg.dt
        if n % sample_every == 0 or n == n_steps:
            times.append(t)
            frames.append(grid.m[:, :, 2].copy())
        # currents only change when some logic output flips
        y_new = np.where(grid.m[:, :, 2] > model.logic_boundary_mz, 1.0, -1.0)
        if not np.array_equal(y_new, y):
            y = y_new
            Is = _currents_from_outputs(y, grid, model)
        if _settled(grid, model, cfg, Is):
            ok_run += 1
            if conv_time is None and ok_run > hold_steps:
                conv_time = t
                if times[-1] != t:
                    times.append(t)
                    frames.append(grid.m[:, :, 2].copy())
                break
        else:
            ok_run = 0
    final = grid.logic_pattern(model)
    flips = int(np.sum(final.to_array() != initial.to_array()))
    return Trajectory(np.array(times), np.array(frames), conv_time,
                      final, initial, flips, cfg.seed)


def noise_filter_templates() -> TemplateSet:
    """Spintronic noise-filter templates: cross-shaped A with center 1."""
    A = np.array([[0.0, 1.0, 0.0],
                  [1.0, 1.0, 1.0],
                  [0.0, 1.0, 0.0]])
    return TemplateSet(A, np.zeros((3, 3)), 0.0)


def hebbian_train(pairs: list[tuple[Pattern, Pattern]],
                  quantize: bool = True) -> TemplateSet:
    """Space-varying templates from the local outer-product rule.

    For each cell and each 3x3 neighbor offset,
        A = mean_p target * target_neighbor,
        B = mean_p target * cue_neighbor,
        I = 0,
    with -1 virtual values outside the grid. Weights are scaled by 4
    (unit weight = synapse level 4) and snapped to representable levels.
    """
    if not pairs:
        raise ValueError("empty training set")
    shapes = {(c.rows, c.cols) for c, t in pairs} | {(t.rows, t.cols) for c, t in pairs}
    if len(shapes) != 1:
        raise ValueError("all training patterns must share one shape")
    rows, cols = shapes.pop()
    A = np.zeros((rows, cols, 3, 3))
    B = np.zeros((rows, cols, 3, 3))
    for cue, target in pairs:
        c = np.pad(cue.to_array().astype(float), 1, constant_values=-1.0)
        t = target.to_array().astype(float)
        for dr in range(3):
            for dc in range(3):
                tp = np.pad(t, 1, constant_values=-1.0)
                A[:, :, dr, dc] += t * tp[dr:dr + rows, dc:dc + cols]
                B[:, :, dr, dc] += t * c[dr:dr + rows, dc:dc + cols]
    A /= len(pairs)
    B /= len(pairs)
    I = np.zeros((rows, cols))
    if quantize:
        A = quantize_templates(A)
        B = quantize_templates(B)
    return TemplateSet(A, B, I)


def quantize_templates(weights: np.ndarray) -> np.ndarray:
    """Snap template-unit weights to representable synapse levels / 4."""
    q = np.vectorize(lambda w: quantize_weight(w * LEVELS_PER_UNIT_WEIGHT))
    return q(weights) / LEVELS_PER_UNIT_WEIGHT


def run_associative(cue: Pattern, templates: TemplateSet, cfg: SimConfig,
                    model: CellModel) -> Trajectory:
    """Recall run: the cue is both the initial state and the input image."""
    if templates.kind != "space-varying":
        raise ValueError("associative recall needs space-varying templates")
    grid = CnnGrid.from_pattern(cue, cue, templates)
    return run(grid, cfg, model)


# ---------------------------------------------------------------------------
# Template file schema: header "rows cols", then one line per cell
# (row-major) of 19 integers: 9 A levels, 9 B levels, 1 I level
# (levels are template units times 4).

def save_templates(t: TemplateSet, rows: int, cols: int) -> str:
    A, B, I = t.per_cell(rows, cols)
    lines = [f"{rows} {cols}"]
    for r in range(rows):
        for c in range(cols):
            vals = [int(round(v * LEVELS_PER_UNIT_WEIGHT))
                    for v in A[r, c].reshape(-1)]
            vals += [int(round(v * LEVELS_PER_UNIT_WEIGHT))
                     for v in B[r, c].reshape(-1)]
            vals.append(int(round(float(np.asarray(I)[r, c]) * LEVELS_PER_UNIT_WEIGHT)))
            lines.append(" ".join(str(v) for v in vals))
    return "\n".join(lines) + "\n"


def load_templates(text: str) -> TemplateSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        rows, cols = (int(v) for v in lines[0].split())
    except (ValueError, IndexError) as exc:
        raise ValueError("template file: bad header line") from exc
    if len(lines) != 1 + rows * cols:
        raise ValueError(f"template file: expected {rows * cols} cell lines, "
                         f"got {len(lines) - 1}")
    A = np.zeros((rows, cols, 3, 3))
    B = np.zeros((rows, cols, 3, 3))
    I = np.zeros((rows, cols))
    for idx, ln in enumerate(lines[1:]):
        vals = [int(v) for v in ln.split()]
        if len(vals) != 19:
            raise ValueError(f"template file: cell line {idx + 1} must have "
                             "19 integers")
        r, c = divmod(idx, cols)
        A[r, c] = np.array(vals[:9], dtype=float).reshape(3, 3) / LEVELS_PER_UNIT_WEIGHT
        B[r, c] = np.array(vals[9:18], dtype=float).reshape(3, 3) / LEVELS_PER_UNIT_WEIGHT
        I[r, c] = vals[18] / LEVELS_PER_UNIT_WEIGHT
    return TemplateSet(A, B, I)
