"""Conventional analog CNN baseline: Chua's state equation plus a
calibrated amplifier power/delay/area scaling model.

The cell dynamics are

    C dx/dt = -x/R + sum(A y_neighbors) + sum(B u_neighbors) + I,
    y = f(x),

integrated with classical RK4 on the grid. The output function is the
standard piecewise-linear saturation 0.5 (|x+1| - |x-1|); a smooth
tanh option is kept behind a flag for sensitivity checks.

The power/delay numbers are NOT derived from circuit simulation: they are
a two-parameter calibration (P_0, delay_0 per cell at unit bias) chosen to
reproduce the published trade-off shape, and every report produced from
them is labeled accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChuaParams:
    R: float = 1.0   # linear feedback resistance (normalized units)
    C: float = 1.0   # cell capacitance (normalized units)
    smooth_output: bool = False

    def __post_init__(self):
        if self.R <= 0 or self.C <= 0:
            raise ValueError("R and C must be > 0")

    @property
    def tau(self) -> float:
        return self.R * self.C


@dataclass(frozen=True)
class AmplifierModel:
    """Calibrated per-cell amplifier/OTA scaling model (16 nm class)."""

    p_neuron: float = 4e-5        # neuron bias power at unit scale [W]
    p_synapse: float = 8e-6       # per-synapse bias power at unit scale [W]
    delay_0: float = 100e-9       # convergence delay at unit scale [s]
    delay_floor: float = 10e-9    # bandwidth/DC-gain limit [s]
    p_leak: float = 0.0           # scale-independent static power per cell [W]
    sram_retention: float = 5e-8  # idle retention power per synapse [W]
    feature_size: float = 16e-9   # minimum feature size F [m]
    min_width_f: float = 4.0      # minimum transistor width in units of F
    amp_widths: tuple[float, ...] = (2, 2, 2, 2, 2, 2, 2)  # 7-transistor op amp
    ota_base_width: float = 6.0   # fixed OTA transistors per synapse stage
    sign_overhead_width: float = 8.0  # inverter + mux + memory per synapse

    def __post_init__(self):
        if len(self.amp_widths) != 7:
            raise ValueError("amplifier model uses 7 transistors")
        if self.delay_floor <= 0 or self.delay_0 <= 0:
            raise ValueError("delays must be > 0")


def f_output(x):
    """Standard CNN saturation 0.5 (|x+1| - |x-1|), elementwise."""
    x = np.asarray(x, dtype=float)
    return 0.5 * (np.abs(x + 1.0) - np.abs(x - 1.0))


def _outputs(x, p: ChuaParams):
    return np.tanh(x) if p.smooth_output else f_output(x)


def _grid_derivative(x: np.ndarray, u: np.ndarray, A: np.ndarray,
                     B: np.ndarray, I: np.ndarray, p: ChuaParams,
                     boundary: float) -> np.ndarray:
    """dx/dt over the whole grid; A, B per-cell (rows, cols, 3, 3)."""
    y = _outputs(x, p)
    rows, cols = x.shape
    yp = np.full((rows + 2, cols + 2), f_output(boundary))
    up = np.full((rows + 2, cols + 2), float(boundary))
    yp[1:-1, 1:-1] = y
    up[1:-1, 1:-1] = u
    acc = np.array(I, dtype=float, copy=True)
    for dr in range(3):
        for dc in range(3):
            acc += A[:, :, dr, dc] * yp[dr:dr + rows, dc:dc + cols]
            acc += B[:, :, dr, dc] * up[dr:dr + rows, dc:dc + cols]
    return (-x / p.R + acc) / p.C


def cell_derivative(x: np.ndarray, u: np.ndarray, cell: tuple[int, int],
                    templates, p: ChuaParams, boundary: float = -1.0) -> float:
    """dx/dt of one cell (Chua state equation divided by C)."""
    rows, cols = np.asarray(x).shape
    A, B, I = templates.per_cell(rows, cols)
    d = _grid_derivative(np.asarray(x, dtype=float), np.asarray(u, dtype=float),
                         A, B, I, p, boundary)
    return float(d[cell])


def integrate(x0: np.ndarray, u: np.ndarray, templates, p: ChuaParams,
              dt: float, t_max: float, hold_time: float = 0.0,
              boundary: float = -1.0, sample_interval: float | None = None):
    """RK4 integration of the grid; converges when all |x| >= 1 stably.

    Returns (times, states, convergence_time); convergence_time is None
    when the hold condition is never met before t_max.
    """
    if dt > p.tau / 10.0:
        raise ValueError(f"dt = {dt} exceeds stability guard tau/10 = {p.tau / 10}")
    x = np.array(x0, dtype=float)
    u = np.asarray(u, dtype=float)
    rows, cols = x.shape
    A, B, I = templates.per_cell(rows, cols)

    def f(state):
        return _grid_derivative(state, u, A, B, I, p, boundary)

    times = [0.0]
    states = [x.copy()]
    hold_steps = max(int(round(hold_time / dt)), 0)
    ok_run = 1 if np.all(np.abs(x) >= 1.0) else 0
    conv_time = None
    if hold_steps == 0 and ok_run:
        conv_time = 0.0
    n_steps = int(round(t_max / dt))
    sample_every = max(int(round((sample_interval or dt) / dt)), 1)
    for step in range(1, n_steps + 1):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = step * dt
        if step % sample_every == 0 or step == n_steps:
            times.append(t)
            states.append(x.copy())
        if np.all(np.abs(x) >= 1.0):
            ok_run += 1
            if conv_time is None and ok_run > hold_steps:
                conv_time = t
                break
        else:
            ok_run = 0
    return np.array(times), np.array(states), conv_time


def cmos_noise_filter_templates():
    """CMOS counterpart of the spintronic filter: center weight 2."""
    from .core import TemplateSet
    A = np.array([[0.0, 1.0, 0.0],
                  [1.0, 2.0, 1.0],
                  [0.0, 1.0, 0.0]])
    return TemplateSet(A, np.zeros((3, 3)), 0.0)


def cmos_power_delay(a: AmplifierModel, scale: float,
                     n_cells: int = 1, n_syn: int = 0,
                     syn_power_factor: float = 1.0) -> tuple[float, float]:
    """(power [W], delay [s]) at a bias multiplier.

    Power scales linearly with bias; delay shortens as 1/scale down to the
    amplifier bandwidth floor.
    """
    if scale <= 0:
        raise ValueError("scale must be > 0")
    per_cell = a.p_neuron + n_syn * a.p_synapse * syn_power_factor
    power = n_cells * (per_cell * scale + a.p_leak)
    delay = max(a.delay_0 / scale, a.delay_floor)
    return power, delay


def cmos_energy(a: AmplifierModel, scale: float, n_cells: int, n_syn: int,
                syn_power_factor: float = 1.0) -> tuple[float, float]:
    """(energy per operation [J], delay [s]) for one converged run."""
    power, delay = cmos_power_delay(a, scale, n_cells, n_syn, syn_power_factor)
    return power * delay, delay


def cmos_area(synapse_count: int, resolution_bits: int, a: AmplifierModel,
              n_cells: int = 1) -> float:
    """Footprint from summed transistor widths times 8F.

    Per neuron: the 7-transistor op amp. Per synapse: a transconductance
    stage with quantized tail widths (1, 2, 4, ... per resolution bit)
    plus the sign/mux/memory overhead transistors.
    """
    if synapse_count < 0 or resolution_bits < 1 or n_cells <= 0:
        raise ValueError("counts must be positive")
    w_min = a.min_width_f * a.feature_size
    neuron_w = sum(a.amp_widths)
    tail_w = sum(2 ** b for b in range(resolution_bits))
    syn_w = a.ota_base_width + tail_w + a.sign_overhead_width
    total_width = n_cells * (neuron_w + synapse_count * syn_w) * w_min
    return total_width * 8.0 * a.feature_size
