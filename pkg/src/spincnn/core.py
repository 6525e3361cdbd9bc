"""Shared domain types, pattern I/O and seeded noise injection.

Pixel convention, used everywhere in the package: +1 = black = magnetization
pointing up (+z), -1 = white = magnetization pointing down (-z).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import MU0, MU_B

# Named sub-streams of the global seed; every consumer of randomness draws
# from a Philox counter keyed by (seed, stream, step) so that trajectories
# are reproducible regardless of evaluation order.
STREAM_PATTERN_NOISE = 1
STREAM_LLG = 2
STREAM_SWITCH = 3


def make_rng(seed: int, stream: int, step: int = 0) -> np.random.Generator:
    """Counter-based generator for a named (seed, stream, step) triple."""
    bg = np.random.Philox(key=np.array([seed & 0xFFFFFFFFFFFFFFFF, stream],
                                       dtype=np.uint64),
                          counter=np.array([0, 0, 0, step], dtype=np.uint64))
    return np.random.Generator(bg)


@dataclass(frozen=True)
class MagnetParams:
    """Geometry and material parameters of one macrospin magnet.

    Derived quantities (volume, magneton count, anisotropy field) are
    recomputed from the primary fields on every access so they can never
    go stale.
    """

    length: float = 30e-9      # [m]
    width: float = 30e-9       # [m]
    thickness: float = 2e-9    # [m]
    Ms: float = 5e5            # saturation magnetization [A/m]
    Ku: float = 6e4            # uniaxial perpendicular anisotropy [J/m^3]
    alpha: float = 0.01        # Gilbert damping

    def __post_init__(self):
        for name in ("length", "width", "thickness", "Ms", "Ku", "alpha"):
            if getattr(self, name) <= 0:
                raise ValueError(f"MagnetParams.{name} must be > 0")
        if self.alpha >= 1:
            raise ValueError("MagnetParams.alpha must be < 1")

    @property
    def volume(self) -> float:
        """Magnet volume [m^3]."""
        return self.length * self.width * self.thickness

    @property
    def Ns(self) -> float:
        """Number of magnetons, Ms * V / mu_B."""
        return self.Ms * self.volume / MU_B

    @property
    def Hk(self) -> float:
        """Uniaxial anisotropy field 2 Ku / (mu0 Ms) [A/m]."""
        return 2.0 * self.Ku / (MU0 * self.Ms)


@dataclass(frozen=True)
class Pattern:
    """Rectangular grid of bipolar pixels stored row-major."""

    rows: int
    cols: int
    pixels: tuple[int, ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("Pattern dimensions must be positive")
        if len(self.pixels) != self.rows * self.cols:
            raise ValueError("pixel count does not match rows * cols")
        if any(p not in (-1, 1) for p in self.pixels):
            raise ValueError("pixels must be -1 or +1")

    @classmethod
    def from_array(cls, arr) -> "Pattern":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("pattern array must be 2-D")
        return cls(arr.shape[0], arr.shape[1],
                   tuple(int(v) for v in arr.reshape(-1)))

    def to_array(self) -> np.ndarray:
        return np.array(self.pixels, dtype=np.int8).reshape(self.rows, self.cols)

    def __eq__(self, other):
        return (isinstance(other, Pattern) and self.rows == other.rows
                and self.cols == other.cols and self.pixels == other.pixels)

    def __hash__(self):
        return hash((self.rows, self.cols, self.pixels))


@dataclass(frozen=True)
class TemplateSet:
    """CNN template weights: 3x3 feedback A, 3x3 feedforward B, bias I.

    Space-invariant sets hold a single (A, B, I) triple with A, B of shape
    (3, 3); space-varying sets hold one triple per cell with A, B of shape
    (rows, cols, 3, 3) and I of shape (rows, cols).
    """

    A: np.ndarray
    B: np.ndarray
    I: np.ndarray | float

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if A.shape != B.shape:
            raise ValueError("A and B must have the same shape")
        if A.shape == (3, 3):
            object.__setattr__(self, "I", float(self.I))
        elif A.ndim == 4 and A.shape[2:] == (3, 3):
            I = np.asarray(self.I, dtype=float)
            if I.shape != A.shape[:2]:
                raise ValueError("I must have one entry per cell")
            object.__setattr__(self, "I", I)
        else:
            raise ValueError("templates must be 3x3 or (rows, cols, 3, 3)")

    @property
    def kind(self) -> str:
        return "space-invariant" if self.A.shape == (3, 3) else "space-varying"

    def per_cell(self, rows: int, cols: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcast to per-cell arrays of shape (rows, cols, 3, 3) / (rows, cols)."""
        if self.kind == "space-invariant":
            A = np.broadcast_to(self.A, (rows, cols, 3, 3))
            B = np.broadcast_to(self.B, (rows, cols, 3, 3))
            I = np.full((rows, cols), self.I)
            return A, B, I
        if self.A.shape[:2] != (rows, cols):
            raise ValueError("template grid shape does not match pattern shape")
        return self.A, self.B, self.I


@dataclass(frozen=True)
class SimConfig:
    """Time stepping, temperature and convergence-detection settings."""

    dt: float = 1e-12            # [s]
    t_max: float = 20e-9         # [s]
    temperature: float = 300.0   # [K]
    seed: int = 1
    hold_time: float = 0.5e-9    # stability window for convergence [s]
    mz_threshold: float = 0.9    # binary read threshold on |m_z|
    sample_interval: float = 0.1e-9  # trajectory frame spacing [s]

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if self.t_max < self.dt:
            raise ValueError("t_max must be >= dt")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if not 0 < self.mz_threshold < 1:
            raise ValueError("mz_threshold must be in (0, 1)")
        if self.hold_time < 0:
            raise ValueError("hold_time must be >= 0")


# ---------------------------------------------------------------------------
# Pattern text format: '#' = +1 (black), '.' = -1 (white), one row per line.

def load_pattern(text: str) -> Pattern:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty pattern text")
    cols = len(lines[0])
    pixels = []
    for i, ln in enumerate(lines):
        if len(ln) != cols:
            raise ValueError(f"ragged row {i + 1}: expected {cols} columns, got {len(ln)}")
        for ch in ln:
            if ch == "#":
                pixels.append(1)
            elif ch == ".":
                pixels.append(-1)
            else:
                raise ValueError(f"illegal character {ch!r} in row {i + 1}")
    return Pattern(len(lines), cols, tuple(pixels))


def save_pattern(p: Pattern) -> str:
    rows = []
    for r in range(p.rows):
        row = p.pixels[r * p.cols:(r + 1) * p.cols]
        rows.append("".join("#" if v == 1 else "." for v in row))
    return "\n".join(rows) + "\n"


def load_pattern_file(path) -> Pattern:
    with open(path, "r", encoding="ascii") as fh:
        return load_pattern(fh.read())


def add_noise(p: Pattern, fraction: float, seed: int) -> Pattern:
    """Flip exactly round(fraction * N) distinct pixels, chosen uniformly."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must be in [0, 1]")
    n = p.rows * p.cols
    k = int(round(fraction * n))
    rng = make_rng(seed, STREAM_PATTERN_NOISE)
    idx = rng.choice(n, size=k, replace=False)
    pixels = list(p.pixels)
    for i in idx:
        pixels[i] = -pixels[i]
    return Pattern(p.rows, p.cols, tuple(pixels))


def frame_to_pgm(values: np.ndarray) -> str:
    """ASCII P2 image of per-cell values in [-1, 1]; 0 = white, 255 = black."""
    values = np.asarray(values, dtype=float)
    gray = np.clip(np.rint((values + 1.0) * 127.5), 0, 255).astype(int)
    rows, cols = gray.shape
    lines = [f"P2", f"{cols} {rows}", "255"]
    for r in range(rows):
        lines.append(" ".join(str(v) for v in gray[r]))
    return "\n".join(lines) + "\n"
