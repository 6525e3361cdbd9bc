"""Line-oriented sectioned configuration: `[section]` headers, `key = value`
entries, `#` comments. Unknown sections or keys are rejected with the
offending line number; absent keys take the documented defaults.

Values are plain floats/ints in SI units except where noted; the drive IV
table uses the form `iv = (v1,i1);(v2,i2);...`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

from .analysis import EnergyParams
from .cmos import AmplifierModel, ChuaParams
from .core import MagnetParams, SimConfig
from .network import BOUNDARY_MINUS_ONE, BOUNDARY_ZERO_FLUX, CellModel
from .readpath import InverterModel, MtjParams
from .synapse import DriveModel
from .transport import ChannelParams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DriveConfig:
    """Synapse drive settings beyond the transistor model itself."""

    i0_over_ic: float = 10.0   # demo unit-weight current in critical currents
    i0: float | None = None    # absolute override [A]; wins when set


@dataclass(frozen=True)
class FullConfig:
    sim: SimConfig = field(default_factory=SimConfig)
    magnet: MagnetParams = field(default_factory=MagnetParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    mtj: MtjParams = field(default_factory=MtjParams)
    inverter: InverterModel = field(default_factory=InverterModel)
    drive_model: DriveModel = field(default_factory=DriveModel)
    drive: DriveConfig = field(default_factory=DriveConfig)
    chua: ChuaParams = field(default_factory=ChuaParams)
    amplifier: AmplifierModel = field(default_factory=AmplifierModel)
    energy: EnergyParams = field(default_factory=EnergyParams)
    boundary: str = BOUNDARY_MINUS_ONE
    explicit: frozenset = frozenset()   # (section, key) pairs set in the text

    def cell_model(self, i0: float) -> CellModel:
        return CellModel(self.magnet, self.channel, self.mtj, self.inverter,
                         i0, self.boundary)

    def was_set(self, section: str, key: str) -> bool:
        return (section, key) in self.explicit


def _float(s: str) -> float:
    return float(s)


def _int(s: str) -> int:
    return int(s, 0)


def _bool(s: str) -> bool:
    if s.lower() in ("1", "true", "yes", "on"):
        return True
    if s.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _iv_table(s: str):
    pairs = []
    for part in s.split(";"):
        part = part.strip()
        if not (part.startswith("(") and part.endswith(")")):
            raise ValueError(f"bad iv anchor {part!r}")
        v, i = part[1:-1].split(",")
        pairs.append((float(v), float(i)))
    return tuple(pairs)


def _boundary(s: str) -> str:
    if s not in (BOUNDARY_MINUS_ONE, BOUNDARY_ZERO_FLUX):
        raise ValueError(f"boundary must be {BOUNDARY_MINUS_ONE!r} or "
                         f"{BOUNDARY_ZERO_FLUX!r}")
    return s


# section -> key -> (dataclass field name, converter)
_SCHEMA = {
    "sim": {
        "dt": ("dt", _float), "t_max": ("t_max", _float),
        "temperature": ("temperature", _float), "seed": ("seed", _int),
        "hold_time": ("hold_time", _float),
        "mz_threshold": ("mz_threshold", _float),
        "sample_interval": ("sample_interval", _float),
    },
    "magnet": {
        "length": ("length", _float), "width": ("width", _float),
        "thickness": ("thickness", _float), "ms": ("Ms", _float),
        "ku": ("Ku", _float), "alpha": ("alpha", _float),
    },
    "channel": {
        "length": ("L", _float), "l_sf": ("l_sf", _float),
        "sigma": ("sigma", _float), "cross_section": ("cross_section", _float),
        "beta": ("beta", _float), "r_ground": ("R_ground", _float),
        "ground_spin_sink": ("ground_spin_sink", _float),
    },
    "mtj": {
        "t_ox_ref": ("t_ox_ref", _float), "t_ox_read": ("t_ox_read", _float),
        "r_p_at_2nm": ("R_P_at_2nm", _float),
        "lambda_ox": ("lambda_ox", _float), "tmr": ("TMR", _float),
        "v_read": ("V_read", _float),
    },
    "inverter": {
        "v_dd": ("V_dd", _float), "gain": ("gain", _float),
        "v_th": ("V_th", _float),
    },
    "drive_model": {
        "v_drive": ("V_drive", _float),
        "size": ("size_multiplier", _int),
        "iv": ("iv_table", _iv_table),
    },
    "drive": {
        "i0_over_ic": ("i0_over_ic", _float), "i0": ("i0", _float),
    },
    "cmos": {
        "r": ("R", _float), "c": ("C", _float),
        "smooth_output": ("smooth_output", _bool),
    },
    "amplifier": {
        "p_neuron": ("p_neuron", _float), "p_synapse": ("p_synapse", _float),
        "delay_0": ("delay_0", _float), "delay_floor": ("delay_floor", _float),
        "p_leak": ("p_leak", _float),
        "sram_retention": ("sram_retention", _float),
    },
    "energy": {
        "c_gate_unit": ("c_gate_unit", _float),
        "inverter_leakage": ("inverter_leakage", _float),
        "feature_size": ("feature_size", _float),
        "min_width_f": ("min_width_f", _float),
    },
    "network": {
        "boundary": ("boundary", _boundary),
    },
}

_TARGETS = {
    "sim": "sim", "magnet": "magnet", "channel": "channel", "mtj": "mtj",
    "inverter": "inverter", "drive_model": "drive_model", "drive": "drive",
    "cmos": "chua", "amplifier": "amplifier", "energy": "energy",
}


def parse_config(text: str) -> FullConfig:
    """Parse sectioned key=value text into a validated FullConfig."""
    overrides: dict[str, dict] = {sec: {} for sec in _SCHEMA}
    explicit = set()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header")
            section = line[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected `key = value`")
        if section is None:
            raise ConfigError(f"line {lineno}: entry before any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SCHEMA[section]:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in "
                              f"[{section}]")
        field_name, conv = _SCHEMA[section][key]
        try:
            overrides[section][field_name] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
        explicit.add((section, key))

    cfg = FullConfig(explicit=frozenset(explicit))
    parts = {}
    for section, target in _TARGETS.items():
        base = getattr(cfg, target)
        try:
            parts[target] = replace(base, **overrides[section]) if overrides[section] else base
        except ValueError as exc:
            raise ConfigError(f"[{section}]: {exc}") from exc
    boundary = overrides["network"].get("boundary", BOUNDARY_MINUS_ONE)
    return FullConfig(boundary=boundary, explicit=frozenset(explicit), **parts)


def load_config_file(path) -> FullConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
