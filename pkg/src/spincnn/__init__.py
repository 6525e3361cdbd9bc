"""spincnn: device-to-system simulator for a spintronic cellular neural
network with macrospin neurons, spin-current synapses and a CMOS analog
baseline."""

from importlib import resources

from .core import Pattern, load_pattern

__version__ = "0.1.0"

GLYPHS = ("zero", "one", "two", "three", "four")


def load_glyph(name: str) -> Pattern:
    """Bundled 30x20 glyph pattern by name ('zero' .. 'four')."""
    if name not in GLYPHS:
        raise ValueError(f"unknown glyph {name!r}; choose from {GLYPHS}")
    text = resources.files("spincnn.assets").joinpath(f"{name}.pat").read_text()
    return load_pattern(text)
