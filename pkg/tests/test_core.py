"""Shared domain types, pattern I/O and seeded noise injection."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spincnn import GLYPHS, load_glyph
from spincnn.constants import GAMMA, HBAR, KB, MU0, MU_B, Q
from spincnn.core import (MagnetParams, Pattern, SimConfig, TemplateSet,
                          add_noise, frame_to_pgm, load_pattern, make_rng,
                          save_pattern)


def test_constants_positive_codata():
    assert Q == 1.602176634e-19
    assert KB == 1.380649e-23
    for c in (Q, HBAR, MU0, KB, GAMMA, MU_B):
        assert c > 0


class TestMagnetParams:
    def test_default_geometry_and_material(self):
        p = MagnetParams()
        assert (p.length, p.width, p.thickness) == (30e-9, 30e-9, 2e-9)
        assert p.Ms == 5e5
        assert p.Ku == 6e4
        assert p.alpha == 0.01

    def test_derived_volume(self):
        assert MagnetParams().volume == pytest.approx(1.8e-24, rel=1e-12)

    def test_derived_hk_matches_formula(self):
        p = MagnetParams()
        assert p.Hk == pytest.approx(2 * p.Ku / (MU0 * p.Ms), rel=1e-15)
        assert p.Hk == pytest.approx(1.90986e5, rel=1e-4)

    def test_derived_ns_matches_formula(self):
        p = MagnetParams()
        assert p.Ns == pytest.approx(p.Ms * p.volume / MU_B, rel=1e-15)
        assert p.Ns == pytest.approx(97045.4, rel=1e-4)

    def test_derived_values_track_overrides(self):
        p = MagnetParams(Ku=1.2e5)
        assert p.Hk == pytest.approx(2 * MagnetParams().Hk, rel=1e-12)

    @pytest.mark.parametrize("kwargs", [
        {"alpha": 0.0}, {"alpha": 1.0}, {"Ms": -1.0}, {"Ku": 0.0},
        {"length": 0.0}, {"thickness": -2e-9},
    ])
    def test_invalid_parameters_rejected(self, kwargs):
        with pytest.raises(ValueError):
            MagnetParams(**kwargs)


class TestPattern:
    def test_single_black_pixel(self):
        p = load_pattern("#")
        assert (p.rows, p.cols, p.pixels) == (1, 1, (1,))

    def test_two_by_two(self):
        p = load_pattern("#.\n.#")
        assert p.pixels == (1, -1, -1, 1)

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError, match="ragged"):
            load_pattern("##\n#")

    def test_illegal_character_rejected(self):
        with pytest.raises(ValueError, match="illegal"):
            load_pattern("#x")

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            load_pattern("  \n ")

    def test_pixel_domain_enforced(self):
        with pytest.raises(ValueError):
            Pattern(1, 2, (1, 0))
        with pytest.raises(ValueError):
            Pattern(2, 2, (1, -1, 1))  # wrong length

    @given(st.integers(1, 8), st.integers(1, 8), st.data())
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_identity(self, rows, cols, data):
        pixels = tuple(data.draw(st.sampled_from((-1, 1)))
                       for _ in range(rows * cols))
        p = Pattern(rows, cols, pixels)
        assert load_pattern(save_pattern(p)) == p

    def test_array_roundtrip(self):
        p = load_pattern("#.\n.#")
        assert Pattern.from_array(p.to_array()) == p


class TestGlyphs:
    def test_all_bundled_glyphs_load(self):
        for name in GLYPHS:
            g = load_glyph(name)
            assert (g.rows, g.cols) == (30, 20)
            assert len(g.pixels) == 600

    def test_unknown_glyph_rejected(self):
        with pytest.raises(ValueError, match="unknown glyph"):
            load_glyph("nine")


class TestAddNoise:
    def test_zero_fraction_is_identity(self):
        g = load_glyph("zero")
        assert add_noise(g, 0.0, 7) == g

    def test_full_fraction_negates(self):
        g = load_glyph("zero")
        noisy = add_noise(g, 1.0, 7)
        assert noisy.to_array().tolist() == (-g.to_array()).tolist()

    def test_ten_percent_flips_exactly_sixty(self):
        g = load_glyph("zero")
        noisy = add_noise(g, 0.1, 0)
        assert int(np.sum(noisy.to_array() != g.to_array())) == 60

    def test_seed_reproducible(self):
        g = load_glyph("zero")
        assert add_noise(g, 0.1, 3) == add_noise(g, 0.1, 3)
        assert add_noise(g, 0.1, 3) != add_noise(g, 0.1, 4)

    def test_fraction_out_of_range(self):
        with pytest.raises(ValueError):
            add_noise(load_glyph("zero"), 1.5, 0)

    @given(st.floats(0.0, 1.0), st.integers(0, 1000))
    @settings(max_examples=40, deadline=None)
    def test_hamming_distance_exact(self, fraction, seed):
        g = load_glyph("one")
        noisy = add_noise(g, fraction, seed)
        expected = int(round(fraction * 600))
        assert int(np.sum(noisy.to_array() != g.to_array())) == expected


class TestTemplateSet:
    def test_space_invariant_kind(self):
        t = TemplateSet(np.eye(3), np.zeros((3, 3)), 0.0)
        assert t.kind == "space-invariant"

    def test_space_varying_kind(self):
        A = np.zeros((4, 5, 3, 3))
        t = TemplateSet(A, A.copy(), np.zeros((4, 5)))
        assert t.kind == "space-varying"

    def test_per_cell_broadcasts_invariant(self):
        t = TemplateSet(np.eye(3), np.zeros((3, 3)), 2.0)
        A, B, I = t.per_cell(4, 5)
        assert A.shape == (4, 5, 3, 3)
        assert np.all(A[2, 3] == np.eye(3))
        assert np.all(I == 2.0)

    def test_bad_shapes_rejected(self):
        with pytest.raises(ValueError):
            TemplateSet(np.zeros((2, 2)), np.zeros((3, 3)), 0.0)


class TestSimConfig:
    def test_defaults(self):
        cfg = SimConfig()
        assert cfg.dt == 1e-12
        assert cfg.temperature == 300.0
        assert cfg.mz_threshold == 0.9
        assert cfg.hold_time == 0.5e-9

    @pytest.mark.parametrize("kwargs", [
        {"dt": 0.0}, {"t_max": 1e-13}, {"temperature": -1.0},
        {"mz_threshold": 0.0}, {"mz_threshold": 1.0}, {"hold_time": -1e-9},
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            SimConfig(**kwargs)


class TestRngStreams:
    def test_streams_independent(self):
        a = make_rng(1, 1).standard_normal(4)
        b = make_rng(1, 2).standard_normal(4)
        assert not np.allclose(a, b)

    def test_counter_step_keying(self):
        a = make_rng(1, 2, step=5).standard_normal(4)
        b = make_rng(1, 2, step=5).standard_normal(4)
        c = make_rng(1, 2, step=6).standard_normal(4)
        assert np.array_equal(a, b)
        assert not np.allclose(a, c)


def test_frame_to_pgm_endpoints():
    text = frame_to_pgm(np.array([[-1.0, 1.0], [0.0, 0.5]]))
    lines = text.splitlines()
    assert lines[0] == "P2"
    assert lines[1] == "2 2"
    assert lines[2] == "255"
    assert lines[3].split() == ["0", "255"]
    assert lines[4].split() == ["128", "191"]
