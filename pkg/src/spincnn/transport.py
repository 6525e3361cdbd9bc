"""Spin injection and 1-D drift-diffusion through the copper channel.

The spin accumulation mu_s obeys d^2 mu_s / dx^2 = mu_s / l_sf^2 on the
channel [0, L] with an ideal sink (mu_s = 0) underneath the output magnet
and a prescribed injected spin current at x = 0. The spin current is
J_s = (sigma / e) d mu_s / dx, so the delivered fraction has the closed
form Is(L) / Is(0) = 1 / cosh(L / l_sf).

Contributions from multiple input magnets superimpose exactly: the ideal
sink at the output absorbs the spins, so cross-diffusion between inputs is
neglected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .constants import Q


@dataclass(frozen=True)
class ChannelParams:
    """Copper channel between an input magnet and the output magnet."""

    L: float = 100e-9            # input-to-output spacing [m]
    l_sf: float = 420e-9         # spin relaxation length [m]
    sigma: float = 5.8e7         # channel conductivity [S/m]
    cross_section: float = 6e-17  # [m^2]
    beta: float = 0.5            # spin injection coefficient
    R_ground: float = 50.0       # ground path resistance [ohm]
    ground_spin_sink: float = 0.0  # fraction g of spin diverted to ground

    def __post_init__(self):
        if self.L < 0 or self.l_sf <= 0:
            raise ValueError("L must be >= 0 and l_sf > 0")
        if not 0 < self.beta <= 1:
            raise ValueError("beta must be in (0, 1]")
        if not 0 <= self.ground_spin_sink < 1:
            raise ValueError("ground_spin_sink must be in [0, 1)")


@dataclass(frozen=True)
class SynapseContribution:
    """One input magnet's weighted contribution to a neuron's spin current."""

    weight: float        # template units, signed
    input_level: int     # -1 / +1, or 0 when the driving transistor is off

    def __post_init__(self):
        if self.input_level not in (-1, 0, 1):
            raise ValueError("input_level must be -1, 0 or +1")


def spin_transmission(L: float, l_sf: float) -> float:
    """Delivered spin-current fraction Is(L)/Is(0) = 1/cosh(L/l_sf)."""
    if l_sf <= 0:
        raise ValueError("l_sf must be > 0")
    if L < 0:
        raise ValueError("L must be >= 0")
    return 1.0 / math.cosh(L / l_sf)


def injected_spin_current(charge_current: float, beta: float) -> float:
    """Spin current injected at the input magnet: beta * I_charge [A]."""
    if not 0 < beta <= 1:
        raise ValueError("beta must be in (0, 1]")
    return beta * charge_current


def solve_drift_diffusion(n_points: int, channel: ChannelParams,
                          injected_spin_current_A: float):
    """Finite-difference solution of the channel boundary-value problem.

    Returns (x, mu_s, J_s): node positions [m], spin accumulation [J] and
    spin current [A] on a uniform grid of n_points nodes. Second-order
    discretization; the transmission Js(L)/Js(0) converges to the closed
    form at O(1/N^2).
    """
    if n_points < 16:
        raise ValueError("need at least 16 grid points")
    L, l = channel.L, channel.l_sf
    n = n_points
    h = L / (n - 1)
    x = np.linspace(0.0, L, n)
    # conversion factor between d(mu_s)/dx and spin current
    k = channel.sigma * channel.cross_section / Q
    # unknowns mu_0 .. mu_{n-2}; mu_{n-1} = 0 (ideal sink)
    ab = np.zeros((3, n - 1))
    rhs = np.zeros(n - 1)
    c = h * h / (l * l)
    # Neumann BC at x = 0 via ghost node: mu_{-1} = mu_1 + 2 h mu'(0),
    # with k * mu'(0) = -I_inj (current flows toward the sink at +x for
    # positive injection).
    dmu0 = -injected_spin_current_A / k
    ab[1, :] = -(2.0 + c)
    ab[0, 1] = 2.0     # ghost-node reflection doubles the first superdiagonal
    ab[0, 2:] = 1.0
    ab[2, :-1] = 1.0
    rhs[0] = 2.0 * h * dmu0
    try:
        mu_in = solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise RuntimeError("singular drift-diffusion system") from exc
    mu = np.append(mu_in, 0.0)
    # spin current from second-order derivatives of mu_s
    dmu = np.gradient(mu, h, edge_order=2)
    J = -k * dmu
    return x, mu, J


def numeric_transmission(n_points: int, channel: ChannelParams) -> float:
    """Js(L)/Js(0) from the finite-difference solver."""
    _, _, J = solve_drift_diffusion(n_points, channel, 1e-6)
    return J[-1] / J[0]


def net_spin_current(contributions, i0: float, channel: ChannelParams) -> float:
    """Superposed perpendicular spin current delivered to one neuron [A].

    i0 is the injected spin current per unit template weight; the result is
    mapped onto the torque sign convention (positive drives m_z to +1).
    """
    if i0 <= 0:
        raise ValueError("i0 must be > 0")
    total_weight = sum(c.weight * c.input_level for c in contributions)
    factor = (1.0 - channel.ground_spin_sink) * spin_transmission(channel.L, channel.l_sf)
    return i0 * total_weight * factor
