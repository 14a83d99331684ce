"""Per-OAM-state complex channel gains between every Tx/Rx antenna pair.

Gains are unit-power: transmit powers and purity weights are applied by
:mod:`oamlink.link`. Each state uses its own (ring-matched) waist, so
ω_l(z) and R_l(z) below always belong to the beam passed in.

Off-diagonal gains scale the self-link gain by the LG field ratio between
the receiver position and the intensity ring. The self-link keeps the
free-space magnitude βλ/(4π d_ii) with the misaligned azimuth as phase
reference (``diagonal="ideal"``); ``diagonal="envelope"`` applies the same
field ratio to it as well.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .beam import BeamParams, MisalignmentParams, r_max
from .errors import DomainError
from .geometry import (GEOMETRY_CONVENTIONS, ArrayGeometry, LinkGeometry, aligned_link,
                       misaligned_link)

__all__ = [
    "ChannelConfig",
    "ChannelMatrix",
    "aligned_gain",
    "misaligned_gain",
    "channel_matrix",
]

DIAGONAL_MODELS = ("ideal", "envelope")


@dataclass(frozen=True)
class ChannelConfig:
    wavelength: float
    gain_constant: complex = 1.0
    diagonal: str = "ideal"
    geometry: str = "signed"

    def __post_init__(self):
        if not abs(self.gain_constant) > 0:
            raise DomainError("gain constant beta must be nonzero")
        if not self.wavelength > 0:
            raise DomainError("wavelength must be > 0")
        if self.diagonal not in DIAGONAL_MODELS:
            raise DomainError(f"diagonal model must be one of {DIAGONAL_MODELS}")
        if self.geometry not in GEOMETRY_CONVENTIONS:
            raise DomainError(f"geometry convention must be one of {GEOMETRY_CONVENTIONS}")

    @property
    def wavenumber(self) -> float:
        return 2 * math.pi / self.wavelength


@dataclass(frozen=True)
class ChannelMatrix:
    """``entries[j-1, i-1]`` is the gain from Tx_i to Rx_j."""

    state: int
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def _gain(cfg: ChannelConfig, beam: BeamParams, link: LinkGeometry, self_distance: float,
          rmax: float, z: float, envelope: bool = True) -> complex:
    l = beam.oam_state
    base = cfg.gain_constant * cfg.wavelength / (4 * math.pi * self_distance)
    phase = cfg.wavenumber * self_distance + link.azimuth * l
    if envelope:
        excess = link.radial ** 2 - rmax ** 2
        R = beam.curvature(z)
        if not math.isinf(R):
            phase += math.pi * excess / (cfg.wavelength * R)
        base *= (link.radial / rmax) ** abs(l) * math.exp(-excess / beam.waist_at(z) ** 2)
    return base * cmath.exp(-1j * phase)


def aligned_gain(cfg: ChannelConfig, beam: BeamParams, geom: ArrayGeometry,
                 i: int, j: int, z: float) -> complex:
    """Gain from Tx_i to Rx_j with perfectly aligned arrays (state ``beam.oam_state``)."""
    rmax = r_max(beam, z)
    link = aligned_link(geom, i, j, rmax)
    own = aligned_link(geom, i, i, rmax)
    return _gain(cfg, beam, link, own.distance, rmax, z)


def misaligned_gain(cfg: ChannelConfig, beam: BeamParams, geom: ArrayGeometry,
                    mis: MisalignmentParams, i: int, j: int, z: float) -> complex:
    """Gain from Tx_i to Rx_j with the receive array shifted and tilted."""
    rmax = r_max(beam, z)
    link = misaligned_link(geom, i, j, rmax, mis, cfg.geometry)
    own = misaligned_link(geom, i, i, rmax, mis, cfg.geometry)
    envelope = i != j or cfg.diagonal == "envelope"
    return _gain(cfg, beam, link, own.distance, rmax, z, envelope)


def channel_matrix(cfg: ChannelConfig, beam: BeamParams, geom: ArrayGeometry,
                   mis: MisalignmentParams, z: float) -> ChannelMatrix:
    n = geom.num_antennas
    rmax = r_max(beam, z)
    h = np.empty((n, n), dtype=complex)
    for i in range(1, n + 1):
        own = misaligned_link(geom, i, i, rmax, mis, cfg.geometry).distance
        for j in range(1, n + 1):
            link = misaligned_link(geom, i, j, rmax, mis, cfg.geometry)
            envelope = i != j or cfg.diagonal == "envelope"
            h[j - 1, i - 1] = _gain(cfg, beam, link, own, rmax, z, envelope)
    h.flags.writeable = False
    return ChannelMatrix(beam.oam_state, h)
