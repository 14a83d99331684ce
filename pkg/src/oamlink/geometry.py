"""Uniform linear array layout and Tx-Rx link geometry.

Antenna indices are 1-based (Tx_1..Tx_N, Rx_1..Rx_N). Receivers sit on the
maximum-intensity ring of their co-indexed transmitter, in the plane z = d_TR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .beam import MisalignmentParams
from .errors import DomainError, IndexOutOfRange

__all__ = [
    "GEOMETRY_CONVENTIONS",
    "ArrayGeometry",
    "LinkGeometry",
    "aligned_link",
    "misaligned_link",
]


@dataclass(frozen=True)
class ArrayGeometry:
    num_antennas: int
    spacing: float
    link_distance: float

    def __post_init__(self):
        if self.num_antennas < 1:
            raise DomainError("num_antennas must be >= 1")
        if not self.spacing > 0:
            raise DomainError("antenna spacing must be > 0")
        if not self.link_distance > 0:
            raise DomainError("link distance must be > 0")

    def check(self, *indices: int) -> None:
        for idx in indices:
            if not 1 <= idx <= self.num_antennas:
                raise IndexOutOfRange(f"antenna index {idx} outside 1..{self.num_antennas}")


@dataclass(frozen=True)
class LinkGeometry:
    azimuth: float
    radial: float
    distance: float


def aligned_link(geom: ArrayGeometry, i: int, j: int, rmax: float) -> LinkGeometry:
    """Azimuth, radial offset and path length from Tx_i to Rx_j, aligned arrays."""
    geom.check(i, j)
    lateral = abs(i - j) * geom.spacing
    if j > i:
        phi = math.atan(rmax / lateral)
    elif j == i:
        phi = math.pi / 2
    else:
        phi = math.pi - math.atan(rmax / lateral)
    radial = math.sqrt(lateral ** 2 + rmax ** 2)
    distance = math.sqrt(geom.link_distance ** 2 + lateral ** 2 + rmax ** 2)
    return LinkGeometry(phi, radial, distance)


GEOMETRY_CONVENTIONS = ("signed", "printed")


def _azimuth(num: float, den: float, mirrored: bool) -> float:
    # atan form of the aligned expressions, with a quadrant fix when the
    # horizontal offset changes sign
    if den > 0:
        t = math.atan(num / den)
        return math.pi - t if mirrored else t
    if den == 0:
        return math.pi / 2
    return math.atan2(num, -den if mirrored else den)


def misaligned_link(geom: ArrayGeometry, i: int, j: int, rmax: float,
                    mis: MisalignmentParams, convention: str = "signed") -> LinkGeometry:
    """Link geometry when the receive array is shifted by δ and tilted by γ.

    The tilt moves each receiver by d_TR·tan(γ) along azimuth η in the
    receive plane; the lateral shift adds δ along azimuth θ. With the
    ``signed`` convention Rx_j sits at x = (j - i)·d_T + dx relative to Tx_i,
    so a rigid shift brings receivers on one side closer. ``printed`` adds
    dx to |i - j|·d_T on both sides.
    """
    if convention not in GEOMETRY_CONVENTIONS:
        raise DomainError(f"geometry convention must be one of {GEOMETRY_CONVENTIONS}")
    geom.check(i, j)
    tilt = geom.link_distance * math.tan(mis.deflection)
    dx = mis.displacement * math.cos(mis.displacement_azimuth) + tilt * math.cos(mis.deflection_azimuth)
    dy = mis.displacement * math.sin(mis.displacement_azimuth) + tilt * math.sin(mis.deflection_azimuth)
    lateral = abs(i - j) * geom.spacing
    num = dy + rmax
    if j == i:
        across = dx
        phi = _azimuth(num, dx, False)
    elif j > i or convention == "printed":
        across = lateral + dx
        phi = _azimuth(num, across, j < i)
    else:
        across = lateral - dx
        phi = _azimuth(num, across, True)
    radial = math.sqrt(across ** 2 + num ** 2)
    distance = math.sqrt(geom.link_distance ** 2 + across ** 2 + num ** 2)
    return LinkGeometry(phi, radial, distance)
