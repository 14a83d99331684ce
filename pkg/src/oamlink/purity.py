"""OAM spiral-spectrum power weights under misalignment and turbulence.

For a transmitted state l_j the weight of detected state l = l_j + Δ is

    T_l(l_j) ∝ ∫ F(r) e^{-x} I_Δ(x) r dr,   x = 2 r² / ρ₀²,

over the receive annulus [r_max, r_max + dr], where F(r) is the azimuthal
integral of the misaligned intensity profile. Rows are renormalised to sum
to one; the raw values carry an extra 4π² factor and are available with
``PurityConfig(raw=True)``.

Inside F, the squared double Bessel sum is taken as a squared modulus. By
the generating functions Σ I_m(x) e^{imψ} = e^{x cos ψ} and
Σ J_n(y) e^{in(ψ'+π/2)} = e^{i y cos ψ'} that modulus is exactly
e^{2x cos(φ-θ)}; the tilt contributes a pure phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import special

from .beam import BeamParams, MisalignmentParams, matched_beam, r_max
from .errors import DomainError, UnsupportedState
from .quadrature import QuadratureConfig, SeriesConfig, adaptive_quad
from .turbulence import TurbulenceParams, beam_receiver_params, coherence_radius

__all__ = [
    "PurityConfig",
    "PurityMatrix",
    "log_radial_profile_F",
    "radial_profile_F",
    "purity_row",
    "power_weight",
    "purity_matrix",
]


@dataclass(frozen=True)
class PurityConfig:
    aperture_width: float | None = None  # None: ω_{l_j}(z) / 10
    halfwidth: int = 8
    series: SeriesConfig = field(default_factory=SeriesConfig)
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    raw: bool = False

    def __post_init__(self):
        if self.aperture_width is not None and not self.aperture_width > 0:
            raise DomainError("aperture width must be > 0")
        if self.halfwidth < 1:
            raise DomainError("detected-state halfwidth K must be >= 1")

    def width_for(self, beam: BeamParams, z: float) -> float:
        if self.aperture_width is not None:
            return self.aperture_width
        return beam.waist_at(z) / 10


@dataclass(frozen=True)
class PurityMatrix:
    """Rows: transmitted states; columns: detected offsets -K..K."""

    states: tuple[int, ...]
    offsets: tuple[int, ...]
    weights: np.ndarray

    def weight(self, transmitted: int, detected: int) -> float:
        row = self.states.index(transmitted)
        delta = detected - transmitted
        k = self.offsets[-1]
        if abs(delta) > k:
            return 0.0
        return float(self.weights[row, delta + k])


def _check_state(beam: BeamParams, mis: MisalignmentParams) -> None:
    if beam.oam_state < 1 and not mis.is_aligned:
        raise UnsupportedState(
            f"state {beam.oam_state} is not supported with nonzero misalignment")
    if beam.oam_state < 0:
        raise UnsupportedState("negative OAM states are not supported")


def log_radial_profile_F(beam: BeamParams, mis: MisalignmentParams, r: float, z: float,
                         quad: QuadratureConfig | None = None) -> float:
    """Natural log of F(r); F spans hundreds of decades across states."""
    if not r > 0:
        raise DomainError("F(r) requires r > 0")
    _check_state(beam, mis)
    l = abs(beam.oam_state)
    w2 = beam.waist_at(z) ** 2
    delta, theta = mis.displacement, mis.displacement_azimuth
    s = 2 * r ** 2 / w2
    eps = delta / r
    c = 4 * r * delta / w2

    def integrand(phi):
        mod2 = 1 - 2 * eps * np.cos(phi - theta) + eps ** 2
        return np.exp(l * np.log(mod2) + c * (np.cos(phi - theta) - 1))

    ang = adaptive_quad(integrand, 0.0, 2 * math.pi, quad).value
    out = (l * math.log(s) - s - 2 * (r ** 2 + delta ** 2) / w2
           + 2 * l * math.log(r) + c + math.log(ang))
    if beam.radial_index:
        out += 2 * math.log(abs(special.eval_genlaguerre(beam.radial_index, l, s)))
    return out


def radial_profile_F(beam: BeamParams, mis: MisalignmentParams, r: float, z: float,
                     quad: QuadratureConfig | None = None) -> float:
    """Azimuthally integrated misaligned intensity profile F(r) >= 0."""
    return math.exp(log_radial_profile_F(beam, mis, r, z, quad))


@lru_cache(maxsize=4096)
def purity_row(beam: BeamParams, mis: MisalignmentParams, turb: TurbulenceParams,
               z: float, cfg: PurityConfig = PurityConfig()) -> np.ndarray:
    """Power weights of detected offsets -K..K for transmitted ``beam``.

    The returned array is read-only; it is shared through the memo cache.
    """
    _check_state(beam, mis)
    K = cfg.halfwidth
    k = beam.wavenumber
    rho0 = coherence_radius(turb, beam_receiver_params(beam, z), k, z)
    if rho0.infinite:
        kern = np.zeros(K + 1)
        kern[0] = 1.0
    else:
        r0 = r_max(beam, z)
        dr = cfg.width_for(beam, z)
        log_f0 = log_radial_profile_F(beam, mis, r0, z, cfg.quad)
        orders = np.arange(K + 1)

        def integrand(rs):
            out = np.empty((rs.size, K + 2))
            for n, r in enumerate(rs):
                f = math.exp(log_radial_profile_F(beam, mis, r, z, cfg.quad) - log_f0)
                x = 2 * r ** 2 / rho0.rho0 ** 2
                out[n, :K + 1] = r * f * special.ive(orders, x)
                out[n, K + 1] = r * f
            return out

        res = adaptive_quad(integrand, r0, r0 + dr, cfg.quad).value
        kern = res[:K + 1] / res[K + 1]
    row = np.concatenate([kern[:0:-1], kern])
    if cfg.raw:
        row = 4 * math.pi ** 2 * row
    else:
        row = row / row.sum()
    row.flags.writeable = False
    return row


def power_weight(beam: BeamParams, mis: MisalignmentParams, turb: TurbulenceParams,
                 l: int, l_j: int, z: float, cfg: PurityConfig = PurityConfig()) -> float:
    """T_l(l_j, z): fraction of power sent in ``l_j`` that is detected in ``l``."""
    if beam.oam_state != l_j:
        raise DomainError(f"beam carries state {beam.oam_state}, not {l_j}")
    delta = l - l_j
    if abs(delta) > cfg.halfwidth:
        raise DomainError(f"|l - l_j| = {abs(delta)} exceeds halfwidth {cfg.halfwidth}")
    return float(purity_row(beam, mis, turb, z, cfg)[delta + cfg.halfwidth])


def purity_matrix(ref: BeamParams, mis: MisalignmentParams, turb: TurbulenceParams,
                  states: Sequence[int], z: float,
                  cfg: PurityConfig = PurityConfig()) -> PurityMatrix:
    """Purity rows for each state in ``states``, waists matched to ``ref``'s ring."""
    if not states:
        raise DomainError("at least one OAM state is required")
    if min(states) < 1:
        raise UnsupportedState("purity rows require OAM states >= 1")
    beams = [matched_beam(ref, l, z) for l in states]
    rows = np.vstack([purity_row(b, mis, turb, z, cfg) for b in beams])
    rows.flags.writeable = False
    K = cfg.halfwidth
    return PurityMatrix(tuple(b.oam_state for b in beams), tuple(range(-K, K + 1)), rows)
