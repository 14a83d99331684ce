"""Non-Kolmogorov turbulence: spectrum, wave structure function, coherence radius."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beam import BeamParams
from .errors import DomainError
from .quadrature import gamma_fn

__all__ = [
    "TurbulenceParams",
    "BeamReceiverParams",
    "CoherenceRadius",
    "spectral_amplitude",
    "generalized_structure_parameter",
    "inner_scale_wavenumber",
    "spectrum",
    "beam_receiver_params",
    "structure_function",
    "coherence_radius",
    "mutual_coherence",
]


@dataclass(frozen=True)
class TurbulenceParams:
    spectral_index: float = 3.7
    structure_constant: float = 3e-12
    inner_scale: float = 0.01
    outer_scale: float = 50.0

    def __post_init__(self):
        _check_alpha(self.spectral_index)
        if self.structure_constant < 0:
            raise DomainError("structure constant C_n^2 must be >= 0")
        if not 0 < self.inner_scale < self.outer_scale:
            raise DomainError("scales must satisfy 0 < inner < outer")


@dataclass(frozen=True)
class BeamReceiverParams:
    complementary: float
    diffraction: float


@dataclass(frozen=True)
class CoherenceRadius:
    rho0: float
    infinite: bool = False

    @classmethod
    def unbounded(cls) -> "CoherenceRadius":
        return cls(math.inf, True)


def _check_alpha(alpha: float) -> None:
    if not 3 < alpha < 4:
        raise DomainError(f"spectral index must satisfy 3 < α < 4, got {alpha}")


def spectral_amplitude(alpha: float) -> float:
    """A(α) = Γ(α-1) cos(απ/2) / (4π²)."""
    _check_alpha(alpha)
    return gamma_fn(alpha - 1) * math.cos(alpha * math.pi / 2) / (4 * math.pi ** 2)


def generalized_structure_parameter(turb: TurbulenceParams, k: float, z: float) -> float:
    """Generalised structure parameter C̃_n²(α); depends on k/z as written."""
    a = turb.spectral_index
    amp = spectral_amplitude(a)
    num = -gamma_fn(a) * (k / z) ** (a / 2 - 11 / 6) * turb.structure_constant
    den = (8 * math.pi ** 2 * gamma_fn(1 - 0.5 * a) * gamma_fn(0.5 * a) ** 2
           * math.sin(0.25 * math.pi * a) * amp)
    return num / den


def inner_scale_wavenumber(turb: TurbulenceParams) -> float:
    a = turb.spectral_index
    c = (2 * math.pi / 3 * gamma_fn((5 - a) / 2) * spectral_amplitude(a)) ** (1 / (a - 5))
    return c / turb.inner_scale


def spectrum(turb: TurbulenceParams, kappa, k: float, z: float):
    """Refractive-index power spectral density Φ_n(κ, α)."""
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa < 0):
        raise DomainError("kappa must be >= 0")
    a = turb.spectral_index
    km = inner_scale_wavenumber(turb)
    k0 = 2 * math.pi / turb.outer_scale
    pref = spectral_amplitude(a) * generalized_structure_parameter(turb, k, z)
    out = pref * np.exp(-kappa ** 2 / km ** 2) / (kappa ** 2 + k0 ** 2) ** (a / 2)
    return float(out) if out.ndim == 0 else out


def beam_receiver_params(beam: BeamParams, z: float) -> BeamReceiverParams:
    """Θ̄ = -z/R(z) and Λ = 2z/(k ω(z)²) for the beam at distance z."""
    R = beam.curvature(z)
    theta_bar = 0.0 if math.isinf(R) else -z / R
    lam = 2 * z / (beam.wavenumber * beam.waist_at(z) ** 2)
    return BeamReceiverParams(theta_bar, lam)


def _theta_factor(theta_bar: float, alpha: float) -> float:
    # ((1-Θ)^(α-1) - 1) / (Θ(α-1)), which tends to -1 as Θ -> 0
    if theta_bar == 0:
        return -1.0
    return math.expm1((alpha - 1) * math.log1p(-theta_bar)) / (theta_bar * (alpha - 1))


def _bracket(turb: TurbulenceParams, brp: BeamReceiverParams, k: float, z: float) -> float:
    a = turb.spectral_index
    return (-math.pi ** 2 * a * k ** 2 * z * spectral_amplitude(a)
            * generalized_structure_parameter(turb, k, z)
            * _theta_factor(brp.complementary, a)
            * gamma_fn(-a / 2) / gamma_fn(a / 2))


def structure_function(turb: TurbulenceParams, brp: BeamReceiverParams, rho,
                       k: float, z: float):
    """Closed-form wave structure function D(ρ, z) ∝ ρ^(α-2)."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise DomainError("rho must be >= 0")
    a = turb.spectral_index
    out = 2 ** (3 - a) * _bracket(turb, brp, k, z) * rho ** (a - 2)
    return float(out) if out.ndim == 0 else out


def coherence_radius(turb: TurbulenceParams, brp: BeamReceiverParams,
                     k: float, z: float) -> CoherenceRadius:
    """Spatial coherence radius ρ₀, the separation where D(ρ₀, z) = 2."""
    if turb.structure_constant == 0 or z == 0:
        return CoherenceRadius.unbounded()
    base = _bracket(turb, brp, k, z)
    if not base > 0:
        raise DomainError(
            f"coherence-radius base {base:.3e} is not positive for alpha = "
            f"{turb.spectral_index}; a real coherence radius does not exist")
    return CoherenceRadius(2 * base ** (1 / (2 - turb.spectral_index)))


def mutual_coherence(rho0: CoherenceRadius, r, dphi):
    """Quadratic-approximation mutual coherence between (r, φ) and (r, φ + Δφ)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("r must be >= 0")
    if rho0.infinite:
        out = np.ones(np.broadcast(r, np.asarray(dphi)).shape)
    else:
        out = np.exp(2 * r ** 2 * (np.cos(dphi) - 1) / rho0.rho0 ** 2)
    return float(out) if out.ndim == 0 else out
