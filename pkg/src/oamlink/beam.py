"""Laguerre-Gaussian beam fields, aligned and misaligned, and waist matching."""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass

from scipy import special

from .errors import DomainError, NoRoot, UnsupportedState
from .quadrature import SeriesConfig, bessel_i_scaled, bessel_j, bilateral_sum

__all__ = [
    "BeamParams",
    "MisalignmentParams",
    "CylPoint",
    "BeamDerived",
    "derived",
    "lg_field",
    "r_max",
    "match_waist",
    "matched_beam",
    "lg_field_displaced",
    "lg_field_tilted",
    "lg_field_displaced_tilted",
]


@dataclass(frozen=True)
class BeamParams:
    """One LG mode: wavelength, waist at z = 0, OAM state and radial index."""

    wavelength: float
    waist: float
    oam_state: int
    radial_index: int = 0
    amplitude: complex = 1.0

    def __post_init__(self):
        if not self.wavelength > 0:
            raise DomainError("wavelength must be > 0")
        if not self.waist > 0:
            raise DomainError("waist must be > 0")
        if self.radial_index < 0:
            raise DomainError("radial index must be >= 0")

    @property
    def wavenumber(self) -> float:
        return 2 * math.pi / self.wavelength

    @property
    def rayleigh(self) -> float:
        return math.pi * self.waist ** 2 / self.wavelength

    def waist_at(self, z: float) -> float:
        return self.waist * math.sqrt(1 + (z / self.rayleigh) ** 2)

    def curvature(self, z: float) -> float:
        """Wavefront curvature radius R(z); infinite at the waist plane."""
        if z == 0:
            return math.inf
        return z * (1 + (self.rayleigh / z) ** 2)

    def gouy(self, z: float) -> float:
        return math.atan(z / self.rayleigh)

    def with_waist(self, waist: float, oam_state: int | None = None) -> "BeamParams":
        return BeamParams(self.wavelength, waist,
                          self.oam_state if oam_state is None else oam_state,
                          self.radial_index, self.amplitude)


@dataclass(frozen=True)
class MisalignmentParams:
    """Receiver-side misalignment: lateral shift (δ, θ) and tilt (γ, η)."""

    displacement: float = 0.0
    displacement_azimuth: float = 0.0
    deflection: float = 0.0
    deflection_azimuth: float = 0.0

    def __post_init__(self):
        if self.displacement < 0:
            raise DomainError("displacement must be >= 0")
        if not 0 <= self.deflection < math.pi / 2:
            raise DomainError("deflection must lie in [0, pi/2)")

    def tilt_wavenumber(self, wavelength: float) -> float:
        """Transverse wavenumber of the tilted beam, k*sin(γ).

        This relation is an interpretation: the source model only says the
        quantity is related to the deflection angle.
        """
        return 2 * math.pi / wavelength * math.sin(self.deflection)

    @property
    def is_aligned(self) -> bool:
        return self.displacement == 0 and self.deflection == 0


@dataclass(frozen=True)
class CylPoint:
    r: float
    phi: float
    z: float

    def __post_init__(self):
        if self.r < 0:
            raise DomainError("radial coordinate must be >= 0")


@dataclass(frozen=True)
class BeamDerived:
    waist_at_z: float
    rayleigh: float
    gouy: float
    curvature: float


def derived(params: BeamParams, z: float) -> BeamDerived:
    return BeamDerived(params.waist_at(z), params.rayleigh, params.gouy(z), params.curvature(z))


def lg_field(params: BeamParams, pt: CylPoint) -> complex:
    """Complex LG field amplitude u(r, φ, z) with helical phase exp(-ilφ)."""
    if pt.z < 0:
        raise DomainError("z must be >= 0")
    p, l = params.radial_index, params.oam_state
    al = abs(l)
    w = params.waist_at(pt.z)
    norm = math.sqrt(math.factorial(p) / (math.pi * math.factorial(p + al)))
    s = 2 * pt.r ** 2 / w ** 2
    lag = 1.0 if p == 0 else float(special.eval_genlaguerre(p, al, s))
    R = params.curvature(pt.z)
    curv = 0.0 if math.isinf(R) else -math.pi * pt.r ** 2 / (params.wavelength * R)
    phase = (al + 2 * p + 1) * params.gouy(pt.z) + curv - l * pt.phi
    mag = norm / w * (math.sqrt(2) * pt.r / w) ** al * math.exp(-(pt.r / w) ** 2) * lag
    return params.amplitude * mag * cmath.exp(1j * phase)


def r_max(params: BeamParams, z: float) -> float:
    """Radius of the maximum-intensity ring at distance z."""
    if z < 0:
        raise DomainError("z must be >= 0")
    return params.waist_at(z) * math.sqrt(abs(params.oam_state) / 2)


def _ring_residual(ref: BeamParams, target_state: int, waist: float, z: float) -> float:
    target = ref.with_waist(waist, target_state)
    r_ref = r_max(ref, z)
    return (r_max(target, z) - r_ref) / r_ref


def match_waist(ref: BeamParams, target_state: int, z: float) -> float:
    """Waist of state ``target_state`` whose intensity ring coincides with ``ref``'s at z.

    Writing X for the squared target waist, equal ring radii with each beam's
    own Rayleigh distance gives

        |l'| π² X² - |l| (π² ω⁴ + z² λ²)/ω² X + |l'| z² λ² = 0.

    The larger root is taken: it is the branch that reduces to ω√(|l|/|l'|)
    at z = 0.
    """
    l, lt = abs(ref.oam_state), abs(target_state)
    if l == 0 or lt == 0:
        raise UnsupportedState("waist matching needs nonzero OAM states")
    if z < 0:
        raise DomainError("z must be >= 0")
    if lt == l:
        return ref.waist
    w2, lam = ref.waist ** 2, ref.wavelength
    a = lt * math.pi ** 2
    b = l * (math.pi ** 2 * w2 ** 2 + z ** 2 * lam ** 2) / w2
    c = lt * z ** 2 * lam ** 2
    disc = b * b - 4 * a * c
    if disc < 0:
        raise NoRoot(
            f"no waist for state {target_state} matches the ring of state "
            f"{ref.oam_state} (waist {ref.waist} m) at z = {z} m")
    x = (b + math.sqrt(disc)) / (2 * a)
    waist = math.sqrt(x)
    res = _ring_residual(ref, target_state, waist, z)
    if abs(res) >= 1e-9:
        raise NoRoot(f"waist matching residual {res:.3e} too large")
    return waist


def matched_beam(ref: BeamParams, state: int, z: float) -> BeamParams:
    """Beam for ``state`` whose waist is matched to ``ref``'s intensity ring at z."""
    return ref.with_waist(match_waist(ref, state, z), state)


def _require_supported(params: BeamParams) -> None:
    if params.oam_state < 0:
        raise UnsupportedState(
            "misaligned field expressions are only defined for OAM states >= 0")


def _common(params: BeamParams, pt: CylPoint):
    w = params.waist_at(pt.z)
    return lg_field(params, pt) / w, w


def _displacement_series(params, mis, pt, w, series):
    x = 2 * pt.r * mis.displacement / w ** 2
    psi = pt.phi - mis.displacement_azimuth
    # exp(-(r²+δ²)/ω²) I_m(x) = exp(-(r-δ)²/ω²) * [exp(-x) I_m(x)]
    env = math.exp(-(pt.r - mis.displacement) ** 2 / w ** 2)
    res = bilateral_sum(lambda m: bessel_i_scaled(m, x) * cmath.exp(1j * m * psi), series)
    return env * res.value


def _tilt_series(params, mis, pt, series):
    arg = mis.tilt_wavenumber(params.wavelength) * pt.r
    psi = pt.phi - mis.deflection_azimuth + math.pi / 2
    res = bilateral_sum(lambda n: bessel_j(n, arg) * cmath.exp(1j * n * psi), series)
    return res.value


def lg_field_displaced(params: BeamParams, mis: MisalignmentParams, pt: CylPoint,
                       series: SeriesConfig | None = None) -> complex:
    """Field under lateral displacement δ at azimuth θ (no tilt)."""
    if mis.deflection != 0:
        raise DomainError("lg_field_displaced requires zero deflection")
    _require_supported(params)
    base, w = _common(params, pt)
    lateral = (pt.r * cmath.exp(1j * pt.phi)
               - mis.displacement * cmath.exp(1j * mis.displacement_azimuth)) ** params.oam_state
    return base * lateral * _displacement_series(params, mis, pt, w, series)


def lg_field_tilted(params: BeamParams, mis: MisalignmentParams, pt: CylPoint,
                    series: SeriesConfig | None = None) -> complex:
    """Field under angular deflection γ at azimuth η (no lateral shift)."""
    if mis.displacement != 0:
        raise DomainError("lg_field_tilted requires zero displacement")
    _require_supported(params)
    base, w = _common(params, pt)
    ring = (pt.r * cmath.exp(1j * pt.phi)) ** params.oam_state * math.exp(-pt.r ** 2 / w ** 2)
    return base * ring * _tilt_series(params, mis, pt, series)


def lg_field_displaced_tilted(params: BeamParams, mis: MisalignmentParams, pt: CylPoint,
                              series: SeriesConfig | None = None) -> complex:
    """Field under combined displacement and deflection.

    The double sum over (m, n) factorises into the product of the two
    single bilateral sums, each truncated independently.
    """
    _require_supported(params)
    base, w = _common(params, pt)
    lateral = (pt.r * cmath.exp(1j * pt.phi)
               - mis.displacement * cmath.exp(1j * mis.displacement_azimuth)) ** params.oam_state
    return (base * lateral * _displacement_series(params, mis, pt, w, series)
            * _tilt_series(params, mis, pt, series))
