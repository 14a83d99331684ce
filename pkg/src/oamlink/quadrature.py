"""Numeric substrate: special functions, adaptive quadrature and bilateral series.

Modified Bessel functions are only exposed in exponentially scaled form,
``exp(-x) * I_m(x)``, because every use in the physics modules pairs
``I_m`` with a cancelling exponential.
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .errors import DomainError, NonConvergence, PoleError, TruncationWarning

__all__ = [
    "QuadratureConfig",
    "SeriesConfig",
    "QuadResult",
    "SeriesResult",
    "adaptive_quad",
    "integrate_1d",
    "bessel_j",
    "bessel_i_scaled",
    "gamma_fn",
    "bilateral_sum",
    "gaussian_q",
]


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be > 0")
        if self.abs_tol < 0:
            raise DomainError("abs_tol must be >= 0")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class SeriesConfig:
    term_tol: float = 1e-10
    max_order: int = 60

    def __post_init__(self):
        if not self.term_tol > 0:
            raise DomainError("term_tol must be > 0")
        if self.max_order < 1:
            raise DomainError("max_order must be >= 1")


@dataclass(frozen=True)
class QuadResult:
    value: float | np.ndarray
    error: float | np.ndarray
    subdivisions: int


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    order: int
    truncated: bool


# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 nodes on [-1, 1] ordered left to right, with matching Kronrod weights
# and Gauss weights (zero at the Kronrod-only nodes).
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW_HALF = np.zeros(8)
_GW_HALF[[1, 3, 5]] = _WG[:3]
_GW_HALF[7] = _WG[3]
_GW = np.concatenate([_GW_HALF[:-1], _GW_HALF[::-1]])


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.asarray(f(mid + half * _NODES))
    kron = half * np.tensordot(_KW, vals, axes=(0, 0))
    gauss = half * np.tensordot(_GW, vals, axes=(0, 0))
    return kron, np.abs(kron - gauss)


def adaptive_quad(f: Callable, a: float, b: float,
                  cfg: QuadratureConfig | None = None) -> QuadResult:
    """Globally adaptive Gauss-Kronrod (7/15) quadrature.

    ``f`` is called with a 1-D array of 15 abscissae and must return an array
    whose leading axis matches; trailing axes make the integrand vector-valued,
    in which case every component must meet the tolerance.
    """
    cfg = cfg or QuadratureConfig()
    if not a < b:
        raise DomainError(f"integration bounds must satisfy a < b, got [{a}, {b}]")

    value, err = _gk15(f, a, b)
    if not np.all(np.isfinite(value)):
        raise DomainError("integrand is not finite on the integration interval")
    # heap of (-max_error, seq, a, b, value, err); seq keeps ordering deterministic
    heap = [(-float(np.max(err)), 0, a, b, value, err)]
    total, total_err = value, err
    seq = 1
    while True:
        tol = np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(total))
        if np.all(total_err <= tol):
            return QuadResult(_unwrap(total), _unwrap(total_err), seq)
        if seq >= cfg.max_subdivisions:
            raise NonConvergence(
                f"adaptive quadrature on [{a}, {b}] did not converge within "
                f"{cfg.max_subdivisions} subdivisions (error {np.max(total_err):.3e})")
        _, _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total = total - v + v1 + v2
        total_err = total_err - e + e1 + e2
        heapq.heappush(heap, (-float(np.max(e1)), seq, lo, mid, v1, e1))
        heapq.heappush(heap, (-float(np.max(e2)), seq + 1, mid, hi, v2, e2))
        seq += 2
        # guard against the running error drifting negative through cancellation
        total_err = np.abs(total_err)


def _unwrap(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def integrate_1d(f: Callable, a: float, b: float,
                 cfg: QuadratureConfig | None = None):
    """Integrate ``f`` over ``[a, b]``; see :func:`adaptive_quad`."""
    return adaptive_quad(f, a, b, cfg).value


def bessel_j(order, x):
    """Bessel function of the first kind of integer order."""
    return special.jv(order, x)


def bessel_i_scaled(order, x):
    """``exp(-x) * I_m(x)`` for integer ``m`` and ``x >= 0``."""
    if np.any(np.asarray(x) < 0):
        raise DomainError("bessel_i_scaled requires x >= 0")
    return special.ive(order, x)


def gamma_fn(x):
    """Gamma function; raises :class:`PoleError` at non-positive integers."""
    arr = np.asarray(x, dtype=float)
    if np.any((arr <= 0) & (arr == np.round(arr))):
        raise PoleError(f"gamma function has a pole at {x}")
    out = special.gamma(arr)
    return float(out) if out.ndim == 0 else out


def gaussian_q(x):
    """Gaussian tail probability Q(x) = P(N(0,1) > x)."""
    out = special.ndtr(-np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def bilateral_sum(term: Callable[[int], complex],
                  cfg: SeriesConfig | None = None) -> SeriesResult:
    """Sum ``term(m)`` for m = -M..M, growing M until the last pair is negligible.

    Stops at the smallest M >= 1 whose pair ``|term(M)| + |term(-M)|`` falls
    below ``term_tol * |partial sum|``. Hitting ``max_order`` first emits a
    :class:`TruncationWarning` and sets ``truncated``.
    """
    cfg = cfg or SeriesConfig()
    total = complex(term(0))
    for m in range(1, cfg.max_order + 1):
        hi, lo = complex(term(m)), complex(term(-m))
        total += hi + lo
        if abs(hi) + abs(lo) < cfg.term_tol * abs(total) or (hi == 0 and lo == 0 and total == 0):
            return SeriesResult(total, m, False)
    warnings.warn(f"bilateral series not converged at order {cfg.max_order}",
                  TruncationWarning, stacklevel=2)
    return SeriesResult(total, cfg.max_order, True)

