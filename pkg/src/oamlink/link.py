"""Received-signal model: MMSE equalisation, SINR, capacity and error probability.

Channel matrices hold unit-power gains h. The power reaching Rx_j in state l
from a transmission in state l' is ρ_{ll'} = G_x·T_l(l'), with T the purity
weight; the same-state weight T_l(l) scales both the desired signal and the
inter-antenna leakage. The equaliser is built on the purity-weighted matrix
√T_l(l)·h, whose noise-to-signal ratio is G_n/G_x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import ChannelMatrix
from .errors import DomainError, SingularMatrix
from .purity import PurityMatrix
from .quadrature import gaussian_q

__all__ = [
    "PowerAllocation",
    "ConstellationSpec",
    "EqualizerMatrix",
    "LinkReport",
    "mmse_equalizer",
    "sinr",
    "capacity",
    "pep",
    "symbol_error",
    "error_probability",
]

SYMBOL_METRICS = ("distance", "printed")


@dataclass(frozen=True)
class PowerAllocation:
    """Per-(antenna, state) transmit power G_x and noise variance σ²."""

    tx_power: float = 1.0
    noise_variance: float = 0.1

    def __post_init__(self):
        if not self.tx_power > 0:
            raise DomainError("transmit power must be > 0")
        if not self.noise_variance > 0:
            raise DomainError("noise variance must be > 0")

    @classmethod
    def from_snr_db(cls, snr_db: float, tx_power: float = 1.0) -> "PowerAllocation":
        return cls(tx_power, tx_power * 10 ** (-snr_db / 10))

    @property
    def snr_db(self) -> float:
        return 10 * math.log10(self.tx_power / self.noise_variance)

    @property
    def regularizer(self) -> float:
        return self.noise_variance / self.tx_power

    def received_power(self, weight: float) -> float:
        """ρ for a purity weight T; zero weight gives zero power."""
        if weight < 0:
            raise DomainError("purity weight must be >= 0")
        return self.tx_power * weight


def _gray(n: int) -> int:
    return n ^ (n >> 1)


@dataclass(frozen=True)
class ConstellationSpec:
    """Unit-average-power constellation with Gray bit labels."""

    order: int
    symbols: tuple[complex, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if self.order not in (2, 4, 16):
            raise DomainError(f"constellation order must be 2, 4 or 16, got {self.order}")
        if len(self.symbols) != self.order or len(self.labels) != self.order:
            raise DomainError("symbol and label counts must equal the order")
        if abs(np.mean(np.abs(self.symbols) ** 2) - 1) > 1e-12:
            raise DomainError("constellation must have unit average power")

    @classmethod
    def gray(cls, order: int = 4) -> "ConstellationSpec":
        if order == 2:
            return cls(2, (1 + 0j, -1 + 0j), (0, 1))
        if order == 4:
            # one Gray bit per quadrature axis
            pts, labs = [], []
            for bi in (0, 1):
                for bq in (0, 1):
                    pts.append(complex(1 - 2 * bi, 1 - 2 * bq) / math.sqrt(2))
                    labs.append((bi << 1) | bq)
            return cls(4, tuple(pts), tuple(labs))
        if order == 16:
            levels = (-3, -1, 1, 3)
            pts, labs = [], []
            for a in range(4):
                for b in range(4):
                    pts.append(complex(levels[a], levels[b]) / math.sqrt(10))
                    labs.append((_gray(a) << 2) | _gray(b))
            return cls(16, tuple(pts), tuple(labs))
        raise DomainError(f"constellation order must be 2, 4 or 16, got {order}")

    @property
    def bits(self) -> int:
        return int(math.log2(self.order))

    def hamming(self) -> np.ndarray:
        lab = np.array(self.labels)
        x = lab[:, None] ^ lab[None, :]
        return np.array([[bin(v).count("1") for v in row] for row in x])


@dataclass(frozen=True)
class EqualizerMatrix:
    state: int
    entries: np.ndarray


@dataclass(frozen=True)
class LinkReport:
    """Per-(j, l) SINR and the capacity and error figures derived from it."""

    states: tuple[int, ...]
    sinr: np.ndarray  # (N, L)
    per_antenna_capacity: np.ndarray
    total_capacity: float
    symbol_error: float
    pep: float
    error_probability: float


def _entries(H) -> np.ndarray:
    return np.asarray(H.entries if isinstance(H, ChannelMatrix) else H, dtype=complex)


def mmse_equalizer(H, alloc: PowerAllocation, weight: float = 1.0,
                   state: int | None = None) -> EqualizerMatrix:
    """W = (AᴴA + (G_n/G_x) I)⁻¹ Aᴴ with A = √weight·H."""
    a = math.sqrt(weight) * _entries(H)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("channel matrix must be square")
    gram = a.conj().T @ a + alloc.regularizer * np.eye(a.shape[0])
    if not np.all(np.isfinite(gram)) or np.linalg.cond(gram) > 1e15:
        raise SingularMatrix("regularised normal matrix is numerically singular")
    w = np.linalg.solve(gram, a.conj().T)
    if state is None:
        state = H.state if isinstance(H, ChannelMatrix) else 0
    return EqualizerMatrix(state, w)


def _cross_weight(purity: PurityMatrix, l: int) -> float:
    return sum(purity.weight(lp, l) for lp in purity.states if lp != l)


def sinr(H, W: EqualizerMatrix, alloc: PowerAllocation, purity: PurityMatrix,
         j: int, l: int) -> float:
    """SINR of Rx_j (1-based) in state l after equalisation."""
    h = _entries(H)
    n = h.shape[0]
    if not 1 <= j <= n:
        raise DomainError(f"receiver index {j} outside 1..{n}")
    w = W.entries[j - 1]
    wh = w @ h  # wh[j'] = w_j · h[:, j']
    rho = alloc.received_power(purity.weight(l, l))
    rho_x = alloc.received_power(_cross_weight(purity, l))
    own = abs(wh[j - 1]) ** 2
    g_d = rho * own
    g_i = rho * (np.sum(np.abs(wh) ** 2) - own) + rho_x * own
    g_n = np.vdot(w, w).real * alloc.noise_variance
    return float(g_d / (g_i + g_n))


def capacity(sinr_values) -> tuple[np.ndarray, float]:
    """Per-antenna capacities C_j = Σ_l log₂(1+γ) and their total."""
    g = np.asarray(sinr_values, dtype=float)
    if np.any(g < 0):
        raise DomainError("SINR must be >= 0")
    per = np.log2(1 + g).sum(axis=-1)
    return per, float(per.sum())


def pep(l: int, l_other: int, rho: float, noise_variance: float, count: int,
        phi: float) -> float:
    """Probability of detecting state l_other when l was sent."""
    d = math.cos((l - l_other) * phi)
    gap = 1 - d
    if gap < -1e-12:
        raise DomainError("1 - D must be >= 0")
    gap = max(gap, 0.0)
    return float(gaussian_q(math.sqrt(count * rho * gap / (2 * noise_variance))))


def symbol_error(snr_eff: float, constellation: ConstellationSpec,
                 metric: str = "distance") -> float:
    """Hamming-weighted union bound on the bit error rate.

    ``snr_eff`` is ρ|w_j h_j|² over the noise variance. With metric
    ``"distance"`` each pair contributes Q(√(snr·|x - x̂|²/2)); ``"printed"``
    replaces |x - x̂|² by the squared codeword difference 2Re[x(x - x̂)*].
    """
    if metric not in SYMBOL_METRICS:
        raise DomainError(f"symbol metric must be one of {SYMBOL_METRICS}")
    if snr_eff < 0:
        raise DomainError("effective SNR must be >= 0")
    x = np.array(constellation.symbols)
    diff = x[:, None] - x[None, :]
    if metric == "distance":
        d2 = np.abs(diff) ** 2
    else:
        d2 = (2 * np.real(x[:, None] * np.conj(diff))) ** 2
    args = np.sqrt(snr_eff * d2 / 2)
    ham = constellation.hamming()
    q = constellation.order
    total = float(np.sum(ham * gaussian_q(args)) / (q * math.log2(q)))
    return min(max(total, 0.0), 1.0)


def error_probability(e_sig: float, pep_value: float) -> float:
    """P(ε) = 1 - (1 - e_sig)(1 - PEP), clamped to [0, 1]."""
    p = 1 - (1 - e_sig) * (1 - pep_value)
    return min(max(p, 0.0), 1.0)


def adjacent_pairs(states: Sequence[int]) -> list[tuple[int, int]]:
    """Ordered pairs of neighbouring states in the sorted set."""
    s = sorted(states)
    out = []
    for a, b in zip(s, s[1:]):
        out += [(a, b), (b, a)]
    return out
