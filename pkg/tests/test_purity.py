import math

import numpy as np
import pytest

from oamlink.beam import BeamParams, MisalignmentParams, matched_beam, r_max
from oamlink.errors import DomainError, UnsupportedState
from oamlink.purity import (PurityConfig, power_weight, purity_matrix, purity_row,
                            radial_profile_F)
from oamlink.turbulence import TurbulenceParams

from oracles import angular_density, direct_purity_row

LAM = 0.005
REF = BeamParams(LAM, 11.0, 1)
Z = 50.0
MIS = MisalignmentParams(LAM, math.pi / 2, 1e-4, 0.0)
TURB = TurbulenceParams()


def test_config_validation():
    with pytest.raises(DomainError):
        PurityConfig(aperture_width=0.0)
    with pytest.raises(DomainError):
        PurityConfig(halfwidth=0)


def test_F_aligned_collapse():
    b = matched_beam(REF, 3, Z)
    w2 = b.waist_at(Z) ** 2
    for r in (2.0, 8.0, 12.0):
        ref = 2 * math.pi * (2 * r ** 2 / w2) ** 3 * math.exp(-4 * r ** 2 / w2) * r ** 6
        assert radial_profile_F(b, MisalignmentParams(), r, Z) == pytest.approx(ref, rel=1e-10)


def test_F_matches_riemann_sum_oracle():
    for l in (1, 4):
        b = matched_beam(REF, l, Z)
        for mis in (MIS, MisalignmentParams(0.3, 1.1, 5e-4, 2.0)):
            r = r_max(b, Z)
            phi = 2 * math.pi * np.arange(10_000) / 10_000
            oracle = angular_density(b, mis, r, Z, phi).sum() * 2 * math.pi / 10_000
            assert radial_profile_F(b, mis, r, Z) == pytest.approx(oracle, rel=1e-6)


def test_F_periodic_in_theta():
    b = matched_beam(REF, 2, Z)
    a = radial_profile_F(b, MisalignmentParams(0.2, 0.7), 8.0, Z)
    c = radial_profile_F(b, MisalignmentParams(0.2, 0.7 + 2 * math.pi), 8.0, Z)
    assert a == pytest.approx(c, rel=1e-12)


def test_F_rejects_unsupported():
    with pytest.raises(DomainError):
        radial_profile_F(REF, MIS, 0.0, Z)
    with pytest.raises(UnsupportedState):
        radial_profile_F(BeamParams(LAM, 11.0, 0), MIS, 1.0, Z)


def test_rows_stochastic_symmetric_readonly():
    pm = purity_matrix(REF, MIS, TurbulenceParams(3.7, 1e-10), [1, 2, 3, 4], Z)
    assert pm.offsets == tuple(range(-8, 9))
    assert np.allclose(pm.weights.sum(axis=1), 1, atol=1e-12)
    assert np.all(pm.weights >= 0)
    assert np.allclose(pm.weights, pm.weights[:, ::-1], rtol=1e-12, atol=0)
    assert pm.weight(2, 2) > pm.weight(2, 3) > pm.weight(2, 4) > 0
    assert pm.weight(1, 20) == 0.0
    with pytest.raises(ValueError):
        pm.weights[0, 0] = 1.0


def test_zero_turbulence_identity():
    pm = purity_matrix(REF, MIS, TurbulenceParams(3.7, 0.0), [1, 2, 3, 4], Z)
    for row, l in enumerate(pm.states):
        assert pm.weight(l, l) == 1.0
        off = np.delete(pm.weights[row], 8)
        assert np.all(np.abs(off) < 1e-9)


def test_power_weight_matches_matrix():
    b = matched_beam(REF, 4, Z)
    pm = purity_matrix(REF, MIS, TURB, [4], Z)
    assert power_weight(b, MIS, TURB, 5, 4, Z) == pm.weight(4, 5)
    with pytest.raises(DomainError):
        power_weight(b, MIS, TURB, 5, 3, Z)
    with pytest.raises(DomainError):
        power_weight(b, MIS, TURB, 14, 4, Z)
    with pytest.raises(UnsupportedState):
        purity_matrix(REF, MIS, TURB, [0, 1], Z)
    with pytest.raises(DomainError):
        purity_matrix(REF, MIS, TURB, [], Z)


def test_diagonal_degrades_with_turbulence_and_distance():
    b = matched_beam(REF, 2, Z)
    diag = [purity_row(b, MIS, TurbulenceParams(3.7, c), Z)[8] for c in (1e-13, 1e-12, 1e-11, 1e-10)]
    assert all(x >= y for x, y in zip(diag, diag[1:])) and diag[0] > diag[-1]
    dz = []
    for z in (30.0, 50.0, 100.0):
        dz.append(purity_row(matched_beam(REF, 2, z), MIS, TURB, z)[8])
    assert dz[0] >= dz[1] >= dz[2] and dz[0] > dz[2]


def test_raw_rows_carry_printed_prefactor():
    b = matched_beam(REF, 3, Z)
    raw = purity_row(b, MIS, TurbulenceParams(3.7, 1e-10), Z, PurityConfig(raw=True))
    norm = purity_row(b, MIS, TurbulenceParams(3.7, 1e-10), Z)
    # Σ e^{-x} I_Δ(x) = 1 over all Δ; the |Δ| > 8 tail is below 1e-8 here
    assert raw.sum() == pytest.approx(4 * math.pi ** 2, rel=1e-8)
    assert raw.sum() < 4 * math.pi ** 2
    assert np.allclose(raw / raw.sum(), norm, rtol=1e-12)


def test_deflection_does_not_change_weights():
    # the tilt factor has unit modulus, so only δ and turbulence shape the row
    b = matched_beam(REF, 2, Z)
    t = TurbulenceParams(3.7, 1e-10)
    a = purity_row(b, MisalignmentParams(LAM, math.pi / 2, 1e-4), t, Z)
    c = purity_row(b, MisalignmentParams(LAM, math.pi / 2, 0.3), t, Z)
    assert np.allclose(a, c, rtol=1e-9)


CONFIGS = [
    # (l_j, δ, θ, γ, η, C_n², z)
    (4, LAM, math.pi / 2, 1e-4, 0.0, 3e-12, 50.0),
    (1, 0.4, 0.3, 1e-3, 1.2, 5e-11, 50.0),
    (2, 0.15, 2.1, 5e-4, -0.7, 1e-10, 30.0),
    (3, 0.8, 4.0, 2e-4, 3.0, 2e-11, 100.0),
    (5, 0.05, 5.5, 8e-4, 0.4, 8e-11, 70.0),
    (6, 0.25, 1.0, 1e-3, 2.5, 1e-10, 40.0),
]


@pytest.mark.parametrize("cfg", CONFIGS)
def test_reduced_formula_matches_double_azimuthal_oracle(cfg):
    l, delta, theta, gamma, eta, cn2, z = cfg
    b = matched_beam(REF, l, z)
    mis = MisalignmentParams(delta, theta, gamma, eta)
    turb = TurbulenceParams(3.7, cn2)
    direct = direct_purity_row(b, mis, turb, z, 8)
    # direct evaluation carries 2π per row (one azimuthal kernel integral)
    assert direct.sum() == pytest.approx(2 * math.pi, rel=1e-6)
    prod = purity_row(b, mis, turb, z)
    ref = direct / direct.sum()
    big = ref > 1e-12
    assert np.allclose(prod[big], ref[big], rtol=1e-4, atol=0)
