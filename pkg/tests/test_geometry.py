import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oamlink.beam import MisalignmentParams
from oamlink.errors import DomainError, IndexOutOfRange
from oamlink.geometry import ArrayGeometry, aligned_link, misaligned_link


def _coords(geom, i, j, rmax, dx=0.0, dy=0.0):
    """Tx_i and Rx_j as 3-D points; Tx_1 at the origin, Rx_j on the ring of Tx_j."""
    tx = np.array([(i - 1) * geom.spacing, 0.0, 0.0])
    rx = np.array([(j - 1) * geom.spacing + dx, rmax + dy, geom.link_distance])
    return tx, rx


def _oracle(geom, i, j, rmax, dx=0.0, dy=0.0):
    tx, rx = _coords(geom, i, j, rmax, dx, dy)
    v = rx - tx
    return math.atan2(v[1], v[0]), math.hypot(v[0], v[1]), float(np.linalg.norm(v))


def test_validation():
    with pytest.raises(DomainError):
        ArrayGeometry(0, 1.0, 1.0)
    with pytest.raises(DomainError):
        ArrayGeometry(2, 0.0, 1.0)
    g = ArrayGeometry(4, 1.0, 10.0)
    for bad in [(0, 1), (1, 5)]:
        with pytest.raises(IndexOutOfRange):
            aligned_link(g, *bad, 1.0)


def test_aligned_examples():
    g = ArrayGeometry(8, 2.0, 50.0)
    lk = aligned_link(g, 3, 3, 1.5)
    assert lk.azimuth == math.pi / 2 and lk.radial == 1.5
    assert lk.distance == pytest.approx(math.sqrt(50 ** 2 + 1.5 ** 2))
    g1 = ArrayGeometry(8, 1.0, 50.0)
    assert aligned_link(g1, 1, 2, 1.0).azimuth == pytest.approx(math.pi / 4)


def test_aligned_against_coordinates():
    g = ArrayGeometry(8, 1.0, 50.0)
    lk = aligned_link(g, 5, 2, 2.0)
    phi, r, d = _oracle(g, 5, 2, 2.0)
    assert (lk.azimuth, lk.radial, lk.distance) == pytest.approx((phi, r, d), rel=1e-14)


def test_aligned_depends_on_offset_only_and_eq5():
    g = ArrayGeometry(8, 3.0, 40.0)
    for i, j in itertools.product(range(1, 9), repeat=2):
        lk = aligned_link(g, i, j, 2.0)
        ref = aligned_link(g, 1 + abs(i - j), 1, 2.0) if i > j else aligned_link(g, 1, 1 + abs(i - j), 2.0)
        assert (lk.radial, lk.distance) == (ref.radial, ref.distance)
        assert lk.distance ** 2 - 40.0 ** 2 == pytest.approx(lk.radial ** 2, rel=1e-12)


@pytest.mark.parametrize("convention", ["signed", "printed"])
def test_zero_misalignment_is_bit_identical(convention):
    g = ArrayGeometry(8, 3.0, 50.0)
    for i, j in itertools.product(range(1, 9), repeat=2):
        assert misaligned_link(g, i, j, 2.5, MisalignmentParams(), convention) == aligned_link(g, i, j, 2.5)


def test_radial_displacement_example():
    lam = 0.005
    g = ArrayGeometry(8, 3.0, 50.0)
    mis = MisalignmentParams(lam, math.pi / 2)
    for i, j in itertools.product(range(1, 9), repeat=2):
        lk = misaligned_link(g, i, j, 2.0, mis)
        assert lk.radial ** 2 == pytest.approx((abs(i - j) * 3.0) ** 2 + (2.0 + lam) ** 2, rel=1e-13)


def test_default_misalignment_against_coordinates():
    lam = 0.005
    g = ArrayGeometry(8, 24.0, 50.0)
    mis = MisalignmentParams(lam, math.pi / 2, 1e-4, 0.0)
    dx = lam * math.cos(math.pi / 2) + 50.0 * math.tan(1e-4)
    dy = lam * math.sin(math.pi / 2)
    for i, j in itertools.product(range(1, 9), repeat=2):
        lk = misaligned_link(g, i, j, 8.0, mis)
        assert (lk.azimuth, lk.radial, lk.distance) == pytest.approx(_oracle(g, i, j, 8.0, dx, dy), rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(delta=st.floats(0, 5), theta=st.floats(-4, 4), gamma=st.floats(0, 1.2),
       eta=st.floats(-4, 4), i=st.integers(1, 6), j=st.integers(1, 6))
def test_signed_geometry_matches_coordinates(delta, theta, gamma, eta, i, j):
    g = ArrayGeometry(6, 4.0, 30.0)
    mis = MisalignmentParams(delta, theta, gamma, eta)
    tilt = 30.0 * math.tan(gamma)
    dx = delta * math.cos(theta) + tilt * math.cos(eta)
    dy = delta * math.sin(theta) + tilt * math.sin(eta)
    lk = misaligned_link(g, i, j, 1.5, mis)
    phi, r, d = _oracle(g, i, j, 1.5, dx, dy)
    assert lk.radial == pytest.approx(r, rel=1e-12, abs=1e-12)
    assert lk.distance == pytest.approx(d, rel=1e-12)
    assert lk.distance >= 30.0
    if r > 1e-9:
        assert math.cos(lk.azimuth) == pytest.approx(math.cos(phi), abs=1e-9)
        assert math.sin(lk.azimuth) == pytest.approx(math.sin(phi), abs=1e-9)


def test_printed_convention_adds_shift_on_both_sides():
    g = ArrayGeometry(4, 4.0, 30.0)
    mis = MisalignmentParams(0.5, 0.0)
    lk = misaligned_link(g, 3, 1, 2.0, mis, "printed")
    assert lk.radial == pytest.approx(math.hypot(8.5, 2.0))
    assert lk.azimuth == pytest.approx(math.pi - math.atan(2.0 / 8.5))
    signed = misaligned_link(g, 3, 1, 2.0, mis, "signed")
    assert signed.radial == pytest.approx(math.hypot(7.5, 2.0))
    with pytest.raises(DomainError):
        misaligned_link(g, 3, 1, 2.0, mis, "other")
