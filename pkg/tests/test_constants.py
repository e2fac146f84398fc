import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hqm.constants import CONSTANTS, ELECTRON_MASS, EV, ev_to_j, j_to_ev, unit_energy
from hqm.errors import DomainError


def test_pinned_values():
    assert CONSTANTS.hbar == 1.054571817e-34
    assert CONSTANTS.electron_mass == 9.1093837015e-31
    assert CONSTANTS.ev == 1.602176634e-19


# Frozen from (hbar k)^2 / (2 m_e) / eV with the pinned constants.
@pytest.mark.parametrize(
    "k, expected, tol",
    [(0.0, 0.0, 0.0), (5.0e9, 0.9524955, 1e-5), (1.0e9, 0.0380998, 1e-6)],
)
def test_unit_energy(k, expected, tol):
    assert unit_energy(k, ELECTRON_MASS) == pytest.approx(expected, abs=tol)


def test_unit_energy_direct_arithmetic():
    k = 5.0e9
    direct = (1.054571817e-34 * k) ** 2 / (2 * 9.1093837015e-31) / 1.602176634e-19
    assert math.isclose(unit_energy(k), direct, rel_tol=1e-15)


@pytest.mark.parametrize("mu", [0.0, -1e-30])
def test_unit_energy_rejects_bad_mass(mu):
    with pytest.raises(DomainError):
        unit_energy(1e9, mu)


@given(st.floats(1e6, 1e12))
def test_quadratic_scaling(k):
    assert unit_energy(2 * k) == pytest.approx(4 * unit_energy(k), rel=4 * np.finfo(float).eps)


@given(st.floats(1e-3, 1e3))
def test_ev_round_trip(e):
    back = j_to_ev(ev_to_j(e))
    assert abs(back - e) <= np.spacing(e)
    assert ev_to_j(1.0) == EV
