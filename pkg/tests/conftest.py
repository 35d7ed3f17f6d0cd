"""Shared fixtures.

The heavy objects (dressed bases, located resonances) are session scoped
because several test modules need the same ones and each resonance search
costs about a second of integrator time.
"""

import numpy as np
import pytest

import bundlesim as bs


@pytest.fixture(scope="session")
def p_even():
    # reference operating point: two-photon resonance under even parity
    return bs.SystemParams()


@pytest.fixture(scope="session")
def p_tilted(p_even):
    return p_even.with_(theta=np.pi / 6)


@pytest.fixture(scope="session")
def bj_even(p_even):
    return bs.jump_operators(p_even)


@pytest.fixture(scope="session")
def bj_tilted(p_tilted):
    return bs.jump_operators(p_tilted)


@pytest.fixture(scope="session")
def resonance_even(p_even):
    return bs.find_resonance(p_even, j=2)


@pytest.fixture(scope="session")
def resonance_tilted(p_tilted):
    return bs.find_resonance(p_tilted, j=2)


@pytest.fixture(scope="session")
def p_even_res(p_even, resonance_even):
    return p_even.with_(omega_L=resonance_even)


@pytest.fixture(scope="session")
def p_tilted_res(p_tilted, resonance_tilted):
    return p_tilted.with_(omega_L=resonance_tilted)
