import pytest

from photonic_molecules.params import MediumParams, derive_scales


@pytest.fixture
def reduced():
    """Factory for reduced-mode media (gamma = c = 1)."""

    def make(xi=0.2, Delta_over_gamma=-12.0, g_over_Omega=100.0, Omega_over_gamma=1.0, **geometry):
        return MediumParams.from_reduced(xi, Delta_over_gamma, g_over_Omega, Omega_over_gamma, **geometry)

    return make


@pytest.fixture
def scales_of(reduced):
    def make(*args, **kwargs):
        return derive_scales(reduced(*args, **kwargs))

    return make


@pytest.fixture
def physical():
    """Physical-mode medium with Omega = gamma = c = 1."""

    def make(Delta=-8.0, g=1.0, C6=1.0, **kwargs):
        return MediumParams(g=g, Omega=1.0, gamma=1.0, Delta=Delta, c=1.0, C6=C6, **kwargs)

    return make
