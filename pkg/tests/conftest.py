import math

import pytest

import clustercov as cc

# Reference evaluation setup: 868 MHz carrier, 125 kHz bandwidth, alpha 3.5,
# receiver and coexisting densities 0.1/(500^2 pi), 20 km window.
BASE_DENSITY = 0.1 / (500.0**2 * math.pi)
GAMMA_GRID_DB = tuple(range(-20, 11, 2))


def reference_link(
    a: float = 500.0,
    power_dbm: float = 14.0,
    lambda_g: float = BASE_DENSITY,
    lambda_co: float = BASE_DENSITY,
    sigma2: float | None = None,
    alpha: float = 3.5,
) -> cc.LinkParams:
    power = 10.0 ** (power_dbm / 10.0)
    return cc.LinkParams(
        p_x0=power,
        p_x=power,
        p_z=power,
        eta=cc.free_space_eta(868e6),
        alpha=alpha,
        a=a,
        lambda_g=lambda_g,
        lambda_co=lambda_co,
        sigma2=cc.noise_power_mw(125e3) if sigma2 is None else sigma2,
    )


@pytest.fixture(scope="session")
def quad50() -> cc.QuadratureSpec:
    return cc.make_quadrature(50, 50)


@pytest.fixture(scope="session")
def fig_link() -> cc.LinkParams:
    return reference_link()


@pytest.fixture(scope="session")
def fig_config(fig_link) -> cc.NetworkConfig:
    return cc.NetworkConfig(link=fig_link, window_radius=20000.0)
