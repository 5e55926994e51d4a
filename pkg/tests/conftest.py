import random

import pytest

from biflag.closed_form import RobotConfig
from biflag.core import ANTERIOR, POSTERIOR, BodyGeometry, FlagellumSpec, FluidMedium


def random_config(rng: random.Random, scale_range=(0.1, 10.0),
                  allow_zero_body=True) -> RobotConfig:
    """Valid random configuration with identical flagella.

    Covers both drag regimes: hinge-free (gamma < 1) and composite
    (gamma can exceed 1). Diameters stay at most 5% of the wavelength so
    the slender-body log stays comfortably positive.
    """
    lam = rng.uniform(0.03, 0.25)
    beta = rng.uniform(0.001, 0.14)
    if allow_zero_body and rng.random() < 0.15:
        a = 0.0
    else:
        a = rng.uniform(0.005, 0.08)
    if rng.random() < 0.5:
        n, h = 0.0, rng.uniform(0.005, 0.03)
    else:
        n, h = rng.uniform(20.0, 400.0), rng.uniform(0.005, 0.03)
    geometry = dict(
        L=rng.uniform(0.02, 0.3),
        A=beta * lam,
        lam=lam,
        d_membrane=rng.uniform(0.0005, 0.05 * lam),
        d_hinge=rng.uniform(0.0005, 0.05 * lam),
        w=rng.uniform(0.005, 0.08),
        h=h,
        n=n,
    )
    return RobotConfig(
        fluid=FluidMedium(mu=rng.uniform(0.3, 3.0), rho=rng.uniform(500.0, 1500.0)),
        body=BodyGeometry(a=a, mass=rng.uniform(0.05, 1.0)),
        anterior=FlagellumSpec(role=ANTERIOR, f=rng.uniform(0.0, 8.0), **geometry),
        posterior=FlagellumSpec(role=POSTERIOR, f=rng.uniform(0.0, 8.0), **geometry),
        thrust_scale=rng.uniform(*scale_range),
    )


@pytest.fixture
def rng():
    return random.Random(20260810)
