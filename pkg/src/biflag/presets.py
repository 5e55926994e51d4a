"""Canonical configurations and measured-robot presets.

Two baseline configurations are shipped:

* :func:`default_config` -- the full robot model with composite
  membrane-plus-hinge drag coefficients. Its drag ratio gamma exceeds 1,
  so the signed swimming speed is negative (the hinge lattice dominates
  and reverses the effective anisotropy).
* :func:`smooth_config` -- the same robot with plain slender-filament
  drag (hinge density 0, gamma < 1). This is the baseline used for
  calibration against measured speeds and for design studies, where a
  positive, frequency-increasing speed is the physically observed
  behaviour.
"""

from __future__ import annotations

from dataclasses import replace

from .closed_form import RobotConfig
from .core import ANTERIOR, POSTERIOR, BodyGeometry, FlagellumSpec, FluidMedium
from .errors import ParameterError
from .oracle import OracleSettings

#: measured wave amplitude [m] reached by each flagellum length [m];
#: short flagella cannot articulate the full amplitude
AMPLITUDE_BY_LENGTH = {0.065: 0.004, 0.10: 0.006, 0.12: 0.0075}


def amplitude_for_length(L: float, table: dict[float, float] | None = None) -> float:
    """Piecewise-linear amplitude lookup, clamped outside the table range."""
    table = AMPLITUDE_BY_LENGTH if table is None else table
    if not table:
        raise ParameterError("amplitude table: must not be empty")
    knots = sorted(table.items())
    if L <= knots[0][0]:
        return knots[0][1]
    if L >= knots[-1][0]:
        return knots[-1][1]
    for (x0, y0), (x1, y1) in zip(knots, knots[1:]):
        if x0 <= L <= x1:
            return y0 + (y1 - y0) * (L - x0) / (x1 - x0)
    raise AssertionError("unreachable")


def default_flagellum(role: str, **overrides) -> FlagellumSpec:
    """One flagellum with the documented default geometry."""
    base = dict(role=role, L=0.12, A=0.0075, lam=0.10, f=4.41,
                d_membrane=0.002, d_hinge=0.002, w=0.035, h=0.016, n=200.0)
    base.update(overrides)
    return FlagellumSpec(**base)


def default_config(**flagellum_overrides) -> RobotConfig:
    """Robot with documented defaults: glycerine, 256 g body, composite drag.

    Keyword overrides are applied to both flagella.
    """
    return RobotConfig(
        fluid=FluidMedium(mu=1.49, rho=1000.0),
        body=BodyGeometry(a=0.035, mass=0.256),
        anterior=default_flagellum(ANTERIOR, **flagellum_overrides),
        posterior=default_flagellum(POSTERIOR, **flagellum_overrides),
        thrust_scale=1.0,
    )


def smooth_config(**flagellum_overrides) -> RobotConfig:
    """Default robot with smooth (hinge-free) flagellar drag; gamma < 1.

    The calibration baseline: thrust_scale fitted on this configuration
    absorbs the membrane-width prefactor of the composite coefficients.
    """
    overrides = dict(flagellum_overrides)
    overrides.setdefault("n", 0.0)
    return default_config(**overrides)


def default_oracle_settings() -> OracleSettings:
    return OracleSettings()


def with_symmetric_frequency(cfg: RobotConfig, f: float) -> RobotConfig:
    """Both flagella beating at the same frequency ``f``."""
    return replace(cfg,
                   anterior=replace(cfg.anterior, f=f),
                   posterior=replace(cfg.posterior, f=f))
