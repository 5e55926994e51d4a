"""Domain types, flagellar waveform kinematics, and drag coefficients.

Units are SI throughout: lengths in m, times in s, frequencies in Hz,
viscosity in Pa.s. Drag coefficients are per unit filament length.

The swimmer is a sphere of radius ``a`` centred at the origin with two
flagella beating planar sine waves: the anterior flagellum occupies the
axial interval [a, a+L] and the posterior one [-a-L, -a]. Both waves
travel toward -x, so an anisotropic filament (gamma != 1) propels the
body along x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DomainError, ParameterError, SlenderBodyError

ANTERIOR = "anterior"
POSTERIOR = "posterior"

#: the slender-body log law has a pole where ln(4*lambda/d) hits this value
SLENDER_LOG_LIMIT = 2.90


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ParameterError(message)


@dataclass(frozen=True)
class FluidMedium:
    """Newtonian working fluid (defaults elsewhere model glycerine)."""

    mu: float   # dynamic viscosity [Pa.s]
    rho: float  # density [kg/m^3]

    def __post_init__(self) -> None:
        _require(self.mu > 0, "mu: must be > 0")
        _require(self.rho > 0, "rho: must be > 0")


@dataclass(frozen=True)
class BodyGeometry:
    """Effective spherical body."""

    a: float     # effective spherical radius [m]
    mass: float  # robot mass [kg]

    def __post_init__(self) -> None:
        _require(self.a >= 0, "a: must be >= 0")
        _require(self.mass > 0, "mass: must be > 0")


@dataclass(frozen=True)
class DerivedShape:
    """Dimensionless/kinematic quantities derived from a flagellum spec."""

    beta: float   # amplitude-to-wavelength ratio A/lambda
    v_w: float    # wave propagation speed lambda*f [m/s]
    omega: float  # angular beat frequency 2*pi*f [rad/s]


@dataclass(frozen=True)
class FlagellumSpec:
    """Geometry and actuation of one flagellum.

    The membrane is the load-bearing sheet of the flagellum; the hinge
    lattice is the set of transverse filaments (``n`` per unit length,
    each of length ``h``) that stiffen it. Both contribute drag.
    """

    role: str           # "anterior" or "posterior"
    L: float            # flagellum length [m]
    A: float            # wave amplitude [m]
    lam: float          # wavelength [m]
    f: float            # beat frequency [Hz]
    d_membrane: float = 0.002  # membrane effective diameter [m]
    d_hinge: float = 0.002     # hinge filament diameter [m]
    w: float = 0.035           # membrane width [m]
    h: float = 0.016           # hinge length [m]
    n: float = 200.0           # hinge line density [1/m]

    def __post_init__(self) -> None:
        _require(self.role in (ANTERIOR, POSTERIOR),
                 f"role: must be '{ANTERIOR}' or '{POSTERIOR}'")
        _require(self.L >= 0, "L: must be >= 0")
        _require(self.lam > 0, "lambda: must be > 0")
        _require(self.f >= 0, "f: must be >= 0")
        _require(0 <= self.A < self.lam / 2, "A: must satisfy 0 <= A < lambda/2")
        _require(self.d_membrane > 0, "d_membrane: must be > 0")
        _require(self.d_hinge > 0, "d_hinge: must be > 0")
        _require(self.w >= 0, "w: must be >= 0")
        _require(self.h >= 0, "h: must be >= 0")
        _require(self.n >= 0, "n: must be >= 0")

    @property
    def k(self) -> int:
        """Flagellum index: 1 for anterior, 2 for posterior."""
        return 1 if self.role == ANTERIOR else 2

    @property
    def axis_sign(self) -> int:
        """(-1)**k: -1 for the anterior flagellum, +1 for the posterior."""
        return -1 if self.role == ANTERIOR else 1

    def derived(self) -> DerivedShape:
        return DerivedShape(beta=self.A / self.lam,
                            v_w=self.lam * self.f,
                            omega=2.0 * math.pi * self.f)

    def axial_span(self, body_radius: float) -> tuple[float, float]:
        """Ascending (x_min, x_max) interval occupied by this flagellum."""
        if self.role == ANTERIOR:
            return (body_radius, body_radius + self.L)
        return (-body_radius - self.L, -body_radius)


@dataclass(frozen=True)
class CompositeDrag:
    """Normal/tangential drag coefficients per unit length and their ratio."""

    K_N: float  # normal coefficient [Pa.s]
    K_L: float  # tangential coefficient [Pa.s]
    gamma: float = field(init=False)  # K_L / K_N

    def __post_init__(self) -> None:
        _require(self.K_N > 0, "K_N: must be > 0")
        _require(self.K_L > 0, "K_L: must be > 0")
        object.__setattr__(self, "gamma", self.K_L / self.K_N)

    def scaled(self, factor: float) -> "CompositeDrag":
        """Both coefficients multiplied by ``factor`` (ratio unchanged)."""
        _require(factor > 0, "factor: must be > 0")
        return CompositeDrag(self.K_N * factor, self.K_L * factor)


class WaveformState(NamedTuple):
    """Local waveform sample: deflection, slope and transverse velocity."""

    y: float      # transverse deflection [m]
    slope: float  # dy/dx
    y_t: float    # transverse material velocity dy/dt [m/s]


def waveform_eval(spec: FlagellumSpec, body_radius: float,
                  x: float, t: float) -> WaveformState:
    """Evaluate the travelling sine waveform of one flagellum.

    y(x, t) = A sin(s*omega*t + s*2*pi*(x + s*a)/lambda) with s = -1 for
    the anterior flagellum and s = +1 for the posterior one; ``slope``
    and ``y_t`` are the exact analytic partial derivatives.

    Raises DomainError when x is outside the flagellum's axial half-line.
    """
    s = spec.axis_sign
    a = body_radius
    tol = 1e-9 * max(1.0, abs(a))
    if s * x > -a + tol:
        raise DomainError(
            f"x={x!r} is outside the {spec.role} flagellum domain")
    omega = 2.0 * math.pi * spec.f
    phase = s * (omega * t + 2.0 * math.pi * (x + s * a) / spec.lam)
    c = math.cos(phase)
    return WaveformState(
        y=spec.A * math.sin(phase),
        slope=spec.A * c * s * 2.0 * math.pi / spec.lam,
        y_t=spec.A * c * s * omega,
    )


def brennen_winet(mu: float, lam: float, d: float) -> CompositeDrag:
    """Slender-body drag coefficients of a waving filament (Brennen & Winet).

    K_N = 4*pi*mu / (ln(4*lambda/d) - 2.90)
    K_L = 2*pi*mu / (ln(4*lambda/d) - 1.90)

    Raises SlenderBodyError when ln(4*lambda/d) <= 2.90, where the
    normal-coefficient denominator is no longer positive.
    """
    _require(mu > 0, "mu: must be > 0")
    _require(lam > 0, "lambda: must be > 0")
    _require(d > 0, "d: must be > 0")
    log_term = math.log(4.0 * lam / d)
    if log_term <= SLENDER_LOG_LIMIT:
        raise SlenderBodyError(
            f"slender-body validity violated: ln(4*lambda/d) = {log_term:.4f}"
            f" <= {SLENDER_LOG_LIMIT} for lambda={lam:g}, d={d:g}")
    return CompositeDrag(
        K_N=4.0 * math.pi * mu / (log_term - 2.90),
        K_L=2.0 * math.pi * mu / (log_term - 1.90),
    )


def composite_coeffs(spec: FlagellumSpec, fluid: FluidMedium) -> CompositeDrag:
    """Effective drag coefficients of the membrane-plus-hinge assembly.

    K_N = w*(K_Nm + n*h*K_Lh) and K_L = w*(K_Lm + n*h*K_Nh): a hinge
    filament lies transverse to the flagellum axis, so its tangential
    coefficient resists normal motion of the assembly and vice versa.
    With an active hinge term the composite ratio gamma = K_L/K_N can
    exceed 1, and callers must not assume otherwise. The width w acts
    as a scaling factor on both coefficients and leaves gamma unchanged.
    """
    _require(spec.w > 0, "w: must be > 0 to evaluate composite drag")
    membrane = brennen_winet(fluid.mu, spec.lam, spec.d_membrane)
    hinge_per_length = spec.n * spec.h
    if hinge_per_length > 0:
        hinge = brennen_winet(fluid.mu, spec.lam, spec.d_hinge)
        return CompositeDrag(
            K_N=spec.w * (membrane.K_N + hinge_per_length * hinge.K_L),
            K_L=spec.w * (membrane.K_L + hinge_per_length * hinge.K_N),
        )
    return CompositeDrag(K_N=spec.w * membrane.K_N,
                         K_L=spec.w * membrane.K_L)


def reynolds_number(fluid: FluidMedium, U: float, L_char: float) -> float:
    """Re = rho*|U|*L_char/mu, a diagnostic for the creeping-flow regime."""
    _require(L_char > 0, "L_char: must be > 0")
    return fluid.rho * abs(U) * L_char / fluid.mu
