"""Emission -> reflection -> return transformations for radar photon probes.

All functions are pure and unit-agnostic: pass SI constants for SI inputs,
or ``NATURAL_UNITS`` (c = 1) for dimensionless work.  Velocities are
positive for receding targets, so a receding target redshifts the carrier
by the exact two-way Doppler factor (c - v)/(c + v).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PhysicalConstants",
    "SI_UNITS",
    "NATURAL_UNITS",
    "Strategy",
    "ParameterPair",
    "Target",
    "ProbeConfig",
    "ReturnParams",
    "SumDiffParams",
    "doppler_factor",
    "doppler_frequency",
    "doppler_bandwidth",
    "round_trip_time",
    "return_params",
    "sum_diff",
    "split_sum_diff",
    "central_position",
    "relative_velocity",
    "object_size",
    "object_velocity",
    "jacobian_params",
    "reparametrize",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Physical constants; only the speed of light is needed here."""

    c: float = 299792458.0

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise ValueError("speed of light must be positive")


SI_UNITS = PhysicalConstants()
NATURAL_UNITS = PhysicalConstants(c=1.0)


class Strategy(enum.Enum):
    """Probe-state strategy selector."""

    ENTANGLED_BIPHOTON = "entangled_biphoton"
    TWO_SINGLE_PHOTONS = "two_single_photons"
    QUANTUM_ILLUMINATION = "quantum_illumination"


class ParameterPair(enum.Enum):
    """Which (time, frequency) estimator pair is being targeted.

    TIME_SUM_FREQ_DIFF estimates (t1+t2, w2-w1): central position and
    relative velocity of a two-body system.  TIME_DIFF_FREQ_SUM estimates
    (t2-t1, w1+w2): object size and common velocity.
    """

    TIME_SUM_FREQ_DIFF = "time_sum_freq_diff"
    TIME_DIFF_FREQ_SUM = "time_diff_freq_sum"


@dataclass(frozen=True)
class Target:
    """A point scatterer at range ``r`` receding with radial velocity ``v``."""

    r: float
    v: float

    def validate(self, consts: PhysicalConstants) -> None:
        if self.r < 0:
            raise ValueError(f"target range must be non-negative, got {self.r}")
        if abs(self.v) >= consts.c:
            raise ValueError(f"|v| must be below c, got v={self.v}")


@dataclass(frozen=True)
class ProbeConfig:
    """Emitted probe: carrier ``omega0``, bandwidth ``sigma0``, time correlation ``kappa``."""

    omega0: float
    sigma0: float
    kappa: float
    strategy: Strategy = Strategy.ENTANGLED_BIPHOTON

    def __post_init__(self) -> None:
        if self.omega0 <= 0:
            raise ValueError("carrier frequency must be positive")
        if self.sigma0 <= 0:
            raise ValueError("bandwidth must be positive")
        if not -1.0 < self.kappa < 1.0:
            raise ValueError(f"kappa must lie in (-1, 1), got {self.kappa}")


@dataclass(frozen=True)
class ReturnParams:
    """Round-trip times, returned carriers and bandwidths of the two photons."""

    t1: float
    t2: float
    omega1: float
    omega2: float
    sigma1: float
    sigma2: float


@dataclass(frozen=True)
class SumDiffParams:
    """Sum/difference combinations of the returned times and frequencies.

    Reconstruction is exact: t1 = (t_plus - t_minus)/2, t2 = (t_plus + t_minus)/2,
    and likewise for the frequencies.
    """

    t_plus: float
    t_minus: float
    omega_plus: float
    omega_minus: float


def doppler_factor(v: float, consts: PhysicalConstants = NATURAL_UNITS) -> float:
    """Two-way Doppler scale factor (c - v)/(c + v) for a receding velocity v."""
    if abs(v) >= consts.c:
        raise ValueError(f"|v| must be below c, got v={v}")
    return (consts.c - v) / (consts.c + v)


def doppler_frequency(
    omega0: float, v: float, consts: PhysicalConstants = NATURAL_UNITS
) -> float:
    """Returned carrier frequency omega0 * (c - v)/(c + v)."""
    if omega0 <= 0:
        raise ValueError("carrier frequency must be positive")
    return omega0 * doppler_factor(v, consts)


def doppler_bandwidth(
    sigma0: float, v: float, consts: PhysicalConstants = NATURAL_UNITS
) -> float:
    """Returned bandwidth sigma0 * (c - v)/(c + v); same scaling as the carrier."""
    if sigma0 <= 0:
        raise ValueError("bandwidth must be positive")
    return sigma0 * doppler_factor(v, consts)


def round_trip_time(
    t_emit: float, r: float, v: float, consts: PhysicalConstants = NATURAL_UNITS
) -> float:
    """Return time of a photon emitted at ``t_emit`` towards (r, v).

    tau = t_emit + 2 r/(c - v) + 2 v t_emit/(c - v), with r the range at the
    reference time t = 0.
    """
    if v >= consts.c:
        raise ValueError(f"v must be below c, got v={v}")
    if r + v * t_emit <= 0:
        raise ValueError("emission geometry invalid: target behind the radar")
    return t_emit + (2.0 * r + 2.0 * v * t_emit) / (consts.c - v)


def return_params(
    target_a: Target,
    target_b: Target,
    probe: ProbeConfig,
    consts: PhysicalConstants = NATURAL_UNITS,
) -> ReturnParams:
    """Returned-photon parameters for photons emitted at t = 0 towards two targets."""
    target_a.validate(consts)
    target_b.validate(consts)
    return ReturnParams(
        t1=2.0 * target_a.r / (consts.c - target_a.v),
        t2=2.0 * target_b.r / (consts.c - target_b.v),
        omega1=doppler_frequency(probe.omega0, target_a.v, consts),
        omega2=doppler_frequency(probe.omega0, target_b.v, consts),
        sigma1=doppler_bandwidth(probe.sigma0, target_a.v, consts),
        sigma2=doppler_bandwidth(probe.sigma0, target_b.v, consts),
    )


def sum_diff(rp: ReturnParams) -> SumDiffParams:
    """Sum/difference combinations of the returned times and frequencies."""
    return SumDiffParams(
        t_plus=rp.t1 + rp.t2,
        t_minus=rp.t2 - rp.t1,
        omega_plus=rp.omega1 + rp.omega2,
        omega_minus=rp.omega2 - rp.omega1,
    )


def split_sum_diff(sd: SumDiffParams) -> tuple[float, float, float, float]:
    """Invert ``sum_diff``: returns (t1, t2, omega1, omega2)."""
    return (
        (sd.t_plus - sd.t_minus) / 2.0,
        (sd.t_plus + sd.t_minus) / 2.0,
        (sd.omega_plus - sd.omega_minus) / 2.0,
        (sd.omega_plus + sd.omega_minus) / 2.0,
    )


def central_position(
    t_plus: float,
    consts: PhysicalConstants = NATURAL_UNITS,
    convention: str = "midpoint",
) -> float:
    """Central position of a two-body system from the time sum.

    ``convention="midpoint"`` returns c * t_plus / 4, the midpoint
    (r1 + r2)/2 in the collinear, v << c limit.  ``convention="sum"``
    returns c * t_plus / 2, which is the literal range sum r1 + r2
    (twice the midpoint); it is kept available because some treatments
    label that quantity the central position.
    """
    if t_plus <= 0:
        raise ValueError("time sum must be positive")
    if convention == "midpoint":
        return consts.c * t_plus / 4.0
    if convention == "sum":
        return consts.c * t_plus / 2.0
    raise ValueError(f"unknown convention {convention!r}")


def relative_velocity(
    omega0: float,
    consts: PhysicalConstants = NATURAL_UNITS,
    *,
    mode: str = "exact_pairwise",
    omega_minus: float | None = None,
    omega1: float | None = None,
    omega2: float | None = None,
) -> float:
    """Relative velocity v2 - v1 from returned-frequency statistics.

    ``exact_pairwise`` inverts the Doppler factor per photon,
    v_i = c (omega0 - w_i)/(omega0 + w_i), and needs both returned
    carriers.  ``first_order`` uses the linearized map
    dv = -c * omega_minus / (2 omega0); note a receding pair difference
    (v2 > v1) shows up as a *negative* omega_minus because receding
    targets redshift.
    """
    if omega0 <= 0:
        raise ValueError("carrier frequency must be positive")
    if mode == "first_order":
        if omega_minus is None:
            raise ValueError("first_order mode requires omega_minus")
        return -consts.c * omega_minus / (2.0 * omega0)
    if mode == "exact_pairwise":
        if omega1 is None or omega2 is None:
            raise ValueError("exact_pairwise mode requires omega1 and omega2")
        if omega1 <= 0 or omega2 <= 0:
            raise ValueError("returned frequencies must be positive")
        v1 = consts.c * (omega0 - omega1) / (omega0 + omega1)
        v2 = consts.c * (omega0 - omega2) / (omega0 + omega2)
        return v2 - v1
    raise ValueError(f"unknown mode {mode!r}")


def object_size(t_minus: float, consts: PhysicalConstants = NATURAL_UNITS) -> float:
    """Radial extent x = c * t_minus / 2 between two scattering points (v << c)."""
    return consts.c * t_minus / 2.0


def object_velocity(
    omega_plus: float,
    omega0: float,
    consts: PhysicalConstants = NATURAL_UNITS,
    *,
    mode: str = "exact_pairwise",
) -> float:
    """Common radial velocity from the frequency sum of the two returns.

    Exact mode inverts the Doppler factor at the mean returned carrier
    omega_plus/2: v = c (2 omega0 - omega_plus)/(2 omega0 + omega_plus).
    First-order mode drops the denominator shift.
    """
    if omega0 <= 0:
        raise ValueError("carrier frequency must be positive")
    if omega_plus <= 0:
        raise ValueError("frequency sum must be positive")
    if mode == "exact_pairwise":
        return consts.c * (2.0 * omega0 - omega_plus) / (2.0 * omega0 + omega_plus)
    if mode == "first_order":
        # v = c (1 - Gamma)/(1 + Gamma) ~ c (1 - Gamma)/2 with Gamma = omega_plus/(2 omega0)
        return consts.c * (2.0 * omega0 - omega_plus) / (4.0 * omega0)
    raise ValueError(f"unknown mode {mode!r}")


def jacobian_params(
    r: float,
    Gamma: float,
    omega0: float,
    sigma0: float,
    consts: PhysicalConstants = NATURAL_UNITS,
) -> np.ndarray:
    """Exact 3x2 Jacobian d(t_bar, omega_bar, sigma)/d(r, Gamma), Gamma = v/c.

    Differentiates t_bar = 2r/(c(1 - Gamma)) and the Doppler factor
    (1 - Gamma)/(1 + Gamma) exactly; in particular the frequency and
    bandwidth rows carry a (1 + Gamma)^2 denominator.
    """
    if abs(Gamma) >= 1.0:
        raise ValueError(f"|Gamma| must be below 1, got {Gamma}")
    c = consts.c
    return np.array(
        [
            [2.0 / (c * (1.0 - Gamma)), 2.0 * r / (c * (1.0 - Gamma) ** 2)],
            [0.0, -2.0 * omega0 / (1.0 + Gamma) ** 2],
            [0.0, -2.0 * sigma0 / (1.0 + Gamma) ** 2],
        ]
    )


def reparametrize(H: np.ndarray, J: np.ndarray) -> np.ndarray:
    """Congruence transform J^T H J of an information matrix under a change of variables.

    ``J`` maps new-parameter perturbations to old-parameter perturbations,
    so H rows/cols must match J rows.
    """
    H = np.asarray(H, dtype=float)
    J = np.asarray(J, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"H must be square, got shape {H.shape}")
    if J.ndim != 2 or J.shape[0] != H.shape[0]:
        raise ValueError(f"Jacobian rows must match H dimension, got {J.shape}")
    return J.T @ H @ J
