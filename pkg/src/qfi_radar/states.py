"""Parametric Gaussian photon states: amplitudes, overlaps, derivatives, moments.

States are stored as a handful of real numbers; every integral used by the
Fisher-information machinery is a (polynomial x Gaussian) integral with a
closed form, evaluated here via complex Gaussian moment recursions.  Grids
appear only in quadrature cross-checks elsewhere.

Amplitude conventions (x_i = t_i - t_bar_i):

  single photon:  (2 sigma^2/pi)^(1/4) exp(-sigma^2 x^2) exp(-i omega_bar x)
  biphoton:       sqrt(2 sqrt(1-kappa^2) sigma1 sigma2 / pi)
                  * exp(-[sigma1^2 x1^2 + sigma2^2 x2^2
                          - 2 kappa sigma1 sigma2 x1 x2])
                  * exp(-i omega1 x1 - i omega2 x2)

Carrier phases are referenced to the returned centers, so a state is fully
specified by its center/carrier/bandwidth parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "GaussianSinglePhoton",
    "GaussianBiphoton",
    "GaussianEnsemble",
    "PolyState",
    "single_amplitude",
    "biphoton_amplitude",
    "overlap",
    "overlap_single",
    "overlap_biphoton",
    "derivative",
    "derivative_single",
    "derivative_own",
    "time_covariance",
    "frequency_covariance",
]

PAIR_PARAMS = ("t_plus", "t_minus", "omega_plus", "omega_minus")


@dataclass(frozen=True)
class GaussianSinglePhoton:
    """Normalized single-photon Gaussian wavepacket."""

    t_bar: float
    omega_bar: float
    sigma: float

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    @property
    def norm(self) -> float:
        return (2.0 * self.sigma**2 / math.pi) ** 0.25


@dataclass(frozen=True)
class GaussianBiphoton:
    """Normalized two-photon Gaussian wavepacket with time correlation kappa."""

    t1_bar: float
    t2_bar: float
    omega1_bar: float
    omega2_bar: float
    sigma1: float
    sigma2: float
    kappa: float

    def __post_init__(self) -> None:
        if self.sigma1 <= 0 or self.sigma2 <= 0:
            raise ValueError("bandwidths must be positive")
        if not -1.0 < self.kappa < 1.0:
            raise ValueError(f"kappa must lie in (-1, 1), got {self.kappa}")

    @property
    def norm(self) -> float:
        return math.sqrt(
            2.0 * math.sqrt(1.0 - self.kappa**2) * self.sigma1 * self.sigma2 / math.pi
        )

    def quad_form(self) -> np.ndarray:
        """Real SPD matrix B with amplitude exponent -x^T B x."""
        s1, s2, k = self.sigma1, self.sigma2, self.kappa
        return np.array([[s1**2, -k * s1 * s2], [-k * s1 * s2, s2**2]])

    def centers(self) -> np.ndarray:
        return np.array([self.t1_bar, self.t2_bar])

    def carriers(self) -> np.ndarray:
        return np.array([self.omega1_bar, self.omega2_bar])


@dataclass(frozen=True)
class GaussianEnsemble:
    """Weighted incoherent mixture of Gaussian states.

    ``photon_counted`` keeps the raw branch weights (trace = photon budget);
    ``normalized`` requires the weights to sum to one.
    """

    branches: tuple[tuple[float, object], ...]
    trace_convention: str = "normalized"

    def __post_init__(self) -> None:
        if not self.branches:
            raise ValueError("ensemble needs at least one branch")
        if any(w <= 0 for w, _ in self.branches):
            raise ValueError("branch weights must be positive")
        if self.trace_convention not in ("normalized", "photon_counted"):
            raise ValueError(f"unknown trace convention {self.trace_convention!r}")
        if self.trace_convention == "normalized":
            total = sum(w for w, _ in self.branches)
            if abs(total - 1.0) > 1e-12:
                raise ValueError("normalized ensemble weights must sum to 1")


@dataclass(frozen=True)
class PolyState:
    """Polynomial prefactor times a Gaussian base state.

    For a single-photon base the coefficients map power k -> c_k over
    (t - t_bar); for a biphoton base they map (k1, k2) -> c over
    (t1 - t1_bar, t2 - t2_bar).  Derivative states of the parametric
    families are degree-1 instances of this type.
    """

    base: GaussianSinglePhoton | GaussianBiphoton
    coeffs: tuple[tuple[object, complex], ...]

    def coeff_dict(self) -> dict:
        return dict(self.coeffs)


def _as_poly(state) -> PolyState:
    if isinstance(state, PolyState):
        return state
    if isinstance(state, GaussianSinglePhoton):
        return PolyState(state, ((0, 1.0 + 0.0j),))
    if isinstance(state, GaussianBiphoton):
        return PolyState(state, (((0, 0), 1.0 + 0.0j),))
    raise TypeError(f"not a Gaussian state: {state!r}")


def single_amplitude(state: GaussianSinglePhoton, t) -> complex | np.ndarray:
    """Time-domain amplitude psi(t)."""
    x = np.asarray(t) - state.t_bar
    return state.norm * np.exp(-state.sigma**2 * x**2 - 1j * state.omega_bar * x)


def biphoton_amplitude(state: GaussianBiphoton, t1, t2) -> complex | np.ndarray:
    """Joint time-domain amplitude phi(t1, t2)."""
    x1 = np.asarray(t1) - state.t1_bar
    x2 = np.asarray(t2) - state.t2_bar
    s1, s2, k = state.sigma1, state.sigma2, state.kappa
    quad = s1**2 * x1**2 + s2**2 * x2**2 - 2.0 * k * s1 * s2 * x1 * x2
    phase = state.omega1_bar * x1 + state.omega2_bar * x2
    return state.norm * np.exp(-quad - 1j * phase)


# ---------------------------------------------------------------------------
# Gaussian moment helpers


@lru_cache(maxsize=None)
def _central_moment_1d(n: int) -> float:
    """(n-1)!! for even n, 0 for odd: E[u^n] in units of the variance^(n/2)."""
    if n % 2:
        return 0.0
    out = 1.0
    for m in range(n - 1, 0, -2):
        out *= m
    return out


def _poly_shift_1d(coeffs: dict, d: complex) -> dict:
    """Rewrite sum c_k x^k with x = u + d as a polynomial in u."""
    out: dict[int, complex] = {}
    for k, c in coeffs.items():
        for j in range(k + 1):
            out[j] = out.get(j, 0.0) + c * math.comb(k, j) * d ** (k - j)
    return out


def _poly_shift_2d(coeffs: dict, d1: complex, d2: complex) -> dict:
    out: dict[tuple[int, int], complex] = {}
    for (k1, k2), c in coeffs.items():
        for j1 in range(k1 + 1):
            for j2 in range(k2 + 1):
                key = (j1, j2)
                out[key] = out.get(key, 0.0) + (
                    c
                    * math.comb(k1, j1)
                    * math.comb(k2, j2)
                    * d1 ** (k1 - j1)
                    * d2 ** (k2 - j2)
                )
    return out


def _poly_mul(a: dict, b: dict, is_2d: bool) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = (ka[0] + kb[0], ka[1] + kb[1]) if is_2d else ka + kb
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def _gaussian_moment_2d(p: int, q: int, cov: np.ndarray, memo: dict) -> complex:
    """E[u1^p u2^q] for a centered Gaussian with (complex-valued) covariance."""
    if p < 0 or q < 0:
        return 0.0
    if p + q == 0:
        return 1.0
    key = (p, q)
    if key in memo:
        return memo[key]
    if p >= 1:
        val = (p - 1) * cov[0, 0] * _gaussian_moment_2d(p - 2, q, cov, memo) + q * cov[
            0, 1
        ] * _gaussian_moment_2d(p - 1, q - 1, cov, memo)
    else:
        val = (q - 1) * cov[1, 1] * _gaussian_moment_2d(p, q - 2, cov, memo) + p * cov[
            0, 1
        ] * _gaussian_moment_2d(p - 1, q - 1, cov, memo)
    memo[key] = val
    return val


# ---------------------------------------------------------------------------
# Overlaps


def _overlap_1d(pa: PolyState, pb: PolyState) -> complex:
    a: GaussianSinglePhoton = pa.base
    b: GaussianSinglePhoton = pb.base
    # conj(amp_a) * amp_b = n_a n_b exp(-A t^2 + B t + C)
    A = a.sigma**2 + b.sigma**2
    B = (
        2.0 * a.sigma**2 * a.t_bar
        + 2.0 * b.sigma**2 * b.t_bar
        + 1j * (a.omega_bar - b.omega_bar)
    )
    C = (
        -(a.sigma**2) * a.t_bar**2
        - b.sigma**2 * b.t_bar**2
        - 1j * (a.omega_bar * a.t_bar - b.omega_bar * b.t_bar)
    )
    mu = B / (2.0 * A)
    var = 1.0 / (2.0 * A)
    prefactor = a.norm * b.norm * np.exp(C + B**2 / (4.0 * A)) * math.sqrt(math.pi / A)

    ca = {k: np.conj(c) for k, c in pa.coeff_dict().items()}
    cb = pb.coeff_dict()
    poly = _poly_mul(
        _poly_shift_1d(ca, mu - a.t_bar), _poly_shift_1d(cb, mu - b.t_bar), is_2d=False
    )
    total = sum(c * _central_moment_1d(n) * var ** (n // 2) for n, c in poly.items() if n % 2 == 0)
    return complex(prefactor * total)


def _overlap_2d(pa: PolyState, pb: PolyState) -> complex:
    a: GaussianBiphoton = pa.base
    b: GaussianBiphoton = pb.base
    Ba, Bb = a.quad_form(), b.quad_form()
    ta, tb = a.centers(), b.centers()
    wa, wb = a.carriers(), b.carriers()

    A = Ba + Bb
    bvec = 2.0 * Ba @ ta + 2.0 * Bb @ tb + 1j * (wa - wb)
    c0 = -ta @ Ba @ ta - tb @ Bb @ tb - 1j * (wa @ ta - wb @ tb)

    Ainv = np.linalg.inv(A)
    detA = np.linalg.det(A)
    if detA <= 0:
        raise ArithmeticError("combined Gaussian quadratic form is not positive definite")
    mu = 0.5 * Ainv @ bvec
    cov = 0.5 * Ainv.astype(complex)
    prefactor = (
        a.norm * b.norm * np.exp(c0 + 0.25 * bvec @ Ainv @ bvec) * math.pi / math.sqrt(detA)
    )

    ca = {k: np.conj(c) for k, c in pa.coeff_dict().items()}
    cb = pb.coeff_dict()
    poly = _poly_mul(
        _poly_shift_2d(ca, mu[0] - ta[0], mu[1] - ta[1]),
        _poly_shift_2d(cb, mu[0] - tb[0], mu[1] - tb[1]),
        is_2d=True,
    )
    memo: dict = {}
    total = sum(c * _gaussian_moment_2d(p, q, cov, memo) for (p, q), c in poly.items())
    return complex(prefactor * total)


def overlap(a, b) -> complex:
    """Closed-form inner product <a|b> of (polynomial x Gaussian) states."""
    pa, pb = _as_poly(a), _as_poly(b)
    if isinstance(pa.base, GaussianSinglePhoton) and isinstance(
        pb.base, GaussianSinglePhoton
    ):
        return _overlap_1d(pa, pb)
    if isinstance(pa.base, GaussianBiphoton) and isinstance(pb.base, GaussianBiphoton):
        return _overlap_2d(pa, pb)
    raise TypeError("cannot overlap single-photon with biphoton states")


def overlap_single(a: GaussianSinglePhoton, b: GaussianSinglePhoton) -> complex:
    """<a|b> for plain single-photon Gaussians."""
    return overlap(a, b)


def overlap_biphoton(a: GaussianBiphoton, b: GaussianBiphoton) -> complex:
    """<a|b> for plain biphoton Gaussians."""
    return overlap(a, b)


# ---------------------------------------------------------------------------
# Parameter derivatives (analytic, polynomial-times-Gaussian)


def _combine(base, parts: list[tuple[float, dict]], is_2d: bool) -> PolyState:
    out: dict = {}
    for fac, coeffs in parts:
        for k, c in coeffs.items():
            out[k] = out.get(k, 0.0) + fac * c
    items = tuple(sorted(out.items(), key=lambda kv: str(kv[0])))
    return PolyState(base, items)


def _d_biphoton_own(state: GaussianBiphoton, var: str) -> dict:
    """Prefactor of the derivative wrt one of the biphoton's own parameters."""
    s1, s2, k = state.sigma1, state.sigma2, state.kappa
    if var == "t1_bar":
        return {
            (1, 0): 2.0 * s1**2,
            (0, 1): -2.0 * k * s1 * s2,
            (0, 0): 1j * state.omega1_bar,
        }
    if var == "t2_bar":
        return {
            (0, 1): 2.0 * s2**2,
            (1, 0): -2.0 * k * s1 * s2,
            (0, 0): 1j * state.omega2_bar,
        }
    if var == "omega1_bar":
        return {(1, 0): -1j}
    if var == "omega2_bar":
        return {(0, 1): -1j}
    raise ValueError(f"unknown biphoton parameter {var!r}")


def derivative(state: GaussianBiphoton, param: str) -> PolyState:
    """d|phi>/d(param) for param in t_plus/t_minus/omega_plus/omega_minus.

    The sum/difference parameters are chained through both photon centers
    and carriers: t1 = (t_plus - t_minus)/2, t2 = (t_plus + t_minus)/2, etc.
    """
    if param == "t_plus":
        parts = [(0.5, _d_biphoton_own(state, "t1_bar")), (0.5, _d_biphoton_own(state, "t2_bar"))]
    elif param == "t_minus":
        parts = [(-0.5, _d_biphoton_own(state, "t1_bar")), (0.5, _d_biphoton_own(state, "t2_bar"))]
    elif param == "omega_plus":
        parts = [
            (0.5, _d_biphoton_own(state, "omega1_bar")),
            (0.5, _d_biphoton_own(state, "omega2_bar")),
        ]
    elif param == "omega_minus":
        parts = [
            (-0.5, _d_biphoton_own(state, "omega1_bar")),
            (0.5, _d_biphoton_own(state, "omega2_bar")),
        ]
    else:
        raise ValueError(f"unsupported parameter {param!r}")
    return _combine(state, parts, is_2d=True)


def derivative_own(state: GaussianSinglePhoton, var: str) -> PolyState:
    """d|psi>/d(var) for the single photon's own t_bar, omega_bar, or sigma."""
    s = state.sigma
    if var == "t_bar":
        coeffs = {1: 2.0 * s**2 + 0j, 0: 1j * state.omega_bar}
    elif var == "omega_bar":
        coeffs = {1: -1j}
    elif var == "sigma":
        # norm factor contributes 1/(2 sigma), exponent contributes -2 sigma x^2
        coeffs = {0: 1.0 / (2.0 * s) + 0j, 2: -2.0 * s + 0j}
    else:
        raise ValueError(f"unknown single-photon parameter {var!r}")
    return PolyState(state, tuple(sorted(coeffs.items())))


def derivative_single(state: GaussianSinglePhoton, param: str, photon_index: int) -> PolyState:
    """Derivative of a returned single photon wrt a sum/difference parameter.

    ``photon_index`` (1 or 2) fixes the chain-rule signs: photon 1 carries
    (t_plus - t_minus)/2 and (omega_plus - omega_minus)/2, photon 2 the
    plus-sign combinations.
    """
    if photon_index not in (1, 2):
        raise ValueError("photon_index must be 1 or 2")
    sign = -1.0 if photon_index == 1 else 1.0
    if param == "t_plus":
        fac, var = 0.5, "t_bar"
    elif param == "t_minus":
        fac, var = 0.5 * sign, "t_bar"
    elif param == "omega_plus":
        fac, var = 0.5, "omega_bar"
    elif param == "omega_minus":
        fac, var = 0.5 * sign, "omega_bar"
    else:
        raise ValueError(f"unsupported parameter {param!r}")
    d = derivative_own(state, var)
    return PolyState(state, tuple((k, fac * c) for k, c in d.coeffs))


# ---------------------------------------------------------------------------
# Second moments of the exact densities


def time_covariance(state: GaussianBiphoton) -> np.ndarray:
    """Covariance of the arrival-time pair (t1, t2) under |phi|^2."""
    B = state.quad_form()
    # |phi|^2 ~ exp(-2 x^T B x)  =>  covariance = (4 B)^(-1)
    return np.linalg.inv(4.0 * B)


def frequency_covariance(state: GaussianBiphoton) -> np.ndarray:
    """Covariance of the frequency pair (w1, w2) under the spectral intensity.

    The joint spectral intensity is the squared Fourier transform of phi;
    its covariance equals the amplitude quadratic form itself, so time
    correlation kappa shows up as frequency anticorrelation -kappa.
    """
    return state.quad_form()
