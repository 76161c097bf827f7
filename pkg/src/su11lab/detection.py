"""Parity, homodyne and intensity detection on interferometer outputs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianState, SingularCovarianceError, marginal
from .numerics import DEFAULT_STEP, central_difference, determinant, richardson_even, solve_linear

SCHEMES = ("parity", "homodyne", "intensity")
LIMIT_STEPS = (1e-2, 5e-3, 2.5e-3)


class ZeroDerivativeError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SensitivityResult:
    phi: float
    signal: float
    noise: float
    d_signal_d_phi: float
    delta_phi: float
    method: str = "numeric"
    diagnostic: str = ""

    @property
    def finite(self) -> bool:
        return math.isfinite(self.delta_phi)


def parity_expectation(state: GaussianState, mode: str = "b") -> float:
    """``<(-1)^n>`` of one mode: ``exp(-mu^T V^-1 mu / 2) / sqrt(det V)`` of its marginal."""
    mu, V = marginal(state, mode)
    det = determinant(V)
    if det < 1e-14:
        raise SingularCovarianceError(f"marginal determinant {det:.3e} is singular")
    return float(np.exp(-0.5 * mu @ solve_linear(V, mu)) / np.sqrt(det))


def _log_parity(state: GaussianState, mode: str) -> float:
    mu, V = marginal(state, mode)
    return float(-0.5 * mu @ solve_linear(V, mu) - 0.5 * np.log(determinant(V)))


def parity_closed_form_su11(alpha_mag, theta_alpha, r, g, phi, uncorrected: bool = False) -> float:
    """Closed-form parity signal ``exp(-T2/T3) / sqrt(T1/64)`` on mode b of a balanced SU(1,1).

    ``T1 / 64`` is the determinant of the mode-b covariance and shares its
    phase-dependent bracket with ``T3``. ``uncorrected=True`` evaluates the
    older ``T1^{-1/2} exp(-T2/T3)`` variant, whose ``T1`` has a different
    bracket and no factor 64. That variant disagrees with the Gaussian signal
    and is kept only so the disagreement can be reported.
    """
    e2r, e4r = np.exp(2 * r), np.exp(4 * r)
    th = theta_alpha
    s2 = np.sin(phi / 2) ** 2
    s4 = s2**2
    bracket = (
        8 * np.cosh(8 * g) * s4
        + 8 * np.cosh(4 * g) * np.sin(phi) ** 2
        + 4 * np.cos(phi)
        + 3 * np.cos(2 * phi)
        - 7
    )
    T2 = (
        4
        * alpha_mag**2
        * np.sinh(2 * g) ** 2
        * (
            8 * np.cosh(4 * g) * np.cos(2 * th) * s4
            - 8 * np.cosh(2 * g) * np.sin(2 * th) * np.sin(phi) * (np.cos(phi) - 1)
            + 8 * e4r * (np.cos(th) * np.sin(phi) - 2 * np.cosh(2 * g) * np.sin(th) * s2) ** 2
            + 32 * e2r * np.sinh(2 * g) ** 2 * s4
            + 8 * np.cosh(4 * g) * s4
            - 8 * np.cos(th) ** 2 * np.cos(phi)
            + (3 * np.cos(2 * th) - 1) * np.cos(2 * phi)
            + np.cos(2 * th)
            + 5
        )
    )
    T3 = (e2r + 1) ** 2 * bracket + 64 * e2r
    if uncorrected:
        old_bracket = (
            8 * np.sinh(2 * g) ** 4 * (np.cos(2 * phi) - np.cos(phi))
            + 4 * np.cosh(4 * g)
            + 3 * np.cosh(8 * g)
            - 7
        )
        T1 = np.exp(-2 * r) * (e2r + 1) ** 2 * old_bracket + 64
        return float(np.exp(-T2 / T3) / np.sqrt(T1))
    T1 = np.exp(-2 * r) * (e2r + 1) ** 2 * bracket + 64
    return float(np.exp(-T2 / T3) / np.sqrt(T1 / 64))


def homodyne_signal(state: GaussianState, mode: str = "b", quadrature_angle: float = 0.0):
    """Mean and variance of ``cos(t) x + sin(t) p`` on one mode."""
    mu, V = marginal(state, mode)
    u = np.array([np.cos(quadrature_angle), np.sin(quadrature_angle)])
    return float(u @ mu), float(u @ V @ u)


def intensity_signal(state: GaussianState, mode: str = "b"):
    """Photon-number mean and variance of mode ``a``, ``b`` or their ``total``.

    With ``n = (x^2 + p^2 - 2)/4`` and Isserlis factorization of the
    symmetrized fourth moments, ``Var n = tr(V^2)/8 + mu^T V mu / 4 - 1/4``.
    The two modes commute, so their covariance needs no ordering correction:
    ``Cov(n_a, n_b) = |C|_F^2 / 8 + mu_a^T C mu_b / 4`` with ``C`` the cross block.
    """
    if mode == "total":
        mean_a, var_a = intensity_signal(state, "a")
        mean_b, var_b = intensity_signal(state, "b")
        C = state.cov[:2, 2:]
        cross = np.sum(C * C) / 8.0 + state.mean[:2] @ C @ state.mean[2:] / 4.0
        return mean_a + mean_b, float(max(var_a + var_b + 2.0 * cross, 0.0))
    mu, V = marginal(state, mode)
    mean_n = (np.trace(V) + mu @ mu - 2.0) / 4.0
    var_n = np.trace(V @ V) / 8.0 + mu @ V @ mu / 4.0 - 0.25
    return float(mean_n), float(max(var_n, 0.0))


def parity_sensitivity_phi0(N_alpha, N_s, N_OPA, theta_alpha=0.0) -> float:
    """Optimal parity sensitivity of the balanced SU(1,1) interferometer (reached at phi = 0)."""
    if N_OPA <= 0:
        raise ValueError("N_OPA must be positive; without amplification there is no interferometer")
    r = np.arcsinh(np.sqrt(N_s))
    gain = N_alpha * (np.sinh(2 * r) * np.cos(2 * theta_alpha) + np.cosh(2 * r)) + N_s + 1
    return float(1.0 / np.sqrt(gain * N_OPA * (N_OPA + 2)))


def _optimal_quadrature(spec, phi, mode, h) -> float:
    """Angle maximizing ``slope^2 / variance``: direction ``V^-1 dmu/dphi``."""
    dmu = central_difference(lambda p: marginal(spec.output_state(p), mode)[0], phi, h)
    _, V = marginal(spec.output_state(phi), mode)
    v = solve_linear(V, dmu)
    if not np.any(v):
        return 0.0
    return float(np.arctan2(v[1], v[0]))


def _signal_function(scheme, spec, mode, quadrature_angle):
    if scheme == "parity":
        def f(p):
            s = parity_expectation(spec.output_state(p), mode)
            return s, math.sqrt(max(0.0, 1.0 - s * s))
    elif scheme == "homodyne":
        def f(p):
            m, v = homodyne_signal(spec.output_state(p), mode, quadrature_angle)
            return m, math.sqrt(v)
    elif scheme == "intensity":
        def f(p):
            m, v = intensity_signal(spec.output_state(p), mode)
            return m, math.sqrt(v)
    else:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    return f


def _analytic_limit(scheme, spec):
    """Closed-form phi -> 0 sensitivity where one is known, else None."""
    from .transforms import SU11Spec

    if not isinstance(spec, SU11Spec) or not spec.is_balanced() or spec.input.beta != 0:
        return None
    inp = spec.input
    n_opa = 2 * np.sinh(spec.g1) ** 2
    if n_opa == 0:
        return None
    if scheme == "parity" and inp.theta_s == 0:
        return parity_sensitivity_phi0(inp.alpha_mag**2, np.sinh(inp.r) ** 2, n_opa, inp.theta_alpha)
    if scheme == "intensity" and inp.alpha_mag == 0 and inp.r == 0:
        return float(1.0 / np.sqrt(n_opa * (n_opa + 2)))
    return None


def phase_sensitivity(
    scheme: str,
    spec,
    phi: float | None = None,
    mode: str = "b",
    quadrature_angle: float | None = None,
    h: float = DEFAULT_STEP,
) -> SensitivityResult:
    """Error propagation ``noise / |d signal / d phi|`` at ``phi``.

    For homodyne with ``quadrature_angle=None`` the quadrature with the best
    ratio is used. Where the slope vanishes the closed-form limit is returned
    if one exists (parity and vacuum intensity at ``phi = 0`` of a balanced
    SU(1,1) interferometer); otherwise ``delta_phi`` is ``inf`` and
    ``diagnostic`` says why.
    """
    phi = spec.phi if phi is None else phi
    if scheme == "homodyne" and quadrature_angle is None:
        quadrature_angle = _optimal_quadrature(spec, phi, mode, h)
    f = _signal_function(scheme, spec, mode, quadrature_angle)
    signal, noise = f(phi)
    plus, minus = f(phi + h)[0], f(phi - h)[0]
    slope = (plus - minus) / (2 * h)

    # Slopes below the rounding floor, or negligible next to the local
    # curvature, mark a stationary point.
    curvature = abs(plus + minus - 2 * signal) / h**2
    floor = max(1e-9 * max(1.0, abs(signal)), 1e-6 * curvature * h)
    if abs(slope) > floor and noise > 0:
        return SensitivityResult(phi, signal, noise, slope, noise / abs(slope))

    if abs(phi) < 1e-12:
        limit = _analytic_limit(scheme, spec)
        if limit is not None:
            return SensitivityResult(phi, signal, noise, slope, limit, "analytic_limit",
                                     "stationary point; closed-form phi -> 0 limit")
    return SensitivityResult(phi, signal, noise, slope, math.inf, "zero_derivative",
                             f"signal slope {slope:.3e} is zero within {floor:.1e}")


def sensitivity_limit(scheme: str, spec, phi0: float = 0.0, steps=LIMIT_STEPS, **kwargs) -> float:
    """Numerical sensitivity at ``phi0``, extrapolated when ``phi0`` is stationary.

    Away from stationary points this is just the direct value. At a stationary
    point the ratio is 0/0, so it is evaluated at ``phi0 +- s`` for each step
    ``s``; averaging the two sides removes odd powers of ``s`` and the averages
    are extrapolated to ``s = 0`` by even Richardson. No closed form is used.
    """
    direct = phase_sensitivity(scheme, spec, phi0, **kwargs)
    if direct.method == "numeric":
        return direct.delta_phi
    vals = []
    for s in steps:
        pair = [phase_sensitivity(scheme, spec, phi0 + d, **kwargs).delta_phi for d in (s, -s)]
        if not all(math.isfinite(v) for v in pair):
            return math.inf
        vals.append(0.5 * (pair[0] + pair[1]))
    return richardson_even(vals, steps)
