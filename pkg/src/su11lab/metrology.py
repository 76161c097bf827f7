"""Quantum Fisher information, Cramer-Rao bounds and phase-estimation benchmarks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gaussian import OMEGA, GaussianState, to_complex
from .numerics import DEFAULT_STEP, SingularMatrixError, central_difference, condition_number, solve_linear

DEFAULT_QFI_PHI = 0.7
MAX_CONDITION = 1e12


class SingularDerivativeError(ArithmeticError):
    """d Sigma / d phi is singular at the evaluation phase; retry at a shifted phase."""


class QFIDiagnosticsError(ArithmeticError):
    pass


def _checked_solve(A, B, what: str):
    cond = condition_number(A)
    if cond > MAX_CONDITION:
        raise QFIDiagnosticsError(f"{what} has condition number {cond:.2e} > {MAX_CONDITION:g}")
    return solve_linear(A, B)


def qfi_gaussian(
    family: Callable[[float], GaussianState],
    phi: float = DEFAULT_QFI_PHI,
    h: float = DEFAULT_STEP,
) -> float:
    """QFI of a one-parameter Gaussian family from its complex-basis moments.

    ``F = 1/2 tr{dS [S dS^-1 S^T + 1/4 W dS^-1 W^T]^-1} + dd^T S^-1 dd`` with
    ``S`` the symmetrized covariance of ``(a, a^dag, b, b^dag)``, ``W`` their
    commutator matrix and ``dS``, ``dd`` central-difference phase derivatives.
    A covariance that does not move with ``phi`` contributes nothing.
    """
    m = to_complex(family(phi))
    sigma, dbar = m.sigma, m.dbar
    d_sigma = central_difference(lambda p: to_complex(family(p)).sigma, phi, h)
    d_dbar = central_difference(lambda p: to_complex(family(p)).dbar, phi, h)

    mean_term = d_dbar @ _checked_solve(sigma, d_dbar, "Sigma")

    scale = np.max(np.abs(sigma))
    if np.max(np.abs(d_sigma)) <= 1e-9 * scale:
        cov_term = 0.0
    else:
        try:
            dinv = solve_linear(d_sigma, np.eye(4))
        except SingularMatrixError as exc:
            raise SingularDerivativeError(f"d Sigma / d phi is singular at phi={phi}") from exc
        if condition_number(d_sigma) > MAX_CONDITION:
            raise SingularDerivativeError(f"d Sigma / d phi is ill-conditioned at phi={phi}")
        bracket = sigma @ dinv @ sigma.T + 0.25 * OMEGA @ dinv @ OMEGA.T
        cov_term = 0.5 * np.trace(_checked_solve(bracket, d_sigma, "QFI bracket"))

    F = complex(cov_term + mean_term)
    if abs(F.imag) > 1e-6 * max(1.0, abs(F.real)):
        raise QFIDiagnosticsError(f"QFI has a spurious imaginary part {F.imag:.3e}")
    return float(F.real)


def qfi_pure_gaussian(
    family: Callable[[float], GaussianState],
    phi: float = DEFAULT_QFI_PHI,
    h: float = DEFAULT_STEP,
) -> float:
    """QFI of a pure Gaussian family in the quadrature picture.

    ``F = tr[(V^-1 dV)^2] / 4 + dX^T V^-1 dX``. Only valid when ``det V = 1``;
    kept as an independent route to check :func:`qfi_gaussian`.
    """
    st = family(phi)
    dV = central_difference(lambda p: family(p).cov, phi, h)
    dX = central_difference(lambda p: family(p).mean, phi, h)
    M = solve_linear(st.cov, dV)
    return float(0.25 * np.trace(M @ M) + dX @ solve_linear(st.cov, dX))


def qcrb(F: float) -> float:
    if not F > 0:
        raise ValueError(f"Fisher information must be positive, got {F}")
    return 1.0 / math.sqrt(F)


def n_opa(g: float) -> float:
    """Spontaneous photons from one OPA on vacuum, ``2 sinh^2 g``."""
    return 2.0 * math.sinh(g) ** 2


def kappa(N_OPA: float) -> float:
    return N_OPA * (N_OPA + 2.0)


def _check_nonneg(**kw):
    for k, v in kw.items():
        if v < 0:
            raise ValueError(f"{k} must be non-negative, got {v}")


def qcrb_su11_closed(N_alpha: float, N_s: float, N_OPA: float) -> float:
    """Closed-form QCRB, coherent (theta_alpha = 0) plus squeezed vacuum into a balanced SU(1,1)."""
    _check_nonneg(N_alpha=N_alpha, N_s=N_s, N_OPA=N_OPA)
    if N_OPA == 0:
        raise ValueError("N_OPA must be positive")
    F = N_OPA * (N_OPA * (2 * N_s + 1) + 2) * (N_s + 1) + 2 * (N_OPA + 2) * N_alpha * (
        N_OPA * (N_s + math.sqrt(N_s * (N_s + 1)) + 1) + 1
    )
    return 1.0 / math.sqrt(F)


def qcrb_su11_hyperbolic(N_alpha: float, r: float, N_OPA: float) -> float:
    """The same bound written with ``cosh r`` and ``sinh r``."""
    ch, sh = math.cosh(r), math.sinh(r)
    F = 2 * (N_OPA + 2) * (N_OPA * (ch**2 + ch * sh) + 1) * N_alpha + N_OPA * (
        N_OPA * (ch**2 + sh**2) + 2
    ) * ch**2
    return 1.0 / math.sqrt(F)


def n_total(N_alpha: float, N_s: float, N_OPA: float) -> float:
    """Photons inside the interferometer, ``(N_OPA + 1)(N_alpha + N_s) + N_OPA``."""
    _check_nonneg(N_alpha=N_alpha, N_s=N_s, N_OPA=N_OPA)
    return (N_OPA + 1.0) * (N_alpha + N_s) + N_OPA


def hl_snl(n_tot: float) -> tuple[float, float]:
    """Heisenberg limit ``1/N`` and shot-noise limit ``1/sqrt N``."""
    if not n_tot > 0:
        raise ValueError(f"photon number must be positive, got {n_tot}")
    return 1.0 / n_tot, 1.0 / math.sqrt(n_tot)


def optimal_alpha(g: float, r: float) -> float:
    """Coherent amplitude that brings parity detection to the Heisenberg limit, ``tanh(2g) e^r / 2``."""
    _check_nonneg(g=g, r=r)
    return math.tanh(2 * g) * math.exp(r) / 2.0


@dataclass(frozen=True)
class BenchmarkSet:
    n_total: float
    snl: float
    hl: float
    qcrb: float
    delta_phi_detection: float | None = None


def benchmarks(N_alpha, N_s, N_OPA, qcrb_value, delta_phi_detection=None) -> BenchmarkSet:
    n = n_total(N_alpha, N_s, N_OPA)
    hl, snl = hl_snl(n)
    return BenchmarkSet(n, snl, hl, qcrb_value, delta_phi_detection)


# --- closed-form catalog -------------------------------------------------

INTERFEROMETERS = ("su11", "mzi")
INPUT_KINDS = ("vacuum", "one_coherent", "two_coherent", "coherent_squeezed")
COLUMNS = ("qcrb", "parity", "homodyne", "intensity")


class UnsupportedCombinationError(KeyError):
    pass


@dataclass(frozen=True)
class Cell:
    """One table entry.

    ``status`` is ``exact``, ``approx`` (an approximate closed form),
    ``nek`` (no closed form known) or ``always_bad`` (signal carries no phase
    information, sensitivity ``inf``).
    """

    status: str
    value: float | None = None

    @property
    def is_nek(self) -> bool:
        return self.status == "nek"


NEK = Cell("nek")
ALWAYS_BAD = Cell("always_bad", math.inf)


@dataclass(frozen=True)
class CatalogRow:
    interferometer: str
    input_kind: str
    qcrb: Cell
    parity: Cell
    homodyne: Cell | None = None
    intensity: Cell | None = None

    def cells(self) -> dict[str, Cell]:
        return {c: getattr(self, c) for c in COLUMNS if getattr(self, c) is not None}


def bound_catalog(interferometer: str, input_kind: str, N_alpha: float = 0.0, N_s: float = 0.0,
                  N_OPA: float = 0.0) -> CatalogRow:
    """Catalogued closed forms for QCRB and detection sensitivities.

    ``N_OPA`` is ignored for the MZI. For the SU(1,1) rows the homodyne and
    intensity columns come from the detection-method comparison.
    """
    _check_nonneg(N_alpha=N_alpha, N_s=N_s, N_OPA=N_OPA)
    r = math.asinh(math.sqrt(N_s))
    e2r = math.exp(2 * r)

    def inv_sqrt(x):
        return Cell("exact", 1.0 / math.sqrt(x))

    if interferometer == "su11":
        K = kappa(N_OPA)
        if input_kind == "vacuum":
            return CatalogRow("su11", input_kind, inv_sqrt(K), inv_sqrt(K), ALWAYS_BAD, inv_sqrt(K))
        if input_kind == "one_coherent":
            return CatalogRow(
                "su11", input_kind,
                qcrb=inv_sqrt(2 * N_alpha * (K + N_OPA + 2) + K),
                parity=inv_sqrt(K * (N_alpha + 1)),
                homodyne=inv_sqrt(K * N_alpha),
                intensity=NEK,
            )
        if input_kind == "two_coherent":
            return CatalogRow(
                "su11", input_kind,
                qcrb=inv_sqrt(2 * N_alpha * (K + (N_OPA + 1) * math.sqrt(K) + 1) + K),
                parity=NEK,
                homodyne=Cell("approx", 1.0 / math.sqrt(2 * K * N_alpha)),
                intensity=inv_sqrt(K * N_alpha),
            )
        if input_kind == "coherent_squeezed":
            return CatalogRow(
                "su11", input_kind,
                qcrb=inv_sqrt(
                    K * (2 * N_alpha * (math.sqrt((N_s + 1) * N_s) + N_s + 1) + (2 * N_s + 1) * (N_s + 1))
                    + N_alpha
                    + 2 * N_s * (N_s + 1)
                ),
                parity=inv_sqrt(K * (N_alpha * e2r + math.cosh(r) ** 2)),
                homodyne=inv_sqrt(K * N_alpha * e2r),
                intensity=NEK,
            )
    elif interferometer == "mzi":
        if input_kind == "one_coherent":
            return CatalogRow("mzi", input_kind, inv_sqrt(N_alpha), inv_sqrt(N_alpha))
        if input_kind == "two_coherent":
            return CatalogRow("mzi", input_kind, inv_sqrt(N_alpha), ALWAYS_BAD)
        if input_kind == "coherent_squeezed":
            v = N_alpha * e2r + N_s
            return CatalogRow("mzi", input_kind, inv_sqrt(v), inv_sqrt(v))
    raise UnsupportedCombinationError(f"no catalog entry for ({interferometer!r}, {input_kind!r})")
