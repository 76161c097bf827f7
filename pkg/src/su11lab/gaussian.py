"""Two-mode Gaussian states in the quadrature picture.

Quadratures are ordered ``(x_a, p_a, x_b, p_b)`` with ``x = a + a^dag`` and
``p = -i(a - a^dag)``, so the vacuum covariance is the identity and a coherent
amplitude ``alpha`` sits at ``(2 Re alpha, 2 Im alpha)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import determinant, solve_linear

MODES = ("a", "b")

# per-mode symplectic form [[0, 1], [-1, 0]]
J = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))

# (a, a^dag, b, b^dag) in terms of (x_a, p_a, x_b, p_b), up to the 1/sqrt2
# normalization folded into the matrix
H = np.kron(np.eye(2), np.array([[1.0, 1.0j], [1.0, -1.0j]])) / np.sqrt(2.0)

# commutators [d_u, d_v] for d = (a, a^dag, b, b^dag)
OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


class SingularCovarianceError(ValueError):
    pass


def _frozen(x, dtype=float) -> np.ndarray:
    arr = np.array(x, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean quadrature vector and symmetrized covariance of a two-mode state."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        if mean.shape != (4,) or cov.shape != (4, 4):
            raise ValueError(f"expected a 4-vector and 4x4 matrix, got {mean.shape}, {cov.shape}")
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "cov", _frozen(0.5 * (cov + cov.T)))

    @classmethod
    def vacuum(cls) -> "GaussianState":
        return cls(np.zeros(4), np.eye(4))

    def uncertainty_eigenvalues(self) -> np.ndarray:
        """Eigenvalues of ``cov + iJ``; all must be >= 0 for a physical state."""
        return np.linalg.eigvalsh(self.cov + 1j * J)

    def is_physical(self, tol: float = 1e-10) -> bool:
        return bool(self.uncertainty_eigenvalues().min() >= -tol)

    def purity_determinant(self) -> float:
        return float(determinant(self.cov))

    def mode_photon_number(self, mode: str) -> float:
        mu, cov = marginal(self, mode)
        return float((cov[0, 0] + cov[1, 1] + mu @ mu - 2.0) / 4.0)

    def total_photon_number(self) -> float:
        return self.mode_photon_number("a") + self.mode_photon_number("b")


@dataclass(frozen=True, eq=False)
class ComplexMoments:
    """Means and symmetrized covariance of ``d = (a, a^dag, b, b^dag)``."""

    dbar: np.ndarray
    sigma: np.ndarray
    omega: np.ndarray = OMEGA

    def __post_init__(self):
        object.__setattr__(self, "dbar", _frozen(self.dbar, complex))
        object.__setattr__(self, "sigma", _frozen(self.sigma, complex))
        object.__setattr__(self, "omega", _frozen(self.omega))

    def photon_number(self, mode: str) -> float:
        """``<c^dag c> = Sigma[c^dag, c] - 1/2 + |<c>|^2``."""
        k = 2 * MODES.index(mode)
        return float((self.sigma[k + 1, k] - 0.5 + self.dbar[k + 1] * self.dbar[k]).real)


def _rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def squeezed_block(r: float, theta_s: float = 0.0) -> np.ndarray:
    """Covariance of a single-mode squeezed vacuum with ``<b^2> = e^{i theta_s} sinh r cosh r``.

    ``theta_s = 0`` stretches ``x`` (variance ``e^{2r}``) and squeezes ``p``.
    """
    R = _rotation(theta_s / 2.0)
    return R @ np.diag([np.exp(2.0 * r), np.exp(-2.0 * r)]) @ R.T


def prepare_input(
    alpha_mag: float,
    theta_alpha: float = 0.0,
    r: float = 0.0,
    theta_s: float = 0.0,
    beta: complex = 0.0,
) -> GaussianState:
    """Coherent state ``|alpha_mag e^{i theta_alpha}>`` on mode a, squeezed vacuum on mode b.

    ``beta`` optionally displaces mode b as well (used for two-coherent inputs).
    """
    if alpha_mag < 0 or r < 0:
        raise ValueError("alpha_mag and r must be non-negative")
    alpha = alpha_mag * np.exp(1j * theta_alpha)
    mean = np.array([2 * alpha.real, 2 * alpha.imag, 2 * np.real(beta), 2 * np.imag(beta)])
    cov = np.eye(4)
    cov[2:, 2:] = squeezed_block(r, theta_s)
    return GaussianState(mean, cov)


def coherent_pair(alpha_a: complex, alpha_b: complex) -> GaussianState:
    a, b = complex(alpha_a), complex(alpha_b)
    return GaussianState([2 * a.real, 2 * a.imag, 2 * b.real, 2 * b.imag], np.eye(4))


def wigner_value(state: GaussianState, alpha: complex, beta: complex) -> float:
    """Wigner function in the complex-amplitude normalization, ``int W d^2alpha d^2beta = 1``.

    In quadrature coordinates the density carries an extra Jacobian of 1/16.
    """
    det = determinant(state.cov)
    if det < 1e-14:
        raise SingularCovarianceError(f"covariance determinant {det:.3e} is singular")
    X = np.array([2 * alpha.real, 2 * alpha.imag, 2 * beta.real, 2 * beta.imag]) - state.mean
    q = X @ solve_linear(state.cov, X)
    return float(4.0 / (np.pi**2 * np.sqrt(det)) * np.exp(-0.5 * q))


def marginal(state: GaussianState, mode: str) -> tuple[np.ndarray, np.ndarray]:
    k = 2 * MODES.index(mode)
    return state.mean[k : k + 2].copy(), state.cov[k : k + 2, k : k + 2].copy()


def to_complex(state: GaussianState) -> ComplexMoments:
    """Change basis to ``(a, a^dag, b, b^dag)``.

    ``Sigma = H cov H^T / 2``. The mean uses ``H X / sqrt 2`` so that
    ``dbar[0]`` is the actual ``<a>`` for ``x = a + a^dag``.
    """
    dbar = H @ state.mean / np.sqrt(2.0)
    sigma = 0.5 * H @ state.cov @ H.T
    return ComplexMoments(dbar, sigma)


def from_complex(moments: ComplexMoments) -> GaussianState:
    Hinv = np.linalg.inv(H)
    mean = np.sqrt(2.0) * Hinv @ moments.dbar
    cov = 2.0 * Hinv @ moments.sigma @ Hinv.T
    return GaussianState(mean.real, cov.real)
