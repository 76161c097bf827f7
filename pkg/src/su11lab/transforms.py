"""Symplectic transfer matrices for OPAs, phase shifters and beam splitters.

All matrices act on quadratures ``(x_a, p_a, x_b, p_b)``. Interferometers are
described by :class:`SU11Spec` (two OPAs around a phase shift on mode a) and
:class:`MZISpec` (two beam splitters around a split phase shift).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .gaussian import J, GaussianState, prepare_input

BALANCE_TOL = 1e-12


class UnbalancedSpecError(ValueError):
    """The closed-form transfer only exists for g1 = g2, theta1 = 0, theta2 = pi."""


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"expected 4x4 matrix, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: "SymplecticTransform") -> "SymplecticTransform":
        return SymplecticTransform(self.matrix @ other.matrix)

    def symplectic_defect(self) -> float:
        """``max |S J S^T - J|``."""
        S = self.matrix
        return float(np.max(np.abs(S @ J @ S.T - J)))

    def inverse(self) -> "SymplecticTransform":
        # S^-1 = -J S^T J for symplectic S
        return SymplecticTransform(-J @ self.matrix.T @ J)


IDENTITY = SymplecticTransform(np.eye(4))


def _rot(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def opa(g: float, theta: float = 0.0) -> SymplecticTransform:
    """Two-mode squeezer ``a -> a cosh g + e^{i theta} b^dag sinh g`` (and a <-> b).

    ``theta = 0`` and ``theta = pi`` give the two OPA matrices of the balanced
    interferometer.
    """
    ch, sh = np.cosh(g), np.sinh(g)
    C = sh * np.array([[np.cos(theta), np.sin(theta)], [np.sin(theta), -np.cos(theta)]])
    S = np.block([[ch * np.eye(2), C], [C, ch * np.eye(2)]])
    return SymplecticTransform(S)


def phase_shifter(phi: float, placement: str = "mode_a_only") -> SymplecticTransform:
    """Phase rotation ``a -> a e^{i phi}``.

    ``placement="both_arms_half"`` puts ``+phi/2`` on mode a and ``-phi/2`` on mode b.
    """
    S = np.eye(4)
    if placement == "mode_a_only":
        S[:2, :2] = _rot(phi)
    elif placement == "both_arms_half":
        S[:2, :2] = _rot(phi / 2.0)
        S[2:, 2:] = _rot(-phi / 2.0)
    else:
        raise ValueError(f"unknown placement {placement!r}")
    return SymplecticTransform(S)


def beam_splitter(theta_bs: float) -> SymplecticTransform:
    """Lossless beam splitter with transmittance ``cos^2 theta_bs``.

    Uses the symmetric convention ``a -> cos a + i sin b``, ``b -> i sin a + cos b``,
    so ``theta_bs = pi/4`` maps ``|i alpha/sqrt2> |alpha/sqrt2>`` entirely into mode a.
    """
    c, s = np.cos(theta_bs), np.sin(theta_bs)
    # multiplication by i on a quadrature pair is a +pi/2 rotation
    iS = s * _rot(np.pi / 2.0)
    S = np.block([[c * np.eye(2), iS], [iS, c * np.eye(2)]])
    return SymplecticTransform(S)


def compose(transforms: Iterable[SymplecticTransform]) -> SymplecticTransform:
    """Product of transforms in the order they act (first element acts first)."""
    total = np.eye(4)
    for t in transforms:
        total = t.matrix @ total
    return SymplecticTransform(total)


def apply(S: SymplecticTransform, state: GaussianState) -> GaussianState:
    M = S.matrix
    return GaussianState(M @ state.mean, M @ state.cov @ M.T)


@dataclass(frozen=True)
class InputSpec:
    """Coherent amplitude on mode a, squeezed vacuum on mode b (optionally displaced by ``beta``)."""

    alpha_mag: float = 0.0
    theta_alpha: float = 0.0
    r: float = 0.0
    theta_s: float = 0.0
    beta: complex = 0.0

    def state(self) -> GaussianState:
        return prepare_input(self.alpha_mag, self.theta_alpha, self.r, self.theta_s, self.beta)

    @property
    def alpha(self) -> complex:
        return self.alpha_mag * np.exp(1j * self.theta_alpha)


@dataclass(frozen=True)
class SU11Spec:
    g1: float = 1.0
    g2: float = 1.0
    theta1: float = 0.0
    theta2: float = np.pi
    phi: float = 0.0
    input: InputSpec = field(default_factory=InputSpec)

    @classmethod
    def balanced(cls, g: float, phi: float = 0.0, **inputs) -> "SU11Spec":
        return cls(g1=g, g2=g, theta1=0.0, theta2=np.pi, phi=phi, input=InputSpec(**inputs))

    def is_balanced(self) -> bool:
        return (
            abs(self.theta1) < BALANCE_TOL
            and abs(self.theta2 - np.pi) < BALANCE_TOL
            and abs(self.g1 - self.g2) < BALANCE_TOL
        )

    def with_phi(self, phi: float) -> "SU11Spec":
        return SU11Spec(self.g1, self.g2, self.theta1, self.theta2, phi, self.input)

    def transform(self, phi: float | None = None) -> SymplecticTransform:
        phi = self.phi if phi is None else phi
        return compose([opa(self.g1, self.theta1), phase_shifter(phi), opa(self.g2, self.theta2)])

    def inside_state(self) -> GaussianState:
        """State between the OPAs (before the phase shift)."""
        return apply(opa(self.g1, self.theta1), self.input.state())

    def output_state(self, phi: float | None = None) -> GaussianState:
        return apply(self.transform(phi), self.input.state())


@dataclass(frozen=True)
class MZISpec:
    """``BS(theta_bs)``, split phase ``+-phi/2``, then ``BS(-theta_bs)``.

    The second splitter is the inverse of the first, so ``phi = 0`` is the identity.
    """

    theta_bs: float = np.pi / 4
    phi: float = 0.0
    input: InputSpec = field(default_factory=InputSpec)

    def with_phi(self, phi: float) -> "MZISpec":
        return MZISpec(self.theta_bs, phi, self.input)

    def transform(self, phi: float | None = None) -> SymplecticTransform:
        phi = self.phi if phi is None else phi
        return compose(
            [
                beam_splitter(self.theta_bs),
                phase_shifter(phi, "both_arms_half"),
                beam_splitter(-self.theta_bs),
            ]
        )

    def inside_state(self) -> GaussianState:
        return apply(beam_splitter(self.theta_bs), self.input.state())

    def output_state(self, phi: float | None = None) -> GaussianState:
        return apply(self.transform(phi), self.input.state())


@dataclass(frozen=True)
class ComplexTransfer:
    """Bogoliubov data of the balanced interferometer.

    ``(alpha_in, beta_in^*) = [[G, R], [-R, H]] (alpha_out, beta_out^*)``.
    """

    u1: complex
    v1: complex
    u2: complex
    v2: complex
    A: complex
    B: complex
    G: complex
    H: complex
    R: complex

    def inverse_matrix(self) -> np.ndarray:
        return np.array([[self.G, self.R], [-self.R, self.H]])

    def forward_matrix(self) -> np.ndarray:
        return np.linalg.inv(self.inverse_matrix())


def su11_transfer(spec: SU11Spec) -> ComplexTransfer:
    if not spec.is_balanced():
        raise UnbalancedSpecError("closed-form G, H, R need g1 = g2, theta1 = 0, theta2 = pi")
    g, phi = spec.g1, spec.phi
    A = np.cos(phi / 2) * np.exp(-0.5j * phi)
    B = np.sin(phi / 2) * np.exp(-0.5j * phi)
    return ComplexTransfer(
        u1=complex(np.cosh(spec.g1)),
        v1=complex(np.exp(1j * spec.theta1) * np.sinh(spec.g1)),
        u2=complex(np.cosh(spec.g2)),
        v2=complex(np.exp(1j * spec.theta2) * np.sinh(spec.g2)),
        A=complex(A),
        B=complex(B),
        G=complex(A - 1j * B * np.cosh(2 * g)),
        H=complex(A + 1j * B * np.cosh(2 * g)),
        R=complex(-1j * B * np.sinh(2 * g)),
    )


def bogoliubov_to_quadrature(M) -> np.ndarray:
    """Real 4x4 quadrature matrix of a map ``(alpha, beta^*) -> M (alpha, beta^*)``."""
    (m11, m12), (m21, m22) = np.asarray(M, dtype=complex)
    return np.array(
        [
            [m11.real, -m11.imag, m12.real, m12.imag],
            [m11.imag, m11.real, m12.imag, -m12.real],
            [m21.real, -m21.imag, m22.real, m22.imag],
            [-m21.imag, -m21.real, -m22.imag, m22.real],
        ]
    )


def opa_bogoliubov(g: float, theta: float) -> np.ndarray:
    return np.array(
        [[np.cosh(g), np.exp(1j * theta) * np.sinh(g)], [np.exp(-1j * theta) * np.sinh(g), np.cosh(g)]]
    )
