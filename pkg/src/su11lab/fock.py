"""Brute-force two-mode simulator in a truncated Fock basis.

Used as an independent oracle for the Gaussian formulas at small photon
numbers. Amplitudes are stored as a ``(cutoff+1, cutoff+1)`` array indexed by
``(n_a, n_b)``. Nonlinear steps are evaluated on a padded space and the weight
that lands above the cutoff is recorded as leakage rather than silently
reflected back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln

from .gaussian import GaussianState
from .transforms import MZISpec, SU11Spec

LEAK_TOL = 1e-10
DEFAULT_CUTOFF = 40
MAX_CUTOFF = 320


class CutoffTooSmallError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FockState:
    cutoff: int
    amplitudes: np.ndarray
    leak_tol: float = LEAK_TOL

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.cutoff + 1, self.cutoff + 1):
            raise ValueError(f"amplitudes shape {amps.shape} does not match cutoff {self.cutoff}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if self.leakage > self.leak_tol:
            raise CutoffTooSmallError(
                f"norm leakage {self.leakage:.3e} exceeds {self.leak_tol:g} at cutoff {self.cutoff}"
            )

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def leakage(self) -> float:
        return max(0.0, 1.0 - self.norm2)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff + 1)
    if alpha == 0:
        out = np.zeros(cutoff + 1, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = -0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def _squeezed_amplitudes(r: float, theta_s: float, cutoff: int) -> np.ndarray:
    """``sqrt(1/cosh r) sum_n sqrt((2n)!)/n! (e^{i theta_s} tanh r / 2)^n |2n>``."""
    out = np.zeros(cutoff + 1, dtype=complex)
    if r == 0:
        out[0] = 1.0
        return out
    n = np.arange(cutoff // 2 + 1)
    log_mag = (
        -0.5 * np.log(np.cosh(r))
        + 0.5 * gammaln(2 * n + 1)
        - gammaln(n + 1)
        + n * np.log(np.tanh(r) / 2.0)
    )
    out[2 * n] = np.exp(log_mag) * np.exp(1j * n * theta_s)
    return out


@lru_cache(maxsize=32)
def _ladder(dim: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Annihilators ``a`` and ``b`` on the flattened ``(n_a, n_b)`` space of size dim^2."""
    low = sp.diags(np.sqrt(np.arange(1, dim)), 1, format="csr")
    eye = sp.identity(dim, format="csr")
    return sp.kron(low, eye, format="csr"), sp.kron(eye, low, format="csr")


def _evolve(amps: np.ndarray, generator, cutoff: int, pad: int) -> np.ndarray:
    """Apply ``exp(generator(a, b))`` on a padded space and truncate back to ``cutoff``."""
    dim = cutoff + 1 + pad
    big = np.zeros((dim, dim), dtype=complex)
    big[: cutoff + 1, : cutoff + 1] = amps
    a, b = _ladder(dim)
    K = generator(a, b)
    out = expm_multiply(K, big.reshape(-1)).reshape(dim, dim)
    return out[: cutoff + 1, : cutoff + 1]


def _default_pad(cutoff: int) -> int:
    return max(10, cutoff // 2)


def prepare_fock(
    alpha: complex,
    r: float = 0.0,
    theta_s: float = 0.0,
    cutoff: int = DEFAULT_CUTOFF,
    beta: complex = 0.0,
    leak_tol: float = LEAK_TOL,
) -> FockState:
    """Coherent ``|alpha>`` on mode a times squeezed vacuum on mode b.

    A nonzero ``beta`` displaces mode b after squeezing.
    """
    amps = np.outer(_coherent_amplitudes(complex(alpha), cutoff), _squeezed_amplitudes(r, theta_s, cutoff))
    if beta != 0:
        if r == 0:
            amps = np.outer(_coherent_amplitudes(complex(alpha), cutoff), _coherent_amplitudes(complex(beta), cutoff))
        else:
            beta = complex(beta)
            amps = _evolve(
                amps,
                lambda a, b: beta * b.conj().T - np.conj(beta) * b,
                cutoff,
                _default_pad(cutoff),
            )
    return FockState(cutoff, amps, leak_tol)


def two_mode_squeezer(state: FockState, g: float, theta: float = 0.0, pad: int | None = None) -> FockState:
    """``exp(g (e^{i theta} a^dag b^dag - e^{-i theta} a b))``."""
    if g == 0:
        return state
    pad = _default_pad(state.cutoff) if pad is None else pad
    eith = np.exp(1j * theta)

    def gen(a, b):
        ab = a @ b
        return g * (eith * ab.conj().T - np.conj(eith) * ab)

    return FockState(state.cutoff, _evolve(state.amplitudes, gen, state.cutoff, pad), state.leak_tol)


def fock_phase(state: FockState, phi: float, mode: str = "a") -> FockState:
    """Multiply amplitudes by ``e^{i n phi}`` on the given mode (``a -> a e^{i phi}``)."""
    n = np.arange(state.cutoff + 1)
    factor = np.exp(1j * phi * n)
    if mode == "a":
        amps = state.amplitudes * factor[:, None]
    elif mode == "b":
        amps = state.amplitudes * factor[None, :]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return FockState(state.cutoff, amps, state.leak_tol)


def fock_beam_splitter(state: FockState, theta_bs: float) -> FockState:
    """``a -> cos a + i sin b``; photon-number conserving, so no padding is needed."""
    if theta_bs == 0:
        return state

    def gen(a, b):
        hop = a.conj().T @ b
        return 1j * theta_bs * (hop + hop.conj().T)

    # total photon number is conserved but a shell with n_a + n_b > cutoff
    # does not fit in the square box, so evolve padded like the squeezer
    return FockState(
        state.cutoff,
        _evolve(state.amplitudes, gen, state.cutoff, state.cutoff),
        state.leak_tol,
    )


def _lower(amps: np.ndarray, axis: int) -> np.ndarray:
    """Apply the annihilator along ``axis`` (result keeps the truncated shape)."""
    n = amps.shape[axis]
    out = np.zeros_like(amps)
    sq = np.sqrt(np.arange(1, n))
    if axis == 0:
        out[:-1, :] = sq[:, None] * amps[1:, :]
    else:
        out[:, :-1] = sq[None, :] * amps[:, 1:]
    return out


def _inner(x: np.ndarray, y: np.ndarray) -> complex:
    return complex(np.vdot(x, y))


def fock_expectation(state: FockState, observable: str) -> float:
    """Expectation of ``parity_b``, ``parity_a``, ``n_a``, ``n_b``, ``x_b`` or ``x_b2``."""
    psi = state.amplitudes
    P = state.probabilities()
    n = np.arange(state.cutoff + 1)
    if observable == "parity_b":
        return float(np.sum(P * ((-1.0) ** n)[None, :]))
    if observable == "parity_a":
        return float(np.sum(P * ((-1.0) ** n)[:, None]))
    if observable == "n_a":
        return float(np.sum(P * n[:, None]))
    if observable == "n_b":
        return float(np.sum(P * n[None, :]))
    if observable == "x_b":
        return float(2.0 * _inner(psi, _lower(psi, 1)).real)
    if observable == "x_b2":
        bpsi = _lower(psi, 1)
        # x^2 = b^2 + b^dag^2 + 2 b^dag b + 1
        return float(2.0 * _inner(psi, _lower(bpsi, 1)).real + 2.0 * _inner(bpsi, bpsi).real + state.norm2)
    raise ValueError(f"unknown observable {observable!r}")


def photon_number_variance(state: FockState, mode: str) -> float:
    P = state.probabilities()
    n = np.arange(state.cutoff + 1)
    w = P.sum(axis=1) if mode == "a" else P.sum(axis=0)
    mean = np.sum(w * n)
    return float(np.sum(w * n**2) - mean**2)


def fock_moments(state: FockState) -> GaussianState:
    """Quadrature mean and symmetrized covariance computed from the amplitudes.

    Valid while the weight near the cutoff is negligible, since the truncated
    ladder operators misbehave at the top shell.
    """
    psi = state.amplitudes
    lowered = [_lower(psi, 0), _lower(psi, 1)]
    # d = (a, b); first and second moments <d_i>, <d_i d_j>, <d_i^dag d_j>
    m1 = np.array([_inner(psi, lp) for lp in lowered])
    dd = np.array([[_inner(psi, _lower(lowered[j], i)) for j in range(2)] for i in range(2)])
    dagd = np.array([[_inner(lowered[i], lowered[j]) for j in range(2)] for i in range(2)])

    # quadrature q = T c with c = (a, a^dag, b, b^dag)
    T = np.kron(np.eye(2), np.array([[1.0, 1.0], [-1.0j, 1.0j]]))
    c_mean = np.array([m1[0], np.conj(m1[0]), m1[1], np.conj(m1[1])])
    # symmetrized second moments E[c_u c_v] (Weyl ordered)
    C = np.zeros((4, 4), dtype=complex)
    for u in range(4):
        for v in range(4):
            i, du = divmod(u, 2)
            j, dv = divmod(v, 2)
            if not du and not dv:
                val = dd[i, j]
            elif du and dv:
                val = np.conj(dd[i, j])
            elif du and not dv:
                # <c_i^dag c_j> sym = <c_i^dag c_j> + delta_ij / 2
                val = dagd[i, j] + 0.5 * (i == j)
            else:
                # <c_i c_j^dag> sym = <c_j^dag c_i> + delta_ij / 2
                val = dagd[j, i] + 0.5 * (i == j)
            C[u, v] = val
    second = T @ C @ T.T
    mean = (T @ c_mean).real
    cov = second.real - np.outer(mean, mean)
    return GaussianState(mean, cov)


def fidelity(x: FockState, y: FockState) -> float:
    return float(abs(np.vdot(x.amplitudes, y.amplitudes)) ** 2)


def _input_fock(spec, cutoff: int, leak_tol: float) -> FockState:
    inp = spec.input
    return prepare_fock(inp.alpha, inp.r, inp.theta_s, cutoff, inp.beta, leak_tol)


def simulate_su11(spec: SU11Spec, cutoff: int | None = None, leak_tol: float = LEAK_TOL) -> FockState:
    """Input -> OPA1 -> phase on mode a -> OPA2.

    With ``cutoff=None`` the cutoff starts at 40 and doubles until the
    accumulated leakage passes ``leak_tol``.
    """
    if cutoff is not None:
        psi = _input_fock(spec, cutoff, leak_tol)
        psi = two_mode_squeezer(psi, spec.g1, spec.theta1)
        psi = fock_phase(psi, spec.phi, "a")
        return two_mode_squeezer(psi, spec.g2, spec.theta2)
    c = DEFAULT_CUTOFF
    while True:
        try:
            return simulate_su11(spec, c, leak_tol)
        except CutoffTooSmallError:
            if c >= MAX_CUTOFF:
                raise
            c *= 2


def simulate_mzi(spec: MZISpec, cutoff: int = DEFAULT_CUTOFF, leak_tol: float = LEAK_TOL) -> FockState:
    psi = _input_fock(spec, cutoff, leak_tol)
    psi = fock_beam_splitter(psi, spec.theta_bs)
    psi = fock_phase(fock_phase(psi, spec.phi / 2.0, "a"), -spec.phi / 2.0, "b")
    return fock_beam_splitter(psi, -spec.theta_bs)


def pure_state_qfi(simulate, phi: float, h: float = 1e-4) -> float:
    """QFI ``4(<d psi|d psi> - |<psi|d psi>|^2)`` with a central-difference derivative.

    ``simulate`` maps a phase to a :class:`FockState`.
    """
    psi = simulate(phi).amplitudes
    dpsi = (simulate(phi + h).amplitudes - simulate(phi - h).amplitudes) / (2 * h)
    return float(4.0 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(psi, dpsi)) ** 2))
