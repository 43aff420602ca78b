"""Homodyne measurement on one arm of an entangled state and the
conditional state it prepares on the other arm.

Quadrature eigenstates follow the shot-noise-unit convention
Var_vac(X) = 1, so

    psi_0(q) = (2 pi)^{-1/4} exp(-q^2 / 4)
    psi_{n+1}(q) = q psi_n(q) / sqrt(n+1) - sqrt(n/(n+1)) psi_{n-1}(q)
    <q_theta|n> = e^{i n theta} psi_n(q)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .channels import loss_on_mode_a
from .fock import MixedState, PureState, TwoModeState, _as_density

Q_SUPPORT = 10.0  # marginals of states in this package are negligible beyond |q| = 10


def quad_wavefunctions(dim: int, q) -> np.ndarray:
    """Matrix psi[n, j] = psi_n(q_j) of quadrature wavefunctions at theta = 0.

    Stable three-term recursion in n; q may be a scalar or an array.
    """
    q = np.atleast_1d(np.asarray(q, dtype=float))
    psi = np.zeros((dim, q.size))
    psi[0] = (2 * np.pi) ** (-0.25) * np.exp(-(q**2) / 4)
    if dim > 1:
        psi[1] = q * psi[0]
    for n in range(1, dim - 1):
        psi[n + 1] = (q * psi[n] - np.sqrt(n) * psi[n - 1]) / np.sqrt(n + 1)
    return psi


def quad_overlaps(dim: int, q: float, theta: float) -> np.ndarray:
    """Vector of overlaps <q_theta|n> = e^{i n theta} psi_n(q)."""
    psi = quad_wavefunctions(dim, q)[:, 0]
    return np.exp(1j * theta * np.arange(dim)) * psi


def marginal_pdf(state, theta: float, q) -> np.ndarray:
    """Homodyne probability density P_theta(q) = <q_theta| rho |q_theta>."""
    rho = _as_density(state)
    dim = rho.shape[0]
    phase = np.exp(1j * theta * np.arange(dim))
    m = (phase[:, None] * rho * phase.conj()[None, :])
    psi = quad_wavefunctions(dim, q)
    return np.real(np.einsum("mj,mn,nj->j", psi, m, psi))


def marginal(state, theta: float):
    """Return a vectorized callable q -> P_theta(q)."""
    return lambda q: marginal_pdf(state, theta, q)


@dataclass
class Conditioning:
    """Acceptance settings of the heralding homodyne measurement.

    theta_rad : local-oscillator phase
    q_center  : center of the acceptance window, shot-noise units
    delta     : window width; 0 selects the point-projection limit
    eta_a     : transmission of the conditioning path before the homodyne
    """

    theta_rad: float = 0.0
    q_center: float = 0.0
    delta: float = 0.2
    eta_a: float = 1.0

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if not 0.0 <= self.eta_a <= 1.0:
            raise ValueError("eta_a must lie in [0, 1]")


@dataclass
class PreparedState:
    """Result of the conditional preparation.

    success_prob is the window-integrated acceptance probability; in the
    point-projection limit (delta = 0) it is a probability density times a
    unit reference width, flagged by success_is_density.
    """

    rho: MixedState
    success_prob: float
    success_is_density: bool
    conditioning: Conditioning


def _project_mode_a(r4: np.ndarray, overlaps: np.ndarray) -> np.ndarray:
    """<q_theta| rho_AB |q_theta> on mode A; r4 is the (dA,dB,dA,dB) tensor."""
    return np.einsum("a,abcd,c->bd", overlaps, r4, overlaps.conj())


def _window_nodes(q_center: float, delta: float, n_nodes: int):
    x, w = roots_legendre(n_nodes)
    half = delta / 2
    return q_center + half * x, half * w


def condition(resource: TwoModeState, c: Conditioning, n_nodes: int = 21) -> PreparedState:
    """Condition mode B on a homodyne result of mode A inside the window.

    Loss eta_a acts on mode A first; the window integral uses Gauss-Legendre
    quadrature (exact at working precision for these smooth integrands).
    """
    lossy = loss_on_mode_a(resource, c.eta_a)
    r4 = lossy.mat.reshape(lossy.dim_a, lossy.dim_b, lossy.dim_a, lossy.dim_b)
    dim_a = lossy.dim_a

    if c.delta == 0.0:
        ov = quad_overlaps(dim_a, c.q_center, c.theta_rad)
        raw = _project_mode_a(r4, ov)
        density = True
    else:
        nodes, weights = _window_nodes(c.q_center, c.delta, n_nodes)
        raw = np.zeros((lossy.dim_b, lossy.dim_b), dtype=complex)
        psi = quad_wavefunctions(dim_a, nodes)
        phase = np.exp(1j * c.theta_rad * np.arange(dim_a))
        for j, wj in enumerate(weights):
            ov = phase * psi[:, j]
            raw += wj * _project_mode_a(r4, ov)
        density = False

    success = float(np.real(np.trace(raw)))
    if success <= 0:
        raise ValueError("conditioning window has zero probability")
    rho = raw / success
    rho = 0.5 * (rho + rho.conj().T)
    return PreparedState(MixedState(rho), success, density, c)


def condition_tail(
    resource: TwoModeState,
    theta_rad: float,
    q_min: float,
    eta_a: float = 1.0,
    q_max: float = Q_SUPPORT,
    n_nodes: int = 160,
) -> PreparedState:
    """Two-sided tail acceptance |q| >= q_min (up to the numerical support
    bound q_max). Used for the high-|Q| even-cat preparation."""
    if not 0 <= q_min < q_max:
        raise ValueError("need 0 <= q_min < q_max")
    lossy = loss_on_mode_a(resource, eta_a)
    r4 = lossy.mat.reshape(lossy.dim_a, lossy.dim_b, lossy.dim_a, lossy.dim_b)
    dim_a = lossy.dim_a

    x, w = roots_legendre(n_nodes)
    half = (q_max - q_min) / 2
    nodes_pos = q_min + half * (x + 1)
    weights = half * w
    raw = np.zeros((lossy.dim_b, lossy.dim_b), dtype=complex)
    phase = np.exp(1j * theta_rad * np.arange(dim_a))
    for nodes in (nodes_pos, -nodes_pos):
        psi = quad_wavefunctions(dim_a, nodes)
        for j, wj in enumerate(weights):
            ov = phase * psi[:, j]
            raw += wj * _project_mode_a(r4, ov)

    success = float(np.real(np.trace(raw)))
    if success <= 0:
        raise ValueError("tail acceptance has zero probability")
    rho = raw / success
    rho = 0.5 * (rho + rho.conj().T)
    cond = Conditioning(theta_rad=theta_rad, q_center=q_min, delta=0.0, eta_a=eta_a)
    return PreparedState(MixedState(rho), success, False, cond)


def closed_form_state(
    q: float, theta_rad: float, cv_minus: PureState, cv_plus: PureState
) -> PureState:
    """Conditional state of the balanced resource in the point-projection
    limit: (|cv-> + q e^{i theta} |cv+>) / sqrt(1 + q^2) for orthonormal
    branch states (renormalized numerically in general)."""
    amps = cv_minus.amps + q * np.exp(1j * theta_rad) * cv_plus.amps
    return PureState.from_amplitudes(amps)
