"""
Momentum-space description of the two-coin walk.

With Ψ̂_t(k) = Σ_x Ψ_t(x) e^{ikx}, one step acts as
``U_ec(k) = diag(e^{ik}, 1, 1, e^{-ik}) (A ⊗ A) = U(k/2) ⊗ U(k/2)``.
Eigenvalues come from closed forms; eigenvectors are taken numerically from
the 2×2 problem and tensored. Everything downstream only uses phase-invariant
combinations of the eigenvectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .quadrature import QuadratureSpec, integrate
from .walk_engine import CoinParameters, InitialCoinState, build_coin_operator

__all__ = [
    "MomentumOperator",
    "EigenSystem",
    "half_step_operator",
    "momentum_operator",
    "closed_form_eigenvalues",
    "group_velocity",
    "eigen_system",
    "branch_weights",
    "initial_overlap",
    "spectral_moment",
    "inverse_fourier_amplitude",
    "inverse_fourier_wavefunction",
    "flat_band_amplitude",
]

TWO_PI = 2.0 * math.pi
DEFAULT_QUAD = QuadratureSpec(tol=1e-11)


def _alpha(initial) -> NDArray[np.complex128]:
    if isinstance(initial, InitialCoinState):
        return initial.alpha
    return np.asarray(initial, dtype=np.complex128).reshape(4)


def _check_k(k) -> None:
    k = np.asarray(k, dtype=np.float64)
    if np.any(k < 0.0) or np.any(k >= TWO_PI) or np.any(~np.isfinite(k)):
        raise ValueError("wavenumber must lie in [0, 2*pi)")


@dataclass(frozen=True)
class MomentumOperator:
    k: float
    u_half: NDArray[np.complex128]
    u_ec: NDArray[np.complex128]


@dataclass(frozen=True)
class EigenSystem:
    """
    Eigen-decomposition of U(k/2) and U_ec(k) at one wavenumber.

    ``lambdas[0]`` is the root with positive real part. ``Lambdas`` are
    ordered (λ1², λ1λ2, λ2λ1, λ2²) with eigenvectors ``Vs[j]`` equal to the
    matching tensor products of ``vs``. ``group_velocities[j]`` is
    Λ̄_j D Λ_j(k) with D = -i d/dk.
    """

    k: float
    lambdas: NDArray[np.complex128]
    Lambdas: NDArray[np.complex128]
    vs: NDArray[np.complex128]
    Vs: NDArray[np.complex128]
    group_velocities: NDArray[np.float64]

    @property
    def phase(self) -> float:
        """η(k) = arg λ1(k); the phase of Λ1 is 2η."""
        return float(np.angle(self.lambdas[0]))

    @property
    def half_velocities(self) -> NDArray[np.float64]:
        """λ̄_i D λ_i for i = 1, 2."""
        h = self.group_velocities[0] / 2.0
        return np.array([h, -h])


def half_step_operator(k: ArrayLike, coin: CoinParameters | ArrayLike) -> NDArray[np.complex128]:
    """U(k/2) = diag(e^{ik/2}, e^{-ik/2}) A; broadcasts over an array of k."""
    a = coin.matrix_a if isinstance(coin, CoinParameters) else np.asarray(coin, dtype=np.complex128)
    k = np.asarray(k, dtype=np.float64)
    phases = np.stack([np.exp(0.5j * k), np.exp(-0.5j * k)], axis=-1)
    return phases[..., :, None] * a


def momentum_operator(k: float, coin: CoinParameters | ArrayLike) -> MomentumOperator:
    """Both U(k/2) and U_ec(k); the latter built from the shift phases, not the tensor product."""
    _check_k(k)
    u_half = half_step_operator(k, coin)
    shift = np.array([np.exp(1j * k), 1.0, 1.0, np.exp(-1j * k)])
    u_ec = shift[:, None] * build_coin_operator(coin)
    return MomentumOperator(float(k), u_half, u_ec)


def closed_form_eigenvalues(k: ArrayLike, beta: float) -> NDArray[np.complex128]:
    """
    λ_{1,2}(k) = ±√(1 - cos²β sin²(k/2)) + i cos β sin(k/2).

    Returns an array of shape ``k.shape + (2,)``.
    """
    k = np.asarray(k, dtype=np.float64)
    cb = math.cos(beta)
    s = np.sin(0.5 * k)
    root = np.sqrt(1.0 - (cb * s) ** 2)
    imag = 1j * cb * s
    return np.stack([root + imag, -root + imag], axis=-1)


def group_velocity(k: ArrayLike, beta: float) -> NDArray[np.float64]:
    """h(k, 1) = cos β cos(k/2) / √(sin²β + cos²β cos²(k/2)); h(k, 4) = -h(k, 1)."""
    k = np.asarray(k, dtype=np.float64)
    cb, sb = math.cos(beta), math.sin(beta)
    c = np.cos(0.5 * k)
    return cb * c / np.sqrt(sb**2 + (cb * c) ** 2)


def _eigvecs(k: NDArray[np.float64], coin: CoinParameters) -> NDArray[np.complex128]:
    """Unit eigenvectors of U(k/2), shape (n, 2, 2), column i for λ_i."""
    u = half_step_operator(k, coin)
    w, v = np.linalg.eig(u)
    # λ1 is the eigenvalue with positive real part (|Re λ| ≥ sin β > 0).
    order = np.argsort(-w.real, axis=-1)
    return np.take_along_axis(v, order[:, None, :], axis=-1)


def _tensor_basis(v: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """V1..V4 from per-k 2-vectors; shape (n, 4, 4) with V_j in column j."""
    v1, v2 = v[:, :, 0], v[:, :, 1]
    kron = lambda x, y: (x[:, :, None] * y[:, None, :]).reshape(-1, 4)
    return np.stack([kron(v1, v1), kron(v1, v2), kron(v2, v1), kron(v2, v2)], axis=-1)


def eigen_system(k: float, coin: CoinParameters) -> EigenSystem:
    """Eigenvalues (closed form), eigenvectors (numeric) and group velocities at ``k``."""
    _check_k(k)
    lam = closed_form_eigenvalues(k, coin.beta)
    l1, l2 = lam
    Lam = np.array([l1 * l1, l1 * l2, l2 * l1, l2 * l2])
    v = _eigvecs(np.array([k], dtype=np.float64), coin)
    V = _tensor_basis(v)[0]
    h1 = float(group_velocity(k, coin.beta))
    return EigenSystem(
        k=float(k),
        lambdas=lam,
        Lambdas=Lam,
        vs=v[0],
        Vs=V,
        group_velocities=np.array([h1, 0.0, 0.0, -h1]),
    )


def branch_weights(k: ArrayLike, coin: CoinParameters, initial) -> NDArray[np.float64]:
    """|<V_j(k), α>|² for j = 1..4; shape ``(len(k), 4)``."""
    k = np.atleast_1d(np.asarray(k, dtype=np.float64))
    V = _tensor_basis(_eigvecs(k, coin))
    overlaps = np.einsum("nij,i->nj", V.conj(), _alpha(initial))
    return np.abs(overlaps) ** 2


def initial_overlap(k: float, j: int, coin: CoinParameters, initial) -> float:
    """|<V_j(k), Ψ̂_0(k)>|² for branch ``j`` in 1..4 (Ψ̂_0 = α for every k)."""
    if j not in (1, 2, 3, 4):
        raise ValueError(f"branch index must be 1..4, got {j}")
    _check_k(k)
    return float(branch_weights([k], coin, initial)[0, j - 1])


def spectral_moment(
    r: int,
    coin: CoinParameters,
    initial,
    quad: QuadratureSpec | None = None,
) -> float:
    """
    lim E[(X_t/t)^r] = ∫ Σ_j h(k, j)^r |<V_j, α>|² dk/2π.

    Branches 2 and 3 have zero velocity and only contribute at r = 0.
    """
    if r < 0 or int(r) != r:
        raise ValueError(f"moment order must be a nonnegative integer, got {r}")
    r = int(r)

    def integrand(k):
        w = branch_weights(k, coin, initial)
        h = group_velocity(k, coin.beta)
        vel = np.stack([h, np.zeros_like(h), np.zeros_like(h), -h], axis=-1)
        return np.sum(vel**r * w, axis=-1)

    value, _ = integrate(integrand, 0.0, TWO_PI, quad or DEFAULT_QUAD)
    return float(value) / TWO_PI


def _expansion(k, coin, initial, t, branches=(0, 1, 2, 3)):
    """Σ_j Λ_j(k)^t <V_j, α> V_j for the selected branches; shape (n, 4)."""
    V = _tensor_basis(_eigvecs(k, coin))
    lam = closed_form_eigenvalues(k, coin.beta)
    l1, l2 = lam[:, 0], lam[:, 1]
    Lam = np.stack([l1 * l1, l1 * l2, l2 * l1, l2 * l2], axis=-1)
    coeff = np.einsum("nij,i->nj", V.conj(), _alpha(initial)) * Lam**t
    out = np.zeros((k.size, 4), dtype=np.complex128)
    for j in branches:
        out += coeff[:, j, None] * V[:, :, j]
    return out


def inverse_fourier_wavefunction(
    t: int,
    coin: CoinParameters,
    initial,
    positions: ArrayLike | None = None,
    quad: QuadratureSpec | None = None,
) -> NDArray[np.complex128]:
    """
    Ψ_t(x) = ∫ e^{-ixk} Σ_j Λ_j^t <V_j, α> V_j dk/2π at each position.

    ``positions`` defaults to -t..t. Returns shape ``(len(positions), 4)``.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    xs = np.arange(-t, t + 1) if positions is None else np.atleast_1d(np.asarray(positions))

    def integrand(k):
        psi_hat = _expansion(k, coin, initial, t)
        return np.exp(-1j * np.outer(k, xs))[:, :, None] * psi_hat[:, None, :]

    value, _ = integrate(integrand, 0.0, TWO_PI, quad or DEFAULT_QUAD)
    return value / TWO_PI


def inverse_fourier_amplitude(
    x: int,
    t: int,
    coin: CoinParameters,
    initial,
    quad: QuadratureSpec | None = None,
) -> NDArray[np.complex128]:
    """Ψ_t(x, ·) by quadrature over k. Requires |x| ≤ t."""
    if abs(x) > t:
        raise ValueError(f"|x| must not exceed t (x={x}, t={t})")
    return inverse_fourier_wavefunction(t, coin, initial, [x], quad)[0]


def flat_band_amplitude(
    positions: ArrayLike,
    coin: CoinParameters,
    initial,
    quad: QuadratureSpec | None = None,
) -> NDArray[np.complex128]:
    """
    ∫ e^{-ixk} Σ_{j=2,3} <V_j, α> V_j dk/2π.

    These are the amplitudes carried by the zero-velocity branches
    (Λ2 = Λ3 = e^{iθ}); Ψ_t(x) approaches e^{itθ} times this vector.
    """
    xs = np.atleast_1d(np.asarray(positions))

    def integrand(k):
        proj = _expansion(k, coin, initial, 0, branches=(1, 2))
        return np.exp(-1j * np.outer(k, xs))[:, :, None] * proj[:, None, :]

    value, _ = integrate(integrand, 0.0, TWO_PI, quad or DEFAULT_QUAD)
    return value / TWO_PI
