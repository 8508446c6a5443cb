"""
Direct-space evolution of the two-coin walk on the integer line.

Coin basis order is 00, 01, 10, 11. One step applies ``A ⊗ A`` at every site
and then the three-direction shift: 00 moves right, 11 moves left, 01 and 10
stay put.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "CoinParameters",
    "InitialCoinState",
    "WalkState",
    "PositionDistribution",
    "build_coin_operator",
    "initial_walk_state",
    "step",
    "evolve",
    "trajectory",
    "position_distribution",
    "empirical_moment",
    "normalized_moment",
]

UNITARY_TOL = 1e-12
NORM_TOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CoinParameters:
    """
    Single-qubit coin ``A(β) = [[cos β, sin β], [sin β, -cos β]]``.

    Parameters
    ----------
    beta : float
        Coin angle, strictly inside (0, π/2).

    Raises
    ------
    ValueError
        If ``beta`` is outside the open interval.
    """

    beta: float
    matrix_a: NDArray[np.complex128] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        beta = float(self.beta)
        if not (0.0 < beta < math.pi / 2):
            raise ValueError(f"beta must lie strictly inside (0, pi/2), got {beta!r}")
        object.__setattr__(self, "beta", beta)
        c, s = math.cos(beta), math.sin(beta)
        a = np.array([[c, s], [s, -c]], dtype=np.complex128)
        object.__setattr__(self, "matrix_a", _readonly(a))

    @property
    def theta(self) -> float:
        """Phase of det A. det A(β) = -1, so this is π."""
        return float(np.angle(np.linalg.det(self.matrix_a)) % (2 * math.pi))

    @property
    def entries(self) -> tuple[complex, complex, complex, complex]:
        """The entries (a, b, c, d) of the coin matrix, row-major."""
        a, b, c, d = self.matrix_a.ravel()
        return complex(a), complex(b), complex(c), complex(d)


@dataclass(frozen=True)
class InitialCoinState:
    """
    Coin amplitudes (α1, α2, α3, α4) on 00, 01, 10, 11 at the origin.

    Raises
    ------
    ValueError
        If the vector does not have four entries or is not normalized to 1e-12.
    """

    alpha: NDArray[np.complex128]

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=np.complex128).reshape(-1)
        if alpha.shape != (4,):
            raise ValueError(f"initial coin state needs 4 amplitudes, got {alpha.size}")
        norm2 = float(np.vdot(alpha, alpha).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(
                f"initial coin state has squared norm {norm2:.15g}; "
                "divide by its norm to renormalize"
            )
        object.__setattr__(self, "alpha", _readonly(alpha))

    @classmethod
    def normalized(cls, values: ArrayLike) -> "InitialCoinState":
        """Build a state from any nonzero 4-vector by dividing out its norm."""
        v = np.asarray(values, dtype=np.complex128).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(v / n)

    @classmethod
    def bell(cls) -> "InitialCoinState":
        """(|00> + |11>)/√2, the localizing worked example."""
        r = math.sqrt(0.5)
        return cls([r, 0, 0, r])

    @classmethod
    def nonlocalizing(cls) -> "InitialCoinState":
        """(-|00> - |01> - |10> + |11>)/2, the worked example with no atom."""
        return cls([-0.5, -0.5, -0.5, 0.5])

    def reflected(self) -> "InitialCoinState":
        """
        (α4, -α3, -α2, α1): the state whose walk is the spatial mirror image.

        Swapping 00 <-> 11 and 01 <-> 10 turns A(β) into Z A(β) Z, so the
        swap alone is not a symmetry; the extra Z ⊗ Z sign on 01 and 10 makes
        it one, and commutes with the shift.
        """
        a1, a2, a3, a4 = self.alpha
        return InitialCoinState(np.array([a4, -a3, -a2, a1]))

    def __iter__(self) -> Iterator[complex]:
        return iter(complex(a) for a in self.alpha)


@dataclass(frozen=True)
class WalkState:
    """
    Wave function ψ_t on the sites ``offset, offset+1, ...``.

    ``amplitudes[i, j]`` is ψ_t(offset + i, j). The array is read-only.
    """

    t: int
    offset: int
    amplitudes: NDArray[np.complex128]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2 or amps.shape[1] != 4:
            raise ValueError(f"amplitudes must have shape (n, 4), got {amps.shape}")
        if not amps.flags.writeable:
            object.__setattr__(self, "amplitudes", amps)
        else:
            object.__setattr__(self, "amplitudes", _readonly(amps.copy()))

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.offset, self.offset + self.amplitudes.shape[0])

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def amplitude(self, x: int) -> NDArray[np.complex128]:
        """ψ_t(x, ·); zeros for sites outside storage."""
        i = x - self.offset
        if 0 <= i < self.amplitudes.shape[0]:
            return self.amplitudes[i].copy()
        return np.zeros(4, dtype=np.complex128)


@dataclass(frozen=True)
class PositionDistribution:
    """Probabilities p_t(x) on the integer sites ``support``."""

    t: int
    support: NDArray[np.int64]
    probabilities: NDArray[np.float64]

    def at(self, x: int) -> float:
        i = x - int(self.support[0])
        if 0 <= i < self.support.size:
            return float(self.probabilities[i])
        return 0.0

    def window(self, lo: int, hi: int) -> NDArray[np.float64]:
        """p_t(x) for x = lo..hi inclusive."""
        return np.array([self.at(x) for x in range(lo, hi + 1)])


def build_coin_operator(coin: CoinParameters | ArrayLike) -> NDArray[np.complex128]:
    """
    Return the two-qubit coin ``A ⊗ A`` (4×4).

    ``coin`` is a :class:`CoinParameters` or any 2×2 unitary.
    """
    a = coin.matrix_a if isinstance(coin, CoinParameters) else np.asarray(coin, dtype=np.complex128)
    if a.shape != (2, 2):
        raise ValueError(f"single-qubit coin must be 2x2, got {a.shape}")
    if np.max(np.abs(a.conj().T @ a - np.eye(2))) > UNITARY_TOL:
        raise ValueError("single-qubit coin is not unitary")
    return np.kron(a, a)


def initial_walk_state(initial: InitialCoinState | ArrayLike) -> WalkState:
    alpha = initial.alpha if isinstance(initial, InitialCoinState) else np.asarray(initial, dtype=np.complex128)
    return WalkState(0, 0, np.asarray(alpha, dtype=np.complex128).reshape(1, 4))


def _shifted(psi: NDArray[np.complex128]) -> NDArray[np.complex128]:
    n = psi.shape[0]
    out = np.zeros((n + 2, 4), dtype=np.complex128)
    out[2:, 0] = psi[:, 0]
    out[1:-1, 1:3] = psi[:, 1:3]
    out[:-2, 3] = psi[:, 3]
    return out


def step(state: WalkState, coin: NDArray[np.complex128]) -> WalkState:
    """
    One application of U = S (I ⊗ A_ec): coin at every site, then shift.

    Storage grows by one site on each side so the result covers [-t-1, t+1]
    when ``state`` covers [-t, t].
    """
    psi = state.amplitudes @ np.asarray(coin).T
    return WalkState(state.t + 1, state.offset - 1, _readonly(_shifted(psi)))


def _advance(psi, coin_ec, n):
    coin_t = coin_ec.T
    for _ in range(n):
        psi = _shifted(psi @ coin_t)
    return psi


def evolve(
    initial: InitialCoinState | ArrayLike,
    coin: CoinParameters | ArrayLike,
    t: int,
) -> WalkState:
    """
    Evolve the origin-localized state for ``t`` steps.

    ``initial`` may be an unnormalized 4-vector (useful for linearity checks);
    the evolution itself is linear.
    """
    if t < 0:
        raise ValueError(f"number of steps must be nonnegative, got {t}")
    alpha = initial.alpha if isinstance(initial, InitialCoinState) else initial
    coin_ec = build_coin_operator(coin)
    psi = _advance(np.asarray(alpha, dtype=np.complex128).reshape(1, 4), coin_ec, int(t))
    return WalkState(int(t), -int(t), _readonly(psi))


def trajectory(
    initial: InitialCoinState | ArrayLike,
    coin: CoinParameters | ArrayLike,
    times: Iterable[int],
) -> Iterator[WalkState]:
    """Yield the walk state at each requested time (sorted ascending) in one pass."""
    wanted = sorted(set(int(t) for t in times))
    if wanted and wanted[0] < 0:
        raise ValueError("times must be nonnegative")
    coin_ec = build_coin_operator(coin)
    state = initial_walk_state(initial)
    for t in wanted:
        if t > state.t:
            psi = _advance(state.amplitudes, coin_ec, t - state.t)
            state = WalkState(t, -t, _readonly(psi))
        yield state


def position_distribution(state: WalkState) -> PositionDistribution:
    """p_t(x) = Σ_j |ψ_t(x, j)|² on the stored sites."""
    p = np.sum(np.abs(state.amplitudes) ** 2, axis=1)
    return PositionDistribution(state.t, state.positions, _readonly(p))


def empirical_moment(dist: PositionDistribution, r: int) -> float:
    """Σ_x x^r p_t(x)."""
    if r < 0 or int(r) != r:
        raise ValueError(f"moment order must be a nonnegative integer, got {r}")
    x = dist.support.astype(np.float64)
    return float(np.sum(x ** int(r) * dist.probabilities))


def normalized_moment(dist: PositionDistribution, r: int) -> float:
    """E[(X_t / t)^r] from the distribution; requires t ≥ 1."""
    if dist.t < 1:
        raise ValueError("normalized moments need t >= 1")
    x = dist.support.astype(np.float64) / dist.t
    return float(np.sum(x ** int(r) * dist.probabilities))
