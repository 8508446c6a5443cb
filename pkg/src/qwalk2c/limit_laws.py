"""
Closed-form limit laws of the two-coin walk with coin A(β).

``limit_density`` gives the weak limit of X_t/t: an atom of mass ``c00`` at
the origin plus an absolutely continuous part on (-cos β, cos β).
``stationary_law`` gives lim p_t(x), geometric in |x|. ``stationary_amplitudes``
recomputes the same limit from the stationary amplitude constants (z1, z2,
b_i, c_i) as an independent evaluation path.

Orientation: x > 0 is the direction the 00 component moves. With that
convention the right tail x ≥ 1 carries the prefactor written below as
``_tail_right`` (it weights |α4|² by (1 + sin β)²); a component launched in
|00> localizes mostly on the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .quadrature import QuadratureSpec, integrate
from .walk_engine import CoinParameters, InitialCoinState

__all__ = [
    "LimitDensity",
    "StationaryLaw",
    "StationaryAmplitudes",
    "limit_density",
    "density_at",
    "limit_cdf",
    "limit_moment",
    "stationary_law",
    "stationary_amplitudes",
]

NEG_TOL = 1e-12
CDF_QUAD = QuadratureSpec(tol=1e-12, order=20, min_panels=2)


def _amps(initial):
    a = initial.alpha if isinstance(initial, InitialCoinState) else np.asarray(initial, dtype=np.complex128)
    return tuple(complex(z) for z in a)


def _re(z: complex) -> float:
    return float(np.real(z))


@dataclass(frozen=True)
class LimitDensity:
    """
    f(y) = c00 δ0(y) + tan β 1{|y| < cos β} (c0 + c1 y + c2 y²) / (π (1 - y²) √(1 - y² sec²β)).
    """

    c00: float
    c0: float
    c1: float
    c2: float
    beta: float

    def __post_init__(self):
        if self.c00 < -NEG_TOL:
            raise ValueError(f"atom mass is negative beyond roundoff: {self.c00!r}")

    @property
    def support_bound(self) -> float:
        return math.cos(self.beta)

    @property
    def coefficients(self) -> tuple[float, float, float]:
        return self.c0, self.c1, self.c2

    def _theta_integrand(self, theta):
        # Substituting y = cos β sin θ cancels the endpoint singularity:
        # f_ac(y) dy = sin β (c0 + c1 y + c2 y²) / (π (1 - y²)) dθ.
        y = self.support_bound * np.sin(theta)
        return math.sin(self.beta) * (self.c0 + self.c1 * y + self.c2 * y * y) / (math.pi * (1.0 - y * y))

    def ac_mass(self, quad: QuadratureSpec | None = None) -> float:
        value, _ = integrate(self._theta_integrand, -math.pi / 2, math.pi / 2, quad or CDF_QUAD)
        return float(value)

    def total_mass(self, quad: QuadratureSpec | None = None) -> float:
        return self.c00 + self.ac_mass(quad)


@dataclass(frozen=True)
class StationaryLaw:
    """
    p(0) = ``p0``; p(x) = ``j_plus`` r^x for x ≥ 1 and ``j_minus`` r^{-x} for x ≤ -1.
    """

    p0: float
    j_plus: float
    j_minus: float
    ratio: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise ValueError(f"decay ratio must lie in (0, 1), got {self.ratio!r}")
        for name in ("p0", "j_plus", "j_minus"):
            if getattr(self, name) < -NEG_TOL:
                raise ValueError(f"{name} is negative beyond roundoff: {getattr(self, name)!r}")

    def probability(self, x: ArrayLike) -> NDArray[np.float64] | float:
        x = np.asarray(x)
        ax = np.abs(x).astype(np.float64)
        pref = np.where(x > 0, self.j_plus, np.where(x < 0, self.j_minus, 0.0))
        out = np.where(x == 0, self.p0, pref * self.ratio**ax)
        return float(out) if out.ndim == 0 else out

    def total_mass(self) -> float:
        """p(0) + (J+ + J-) r / (1 - r); equals the atom c00 of the weak limit."""
        r = self.ratio
        return self.p0 + (self.j_plus + self.j_minus) * r / (1.0 - r)


@dataclass(frozen=True)
class StationaryAmplitudes:
    """
    Constants of the stationary amplitude Ψ_∞(x), with Ψ_t(x) ≈ (-1)^t Ψ_∞(x).

    z1 = -(1 - sin β)² sec²β and z2 = -(1 + sin β)² sec²β = 1/z1.
    """

    b: NDArray[np.complex128]
    c: NDArray[np.complex128]
    z1: float
    z2: float
    alpha: NDArray[np.complex128]
    beta: float

    def amplitude(self, x: int, t: int = 0) -> NDArray[np.complex128]:
        """Ψ_∞(x), times (-1)^t when ``t`` is given."""
        z1, z2, b, c = self.z1, self.z2, self.b, self.c
        x = int(x)
        if x == 0:
            a1, a2, a3, a4 = self.alpha
            tb = math.tan(self.beta)
            local = np.array([
                0.0,
                a2 - a1 * tb,
                a3 - a1 * tb,
                (a2 + a3) * tb - 2.0 * a1 * tb * tb,
            ])
            vec = local + (c * z1 + b) / (z1 - z2)
        elif x > 0:
            vec = z1 ** (x - 1) * (b * z1 + c) / (z1 - z2)
        else:
            vec = z2 ** (x - 1) * (b * z2 + c) / (z1 - z2)
        return (-1) ** (t % 2) * vec

    def probability(self, x: ArrayLike) -> NDArray[np.float64] | float:
        xs = np.asarray(x)
        p = np.array([np.sum(np.abs(self.amplitude(int(v))) ** 2) for v in xs.ravel()])
        return float(p[0]) if xs.ndim == 0 else p.reshape(xs.shape)


def limit_density(coin: CoinParameters, initial) -> LimitDensity:
    """Atom mass and polynomial coefficients of the weak limit of X_t/t."""
    a1, a2, a3, a4 = _amps(initial)
    beta = coin.beta
    s, tb = math.sin(beta), math.tan(beta)
    m23 = abs(a2) ** 2 + abs(a3) ** 2
    r14 = _re(a1 * a4.conjugate())
    r23 = _re(a2 * a3.conjugate())
    mixed = _re(a1 * a2.conjugate() + a1 * a3.conjugate() - a2 * a4.conjugate() - a3 * a4.conjugate())
    mixed_sym = _re(a1 * a2.conjugate() + a1 * a3.conjugate() + a2 * a4.conjugate() + a3 * a4.conjugate())

    c00 = (
        s / 2
        - (s - 1) * m23
        + tb**2 * (1 / math.sqrt(s) - math.sqrt(s)) ** 2 * r14
        + (s - 1) * tb * mixed
        - s * r23
    )
    c2 = 0.5 - m23 - r23 + (2 * tb**2 + 1) * r14 + tb * mixed
    c1 = abs(a1) ** 2 - abs(a4) ** 2 + tb * mixed_sym
    c0 = 0.5 + r23 - r14
    return LimitDensity(c00=c00, c0=c0, c1=c1, c2=c2, beta=beta)


def density_at(d: LimitDensity, y: ArrayLike) -> NDArray[np.float64] | float:
    """
    Absolutely continuous part of the limit density.

    Zero outside (-cos β, cos β); ``inf`` exactly at y = ±cos β where the
    integrable singularity sits. The atom is not included.
    """
    y = np.asarray(y, dtype=np.float64)
    cb, tb = d.support_bound, math.tan(d.beta)
    inside = np.abs(y) < cb
    edge = np.abs(y) == cb
    yy = np.where(inside, y, 0.0)
    poly = d.c0 + d.c1 * yy + d.c2 * yy * yy
    root = np.sqrt(np.maximum(1.0 - (yy / cb) ** 2, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        val = tb * poly / (math.pi * (1.0 - yy * yy) * root)
    out = np.where(inside, val, np.where(edge, np.inf, 0.0))
    return float(out) if out.ndim == 0 else out


def limit_cdf(
    d: LimitDensity,
    y: ArrayLike,
    quad: QuadratureSpec | None = None,
    left: bool = False,
) -> NDArray[np.float64] | float:
    """
    F(y) = c00 H(y) + ∫_{-cos β}^{y} f_ac.

    ``H`` is right-continuous (H(0) = 1). With ``left=True`` the left limit
    F(y-) is returned instead, which only differs at y = 0.

    Array input is sorted once and integrated panel by panel between
    consecutive points, so the cost is one pass over the support.
    """
    quad = quad or CDF_QUAD
    y = np.asarray(y, dtype=np.float64)
    flat = y.ravel()
    cb = d.support_bound
    theta = np.arcsin(np.clip(flat / cb, -1.0, 1.0))
    order = np.argsort(theta, kind="stable")
    marks = np.concatenate([[-math.pi / 2], theta[order]])
    ac_sorted = np.empty(order.size)
    total = 0.0
    for i in range(order.size):
        lo, hi = marks[i], marks[i + 1]
        if hi > lo:
            piece, _ = integrate(d._theta_integrand, lo, hi, quad)
            total += float(piece)
        ac_sorted[i] = total
    ac = np.empty(order.size)
    ac[order] = ac_sorted
    atom = np.where(flat > 0, d.c00, 0.0) if left else np.where(flat >= 0, d.c00, 0.0)
    out = (ac + atom).reshape(y.shape)
    return float(out) if out.ndim == 0 else out


def limit_moment(d: LimitDensity, r: int, quad: QuadratureSpec | None = None) -> float:
    """∫ y^r dF(y), the atom handled exactly."""
    if r < 0 or int(r) != r:
        raise ValueError(f"moment order must be a nonnegative integer, got {r}")
    r = int(r)
    cb = d.support_bound

    def integrand(theta):
        return (cb * np.sin(theta)) ** r * d._theta_integrand(theta)

    value, _ = integrate(integrand, -math.pi / 2, math.pi / 2, quad or CDF_QUAD)
    return float(value) + (d.c00 if r == 0 else 0.0)


def _tail_right(a1, a2, a3, a4, s, sec, tb):
    return tb**2 * (
        sec**2 * (1 - s) ** 2 * abs(a1) ** 2
        + abs(a2) ** 2
        + abs(a3) ** 2
        + sec**2 * (1 + s) ** 2 * abs(a4) ** 2
        + 2 * sec * (1 - s) * _re(a1 * a2.conjugate() + a1 * a3.conjugate())
        + 2 * _re(a1 * a4.conjugate() + a2 * a3.conjugate())
        + 2 * sec * (1 + s) * _re(a2 * a4.conjugate() + a3 * a4.conjugate())
    )


def _tail_left(a1, a2, a3, a4, s, sec, tb):
    return tb**2 * (
        sec**2 * (1 + s) ** 2 * abs(a1) ** 2
        + abs(a2) ** 2
        + abs(a3) ** 2
        + sec**2 * (1 - s) ** 2 * abs(a4) ** 2
        - 2 * sec * (1 + s) * _re(a1 * a2.conjugate() + a1 * a3.conjugate())
        + 2 * _re(a1 * a4.conjugate() + a2 * a3.conjugate())
        - 2 * sec * (1 - s) * _re(a2 * a4.conjugate() + a3 * a4.conjugate())
    )


def stationary_law(coin: CoinParameters, initial) -> StationaryLaw:
    """Closed-form lim p_t(x): p(0), the two tail prefactors, and the ratio r."""
    a1, a2, a3, a4 = _amps(initial)
    beta = coin.beta
    s, tb, sec = math.sin(beta), math.tan(beta), 1.0 / math.cos(beta)
    p0 = (
        tb**2 * sec**2 * (1 - s) ** 2 * (abs(a1) ** 2 + abs(a4) ** 2)
        + sec**2 * (1 - s) * (abs(a2) ** 2 + abs(a3) ** 2)
        + tb * sec**2 * (1 - s) ** 2
        * _re(a2 * a4.conjugate() + a3 * a4.conjugate() - a1 * a2.conjugate() - a1 * a3.conjugate())
        - 2 * tb * sec * (1 - s) * _re(a2 * a3.conjugate())
    )
    ratio = (1 - s) ** 4 * sec**4
    return StationaryLaw(
        p0=p0,
        j_plus=_tail_right(a1, a2, a3, a4, s, sec, tb),
        j_minus=_tail_left(a1, a2, a3, a4, s, sec, tb),
        ratio=ratio,
        beta=beta,
    )


def stationary_amplitudes(coin: CoinParameters, initial) -> StationaryAmplitudes:
    """The constants z1, z2, b1..b4, c1..c4 of the stationary amplitude."""
    a1, a2, a3, a4 = _amps(initial)
    beta = coin.beta
    s, tb, sec = math.sin(beta), math.tan(beta), 1.0 / math.cos(beta)
    z1 = -((1 - s) ** 2) * sec**2
    z2 = -((1 + s) ** 2) * sec**2
    a23 = a2 + a3
    b_mid = (a1 + a4) * tb - 2 * a23 * tb**2 + 4 * a1 * tb**3
    b = np.array([
        -a23 * tb + 2 * a1 * tb**2,
        b_mid,
        b_mid,
        -a23 * tb + (4 * a1 + 2 * a4) * tb**2 - 4 * a23 * tb**3 + 8 * a1 * tb**4,
    ])
    c = np.array([
        -a23 * tb - 2 * a4 * tb**2,
        (a1 + a4) * tb,
        (a1 + a4) * tb,
        -a23 * tb + 2 * a1 * tb**2,
    ])
    return StationaryAmplitudes(
        b=b, c=c, z1=z1, z2=z2, alpha=np.array([a1, a2, a3, a4]), beta=beta
    )
