"""Two-coin quantum walk on the integer line: exact evolution, momentum-space
analysis, closed-form limit laws and their cross-checks."""

from .limit_laws import (
    LimitDensity,
    StationaryAmplitudes,
    StationaryLaw,
    density_at,
    limit_cdf,
    limit_density,
    limit_moment,
    stationary_amplitudes,
    stationary_law,
)
from .quadrature import QuadratureError, QuadratureSpec
from .spectral import (
    EigenSystem,
    MomentumOperator,
    eigen_system,
    flat_band_amplitude,
    initial_overlap,
    inverse_fourier_amplitude,
    inverse_fourier_wavefunction,
    momentum_operator,
    spectral_moment,
)
from .walk_engine import (
    CoinParameters,
    InitialCoinState,
    PositionDistribution,
    WalkState,
    build_coin_operator,
    empirical_moment,
    evolve,
    position_distribution,
    step,
    trajectory,
)

__version__ = "0.1.0"
