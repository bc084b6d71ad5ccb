"""Optimal quadratic consensus filters, their factorization and robustness caps."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal, NamedTuple, Sequence, Union

import numpy as np
from scipy.optimize import minimize

from . import _backend
from .spectral import Spectrum, WeightMatrix, spectrum

ORACLE_GRID = 2001

AMode = Union[Literal["unit", "balanced"], float]
Stability = Literal["both_stable", "stable_with_balanced_a", "no_stable_split"]


class FilterError(ValueError):
    pass


@dataclass(frozen=True)
class QuadFilter:
    """Quadratic filter ``p2(l) = (l^2 - z_sq) / (1 - z_sq)`` designed for ``(mu, sigma)``.

    ``mu2`` is the worst-case two-step contraction on the design spectrum.
    """

    z_sq: float
    mu2: float
    mu: float
    sigma: float
    capped: bool = False

    @property
    def z(self) -> float:
        return math.sqrt(self.z_sq)

    def __call__(self, lam):
        return p2_eval(self, lam)

    def to_json(self) -> dict:
        return {
            "z": self.z,
            "z_sq": self.z_sq,
            "mu": self.mu,
            "sigma": self.sigma,
            "mu2": self.mu2,
            "capped": self.capped,
        }


def optimal_p2(mu: float, sigma: float) -> QuadFilter:
    """Best quadratic filter for a centered spectrum with SLEM ``mu`` and SEM ``sigma``.

    The optimum equioscillates: ``p2(+-mu) = mu2 = -p2(+-sigma)``.
    """
    if not mu < 1.0:
        raise FilterError(f"mu={mu} >= 1: no convergent filter")
    if not 0.0 <= sigma <= mu:
        raise FilterError(f"need 0 <= sigma <= mu, got sigma={sigma}, mu={mu}")
    mu_sq, sig_sq = mu * mu, sigma * sigma
    z_sq = 0.5 * (mu_sq + sig_sq)
    mu2 = (mu_sq - sig_sq) / (2.0 - mu_sq - sig_sq)
    return QuadFilter(z_sq=z_sq, mu2=mu2, mu=mu, sigma=sigma)


def design(p: WeightMatrix | Spectrum) -> QuadFilter:
    """Optimal filter for ``P``, read off its centered spectrum."""
    s = spectrum(p) if isinstance(p, WeightMatrix) else p
    c = s.centered_image()
    return optimal_p2(c.mu, min(c.sigma, c.mu))


def mu2_of(p: WeightMatrix | Spectrum) -> float:
    return design(p).mu2


def p2_eval(f: QuadFilter, lam):
    if f.z_sq >= 1.0:
        raise FilterError(f"z_sq={f.z_sq} >= 1")
    lam = np.asarray(lam, dtype=float)
    out = (lam * lam - f.z_sq) / (1.0 - f.z_sq)
    return float(out) if out.ndim == 0 else out


def _minmax_objective(z: np.ndarray, lams: np.ndarray) -> float:
    z1, z2 = z
    den = abs((1.0 - z1) * (1.0 - z2))
    if den < 1e-300:
        return math.inf
    return float(np.max(np.abs((lams - z1) * (lams - z2)))) / den


def brute_force_mu2(lambdas: Sequence[float], grid_points: int = ORACLE_GRID) -> float:
    """Min over real roots ``(z1, z2)`` of the worst ``|p2|`` on ``lambdas``.

    Exhaustive grid over ``[-1, 1]^2`` followed by Nelder-Mead polishing.
    Makes no use of the closed-form optimum; intended as a test oracle with
    accuracy around 1e-6.
    """
    lams = np.asarray(lambdas, dtype=float)
    if lams.size == 0:
        raise FilterError("empty spectrum")
    grid = np.linspace(-1.0, 1.0, grid_points)
    best, i, j = _backend.minmax_grid(lams, grid)
    x = np.array([grid[i], grid[j]])
    step = grid[1] - grid[0]
    for scale in (2.0, 0.1, 0.01):
        simplex = np.array([x, x + [scale * step, 0.0], x + [0.0, scale * step]])
        res = minimize(
            _minmax_objective,
            x,
            args=(lams,),
            method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": 1e-13, "fatol": 1e-15, "maxiter": 4000},
        )
        if res.fun < best:
            best, x = float(res.fun), res.x
    return best


@dataclass(frozen=True)
class StepPair:
    """Factorization of the quadratic filter into two one-hop steps.

    ``minus(l) = a (l - z) / (1 - z)`` and ``plus(l) = (l + z) / (a (1 + z))``;
    their product is ``(l^2 - z^2) / (1 - z^2)`` whatever ``a``.
    """

    a: float
    z: float

    def minus(self, lam):
        return self.a * (np.asarray(lam, dtype=float) - self.z) / (1.0 - self.z)

    def plus(self, lam):
        return (np.asarray(lam, dtype=float) + self.z) / (self.a * (1.0 + self.z))

    def compose(self, lam):
        """Two-step multiplier on an eigenvector with eigenvalue ``lam``."""
        return self.minus(lam) * self.plus(lam)

    def minus_matrix(self, p: np.ndarray) -> np.ndarray:
        eye = np.eye(p.shape[0])
        return self.a * (p - self.z * eye) / (1.0 - self.z)

    def plus_matrix(self, p: np.ndarray) -> np.ndarray:
        eye = np.eye(p.shape[0])
        return (p + self.z * eye) / (self.a * (1.0 + self.z))


def balanced_gain(z: float) -> float:
    return math.sqrt((1.0 - z) / (1.0 + z))


def resolve_gain(z: float, a_mode: AMode) -> float:
    if a_mode == "unit":
        return 1.0
    if a_mode == "balanced":
        return balanced_gain(z)
    a = float(a_mode)
    if a <= 0.0:
        raise FilterError(f"gain a must be positive, got {a}")
    return a


def factor_steps(f: QuadFilter, a_mode: AMode = "unit") -> StepPair:
    z = f.z
    if z >= 1.0:
        raise FilterError(f"z={z} >= 1")
    return StepPair(a=resolve_gain(z, a_mode), z=z)


def step_slem(mu: float, z: float, a_mode: AMode = "unit") -> float:
    """Worst single-step contraction on a centered spectrum ``[-mu, mu]``."""
    a = resolve_gain(z, a_mode)
    return max(a * (mu + z) / (1.0 - z), (mu + z) / (a * (1.0 + z)))


def step_stability(mu: float, z: float) -> Stability:
    """Classify whether the two factor steps can each be contracting."""
    if mu < 1.0 - 2.0 * z:
        return "both_stable"
    if mu < 1.0 - z:
        return "stable_with_balanced_a"
    return "no_stable_split"


class RobustnessCaps(NamedTuple):
    z_permanent: float
    z_resonant: float


def robustness_caps(mu: float) -> RobustnessCaps:
    """Root caps keeping the filter stable under permanent / resonant link failure."""
    if not 0.0 <= mu < 1.0:
        raise FilterError(f"mu must lie in [0, 1), got {mu}")
    return RobustnessCaps(1.0 / math.sqrt(2.0), 0.5 * (1.0 - mu))


def cap_filter(f: QuadFilter, z_cap: float) -> QuadFilter:
    """Shrink the root ``z`` to ``z_cap`` if it exceeds it.

    The reported rate of a capped filter is its worst ``|p2|`` over the
    design extremes ``mu`` and ``sigma``.
    """
    if z_cap <= 0.0:
        raise FilterError("z_cap must be positive")
    if f.z <= z_cap:
        return f
    capped = replace(f, z_sq=z_cap * z_cap, capped=True)
    mu2 = max(abs(p2_eval(capped, f.mu)), abs(p2_eval(capped, f.sigma)))
    return replace(capped, mu2=mu2)


def chebyshev_t(t: int, x: float) -> float:
    """``T_t(x)`` for ``x >= 1`` via ``cosh(t arccosh x)``."""
    return math.cosh(t * math.acosh(x))


def chebyshev_rate(mu: float, t: int) -> float:
    """Per-step worst-case rate ``T_t(1/mu)^(-1/t)`` of order-``t`` Chebyshev filtering."""
    if not 0.0 < mu < 1.0:
        raise FilterError(f"mu must lie in (0, 1), got {mu}")
    if t < 1:
        raise FilterError("t must be >= 1")
    a = math.acosh(1.0 / mu)
    # log cosh(ta) without overflow
    log_t = t * a + math.log1p(math.exp(-2.0 * t * a)) - math.log(2.0)
    return math.exp(-log_t / t)


def memory_slot_rate(mu: float) -> float:
    """Asymptotic rate of optimally tuned memory-slot consensus."""
    if not 0.0 < mu < 1.0:
        raise FilterError(f"mu must lie in (0, 1), got {mu}")
    inv = 1.0 / mu
    return inv - math.sqrt(inv * inv - 1.0)
