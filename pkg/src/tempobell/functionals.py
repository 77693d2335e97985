"""
Mean (M) and variance-about-1/4 (V) of the squared projection amplitude
over the flat box ``[0, 2 pi]^4`` of measurement angles.

The integrands are trigonometric polynomials of low degree in every angle,
so the uniform periodic grid integrates them exactly once it has at least
16 nodes per dimension. Sums use ``math.fsum`` (correctly rounded), which
makes results independent of how the grid is split across worker threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

from .errors import InvalidArgumentError
from .history import EvolvedInitial, as_scenario
from .kernels import kernel_for

CENTER = 0.25
DEFAULT_POINTS = 16
CLASSIFY_TOL = 1e-9

FAMILIES = ("evolved-initial", "product-history", "entangled-zz")

_BOUNDS = {
    "evolved-initial": (Fraction(45, 1024), Fraction(35, 512)),
    "product-history": (Fraction(9, 256), Fraction(5, 64)),
}
ENTANGLED_LOWER = _BOUNDS["product-history"][0]
ENTANGLED_UPPER = _BOUNDS["product-history"][1]


@dataclass(frozen=True)
class QuadratureGrid:
    points_per_dim: int = DEFAULT_POINTS

    def __post_init__(self):
        if int(self.points_per_dim) != self.points_per_dim or self.points_per_dim < 4:
            raise InvalidArgumentError("quadrature grid needs at least 4 points per dimension")

    @property
    def nodes(self) -> np.ndarray:
        n = self.points_per_dim
        return 2.0 * math.pi * np.arange(n) / n

    @property
    def size(self) -> int:
        return self.points_per_dim**4


def _threads() -> int:
    env = os.environ.get("TEMPO_BELL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidArgumentError(f"TEMPO_BELL_THREADS must be an integer, got {env!r}") from None
    return 1


def _checked(s):
    s = as_scenario(s)
    if isinstance(s, EvolvedInitial):
        if np.max(np.abs(s.bridging.matrix - np.eye(2))) > 1e-12:
            raise InvalidArgumentError("M and V are defined here for trivial (identity) evolution only")
    return s


def grid_probabilities(s, grid: QuadratureGrid | None = None, threads: int | None = None) -> np.ndarray:
    """All ``N^4`` squared amplitudes in (theta1, phi1, theta2, phi2) C order."""
    grid = grid or QuadratureGrid()
    kern = kernel_for(_checked(s))
    n = grid.points_per_dim
    workers = min(threads or _threads(), n)
    if workers == 1:
        return kern.grid_probs(n, 0, n)
    cuts = np.linspace(0, n, workers + 1).astype(int)
    with ThreadPoolExecutor(workers) as pool:
        parts = pool.map(lambda lh: kern.grid_probs(n, int(lh[0]), int(lh[1])), zip(cuts[:-1], cuts[1:]))
        return np.concatenate(list(parts))


class Moments(NamedTuple):
    m: float
    v: float


def moments(s, grid: QuadratureGrid | None = None, threads: int | None = None) -> Moments:
    p = grid_probabilities(s, grid, threads)
    return Moments(math.fsum(p) / p.size, math.fsum((p - CENTER) ** 2) / p.size)


def m_functional(s, grid: QuadratureGrid | None = None) -> float:
    return moments(s, grid).m


def v_functional(s, grid: QuadratureGrid | None = None) -> float:
    # centered on the constant 1/4, not the sample mean
    return moments(s, grid).v


class MonteCarloEstimate(NamedTuple):
    m: float
    m_stderr: float
    v: float
    v_stderr: float
    samples: int
    seed: int


def monte_carlo_moments(s, samples: int = 1_000_000, seed: int = 0, chunk: int = 1 << 18) -> MonteCarloEstimate:
    """Uniform sampling of the angle box with standard errors; a cross-check only."""
    if samples < 2:
        raise InvalidArgumentError("Monte Carlo needs at least 2 samples")
    kern = kernel_for(_checked(s))
    rng = np.random.default_rng(seed)
    parts = []
    remaining = samples
    while remaining:
        k = min(chunk, remaining)
        parts.append(kern.point_probs(rng.uniform(0.0, 2.0 * math.pi, size=(k, 4))))
        remaining -= k
    p = np.concatenate(parts)
    d = (p - CENTER) ** 2
    root = math.sqrt(samples)
    return MonteCarloEstimate(
        float(p.mean()), float(p.std(ddof=1)) / root, float(d.mean()), float(d.std(ddof=1)) / root, samples, seed
    )


def v_bounds(family: str) -> tuple[float, float]:
    """Range of V over the non-entangled family ``evolved-initial`` or ``product-history``."""
    try:
        lo, hi = _BOUNDS[family]
    except KeyError:
        raise InvalidArgumentError(f"no V bounds for family {family!r}") from None
    return float(lo), float(hi)


@dataclass(frozen=True)
class NecessarilyEntangled:
    side: str  # "below" or "above"

    def __str__(self):
        return f"necessarily entangled ({self.side})"


@dataclass(frozen=True)
class NotFlagged:
    def __str__(self):
        return "not flagged"


VClassification = Union[NecessarilyEntangled, NotFlagged]


def classify(v: float, tol: float = CLASSIFY_TOL) -> VClassification:
    """Sufficient test for temporal entanglement; ``NotFlagged`` certifies nothing."""
    if not (math.isfinite(v) and math.isfinite(tol)) or tol < 0:
        raise InvalidArgumentError("classify needs finite v and non-negative tol")
    if v < 0:
        raise InvalidArgumentError(f"V cannot be negative, got {v}")
    if v < float(ENTANGLED_LOWER) - tol:
        return NecessarilyEntangled("below")
    if v > float(ENTANGLED_UPPER) + tol:
        return NecessarilyEntangled("above")
    return NotFlagged()


def analytic_v_oracle(family: str, theta: float | None = None, theta_prime: float | None = None) -> float:
    """Closed-form V for the three families (phi drops out)."""
    if family == "entangled-zz":
        return 3.0 / 128.0
    if theta is None:
        raise InvalidArgumentError(f"family {family!r} needs theta")
    if family == "evolved-initial":
        return (115.0 + 25.0 * math.cos(4.0 * theta)) / 2048.0
    if family == "product-history":
        if theta_prime is None:
            raise InvalidArgumentError("product-history needs theta_prime")
        c, cp = math.cos(4.0 * theta), math.cos(4.0 * theta_prime)
        return (57.0 + 11.0 * (c + cp) + c * cp) / 1024.0
    raise InvalidArgumentError(f"unknown family {family!r}")


def family_scenario(family: str, theta: float = 0.0, phi: float = 0.0, theta_prime: float = 0.0, phi_prime: float = 0.0):
    """Build the scenario for a family; theta/phi parametrize t1, the primed pair t2."""
    from .history import entangled_zz_history, product_history
    from .qstate import chi

    if family == "evolved-initial":
        return EvolvedInitial(chi((theta, phi)))
    if family == "product-history":
        return product_history(chi((theta, phi)), chi((theta_prime, phi_prime)))
    if family == "entangled-zz":
        return entangled_zz_history()
    raise InvalidArgumentError(f"unknown family {family!r}")


class Extremum(NamedTuple):
    value: float
    at: tuple[float, ...]


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, lo, hi, xtol=1e-9):
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _coordinate_min(f, x0, scan, sweeps=6):
    x = list(x0)
    fx = f(x)
    step = (math.pi / 2) / scan  # V is pi/2-periodic in every theta
    for _ in range(sweeps):
        start = fx
        for i in range(len(x)):
            def g(t, i=i):
                y = list(x)
                y[i] = t
                return f(y)

            pts = [k * step for k in range(scan)]
            vals = [g(t) for t in pts]
            k = min(range(scan), key=vals.__getitem__)
            t, ft = _golden_min(g, pts[k] - step, pts[k] + step)
            if vals[k] < ft:
                t, ft = pts[k], vals[k]
            if ft <= fx:
                x[i], fx = t % (math.pi / 2), ft
        if start - fx < 1e-15:
            break
    return Extremum(fx, tuple(x))


def extremize_v(
    family: str,
    phi: float = 0.0,
    phi_prime: float = 0.0,
    grid: QuadratureGrid | None = None,
    scan: int = 16,
) -> tuple[Extremum, Extremum]:
    """Numerically minimize and maximize quadrature V over the family's theta parameters."""
    grid = grid or QuadratureGrid()
    if family == "evolved-initial":
        def v(x):
            return v_functional(family_scenario(family, x[0], phi), grid)
        x0 = [0.0]
    elif family == "product-history":
        def v(x):
            return v_functional(family_scenario(family, x[0], phi, x[1], phi_prime), grid)
        x0 = [0.0, 0.0]
    else:
        raise InvalidArgumentError(f"no free parameters to extremize for {family!r}")
    lo = _coordinate_min(v, x0, scan)
    hi = _coordinate_min(lambda x: -v(x), x0, scan)
    return lo, Extremum(-hi.value, hi.at)
