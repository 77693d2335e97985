"""
Spatial and temporal CHSH quantities, and a multi-start search for the
largest temporal violation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgumentError
from .history import as_scenario
from .kernels import kernel_for
from .qstate import BlochAngles, Ket, chi, chi_perp

CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
BOUND_TOL = 1e-9
TWO_PI = 2.0 * math.pi

BELL_PHI_PLUS = Ket(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2))
PRODUCT_ZZ = Ket(np.array([1.0, 0.0, 0.0, 0.0]))


@dataclass(frozen=True)
class AngleQuad:
    """The four settings: a1, a3 at the first party/time, a2, a4 at the second."""

    a1: BlochAngles
    a2: BlochAngles
    a3: BlochAngles
    a4: BlochAngles

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4"):
            object.__setattr__(self, name, BlochAngles.of(getattr(self, name)))

    @classmethod
    def from_flat(cls, values) -> "AngleQuad":
        v = [float(x) for x in values]
        if len(v) != 8:
            raise InvalidArgumentError(f"an angle quad needs 8 numbers, got {len(v)}")
        return cls((v[0], v[1]), (v[2], v[3]), (v[4], v[5]), (v[6], v[7]))

    def flat(self) -> tuple[float, ...]:
        return (*self.a1, *self.a2, *self.a3, *self.a4)


PAPER_QUAD = AngleQuad.from_flat([0, 0, math.pi / 8, 0, math.pi / 4, 0, 3 * math.pi / 8, 0])


def _as_quad(q) -> AngleQuad:
    return q if isinstance(q, AngleQuad) else AngleQuad.from_flat(q)


def _two_qubit(psi: Ket) -> Ket:
    if psi.dim != 4 or not psi.normalized:
        raise InvalidArgumentError("spatial CHSH needs a normalized two-qubit ket")
    return psi


def correlator_spatial(psi: Ket, a, b) -> float:
    psi = _two_qubit(psi)
    total = 0.0
    for ca, sa in ((chi(a), 1.0), (chi_perp(a), -1.0)):
        for cb, sb in ((chi(b), 1.0), (chi_perp(b), -1.0)):
            amp = np.vdot(np.kron(ca.amp, cb.amp), psi.amp)
            total += sa * sb * (amp.real**2 + amp.imag**2)
    return total


def s_spatial(psi: Ket, q) -> float:
    q = _as_quad(q)
    return (
        correlator_spatial(psi, q.a1, q.a2)
        - correlator_spatial(psi, q.a1, q.a4)
        + correlator_spatial(psi, q.a3, q.a2)
        + correlator_spatial(psi, q.a3, q.a4)
    )


def correlator_temporal(s, a, b) -> float:
    a, b = BlochAngles.of(a), BlochAngles.of(b)
    return kernel_for(as_scenario(s)).correlator(a.theta, a.phi, b.theta, b.phi)


def s_temporal(s, q) -> float:
    return kernel_for(as_scenario(s)).s_tilde(_as_quad(q).flat())


def within_classical_bound(value: float, tol: float = BOUND_TOL) -> bool:
    return abs(value) <= CLASSICAL_BOUND + tol


class ViolationSearch(NamedTuple):
    best: AngleQuad
    value: float
    restart_values: tuple[float, ...]
    sweeps: tuple[int, ...]


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, xtol: float = 1e-10) -> tuple[float, float]:
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _line_max(f, x0: float, f0: float, scan: int) -> tuple[float, float]:
    # coarse periodic scan brackets the global max of the coordinate slice
    step = TWO_PI / scan
    pts = [x0 + k * step for k in range(scan)]
    vals = [f0] + [f(t) for t in pts[1:]]
    k = max(range(scan), key=vals.__getitem__)
    x, fx = _golden_max(f, pts[k] - step, pts[k] + step)
    if fx < vals[k]:
        x, fx = pts[k], vals[k]
    return math.fmod(x, TWO_PI) % TWO_PI, fx


def _coordinate_ascent(objective, x0, tol: float, max_sweeps: int, scan: int):
    x = list(x0)
    fx = objective(x)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        start = fx
        for i in range(len(x)):
            def slice_(t, i=i):
                x[i] = t
                return objective(x)

            saved = x[i]
            xi, fi = _line_max(slice_, saved, fx, scan)
            if fi >= fx:
                x[i], fx = xi, fi
            else:
                x[i] = saved
        if fx - start < tol:
            break
    return x, fx, sweeps


def maximize_violation_detailed(
    s,
    restarts: int = 32,
    tol: float = 1e-9,
    seed: int = 0,
    max_sweeps: int = 500,
    scan: int = 12,
    backend: str | None = None,
) -> ViolationSearch:
    """
    Multi-start coordinate-wise golden-section search maximizing ``|S~|``.

    Each restart draws a uniform quad on ``[0, 2 pi)^8`` and sweeps the eight
    angles until a full sweep improves the value by less than ``tol``.
    """
    if restarts < 1:
        raise InvalidArgumentError("restarts must be >= 1")
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    kern = kernel_for(as_scenario(s), backend)

    def objective(x):
        return abs(kern.s_tilde(x))

    rng = np.random.default_rng(seed)
    starts = rng.uniform(0.0, TWO_PI, size=(restarts, 8))
    results = [_coordinate_ascent(objective, x0, tol, max_sweeps, scan) for x0 in starts]
    # deterministic merge: highest value, ties to the lexicographically smallest angles
    best_x, best_v, _ = min(results, key=lambda r: (-r[1], tuple(r[0])))
    return ViolationSearch(
        AngleQuad.from_flat(best_x),
        best_v,
        tuple(r[1] for r in results),
        tuple(r[2] for r in results),
    )


def maximize_violation(s, restarts: int = 32, tol: float = 1e-9, seed: int = 0):
    """Return ``(best_quad, best_abs_s_tilde)``."""
    r = maximize_violation_detailed(s, restarts=restarts, tol=tol, seed=seed)
    return r.best, r.value
