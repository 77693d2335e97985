"""
Two-time history states and the projection amplitude ``Proj``.

A history term ``w [psi2] (.) [psi1]`` is the projector chain
``|psi2><psi2|psi1><psi1|`` scaled by ``w``. Its amplitude for passing
projections onto ``c1`` at t1 and ``c2`` at t2 is::

    w * <psi2|psi1> * <c1|psi1> * <c2|psi2>

The chain overlap ``<psi2|psi1>`` is what the product-history normalization
``1/|<psi2|psi1>|`` cancels, so every normalized product history yields
unit total outcome probability. For the z-basis histories it equals one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidArgumentError, NullHistoryError
from .qstate import (
    IDENTITY_2,
    Z_MINUS,
    Z_PLUS,
    BlochAngles,
    Ket,
    Unitary,
    chi,
    chi_perp,
    inner,
)

NULL_OVERLAP_TOL = 1e-9

# kernel mode tags, shared with the compiled and pure-Python kernels
MODE_EVOLVED = 0
MODE_HISTORY = 1


@dataclass(frozen=True)
class HistoryTerm:
    weight: complex
    ket_t1: Ket
    ket_t2: Ket

    def __post_init__(self):
        w = complex(self.weight)
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise InvalidArgumentError("history weight must be finite")
        for k in (self.ket_t1, self.ket_t2):
            if k.dim != 2 or not k.normalized:
                raise InvalidArgumentError("history slices must be normalized single-qubit kets")
        object.__setattr__(self, "weight", w)

    @property
    def chain_overlap(self) -> complex:
        return inner(self.ket_t2, self.ket_t1)


@dataclass(frozen=True)
class HistoryState:
    terms: tuple[HistoryTerm, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise InvalidArgumentError("a history state needs at least one term")
        if all(t.weight == 0 for t in terms):
            raise InvalidArgumentError("a history state needs a nonzero weight")
        object.__setattr__(self, "terms", terms)


@dataclass(frozen=True)
class EvolvedInitial:
    """A particle prepared in ``psi_t1`` and carried to t2 by ``bridging``."""

    psi_t1: Ket
    bridging: Unitary = IDENTITY_2

    def __post_init__(self):
        if self.psi_t1.dim != 2 or not self.psi_t1.normalized:
            raise InvalidArgumentError("initial state must be a normalized single-qubit ket")
        if self.bridging.dim != 2:
            raise InvalidArgumentError("bridging operator must act on one qubit")


@dataclass(frozen=True)
class History:
    state: HistoryState


Scenario = Union[EvolvedInitial, History]


def as_scenario(s) -> Scenario:
    if isinstance(s, (EvolvedInitial, History)):
        return s
    if isinstance(s, HistoryState):
        return History(s)
    if isinstance(s, Ket):
        return EvolvedInitial(s)
    raise InvalidArgumentError(f"cannot interpret {type(s).__name__} as a scenario")


def product_history(psi_t1: Ket, psi_t2: Ket) -> HistoryState:
    """Normalized non-entangled history ``[psi_t2] (.) [psi_t1] / |<psi_t2|psi_t1>|``."""
    overlap = abs(inner(psi_t2, psi_t1))
    if overlap <= NULL_OVERLAP_TOL:
        raise NullHistoryError(
            f"time slices are orthogonal (|overlap| = {overlap:.3g}); the history has zero norm"
        )
    return HistoryState((HistoryTerm(1.0 / overlap, psi_t1, psi_t2),))


def entangled_zz_history() -> HistoryState:
    """``([z+](.)[z+] + [z-](.)[z-]) / sqrt 2``."""
    w = 1.0 / math.sqrt(2)
    return HistoryState((HistoryTerm(w, Z_PLUS, Z_PLUS), HistoryTerm(w, Z_MINUS, Z_MINUS)))


def _select(angles, use_perp: bool) -> Ket:
    return chi_perp(angles) if use_perp else chi(angles)


def proj_amplitude(
    s,
    at_t1,
    at_t2,
    perp_t1: bool = False,
    perp_t2: bool = False,
) -> complex:
    """Amplitude for projecting onto chi (or chi_perp) at t1 and then at t2."""
    s = as_scenario(s)
    c1 = _select(BlochAngles.of(at_t1), perp_t1)
    c2 = _select(BlochAngles.of(at_t2), perp_t2)
    if isinstance(s, EvolvedInitial):
        return inner(c2, Ket(s.bridging.matrix @ c1.amp)) * inner(c1, s.psi_t1)
    return sum(
        t.weight * t.chain_overlap * inner(c1, t.ket_t1) * inner(c2, t.ket_t2)
        for t in s.state.terms
    )


def kernel_arrays(s) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
    """
    Reduce a scenario to ``(mode, T, psi, A)`` for the numeric kernels.

    Evolved: ``Proj = (c2^H T c1)(c1^H psi)``.
    History: ``Proj = sum_jk conj(c1_j) conj(c2_k) A[j, k]`` with
    ``A = sum_i w_i <psi2_i|psi1_i> psi1_i (x) psi2_i``.
    """
    s = as_scenario(s)
    T = np.eye(2, dtype=np.complex128)
    psi = np.zeros(2, dtype=np.complex128)
    A = np.zeros((2, 2), dtype=np.complex128)
    if isinstance(s, EvolvedInitial):
        T = np.array(s.bridging.matrix, dtype=np.complex128)
        psi = np.array(s.psi_t1.amp, dtype=np.complex128)
        return MODE_EVOLVED, T, psi, A
    for t in s.state.terms:
        A += t.weight * t.chain_overlap * np.outer(t.ket_t1.amp, t.ket_t2.amp)
    return MODE_HISTORY, T, psi, A
