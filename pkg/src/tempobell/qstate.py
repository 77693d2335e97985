"""
Exact complex linear algebra for registers of one to three qubits.

Qubit ordering is big-endian: in a tensor product the system qubit is the
most significant factor, followed by auxiliary qubit 1 and auxiliary qubit 2,
so ``|z-> |1> |0>`` lives at index ``0b110 = 6``.

Kets carry an explicit ``normalized`` flag. Residuals left behind by a
projection are un-normalized and are never silently rescaled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, UnsupportedDimensionError

NORM_TOL = 1e-12
_DIMS = (2, 4, 8)

__all__ = [
    "Ket",
    "Unitary",
    "BlochAngles",
    "chi",
    "chi_perp",
    "inner",
    "tensor",
    "apply",
    "project",
    "basis",
    "perp",
    "Z_PLUS",
    "Z_MINUS",
    "X_PLUS",
    "X_MINUS",
    "PAULI_X",
    "IDENTITY_2",
]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Ket:
    """Amplitude vector over 1, 2 or 3 qubits."""

    amp: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amp = _frozen(np.ravel(self.amp))
        if amp.size not in _DIMS:
            raise UnsupportedDimensionError(f"ket dimension {amp.size} not in {_DIMS}")
        if not np.all(np.isfinite(amp)):
            raise InvalidArgumentError("ket amplitudes must be finite")
        if self.normalized and abs(np.vdot(amp, amp).real - 1.0) > NORM_TOL:
            raise InvalidArgumentError(
                f"ket flagged normalized has squared norm {np.vdot(amp, amp).real!r}"
            )
        object.__setattr__(self, "amp", amp)

    @property
    def dim(self) -> int:
        return self.amp.size

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def norm_sq(self) -> float:
        return float(np.vdot(self.amp, self.amp).real)

    def normalize(self) -> "Ket":
        """Rescale to unit norm; a zero residual cannot be normalized."""
        n = math.sqrt(self.norm_sq())
        if n == 0.0:
            raise InvalidArgumentError("cannot normalize the zero vector")
        return Ket(self.amp / n, normalized=True)

    def scaled(self, c: complex) -> "Ket":
        return Ket(self.amp * c, normalized=False)

    def equals_up_to_phase(self, other: "Ket", atol: float = NORM_TOL) -> bool:
        if self.dim != other.dim:
            return False
        overlap = np.vdot(self.amp, other.amp)
        return abs(abs(overlap) ** 2 - self.norm_sq() * other.norm_sq()) <= atol

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amp, dtype=dtype)

    def __repr__(self):
        flag = "" if self.normalized else ", normalized=False"
        return f"Ket({np.array2string(self.amp, precision=6)}{flag})"


@dataclass(frozen=True, eq=False)
class Unitary:
    """Square unitary matrix acting on a 1-3 qubit register."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in _DIMS:
            raise InvalidArgumentError(f"unitary must be square with dim in {_DIMS}, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidArgumentError("unitary entries must be finite")
        if np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) > NORM_TOL:
            raise InvalidArgumentError("matrix is not unitary within 1e-12")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim: int = 2) -> "Unitary":
        return cls(np.eye(dim))

    @classmethod
    def rotation(cls, source: Ket, dest: Ket) -> "Unitary":
        """Single-qubit unitary sending ``source`` to ``dest``, and source-perp to dest-perp."""
        if source.dim != 2 or dest.dim != 2:
            raise InvalidArgumentError("rotation is defined for single-qubit kets")
        m = np.outer(dest.amp, source.amp.conj()) + np.outer(perp(dest).amp, perp(source).amp.conj())
        return cls(m)

    def __matmul__(self, other: "Unitary") -> "Unitary":
        return Unitary(self.matrix @ other.matrix)


@dataclass(frozen=True)
class BlochAngles:
    """Measurement direction ``(theta, phi)`` in radians; no range restriction."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        t, p = float(self.theta), float(self.phi)
        if not (math.isfinite(t) and math.isfinite(p)):
            raise InvalidArgumentError(f"angles must be finite, got ({self.theta}, {self.phi})")
        object.__setattr__(self, "theta", t)
        object.__setattr__(self, "phi", p)

    def __iter__(self):
        yield self.theta
        yield self.phi

    @classmethod
    def of(cls, value) -> "BlochAngles":
        if isinstance(value, cls):
            return value
        theta, phi = value
        return cls(theta, phi)


def chi(angles) -> Ket:
    """``(cos t, e^{i p} sin t)`` in the ``{|z+>, |z->}`` basis."""
    a = BlochAngles.of(angles)
    return Ket(np.array([math.cos(a.theta), complex(math.cos(a.phi), math.sin(a.phi)) * math.sin(a.theta)]))


def chi_perp(angles) -> Ket:
    """``(-e^{-i p} sin t, cos t)``, the partner of :func:`chi` orthogonal to it."""
    a = BlochAngles.of(angles)
    return Ket(np.array([-complex(math.cos(a.phi), -math.sin(a.phi)) * math.sin(a.theta), math.cos(a.theta)]))


def basis(index: int, dim: int = 2) -> Ket:
    amp = np.zeros(dim, dtype=np.complex128)
    amp[index] = 1.0
    return Ket(amp)


def perp(k: Ket) -> Ket:
    """Orthogonal single-qubit partner ``(-conj b, conj a)``; maps chi(a) to chi_perp(a)."""
    if k.dim != 2:
        raise InvalidArgumentError("perp is defined for single-qubit kets")
    a, b = k.amp
    return Ket(np.array([-np.conj(b), np.conj(a)]), normalized=k.normalized)


def inner(bra: Ket, ket: Ket) -> complex:
    """``<bra|ket>``, conjugate-linear in ``bra``."""
    if bra.dim != ket.dim:
        raise InvalidArgumentError(f"dimension mismatch: {bra.dim} vs {ket.dim}")
    return complex(np.vdot(bra.amp, ket.amp))


def tensor(*kets: Ket) -> Ket:
    """Kronecker product, first argument most significant."""
    if not kets:
        raise InvalidArgumentError("tensor needs at least one ket")
    dim = math.prod(k.dim for k in kets)
    if dim > 8:
        raise UnsupportedDimensionError(f"tensor product dimension {dim} exceeds 8")
    amp = kets[0].amp
    for k in kets[1:]:
        amp = np.kron(amp, k.amp)
    return Ket(amp, normalized=all(k.normalized for k in kets))


def apply(u: Unitary, psi: Ket) -> Ket:
    if u.dim != psi.dim:
        raise InvalidArgumentError(f"dimension mismatch: unitary {u.dim} vs ket {psi.dim}")
    return Ket(u.matrix @ psi.amp, normalized=psi.normalized)


def project(psi: Ket, target: Ket, qubits: Sequence[int] | None = None):
    """
    Apply ``|target><target|`` to ``psi`` (on the given qubits, identity elsewhere).

    Returns ``(residual, amplitude)``. ``residual`` is un-normalized; its squared
    norm is the outcome probability. When ``target`` spans the whole register
    ``amplitude`` is the scalar ``<target|psi>``. When it addresses a subset of
    qubits, ``amplitude`` is the partial contraction: an array over the
    remaining qubits in their original order.
    """
    n = psi.n_qubits
    k = target.n_qubits
    if qubits is None:
        if k != n:
            qubits = tuple(range(k))
        else:
            qubits = tuple(range(n))
    qubits = tuple(int(q) for q in qubits)
    if len(qubits) != k or len(set(qubits)) != k or any(not 0 <= q < n for q in qubits):
        raise InvalidArgumentError(
            f"target of {k} qubit(s) cannot address qubits {qubits} of a {n}-qubit register"
        )
    if not target.normalized:
        raise InvalidArgumentError("projection target must be normalized")

    rest = [q for q in range(n) if q not in qubits]
    order = list(qubits) + rest
    t = np.transpose(psi.amp.reshape([2] * n), order).reshape(2**k, -1)
    contracted = target.amp.conj() @ t
    full = np.outer(target.amp, contracted).reshape([2] * n)
    residual = Ket(np.transpose(full, np.argsort(order)).reshape(-1), normalized=False)
    if k == n:
        return residual, complex(contracted[0])
    return residual, contracted


Z_PLUS = basis(0)
Z_MINUS = basis(1)
X_PLUS = Ket(np.array([1.0, 1.0]) / math.sqrt(2))
X_MINUS = Ket(np.array([1.0, -1.0]) / math.sqrt(2))
PAULI_X = Unitary(np.array([[0, 1], [1, 0]]))
IDENTITY_2 = Unitary.identity(2)
