"""
Gate-by-gate simulation of the auxiliary-qubit protocols.

Register layout is ``system (qubit 0) (x) aux1 (qubit 1) (x) aux2 (qubit 2)``.
Projections are applied as un-normalized operators; the running squared norm
is the joint probability of all outcomes so far.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InvalidArgumentError
from .history import entangled_zz_history, proj_amplitude
from .qstate import (
    X_PLUS,
    Z_MINUS,
    Z_PLUS,
    BlochAngles,
    Ket,
    basis,
    chi,
    chi_perp,
    perp,
    tensor,
)

POSTSELECTION_RENORM = math.sqrt(2.0)

_S = 1.0 / math.sqrt(2.0)
BELL_STATES: dict[str, Ket] = {
    "phi+": Ket(np.array([_S, 0, 0, _S])),
    "phi-": Ket(np.array([_S, 0, 0, -_S])),
    "psi+": Ket(np.array([0, _S, _S, 0])),
    "psi-": Ket(np.array([0, _S, -_S, 0])),
}
BELL_ORDER = ("phi+", "phi-", "psi+", "psi-")


def _embed(op: np.ndarray, targets: tuple[int, ...], n: int) -> np.ndarray:
    """Full ``2^n`` matrix of ``op`` acting on ``targets`` (in that order)."""
    k = len(targets)
    if op.shape != (2**k, 2**k) or len(set(targets)) != k or any(not 0 <= t < n for t in targets):
        raise InvalidArgumentError(f"cannot place a {k}-qubit operator on {targets} of {n} qubits")
    dim = 2**n
    full = np.zeros((dim, dim), dtype=np.complex128)
    shifts = [n - 1 - t for t in targets]
    mask = sum(1 << s for s in shifts)
    for col in range(dim):
        sub_in = 0
        for s in shifts:
            sub_in = (sub_in << 1) | ((col >> s) & 1)
        base = col & ~mask
        for sub_out in range(2**k):
            row = base
            for j, s in enumerate(shifts):
                row |= ((sub_out >> (k - 1 - j)) & 1) << s
            full[row, col] += op[sub_out, sub_in]
    return full


def _rotation(source: Ket, dest: Ket, phase: float = 0.0) -> np.ndarray:
    # source -> dest, source-perp -> e^{i phase} dest-perp
    return np.outer(dest.amp, source.amp.conj()) + np.exp(1j * phase) * np.outer(
        perp(dest).amp, perp(source).amp.conj()
    )


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def matrix(self, n: int) -> np.ndarray:
        cx = np.eye(4, dtype=np.complex128)[[0, 1, 3, 2]]
        return _embed(cx, (self.control, self.target), n)


@dataclass(frozen=True)
class ControlledRotate:
    """Rotate ``target`` by ``from0 -> to0`` when control is 0, ``from1 -> to1`` when 1.

    Only the image of ``from0``/``from1`` is fixed by the protocol; the
    orthogonal complement picks up ``completion_phase``.
    """

    control: int
    target: int
    from0: Ket
    to0: Ket
    from1: Ket
    to1: Ket
    completion_phase: float = 0.0

    def matrix(self, n: int) -> np.ndarray:
        u0 = _rotation(self.from0, self.to0, self.completion_phase)
        u1 = _rotation(self.from1, self.to1, self.completion_phase)
        op = np.zeros((4, 4), dtype=np.complex128)
        op[:2, :2] = u0
        op[2:, 2:] = u1
        return _embed(op, (self.control, self.target), n)


@dataclass(frozen=True)
class SingleRotate:
    target: int
    source: Ket
    dest: Ket

    def matrix(self, n: int) -> np.ndarray:
        return _embed(_rotation(self.source, self.dest), (self.target,), n)


@dataclass(frozen=True)
class ProjectFactor:
    target: int
    onto: Ket

    def matrix(self, n: int) -> np.ndarray:
        return _embed(np.outer(self.onto.amp, self.onto.amp.conj()), (self.target,), n)


@dataclass(frozen=True)
class ProjectPair:
    targets: tuple[int, int]
    onto: Ket

    def matrix(self, n: int) -> np.ndarray:
        return _embed(np.outer(self.onto.amp, self.onto.amp.conj()), tuple(self.targets), n)


Gate = Union[CNOT, ControlledRotate, SingleRotate, ProjectFactor, ProjectPair]
_PROJECTIONS = (ProjectFactor, ProjectPair)


def is_projection(gate: Gate) -> bool:
    return isinstance(gate, _PROJECTIONS)


@dataclass(frozen=True)
class RunRecord:
    final_state: Ket
    joint_probability: float
    renormalized_amplitude: complex
    raw_amplitude: complex = 0j
    step_log: tuple = field(default_factory=tuple)

    @property
    def renormalized_probability(self) -> float:
        return abs(self.renormalized_amplitude) ** 2


def run_circuit(initial: Ket, gates) -> tuple[np.ndarray, list]:
    """Apply ``gates`` in order; returns the un-normalized final vector and the step log.

    Each log entry is ``(gate, p)`` where ``p`` is the conditional outcome
    probability of a projection (1 for unitaries, 0 once the branch is dead).
    """
    n = initial.n_qubits
    vec = np.array(initial.amp)
    log = []
    for gate in gates:
        before = float(np.vdot(vec, vec).real)
        vec = gate.matrix(n) @ vec
        if is_projection(gate):
            after = float(np.vdot(vec, vec).real)
            p = after / before if before > 0.0 else 0.0
        else:
            p = 1.0
        log.append((gate, p))
    return vec, log


def _record(vec: np.ndarray, log, final_onto: Ket, renorm: float) -> RunRecord:
    joint = float(np.vdot(vec, vec).real)
    raw = complex(np.vdot(final_onto.amp, vec))
    if joint > 0.0:
        final = Ket(vec / math.sqrt(joint))
    else:
        final = Ket(np.zeros_like(vec), normalized=False)
    return RunRecord(final, joint, renorm * raw, raw, tuple(log))


def _c(angles, use_perp: bool) -> Ket:
    return chi_perp(angles) if use_perp else chi(angles)


def prepare_entangled_history(return_intermediate: bool = False):
    """``|x+>|00>`` followed by CNOT(system -> aux1) and CNOT(system -> aux2)."""
    start = tensor(X_PLUS, basis(0), basis(0))
    after_first = CNOT(0, 1).matrix(3) @ start.amp
    after_second = CNOT(0, 2).matrix(3) @ after_first
    out = Ket(after_second)
    if return_intermediate:
        return out, Ket(after_first)
    return out


def erase_in_bell_basis(psi: Ket) -> list[tuple[str, float, Ket]]:
    """Measure the auxiliary pair in the Bell basis ``[phi+, phi-, psi+, psi-]``.

    Returns ``(label, probability, conditional system state)``; zero-probability
    outcomes carry an un-normalized zero system state.
    """
    if psi.dim != 8 or not psi.normalized:
        raise InvalidArgumentError("Bell erasure needs a normalized three-qubit ket")
    block = psi.amp.reshape(2, 4)  # system x aux-pair
    out = []
    for label in BELL_ORDER:
        sys_amp = block @ BELL_STATES[label].amp.conj()
        p = float(np.vdot(sys_amp, sys_amp).real)
        if p > 0.0:
            state = Ket(sys_amp / math.sqrt(p))
        else:
            state = Ket(np.zeros(2), normalized=False)
        out.append((label, p, state))
    return out


def undo_protocol_gates(a, b, perp_t1: bool = False, perp_t2: bool = False) -> list:
    c1 = _c(a, perp_t1)
    return [
        ProjectFactor(0, c1),
        SingleRotate(0, c1, Z_PLUS),
        ProjectFactor(0, _c(b, perp_t2)),
    ]


def run_undo_protocol(a, b, perp_t1: bool = False, perp_t2: bool = False) -> RunRecord:
    """Prepare ``|z+>``, project onto c1, rotate c1 back to ``|z+>``, project onto c2."""
    a, b = BlochAngles.of(a), BlochAngles.of(b)
    vec, log = run_circuit(Z_PLUS, undo_protocol_gates(a, b, perp_t1, perp_t2))
    return _record(vec, log, _c(b, perp_t2), 1.0)


def postselected_protocol_gates(
    a, b, perp_t1: bool = False, perp_t2: bool = False, bell: str = "phi+", completion_phase: float = 0.0
) -> list:
    if bell not in BELL_STATES:
        raise InvalidArgumentError(f"unknown Bell label {bell!r}; expected one of {BELL_ORDER}")
    c1 = _c(a, perp_t1)
    return [
        CNOT(0, 1),
        ProjectFactor(0, c1),
        ControlledRotate(1, 0, c1, Z_PLUS, c1, Z_MINUS, completion_phase),
        CNOT(0, 2),
        ProjectPair((1, 2), BELL_STATES[bell]),
        ProjectFactor(0, _c(b, perp_t2)),
    ]


def run_postselected_protocol(
    a,
    b,
    perp_t1: bool = False,
    perp_t2: bool = False,
    bell: str = "phi+",
    completion_phase: float = 0.0,
) -> RunRecord:
    """
    Full three-qubit protocol with Bell post-selection on the auxiliary pair.

    ``raw_amplitude`` is the coefficient of ``|c2>|bell>`` in the final vector;
    ``renormalized_amplitude`` is ``sqrt 2`` times it, the same convention for
    every Bell label.
    """
    a, b = BlochAngles.of(a), BlochAngles.of(b)
    gates = postselected_protocol_gates(a, b, perp_t1, perp_t2, bell, completion_phase)
    start = tensor(X_PLUS, basis(0), basis(0))
    vec, log = run_circuit(start, gates)
    onto = tensor(_c(b, perp_t2), BELL_STATES[bell])
    return _record(vec, log, onto, POSTSELECTION_RENORM)


def postselection_probability(record: RunRecord) -> float:
    """Cumulative probability of reaching the Bell post-selection step."""
    p = 1.0
    for gate, step in record.step_log:
        p *= step
        if isinstance(gate, ProjectPair):
            return p
    raise InvalidArgumentError("run has no Bell post-selection step")


def analytic_postselected_amplitude(a, b, perp_t1: bool = False, perp_t2: bool = False) -> complex:
    """Closed-form amplitude ``(<c1|z+><c2|z+> + <c1|z-><c2|z->)/sqrt 2``."""
    return proj_amplitude(entangled_zz_history(), a, b, perp_t1, perp_t2)


def temporal_correlator_via_circuit(a, b) -> float:
    total = 0.0
    for p1, s1 in ((False, 1.0), (True, -1.0)):
        for p2, s2 in ((False, 1.0), (True, -1.0)):
            total += s1 * s2 * run_postselected_protocol(a, b, p1, p2).renormalized_probability
    return total


def s_temporal_via_circuit(q) -> float:
    from .chsh import _as_quad

    q = _as_quad(q)
    return (
        temporal_correlator_via_circuit(q.a1, q.a2)
        - temporal_correlator_via_circuit(q.a1, q.a4)
        + temporal_correlator_via_circuit(q.a3, q.a2)
        + temporal_correlator_via_circuit(q.a3, q.a4)
    )
