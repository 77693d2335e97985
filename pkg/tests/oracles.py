"""Independent reference computations; none of these call the kernels."""
import math

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def bloch(theta, phi):
    return np.array([math.sin(2 * theta) * math.cos(phi), math.sin(2 * theta) * math.sin(phi), math.cos(2 * theta)])


def spin_op(theta, phi):
    n = bloch(theta, phi)
    return n[0] * SX + n[1] * SY + n[2] * SZ


def spatial_correlator(psi4, a, b):
    """<psi| (n_a . sigma) (x) (n_b . sigma) |psi>."""
    op = np.kron(spin_op(*a), spin_op(*b))
    return float(np.vdot(psi4, op @ psi4).real)


def spatial_s(psi4, q):
    a1, a2, a3, a4 = q[0:2], q[2:4], q[4:6], q[6:8]
    return (spatial_correlator(psi4, a1, a2) - spatial_correlator(psi4, a1, a4)
            + spatial_correlator(psi4, a3, a2) + spatial_correlator(psi4, a3, a4))


def ket_chi(theta, phi, use_perp=False):
    if use_perp:
        return np.array([-np.exp(-1j * phi) * math.sin(theta), math.cos(theta)])
    return np.array([math.cos(theta), np.exp(1j * phi) * math.sin(theta)])


def projector(v):
    return np.outer(v, v.conj())


def evolved_prob(psi, T, a, b, perp1=False, perp2=False):
    """Squared norm of P_c2 T P_c1 psi: sequential ideal measurement."""
    out = projector(ket_chi(*b, perp2)) @ T @ projector(ket_chi(*a, perp1)) @ psi
    return float(np.vdot(out, out).real)


def undo_prob(psi1, psi2, a, b, perp1=False, perp2=False):
    """Prepare psi1, project on c1, rotate c1 -> psi2, project on c2."""
    c1 = ket_chi(*a, perp1)
    c1p = np.array([-np.conj(c1[1]), np.conj(c1[0])])
    p2p = np.array([-np.conj(psi2[1]), np.conj(psi2[0])])
    R = np.outer(psi2, c1.conj()) + np.outer(p2p, c1p.conj())
    out = projector(ket_chi(*b, perp2)) @ R @ projector(c1) @ psi1
    return float(np.vdot(out, out).real)


def temporal_from_probs(prob, a, b):
    return (prob(a, b, False, False) - prob(a, b, True, False)
            - prob(a, b, False, True) + prob(a, b, True, True))


def temporal_s(prob, q):
    a1, a2, a3, a4 = q[0:2], q[2:4], q[4:6], q[6:8]
    E = lambda a, b: temporal_from_probs(prob, a, b)
    return E(a1, a2) - E(a1, a4) + E(a3, a2) + E(a3, a4)


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def closed_form_zz_product(t1, t2, t3, t4):
    c = lambda t: math.cos(2 * t)
    return c(t1) * (c(t2) - c(t4)) + c(t3) * (c(t2) + c(t4))
