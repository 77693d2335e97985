"""Pure-Python/numpy kernels; the reference backend and the import fallback."""
from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def _chi(t: float, p: float, use_perp: bool) -> tuple[complex, complex]:
    s, c = math.sin(t), math.cos(t)
    if use_perp:
        return complex(-math.cos(p) * s, math.sin(p) * s), complex(c)
    return complex(c), complex(math.cos(p) * s, math.sin(p) * s)


class Kernel:
    """Squared projection amplitudes and CHSH combinations for one scenario."""

    def __init__(self, mode: int, T, psi, A):
        self.mode = int(mode)
        self.T = np.ascontiguousarray(T, dtype=np.complex128)
        self.psi = np.ascontiguousarray(psi, dtype=np.complex128)
        self.A = np.ascontiguousarray(A, dtype=np.complex128)
        self._t = [complex(x) for x in self.T.ravel()]
        self._p = [complex(x) for x in self.psi]
        self._a = [complex(x) for x in self.A.ravel()]

    def _amp(self, c1a, c1b, c2a, c2b) -> complex:
        if self.mode == 0:
            t00, t01, t10, t11 = self._t
            p0, p1 = self._p
            bridge = c2a.conjugate() * (t00 * c1a + t01 * c1b) + c2b.conjugate() * (t10 * c1a + t11 * c1b)
            return bridge * (c1a.conjugate() * p0 + c1b.conjugate() * p1)
        a00, a01, a10, a11 = self._a
        d2a, d2b = c2a.conjugate(), c2b.conjugate()
        return c1a.conjugate() * (d2a * a00 + d2b * a01) + c1b.conjugate() * (d2a * a10 + d2b * a11)

    def prob(self, t1, p1, t2, p2, perp1=False, perp2=False) -> float:
        c1a, c1b = _chi(t1, p1, perp1)
        c2a, c2b = _chi(t2, p2, perp2)
        z = self._amp(c1a, c1b, c2a, c2b)
        return z.real * z.real + z.imag * z.imag

    def correlator(self, ta, pa, tb, pb) -> float:
        a = (_chi(ta, pa, False), _chi(ta, pa, True))
        b = (_chi(tb, pb, False), _chi(tb, pb, True))
        total = 0.0
        for i, sign_a in ((0, 1.0), (1, -1.0)):
            for j, sign_b in ((0, 1.0), (1, -1.0)):
                z = self._amp(a[i][0], a[i][1], b[j][0], b[j][1])
                total += sign_a * sign_b * (z.real * z.real + z.imag * z.imag)
        return total

    def s_tilde(self, quad) -> float:
        t1, p1, t2, p2, t3, p3, t4, p4 = (float(x) for x in quad)
        return (
            self.correlator(t1, p1, t2, p2)
            - self.correlator(t1, p1, t4, p4)
            + self.correlator(t3, p3, t2, p2)
            + self.correlator(t3, p3, t4, p4)
        )

    def _probs(self, t1, p1, t2, p2) -> np.ndarray:
        c1a = np.cos(t1)
        c1b = np.exp(1j * p1) * np.sin(t1)
        c2a = np.cos(t2)
        c2b = np.exp(1j * p2) * np.sin(t2)
        if self.mode == 0:
            T, psi = self.T, self.psi
            bridge = c2a * (T[0, 0] * c1a + T[0, 1] * c1b) + c2b.conj() * (T[1, 0] * c1a + T[1, 1] * c1b)
            z = bridge * (c1a * psi[0] + c1b.conj() * psi[1])
        else:
            A = self.A
            d2b = c2b.conj()
            z = c1a * (c2a * A[0, 0] + d2b * A[0, 1]) + c1b.conj() * (c2a * A[1, 0] + d2b * A[1, 1])
        return z.real * z.real + z.imag * z.imag

    def grid_probs(self, n: int, lo: int = 0, hi: int | None = None) -> np.ndarray:
        """Probabilities on the uniform ``n^4`` grid for t1-theta indices ``lo:hi``, C order."""
        hi = n if hi is None else hi
        nodes = 2.0 * math.pi * np.arange(n) / n
        t1, p1, t2, p2 = np.meshgrid(nodes[lo:hi], nodes, nodes, nodes, indexing="ij", sparse=True)
        return np.ascontiguousarray(self._probs(t1, p1, t2, p2)).reshape(-1)

    def point_probs(self, angles) -> np.ndarray:
        a = np.ascontiguousarray(angles, dtype=np.float64)
        return self._probs(a[:, 0], a[:, 1], a[:, 2], a[:, 3])
