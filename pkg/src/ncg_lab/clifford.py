"""Gamma matrices for the complex Clifford algebra on N generators.

Jordan-Wigner construction on m = ceil(N/2) two-dimensional factors: with the
Pauli matrices X, Y, Z the Hermitian generators are

    e_{2k-1} = Z (x) ... (x) Z (x) X (x) I (x) ... (x) I
    e_{2k}   = Z (x) ... (x) Z (x) Y (x) I (x) ... (x) I

(the X or Y in factor k), of which the first N are kept. They anticommute and
square to one, and gamma_j = i e_j. For odd N the representation is the sum
of both irreducible ones, hence faithful.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .report import Report

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _kron(mats) -> np.ndarray:
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


@dataclass(frozen=True, eq=False)
class CliffordRep:
    N: int
    gammas: tuple

    @property
    def s(self) -> int:
        return self.gammas[0].shape[0]

    def generator(self, j: int) -> np.ndarray:
        """The Hermitian generator e_j = -i gamma_j (0-based j)."""
        return -1j * self.gammas[j]


def build_gammas(N: int) -> CliffordRep:
    if N < 1:
        raise ValueError("need at least one generator")
    m = (N + 1) // 2
    gens = []
    for k in range(m):
        for p in (_X, _Y):
            gens.append(_kron([_Z] * k + [p] + [_I] * (m - k - 1)))
    gammas = tuple(1j * g for g in gens[:N])
    for g in gammas:
        g.setflags(write=False)
    return CliffordRep(N, gammas)


def from_matrices(mats) -> CliffordRep:
    """Wrap user-supplied gamma matrices after checking the relations."""
    gammas = tuple(np.array(g, dtype=complex) for g in mats)
    rep = CliffordRep(len(gammas), gammas)
    report = verify_clifford(rep)
    if not report.passed:
        raise ValueError(f"supplied matrices violate the Clifford relations: {report.failures()}")
    return rep


def verify_clifford(rep: CliffordRep, tol: float = 1e-14) -> Report:
    r = Report("clifford", tol)
    s = rep.s
    eye = np.eye(s)
    for j, g in enumerate(rep.gammas):
        r.record("skew_adjoint", np.abs(g.conj().T + g).max())
        r.record("unitary", np.abs((1j * g) @ (1j * g).conj().T - eye).max())
        for k, h in enumerate(rep.gammas):
            target = -2 * eye if j == k else 0
            r.record("anticommutation", np.abs(g @ h + h @ g - target).max())
    return r


def chirality(rep: CliffordRep) -> np.ndarray | None:
    """i^(N(N-1)/2) e_1 ... e_N for even N, None for odd N."""
    if rep.N % 2:
        return None
    prod = np.eye(rep.s, dtype=complex)
    for j in range(rep.N):
        prod = prod @ rep.generator(j)
    return (1j ** ((rep.N * (rep.N - 1) // 2) % 4)) * prod
