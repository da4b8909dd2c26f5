"""Joint outcome probabilities and the Bell functional.

One party measures the catalog projectors directly, the other always
measures their entrywise complex conjugates; this pairing is hard-wired
because it is what makes the diagonal probabilities land on 1/d for the
maximally entangled state.  Every probability is a full density-matrix
trace Tr[rho (Pi_i x Pi_j*)] on the d^2-dimensional joint space; no
amplitude shortcut is taken outside the tests.

The functional evaluated here is

    beta = sum_i w_i P_ii - sum_{(i,j) in E} (w_ij / 2) (P_ij + P_ji),

with the pair weight w_ij = max(w_i, w_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .catalog import SicSet, orthogonality_graph


@dataclass(frozen=True)
class BipartiteState:
    """Density matrix on a d x d joint system, stored dense."""

    d: int
    rho: np.ndarray

    def validate(self) -> None:
        m = self.rho
        if m.shape != (self.d ** 2, self.d ** 2):
            raise ValueError(f"state matrix must be {self.d ** 2} x {self.d ** 2}")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("state is not Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-12:
            raise ValueError("state trace is not 1")
        if float(np.linalg.eigvalsh(m)[0]) < -1e-10:
            raise ValueError("state has a negative eigenvalue")


def max_entangled_state(d: int) -> BipartiteState:
    """Rank-1 projector onto (1/sqrt(d)) sum_j |j>|j>."""
    if d < 2:
        raise ValueError("local dimension must be at least 2")
    psi = np.zeros(d * d, dtype=complex)
    for j in range(d):
        psi[j * d + j] = 1.0 / np.sqrt(d)
    return BipartiteState(d, np.outer(psi, psi.conj()))


def projector(v: Sequence[complex]) -> np.ndarray:
    """Rank-1 projector onto the ray of v."""
    arr = np.asarray(v, dtype=complex)
    nrm = np.linalg.norm(arr)
    if nrm == 0.0:
        raise ValueError("zero vector has no projector")
    arr = arr / nrm
    return np.outer(arr, arr.conj())


def conjugate_projector(v: Sequence[complex]) -> np.ndarray:
    """Projector onto the entrywise-conjugated ray, |v*><v*|."""
    return projector(np.conj(np.asarray(v, dtype=complex)))


def joint_probability(rho: BipartiteState, vi: Sequence[complex],
                      vj: Sequence[complex]) -> float:
    """Tr[rho (Pi_i x Pi_j*)], clamped to [0, 1] against roundoff."""
    vi = np.asarray(vi, dtype=complex)
    vj = np.asarray(vj, dtype=complex)
    if len(vi) != rho.d or len(vj) != rho.d:
        raise ValueError("vector dimension does not match the state")
    op = np.kron(projector(vi), conjugate_projector(vj))
    p = float(np.trace(rho.rho @ op).real)
    if p < -1e-9 or p > 1.0 + 1e-9:
        raise ArithmeticError(f"probability {p} outside [0,1] beyond roundoff")
    return min(max(p, 0.0), 1.0)


def bell_settings(n: int, edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Canonical measurement-setting order: diagonals, then both
    orientations of each edge in sorted edge order."""
    out = [(i, i) for i in range(n)]
    for i, j in sorted(edges):
        out.append((i, j))
        out.append((j, i))
    return out


def bell_coefficients(weights: Sequence, edges: Sequence[tuple[int, int]]) -> np.ndarray:
    """Signed weight of each setting, aligned with :func:`bell_settings`."""
    coeffs = [float(w) for w in weights]
    for i, j in sorted(edges):
        wij = float(max(weights[i], weights[j]))
        coeffs.extend([-wij / 2.0, -wij / 2.0])
    return np.asarray(coeffs)


@dataclass(frozen=True)
class ProbabilityTable:
    """Probabilities (optionally with standard errors) for every setting.

    ``values`` is aligned with ``bell_settings(n, edges)``: the n
    diagonal entries first, then (i,j) and (j,i) for each sorted edge.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    values: np.ndarray
    sigmas: Optional[np.ndarray] = None

    def settings(self) -> list[tuple[int, int]]:
        return bell_settings(self.n, self.edges)

    def as_dict(self) -> dict:
        return dict(zip(self.settings(), self.values.tolist()))

    def diagonal(self) -> np.ndarray:
        return self.values[: self.n]


def bell_value(sic: SicSet, rho: BipartiteState) -> tuple[float, ProbabilityTable]:
    """Evaluate the functional for a set against a state, via full traces."""
    if sic.dimension != rho.d:
        raise ValueError(
            f"set dimension {sic.dimension} does not match state dimension {rho.d}")
    graph = orthogonality_graph(sic)
    vecs = sic.float_vectors()
    settings = bell_settings(sic.n, graph.edges)
    values = np.array([joint_probability(rho, vecs[i], vecs[j]) for i, j in settings])
    table = ProbabilityTable(sic.n, tuple(sorted(graph.edges)), values)
    coeffs = bell_coefficients(sic.weights, graph.edges)
    return float(coeffs @ values), table


def bell_operator(sic: SicSet) -> np.ndarray:
    """The joint-space observable whose expectation is the functional.

    B = sum_i w_i Pi_i x Pi_i* - sum_(i,j) (w_ij/2)(Pi_i x Pi_j* + Pi_j x Pi_i*),
    a Hermitian d^2 x d^2 matrix.  beta(rho) = Tr[rho B], so the largest
    eigenvalue of B is the ceiling of the functional over all states for
    this measurement family.
    """
    graph = orthogonality_graph(sic)
    vecs = sic.float_vectors()
    d = sic.dimension
    alice = [projector(v) for v in vecs]
    bob = [conjugate_projector(v) for v in vecs]
    op = np.zeros((d * d, d * d), dtype=complex)
    for i in range(sic.n):
        op += sic.weights[i] * np.kron(alice[i], bob[i])
    for i, j in graph.edges:
        half = max(sic.weights[i], sic.weights[j]) / 2.0
        op -= half * (np.kron(alice[i], bob[j]) + np.kron(alice[j], bob[i]))
    return op
