"""Relative entropy of quantumness via minimization over product bases.

A classically correlated state is diagonal in some product basis.  For a
fixed basis the closest such state is the dephased (diagonal) part of rho,
so the distance is the entropy gap S(Pi(rho)) - S(rho); the quantumness
Q_S(rho) is its minimum over all product bases, parametrized by two Bloch
angles per qubit.  The landscape has symmetric local minima, so the search
is a deterministic multi-start simplex refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optim import halton, nelder_mead
from .channels import dephasing_channel
from .linalg import (
    bloch_rotation,
    check_density_matrix,
    kron,
    num_qubits,
    von_neumann_entropy,
)


def product_basis_unitary(angles) -> np.ndarray:
    """Tensor product of per-qubit rotations; columns are the basis states."""
    angles = np.asarray(angles, dtype=float).reshape(-1, 2)
    return kron(*(bloch_rotation(theta, phi) for theta, phi in angles))


def classical_dephase(rho: np.ndarray, angles) -> np.ndarray:
    """Zero all off-diagonal elements of rho in the given product basis.

    The all-zero angles select the computational basis, where the operation
    is a plain diagonal extraction (and exactly idempotent).
    """
    check_density_matrix(rho)
    angles = np.asarray(angles, dtype=float).reshape(-1, 2)
    if angles.shape[0] != num_qubits(rho.shape[0]):
        raise ValueError("one (theta, phi) pair per qubit required")
    if np.all(angles == 0.0):
        return np.diag(np.diag(rho).real).astype(complex)
    basis = product_basis_unitary(angles)
    probs = np.real(np.einsum("ij,jk,ki->i", basis.conj().T, rho, basis))
    return (basis * probs) @ basis.conj().T


def _basis_probabilities(rho: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("ij,jk,ki->i", basis.conj().T, rho, basis))


def _shannon(probs: np.ndarray) -> float:
    probs = probs[probs > 0.0]
    return float(-np.sum(probs * np.log2(probs)))


def entropy_gap(rho: np.ndarray, angles) -> float:
    """S(Pi(rho)) - S(rho) for the product basis at the given angles."""
    basis = product_basis_unitary(angles)
    return _shannon(np.clip(_basis_probabilities(rho, basis), 0.0, None)) - von_neumann_entropy(rho)


@dataclass
class QsResult:
    value: float
    argmin_angles: np.ndarray  # (n, 2) array of (theta, phi)
    restarts_used: int


def qs(rho: np.ndarray, starts_per_round: int = 20, max_rounds: int = 5) -> QsResult:
    """Relative entropy of quantumness, minimized over product bases.

    Rounds of `starts_per_round` Halton starts of a Nelder-Mead refinement
    run until a full round improves the best value by less than 1e-9.
    """
    n = check_density_matrix(rho)
    if n > 4:
        raise ValueError("quantumness search limited to n <= 4 qubits")
    base_entropy = von_neumann_entropy(rho)

    def objective(x):
        basis = product_basis_unitary(x.reshape(n, 2))
        return _shannon(np.clip(_basis_probabilities(rho, basis), 0.0, None))

    lower = np.zeros(2 * n)
    upper = np.tile([math.pi, 2.0 * math.pi], n)
    best_x = None
    best_val = np.inf
    used = 0
    for round_idx in range(max_rounds):
        incumbent = best_val
        points = halton(starts_per_round, 2 * n, skip=round_idx * starts_per_round)
        for point in points:
            x0 = lower + point * (upper - lower)
            x, val = nelder_mead(objective, x0, xatol=1e-9, fatol=1e-12)
            used += 1
            if val < best_val - 1e-15:
                best_val = val
                best_x = x
        if incumbent - best_val < 1e-9:
            break
    value = max(0.0, best_val - base_entropy)
    return QsResult(value=value, argmin_angles=best_x.reshape(n, 2), restarts_used=used)


def qs_ordering_chain(n_max: int, p: float) -> list[float]:
    """Quantumness of the dephased transversal GHZ family, n = 2..n_max."""
    if n_max > 4:
        raise ValueError("chain limited to n_max <= 4")
    from . import states  # local import to avoid a cycle at module load

    values = []
    for n in range(2, n_max + 1):
        rho = dephasing_channel(states.ghz_transversal(n), p)
        values.append(qs(rho).value)
    return values


def measurement_composite(rho: np.ndarray, k: int) -> np.ndarray:
    """State after a non-selective Z measurement of qubit k (kept in place).

    Equals sum_b P_b rho P_b, i.e. full dephasing of qubit k, so it is a
    local unital map of rho.
    """
    return dephasing_channel(rho, 1.0, k)


def branch_decomposition_check(n: int, p: float, tol: float = 5e-3) -> dict:
    """Verify the measured-composite quantumness identities on n+1 qubits.

    For the dephased transversal GHZ on n+1 qubits, a Z measurement leaves
    1/2 (|0><0| x rho_plus + |1><1| x rho_minus) with rho_{+-} the dephased
    (n-qubit) transversal states of either sign.  Checks, within `tol`:
    the composite quantumness equals the branch average, and the two
    branches agree (they are local-unitarily equivalent).
    """
    if n > 3:
        raise ValueError("composite would exceed 4 qubits")
    from . import states

    rho_plus = dephasing_channel(states.ghz_transversal(n, +1), p)
    rho_minus = dephasing_channel(states.ghz_transversal(n, -1), p)
    ket0 = np.zeros((2, 2), dtype=complex)
    ket0[0, 0] = 1.0
    ket1 = np.zeros((2, 2), dtype=complex)
    ket1[1, 1] = 1.0
    composite = 0.5 * (np.kron(ket0, rho_plus) + np.kron(ket1, rho_minus))

    q_composite = qs(composite).value
    q_plus = qs(rho_plus).value
    q_minus = qs(rho_minus).value
    average = 0.5 * (q_plus + q_minus)
    return {
        "q_composite": q_composite,
        "q_plus": q_plus,
        "q_minus": q_minus,
        "average_matches": abs(q_composite - average) <= tol,
        "branches_match": abs(q_plus - q_minus) <= tol,
    }
