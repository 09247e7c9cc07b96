"""Phase-estimation resources: collective-Z phase evolution and Fisher information.

The generator is G = sum_k Z_k, so the evolution exp(-i phi G) is diagonal
with integer charges n - 2 popcount(b).  For such unitary families the
eigenvalues of the probe are phase-independent and the quantum Fisher
information reduces to

    F = sum_{j<k} 4 (p_j - p_k)^2 / (p_j + p_k) |<w_j| G |w_k>|^2

over eigenpairs of the probe state, skipping pairs with p_j + p_k below
1e-12.  Separable probes obey F <= 4n; the Heisenberg limit is 4n^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import dephasing_channel
from .linalg import HADAMARD, apply_single_qubit, check_density_matrix, num_qubits

DEGENERACY_TOL = 1e-12


def _charges(n: int) -> np.ndarray:
    idx = np.arange(2**n)
    pop = np.zeros(2**n, dtype=np.int64)
    for k in range(n):
        pop += (idx >> k) & 1
    return (n - 2 * pop).astype(float)


def phase_evolve(rho: np.ndarray, phi: float) -> np.ndarray:
    """Conjugate by the diagonal unitary exp(-i phi (sum_k Z_k))."""
    n = check_density_matrix(rho)
    u = np.exp(-1j * phi * _charges(n))
    return u[:, None] * rho * u.conj()[None, :]


@dataclass
class FisherValue:
    value: float
    method: str  # spectral | closed_form_bare | closed_form_transversal


def qfi_spectral(rho: np.ndarray) -> FisherValue:
    """Quantum Fisher information of a probe state from its spectrum."""
    n = check_density_matrix(rho)
    vals, vecs = np.linalg.eigh(rho)
    vals = np.clip(vals, 0.0, None)
    charges = _charges(n)
    overlap = vecs.conj().T @ (charges[:, None] * vecs)
    diff = vals[:, None] - vals[None, :]
    total = vals[:, None] + vals[None, :]
    mask = total > DEGENERACY_TOL
    ratio = np.zeros_like(diff)
    ratio[mask] = diff[mask] ** 2 / total[mask]
    fisher = 2.0 * float(np.sum(ratio * np.abs(overlap) ** 2))
    return FisherValue(value=fisher, method="spectral")


def qfi_bare_closed(n: int, p: float) -> FisherValue:
    """Fisher information 4 n^2 (1-p)^(2n) of the dephased GHZ probe."""
    return FisherValue(value=4.0 * n**2 * (1.0 - p) ** (2 * n), method="closed_form_bare")


def qfi_transversal_closed(n: int, p: float) -> FisherValue:
    """Fisher information of the encode/dephase/decode GHZ probe.

    4 n^2 (1-p)^2 + 16 n (1 - p/2)(p/2); equals 4n^2 at p = 0 and the
    separable limit 4n exactly at p = 1.
    """
    value = 4.0 * n**2 * (1.0 - p) ** 2 + 16.0 * n * (1.0 - p / 2.0) * (p / 2.0)
    return FisherValue(value=value, method="closed_form_transversal")


def transversal_probe(rho: np.ndarray, p: float) -> np.ndarray:
    """Hadamard-encode every qubit, dephase, then undo the rotation."""
    n = num_qubits(rho.shape[0])
    out = rho
    for k in range(n):
        out = apply_single_qubit(out, HADAMARD, k)
    out = dephasing_channel(out, p)
    for k in range(n):
        out = apply_single_qubit(out, HADAMARD, k)
    return out


def cramer_rao(f: FisherValue, nu: int) -> float:
    """Phase-deviation bound 1 / (2 sqrt(nu F)); infinite for zero information."""
    if nu < 1:
        raise ValueError("nu must be a positive integer")
    if f.value <= 0.0:
        return math.inf
    return 1.0 / (2.0 * math.sqrt(nu * f.value))
