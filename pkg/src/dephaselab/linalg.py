"""Dense complex linear algebra for multi-qubit density matrices.

Qubit convention is big-endian throughout the package: qubit 0 is the most
significant bit of a computational-basis index, so |b0 b1 ... b_{n-1}> sits
at index sum_k b_k 2^(n-1-k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIG_HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-10
SUPPORT_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


class DimensionError(ValueError):
    """Raised when operator and state dimensions are incompatible."""


def num_qubits(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension that must be 2**n."""
    n = dim.bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more operators, folded left to right."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def bloch_rotation(theta: float, phi: float) -> np.ndarray:
    """Single-qubit rotation exp(-i phi Z/2) exp(-i theta Y/2).

    Maps |0> to the Bloch direction (sin theta cos phi, sin theta sin phi,
    cos theta); (theta, phi) = (pi/2, 0) gives the Hadamard direction.
    """
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    ry = np.array([[c, -s], [s, c]], dtype=complex)
    ez = np.exp(-0.5j * phi)
    rz = np.array([[ez, 0.0], [0.0, np.conj(ez)]], dtype=complex)
    return rz @ ry


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return hermiticity_defect(a) <= tol


def check_density_matrix(rho: np.ndarray, tol: float = HERMITICITY_TOL) -> int:
    """Validate shape, Hermiticity and unit trace; returns the qubit count.

    The positive-semidefiniteness of the spectrum is not recomputed here
    (it would need a full eigensolve per call); callers that care use
    hermitian_eig explicitly.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {rho.shape}")
    n = num_qubits(rho.shape[0])
    if hermiticity_defect(rho) > tol:
        raise ValueError("state is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL or abs(np.trace(rho).imag) > TRACE_TOL:
        raise ValueError("state trace differs from 1 beyond tolerance")
    return n


def _apply_left(mat: np.ndarray, u: np.ndarray, k: int, n: int) -> np.ndarray:
    dim = 2**n
    resh = mat.reshape(2**k, 2, -1)
    return np.einsum("ab,ibj->iaj", u, resh).reshape(dim, dim)


def _apply_right_dagger(mat: np.ndarray, u: np.ndarray, k: int, n: int) -> np.ndarray:
    dim = 2**n
    resh = mat.reshape(dim, 2**k, 2, -1)
    return np.einsum("ribj,ab->riaj", resh, u.conj()).reshape(dim, dim)


def conjugate_single_qubit(rho: np.ndarray, u: np.ndarray, k: int) -> np.ndarray:
    """U_k rho U_k^dagger for an arbitrary 2x2 operator u on qubit k."""
    n = num_qubits(rho.shape[0])
    if not 0 <= k < n:
        raise DimensionError(f"qubit index {k} out of range for {n} qubits")
    return _apply_right_dagger(_apply_left(rho, u, k, n), u, k, n)


def apply_single_qubit(rho: np.ndarray, u: np.ndarray, k: int) -> np.ndarray:
    """Conjugate a state by a single-qubit unitary without forming I x u x I.

    The unitary is checked to 1e-12; use conjugate_single_qubit for
    non-unitary 2x2 operators.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise DimensionError("single-qubit operator must be 2x2")
    if np.max(np.abs(u.conj().T @ u - np.eye(2))) > 1e-12:
        raise ValueError("operator is not unitary within 1e-12")
    return conjugate_single_qubit(rho, u, k)


def apply_single_qubit_vec(vec: np.ndarray, u: np.ndarray, k: int) -> np.ndarray:
    """Apply a 2x2 operator to qubit k of a state vector."""
    n = num_qubits(vec.shape[0])
    resh = vec.reshape(2**k, 2, -1)
    return np.einsum("ab,ibj->iaj", np.asarray(u, dtype=complex), resh).reshape(-1)


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Trace out all qubits not in `keep`, preserving big-endian order.

    Parameters
    ----------
    rho : 2^n x 2^n density matrix.
    keep : nonempty iterable of qubit indices to retain.
    """
    n = num_qubits(rho.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"keep set {keep} out of range for {n} qubits")
    tensor = rho.reshape([2] * (2 * n))
    row_labels = list(range(n))
    col_labels = [n + k if k in keep else k for k in range(n)]
    out_labels = keep + [n + k for k in keep]
    out = np.einsum(tensor, row_labels + col_labels, out_labels)
    d = 2 ** len(keep)
    return out.reshape(d, d)


def partial_transpose(rho: np.ndarray, part) -> np.ndarray:
    """Transpose the tensor factors in `part`; exact involution by construction."""
    n = num_qubits(rho.shape[0])
    part = set(int(k) for k in part)
    if not part:
        raise ValueError("part must be a nonempty subset")
    if any(k < 0 or k >= n for k in part):
        raise DimensionError(f"part {sorted(part)} out of range for {n} qubits")
    if len(part) == n:
        raise ValueError("part must be a proper subset of the qubits")
    perm = list(range(2 * n))
    for k in part:
        perm[k], perm[n + k] = perm[n + k], perm[k]
    dim = 2**n
    return rho.reshape([2] * (2 * n)).transpose(perm).reshape(dim, dim)


@dataclass
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    eigenvalues is real and ascending; eigenvectors holds the matching
    orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(h: np.ndarray) -> Spectrum:
    """Eigendecompose a Hermitian matrix (checked to 1e-10)."""
    h = np.asarray(h, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(h))))
    if hermiticity_defect(h) > EIG_HERMITICITY_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(h)
    return Spectrum(eigenvalues=vals, eigenvectors=vecs)


def trace_norm(a: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    a = np.asarray(a, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(a))))
    if hermiticity_defect(a) > EIG_HERMITICITY_TOL * scale:
        raise ValueError("trace_norm expects a Hermitian matrix")
    return float(np.sum(np.abs(np.linalg.eigvalsh(a))))


def _entropy_from_probs(probs: np.ndarray) -> float:
    probs = probs[probs > 0.0]
    return float(-np.sum(probs * np.log2(probs)))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy -sum lambda log2 lambda in bits, with 0 log 0 = 0."""
    check_density_matrix(rho)
    vals = np.linalg.eigvalsh(rho)
    if vals[0] < -PSD_TOL:
        raise ValueError(f"negative eigenvalue {vals[0]:.3e} beyond tolerance")
    return _entropy_from_probs(np.clip(vals, 0.0, None))


def relative_entropy(rho: np.ndarray, xi: np.ndarray) -> float:
    """Relative entropy S(rho || xi) = Tr rho log2 rho - Tr rho log2 xi, in bits.

    If rho has weight above 1e-12 outside the support of xi (eigenvalues of
    xi below 1e-12), the entropy is infinite; math.inf is returned rather
    than raising.
    """
    check_density_matrix(rho)
    check_density_matrix(xi)
    if rho.shape != xi.shape:
        raise DimensionError("states must share a dimension")
    xi_vals, xi_vecs = np.linalg.eigh(xi)
    weights = np.real(np.einsum("ij,jk,ki->i", xi_vecs.conj().T, rho, xi_vecs))
    on_null = weights[xi_vals <= SUPPORT_TOL]
    if on_null.size and float(np.max(on_null)) > SUPPORT_TOL:
        return math.inf
    supported = xi_vals > SUPPORT_TOL
    cross = float(-np.sum(weights[supported] * np.log2(xi_vals[supported])))
    rho_vals = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    value = cross - _entropy_from_probs(rho_vals)
    return max(0.0, value)
