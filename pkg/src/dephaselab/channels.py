"""Local Pauli noise channels and their N-fold tensor composition.

The single-qubit channel with strength p and axis weights (ax, ay, az),
ax + ay + az = 1, acts as

    E(rho) = (1 - p/2) rho + (p/2) (ax X rho X + ay Y rho Y + az Z rho Z).

The 1/2 factors place the exact fully-dephasing point of the az = 1 channel
at p = 1: coherences in the Z eigenbasis of the noisy qubit are scaled by
exactly 1 - p, so p doubles as a time parametrization (p = 0 initial,
p = 1 asymptotic).

Kraus form: K0 = sqrt(1 - p/2) I, K1 = sqrt(p ax / 2) X,
K2 = sqrt(p ay / 2) Y, K3 = sqrt(p az / 2) Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    check_density_matrix,
    conjugate_single_qubit,
)

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class NoiseParams:
    """Strength p and Pauli-axis weights of the local noise channel.

    The weights must sum to 1 within 1e-12; inputs violating this are
    rejected rather than renormalized, so configuration errors surface.
    """

    p: float
    alpha_x: float
    alpha_y: float
    alpha_z: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"noise strength p={self.p} outside [0, 1]")
        for name in ("alpha_x", "alpha_y", "alpha_z"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name}={val} outside [0, 1]")
        total = self.alpha_x + self.alpha_y + self.alpha_z
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"axis weights sum to {total}, not 1")

    @property
    def dephasing_deviation(self) -> float:
        """Deviation epsilon = alpha_x + alpha_y from exact dephasing."""
        return self.alpha_x + self.alpha_y

    @classmethod
    def dephasing(cls, p: float) -> "NoiseParams":
        return cls(p, 0.0, 0.0, 1.0)

    @classmethod
    def from_deviation(cls, p: float, epsilon: float) -> "NoiseParams":
        """Deviation epsilon split equally between the X and Y axes."""
        return cls(p, epsilon / 2.0, epsilon / 2.0, 1.0 - epsilon)

    @classmethod
    def isotropic(cls, p: float) -> "NoiseParams":
        return cls(p, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


def kraus_operators(params: NoiseParams) -> list[np.ndarray]:
    """The four Kraus operators of the single-qubit channel."""
    half = params.p / 2.0
    return [
        math.sqrt(1.0 - half) * np.eye(2, dtype=complex),
        math.sqrt(half * params.alpha_x) * PAULI_X,
        math.sqrt(half * params.alpha_y) * PAULI_Y,
        math.sqrt(half * params.alpha_z) * PAULI_Z,
    ]


def pauli_channel(rho: np.ndarray, k: int, params: NoiseParams) -> np.ndarray:
    """Apply the local Pauli channel to qubit k of a density matrix."""
    check_density_matrix(rho)
    half = params.p / 2.0
    out = (1.0 - half) * rho
    for weight, sigma in (
        (params.alpha_x, PAULI_X),
        (params.alpha_y, PAULI_Y),
        (params.alpha_z, PAULI_Z),
    ):
        if weight > 0.0:
            out = out + (half * weight) * conjugate_single_qubit(rho, sigma, k)
    return out


def product_channel(rho: np.ndarray, params: NoiseParams) -> np.ndarray:
    """Apply the channel to every qubit with identical parameters.

    Qubits are processed in ascending order; single-qubit channels on
    distinct qubits commute, so the order is irrelevant (and asserted in
    the test suite).
    """
    n = check_density_matrix(rho)
    out = rho
    for k in range(n):
        out = pauli_channel(out, k, params)
    return out


def dephasing_channel(rho: np.ndarray, p: float, k: int | None = None) -> np.ndarray:
    """Phase damping (az = 1) on qubit k, or on every qubit when k is None."""
    params = NoiseParams.dephasing(p)
    if k is None:
        return product_channel(rho, params)
    return pauli_channel(rho, k, params)
