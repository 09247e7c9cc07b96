"""Mermin-Klyshko operators, quantum values and the CCP success probability.

The operator recursion, normalized so the classical bound is 1, is

    B_1 = A_1,
    B_k = 1/2 B_{k-1} (A_k + A'_k) + 1/2 B'_{k-1} (A_k - A'_k),

with B' the same polynomial with primed and unprimed settings swapped on
every party.  Quantum states reach at most 2^((n-1)/2); expanding B_n into
full-body correlator monomials and summing absolute coefficients gives the
no-signalling (algebraic) maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optim import nelder_mead
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, check_density_matrix

UNIT_TOL = 1e-12


@dataclass
class BellValue:
    beta_q: float
    beta_nl: float
    classical_bound: float = 1.0


def observable(direction) -> np.ndarray:
    """a . sigma for a unit Bloch vector a."""
    a = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(a) - 1.0) > UNIT_TOL:
        raise ValueError("measurement direction must be a unit vector")
    return a[0] * PAULI_X + a[1] * PAULI_Y + a[2] * PAULI_Z


def _validated_settings(settings) -> np.ndarray:
    s = np.asarray(settings, dtype=float)
    if s.ndim != 3 or s.shape[1:] != (2, 3):
        raise ValueError("settings must have shape (n, 2, 3)")
    norms = np.linalg.norm(s, axis=2)
    if np.max(np.abs(norms - 1.0)) > UNIT_TOL:
        raise ValueError("all measurement directions must be unit vectors")
    return s


def _mk_operator_pair(settings) -> tuple[np.ndarray, np.ndarray]:
    s = _validated_settings(settings)
    b = observable(s[0, 0])
    bp = observable(s[0, 1])
    for k in range(1, s.shape[0]):
        a = observable(s[k, 0])
        ap = observable(s[k, 1])
        new_b = 0.5 * (np.kron(b, a + ap) + np.kron(bp, a - ap))
        new_bp = 0.5 * (np.kron(bp, ap + a) + np.kron(b, ap - a))
        b, bp = new_b, new_bp
    return b, bp


def mk_operator(settings) -> np.ndarray:
    """Mermin-Klyshko operator for per-party setting pairs, classical bound 1."""
    return _mk_operator_pair(settings)[0]


def mk_algebraic_max(n: int) -> float:
    """Sum of absolute correlator coefficients of B_n (no-signalling maximum).

    Each full-body correlator can be driven to +-1 independently by
    no-signalling boxes, so the expansion coefficients are carried through
    the recursion as vectors over the 2^n setting choices.
    """
    if not 1 <= n <= 12:
        raise ValueError("supported for 1 <= n <= 12")
    b = np.array([1.0, 0.0])  # B_1: weight on (A,), (A',)
    bp = np.array([0.0, 1.0])
    for _ in range(1, n):
        # new party's choice is the leading axis; flattening keeps one
        # coefficient per full setting tuple
        new_b = 0.5 * np.concatenate([b + bp, b - bp])
        new_bp = 0.5 * np.concatenate([bp - b, bp + b])
        b, bp = new_b, new_bp
    return float(np.sum(np.abs(b)))


def mk_expectation(rho: np.ndarray, settings) -> float:
    return float(np.real(np.trace(rho @ mk_operator(settings))))


def _mk_coefficients(n: int) -> np.ndarray:
    """Correlator coefficients of B_n, party 0 slowest, unprimed choice first."""
    b = np.array([1.0, 0.0])
    bp = np.array([0.0, 1.0])
    for _ in range(1, n):
        plus = 0.5 * (b + bp)
        minus = 0.5 * (b - bp)
        new_b = np.stack([plus, minus], axis=-1).reshape(-1)
        new_bp = np.stack([-minus, plus], axis=-1).reshape(-1)
        b, bp = new_b, new_bp
    return b


def _correlation_tensor(rho: np.ndarray, n: int) -> np.ndarray:
    """Full-body correlators Tr(rho sigma_{a_0} x ... x sigma_{a_{n-1}}).

    Returned with one length-3 axis per qubit (X, Y, Z); precomputing it
    turns every Bell-value evaluation into a cheap contraction instead of a
    fresh 2^n operator build.
    """
    paulis = np.stack([PAULI_X, PAULI_Y, PAULI_Z])
    t = rho.reshape([2] * (2 * n))
    for k in range(n):
        # layout: k pauli axes (reversed), kets k.., bras k..
        t = np.tensordot(paulis, t, axes=[[1, 2], [n, k]])
    return np.real(t.transpose(tuple(reversed(range(n)))))


def _fast_mk_value(tensor: np.ndarray, coeffs: np.ndarray, settings: np.ndarray) -> float:
    n = tensor.ndim
    corr = tensor
    for k in range(n):
        corr = np.moveaxis(np.tensordot(settings[k], corr, axes=[[1], [k]]), 0, k)
    return float(np.dot(coeffs, corr.reshape(-1)))


_PLANES = {
    "xy": (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])),
    "yz": (np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0])),
    "zx": (np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0])),
}


def _plane_settings(angles: np.ndarray, plane: str) -> np.ndarray:
    e1, e2 = _PLANES[plane]
    a = np.cos(angles)[:, :, None] * e1 + np.sin(angles)[:, :, None] * e2
    return a


def _sphere_settings(angles: np.ndarray) -> np.ndarray:
    theta = angles[:, :, 0]
    phi = angles[:, :, 1]
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)],
        axis=-1,
    )


def mk_quantum_value(rho: np.ndarray, optimize: bool = True, settings=None) -> float:
    """Largest Tr(rho B_n) found over measurement settings.

    Deterministic search: a coarse identical-settings grid in each of the
    three coordinate planes, simplex refinement of per-party angles in the
    best planes, then a full-sphere refinement (two angles per setting) to
    pick up optima that leave the plane.  With optimize=False, `settings`
    must be supplied and is evaluated directly.
    """
    n = check_density_matrix(rho)
    if n > 8:
        raise ValueError("optimization supported for n <= 8")
    if not optimize:
        if settings is None:
            raise ValueError("settings required when optimize is False")
        return mk_expectation(rho, settings)

    tensor = _correlation_tensor(rho, n)
    coeffs = _mk_coefficients(n)

    def value_of(s):
        return _fast_mk_value(tensor, coeffs, s)

    grid = np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False)
    seeds = []  # (value, plane, per-party angles)
    for plane in ("xy", "yz", "zx"):
        for xi in grid:
            for xi_p in grid:
                angles = np.tile([xi, xi_p], (n, 1))
                seeds.append((value_of(_plane_settings(angles, plane)), plane, angles))
    seeds.sort(key=lambda item: -item[0])

    best_value = seeds[0][0]
    best_settings = _plane_settings(seeds[0][2], seeds[0][1])
    for value, plane, angles in seeds[:3]:
        def objective(x, plane=plane):
            return -value_of(_plane_settings(x.reshape(n, 2), plane))

        x, fval = nelder_mead(objective, angles.reshape(-1), xatol=1e-9, fatol=1e-13)
        if -fval > best_value:
            best_value = -fval
            best_settings = _plane_settings(x.reshape(n, 2), plane)

    # full-sphere pass from the refined optimum plus deterministic tilts,
    # which also catches maxima that sit arbitrarily close to a pole
    theta = np.arccos(np.clip(best_settings[:, :, 2], -1.0, 1.0))
    phi = np.arctan2(best_settings[:, :, 1], best_settings[:, :, 0])
    base = np.stack([theta, phi], axis=-1).reshape(-1)
    starts = [base]
    for tilt in (1e-1, 1e-2, 1e-3):
        starts.append(base + tilt)
        starts.append(base - tilt)

    def sphere_objective(x):
        return -value_of(_sphere_settings(x.reshape(n, 2, 2)))

    for start in starts:
        x, fval = nelder_mead(sphere_objective, start, xatol=1e-9, fatol=1e-13)
        if -fval > best_value:
            best_value = -fval
    return best_value


def success_probability(beta_q: float, beta_nl: float) -> float:
    """CCP success probability (1/2)(1 + beta_q / beta_nl)."""
    if not 0.0 <= beta_q <= beta_nl:
        raise ValueError("need 0 <= beta_q <= beta_nl")
    return 0.5 * (1.0 + beta_q / beta_nl)


def classical_ceiling(beta_nl: float) -> float:
    """Best classical success probability (1/2)(1 + 1 / beta_nl)."""
    return 0.5 * (1.0 + 1.0 / beta_nl)
