import math

import numpy as np
import pytest
from scipy.linalg import expm, sqrtm

from dephaselab.channels import dephasing_channel
from dephaselab.linalg import PAULI_Z, kron
from dephaselab.metrology import (
    cramer_rao,
    phase_evolve,
    qfi_bare_closed,
    qfi_spectral,
    qfi_transversal_closed,
    transversal_probe,
)
from dephaselab.states import ghz

from _helpers import random_density_matrix


def collective_z(n):
    total = np.zeros((2**n, 2**n), dtype=complex)
    for k in range(n):
        ops = [np.eye(2, dtype=complex)] * n
        ops[k] = PAULI_Z
        total += kron(*ops)
    return total


def plus_product(n):
    v = np.full(2**n, 2.0 ** (-n / 2), dtype=complex)
    return np.outer(v, v)


class TestPhaseEvolve:
    def test_zero_phase(self):
        rng = np.random.default_rng(51)
        rho = random_density_matrix(2, rng)
        assert np.allclose(phase_evolve(rho, 0.0), rho, atol=1e-15)

    def test_diagonal_states_invariant(self):
        rho = np.diag([0.5, 0.2, 0.2, 0.1]).astype(complex)
        assert np.allclose(phase_evolve(rho, 1.3), rho, atol=1e-14)

    def test_against_matrix_exponential_oracle(self):
        phi = math.pi / 6
        rho = ghz(3)
        u = expm(-1j * phi * collective_z(3))
        assert np.allclose(phase_evolve(rho, phi), u @ rho @ u.conj().T, atol=1e-12)


class TestSpectralQfi:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_pure_ghz_reaches_heisenberg(self, n):
        assert abs(qfi_spectral(ghz(n)).value - 4 * n**2) < 1e-10

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_plus_product_reaches_classical_limit(self, n):
        assert abs(qfi_spectral(plus_product(n)).value - 4 * n) < 1e-10

    @pytest.mark.parametrize("n", [2, 4, 6])
    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_dephased_ghz_closed_form(self, n, p):
        rho = dephasing_channel(ghz(n), p)
        assert abs(qfi_spectral(rho).value - qfi_bare_closed(n, p).value) < 1e-8

    def test_phase_independence(self):
        rho = dephasing_channel(ghz(3), 0.4)
        a = qfi_spectral(rho).value
        b = qfi_spectral(phase_evolve(rho, 0.7)).value
        assert abs(a - b) < 1e-8

    def test_against_finite_difference_oracle(self):
        # Bures fidelity drop around phi = 0 at step 1e-5
        rho = dephasing_channel(ghz(3), 0.35)
        dphi = 1e-5
        shifted = phase_evolve(rho, dphi)
        root = sqrtm(rho)
        inner = sqrtm(root @ shifted @ root)
        fidelity = np.real(np.trace(inner)) ** 2
        fd_value = 8.0 * (1.0 - math.sqrt(fidelity)) / dphi**2
        spectral = qfi_spectral(rho).value
        assert abs(fd_value - spectral) / spectral < 1e-3


class TestClosedForms:
    def test_bare_endpoints(self):
        assert qfi_bare_closed(7, 0.0).value == 4 * 49
        assert qfi_bare_closed(7, 1.0).value == 0.0

    def test_bare_formula_value(self):
        assert abs(qfi_bare_closed(10, 0.1).value - 400 * 0.9**20) < 1e-12

    def test_transversal_endpoints(self):
        assert qfi_transversal_closed(6, 0.0).value == 4 * 36
        assert abs(qfi_transversal_closed(6, 1.0).value - 24.0) < 1e-12

    @pytest.mark.parametrize("n", [2, 4, 6])
    @pytest.mark.parametrize("p", [0.0, 0.3, 0.7, 1.0])
    def test_transversal_sandwich_matches_spectral(self, n, p):
        probe = transversal_probe(ghz(n), p)
        assert abs(qfi_spectral(probe).value - qfi_transversal_closed(n, p).value) < 1e-8

    def test_transversal_stays_above_classical_limit(self):
        n = 5
        for p in np.linspace(0.0, 0.99, 34):
            assert qfi_transversal_closed(n, float(p)).value > 4 * n

    def test_classical_limit_crossing_moves_left_with_n(self):
        def crossing(n):
            grid = np.linspace(0.0, 1.0, 2001)
            values = 4 * n**2 * (1 - grid) ** (2 * n)
            return grid[np.argmax(values < 4 * n)]

        points = [crossing(n) for n in (2, 4, 8, 16)]
        assert all(b < a for a, b in zip(points, points[1:]))

    def test_monotone_degradation(self):
        grid = np.linspace(0.0, 1.0, 21)
        for n in (3, 6):
            bare = [qfi_bare_closed(n, float(p)).value for p in grid]
            trans = [qfi_transversal_closed(n, float(p)).value for p in grid]
            assert all(b <= a + 1e-12 for a, b in zip(bare, bare[1:]))
            assert all(b <= a + 1e-12 for a, b in zip(trans, trans[1:]))


class TestCramerRao:
    def test_heisenberg_bound(self):
        assert abs(cramer_rao(qfi_bare_closed(4, 0.0), 1) - 1.0 / 16.0) < 1e-15

    def test_run_scaling(self):
        f = qfi_transversal_closed(5, 0.5)
        assert abs(cramer_rao(f, 4) - cramer_rao(f, 1) / 2.0) < 1e-15

    def test_value(self):
        f = qfi_transversal_closed(5, 0.5)
        assert abs(cramer_rao(f, 100) - 1.0 / (2.0 * math.sqrt(100 * f.value))) < 1e-15

    def test_zero_information_is_infinite(self):
        assert cramer_rao(qfi_bare_closed(3, 1.0), 10) == math.inf
