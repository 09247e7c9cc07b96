import math

import numpy as np
import pytest

from dephaselab import nonlocality as nl
from dephaselab.channels import dephasing_channel
from dephaselab.states import ghz, ghz_transversal

from _helpers import random_density_matrix

CHSH_SETTINGS = np.array(
    [
        [[1, 0, 0], [0, 1, 0]],
        [
            [1 / math.sqrt(2), 1 / math.sqrt(2), 0],
            [1 / math.sqrt(2), -1 / math.sqrt(2), 0],
        ],
    ],
    dtype=float,
)


class TestMkOperator:
    def test_chsh_spectral_radius(self):
        op = nl.mk_operator(CHSH_SETTINGS)
        radius = max(abs(v) for v in np.linalg.eigvalsh(op))
        assert abs(radius - math.sqrt(2)) < 1e-12

    def test_single_party_base_case(self):
        op = nl.mk_operator(np.array([[[0, 0, 1], [1, 0, 0]]], dtype=float))
        assert np.allclose(op, nl.observable([0, 0, 1]), atol=1e-15)
        assert max(abs(v) for v in np.linalg.eigvalsh(op)) == pytest.approx(1.0)

    def test_prime_swap_symmetry(self):
        rng = np.random.default_rng(61)
        s = rng.normal(size=(3, 2, 3))
        s /= np.linalg.norm(s, axis=2, keepdims=True)
        _, bp = nl._mk_operator_pair(s)
        swapped = s[:, ::-1, :]
        assert np.allclose(nl.mk_operator(swapped), bp, atol=1e-12)

    def test_hermitian(self):
        rng = np.random.default_rng(62)
        s = rng.normal(size=(4, 2, 3))
        s /= np.linalg.norm(s, axis=2, keepdims=True)
        op = nl.mk_operator(s)
        assert np.max(np.abs(op - op.conj().T)) < 1e-12

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            nl.mk_operator(np.ones((2, 2, 3)))


class TestAlgebraicMax:
    def test_known_values(self):
        assert nl.mk_algebraic_max(1) == 1.0
        assert nl.mk_algebraic_max(2) == 2.0
        assert nl.mk_algebraic_max(3) == 2.0

    def test_growth_pattern(self):
        # even n: 2^(n/2); odd n: 2^((n-1)/2)
        for n in range(1, 9):
            expected = 2.0 ** (n // 2)
            assert nl.mk_algebraic_max(n) == pytest.approx(expected, abs=1e-12)

    def test_quantum_value_below_algebraic(self):
        for n in (2, 3, 4):
            assert 2 ** ((n - 1) / 2) <= nl.mk_algebraic_max(n) + 1e-12


class TestQuantumValue:
    def test_fast_path_matches_operator_trace(self):
        rng = np.random.default_rng(63)
        rho = random_density_matrix(3, rng)
        tensor = nl._correlation_tensor(rho, 3)
        coeffs = nl._mk_coefficients(3)
        for _ in range(4):
            s = rng.normal(size=(3, 2, 3))
            s /= np.linalg.norm(s, axis=2, keepdims=True)
            assert abs(nl._fast_mk_value(tensor, coeffs, s) - nl.mk_expectation(rho, s)) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_pure_ghz_value(self, n):
        beta = nl.mk_quantum_value(ghz(n))
        assert abs(beta - 2 ** ((n - 1) / 2)) < 1e-6

    def test_fixed_settings_evaluation(self):
        value = nl.mk_quantum_value(ghz(2), optimize=False, settings=CHSH_SETTINGS)
        assert abs(value - math.sqrt(2)) < 1e-12

    def test_fully_dephased_transversal_no_violation(self):
        rho = dephasing_channel(ghz_transversal(3), 1.0)
        assert nl.mk_quantum_value(rho) <= 1.0 + 1e-9

    def test_transversal_violation_at_strong_noise(self):
        rho = dephasing_channel(ghz_transversal(3), 0.9)
        assert nl.mk_quantum_value(rho) > 1.0

    def test_tsirelson_cap(self):
        rng = np.random.default_rng(64)
        for n in (2, 3):
            rho = random_density_matrix(n, rng)
            assert nl.mk_quantum_value(rho) <= 2 ** ((n - 1) / 2) + 1e-9

    def test_monotone_in_noise_and_transversal_dominance(self):
        grid = (0.0, 0.3, 0.6, 0.9)
        for n in (2, 3):
            bare = [nl.mk_quantum_value(dephasing_channel(ghz(n), p)) for p in grid]
            trans = [nl.mk_quantum_value(dephasing_channel(ghz_transversal(n), p)) for p in grid]
            assert all(b <= a + 1e-6 for a, b in zip(bare, bare[1:]))
            assert all(b <= a + 1e-6 for a, b in zip(trans, trans[1:]))
            assert all(t >= b - 1e-9 for t, b in zip(trans, bare))


class TestSuccessProbability:
    def test_chsh_game_optimum(self):
        value = nl.success_probability(math.sqrt(2), 2.0)
        assert abs(value - (1 + math.sqrt(2) / 2) / 2) < 1e-12

    def test_classical_two_parties(self):
        assert nl.success_probability(1.0, 2.0) == pytest.approx(0.75)

    def test_saturated(self):
        assert nl.success_probability(2.0, 2.0) == 1.0

    def test_bounds_enforced(self):
        with pytest.raises(ValueError):
            nl.success_probability(3.0, 2.0)

    def test_ceiling(self):
        assert nl.classical_ceiling(2.0) == pytest.approx(0.75)
