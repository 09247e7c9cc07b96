"""Negativity of one-vs-rest cuts for noisy GHZ-type and graph-state families.

Convention: N(rho) = ||rho^{T_A}||_1 - 1, i.e. twice the absolute sum of the
negative partial-transpose eigenvalues, which is 1 for a pure GHZ state
across any one-vs-rest cut.
"""

from __future__ import annotations

import math

import numpy as np

from . import states
from ._optim import nelder_mead
from .channels import NoiseParams, dephasing_channel, product_channel
from .linalg import (
    apply_single_qubit_vec,
    bloch_rotation,
    num_qubits,
    partial_transpose,
    trace_norm,
)

MAX_BRUTE_QUBITS = 12


def negativity_bruteforce(rho: np.ndarray, cut) -> float:
    """||rho^{T_A}||_1 - 1 from a dense partial-transpose eigensolve."""
    n = num_qubits(rho.shape[0])
    if n > MAX_BRUTE_QUBITS:
        raise ValueError(f"brute force limited to {MAX_BRUTE_QUBITS} qubits")
    part = {int(cut)} if np.isscalar(cut) else set(int(k) for k in cut)
    value = trace_norm(partial_transpose(rho, part)) - 1.0
    return max(0.0, value)


def block_weights(n: int, mu: int, params: NoiseParams) -> tuple[float, float]:
    """Coherence block weights at flip weight mu of the noisy transversal GHZ.

    The noisy state is GHZ-diagonal, so the one-vs-rest partial transpose
    splits into 2x2 blocks labelled by the Hamming weight mu of the
    flipped-bit pattern; these two weight families determine every block's
    eigenvalues.  The plus family dominates the minus family termwise.
    """
    half = params.p / 2.0
    out = []
    for sign in (+1.0, -1.0):
        coh = half * params.alpha_z + sign * half * params.alpha_y
        pop = (1.0 - half) + sign * half * params.alpha_x
        out.append(coh**mu * pop ** (n - mu) + coh ** (n - mu) * pop**mu)
    return out[0], out[1]


def negativity_closed_form(n: int, params: NoiseParams) -> float:
    """One-vs-rest negativity of the noisy transversal GHZ state, in closed form.

    N = sum_{mu=0}^{floor((n-1)/2)} C(n-1, mu) ( max[0, f-_{mu+1} - f+_mu]
                                               + max[0, f-_mu - f+_{mu+1}] )

    with (f+_mu, f-_mu) the block weights above.  Agrees with the brute-force
    partial transpose of the channel output across every one-vs-rest cut.
    """
    if n < 2:
        raise ValueError("closed form needs n >= 2")
    total = 0.0
    for mu in range((n - 1) // 2 + 1):
        f_plus_mu, f_minus_mu = block_weights(n, mu, params)
        f_plus_next, f_minus_next = block_weights(n, mu + 1, params)
        term = max(0.0, f_minus_next - f_plus_mu) + max(0.0, f_minus_mu - f_plus_next)
        total += math.comb(n - 1, mu) * term
    return total


def negativity_dephasing(n: int, p: float) -> float:
    """Negativity of the transversal GHZ under exact phase damping.

    N = (1-p) sum_{mu=0}^{floor(m/2)} C(m, mu) [ a^mu b^(m-mu) - a^(m-mu) b^mu ]

    with m = n-1, a = p/2, b = 1-p/2.  Each binomial term is evaluated as
    exp(lgamma(m+1) - lgamma(mu+1) - lgamma(m-mu+1) + mu log a + (m-mu) log b)
    so the sum stays finite for n up to 1e4; the two bracket terms are
    exponentiated separately and subtracted in linear space, where they are
    well separated for mu below m/2.
    """
    if n < 2:
        raise ValueError("needs n >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    m = n - 1
    log_a = math.log(p / 2.0)
    log_b = math.log(1.0 - p / 2.0)
    lg = math.lgamma
    terms = []
    for mu in range(m // 2 + 1):
        log_binom = lg(m + 1) - lg(mu + 1) - lg(m - mu + 1)
        first = math.exp(log_binom + mu * log_a + (m - mu) * log_b)
        second = math.exp(log_binom + (m - mu) * log_a + mu * log_b)
        terms.append(first - second)
    # the bracket sum is at most 1; clip float accumulation (~1e-13 at n ~ 4e3)
    return (1.0 - p) * min(1.0, max(0.0, math.fsum(terms)))


def weak_noise_approx(n: int, p: float, epsilon: float) -> float:
    """Small-p approximation (1-p)^(n eps + 1 - eps) of the closed form."""
    return (1.0 - p) ** (n * epsilon + 1.0 - epsilon)


def asymptotic_gap(n: int, p: float, exact: bool = False):
    """Distance (1-p) - N of the dephasing negativity from its large-n value.

    The gap equals (1-p) times the upper binomial tail (minus the central
    term for even n-1), which underflows float64 already around n ~ 1000 for
    small p.  It is therefore evaluated with mpmath and only converted to
    float on return; pass exact=True to get the mpf itself, e.g. for strict
    monotonicity checks across doublings of n.
    """
    import mpmath

    if n < 2:
        raise ValueError("needs n >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if p == 1.0:
        return mpmath.mpf(0) if exact else 0.0
    m = n - 1
    with mpmath.workdps(60):
        a = mpmath.mpf(p) / 2
        b = 1 - mpmath.mpf(p) / 2
        start = m // 2 + 1 if n % 2 == 0 else m // 2
        tail = mpmath.mpf(0)
        for mu in range(start, m + 1):
            tail += mpmath.binomial(m, mu) * a**mu * b ** (m - mu)
        if n % 2 == 0:
            gap = (1 - mpmath.mpf(p)) * 2 * tail
        else:
            center = mpmath.binomial(m, m // 2) * a ** (m // 2) * b ** (m // 2)
            gap = (1 - mpmath.mpf(p)) * (2 * tail - center)
        gap = max(gap, mpmath.mpf(0))
    return gap if exact else float(gap)


# ---------------------------------------------------------------------------
# ordering chains
# ---------------------------------------------------------------------------


def ordering_chain(noisy_states, cuts) -> list[float]:
    """Brute-force negativities of a family of noisy states, in family order.

    `cuts` is a single qubit index applied to every member or one index per
    member.  Robustness laws assert the returned sequence is non-decreasing;
    use is_non_decreasing for that check.
    """
    noisy_states = list(noisy_states)
    if np.isscalar(cuts):
        cuts = [int(cuts)] * len(noisy_states)
    if len(cuts) != len(noisy_states):
        raise ValueError("need one cut per state")
    return [negativity_bruteforce(rho, cut) for rho, cut in zip(noisy_states, cuts)]


def is_non_decreasing(values, slack: float = 1e-9) -> bool:
    return all(b >= a - slack for a, b in zip(values, values[1:]))


def transversal_ghz_chain(n_max: int, p: float) -> list[float]:
    """Negativity chain of dephased transversal GHZ states for n = 2..n_max."""
    values = []
    for n in range(2, n_max + 1):
        rho = dephasing_channel(states.ghz_transversal(n), p)
        values.append(negativity_bruteforce(rho, 0))
    return values


def graph_chain(g: states.Graph, p: float, visibility: float = 1.0) -> list[float]:
    """Negativity chain of the encoded family of a graph under phase damping.

    Members come from transversal_graph_family (sizes 2..n); each is mixed
    with global white noise at the given visibility before the channel acts.
    """
    values = []
    for member in states.transversal_graph_family(g):
        rho = states.add_white_noise(member.state, visibility)
        rho = dephasing_channel(rho, p)
        values.append(negativity_bruteforce(rho, member.cut_qubit))
    return values


def bare_ghz_chain(n_max: int, p: float) -> list[float]:
    """Same chain for unencoded GHZ states; decreasing in n, shown as contrast."""
    values = []
    for n in range(2, n_max + 1):
        rho = dephasing_channel(states.ghz(n), p)
        values.append(negativity_bruteforce(rho, 0))
    return values


# ---------------------------------------------------------------------------
# encoding-basis scan
# ---------------------------------------------------------------------------


def _rotated_ghz_negativity(n: int, p: float, theta: float, phi: float) -> float:
    u = bloch_rotation(theta, phi)
    vec = states._ghz_vector(n)
    for k in range(n):
        vec = apply_single_qubit_vec(vec, u, k)
    rho = dephasing_channel(np.outer(vec, vec.conj()), p)
    return negativity_bruteforce(rho, 0)


def basis_scan(n: int, p: float, grid: int = 64) -> tuple[tuple[float, float], float]:
    """Maximize the dephased negativity over a shared single-qubit encoding basis.

    The GHZ state is rotated by U(theta, phi)^(x n) before phase damping; a
    uniform (theta, phi) grid is refined with Nelder-Mead from the five best
    grid points.  Returns ((theta, phi), best_negativity).  The Hadamard
    point (pi/2, 0) attains the maximum, which equals the transversal value.
    """
    if n > 5:
        raise ValueError("scan limited to n <= 5")
    thetas = np.linspace(0.0, math.pi, grid)
    phis = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    scored = []
    for theta in thetas:
        for phi in phis:
            scored.append((_rotated_ghz_negativity(n, p, theta, phi), theta, phi))
    scored.sort(key=lambda item: (-item[0], item[1], item[2]))

    def objective(x):
        return -_rotated_ghz_negativity(n, p, x[0], x[1])

    best_angles = (scored[0][1], scored[0][2])
    best_value = scored[0][0]
    for _, theta, phi in scored[:5]:
        x, fval = nelder_mead(objective, (theta, phi), xatol=1e-8, fatol=1e-12)
        if -fval > best_value + 1e-15:
            best_value = -fval
            best_angles = (float(x[0]), float(x[1]))
    return best_angles, best_value


def transversal_ghz_negativity_bruteforce(n: int, params: NoiseParams, cut=0) -> float:
    """Oracle counterpart of the closed form: channel + partial transpose."""
    rho = product_channel(states.ghz_transversal(n), params)
    return negativity_bruteforce(rho, cut)
