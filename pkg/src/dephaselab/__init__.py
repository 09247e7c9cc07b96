"""Desk-scale density-matrix laboratory for noise-robust multipartite correlations.

Builds N-qubit GHZ and graph states, applies local Pauli noise, and
cross-verifies closed-form expressions for negativity, quantum Fisher
information, Mermin-Klyshko violations and the relative entropy of
quantumness against brute-force oracles.
"""

__version__ = "0.1.0"

from .channels import NoiseParams, dephasing_channel, kraus_operators, pauli_channel, product_channel
from .linalg import (
    HADAMARD,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Spectrum,
    apply_single_qubit,
    bloch_rotation,
    hermitian_eig,
    kron,
    partial_trace,
    partial_transpose,
    relative_entropy,
    trace_norm,
    von_neumann_entropy,
)
from .metrology import (
    FisherValue,
    cramer_rao,
    phase_evolve,
    qfi_bare_closed,
    qfi_spectral,
    qfi_transversal_closed,
    transversal_probe,
)
from .negativity import (
    asymptotic_gap,
    basis_scan,
    block_weights,
    graph_chain,
    negativity_bruteforce,
    negativity_closed_form,
    negativity_dephasing,
    ordering_chain,
    transversal_ghz_chain,
    weak_noise_approx,
)
from .nonlocality import (
    BellValue,
    mk_algebraic_max,
    mk_operator,
    mk_quantum_value,
    success_probability,
)
from .quantumness import (
    QsResult,
    branch_decomposition_check,
    classical_dephase,
    qs,
    qs_ordering_chain,
)
from .states import (
    Graph,
    MeasurementBranch,
    TransversalEncoding,
    add_white_noise,
    ghz,
    ghz_transversal,
    graph_state,
    measure_z,
    reduction_sequence,
    transversal_graph_encoding,
    transversal_graph_family,
)
