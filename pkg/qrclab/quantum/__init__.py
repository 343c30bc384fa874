"""
Exact simulation of the input-modulated Ising reservoir.

Hamiltonian construction, eigenbasis time evolution and Pauli feature
measurement with temporal multiplexing.
"""

from qrclab.quantum.evolution import (
    Eigensystem,
    EvolutionConfig,
    StateVector,
    diagonalize,
    evolve,
    evolve_in_eigenbasis,
)
from qrclab.quantum.hamiltonian import (
    HamiltonianSpec,
    HamiltonianTemplate,
    build_hamiltonian,
    build_hamiltonian_stack,
    input_fields,
    observable_stack,
    pauli_operator,
    sample_couplings,
    site_pairs,
)
from qrclab.quantum.observables import (
    FeatureVector,
    block_length,
    feature_length,
    measure_features,
    multiplex_features,
    multiplex_features_batch,
)

__all__ = [
    "Eigensystem",
    "EvolutionConfig",
    "FeatureVector",
    "HamiltonianSpec",
    "HamiltonianTemplate",
    "StateVector",
    "block_length",
    "build_hamiltonian",
    "build_hamiltonian_stack",
    "diagonalize",
    "evolve",
    "evolve_in_eigenbasis",
    "feature_length",
    "input_fields",
    "measure_features",
    "multiplex_features",
    "multiplex_features_batch",
    "observable_stack",
    "pauli_operator",
    "sample_couplings",
    "site_pairs",
]
