"""GHZ-state coupling synthesis on Johnson spin networks J(2m, m)."""

__version__ = "0.1.0"

from .couplings import CouplingVector, TargetSpec, phase_vector, synthesize, verify_constraints
from .entanglement import (
    PureQubitState,
    entanglement_report,
    global_entanglement,
    multiqubit_measure,
    negativity,
    partition_residual_entanglement,
    pre_prime,
    tau_measure,
)
from .evolution import (
    AmplitudeProfile,
    SectorState,
    dense_evolve,
    ghz_fidelity,
    hamiltonian_on_sector,
    pauli_sector_hamiltonian,
    stratum_amplitudes,
)
from .johnson import (
    JohnsonNetwork,
    StratumTable,
    adjacency_matrix,
    build_network,
    graph_distance,
    stratify,
    stratum_unit_vectors,
)
from .spectral import (
    SpectralData,
    eigenvalue_matrix,
    eigenvalues_closed_form,
    gauss_weights,
    polynomial_tables,
    qd_params,
    spectral_data,
)

__all__ = [
    "AmplitudeProfile",
    "CouplingVector",
    "JohnsonNetwork",
    "PureQubitState",
    "SectorState",
    "SpectralData",
    "StratumTable",
    "TargetSpec",
    "adjacency_matrix",
    "build_network",
    "dense_evolve",
    "eigenvalue_matrix",
    "eigenvalues_closed_form",
    "entanglement_report",
    "gauss_weights",
    "ghz_fidelity",
    "global_entanglement",
    "graph_distance",
    "hamiltonian_on_sector",
    "multiqubit_measure",
    "negativity",
    "partition_residual_entanglement",
    "pauli_sector_hamiltonian",
    "phase_vector",
    "polynomial_tables",
    "pre_prime",
    "qd_params",
    "spectral_data",
    "stratify",
    "stratum_amplitudes",
    "stratum_unit_vectors",
    "synthesize",
    "tau_measure",
    "verify_constraints",
]
