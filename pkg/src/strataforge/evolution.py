"""Time evolution under ``H = sum_k J_k P_k(A)`` on J(2m, m).

Three routes produce the same dynamics:

* the spectral route, which never leaves the (m+1)-dimensional
  stratification space (:func:`stratum_amplitudes`);
* the graph route, a dense N x N Hamiltonian built from distance matrices
  and evolved by eigendecomposition (:func:`hamiltonian_on_sector`,
  :func:`dense_evolve`);
* the Pauli route, which assembles the Heisenberg operator on all 2m qubits
  and restricts it to the m-excitation sector
  (:func:`pauli_sector_hamiltonian`).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import PAULI_MAX_M, check_m
from .couplings import CouplingVector, spectral_energies
from .entanglement import PureQubitState
from .errors import ValidationError
from .johnson import JohnsonNetwork, StratumTable, adjacency_matrix, build_network, stratum_unit_vectors
from .spectral import PolynomialTable, SpectralData, polynomial_tables, qd_params

HERMITIAN_TOL = 1e-10


def _couplings(J) -> np.ndarray:
    if isinstance(J, CouplingVector):
        return J.as_array()
    return np.asarray(J, dtype=float)


@dataclass(frozen=True)
class AmplitudeProfile:
    """Overlaps ``f_i = <phi_i| exp(-iHt) |phi_0>`` with the stratum vectors."""

    t: float
    f: np.ndarray

    @property
    def m(self) -> int:
        return len(self.f) - 1

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.f) ** 2

    @property
    def total_probability(self) -> float:
        return float(self.probabilities.sum())


@dataclass(frozen=True)
class SectorState:
    """State vector on the m-excitation sector, in canonical vertex order."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > 1e-10:
            raise ValidationError(f"sector state has norm {norm}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, net: JohnsonNetwork, index: int = 0) -> "SectorState":
        v = np.zeros(net.vertex_count, dtype=complex)
        v[index] = 1.0
        return cls(v)


# --------------------------------------------------------------------------
# spectral route
# --------------------------------------------------------------------------

def stratum_amplitudes(J, spectral: SpectralData, t: float) -> AmplitudeProfile:
    """``f_i(t) = sum_k gamma_k P_i(x_k) exp(-i t lambda_k)``."""
    J = _couplings(J)
    if len(J) != spectral.m + 1:
        raise ValidationError(f"{len(J)} couplings for m={spectral.m}")
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    eta = np.exp(-1j * t * spectral_energies(J, spectral))
    return AmplitudeProfile(t=float(t), f=spectral.P @ (spectral.gamma * eta))


def amplitude_series(J, spectral: SpectralData, times) -> list[AmplitudeProfile]:
    return [stratum_amplitudes(J, spectral, float(t)) for t in times]


def ghz_fidelity(profile: AmplitudeProfile) -> float:
    """Overlap with the GHZ state whose relative phase matches the profile.

    Phase-insensitive: ``(|f_0| + |f_m|)^2 / 2``.
    """
    return float((abs(profile.f[0]) + abs(profile.f[-1])) ** 2 / 2)


# --------------------------------------------------------------------------
# graph route
# --------------------------------------------------------------------------

def hamiltonian_on_sector(J, net: JohnsonNetwork) -> np.ndarray:
    """``sum_k (J_k / sqrt(kappa_k)) A_k`` as a dense real symmetric matrix."""
    J = _couplings(J)
    if len(J) != net.m + 1:
        raise ValidationError(f"{len(J)} couplings for m={net.m}")
    H = np.zeros((net.vertex_count, net.vertex_count))
    for k, Jk in enumerate(J):
        Ak = adjacency_matrix(net, k)
        H += Jk / np.sqrt(Ak[0].sum()) * Ak
    return H


def matrix_polynomial(poly, A: np.ndarray) -> np.ndarray:
    """Evaluate an ascending-coefficient polynomial at a square matrix."""
    out = np.zeros_like(A, dtype=float)
    eye = np.eye(A.shape[0])
    for c in reversed(poly):
        out = out @ A + float(c) * eye
    return out


def polynomial_hamiltonian(J, A: np.ndarray, tables: PolynomialTable) -> np.ndarray:
    """``sum_k J_k P_k(A)`` for an arbitrary matrix ``A``."""
    J = _couplings(J)
    return sum(Jk * matrix_polynomial(tables.P[k], A) for k, Jk in enumerate(J))


def dense_evolve(H: np.ndarray, initial, t: float) -> SectorState:
    """``exp(-iHt) psi`` via full Hermitian eigendecomposition."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"Hamiltonian must be square, got shape {H.shape}")
    if not np.allclose(H, H.conj().T, rtol=0, atol=HERMITIAN_TOL):
        raise ValidationError("Hamiltonian is not Hermitian")
    psi = initial.amplitudes if isinstance(initial, SectorState) else np.asarray(initial, dtype=complex)
    evals, evecs = np.linalg.eigh(H)
    out = evecs @ (np.exp(-1j * t * evals) * (evecs.conj().T @ psi))
    return SectorState(out)


def project_onto_strata(state: SectorState, table: StratumTable) -> AmplitudeProfile:
    phi = stratum_unit_vectors(table)
    return AmplitudeProfile(t=float("nan"), f=phi @ state.amplitudes)


def sector_state_from_profile(profile: AmplitudeProfile, table: StratumTable) -> SectorState:
    """Lift stratum overlaps back to vertex amplitudes (uniform per stratum)."""
    phi = stratum_unit_vectors(table)
    return SectorState(phi.T @ profile.f)


def qubit_state(state: SectorState, net: JohnsonNetwork) -> PureQubitState:
    """Embed a sector state into the full 2m-qubit register."""
    return PureQubitState(
        net.n, {net.qubit_index(i): a for i, a in enumerate(state.amplitudes) if a != 0}
    )


# --------------------------------------------------------------------------
# Pauli route
# --------------------------------------------------------------------------

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    # site 0 is the leftmost (most significant) qubit
    return np.kron(np.kron(np.eye(2 ** site), op), np.eye(2 ** (n - site - 1)))


def heisenberg_operator(n: int) -> np.ndarray:
    """``1/2 sum_{i<j} sigma_i . sigma_j`` on ``n`` qubits (dense)."""
    dim = 2 ** n
    H = np.zeros((dim, dim), dtype=complex)
    singles = {a: [_site_operator(s, q, n) for q in range(n)] for a, s in _PAULI.items()}
    for i, j in itertools.combinations(range(n), 2):
        for a in _PAULI:
            H += singles[a][i] @ singles[a][j]
    return H / 2


def _check_pauli_cap(m: int) -> int:
    return check_m(m, cap=PAULI_MAX_M)


@lru_cache(maxsize=None)
def pauli_sector_adjacency(m: int) -> np.ndarray:
    """Restriction of ``1/2 sum sigma.sigma + (m/2) I`` to the m-excitation sector."""
    m = _check_pauli_cap(m)
    net = build_network(m)
    full = heisenberg_operator(2 * m) + (m / 2) * np.eye(2 ** (2 * m))
    idx = [net.qubit_index(i) for i in range(net.vertex_count)]
    sector = full[np.ix_(idx, idx)]
    # the sector must be invariant: no leakage into other excitation numbers
    leak = np.delete(full[:, idx], idx, axis=0)
    if np.abs(leak).max(initial=0.0) > 1e-12:
        raise ValidationError("Heisenberg operator leaks out of the excitation sector")
    if np.abs(sector.imag).max() > 1e-12:
        raise ValidationError("sector operator is not real")
    out = sector.real.copy()
    out.setflags(write=False)
    return out


def pauli_sector_hamiltonian(J, m: int) -> np.ndarray:
    """``sum_k J_k P_k(.)`` applied to the Pauli-built sector operator."""
    m = _check_pauli_cap(m)
    A = pauli_sector_adjacency(m)
    return polynomial_hamiltonian(J, A, polynomial_tables(qd_params(m)))
