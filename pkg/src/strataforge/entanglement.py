"""Multipartite entanglement measures for pure qubit states.

Qubits are numbered from 0 inside the code and the basis index is read with
qubit 0 as the most significant bit, so a bitstring ``"1100"`` is index 12.
Human-facing descriptors (report keys) use 1-based qubit labels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import DENSE_MAX_QUBITS
from .errors import SizeLimitError, ValidationError

NORM_TOL = 1e-10
NEGATIVE_EIG_TOL = 1e-12


@dataclass(frozen=True)
class PureQubitState:
    """Sparse pure state: basis index -> complex amplitude."""

    n: int
    amplitudes: Mapping[int, complex] = field(repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"qubit count must be positive, got {self.n}")
        amps = {}
        for idx, a in self.amplitudes.items():
            idx = int(idx)
            if not 0 <= idx < 2 ** self.n:
                raise ValidationError(f"basis index {idx} out of range for {self.n} qubits")
            a = complex(a)
            if a != 0:
                amps[idx] = a
        norm2 = sum(abs(a) ** 2 for a in amps.values())
        if abs(norm2 - 1) > NORM_TOL:
            raise ValidationError(f"state is not normalized: sum |a|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", dict(sorted(amps.items())))

    @classmethod
    def from_dense(cls, vector, tol: float = 0.0) -> "PureQubitState":
        vector = np.asarray(vector, dtype=complex).ravel()
        n = int(round(math.log2(len(vector))))
        if 2 ** n != len(vector):
            raise ValidationError(f"length {len(vector)} is not a power of two")
        return cls(n, {i: a for i, a in enumerate(vector) if abs(a) > tol})

    @classmethod
    def from_bitstrings(cls, amps: Mapping[str, complex]) -> "PureQubitState":
        if not amps:
            raise ValidationError("empty state")
        lengths = {len(b) for b in amps}
        if len(lengths) != 1:
            raise ValidationError(f"bitstrings of mixed lengths {sorted(lengths)}")
        n = lengths.pop()
        out = {}
        for bits, a in amps.items():
            if set(bits) - {"0", "1"}:
                raise ValidationError(f"invalid bitstring {bits!r}")
            out[int(bits, 2)] = a
        return cls(n, out)

    def to_bitstrings(self) -> dict[str, complex]:
        return {format(i, f"0{self.n}b"): a for i, a in self.amplitudes.items()}

    def to_dense(self) -> np.ndarray:
        if self.n > 24:
            raise SizeLimitError(f"refusing to densify {self.n} qubits")
        v = np.zeros(2 ** self.n, dtype=complex)
        for i, a in self.amplitudes.items():
            v[i] = a
        return v


def two_term_state(m: int, f: complex, fprime: complex) -> PureQubitState:
    """``f |1..10..0> + f' |0..01..1>`` on 2m qubits."""
    n = 2 * m
    return PureQubitState(n, {2 ** n - 2 ** m: f, 2 ** m - 1: fprime})


def _check_qubits(state: PureQubitState, qubits: Iterable[int], name: str = "block") -> list[int]:
    qs = [int(q) for q in qubits]
    if len(set(qs)) != len(qs) or any(not 0 <= q < state.n for q in qs):
        raise ValidationError(f"invalid {name} {qs} for {state.n} qubits")
    return qs


def _check_dense_cap(n: int):
    if n > DENSE_MAX_QUBITS:
        raise SizeLimitError(f"dense density matrices limited to {DENSE_MAX_QUBITS} qubits, got {n}")


# --------------------------------------------------------------------------
# reduced states
# --------------------------------------------------------------------------

def reduced_density_matrix(state: PureQubitState, keep: Sequence[int]) -> np.ndarray:
    """Density matrix of ``keep`` (in that order) after tracing out the rest."""
    keep = _check_qubits(state, keep, "subsystem")
    _check_dense_cap(len(keep))
    rest = [q for q in range(state.n) if q not in keep]
    psi = state.to_dense().reshape((2,) * state.n)
    mat = np.transpose(psi, keep + rest).reshape(2 ** len(keep), -1)
    return mat @ mat.conj().T


def single_qubit_purities(state: PureQubitState) -> np.ndarray:
    """``Tr rho_i^2`` for every qubit, straight from the sparse amplitudes."""
    n = state.n
    amps = state.amplitudes
    out = np.empty(n)
    for q in range(n):
        bit = 1 << (n - 1 - q)
        p1 = sum(abs(a) ** 2 for i, a in amps.items() if i & bit)
        coh = sum(a.conjugate() * amps.get(i | bit, 0) for i, a in amps.items() if not i & bit)
        p0 = 1 - p1
        out[q] = p0 * p0 + p1 * p1 + 2 * abs(coh) ** 2
    return out


def global_entanglement(state: PureQubitState, method: str = "sparse") -> float:
    """Mean single-qubit linear entropy scaled to [0, 1]: ``2(1 - mean Tr rho_i^2)``."""
    if method == "sparse":
        purities = single_qubit_purities(state)
    elif method == "dense":
        purities = np.array([
            np.real(np.trace(r @ r))
            for r in (reduced_density_matrix(state, [q]) for q in range(state.n))
        ])
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(2 * (1 - purities.mean()))


# --------------------------------------------------------------------------
# negativity
# --------------------------------------------------------------------------

def partial_transpose(rho: np.ndarray, nqubits: int, block: Sequence[int]) -> np.ndarray:
    """Transpose the qubits at positions ``block`` of a ``nqubits`` density matrix."""
    t = rho.reshape((2,) * (2 * nqubits))
    axes = list(range(2 * nqubits))
    for q in block:
        axes[q], axes[q + nqubits] = axes[q + nqubits], axes[q]
    return t.transpose(axes).reshape(rho.shape)


def density_negativity(rho: np.ndarray, nqubits: int, block: Sequence[int]) -> float:
    """Twice the magnitude of the negative part of the partial-transpose spectrum."""
    evals = np.linalg.eigvalsh(partial_transpose(rho, nqubits, block))
    return float(2 * abs(evals[evals < -NEGATIVE_EIG_TOL].sum()))


def negativity(state: PureQubitState, block: Iterable[int], method: str = "schmidt") -> float:
    """Negativity of the bipartition ``block | complement``.

    ``method="density"`` forms the full density matrix and partially
    transposes it. ``method="schmidt"`` uses the pure-state identity
    ``(sum_i s_i)^2 - 1`` on the Schmidt coefficients; both are exact.
    """
    block = _check_qubits(state, block)
    if not 0 < len(block) < state.n:
        raise ValidationError("block must be a nonempty proper subset of the qubits")
    _check_dense_cap(state.n)
    if method == "density":
        rho = reduced_density_matrix(state, list(range(state.n)))
        return density_negativity(rho, state.n, block)
    if method == "schmidt":
        rest = [q for q in range(state.n) if q not in block]
        psi = state.to_dense().reshape((2,) * state.n)
        mat = np.transpose(psi, block + rest).reshape(2 ** len(block), -1)
        s = np.linalg.svd(mat, compute_uv=False)
        return float(max(s.sum() ** 2 - 1, 0.0))
    raise ValueError(f"unknown method {method!r}")


def subsystem_negativity(state: PureQubitState, part_a: Sequence[int], part_b: Sequence[int]) -> float:
    """Negativity between ``part_a`` and ``part_b`` on their joint reduced state."""
    part_a, part_b = list(part_a), list(part_b)
    if not part_a or not part_b:
        return 0.0
    if set(part_a) & set(part_b):
        raise ValidationError(f"overlapping parts {part_a} and {part_b}")
    joint = part_a + part_b
    rho = reduced_density_matrix(state, joint)
    return density_negativity(rho, len(joint), list(range(len(part_a))))


def _label(qubits: Iterable[int]) -> str:
    return ",".join(str(q + 1) for q in qubits)


def prefix_cuts(n: int) -> list[list[int]]:
    return [list(range(k)) for k in range(1, n // 2 + 1)]


def multiqubit_measure(state: PureQubitState, prefactor: str = "printed") -> float:
    """Aggregate of prefix-bipartition negativities ``k | n-k``, k = 1..n/2.

    ``prefactor="printed"`` multiplies the sum by ``n/2``; ``"mean"``
    averages it instead, which keeps the value in [0, 1].
    """
    n = state.n
    half = n // 2
    if half == 0:
        return 0.0
    total = sum(negativity(state, cut) for cut in prefix_cuts(n))
    if prefactor == "printed":
        return half * total
    if prefactor == "mean":
        return total / half
    raise ValueError(f"unknown prefactor {prefactor!r}")


def partition_residual_entanglement(state: PureQubitState, blocks: Sequence[Sequence[int]]) -> float:
    """Residual entanglement of ``AB | CD`` after removing the four cross terms."""
    if len(blocks) != 4:
        raise ValidationError(f"expected four blocks, got {len(blocks)}")
    a, b, c, d = (list(x) for x in blocks)
    flat = a + b + c + d
    if sorted(flat) != list(range(state.n)):
        raise ValidationError(f"blocks {blocks} do not partition {state.n} qubits")
    left, right = a + b, c + d
    if not left or not right:
        raise ValidationError("both sides of the AB|CD cut must be nonempty")
    total = negativity(state, left) ** 2
    for x in (a, b):
        for y in (c, d):
            total -= subsystem_negativity(state, x, y) ** 2
    return float(total)


def pre_prime(state: PureQubitState, cut: Sequence[int]) -> float:
    """Cut negativity squared minus every cross-cut two-qubit negativity squared."""
    cut = _check_qubits(state, cut, "cut")
    rest = [q for q in range(state.n) if q not in cut]
    total = negativity(state, cut) ** 2
    for i in cut:
        for j in rest:
            total -= subsystem_negativity(state, [i], [j]) ** 2
    return float(total)


# --------------------------------------------------------------------------
# tau
# --------------------------------------------------------------------------

def _tau_sign(n: int, i: int) -> int:
    parity = bin(i).count("1")
    if 8 * i < 2 ** n:  # i <= 2^(n-3) - 1
        return -1 if parity % 2 else 1
    return -1 if (parity + n) % 2 else 1


def tau_measure(state: PureQubitState, variant: str = "complement") -> float:
    """``2 |chi*|`` with ``chi*`` pairing each amplitude with its partner.

    ``variant="complement"`` pairs index ``j`` with ``2^n - 1 - j`` (the
    bitwise complement). ``variant="printed"`` uses the partner indices
    ``(2^{n-1} - 1) - 2i`` and ``(2^{n-2} - 2) - 2i`` literally; partners
    that fall outside the basis contribute nothing.
    """
    n = state.n
    if n % 2:
        raise ValidationError(f"tau is defined for an even number of qubits, got {n}")
    dim = 2 ** n
    if variant == "complement":
        p_even, p_odd = dim - 1, dim - 2
    elif variant == "printed":
        p_even, p_odd = dim // 2 - 1, dim // 4 - 2
    else:
        raise ValueError(f"unknown variant {variant!r}")
    a = state.amplitudes

    def amp(j: int) -> complex:
        return a.get(j, 0) if 0 <= j < dim else 0

    chi = 0j
    for i in range(dim // 4):
        term = amp(2 * i) * amp(p_even - 2 * i) - amp(2 * i + 1) * amp(p_odd - 2 * i)
        if term:
            chi += _tau_sign(n, i) * term
    return float(2 * abs(chi))


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------

def default_pre_blocks(n: int) -> list[list[int]]:
    """Split each half of the register into two contiguous blocks."""
    half = n // 2
    first, second = list(range(half)), list(range(half, n))
    k = (half + 1) // 2
    return [first[:k], first[k:], second[:k], second[k:]]


@dataclass
class EntanglementReport:
    Q: float
    negativities: dict[str, float]
    rho_bar: float
    rho_bar_mean: float
    pre_values: dict[str, float]
    pre_prime_values: dict[str, float]
    tau: float | None

    def to_dict(self) -> dict:
        return {
            "Q": self.Q,
            "tau": self.tau,
            "rho_bar": self.rho_bar,
            "rho_bar_mean": self.rho_bar_mean,
            "negativities": dict(self.negativities),
            "pre": dict(self.pre_values),
            "pre_prime": dict(self.pre_prime_values),
        }


def entanglement_report(state: PureQubitState, tau_variant: str = "complement") -> EntanglementReport:
    n = state.n
    negs = {}
    for cut in prefix_cuts(n):
        rest = [q for q in range(n) if q not in cut]
        negs[f"{_label(cut)}|{_label(rest)}"] = negativity(state, cut)
    half = n // 2
    pre_values = {}
    pre_primes = {}
    if n >= 2:
        blocks = default_pre_blocks(n)
        pre_values["|".join(_label(b) for b in blocks)] = partition_residual_entanglement(state, blocks)
        cut = list(range(half))
        pre_primes[f"{_label(cut)}|{_label(range(half, n))}"] = pre_prime(state, cut)
    return EntanglementReport(
        Q=global_entanglement(state),
        negativities=negs,
        rho_bar=multiqubit_measure(state, "printed"),
        rho_bar_mean=multiqubit_measure(state, "mean"),
        pre_values=pre_values,
        pre_prime_values=pre_primes,
        tau=tau_measure(state, tau_variant) if n % 2 == 0 else None,
    )
