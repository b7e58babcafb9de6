"""Johnson graph J(2m, m): vertices, distance classes and stratification.

Vertices are m-subsets of {1, ..., 2m}, stored as sorted tuples and indexed
in lexicographic order. Index 0 is {1, ..., m}, which corresponds to the
qubit ket |1...10...0>; the last index is its antipode {m+1, ..., 2m}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import NamedTuple

import numpy as np

from .config import check_m
from .errors import InvalidVertexError, ValidationError

VertexSubset = tuple[int, ...]


def _mask(vertex: VertexSubset) -> int:
    return sum(1 << (i - 1) for i in vertex)


@dataclass(frozen=True)
class JohnsonNetwork:
    m: int
    vertices: tuple[VertexSubset, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return 2 * self.m

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict[VertexSubset, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def masks(self) -> np.ndarray:
        return np.array([_mask(v) for v in self.vertices], dtype=np.int64)

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """``D[i, j] = m - |v_i & v_j|``, computed by popcount of bitmasks."""
        common = np.bitwise_count(self.masks[:, None] & self.masks[None, :])
        return (self.m - common).astype(np.int64)

    def vertex_index(self, vertex) -> int:
        key = tuple(sorted(vertex))
        try:
            return self.index[key]
        except KeyError:
            raise InvalidVertexError(f"{vertex!r} is not a vertex of J({self.n},{self.m})") from None

    def qubit_index(self, i: int) -> int:
        """Computational-basis index of vertex ``i`` on 2m qubits.

        Qubit 1 is the most significant bit, so vertex {1..m} maps to
        ``2**(2m) - 2**m`` and its antipode to ``2**m - 1``.
        """
        n = self.n
        return sum(1 << (n - q) for q in self.vertices[i])


def build_network(m: int) -> JohnsonNetwork:
    """Construct J(2m, m) with lexicographically ordered vertices."""
    m = check_m(m)
    verts = tuple(itertools.combinations(range(1, 2 * m + 1), m))
    assert len(verts) == comb(2 * m, m)
    return JohnsonNetwork(m=m, vertices=verts)


def _check_vertex(v, m: int | None = None) -> VertexSubset:
    members = tuple(v)
    if len(set(members)) != len(members) or any(
        not isinstance(i, (int, np.integer)) or i < 1 for i in members
    ):
        raise InvalidVertexError(f"invalid vertex {v!r}")
    if m is not None and (len(members) != m or max(members) > 2 * m):
        raise InvalidVertexError(f"{v!r} is not an {m}-subset of 1..{2 * m}")
    return members


def graph_distance(u, v) -> int:
    """Number of elements that must be substituted to turn ``u`` into ``v``."""
    u, v = _check_vertex(u), _check_vertex(v)
    if len(u) != len(v):
        raise InvalidVertexError(f"vertices of different sizes: {u!r}, {v!r}")
    return len(u) - len(set(u) & set(v))


def adjacency_matrix(net: JohnsonNetwork, k: int) -> np.ndarray:
    """Distance-``k`` adjacency matrix ``A_k`` as a dense 0/1 integer array."""
    if not 0 <= k <= net.m:
        raise ValidationError(f"distance k={k} outside 0..{net.m}")
    return (net.distance_matrix == k).astype(np.int64)


@dataclass(frozen=True)
class StratumTable:
    reference: int
    strata: tuple[tuple[int, ...], ...]
    vertex_count: int

    @property
    def valencies(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.strata)

    @property
    def depth(self) -> int:
        return len(self.strata) - 1


def stratify(net: JohnsonNetwork, reference: int = 0) -> StratumTable:
    """Partition the vertices by distance from ``reference``."""
    if not 0 <= reference < net.vertex_count:
        raise ValidationError(f"reference {reference} outside 0..{net.vertex_count - 1}")
    row = net.distance_matrix[reference]
    strata = tuple(tuple(np.flatnonzero(row == l).tolist()) for l in range(net.m + 1))
    table = StratumTable(reference=reference, strata=strata, vertex_count=net.vertex_count)
    expected = tuple(comb(net.m, l) ** 2 for l in range(net.m + 1))
    if table.valencies != expected:
        raise ValidationError(f"valencies {table.valencies} differ from {expected}")
    return table


def stratum_unit_vectors(table: StratumTable) -> np.ndarray:
    """Rows are the normalized uniform superpositions over each stratum."""
    phi = np.zeros((len(table.strata), table.vertex_count))
    for l, members in enumerate(table.strata):
        phi[l, list(members)] = 1.0 / np.sqrt(len(members))
    return phi


def valencies(m: int) -> tuple[int, ...]:
    return tuple(comb(m, m - l) * comb(m, l) for l in range(m + 1))


class IntersectionArray(NamedTuple):
    b: tuple[int, ...]  # b_0 .. b_{m-1}
    c: tuple[int, ...]  # c_1 .. c_m


def intersection_array(m: int) -> IntersectionArray:
    """``b_l = (m-l)^2`` and ``c_l = l^2`` for J(2m, m)."""
    b = tuple((m - l) ** 2 for l in range(m))
    c = tuple(l ** 2 for l in range(1, m + 1))
    return IntersectionArray(b, c)
