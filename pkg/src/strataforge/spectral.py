"""Spectral data of J(2m, m) seen from a reference vertex.

The adjacency operator restricted to the stratification space is a Jacobi
(tridiagonal) matrix with diagonal ``alpha`` and squared off-diagonal
``omega``. Its monic orthogonal polynomials ``Q_k``, the associated
polynomials ``Q^(1)_k``, the atomic spectral measure ``sum_k gamma_k
delta(x - x_k)`` and the eigenvalue matrix ``P[i, k] = P_i(x_k)`` are all
derived here.

Polynomials are carried with :class:`fractions.Fraction` coefficients
(ascending powers) so that every quantity in :class:`SpectralData` is exact;
floats appear only in the read-only array views of :class:`SpectralData`.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import isqrt, prod

import numpy as np
from scipy.optimize import bisect

from .config import check_m
from .errors import ConsistencyError, DegeneracyError
from .johnson import intersection_array, valencies

Poly = tuple[Fraction, ...]


# ----------------------------------------------------------------------------
# exact polynomial helpers (ascending coefficients)
# ----------------------------------------------------------------------------

def _trim(c: list[Fraction]) -> Poly:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_scale(a: Poly, s) -> Poly:
    return _trim([Fraction(s) * c for c in a])


def poly_shift_x(a: Poly) -> Poly:
    return (Fraction(0),) + a


def poly_eval(a: Poly, x):
    acc = 0 * x if not isinstance(x, Fraction) else Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_deriv(a: Poly) -> Poly:
    if len(a) == 1:
        return (Fraction(0),)
    return _trim([i * a[i] for i in range(1, len(a))])


def _three_term(x_minus_alpha: Fraction, omega: Fraction, q_k: Poly, q_km1: Poly) -> Poly:
    # Q_{k+1} = (x - alpha) Q_k - omega Q_{k-1}
    return poly_add(poly_add(poly_shift_x(q_k), poly_scale(q_k, -x_minus_alpha)),
                    poly_scale(q_km1, -omega))


# ----------------------------------------------------------------------------
# QD parameters and polynomial tables
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class QDParams:
    m: int
    alpha: tuple[int, ...]  # alpha_0 .. alpha_m
    omega: tuple[int, ...]  # omega_1 .. omega_m


def qd_params(m: int) -> QDParams:
    """Jacobi parameters ``alpha_l = 2l(m-l)``, ``omega_l = l^2 (m-l+1)^2``.

    Both the closed form and the intersection-array route
    (``alpha_l = kappa - b_l - c_l``, ``omega_l = b_{l-1} c_l``) are
    evaluated; a mismatch raises :class:`ConsistencyError`.
    """
    m = operator.index(m)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    alpha = tuple(2 * l * (m - l) for l in range(m + 1))
    omega = tuple((l * (m - l + 1)) ** 2 for l in range(1, m + 1))

    b, c = intersection_array(m)
    degree = m * m
    b_ext = b + (0,)
    c_ext = (0,) + c
    alpha_ia = tuple(degree - b_ext[l] - c_ext[l] if l else 0 for l in range(m + 1))
    omega_ia = tuple(b[l - 1] * c[l - 1] for l in range(1, m + 1))
    if alpha != alpha_ia or omega != omega_ia:
        raise ConsistencyError(
            f"QD parameters disagree for m={m}: {alpha}/{omega} vs {alpha_ia}/{omega_ia}"
        )
    return QDParams(m=m, alpha=alpha, omega=omega)


@dataclass(frozen=True)
class PolynomialTable:
    """Orthogonal polynomial families for one set of QD parameters.

    ``Q[k]`` for k = 0..m+1 are monic; ``Q1[k]`` for k = 0..m are the
    associated polynomials; ``P[k] = Q[k] / norm[k]`` with
    ``norm[k] = sqrt(omega_1 ... omega_k)`` an exact integer.
    """

    qd: QDParams
    Q: tuple[Poly, ...]
    Q1: tuple[Poly, ...]
    P: tuple[Poly, ...]
    norm: tuple[int, ...]

    @property
    def m(self) -> int:
        return self.qd.m


def _exact_sqrt(value: int) -> int:
    r = isqrt(value)
    if r * r != value:
        raise ConsistencyError(f"{value} is not a perfect square")
    return r


def polynomial_tables(qd: QDParams) -> PolynomialTable:
    m = qd.m
    alpha = [Fraction(a) for a in qd.alpha]
    omega = [Fraction(0)] + [Fraction(w) for w in qd.omega]  # 1-based

    one: Poly = (Fraction(1),)
    Q: list[Poly] = [one, (Fraction(0), Fraction(1))]
    for k in range(1, m + 1):
        Q.append(_three_term(alpha[k], omega[k], Q[k], Q[k - 1]))

    Q1: list[Poly] = [one]
    if m >= 1:
        Q1.append((-alpha[1], Fraction(1)))
    for k in range(1, m):
        Q1.append(_three_term(alpha[k + 1], omega[k + 1], Q1[k], Q1[k - 1]))

    norm = tuple(_exact_sqrt(prod(qd.omega[:k])) for k in range(m + 1))
    P = tuple(poly_scale(Q[k], Fraction(1, norm[k])) for k in range(m + 1))
    return PolynomialTable(qd=qd, Q=tuple(Q), Q1=tuple(Q1), P=P, norm=norm)


# ----------------------------------------------------------------------------
# spectrum and Gauss weights
# ----------------------------------------------------------------------------

def eigenvalues_closed_form(m: int) -> list[int]:
    """Distinct adjacency eigenvalues ``m^2 - k(2m+1-k)``, descending."""
    return [m * m - k * (2 * m + 1 - k) for k in range(m + 1)]


def gauss_weights(tables: PolynomialTable, x) -> list[Fraction]:
    """Residues of ``Q^(1)_m / Q_{m+1}`` at the nodes ``x``."""
    m = tables.m
    num = tables.Q1[m]
    dq = poly_deriv(tables.Q[m + 1])
    weights = []
    for xk in x:
        xk = Fraction(xk)
        if poly_eval(tables.Q[m + 1], xk) != 0:
            raise ConsistencyError(f"x={xk} is not a root of Q_{m + 1}")
        d = poly_eval(dq, xk)
        if d == 0:
            raise DegeneracyError(f"x={xk} is a repeated root of Q_{m + 1}")
        weights.append(poly_eval(num, xk) / d)
    return weights


def q_roots(tables: PolynomialTable, k: int | None = None, xtol: float = 1e-12) -> np.ndarray:
    """Numerical roots of ``Q_k`` (default ``Q_{m+1}``) in descending order.

    Bisection on intervals bracketed by the interlacing roots of ``Q_{k-1}``.
    Independent of the closed-form eigenvalues; used only as a cross-check.
    """
    k = tables.m + 1 if k is None else k
    alpha = tables.qd.alpha
    omega = (0,) + tables.qd.omega + (0,)
    bound = 1.0 + max(abs(alpha[j]) + np.sqrt(omega[j]) + np.sqrt(omega[j + 1])
                      for j in range(len(alpha)))
    roots: list[float] = []
    for j in range(1, k + 1):
        coeffs = [float(c) for c in tables.Q[j]]
        f = lambda t, c=coeffs: np.polynomial.polynomial.polyval(t, c)  # noqa: E731
        edges = [-bound] + sorted(roots) + [bound]
        roots = [bisect(f, lo, hi, xtol=xtol) for lo, hi in zip(edges[:-1], edges[1:])]
    return np.array(sorted(roots, reverse=True))


# ----------------------------------------------------------------------------
# eigenvalue matrix
# ----------------------------------------------------------------------------

def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpectralData:
    """Nodes, weights and the eigenvalue matrix of J(2m, m).

    Exact fields hold :class:`Fraction` entries; ``x``, ``gamma``, ``P`` and
    ``W`` are float64 views of them.
    """

    m: int
    x_exact: tuple[Fraction, ...]
    gamma_exact: tuple[Fraction, ...]
    P_exact: tuple[tuple[Fraction, ...], ...]
    tables: PolynomialTable = field(repr=False)

    @cached_property
    def x(self) -> np.ndarray:
        return _frozen([float(v) for v in self.x_exact])

    @cached_property
    def gamma(self) -> np.ndarray:
        return _frozen([float(v) for v in self.gamma_exact])

    @cached_property
    def P(self) -> np.ndarray:
        return _frozen([[float(v) for v in row] for row in self.P_exact])

    @cached_property
    def W(self) -> np.ndarray:
        return _frozen(np.diag(self.gamma))

    @cached_property
    def inverse_P(self) -> np.ndarray:
        """``P^{-1} = W P^T``."""
        return _frozen(self.W @ self.P.T)

    @property
    def valencies(self) -> tuple[int, ...]:
        return valencies(self.m)


def eigenvalue_matrix(tables: PolynomialTable, x, gamma) -> SpectralData:
    m = tables.m
    x = tuple(Fraction(v) for v in x)
    gamma = tuple(Fraction(g) for g in gamma)
    if len(x) != m + 1 or len(gamma) != m + 1:
        raise ConsistencyError("node/weight count does not match m + 1")
    P = tuple(tuple(poly_eval(tables.P[i], xk) for xk in x) for i in range(m + 1))
    for i in range(m + 1):
        for j in range(m + 1):
            s = sum(P[i][k] * gamma[k] * P[j][k] for k in range(m + 1))
            if s != (1 if i == j else 0):
                raise ConsistencyError(f"duality P W P^T fails at ({i},{j}): {s}")
    return SpectralData(m=m, x_exact=x, gamma_exact=gamma, P_exact=P, tables=tables)


@lru_cache(maxsize=None)
def _spectral_data_cached(m: int) -> SpectralData:
    tables = polynomial_tables(qd_params(m))
    x = eigenvalues_closed_form(m)
    return eigenvalue_matrix(tables, x, gauss_weights(tables, x))


def spectral_data(m: int) -> SpectralData:
    """Full spectral pipeline for J(2m, m)."""
    return _spectral_data_cached(check_m(m))
