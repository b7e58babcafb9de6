"""Coupling constants that steer J(2m, m) into a two-amplitude state.

Given target amplitudes ``f = |f| e^{i theta}`` on the reference vertex and
``f' = |f'| e^{i(theta +/- pi/2)}`` on its antipode, every intermediate
stratum amplitude is forced to zero at time ``t``. The spectral phases
``eta_k = exp(-i t lambda_k)`` must equal ``f + (-1)^k f'``; the couplings
follow by inverting ``lambda = P^T J`` with ``P^{-1} = W P^T``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .spectral import SpectralData

UNITARITY_TOL = 1e-12


def parity_signs(m: int) -> np.ndarray:
    """``(-1)^k`` for k = 0..m."""
    return np.array([1.0 if k % 2 == 0 else -1.0 for k in range(m + 1)])


@dataclass(frozen=True)
class TargetSpec:
    """Requested final amplitudes and the branch data used to reach them.

    ``sign_branch`` picks ``theta' = theta + sign_branch * pi/2``. The
    integer ``offsets`` select among the 2*pi-equivalent phase lifts.
    """

    m: int
    t: float
    theta: float = 0.0
    sign_branch: int = 1
    offsets: tuple[int, ...] | None = None
    f_mag: float = 1 / math.sqrt(2)
    fprime_mag: float = 1 / math.sqrt(2)

    def __post_init__(self):
        if self.m < 1:
            raise ValidationError(f"m must be >= 1, got {self.m}")
        if not (math.isfinite(self.t) and self.t > 0):
            raise ValidationError(f"evolution time must be positive, got t={self.t}")
        if self.sign_branch not in (1, -1):
            raise ValidationError(f"sign_branch must be +1 or -1, got {self.sign_branch}")
        if not math.isfinite(self.theta):
            raise ValidationError(f"theta must be finite, got {self.theta}")
        offsets = self.offsets if self.offsets is not None else (0,) * (self.m + 1)
        offsets = tuple(int(c) for c in offsets)
        if len(offsets) != self.m + 1:
            raise ValidationError(f"expected {self.m + 1} offsets, got {len(offsets)}")
        object.__setattr__(self, "offsets", offsets)
        if not (0 < self.f_mag < 1 and 0 < self.fprime_mag < 1):
            raise ValidationError(
                "degenerate target: |f| and |f'| must both lie strictly in (0, 1)"
            )
        if abs(self.f_mag ** 2 + self.fprime_mag ** 2 - 1) > UNITARITY_TOL:
            raise ValidationError("|f|^2 + |f'|^2 must equal 1")

    @classmethod
    def from_f_mag(cls, m: int, t: float, f_mag: float, **kw) -> "TargetSpec":
        return cls(m=m, t=t, f_mag=f_mag, fprime_mag=math.sqrt(1 - f_mag ** 2), **kw)

    @property
    def fprime_phase(self) -> float:
        return self.theta + self.sign_branch * math.pi / 2

    @property
    def f(self) -> complex:
        return cmath.rect(self.f_mag, self.theta)

    @property
    def fprime(self) -> complex:
        return cmath.rect(self.fprime_mag, self.fprime_phase)


def phase_vector(spec: TargetSpec) -> np.ndarray:
    """Unwrapped phases ``phi_k`` with ``eta_k = exp(i phi_k)``.

    ``phi_k = theta + s * ((-1)^k arctan(|f'|/|f|) + 2 pi c_k)`` where ``s``
    is the sign branch. Phases are deliberately not reduced mod 2*pi.
    """
    if spec.f_mag == 0:
        raise ValidationError("degenerate target: |f| = 0")
    tilt = math.atan(spec.fprime_mag / spec.f_mag)
    c = np.asarray(spec.offsets, dtype=float)
    return spec.theta + spec.sign_branch * (parity_signs(spec.m) * tilt + 2 * math.pi * c)


@dataclass(frozen=True)
class CouplingVector:
    J: tuple[float, ...]
    t: float
    provenance: TargetSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        J = tuple(float(v) for v in self.J)
        if not all(math.isfinite(v) for v in J):
            raise ValidationError(f"non-finite coupling in {J}")
        object.__setattr__(self, "J", J)

    @property
    def m(self) -> int:
        return len(self.J) - 1

    def as_array(self) -> np.ndarray:
        return np.array(self.J)


def synthesize(spec: TargetSpec, spectral: SpectralData) -> CouplingVector:
    """``J_k = -(1/t) sum_j phi_j (W P^T)[j, k]``."""
    if spec.m != spectral.m:
        raise ValidationError(f"target m={spec.m} but spectral data for m={spectral.m}")
    if spec.t <= 0:
        raise ValidationError(f"evolution time must be positive, got t={spec.t}")
    phi = phase_vector(spec)
    J = -(phi @ spectral.inverse_P) / spec.t
    return CouplingVector(J=tuple(J), t=spec.t, provenance=spec)


def spectral_energies(J, spectral: SpectralData) -> np.ndarray:
    """``lambda_k = sum_l J_l P_l(x_k)``."""
    return spectral.P.T @ np.asarray(J, dtype=float)


@dataclass
class ConstraintReport:
    residuals: list[float]  # |amplitude| on strata 1..m-1
    f: complex
    fprime: complex
    target: TargetSpec | None = None

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def target_errors(self) -> dict[str, float]:
        if self.target is None:
            return {}
        tgt = self.target
        return {
            "f_mag": abs(abs(self.f) - tgt.f_mag),
            "fprime_mag": abs(abs(self.fprime) - tgt.fprime_mag),
            "theta": abs(_wrap(cmath.phase(self.f) - tgt.theta)),
            "theta_prime": abs(_wrap(cmath.phase(self.fprime) - tgt.fprime_phase)),
        }

    def failures(self, tol: float = 1e-9) -> list[str]:
        out = [f"stratum {i + 1} amplitude {r:.3e}" for i, r in enumerate(self.residuals) if r >= tol]
        out += [f"{name} error {err:.3e}" for name, err in self.target_errors().items() if err >= tol]
        return out

    def ok(self, tol: float = 1e-9) -> bool:
        return not self.failures(tol)


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2 * math.pi) - math.pi


def verify_constraints(J: CouplingVector, spectral: SpectralData) -> ConstraintReport:
    """Evaluate the stratum amplitudes produced by ``J`` at its design time."""
    if J.m != spectral.m:
        raise ValidationError(f"couplings for m={J.m} but spectral data for m={spectral.m}")
    eta = np.exp(-1j * J.t * spectral_energies(J.J, spectral))
    sums = spectral.P @ (spectral.gamma * eta)
    m = spectral.m
    return ConstraintReport(
        residuals=[float(abs(sums[i])) for i in range(1, m)],
        f=complex(sums[0]),
        fprime=complex(sums[m]),
        target=J.provenance,
    )
