"""Run configuration, report assembly and file formats used by the CLI.

Structured reports are JSON (UTF-8, LF, keys in insertion order, floats
written with ``repr`` so they round-trip exactly). Time series are CSV.
State files map bitstrings to ``[re, im]`` pairs; the leftmost character is
qubit 1.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .couplings import CouplingVector, TargetSpec
from .entanglement import PureQubitState
from .errors import ValidationError
from .evolution import AmplitudeProfile, ghz_fidelity

COUPLINGS_SCHEMA = "strataforge.couplings/1"
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class TimeGrid:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ValidationError(f"time grid step must be positive, got {self.step}")
        if self.stop < self.start:
            raise ValidationError(f"time grid stop {self.stop} precedes start {self.start}")
        if self.start < 0:
            raise ValidationError(f"time grid start must be >= 0, got {self.start}")

    @classmethod
    def parse(cls, text: str) -> "TimeGrid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"time grid must look like start:stop:step, got {text!r}")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError:
            raise ValidationError(f"non-numeric time grid {text!r}") from None

    def values(self) -> np.ndarray:
        span = self.stop - self.start
        count = span / self.step
        k = round(count)
        if abs(k - count) < 1e-9:
            return np.linspace(self.start, self.stop, k + 1)
        return self.start + self.step * np.arange(math.floor(count) + 1)

    def __str__(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.step!r}"


@dataclass(frozen=True)
class RunConfig:
    command: str
    m: int | None = None
    t: float | None = None
    theta: float = 0.0
    sign_branch: int = 1
    offsets: tuple[tuple[int, ...], ...] = ()
    time_grid: TimeGrid | None = None
    oracle: str = "all"
    tol: float = DEFAULT_TOL
    couplings_path: str | None = None
    state_path: str | None = None
    out: str | None = None
    csv: str | None = None
    workers: int = 1

    def __post_init__(self):
        if not 0 < self.tol < 1e-3:
            raise ValidationError(f"tolerance must lie in (0, 1e-3), got {self.tol}")
        if self.sign_branch not in (1, -1):
            raise ValidationError(f"sign must be + or -, got {self.sign_branch}")
        if self.oracle not in ("dense", "pauli", "all"):
            raise ValidationError(f"unknown oracle {self.oracle!r}")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")

    def target(self, offsets: tuple[int, ...] | None = None, t: float | None = None) -> TargetSpec:
        if self.m is None or (t is None and self.t is None):
            raise ValidationError("--m and --t are required to synthesize couplings")
        if offsets is None:
            offsets = self.offsets[0] if self.offsets else None
        return TargetSpec(
            m=self.m, t=self.t if t is None else t, theta=self.theta,
            sign_branch=self.sign_branch, offsets=offsets,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["offsets"] = [list(c) for c in self.offsets]
        d["time_grid"] = None if self.time_grid is None else asdict(self.time_grid)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValidationError(f"unknown config keys {sorted(unknown)}")
        d["offsets"] = tuple(tuple(int(v) for v in c) for c in d.get("offsets", ()))
        if d.get("time_grid") is not None:
            d["time_grid"] = TimeGrid(**d["time_grid"])
        return cls(**d)


# --------------------------------------------------------------------------
# JSON / CSV
# --------------------------------------------------------------------------

def jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, allow_nan=False) + "\n"


def write_text(path: str | Path | None, text: str, stream=None) -> None:
    if path is None:
        stream.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def amplitude_csv(profiles: list[AmplitudeProfile]) -> str:
    m = profiles[0].m if profiles else 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["t"]
    for i in range(m + 1):
        header += [f"re_f{i}", f"im_f{i}"]
    writer.writerow(header + ["ghz_fidelity"])
    for p in profiles:
        row = [repr(float(p.t))]
        for a in p.f:
            row += [repr(float(a.real)), repr(float(a.imag))]
        writer.writerow(row + [repr(ghz_fidelity(p))])
    return buf.getvalue()


# --------------------------------------------------------------------------
# couplings files
# --------------------------------------------------------------------------

def target_dict(spec: TargetSpec) -> dict:
    return {
        "m": spec.m,
        "t": spec.t,
        "theta": spec.theta,
        "theta_prime": spec.fprime_phase,
        "sign_branch": spec.sign_branch,
        "offsets": list(spec.offsets),
        "f_mag": spec.f_mag,
        "fprime_mag": spec.fprime_mag,
    }


def couplings_document(J: CouplingVector, config: RunConfig | None = None) -> dict:
    doc = {"schema": COUPLINGS_SCHEMA, "version": __version__}
    if config is not None:
        doc["config"] = config.to_dict()
    doc.update({"m": J.m, "t": J.t, "J": list(J.J)})
    if J.provenance is not None:
        doc["target"] = target_dict(J.provenance)
        closed = reference_closed_form(J.provenance)
        if closed is not None:
            doc["closed_form"] = closed
    return doc


def load_couplings(path: str | Path) -> CouplingVector:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != COUPLINGS_SCHEMA:
        raise ValidationError(f"{path}: not a couplings file (schema {doc.get('schema')!r})")
    target = None
    if "target" in doc:
        tg = doc["target"]
        target = TargetSpec(
            m=tg["m"], t=tg["t"], theta=tg["theta"], sign_branch=tg["sign_branch"],
            offsets=tuple(tg["offsets"]), f_mag=tg["f_mag"], fprime_mag=tg["fprime_mag"],
        )
    J = CouplingVector(J=tuple(doc["J"]), t=float(doc["t"]), provenance=target)
    if J.m != doc["m"]:
        raise ValidationError(f"{path}: {len(J.J)} couplings but m={doc['m']}")
    return J


def load_state(path: str | Path) -> PureQubitState:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: state file must be a JSON object")
    amps = {}
    for bits, value in doc.items():
        if not (isinstance(value, list) and len(value) == 2):
            raise ValidationError(f"{path}: amplitude for {bits!r} must be [re, im]")
        amps[bits] = complex(float(value[0]), float(value[1]))
    return PureQubitState.from_bitstrings(amps)


def state_document(state: PureQubitState) -> dict:
    return {bits: [a.real, a.imag] for bits, a in state.to_bitstrings().items()}


# --------------------------------------------------------------------------
# worked-example closed forms
# --------------------------------------------------------------------------

_PI = math.pi


def reference_closed_form(spec: TargetSpec) -> dict | None:
    """Closed-form couplings for the worked m=2 and m=3 GHZ examples.

    Returns ``None`` unless ``spec`` is a GHZ target with one of the
    tabulated offset patterns.
    """
    if abs(spec.f_mag - spec.fprime_mag) > 1e-12:
        return None
    s, th, t = spec.sign_branch, spec.theta, spec.t
    sg = "+" if s > 0 else "-"
    ms = "-" if s > 0 else "+"
    table = {
        (2, (0, 0, 0)): (
            ["-theta/t", "0", f"{ms}pi/(4t)"],
            [-th / t, 0.0, -s * _PI / (4 * t)],
        ),
        (2, (0, 1, 1)): (
            [f"-(3theta{sg}5pi)/(3t)", f"{sg}2pi/(3t)", f"{sg}pi/(12t)"],
            [-(3 * th + s * 5 * _PI) / (3 * t), s * 2 * _PI / (3 * t), s * _PI / (12 * t)],
        ),
        (2, (1, 0, 0)): (
            [f"-(3theta{sg}pi)/(3t)", f"{ms}2pi/(3t)", f"{ms}7pi/(12t)"],
            [-(3 * th + s * _PI) / (3 * t), -s * 2 * _PI / (3 * t), -s * 7 * _PI / (12 * t)],
        ),
        (3, (0, 0, 0, 0)): (
            ["-theta/t", "0", "0", f"{ms}pi/(4t)"],
            [-th / t, 0.0, 0.0, -s * _PI / (4 * t)],
        ),
    }
    entry = table.get((spec.m, tuple(spec.offsets)))
    if entry is None:
        return None
    return {"expressions": entry[0], "values": entry[1]}
