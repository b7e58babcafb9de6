"""Command-line front end.

Exit status: 0 on success, 1 when a verification check fails, 2 on usage,
configuration or input errors. All angles are in radians and time is
dimensionless (hbar = 1).
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .config import PAULI_MAX_M, max_m
from .couplings import CouplingVector, synthesize, verify_constraints
from .entanglement import entanglement_report
from .errors import StrataforgeError, ValidationError
from .evolution import (
    SectorState,
    amplitude_series,
    dense_evolve,
    ghz_fidelity,
    hamiltonian_on_sector,
    pauli_sector_adjacency,
    pauli_sector_hamiltonian,
    project_onto_strata,
    qubit_state,
    sector_state_from_profile,
    stratum_amplitudes,
)
from .johnson import adjacency_matrix, build_network, stratify, stratum_unit_vectors
from .reporting import (
    RunConfig,
    TimeGrid,
    amplitude_csv,
    couplings_document,
    dumps,
    load_couplings,
    load_state,
    state_document,
    write_text,
)
from .spectral import spectral_data

log = logging.getLogger("strataforge")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sign(text: str) -> int:
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError(f"sign must be + or -, got {text!r}")


def _offsets(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"offsets must be comma-separated integers, got {text!r}") from None


def _times(text: str) -> TimeGrid:
    try:
        return TimeGrid.parse(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, help="network parameter; J(2m, m) has 2m qubits")
    common.add_argument("--t", type=float, help="design evolution time (dimensionless, hbar = 1)")
    common.add_argument("--theta", type=float, default=0.0, help="phase of f in radians (default 0)")
    common.add_argument("--sign", type=_sign, default=1, dest="sign_branch",
                        help="branch of theta' = theta +/- pi/2: + or - (default +)")
    common.add_argument("--offsets", type=_offsets, action="append", default=None,
                        help="integer phase offsets c_0..c_m, comma separated; use --offsets=-1,0,0 "
                             "for negative values. Repeat for sweep.")
    common.add_argument("--times", type=_times, dest="time_grid", help="time grid start:stop:step")
    common.add_argument("--tol", type=float, default=1e-9, help="verification tolerance (default 1e-9)")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock duration in the report (breaks byte-identical output)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="strataforge", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("synth", parents=[common], help="synthesize GHZ coupling constants")

    p = sub.add_parser("evolve", parents=[common], help="stratum amplitude time series")
    p.add_argument("--couplings", dest="couplings_path", help="couplings JSON written by synth")
    p.add_argument("--csv", help="write the CSV time series here (default stdout)")

    p = sub.add_parser("verify", parents=[common], help="check couplings against the oracles")
    p.add_argument("--couplings", dest="couplings_path", help="couplings JSON written by synth")
    p.add_argument("--oracle", choices=("dense", "pauli", "all"), default="all")

    p = sub.add_parser("measure", parents=[common], help="entanglement of a state")
    p.add_argument("--state", dest="state_path", help="state JSON: bitstring -> [re, im]")
    p.add_argument("--couplings", dest="couplings_path", help="couplings JSON written by synth")

    p = sub.add_parser("sweep", parents=[common], help="synthesize and check over (offsets, t) grids")
    p.add_argument("--workers", type=int, default=1)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        m=args.m,
        t=args.t,
        theta=args.theta,
        sign_branch=args.sign_branch,
        offsets=tuple(args.offsets or ()),
        time_grid=args.time_grid,
        oracle=getattr(args, "oracle", "all"),
        tol=args.tol,
        couplings_path=getattr(args, "couplings_path", None),
        state_path=getattr(args, "state_path", None),
        out=args.out,
        csv=getattr(args, "csv", None),
        workers=getattr(args, "workers", 1),
    )


def _couplings_for(cfg: RunConfig) -> CouplingVector:
    if cfg.couplings_path:
        return load_couplings(cfg.couplings_path)
    spec = cfg.target()
    return synthesize(spec, spectral_data(spec.m))


def _profile_dict(profile) -> dict:
    return {"t": profile.t, "f": list(profile.f), "ghz_fidelity": ghz_fidelity(profile)}


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_synth(cfg: RunConfig) -> tuple[dict, int]:
    spec = cfg.target()
    J = synthesize(spec, spectral_data(spec.m))
    doc = couplings_document(J, cfg)
    report = verify_constraints(J, spectral_data(spec.m))
    doc["max_residual"] = report.max_residual
    return doc, EXIT_OK


def cmd_evolve(cfg: RunConfig) -> tuple[dict, int]:
    J = _couplings_for(cfg)
    sd = spectral_data(J.m)
    grid = cfg.time_grid or TimeGrid(0.0, J.t, J.t / 10)
    profiles = amplitude_series(J, sd, grid.values())
    write_text(cfg.csv, amplitude_csv(profiles), stream=sys.stdout)
    design = stratum_amplitudes(J, sd, J.t)
    doc = {
        "config": cfg.to_dict(),
        "couplings": {"m": J.m, "t": J.t, "J": list(J.J)},
        "design": _profile_dict(design),
        "rows": len(profiles),
    }
    return doc, EXIT_OK


def _check(name: str, value: float, tol: float) -> dict:
    return {"name": name, "value": float(value), "tol": tol, "passed": bool(value < tol)}


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    J = _couplings_for(cfg)
    m, tol = J.m, cfg.tol
    sd = spectral_data(m)
    checks, skipped = [], []

    constraint = verify_constraints(J, sd)
    for i, r in enumerate(constraint.residuals, start=1):
        checks.append(_check(f"constraint: stratum {i} amplitude", r, tol))
    for name, err in constraint.target_errors().items():
        checks.append(_check(f"constraint: recovered {name}", err, tol))

    times = [J.t] if cfg.time_grid is None else [J.t, *cfg.time_grid.values()]
    if cfg.oracle in ("dense", "all"):
        net = build_network(m)
        table = stratify(net)
        H = hamiltonian_on_sector(J, net)
        phi = stratum_unit_vectors(table)
        dev = leak = 0.0
        for t in times:
            state = dense_evolve(H, SectorState.basis(net), t)
            dense_f = project_onto_strata(state, table).f
            dev = max(dev, np.abs(dense_f - stratum_amplitudes(J, sd, t).f).max())
            leak = max(leak, np.linalg.norm(state.amplitudes - phi.T @ dense_f))
        checks.append(_check("oracle: spectral vs dense amplitudes", dev, tol))
        checks.append(_check("oracle: leakage outside stratification space", leak, tol))
    else:
        skipped.append("oracle: spectral vs dense (not requested)")

    if cfg.oracle in ("pauli", "all"):
        if m <= PAULI_MAX_M:
            net = build_network(m)
            A_dev = np.abs(pauli_sector_adjacency(m) - adjacency_matrix(net, 1)).max()
            H_dev = np.abs(pauli_sector_hamiltonian(J, m) - hamiltonian_on_sector(J, net)).max()
            checks.append(_check("oracle: Pauli sector operator vs adjacency", A_dev, tol))
            checks.append(_check("oracle: Pauli Hamiltonian vs graph Hamiltonian", H_dev, tol))
        else:
            skipped.append(f"oracle: Pauli (skipped, m={m} exceeds cap {PAULI_MAX_M})")
    else:
        skipped.append("oracle: Pauli (not requested)")

    failed = [c["name"] for c in checks if not c["passed"]]
    for name in failed:
        print(f"FAILED {name}", file=sys.stderr)
    for note in skipped:
        print(f"SKIPPED {note}", file=sys.stderr)
    doc = {
        "config": cfg.to_dict(),
        "couplings": {"m": m, "t": J.t, "J": list(J.J)},
        "recovered": {"f": constraint.f, "fprime": constraint.fprime},
        "checks": checks,
        "skipped": skipped,
        "failed": failed,
        "passed": not failed,
    }
    return doc, EXIT_FAIL if failed else EXIT_OK


def cmd_measure(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.state_path:
        state = load_state(cfg.state_path)
        source = {"state_file": cfg.state_path}
    else:
        J = _couplings_for(cfg)
        net = build_network(J.m)
        profile = stratum_amplitudes(J, spectral_data(J.m), J.t)
        state = qubit_state(sector_state_from_profile(profile, stratify(net)), net)
        source = {"couplings": {"m": J.m, "t": J.t, "J": list(J.J)}}
    doc = {
        "config": cfg.to_dict(),
        **source,
        "qubits": state.n,
        "state": state_document(state),
        "entanglement": entanglement_report(state).to_dict(),
    }
    return doc, EXIT_OK


def _sweep_point(args):
    cfg, offsets, t = args
    spec = cfg.target(offsets=offsets, t=t)
    sd = spectral_data(spec.m)
    J = synthesize(spec, sd)
    report = verify_constraints(J, sd)
    return {
        "offsets": list(spec.offsets),
        "t": t,
        "J": list(J.J),
        "max_abs_J": max(abs(v) for v in J.J),
        "max_residual": report.max_residual,
        "ghz_fidelity": ghz_fidelity(stratum_amplitudes(J, sd, t)),
        "passed": report.ok(cfg.tol),
    }


def cmd_sweep(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.m is None:
        raise ValidationError("--m is required for sweep")
    offsets_list = list(cfg.offsets) or [(0,) * (cfg.m + 1)]
    if cfg.time_grid is not None:
        times = [float(t) for t in cfg.time_grid.values() if t > 0]
    elif cfg.t is not None:
        times = [cfg.t]
    else:
        raise ValidationError("sweep needs --times or --t")
    if not times:
        raise ValidationError("time grid contains no positive times")
    jobs = [(cfg, c, t) for c in offsets_list for t in times]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        rows = list(pool.map(_sweep_point, jobs))
    failed = [i for i, r in enumerate(rows) if not r["passed"]]
    doc = {"config": cfg.to_dict(), "points": rows, "failed": failed}
    return doc, EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
    "measure": cmd_measure,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    started = time.perf_counter()
    try:
        cfg = config_from_args(args)
        if cfg.m is not None and not 1 <= cfg.m <= max_m():
            raise ValidationError(f"m={cfg.m} outside supported range 1..{max_m()}")
        doc, status = COMMANDS[cfg.command](cfg)
    except (StrataforgeError, OSError, KeyError, ValueError) as exc:
        print(f"strataforge {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - started
    log.info("%s finished in %.3f s", cfg.command, elapsed)
    if cfg.command == "evolve" and cfg.out is None and cfg.csv is None:
        return status  # stdout already carries the CSV
    doc = {**doc, "version": __version__}
    if args.timing:
        doc["duration_s"] = elapsed
    write_text(cfg.out, dumps(doc), stream=sys.stdout)
    return status


if __name__ == "__main__":
    sys.exit(main())
