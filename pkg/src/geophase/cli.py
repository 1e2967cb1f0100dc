"""Command-line front end.

Subcommands::

    geophase uhlmann          --r R --nx NX --tau T [--method discrete|closed|spectral]
    geophase interferometric  --r R --nx NX --tau T [--method discrete|closed|spectral]
    geophase franson          --r R --theta TH --alpha A [--chi-points K --seed S]
    geophase sweep TARGET     --param {r,nx,tau,theta,alpha} --from A --to B --points K
    geophase check

Exit codes: 0 success, 1 bad arguments, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import evolution as ev
from . import franson as fr
from . import holonomy as hol
from .checks import run_checks
from .errors import NumericalFailure, ValidationError
from .records import write_csv, write_json

COMMANDS = ("uhlmann", "interferometric", "franson", "sweep", "check")
METHODS = ("discrete", "closed", "spectral")
SWEEP_PARAMS = ("r", "nx", "tau", "theta", "alpha")
ANGLE_PARAMS = ("tau", "theta", "alpha")


class UsageError(Exception):
    pass


@dataclass
class RunSpec:
    command: str
    r: float = 0.5
    nx: float = 1 / math.sqrt(2)
    nz: float | None = None
    tau: float = 2 * math.pi
    theta: float = math.pi / 8
    alpha: float = 2 * math.pi
    methods: tuple[str, ...] = ("spectral",)
    steps: int = 2000
    chi_points: int = 16
    samples_per_point: int = 1
    seed: int = 0
    output_format: str = "csv"
    output_path: str | None = None
    target: str | None = None
    param: str | None = None
    start: float | None = None
    stop: float | None = None
    points: int | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for m in self.methods:
            if m not in METHODS:
                raise UsageError(f"unknown method {m!r}")
        if self.steps < 1:
            raise UsageError("--steps must be positive")
        if self.output_format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")

    def precession(self, **override) -> ev.PrecessionParams:
        values = {"r": self.r, "nx": self.nx, "tau": self.tau, **override}
        if self.nz is None:
            return ev.PrecessionParams.from_nx(values["r"], values["nx"], values["tau"])
        return ev.PrecessionParams(values["r"], values["nx"], self.nz, values["tau"])


# -- evaluation --------------------------------------------------------------


def _uhlmann(p: ev.PrecessionParams, method: str, steps: int) -> hol.PhaseResult:
    if method == "closed":
        vis = hol.uhlmann_qubit_visibility(p)
        return hol.PhaseResult(hol.uhlmann_qubit_noncyclic(p), vis, True)
    if method == "spectral":
        return hol.uhlmann_unitary(p.rho0, p.hamiltonian, p.tau)
    return hol.uhlmann_discrete(ev.precession_path(p.rho0, p.hamiltonian, p.tau, steps))


def _interferometric(p: ev.PrecessionParams, method: str, steps: int) -> hol.PhaseResult:
    if method == "closed":
        if p.r == 0:
            raise hol.IndeterminatePhase("interferometric phase is indeterminate for degenerate state")
        omega = hol.solid_angle_precession(p.n_z, p.tau)
        # |<0|u|0>| is the common visibility factor of both eigenvectors
        nu = math.hypot(math.cos(p.tau / 2), p.n_z * math.sin(p.tau / 2))
        vis = nu * math.hypot(math.cos(omega / 2), p.r * math.sin(omega / 2))
        return hol.PhaseResult(hol.interferometric_qubit(p.r, omega), vis, vis >= hol.VISIBILITY_FLOOR)
    if method == "spectral":
        return hol.interferometric_phase(p.rho0, p.hamiltonian, p.tau)
    return hol.interferometric_discrete(p.rho0, p.hamiltonian, p.tau, steps)


EVALUATORS = {"uhlmann": _uhlmann, "interferometric": _interferometric}


def _precession_record(p: ev.PrecessionParams) -> dict:
    return {"r": p.r, "nx": p.n_x, "nz": p.n_z, "tau": p.tau}


def _result_fields(res: hol.PhaseResult, suffix: str = "") -> dict:
    return {
        f"phase{suffix}": float(res.phase),
        f"visibility{suffix}": float(res.visibility),
        f"phase_defined{suffix}": bool(res.phase_defined),
    }


def _undefined(suffix: str = "") -> dict:
    return _result_fields(hol.PhaseResult(float("nan"), 0.0, False), suffix)


def _franson_records(spec: RunSpec, r: float, theta: float, alpha: float) -> tuple[fr.FringeScan, hol.PhaseResult, dict]:
    plate = ev.WaveplateParams(alpha, theta)
    cfg = fr.FransonConfig(r, plate, fr.chi_grid(spec.chi_points), spec.samples_per_point, spec.seed)
    scan = fr.coincidence_fringe(cfg)
    fit = fr.fit_fringe(scan)
    tilde = ev.ancilla_waveplate_params(plate, r)
    base = {
        "r": r,
        "theta": theta,
        "alpha": alpha,
        "alpha_tilde": tilde.alpha,
        "theta_tilde": tilde.theta,
    }
    return scan, fit, base


def run(spec: RunSpec) -> tuple[int, list[dict]]:
    """Evaluate a single (non-sweep) command and return ``(exit_code, records)``.

    Numerical failures propagate as :class:`NumericalFailure`; :func:`main`
    turns them into exit code 2.
    """
    if spec.command in EVALUATORS:
        p = spec.precession()
        method = spec.methods[0]
        res = EVALUATORS[spec.command](p, method, spec.steps)
        if not res.phase_defined:
            raise hol.IndeterminatePhase(f"{spec.command} phase undefined: visibility {res.visibility:.3g}")
        record = {**_precession_record(p), **_result_fields(res), "method": method, "steps": spec.steps}
        return 0, [record]
    if spec.command == "franson":
        scan, fit, base = _franson_records(spec, spec.r, spec.theta, spec.alpha)
        records = []
        for chi, intensity in zip(scan.chi, scan.intensity):
            records.append(
                {
                    **base,
                    "chi": float(chi),
                    "intensity": float(intensity),
                    **_result_fields(fit),
                    "method": "fringe_fit",
                    "steps": spec.chi_points,
                    "seed": spec.seed,
                }
            )
        return 0, records
    if spec.command == "sweep":
        return 0, sweep(spec, spec.param, spec.start, spec.stop, spec.points)
    raise UsageError(f"run() does not handle {spec.command!r}")


def sweep(spec: RunSpec, param: str, start: float, stop: float, points: int) -> list[dict]:
    """Evaluate ``spec.target`` on an ascending grid of one parameter.

    With several methods each gets its own ``phase_<method>`` columns.
    Points where the phase is undefined are kept with ``phase_defined`` false.
    """
    if param not in SWEEP_PARAMS:
        raise UsageError(f"--param must be one of {', '.join(SWEEP_PARAMS)}")
    if points is None or points < 2:
        raise UsageError("--points must be at least 2")
    target = spec.target or "uhlmann"
    grid = np.linspace(start, stop, points)
    records = []
    for value in grid:
        value = float(value)
        if target == "franson":
            if param not in ("r", "theta", "alpha"):
                raise UsageError(f"franson sweeps accept r, theta or alpha, not {param}")
            values = {"r": spec.r, "theta": spec.theta, "alpha": spec.alpha, param: value}
            try:
                _, fit, base = _franson_records(spec, values["r"], values["theta"], values["alpha"])
                fields = _result_fields(fit)
            except NumericalFailure:
                base = {**values, "alpha_tilde": float("nan"), "theta_tilde": float("nan")}
                fields = _undefined()
            records.append({**base, **fields, "method": "fringe_fit", "steps": spec.chi_points})
            continue
        if param in ("theta", "alpha"):
            raise UsageError(f"{target} sweeps accept r, nx or tau, not {param}")
        p = spec.precession(**{param: value})
        record = _precession_record(p)
        multi = len(spec.methods) > 1
        for method in spec.methods:
            suffix = f"_{method}" if multi else ""
            try:
                record.update(_result_fields(EVALUATORS[target](p, method, spec.steps), suffix))
            except NumericalFailure:
                record.update(_undefined(suffix))
        record.update({"method": ",".join(spec.methods), "steps": spec.steps})
        records.append(record)
    return records


# -- argument parsing ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r", type=float, default=0.5, help="Bloch length / Schmidt parameter")
    parser.add_argument("--nx", type=float, default=1 / math.sqrt(2), help="precession axis x component")
    parser.add_argument("--nz", type=float, default=None, help="axis z component (default +sqrt(1-nx^2))")
    parser.add_argument("--tau", type=float, default=2 * math.pi, help="evolution time")
    parser.add_argument("--theta", type=float, default=math.pi / 8, help="plate angle from vertical")
    parser.add_argument("--alpha", type=float, default=2 * math.pi, help="plate precession angle")
    parser.add_argument("--chi-points", type=int, default=16)
    parser.add_argument("--samples-per-point", type=int, default=1, help="Poisson counts per chi point (1 = ideal)")
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--method", default="spectral", help="discrete, closed or spectral (comma list for sweeps)")
    parser.add_argument("--out", default=None, help="output file (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--degrees", action="store_true", help="angles given in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geophase", description="Mixed-state geometric phases.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("uhlmann", "interferometric", "franson"):
        _common(sub.add_parser(name))
    sp = sub.add_parser("sweep")
    sp.add_argument("target", choices=("uhlmann", "interferometric", "franson"))
    sp.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--points", type=int, required=True)
    _common(sp)
    sub.add_parser("check")
    return parser


def spec_from_args(args: argparse.Namespace) -> RunSpec:
    if args.command == "check":
        return RunSpec("check")
    scale = math.pi / 180 if args.degrees else 1.0
    start, stop = getattr(args, "start", None), getattr(args, "stop", None)
    if args.command == "sweep" and args.param in ANGLE_PARAMS:
        start, stop = start * scale, stop * scale
    methods = tuple(m.strip() for m in args.method.split(",") if m.strip())
    if args.command != "sweep" and len(methods) != 1:
        raise UsageError("--method takes a single value outside sweeps")
    if args.chi_points < 3 and args.command in ("franson", "sweep"):
        raise UsageError("--chi-points must be at least 3")
    return RunSpec(
        command=args.command,
        r=args.r,
        nx=args.nx,
        nz=args.nz,
        tau=args.tau * scale,
        theta=args.theta * scale,
        alpha=args.alpha * scale,
        methods=methods,
        steps=args.steps,
        chi_points=args.chi_points,
        samples_per_point=args.samples_per_point,
        seed=args.seed,
        output_format=args.format,
        output_path=args.out,
        target=getattr(args, "target", None),
        param=getattr(args, "param", None),
        start=start,
        stop=stop,
        points=getattr(args, "points", None),
    )


def _emit(records: list[dict], spec: RunSpec) -> None:
    writer = write_csv if spec.output_format == "csv" else write_json
    if spec.output_path:
        with open(spec.output_path, "w", newline="", encoding="utf-8") as fh:
            writer(records, fh)
    else:
        writer(records, sys.stdout)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        results = run_checks()
        for res in results:
            print(f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.detail}")
        failed = sum(not r.passed for r in results)
        print(f"{len(results) - failed}/{len(results)} checks passed")
        return 0 if failed == 0 else 2
    try:
        spec = spec_from_args(args)
        code, records = run(spec)
    except (UsageError, ValidationError) as exc:
        print(f"geophase: error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"geophase: numerical failure: {exc}", file=sys.stderr)
        return 2
    _emit(records, spec)
    return code


if __name__ == "__main__":
    sys.exit(main())
