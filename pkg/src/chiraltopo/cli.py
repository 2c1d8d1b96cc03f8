"""Command-line entry point.

    chiraltopo compute --model qn --param n=3 --grid 64 --invariant winding1
    chiraltopo relative --model-a qn --param-a n=2 --model-b qn --param-b n=5 --grid 64

Exit codes: 0 success, 1 internal failure, 2 invalid request, 3 physics
error (Gapless, GridTooCoarse, NotChiral, SingularLink). On exit 3 the
report is still written, with the error name in its ``error`` field.

The ``relative`` command reports the winding of the obstruction from the
first Hamiltonian to the second. Unlike the absolute winding printed by
``compute``, this number does not depend on how the sublattice basis was
trivialized: a common gauge transformation shifts both absolute windings
and leaves their difference alone.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .bloch import ChiralOperator, GradingField, check_chiral, flatten, spectral_gap
from .chiral import UnitaryField, extract_q, gamma_from_q
from .errors import InvalidInput, NotChiral, PhysicsError, TopologyError
from .grid import make_grid
from .invariants import (
    InvariantReport,
    chern_number,
    plaquette_flux,
    relative_winding,
    unwrapped_phase,
    valence_projection,
    winding3,
    winding_number,
)
from .ktheory import KaroubiTriple, reduce_torus
from .models import MODELS, ModelSpec, build, model_dimension

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_PHYSICS = 3

INVARIANTS = {
    "winding1": ("Winding1", 1),
    "chern2": ("Chern2", 2),
    "winding3": ("Winding3", 3),
    "relative": ("RelativeWinding", 1),
    "triple": ("TripleReduce", 1),
}

REPORT_KEYS = ("request", "kind", "raw_value", "value", "residual", "gap", "error", "wall_time_ms", "tool_version")


@dataclass
class RunRequest:
    command: str
    models: list[tuple[str, dict]]
    invariant: str
    grid_L: int
    output_path: Path | None = None
    emit_curve: bool = False

    def echo(self) -> dict:
        return {
            "command": self.command,
            "invariant": self.invariant,
            "grid": self.grid_L,
            "models": [{"name": name, "parameters": dict(sorted(params.items()))} for name, params in self.models],
            "emit_curve": self.emit_curve,
        }


@dataclass
class RunReport:
    request: dict
    kind: str
    raw_value: float | None = None
    value: int | None = None
    residual: float | None = None
    gap: float | None = None
    error: dict | None = None
    wall_time_ms: int = 0
    tool_version: str = __version__
    curve: list[tuple] | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        out = {}
        for key in REPORT_KEYS:
            if key == "error" and self.error is None:
                continue
            out[key] = getattr(self, key)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        unknown = set(data) - set(REPORT_KEYS)
        if unknown:
            raise ValueError(f"unknown report fields {sorted(unknown)}")
        return cls(**data)


def parse_param(text: str) -> tuple[str, int | float]:
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise InvalidInput(f"parameters look like key=value, got {text!r}")
    try:
        value: int | float = int(raw)
    except ValueError:
        try:
            value = float(raw)
        except ValueError:
            raise InvalidInput(f"parameter {key!r} is not a number: {raw!r}") from None
    return key.strip(), value


def _validate(request: RunRequest) -> tuple[str, list[ModelSpec]]:
    if request.invariant not in INVARIANTS:
        raise InvalidInput(f"unknown invariant {request.invariant!r}; choose from {sorted(INVARIANTS)}")
    kind, dim = INVARIANTS[request.invariant]
    if request.command == "compute" and request.invariant == "relative":
        raise InvalidInput("relative windings need two models; use the 'relative' command")
    if request.command == "relative" and request.invariant not in ("relative", "triple"):
        raise InvalidInput("the 'relative' command computes 'relative' or 'triple'")
    if request.emit_curve and (request.output_path is None or dim == 3 or request.command == "relative"):
        raise InvalidInput("--emit-curve needs --out and a single d=1 or d=2 model")
    specs = []
    for name, params in request.models:
        if name not in MODELS:
            raise InvalidInput(f"unknown model {name!r}; choose from {sorted(MODELS)}")
        model_dim = model_dimension(name, params)
        if model_dim != dim:
            raise InvalidInput(f"invariant {request.invariant!r} needs a d={dim} model, {name!r} is d={model_dim}")
        specs.append(ModelSpec(name, dict(params), make_grid(dim, request.grid_L)))
    return kind, specs


def _chiral_grading(spec: ModelSpec) -> tuple[GradingField, ChiralOperator, float]:
    H = build(spec)
    gap = spectral_gap(H)
    gamma = flatten(H)
    if gamma.bands % 2:
        raise NotChiral(f"an odd number of bands ({gamma.bands}) cannot carry a chiral symmetry")
    S = ChiralOperator.canonical(gamma.bands // 2)
    if not check_chiral(gamma, S):
        raise NotChiral(f"model {spec.name!r} does not anticommute with S = diag(1, -1)")
    return gamma, S, gap


def _compute(request: RunRequest, kind: str, specs: list[ModelSpec], report: RunReport) -> None:
    if request.command == "relative":
        (ga, S, gap_a), (gb, _, gap_b) = (_chiral_grading(s) for s in specs)
        report.gap = min(gap_a, gap_b)
        inv = relative_winding(ga, gb, S)
        if request.invariant == "triple":
            inv = _with_value(inv, reduce_torus(KaroubiTriple.torus(ga, gb, S)).value)
        _fill(report, inv)
        return

    (spec,) = specs
    if request.invariant == "chern2":
        H = build(spec)
        report.gap = spectral_gap(H)
        P = valence_projection(flatten(H))
        _fill(report, chern_number(P))
        if request.emit_curve:
            flux = plaquette_flux(P)
            kx, ky = spec.grid.momenta()
            cumulative = np.cumsum(flux.ravel())
            report.curve = list(zip(kx.ravel(), ky.ravel(), flux.ravel(), cumulative))
        return

    gamma, S, report.gap = _chiral_grading(spec)
    Q = extract_q(gamma, S)
    if request.invariant == "winding1":
        _fill(report, winding_number(Q))
        if request.emit_curve:
            report.curve = list(zip(*unwrapped_phase(Q)))
    elif request.invariant == "winding3":
        _fill(report, winding3(Q))
    elif request.invariant == "triple":
        reference = gamma_from_q(UnitaryField.identity(spec.grid, S.half))
        inv = relative_winding(reference, gamma, S)
        _fill(report, _with_value(inv, reduce_torus(KaroubiTriple.torus(reference, gamma, S)).value))


def _with_value(inv: InvariantReport, value: int) -> InvariantReport:
    return InvariantReport(inv.kind, inv.raw_value, value, abs(inv.raw_value - value), inv.grid_L)


def _fill(report: RunReport, inv: InvariantReport) -> None:
    report.raw_value = inv.raw_value
    report.value = inv.value
    report.residual = inv.residual


def run(request: RunRequest) -> RunReport:
    """Build, check, compute. Raises InvalidInput for bad requests; physics
    errors are recorded in the returned report."""
    start = time.perf_counter()
    if request.grid_L < 2:
        raise InvalidInput(f"--grid must be at least 2, got {request.grid_L}")
    kind, specs = _validate(request)
    report = RunReport(request=request.echo(), kind=kind)
    try:
        _compute(request, kind, specs, report)
    except PhysicsError as exc:
        report.error = {"name": type(exc).__name__, "message": str(exc)}
        if report.gap is None and type(exc).__name__ == "Gapless":
            report.gap = 0.0
    report.wall_time_ms = int(round((time.perf_counter() - start) * 1000))
    return report


def write_curve(path: Path, rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write("\t".join(repr(float(x)) for x in row) + "\n")


def curve_path(out: Path) -> Path:
    return out.with_suffix(".curve.tsv")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiraltopo", description="Topological invariants of gapped Bloch Hamiltonians.")
    parser.add_argument("--version", action="version", version=f"chiraltopo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="invariant of a single model")
    compute.add_argument("--model", required=True)
    compute.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    compute.add_argument("--invariant", required=True, choices=sorted(k for k in INVARIANTS if k != "relative"))

    relative = sub.add_parser("relative", help="obstruction from model A to model B (d=1, chiral)")
    relative.add_argument("--model-a", required=True)
    relative.add_argument("--param-a", action="append", default=[], metavar="KEY=VALUE")
    relative.add_argument("--model-b", required=True)
    relative.add_argument("--param-b", action="append", default=[], metavar="KEY=VALUE")
    relative.add_argument("--invariant", default="relative", choices=["relative", "triple"])

    for p in (compute, relative):
        p.add_argument("--grid", type=int, required=True, metavar="L")
        p.add_argument("--out", type=Path)
        p.add_argument("--emit-curve", action="store_true")
    return parser


def _request_from_args(args: argparse.Namespace) -> RunRequest:
    if args.command == "compute":
        models = [(args.model, dict(parse_param(p) for p in args.param))]
    else:
        models = [
            (args.model_a, dict(parse_param(p) for p in args.param_a)),
            (args.model_b, dict(parse_param(p) for p in args.param_b)),
        ]
    return RunRequest(args.command, models, args.invariant, args.grid, args.out, args.emit_curve)


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        request = _request_from_args(args)
        report = run(request)
    except InvalidInput as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except TopologyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PHYSICS if isinstance(exc, PhysicsError) else EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    text = report.to_json()
    if request.output_path is None:
        sys.stdout.write(text)
    else:
        request.output_path.write_text(text, encoding="utf-8")
        if report.curve is not None:
            write_curve(curve_path(request.output_path), report.curve)
    return EXIT_PHYSICS if report.error else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
