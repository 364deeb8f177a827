"""Command line interface: ``torusrep <command> ...``.

Exit codes: 0 success, 2 bad input, 3 internal invariant failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .angles import ThetaMatrix
from .density import certify_density, closure_normal_form, find_dense_curve, normal_form_is_sound
from .errors import InvariantError, TorusRepError
from .kronecker import (DEFAULT_BEAM_DEPTH, DEFAULT_BEAM_WIDTH, ApproxRequest, Strategy,
                        approx_symplectic)
from .orbit import (DEFAULT_GRID_DELTA, DEFAULT_PROBE_RESOLUTION, FloatTorusMatrix,
                    dispersion, orbit_explore, project_to_float)
from .builtin_examples import PARAMETERS, default_symbol_values, get_example

log = logging.getLogger("torusrep")

CSV_VERSION = 1
CSV_COLUMNS = ("points", "dispersion", "budget_used")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    seed: int = 0
    thresholds: dict = field(default_factory=dict)


def _schema(name: str) -> dict:
    text = resources.files("torusrep").joinpath("schemas.json").read_text()
    full = json.loads(text)
    return {"$ref": f"#/$defs/{name}", "$defs": full["$defs"]}


def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise UsageError(f"{path}: empty input")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def load_theta(obj: dict) -> ThetaMatrix:
    try:
        jsonschema.validate(obj, _schema("theta_matrix"))
    except jsonschema.ValidationError as exc:
        raise UsageError(f"not a theta matrix: {exc.message}") from exc
    try:
        return ThetaMatrix.from_json(obj)
    except (ValueError, ZeroDivisionError, TorusRepError) as exc:
        raise UsageError(f"bad theta matrix: {exc}") from exc


def _example_params(args) -> dict:
    params = {"g": getattr(args, "g", None), "n": getattr(args, "n", None)}
    lambdas = getattr(args, "lambdas", None)
    if lambdas:
        params["lambdas"] = [x for x in lambdas.split(",") if x]
    return params


def _theta_source(args) -> ThetaMatrix:
    if args.example and args.input:
        raise UsageError("give either an input file or --example, not both")
    if args.example:
        return get_example(args.example, **_example_params(args))
    if not args.input:
        raise UsageError("an input file (or '-') or --example is required")
    return load_theta(_read_json(args.input))


def _emit(args, text: str):
    if getattr(args, "output", None):
        Path(args.output).write_text(text + ("" if text.endswith("\n") else "\n"))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_syms(items) -> dict[str, float]:
    values = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--sym expects NAME=VALUE, got {item!r}")
        try:
            values[name.strip()] = float(val)
        except ValueError:
            raise UsageError(f"--sym {item!r}: value is not a number") from None
    return values


def _symbol_values(theta: ThetaMatrix, given: dict) -> dict:
    values = default_symbol_values(theta)
    unknown = set(given) - set(theta.symtab.symbols)
    if unknown:
        raise UsageError(f"--sym for undeclared symbols {sorted(unknown)}")
    values.update(given)
    return values


def cmd_examples(args) -> int:
    theta = get_example(args.name, **_example_params(args))
    _emit(args, theta.dumps())
    return 0


def cmd_certify(args) -> int:
    theta = _theta_source(args)
    cert = certify_density(theta)
    out = cert.to_json()
    if args.holed:
        out["surface"] = "one-holed"
    _emit(args, json.dumps(out, sort_keys=True))
    return 0


def cmd_normal_form(args) -> int:
    theta = _theta_source(args)
    nf = closure_normal_form(theta)
    if not normal_form_is_sound(theta, nf):
        raise InvariantError("closure normal form failed its own soundness check")
    out = {
        "k": nf.k,
        "h": nf.h.tolist(),
        "theta_o": nf.theta_o.to_json() if nf.theta_o is not None else None,
        "q_block": [[f"{q.numerator}/{q.denominator}" for q in row] for row in nf.q_block],
        "reduced": nf.reduced(theta).to_json(),
        "coarse_k": nf.coarse_k,
        "readings_agree": nf.readings_agree,
    }
    _emit(args, json.dumps(out, sort_keys=True))
    return 0


def _checkpoints(total: int) -> list[int]:
    marks, c = [], 1
    while c < total:
        marks.append(c)
        c *= 10
    marks.append(total)
    return marks


def cmd_orbit(args) -> int:
    theta = _theta_source(args)
    values = _symbol_values(theta, _parse_syms(args.sym))
    seed = project_to_float(theta, values)
    sample = orbit_explore(seed, args.budget, args.grid)
    lines = [
        f"# torusrep orbit csv v{CSV_VERSION}",
        f"# n={seed.n} g={seed.g} budget={args.budget} grid_delta={args.grid} "
        f"probe_resolution={args.probe} seed={args.seed}",
        "# symbols=" + json.dumps(values, sort_keys=True),
        f"# exhausted={sample.exhausted} occupied_cells={sample.occupied_cells()}",
    ]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for mark in _checkpoints(len(sample)):
        prefix = sample.prefix(mark)
        writer.writerow([len(prefix), f"{dispersion(prefix, args.probe):.6f}", mark])
    _emit(args, "\n".join(lines) + "\n" + buf.getvalue())
    if args.dump:
        with open(args.dump, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"x{i}" for i in range(seed.n * 2 * seed.g)] + ["word"])
            for p, word in zip(sample.points, sample.words):
                w.writerow([f"{x:.12f}" for x in p.values.ravel()] + [" ".join(map(str, word))])
    return 0


def _load_float_or_theta(path: str, syms: dict):
    obj = _read_json(path)
    if "symbols" in obj:
        theta = load_theta(obj)
        return project_to_float(theta, _symbol_values(theta, syms)), theta
    try:
        jsonschema.validate(obj, _schema("float_matrix"))
        return FloatTorusMatrix.from_json(obj), None
    except (jsonschema.ValidationError, ValueError, TorusRepError) as exc:
        raise UsageError(f"{path}: not a float or theta matrix ({exc})") from exc


def cmd_approx(args) -> int:
    syms = _parse_syms(args.sym)
    base, base_theta = _load_float_or_theta(args.base, syms)
    target, _ = _load_float_or_theta(args.target, syms)
    cert = certify_density(base_theta) if base_theta is not None else None
    req = ApproxRequest(base, target, args.eps, search_bound=args.bound,
                        strategy=Strategy(args.strategy), beam_width=args.width,
                        certificate=cert, allow_violation=args.allow_violation)
    res = approx_symplectic(req)
    if res is None:
        out = {"found": False, "K": None, "error": None, "word": None, "ratio_C": None}
    else:
        out = res.to_json()
    out["eps"] = args.eps
    out["hypothesis_checked"] = cert is not None
    _emit(args, json.dumps(out, sort_keys=True))
    return 0


def cmd_curve(args) -> int:
    theta = _theta_source(args)
    k = find_dense_curve(theta, args.bound)
    out = {"found": k is not None, "k": k, "bound": args.bound}
    if k is not None:
        from .angles import evaluate_word
        out["image"] = [a.to_json() for a in evaluate_word(theta, k)]
    _emit(args, json.dumps(out, sort_keys=True))
    return 0


def _add_source(p: argparse.ArgumentParser):
    p.add_argument("input", nargs="?", help="theta matrix JSON file, or '-' for stdin")
    p.add_argument("--example", choices=sorted(PARAMETERS), help="use a built-in matrix")
    p.add_argument("--g", type=int, help="genus for parametrized examples")
    p.add_argument("--n", type=int, help="torus dimension for parametrized examples")
    p.add_argument("--lambdas", help="comma separated lambda names (class-D)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torusrep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-o", "--output", help="write the result here instead of stdout")
    parser.add_argument("--seed", type=int, default=0, help="recorded for reproducibility")
    parser.add_argument("--holed", action="store_true",
                        help="treat the surface as one-holed (same computation)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("examples", help="print a built-in theta matrix")
    p.add_argument("name")
    p.add_argument("--g", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--lambdas")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("certify", help="density certificate")
    _add_source(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("normal-form", help="closure normal form (theta_o; pi Q)")
    _add_source(p)
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("orbit", help="numerical orbit exploration, CSV output")
    _add_source(p)
    p.add_argument("--sym", action="append", metavar="NAME=VALUE")
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--grid", type=float, default=DEFAULT_GRID_DELTA)
    p.add_argument("--probe", type=int, default=DEFAULT_PROBE_RESOLUTION)
    p.add_argument("--dump", help="also write every sampled point to this CSV")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("approx", help="symplectic Kronecker approximation")
    p.add_argument("--base", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default="auto")
    p.add_argument("--bound", type=int, default=None,
                   help=f"handle bound, or word depth (beam default {DEFAULT_BEAM_DEPTH})")
    p.add_argument("--width", type=int, default=DEFAULT_BEAM_WIDTH)
    p.add_argument("--sym", action="append", metavar="NAME=VALUE")
    p.add_argument("--allow-violation", action="store_true",
                   help="run even if the base fails the density certificate")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("curve", help="search for a curve with dense image")
    _add_source(p)
    p.add_argument("--bound", type=int, default=6)
    p.set_defaults(func=cmd_curve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    for key in ("budget", "bound"):
        val = getattr(args, key, None)
        if val is not None and val < 1:
            print(f"torusrep: --{key} must be >= 1", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"torusrep: internal invariant violated: {exc}", file=sys.stderr)
        return 3
    except (UsageError, TorusRepError, ValueError, KeyError, TypeError) as exc:
        print(f"torusrep: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
