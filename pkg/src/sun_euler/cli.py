"""Command-line entry point ``sun-euler``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 numeric error.  Worker threads come from ``SUN_EULER_THREADS``.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import geometry, io, measure
from .algebra import build_basis
from .errors import NumericError, ParseError, SunEulerError, ValidationError
from .group import (
    EulerCoordinates,
    build_element,
    build_elements,
    coordinate_layout,
    validate_coordinates,
)
from .verification import SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_SEED = 0


def _layout_text(n: int) -> str:
    lines = [f"SU({n}) angle layout ({n * n - 1} slots):"]
    for i, s in enumerate(coordinate_layout(n)):
        lines.append(f"  [{i:2d}] {s.name:<12} [{io.format_float(s.low)}, {io.format_float(s.high)}]")
    return "\n".join(lines)


def _read_coords(args) -> EulerCoordinates:
    if getattr(args, "input", None):
        path = Path(args.input)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ParseError(f"{path}: {exc.strerror}") from exc
        return io.parse_coordinates(text, str(path), args.n)
    if args.angles is None:
        raise ParseError("no angles given (use --angles or --input)")
    return io.parse_coordinates(args.angles, "--angles", args.n)


def _emit(args, text: str) -> None:
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text + ("" if text.endswith("\n") else "\n"))
    else:
        sys.stdout.write(text + ("" if text.endswith("\n") else "\n"))


def cmd_basis(args) -> int:
    _emit(args, io.dumps(build_basis(args.n).to_json()))
    return EXIT_OK


def cmd_element(args) -> int:
    coords = _read_coords(args)
    if not args.no_validate:
        validate_coordinates(coords)
    u = build_element(build_basis(coords.n), coords).entries
    _emit(args, io.dumps(io.matrix_json(coords.n, u)))
    return EXIT_OK


def cmd_density(args) -> int:
    coords = _read_coords(args)
    if not args.no_validate:
        validate_coordinates(coords)
    _emit(args, io.dumps({"n": coords.n, "density": measure.full_density(coords)}))
    return EXIT_OK


def cmd_sample(args) -> int:
    rng = np.random.default_rng(args.seed)
    angles = measure.sample_haar_angles(args.n, args.count, rng)
    if args.matrices:
        mats = build_elements(args.n, angles)
        if args.format == "csv":
            text = io.matrices_to_csv(args.n, mats)
        else:
            text = io.dumps({"n": args.n, "seed": args.seed,
                             "matrices": [io.matrix_to_pairs(m) for m in mats]})
    elif args.format == "csv":
        text = io.angles_to_csv(args.n, angles)
    else:
        text = io.dumps({"n": args.n, "seed": args.seed, "angles": angles})
    _emit(args, text)
    return EXIT_OK


def cmd_volume(args) -> int:
    if args.method == "closed":
        value, stderr = measure.volume_closed_form(args.n), 0.0
    else:
        est = measure.volume_monte_carlo(args.n, args.samples, args.seed, args.chunk_size)
        value, stderr = est.mean, est.stderr
    _emit(args, io.dumps({"n": args.n, "method": args.method, "value": value, "stderr": stderr}))
    return EXIT_OK


def cmd_metric(args) -> int:
    coords = _read_coords(args)
    basis = build_basis(coords.n)
    g = geometry.base_metric(basis, coords).components
    out = {"n": coords.n, "base_metric": g}
    if args.compare:
        f = geometry.pulled_back_fubini_study(coords).components
        out["fubini_study"] = f
        out["max_deviation"] = float(np.max(np.abs(g - f)))
    _emit(args, io.dumps(out))
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, args.n, args.samples, args.seed)
    lines = [f"suite {args.suite}, SU({args.n}), samples={args.samples}, seed={args.seed}"]
    lines += [c.line() for c in checks]
    ok = all(c.passed for c in checks)
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    _emit(args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_VERIFY


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _dimension(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("n must be >= 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sun-euler", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, angles=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--n", type=_dimension, required=True, help="group dimension, SU(n)")
        p.add_argument("--output", help="write to this file instead of stdout")
        if angles:
            p.add_argument("--angles", help='JSON angle list in layout order, e.g. "[0,0,0]"')
            p.add_argument("--input", help='JSON file {"n": int, "angles": [...]}')
            p.add_argument("--explain-layout", action="store_true",
                           help="print the angle layout and exit")
        p.set_defaults(func=func)
        return p

    add("basis", cmd_basis, "export the Gell-Mann basis as JSON")
    p = add("element", cmd_element, "build the SU(n) matrix for given angles", angles=True)
    p.add_argument("--no-validate", action="store_true", help="skip range checks")
    p = add("density", cmd_density, "Haar density at given angles", angles=True)
    p.add_argument("--no-validate", action="store_true", help="skip range checks")

    p = add("sample", cmd_sample, "draw Haar-distributed angles or matrices")
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--matrices", action="store_true", help="emit matrices instead of angles")
    p.add_argument("--explain-layout", action="store_true", help="print the angle layout and exit")

    p = add("volume", cmd_volume, "group volume, closed form or Monte Carlo")
    p.add_argument("--method", choices=("closed", "mc"), default="closed")
    p.add_argument("--samples", type=_positive, default=1_000_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--chunk-size", type=_positive, default=measure.DEFAULT_CHUNK)

    p = add("metric", cmd_metric, "base metric at a point, optionally vs Fubini-Study", angles=True)
    p.add_argument("--point", dest="angles", help="alias of --angles")
    p.add_argument("--compare", action="store_true")

    p = add("verify", cmd_verify, "run an invariant suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--samples", type=_positive, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "explain_layout", False):
        print(_layout_text(args.n))
        return EXIT_OK
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, FloatingPointError, OverflowError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SunEulerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
