"""
Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io, lcu, linalg
from .dsl import DslError, parse
from .errors import DualityError
from .measurement import MeasurementScenario, Mode, ZenoSchedule
from .runner import BACKENDS, BackendScenarioError, emit_json, run, run_search_demo

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dualsim", description="Duality-computer simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a .dc circuit file")
    p.add_argument("file", type=Path)
    p.add_argument("--backend", choices=BACKENDS, default="pure")
    p.add_argument("--input", type=Path, help="JSON array of [re, im] amplitudes")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")

    p = sub.add_parser("decompose", help="decompose a matrix into a positive combination of unitaries")
    p.add_argument("matrix", type=Path)
    p.add_argument("--tol", type=float, default=linalg.TOL_RECON)

    p = sub.add_parser("search", help="one-query search demo")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--scenario", choices=[m.value for m in Mode], default="renorm")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--zeno", type=int, default=None)
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: Path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise io.FormatError(f"{path}: {exc.msg}", exc.lineno) from None


def _cmd_run(args) -> str:
    ast = parse(_read(args.file))
    initial = io.state_from_json(_load_json(args.input)) if args.input else None
    text = emit_json(run(ast, args.backend, initial))
    if args.out:
        args.out.write_text(text)
        return ""
    return text


def _cmd_decompose(args) -> str:
    a = linalg.as_matrix(io.matrix_from_json(_load_json(args.matrix)), square=True)
    comb = lcu.decompose(a)
    err = linalg.frobenius_distance(lcu.reconstruct(comb), a)
    if err > args.tol:
        raise DualityError(f"reconstruction error {err:.3e} exceeds tolerance {args.tol:.3e}")
    return io.dumps(io.combination_to_json(comb))


def _cmd_search(args) -> str:
    mode = Mode(args.scenario)
    if args.eps is not None and mode is not Mode.RENORM_THRESHOLD:
        raise UsageError("--eps only applies to --scenario renorm")
    if mode is Mode.RENORM_THRESHOLD:
        scenario = MeasurementScenario.renorm(1e-9 if args.eps is None else args.eps)
    else:
        scenario = MeasurementScenario(mode)
    zeno = ZenoSchedule(args.zeno) if args.zeno is not None else None
    return emit_json(run_search_demo(args.n, args.target, scenario, zeno))


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        handler = {"run": _cmd_run, "decompose": _cmd_decompose, "search": _cmd_search}[args.command]
        try:
            out = handler(args)
        except (BackendScenarioError, ValueError) as exc:
            if isinstance(exc, BackendScenarioError) or not isinstance(exc, DualityError):
                raise UsageError(str(exc)) from None
            raise
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DslError, io.FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DualityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
