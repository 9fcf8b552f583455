"""Command-line front end.

    elimkit elim   -f FILE -e EXPR [--format ppr|ppm|models|ast] ...
    elimkit check  -f FILE -e EXPR1 --equiv EXPR2
    elimkit models -f FILE -e EXPR

Exit codes: 0 success, 1 check returned false, 2 usage/parse error,
3 engine limit or solver failure.  Results go to stdout, everything else
to stderr.  Solver commands resolve with precedence CLI flag, then
ELIMKIT_SAT_CMD / ELIMKIT_QBF_CMD, then the --config JSON file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, TextIO

from .engine import EngineConfig, eliminate
from .errors import (
    ElimkitError, EngineLimitError, ExpansionError, MacroError,
    OperatorPresentError, ParseError, RenderError, SignatureError,
    SolverError,
)
from .formulas import Formula, atoms_of, sorted_atoms
from .macros import Program
from .normalform import full_dnf
from .parser import parse_formula, parse_program
from .printing import format_ast, print_model_list, print_ppm, print_ppr

FORMATS = ("ppr", "ppm", "models", "ast")


def load_problem_file(path: str) -> Program:
    """Parse a program file with the built-in macros pre-registered."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_program(text)


def render(f: Formula, fmt: str, sig=None, bound: int = 20) -> str:
    """Render a formula in one of the output formats (without the trailing
    newline; the CLI adds it)."""
    if fmt == "ppr":
        return print_ppr(f)
    if fmt == "ppm":
        return print_ppm(f)
    if fmt == "models":
        atoms = sorted_atoms(atoms_of(f) if sig is None else sig)
        return print_model_list(full_dnf(f, atoms, bound))
    if fmt == "ast":
        return format_ast(f)
    raise RenderError(f"unknown format {fmt!r}")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-f", "--file", required=True,
                     help="program file to load")
    sub.add_argument("-e", "--expr", required=True,
                     help="query expression to evaluate")
    sub.add_argument("--max-oracle-atoms", type=int, default=20,
                     help="signature bound for model enumeration")
    sub.add_argument("--external-sat", metavar="CMD",
                     help="external SAT solver command (DIMACS on stdin)")
    sub.add_argument("--external-qbf", metavar="CMD",
                     help="external QBF solver command (QDIMACS on stdin)")
    sub.add_argument("--solver-timeout-ms", type=int,
                     help="external solver timeout in milliseconds")
    sub.add_argument("--config", metavar="FILE",
                     help="JSON config file with solver settings")
    sub.add_argument("--trace", action="store_true",
                     help="log engine steps to stderr")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elimkit",
        description="Eliminate second-order operators from propositional formulas")
    subs = parser.add_subparsers(dest="command", required=True)
    elim = subs.add_parser("elim", help="eliminate and print the result")
    _add_common(elim)
    elim.add_argument("--format", choices=FORMATS, default="ppr")
    check = subs.add_parser("check", help="decide equivalence of two expressions")
    _add_common(check)
    check.add_argument("--equiv", required=True, metavar="EXPR2",
                       help="expression to compare against")
    models = subs.add_parser("models", help="print the full DNF of the models")
    _add_common(models)
    return parser


def _engine_config(args, stderr: TextIO) -> EngineConfig:
    file_cfg = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as handle:
            file_cfg = json.load(handle)
    sat_cmd = (args.external_sat
               or os.environ.get("ELIMKIT_SAT_CMD")
               or file_cfg.get("external_sat_cmd"))
    qbf_cmd = (args.external_qbf
               or os.environ.get("ELIMKIT_QBF_CMD")
               or file_cfg.get("external_qbf_cmd"))
    timeout = (args.solver_timeout_ms
               if args.solver_timeout_ms is not None
               else file_cfg.get("solver_timeout_ms", 10_000))
    trace = (lambda line: print(line, file=stderr)) if args.trace else None
    return EngineConfig(external_sat_cmd=sat_cmd, external_qbf_cmd=qbf_cmd,
                        solver_timeout_ms=timeout, trace=trace)


def run(argv: Optional[list[str]] = None,
        stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr) -> int:
    """Entry point returning the exit code; output goes to the handles."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        prog = load_problem_file(args.file)
        cfg = _engine_config(args, stderr)
        expr = parse_formula(args.expr, prog)
        if args.command == "elim":
            result = eliminate(expr, prog, cfg)
            sig = sorted_atoms(atoms_of(expr))
            print(render(result, args.format, sig, args.max_oracle_atoms),
                  file=stdout)
            return 0
        if args.command == "check":
            from .semantics import equivalent
            other = parse_formula(args.equiv, prog)
            left = eliminate(expr, prog, cfg)
            right = eliminate(other, prog, cfg)
            same = equivalent(left, right, bound=args.max_oracle_atoms)
            print("true" if same else "false", file=stdout)
            return 0 if same else 1
        # models
        result = eliminate(expr, prog, cfg)
        sig = sorted_atoms(atoms_of(expr))
        print(print_model_list(full_dnf(result, sig, args.max_oracle_atoms)),
              file=stdout)
        return 0
    except (ParseError, MacroError, ExpansionError, RenderError,
            OperatorPresentError, OSError, json.JSONDecodeError) as exc:
        print(f"elimkit: error: {exc}", file=stderr)
        return 2
    except (EngineLimitError, SolverError, SignatureError) as exc:
        print(f"elimkit: error: {exc}", file=stderr)
        return 3
    except ElimkitError as exc:
        print(f"elimkit: error: {exc}", file=stderr)
        return 3


def main() -> None:
    sys.exit(run())
