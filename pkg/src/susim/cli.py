"""Command line interface.

Subcommands::

    susim solve INSTANCE [--out PATH]     decide an instance
    susim gen --kind KIND -n N --out PATH generate a benchmark instance
    susim verify INSTANCE RESULT          recheck a witness or certificate
    susim canon INSTANCE [--out PATH]     canonical features of one side
    susim diff FEATURES FEATURES          compare two feature documents

Exit codes: 0 solved / confirmed / equal, 1 not similar / different,
2 verification failed, 3 refuted, 64 unusable input.  ``-`` stands for
stdin or stdout.  Tolerances come from ``--tol-*`` flags, falling back to
the ``SUSIM_TOL_CMP``, ``SUSIM_TOL_GROUP`` and ``SUSIM_TOL_VERIFY``
environment variables, then to the defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .canonical import compare_features, extract_features
from .certcheck import check_certificate
from .errors import FormatError, SusimError
from .instances import GenConfig, generate
from .linalg import DEFAULT_TOLERANCES, Tolerances
from .model import FAILED, NOT_SIMILAR, SOLVED, Instance, SolveResult
from .oracles import TraceWord, word_to_string
from .serialize import (
    features_from_json,
    features_to_json,
    instance_from_json,
    instance_to_json,
    matrix_to_json,
    result_from_json,
    result_to_json,
)
from .solver import solve, witness_residual

__all__ = ["main"]

EXIT_SOLVED = 0
EXIT_NOT_SIMILAR = 1
EXIT_FAILED = 2
EXIT_REFUTED = 3
EXIT_USAGE = 64

_STATUS_EXIT = {SOLVED: EXIT_SOLVED, NOT_SIMILAR: EXIT_NOT_SIMILAR, FAILED: EXIT_FAILED}


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors use the input-error exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.prog + ": error: " + message) from None


def _read_document(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc


def _write_document(path: str, data: dict) -> None:
    text = json.dumps(data, indent=2, allow_nan=False) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise FormatError(f"cannot write {path}: {exc}") from exc


def _load_instance(path: str, mode_flag: str | None) -> Instance:
    inst = instance_from_json(_read_document(path))
    if mode_flag is not None and mode_flag != inst.mode:
        raise FormatError(
            f"instance declares mode {inst.mode!r} but --mode {mode_flag!r} was given"
        )
    return inst


def _tolerances(args: argparse.Namespace) -> Tolerances:
    values = {}
    for field, flag in (("cmp", "tol_cmp"), ("group", "tol_group"), ("verify", "tol_verify")):
        from_flag = getattr(args, flag, None)
        if from_flag is not None:
            values[field] = from_flag
            continue
        from_env = os.environ.get(f"SUSIM_TOL_{field.upper()}")
        if from_env is not None:
            try:
                values[field] = float(from_env)
            except ValueError:
                raise FormatError(
                    f"SUSIM_TOL_{field.upper()}={from_env!r} is not a number"
                ) from None
        else:
            values[field] = getattr(DEFAULT_TOLERANCES, field)
    return Tolerances(**values)


def _say(args: argparse.Namespace, text: str) -> None:
    stream = sys.stderr if getattr(args, "out", None) == "-" else sys.stdout
    print(text, file=stream)


def _describe(result: SolveResult) -> str:
    if result.status == SOLVED:
        return f"solved in {result.iterations} iterations, residual {result.residual:.3e}"
    if result.status == NOT_SIMILAR:
        cert = result.certificate
        l, i, j = cert.at
        return (
            f"not similar: {cert.kind} certificate ({cert.target}) at matrix {l + 1} "
            f"cell ({i + 1},{j + 1}) after {cert.iterations} iterations"
        )
    return f"failed: {result.message or 'undecided within tolerance'}"


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance, args.mode)
    result = solve(inst, tol=_tolerances(args))
    if args.out is not None:
        _write_document(args.out, result_to_json(result))
    _say(args, _describe(result))
    return _STATUS_EXIT[result.status]


def _witness_document(meta: dict, count: int) -> dict:
    doc: dict = {"format": "susim-witness/1", "kind": meta["kind"], "seed": meta["seed"]}
    if "witness_u" in meta:
        doc["u"] = matrix_to_json(meta["witness_u"])
    if "witness_v" in meta:
        doc["v"] = matrix_to_json(meta["witness_v"])
    if "planned_iterations" in meta:
        doc["planned_iterations"] = meta["planned_iterations"]
    word = meta.get("certifying_word")
    if isinstance(word, TraceWord):
        doc["word"] = {
            "letters": [k + 1 for k in word.letters],
            "text": word_to_string(word.letters, count),
            "trace_a": [word.trace_a.real, word.trace_a.imag],
            "trace_b": [word.trace_b.real, word.trace_b.imag],
        }
    return doc


def _cmd_gen(args: argparse.Namespace) -> int:
    config = GenConfig(
        kind=args.kind,
        n=args.n,
        m=args.m,
        count=args.p,
        seed=args.seed,
        style=args.style,
        eps=args.eps,
        depth=args.depth,
        gap=args.gap,
        name=args.name,
    )
    inst, meta = generate(config)
    _write_document(args.out, instance_to_json(inst))
    if args.out != "-":
        witness_path = str(Path(args.out).with_suffix("")) + ".witness.json"
        _write_document(witness_path, _witness_document(meta, inst.count))
        _say(args, f"wrote {args.out} and {witness_path}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance, args.mode)
    result = result_from_json(_read_document(args.result))
    if result.mode != inst.mode:
        raise FormatError(
            f"result mode {result.mode!r} does not match instance mode {inst.mode!r}"
        )
    tol = _tolerances(args)
    if result.status == SOLVED:
        if result.u is None or (inst.mode == "sueq" and result.v is None):
            raise FormatError("solved result is missing its witness")
        residual = witness_residual(inst.a_mats, inst.b_mats, inst.mode, result.u, result.v)
        if residual <= tol.verify:
            _say(args, f"witness confirmed, residual {residual:.3e}")
            return EXIT_SOLVED
        _say(args, f"witness refuted, residual {residual:.3e} exceeds {tol.verify:.1e}")
        return EXIT_REFUTED
    if result.status == NOT_SIMILAR:
        if result.certificate is None:
            raise FormatError("non-similarity result carries no certificate")
        report = check_certificate(inst, result.certificate, tol=tol)
        if report.confirmed:
            _say(args, f"certificate confirmed: {report.reason}")
            return EXIT_SOLVED
        _say(args, f"certificate refuted: {report.reason}")
        return EXIT_REFUTED
    raise FormatError("a failed result makes no claim to verify")


def _cmd_canon(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance, args.mode)
    mats = inst.a_mats if args.side == "a" else inst.b_mats
    features = extract_features(mats, mode=inst.mode, tol=_tolerances(args))
    if args.out is not None:
        _write_document(args.out, features_to_json(features))
    _say(
        args,
        f"{len(features.steps)} refinements, "
        f"{len(features.rows_sizes)} row classes, "
        f"{len(features.cols_sizes)} column classes",
    )
    return 0


def _cmd_diff(args: argparse.Namespace) -> int:
    first = features_from_json(_read_document(args.first))
    second = features_from_json(_read_document(args.second))
    equal, diffs = compare_features(first, second, tol=_tolerances(args))
    if equal:
        print("features match")
        return EXIT_SOLVED
    for line in diffs:
        print(line)
    return EXIT_NOT_SIMILAR


def _add_tolerance_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol-cmp", type=float, help="entrywise comparison tolerance")
    parser.add_argument("--tol-group", type=float, help="eigenvalue grouping tolerance")
    parser.add_argument("--tol-verify", type=float, help="witness verification tolerance")


def _add_mode_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--mode",
        choices=("sus", "sueq"),
        help="expected mode; the instance file is authoritative and a conflict is an error",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="susim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="decide one instance")
    p_solve.add_argument("instance", help="instance document, - for stdin")
    p_solve.add_argument("--out", help="write the result document here, - for stdout")
    _add_mode_flag(p_solve)
    _add_tolerance_flags(p_solve)
    p_solve.set_defaults(func=_cmd_solve)

    p_gen = sub.add_parser("gen", help="generate a benchmark instance")
    p_gen.add_argument(
        "--kind",
        required=True,
        choices=(
            "planted_similar",
            "planted_equivalent",
            "perturbed",
            "deep_split",
            "pairwise",
            "pr_cycle",
        ),
    )
    p_gen.add_argument("-n", type=int, required=True, help="matrix size (columns for sueq)")
    p_gen.add_argument("-m", type=int, help="row count for planted_equivalent")
    p_gen.add_argument("-p", type=int, default=1, help="matrices per side")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--style", choices=("dense", "structured"), default="dense")
    p_gen.add_argument("--eps", type=float, default=1e-2, help="perturbation size")
    p_gen.add_argument("--depth", type=int, default=3, help="scheduled refinement count")
    p_gen.add_argument("--gap", type=float, default=1.0, help="eigenvalue level spacing")
    p_gen.add_argument("--name", default="", help="instance name")
    p_gen.add_argument("--out", required=True, help="instance file, - for stdout")
    p_gen.set_defaults(func=_cmd_gen)

    p_verify = sub.add_parser("verify", help="recheck a result against its instance")
    p_verify.add_argument("instance")
    p_verify.add_argument("result")
    _add_mode_flag(p_verify)
    _add_tolerance_flags(p_verify)
    p_verify.set_defaults(func=_cmd_verify)

    p_canon = sub.add_parser("canon", help="canonical features of one collection")
    p_canon.add_argument("instance", help="instance document, - for stdin")
    p_canon.add_argument("--side", choices=("a", "b"), default="a")
    p_canon.add_argument("--out", help="write the features document here, - for stdout")
    _add_mode_flag(p_canon)
    _add_tolerance_flags(p_canon)
    p_canon.set_defaults(func=_cmd_canon)

    p_diff = sub.add_parser("diff", help="compare two feature documents")
    p_diff.add_argument("first")
    p_diff.add_argument("second")
    _add_tolerance_flags(p_diff)
    p_diff.set_defaults(func=_cmd_diff)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return EXIT_USAGE
        return 0 if not exc.code else EXIT_USAGE
    try:
        return args.func(args)
    except SusimError as exc:
        print(f"susim: {exc}", file=sys.stderr)
        return EXIT_USAGE
