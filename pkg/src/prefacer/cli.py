"""Command-line front end.

Five commands share one pipeline (load preface directory, compose, then
act): ``compose`` prints the effective-definitions report, ``validate``
checks a model, ``transform`` applies statechart induction and prints the
transformed model, ``explain`` shows a key's override chain, ``skeleton``
writes skeleton and monitor files.

Exit codes: 0 success (warnings allowed), 1 error diagnostics, 2 parse or
usage failure, 3 composition failure (import cycle, unknown import or
root).  Diagnostics go to standard error, payload and summaries to
standard output, and identical inputs produce identical output bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import IO

from .constraints import check_constraints
from .diagnostics import Diagnostic, error_count, has_errors, warning_count
from .model import Model, builtin_check
from .preface import (
    CompositionError,
    EffectiveDefinitions,
    NotDefinedError,
    PackageRepository,
    compose,
    explain,
    validate_preface,
)
from .skeletongen import UntransformedInputError, generate_monitor, generate_skeleton
from .textio import (
    ParseError,
    parse_model,
    parse_package,
    print_model,
    print_report,
    print_transform_report,
)
from .transformer import apply_transforms

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_COMPOSITION = 3


@dataclass
class RunConfig:
    """One resolved invocation; ``run`` is pure apart from file IO."""

    command: str  # compose | validate | transform | explain | skeleton
    preface_dir: str
    root_package: str
    model_path: str | None = None
    key: str | None = None
    output: str | None = None
    format: str = "text"  # text | json


# ---------------------------------------------------------------------------
# Diagnostic rendering
# ---------------------------------------------------------------------------


def render_diagnostics(diags: list[Diagnostic], format: str = "text") -> str:
    """Stable text or JSON rendering; empty string for an empty list."""

    if format == "json":
        payload = [
            {
                "severity": d.severity,
                "code": d.code,
                "file": d.location.file if d.location else None,
                "line": d.location.line if d.location else None,
                "col": d.location.column if d.location else None,
                "path": d.path,
                "message": d.message,
                "provenance": d.provenance,
            }
            for d in diags
        ]
        return json.dumps(payload, indent=2) + "\n"

    lines = []
    for d in diags:
        parts = [d.severity, d.code]
        if d.location is not None:
            parts.append(str(d.location))
        parts.append(f"{d.path}: {d.message}")
        line = " ".join(parts)
        if d.provenance is not None:
            line += f" [{d.provenance}]"
        lines.append(line)
    return "\n".join(lines) + "\n" if lines else ""


# ---------------------------------------------------------------------------
# Pipeline pieces
# ---------------------------------------------------------------------------


def _load_repository(preface_dir: str, stderr: IO[str],
                     diags: list[Diagnostic]) -> PackageRepository | None:
    directory = Path(preface_dir)
    if not directory.is_dir():
        stderr.write(f"error: '{preface_dir}' is not a directory\n")
        return None
    files = sorted(directory.glob("*.preface"))
    if not files:
        stderr.write(f"error: no .preface files in '{preface_dir}'\n")
        return None
    repo: PackageRepository = {}
    for path in files:
        pkg = parse_package(path.read_text(encoding="utf-8"), str(path))
        if pkg.id in repo:
            diags.append(Diagnostic(
                "error", "E108", pkg.id,
                f"package '{pkg.id}' is defined by more than one file", pkg.loc))
        repo[pkg.id] = pkg
    return repo


def _read_model(config: RunConfig) -> Model:
    assert config.model_path is not None
    text = Path(config.model_path).read_text(encoding="utf-8")
    return parse_model(text, config.model_path)


def _summary(diags: list[Diagnostic]) -> str:
    return f"{error_count(diags)} errors, {warning_count(diags)} warnings\n"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_compose(config: RunConfig, eff: EffectiveDefinitions,
                 diags: list[Diagnostic], stdout: IO[str], stderr: IO[str]) -> int:
    stderr.write(render_diagnostics(diags, config.format))
    stdout.write(print_report(eff))
    return EXIT_DIAGNOSTICS if has_errors(diags) else EXIT_OK


def _cmd_validate(config: RunConfig, model: Model, eff: EffectiveDefinitions,
                  diags: list[Diagnostic], stdout: IO[str], stderr: IO[str]) -> int:
    structural = builtin_check(model)
    diags = structural + diags
    if not has_errors(structural):
        diags = diags + check_constraints(model, eff)
    stderr.write(render_diagnostics(diags, config.format))
    stdout.write(_summary(diags))
    return EXIT_DIAGNOSTICS if has_errors(diags) else EXIT_OK


def _cmd_transform(config: RunConfig, model: Model, eff: EffectiveDefinitions,
                   diags: list[Diagnostic], stdout: IO[str], stderr: IO[str]) -> int:
    structural = builtin_check(model)
    diags = structural + diags
    if has_errors(diags):
        stderr.write(render_diagnostics(diags, config.format))
        return EXIT_DIAGNOSTICS
    transformed, report = apply_transforms(model, eff)
    diags = diags + report.diagnostics
    stderr.write(render_diagnostics(diags, config.format))
    stderr.write(print_transform_report(report))
    text = print_model(transformed)
    if config.output:
        Path(config.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        stdout.write(text)
    return EXIT_DIAGNOSTICS if has_errors(diags) else EXIT_OK


def _cmd_explain(config: RunConfig, eff: EffectiveDefinitions,
                 diags: list[Diagnostic], stdout: IO[str], stderr: IO[str]) -> int:
    stderr.write(render_diagnostics(diags, config.format))
    assert config.key is not None
    try:
        chain = explain(eff, config.key)
    except NotDefinedError as failure:
        stderr.write(f"error: {failure}\n")
        return EXIT_DIAGNOSTICS
    stdout.write(f"{config.key}\n")
    for index, entry in enumerate(chain.entries):
        mark = " (winner)" if index == len(chain.entries) - 1 else ""
        stdout.write(f"  {entry.package_id}: {entry.render()}{mark}\n")
    return EXIT_DIAGNOSTICS if has_errors(diags) else EXIT_OK


def _cmd_skeleton(config: RunConfig, model: Model, eff: EffectiveDefinitions,
                  diags: list[Diagnostic], stdout: IO[str], stderr: IO[str]) -> int:
    structural = builtin_check(model)
    diags = structural + diags
    if has_errors(diags):
        stderr.write(render_diagnostics(diags, config.format))
        return EXIT_DIAGNOSTICS
    transformed, report = apply_transforms(model, eff)
    diags = diags + report.diagnostics
    if has_errors(diags):
        stderr.write(render_diagnostics(diags, config.format))
        return EXIT_DIAGNOSTICS
    try:
        skeletons = generate_skeleton(transformed, eff)
        monitors = generate_monitor(transformed, eff)
    except UntransformedInputError as failure:
        diags = diags + [Diagnostic("error", "E303", "", str(failure))]
        stderr.write(render_diagnostics(diags, config.format))
        return EXIT_DIAGNOSTICS
    assert config.output is not None
    out_dir = Path(config.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    for unit in skeletons:
        path = out_dir / f"{unit.class_name}.skel"
        path.write_text(unit.text, encoding="utf-8", newline="\n")
        stdout.write(f"wrote {path}\n")
    for unit in monitors:
        path = out_dir / f"{unit.class_name}.monitor"
        path.write_text(unit.monitor_text, encoding="utf-8", newline="\n")
        stdout.write(f"wrote {path}\n")
    stderr.write(render_diagnostics(diags, config.format))
    return EXIT_DIAGNOSTICS if has_errors(diags) else EXIT_OK


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def run(config: RunConfig, stdout: IO[str] | None = None,
        stderr: IO[str] | None = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr

    diags: list[Diagnostic] = []
    try:
        repo = _load_repository(config.preface_dir, stderr, diags)
    except ParseError as failure:
        stderr.write(f"parse error: {failure}\n")
        return EXIT_USAGE
    except OSError as failure:
        stderr.write(f"error: {failure}\n")
        return EXIT_USAGE
    if repo is None:
        return EXIT_USAGE

    diags.extend(validate_preface(repo, config.root_package))
    try:
        eff = compose(repo, config.root_package)
    except CompositionError as failure:
        stderr.write(f"composition error: {failure}\n")
        return EXIT_COMPOSITION

    model: Model | None = None
    if config.command in ("validate", "transform", "skeleton"):
        try:
            model = _read_model(config)
        except ParseError as failure:
            stderr.write(f"parse error: {failure}\n")
            return EXIT_USAGE
        except OSError as failure:
            stderr.write(f"error: {failure}\n")
            return EXIT_USAGE

    if config.command == "compose":
        return _cmd_compose(config, eff, diags, stdout, stderr)
    if config.command == "validate":
        assert model is not None
        return _cmd_validate(config, model, eff, diags, stdout, stderr)
    if config.command == "transform":
        assert model is not None
        return _cmd_transform(config, model, eff, diags, stdout, stderr)
    if config.command == "explain":
        return _cmd_explain(config, eff, diags, stdout, stderr)
    if config.command == "skeleton":
        assert model is not None
        return _cmd_skeleton(config, model, eff, diags, stdout, stderr)
    stderr.write(f"error: unknown command '{config.command}'\n")
    return EXIT_USAGE


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prefacer",
        description="Compose definition packages, validate models against the "
                    "result, and generate skeleton and monitor code.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--preface", required=True, metavar="DIR",
                       help="directory of .preface package files")
        p.add_argument("--root", required=True, metavar="ID",
                       help="id of the root package")
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="diagnostic rendering (default: text)")

    p_compose = sub.add_parser("compose", help="print the effective definitions")
    common(p_compose)

    p_validate = sub.add_parser("validate", help="check a model")
    p_validate.add_argument("model", help="model file")
    common(p_validate)

    p_transform = sub.add_parser("transform", help="apply statechart induction")
    p_transform.add_argument("model", help="model file")
    common(p_transform)
    p_transform.add_argument("-o", "--output", metavar="FILE",
                             help="write the transformed model here instead of stdout")

    p_explain = sub.add_parser("explain", help="show a key's override chain")
    p_explain.add_argument("key", help="constant or option key")
    common(p_explain)

    p_skeleton = sub.add_parser("skeleton", help="write skeletons and monitors")
    p_skeleton.add_argument("model", help="model file")
    common(p_skeleton)
    p_skeleton.add_argument("-o", "--output", required=True, metavar="DIR",
                            help="directory for the generated files")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_arg_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        preface_dir=args.preface,
        root_package=args.root,
        model_path=getattr(args, "model", None),
        key=getattr(args, "key", None),
        output=getattr(args, "output", None),
        format=args.format,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
