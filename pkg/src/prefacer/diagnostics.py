"""Severity-tagged findings shared by every checking phase.

A ``Diagnostic`` never aborts anything: checkers collect them and the caller
decides what an error-severity finding means (the command line turns them
into exit codes).  Codes are stable so scripts can match on them:

=========  ====================================================
``E0xx``   structural model checks
``E1xx``   preface composition and package hygiene
``E2xx``   constraint evaluation
``E3xx``   transformation and generation
=========  ====================================================

Warnings carry a ``W`` prefix and informational notes an ``I`` prefix, with
the same hundreds digit as the phase that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

Severity = Literal["error", "warning", "info"]


@dataclass(frozen=True)
class SourceLocation:
    """1-based position of a construct inside an input file."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    """One finding about a model, a preface, or a transformation.

    ``path`` names the offending element ("C", "C.m1", "SC/2", a package id);
    ``provenance`` names the package whose definition triggered the finding,
    when there is one.
    """

    severity: Severity
    code: str
    path: str
    message: str
    location: SourceLocation | None = None
    provenance: str | None = None


def error_count(diags: Iterable[Diagnostic]) -> int:
    return sum(1 for d in diags if d.severity == "error")


def warning_count(diags: Iterable[Diagnostic]) -> int:
    return sum(1 for d in diags if d.severity == "warning")


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diags)
