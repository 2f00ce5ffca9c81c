"""In-memory representation of models: classes plus statecharts.

The element vocabulary is deliberately small.  A model holds class
definitions and statecharts; a class holds attributes, operations and
invariants; a statechart holds states and event-labelled transitions and is
attached to exactly one class by name.  Every induced element (one created
by a transformation rather than written by the modeller) carries an
``Origin`` recording which rule produced it and from which chart, which is
what makes transformations idempotent and conservative.

Name resolution is deferred: the dataclasses happily represent broken
models, and ``builtin_check`` reports every structural violation as a
diagnostic instead of raising.  All values are immutable after
construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diagnostics import Diagnostic, SourceLocation
from .expr import Expr, LiteralValue

# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------

#: The closed set of attribute / parameter types.
ATTRIBUTE_TYPES = frozenset({"Boolean", "Integer", "String"})

#: The metaclasses constraints and stereotypes may scope over.
METACLASSES = frozenset({"Class", "Attribute", "Operation", "Statechart", "Transition"})

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def is_identifier(text: str) -> bool:
    return bool(_IDENT_RE.match(text))


class MalformedPathError(ValueError):
    """Raised by ``lookup_element`` for syntactically invalid paths."""


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Origin:
    """Where an element came from.

    ``kind`` is ``"authored"`` or ``"induced"``; induced elements name the
    rule that created them and the statechart they were derived from.
    """

    kind: str
    rule_id: str | None = None
    chart_name: str | None = None


AUTHORED = Origin("authored")


@dataclass(frozen=True)
class Attribute:
    name: str
    type_name: str
    origin: Origin = AUTHORED
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Param:
    name: str
    type_name: str


@dataclass(frozen=True)
class Operation:
    """An operation of a class.

    Authored pre/postconditions are kept apart from the induced
    precondition so that transformation never rewrites modeller text; the
    effective precondition is the conjunction of both parts.
    """

    name: str
    params: tuple[Param, ...] = ()
    pre_authored: Expr | None = None
    post_authored: Expr | None = None
    pre_induced: tuple[Expr, Origin] | None = None
    origin: Origin = AUTHORED
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(self.params))


@dataclass(frozen=True)
class Invariant:
    expr: Expr
    origin: Origin = AUTHORED


@dataclass(frozen=True)
class ClassDef:
    name: str
    superclasses: tuple[str, ...] = ()
    stereotypes: frozenset[str] = frozenset()
    tagged_values: dict[str, LiteralValue] = field(default_factory=dict)
    attributes: tuple[Attribute, ...] = ()
    operations: tuple[Operation, ...] = ()
    invariants: tuple[Invariant, ...] = ()
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "superclasses", tuple(self.superclasses))
        object.__setattr__(self, "stereotypes", frozenset(self.stereotypes))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "operations", tuple(self.operations))
        object.__setattr__(self, "invariants", tuple(self.invariants))


@dataclass(frozen=True)
class State:
    name: str
    initial: bool = False
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    event: str
    guard: Expr | None = None
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Statechart:
    name: str
    attached_to: str
    states: tuple[State, ...] = ()
    transitions: tuple[Transition, ...] = ()
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))

    def initial_states(self) -> tuple[State, ...]:
        return tuple(s for s in self.states if s.initial)

    def state_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.states)


@dataclass(frozen=True)
class Model:
    name: str
    classes: tuple[ClassDef, ...] = ()
    statecharts: tuple[Statechart, ...] = ()
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "statecharts", tuple(self.statecharts))

    def class_named(self, name: str) -> ClassDef | None:
        for cls in self.classes:
            if cls.name == name:
                return cls
        return None

    def chart_named(self, name: str) -> Statechart | None:
        for chart in self.statecharts:
            if chart.name == name:
                return chart
        return None


ModelElement = Model | ClassDef | Attribute | Operation | Statechart | Transition | State


def metaclass_of(element: ModelElement) -> str:
    if isinstance(element, ClassDef):
        return "Class"
    if isinstance(element, Attribute):
        return "Attribute"
    if isinstance(element, Operation):
        return "Operation"
    if isinstance(element, Statechart):
        return "Statechart"
    if isinstance(element, Transition):
        return "Transition"
    if isinstance(element, State):
        return "State"
    if isinstance(element, Model):
        return "Model"
    raise TypeError(f"not a model element: {element!r}")


def stereotypes_of(element: ModelElement) -> frozenset[str]:
    """Stereotype set of an element; empty for kinds that cannot carry one."""

    if isinstance(element, ClassDef):
        return element.stereotypes
    return frozenset()


# ---------------------------------------------------------------------------
# Paths and lookup
# ---------------------------------------------------------------------------
#
# Paths address elements textually:
#
#   C           a class (or a statechart, if no class has the name)
#   C.m1        an attribute or operation of class C
#   SC/s2       a state of statechart SC
#   SC/3        the transition at index 3 of statechart SC


def member_path(cls: ClassDef, member_name: str) -> str:
    return f"{cls.name}.{member_name}"


def state_path(chart: Statechart, state_name: str) -> str:
    return f"{chart.name}/{state_name}"


def transition_path(chart: Statechart, index: int) -> str:
    return f"{chart.name}/{index}"


def lookup_element(model: Model, path: str) -> ModelElement | None:
    """Resolve a textual path; ``None`` when nothing bears the name.

    Raises ``MalformedPathError`` for syntactically invalid paths (empty
    segments, mixed separators, more than two segments).
    """

    if not path or path != path.strip():
        raise MalformedPathError(f"malformed element path: {path!r}")
    has_dot = "." in path
    has_slash = "/" in path
    if has_dot and has_slash:
        raise MalformedPathError(f"malformed element path: {path!r}")

    if has_dot:
        head, _, member = path.partition(".")
        if not is_identifier(head) or not is_identifier(member) or "." in member:
            raise MalformedPathError(f"malformed element path: {path!r}")
        cls = model.class_named(head)
        if cls is None:
            return None
        for attr in cls.attributes:
            if attr.name == member:
                return attr
        for op in cls.operations:
            if op.name == member:
                return op
        return None

    if has_slash:
        head, _, item = path.partition("/")
        if not is_identifier(head) or not item or "/" in item:
            raise MalformedPathError(f"malformed element path: {path!r}")
        chart = model.chart_named(head)
        if chart is None:
            return None
        if item.isdigit():
            index = int(item)
            if index < len(chart.transitions):
                return chart.transitions[index]
            return None
        if not is_identifier(item):
            raise MalformedPathError(f"malformed element path: {path!r}")
        for state in chart.states:
            if state.name == item:
                return state
        return None

    if not is_identifier(path):
        raise MalformedPathError(f"malformed element path: {path!r}")
    cls = model.class_named(path)
    if cls is not None:
        return cls
    return model.chart_named(path)


# ---------------------------------------------------------------------------
# Structural checking
# ---------------------------------------------------------------------------


def _err(code: str, path: str, message: str, loc: SourceLocation | None) -> Diagnostic:
    return Diagnostic("error", code, path, message, loc)


def _check_origin(origin: Origin, path: str, loc: SourceLocation | None,
                  diags: list[Diagnostic]) -> None:
    if origin.kind not in ("authored", "induced"):
        diags.append(_err("E015", path, f"invalid origin kind {origin.kind!r}", loc))
    elif origin.kind == "induced" and not origin.rule_id:
        diags.append(_err("E015", path, "induced element lacks a rule id", loc))


def _check_class(model: Model, cls: ClassDef, diags: list[Diagnostic]) -> None:
    attr_names: set[str] = set()
    for attr in cls.attributes:
        path = member_path(cls, attr.name)
        if attr.name in attr_names:
            diags.append(_err("E004", path, f"duplicate attribute name '{attr.name}'", attr.loc))
        attr_names.add(attr.name)
        if attr.type_name not in ATTRIBUTE_TYPES:
            diags.append(_err(
                "E009", path,
                f"attribute type '{attr.type_name}' is not one of Boolean, Integer, String",
                attr.loc))
        _check_origin(attr.origin, path, attr.loc, diags)

    op_names: set[str] = set()
    for op in cls.operations:
        path = member_path(cls, op.name)
        if op.name in op_names:
            diags.append(_err("E005", path, f"duplicate operation name '{op.name}'", op.loc))
        op_names.add(op.name)
        if op.name in attr_names:
            diags.append(_err(
                "E006", path,
                f"'{op.name}' names both an attribute and an operation of '{cls.name}'",
                op.loc))
        param_names: set[str] = set()
        for param in op.params:
            if param.name in param_names:
                diags.append(_err(
                    "E013", path, f"duplicate parameter name '{param.name}'", op.loc))
            param_names.add(param.name)
            if param.type_name not in ATTRIBUTE_TYPES:
                diags.append(_err(
                    "E016", path,
                    f"parameter type '{param.type_name}' is not one of Boolean, Integer, String",
                    op.loc))
        _check_origin(op.origin, path, op.loc, diags)
        if op.pre_induced is not None:
            _check_origin(op.pre_induced[1], path, op.loc, diags)

    for sup in cls.superclasses:
        if model.class_named(sup) is None:
            diags.append(_err(
                "E007", cls.name, f"unknown superclass '{sup}' of '{cls.name}'", cls.loc))
    if _inherits_from_itself(model, cls):
        diags.append(_err(
            "E008", cls.name, f"'{cls.name}' is its own transitive superclass", cls.loc))

    for inv in cls.invariants:
        _check_origin(inv.origin, cls.name, cls.loc, diags)


def _inherits_from_itself(model: Model, cls: ClassDef) -> bool:
    seen: set[str] = set()
    work = list(cls.superclasses)
    while work:
        name = work.pop()
        if name == cls.name:
            return True
        if name in seen:
            continue
        seen.add(name)
        parent = model.class_named(name)
        if parent is not None:
            work.extend(parent.superclasses)
    return False


def _check_chart(model: Model, chart: Statechart, diags: list[Diagnostic]) -> None:
    if model.class_named(chart.attached_to) is None:
        diags.append(_err(
            "E003", chart.name,
            f"statechart '{chart.name}' is attached to unknown class '{chart.attached_to}'",
            chart.loc))

    state_names: set[str] = set()
    for state in chart.states:
        if state.name in state_names:
            diags.append(_err(
                "E010", state_path(chart, state.name),
                f"duplicate state name '{state.name}'", state.loc))
        state_names.add(state.name)

    initials = chart.initial_states()
    if len(initials) != 1:
        diags.append(_err(
            "E011", chart.name,
            f"statechart '{chart.name}' declares {len(initials)} initial states, expected exactly 1",
            chart.loc))

    for index, t in enumerate(chart.transitions):
        path = transition_path(chart, index)
        for end, label in ((t.source, "source"), (t.target, "target")):
            if end not in state_names:
                diags.append(_err(
                    "E012", path, f"transition {label} '{end}' is not a declared state", t.loc))
        if not is_identifier(t.event):
            diags.append(_err(
                "E014", path, f"transition event {t.event!r} is not a valid identifier", t.loc))


def builtin_check(model: Model) -> list[Diagnostic]:
    """Check every structural invariant; one diagnostic per violation.

    Pure: the model is never mutated, and the diagnostics come out in
    declaration order so repeated runs agree byte for byte.
    """

    diags: list[Diagnostic] = []

    seen_classes: set[str] = set()
    for cls in model.classes:
        if cls.name in seen_classes:
            diags.append(_err("E001", cls.name, f"duplicate class name '{cls.name}'", cls.loc))
        seen_classes.add(cls.name)
        _check_class(model, cls, diags)

    seen_charts: set[str] = set()
    for chart in model.statecharts:
        if chart.name in seen_charts:
            diags.append(_err(
                "E002", chart.name, f"duplicate statechart name '{chart.name}'", chart.loc))
        seen_charts.add(chart.name)
        _check_chart(model, chart, diags)

    return diags
