"""Statechart-to-class induction.

Four rules turn a statechart into ordinary class structure on the class it
is attached to:

1. one Boolean attribute per state ("the object is in s1"),
2. one class invariant requiring exactly one of those flags to hold,
3. one operation per distinct event name, bound by name and created
   parameterless when the class does not already have it,
4. one induced precondition per event: the disjunction of the flags of the
   states the event can fire from.

Everything a rule adds carries an ``Origin`` naming this transform and the
source chart.  That makes the whole pass idempotent (a second run finds
its own output and adds nothing) and conservative (authored elements are
never edited; an authored name standing in the way is reported as a clash
and the element is left alone, while the rest of the chart is still
processed).  Postconditions are never induced: which flags an operation
may change is a framing question, and the framing option is recorded in
generated code rather than guessed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import expr as E
from .diagnostics import Diagnostic, has_errors
from .model import (
    Attribute,
    ClassDef,
    Invariant,
    Model,
    Operation,
    Origin,
    Statechart,
    member_path,
)
from .preface import STATECHART_TO_CLASS, EffectiveDefinitions

TRANSFORM_ID = STATECHART_TO_CLASS


@dataclass
class TransformReport:
    """What a transformation run added, and what it had to refuse."""

    induced_attributes: list[tuple[str, str]] = field(default_factory=list)
    induced_invariants: list[tuple[str, str]] = field(default_factory=list)
    induced_operations: list[tuple[str, str]] = field(default_factory=list)
    induced_preconditions: list[tuple[str, str]] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def merge(self, other: "TransformReport") -> None:
        self.induced_attributes.extend(other.induced_attributes)
        self.induced_invariants.extend(other.induced_invariants)
        self.induced_operations.extend(other.induced_operations)
        self.induced_preconditions.extend(other.induced_preconditions)
        self.diagnostics.extend(other.diagnostics)


def _origin_for(chart: Statechart) -> Origin:
    return Origin("induced", TRANSFORM_ID, chart.name)


def _induced_here(origin: Origin, chart: Statechart) -> bool:
    return (origin.kind == "induced"
            and origin.rule_id == TRANSFORM_ID
            and origin.chart_name == chart.name)


def _swap_class(model: Model, new_cls: ClassDef) -> Model:
    classes = tuple(new_cls if c.name == new_cls.name else c for c in model.classes)
    return replace(model, classes=classes)


def _attached(model: Model, chart: Statechart) -> ClassDef:
    cls = model.class_named(chart.attached_to)
    if cls is None:
        raise ValueError(
            f"statechart '{chart.name}' is attached to unknown class "
            f"'{chart.attached_to}'; run builtin_check first")
    return cls


# ---------------------------------------------------------------------------
# Rule 1: a Boolean attribute per state
# ---------------------------------------------------------------------------


def rule1_state_attributes(model: Model, chart: Statechart) -> tuple[Model, TransformReport]:
    """Give the attached class one Boolean flag per state.

    A state whose name an authored attribute or operation already bears is
    reported as a name clash and skipped; the other states are still
    induced.  Flags this rule induced on an earlier run are recognised by
    their origin and left alone.
    """

    report = TransformReport()
    cls = _attached(model, chart)
    attrs = {a.name: a for a in cls.attributes}
    ops = {o.name for o in cls.operations}

    added: list[Attribute] = []
    for state in chart.states:
        existing = attrs.get(state.name)
        if existing is not None:
            if _induced_here(existing.origin, chart):
                continue
            report.diagnostics.append(Diagnostic(
                "error", "E301", member_path(cls, state.name),
                f"cannot induce state attribute '{state.name}': the name is "
                f"already taken on '{cls.name}'", existing.loc))
            continue
        if state.name in ops:
            report.diagnostics.append(Diagnostic(
                "error", "E301", member_path(cls, state.name),
                f"cannot induce state attribute '{state.name}': an operation "
                f"of '{cls.name}' has that name", cls.loc))
            continue
        flag = Attribute(state.name, "Boolean", _origin_for(chart))
        added.append(flag)
        attrs[state.name] = flag
        report.induced_attributes.append(
            (member_path(cls, state.name), f"{state.name} : Boolean"))

    if not added:
        return model, report
    new_cls = replace(cls, attributes=cls.attributes + tuple(added))
    return _swap_class(model, new_cls), report


# ---------------------------------------------------------------------------
# Rule 2: the states are mutually exclusive and one always holds
# ---------------------------------------------------------------------------


def exactly_one(names: tuple[str, ...]) -> E.Expr:
    """Exactly one of ``names`` is true, as a disjunction of full
    conjunctions in declaration order: ``(a and not b) or (not a and b)``.
    A single name is just that name."""

    terms: list[E.Expr] = []
    for index, _ in enumerate(names):
        literals: list[E.Expr] = [
            E.VarRef(n) if j == index else E.Not(E.VarRef(n))
            for j, n in enumerate(names)
        ]
        terms.append(E.conjoin(literals))
    return E.disjoin(terms)


def rule2_mutex_invariant(model: Model, chart: Statechart) -> tuple[Model, TransformReport]:
    """Add the exactly-one invariant over the chart's state flags.

    Requires rule 1 to have run for this chart.  The invariant this rule
    added on an earlier run is recognised by origin; if the chart changed
    in between, the stale invariant is replaced rather than duplicated.
    """

    from .textio import format_expr

    report = TransformReport()
    if not chart.states:
        return model, report
    cls = _attached(model, chart)
    wanted = exactly_one(chart.state_names())

    kept: list[Invariant] = []
    found = False
    for inv in cls.invariants:
        if _induced_here(inv.origin, chart):
            if inv.expr == wanted and not found:
                found = True
                kept.append(inv)
            continue  # a stale induced invariant for this chart is dropped
        kept.append(inv)
    if not found:
        kept.append(Invariant(wanted, _origin_for(chart)))
        report.induced_invariants.append((cls.name, format_expr(wanted)))
    if tuple(kept) == cls.invariants:
        return model, report
    return _swap_class(model, replace(cls, invariants=tuple(kept))), report


# ---------------------------------------------------------------------------
# Rule 3: events are operations
# ---------------------------------------------------------------------------


def chart_events(chart: Statechart) -> tuple[str, ...]:
    """Distinct event names in transition declaration order."""

    seen: list[str] = []
    for t in chart.transitions:
        if t.event not in seen:
            seen.append(t.event)
    return tuple(seen)


def rule3_event_operations(model: Model, chart: Statechart) -> tuple[Model, TransformReport]:
    """Bind every event to the same-named operation of the attached class.

    An event with no such operation gets a parameterless one, recorded
    with an informational diagnostic.  An event whose name an attribute
    already bears is a clash: nothing is induced for it.
    """

    report = TransformReport()
    cls = _attached(model, chart)
    op_names = {o.name for o in cls.operations}
    attr_names = {a.name for a in cls.attributes}

    added: list[Operation] = []
    for event in chart_events(chart):
        if event in op_names:
            continue
        if event in attr_names:
            report.diagnostics.append(Diagnostic(
                "error", "E302", member_path(cls, event),
                f"cannot induce operation '{event}': an attribute of "
                f"'{cls.name}' has that name", cls.loc))
            continue
        op = Operation(event, origin=_origin_for(chart))
        added.append(op)
        op_names.add(event)
        report.induced_operations.append((member_path(cls, event), f"{event}()"))
        report.diagnostics.append(Diagnostic(
            "info", "I301", member_path(cls, event),
            f"induced parameterless operation '{event}' for event '{event}' "
            f"of '{chart.name}'"))

    if not added:
        return model, report
    new_cls = replace(cls, operations=cls.operations + tuple(added))
    return _swap_class(model, new_cls), report


# ---------------------------------------------------------------------------
# Rule 4: events may only fire from their source states
# ---------------------------------------------------------------------------


def rule4_preconditions(model: Model, chart: Statechart) -> tuple[Model, TransformReport]:
    """Give every event operation the induced precondition "the object is
    in one of the event's source states".

    The disjuncts follow state declaration order, and a single source
    prints as the bare flag.  Requires rules 1 and 3 for this chart; an
    event whose source flag fell to a rule-1 clash is skipped (the clash
    was already reported).  Postconditions are left alone.
    """

    from .textio import format_expr

    report = TransformReport()
    cls = _attached(model, chart)
    attrs = {a.name: a for a in cls.attributes}
    order = {name: i for i, name in enumerate(chart.state_names())}

    new_ops = list(cls.operations)
    changed = False
    for event in chart_events(chart):
        sources = sorted(
            {t.source for t in chart.transitions if t.event == event},
            key=lambda name: order.get(name, len(order)))
        flags_ok = all(
            name in attrs and _induced_here(attrs[name].origin, chart)
            for name in sources)
        if not sources or not flags_ok:
            continue

        index = next((i for i, o in enumerate(new_ops) if o.name == event), None)
        if index is None:
            continue
        op = new_ops[index]
        wanted = E.disjoin([E.VarRef(name) for name in sources])
        if op.pre_induced is not None:
            previous_origin = op.pre_induced[1]
            if previous_origin.chart_name != chart.name:
                report.diagnostics.append(Diagnostic(
                    "warning", "W301", member_path(cls, event),
                    f"precondition for '{event}' was already induced from "
                    f"'{previous_origin.chart_name}'; '{chart.name}' leaves it alone"))
                continue
            if op.pre_induced[0] == wanted:
                continue
        new_ops[index] = replace(op, pre_induced=(wanted, _origin_for(chart)))
        changed = True
        description = format_expr(wanted)
        if op.pre_authored is not None:
            description += (
                "; effective precondition: "
                + format_expr(E.And(op.pre_authored, wanted)))
        report.induced_preconditions.append((member_path(cls, event), description))

    if not changed:
        return model, report
    return _swap_class(model, replace(cls, operations=tuple(new_ops))), report


# ---------------------------------------------------------------------------
# The whole pass
# ---------------------------------------------------------------------------


def apply_transforms(model: Model, eff: EffectiveDefinitions) -> tuple[Model, TransformReport]:
    """Run the enabled transforms over every statechart in declaration order.

    With the transform disabled (or never selected) this is the identity.
    A clash on one element never aborts the others: rule 2 is withheld for
    a chart whose rule-1 run clashed (its invariant would name the wrong
    attribute), rule 4 skips the affected events, and everything else
    proceeds.  Applying the pass twice is a no-op the second time.
    """

    report = TransformReport()
    if not eff.transform_enabled(TRANSFORM_ID):
        return model, report
    if eff.option("statechart.attach_to") == "method":
        for chart in model.statecharts:
            report.diagnostics.append(Diagnostic(
                "warning", "W302", chart.name,
                "statechart attachment to methods is not supported; "
                f"'{chart.name}' was not transformed", chart.loc))
        return model, report

    for chart in model.statecharts:
        model, r1 = rule1_state_attributes(model, chart)
        report.merge(r1)
        if not has_errors(r1.diagnostics):
            model, r2 = rule2_mutex_invariant(model, chart)
            report.merge(r2)
        model, r3 = rule3_event_operations(model, chart)
        report.merge(r3)
        model, r4 = rule4_preconditions(model, chart)
        report.merge(r4)
    return model, report
