"""Independent reference implementations used as test oracles.

Everything here is deliberately written from the intended behaviour, not
from the package sources: a different traversal for import flattening, a
``match``-based interpreter for expressions, and dumb exhaustive
enumerations where the real code uses indexed lookups.  Tests compare the
production code against these on randomly generated inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import replace

from prefacer.expr import (
    Add,
    And,
    Call,
    Compare,
    Exists,
    Expr,
    Forall,
    Implies,
    Literal,
    Nav,
    Not,
    Or,
    Sub,
    VarRef,
)
from prefacer.model import (
    Attribute,
    ClassDef,
    Model,
    Operation,
    Statechart,
    Transition,
)
from prefacer.preface import (
    ConstDef,
    ConstraintDef,
    OptionDef,
    Package,
    PredicatedRuleDef,
    StereotypeDef,
    TagDef,
    TransformSelection,
    OPTION_CATALOGUE,
)


# ---------------------------------------------------------------------------
# Import flattening, iteratively
# ---------------------------------------------------------------------------


class OracleCompositionFailure(Exception):
    pass


def flatten_reference(repo: dict[str, Package], root_id: str) -> list[str]:
    """First-occurrence post-order of the import graph, with an explicit
    stack instead of recursion.  Returns package ids, root last."""

    if root_id not in repo:
        raise OracleCompositionFailure(f"unknown root {root_id}")

    order: list[str] = []
    done: set[str] = set()
    on_stack: set[str] = {root_id}
    stack: list[tuple[str, list[str], int]] = [(root_id, list(repo[root_id].imports), 0)]

    while stack:
        pkg_id, imports, cursor = stack[-1]
        if cursor < len(imports):
            stack[-1] = (pkg_id, imports, cursor + 1)
            child = imports[cursor]
            if child not in repo:
                raise OracleCompositionFailure(f"unknown import {child}")
            if child in done:
                continue
            if child in on_stack:
                raise OracleCompositionFailure(f"cycle through {child}")
            on_stack.add(child)
            stack.append((child, list(repo[child].imports), 0))
        else:
            stack.pop()
            on_stack.discard(pkg_id)
            done.add(pkg_id)
            order.append(pkg_id)
    return order


# ---------------------------------------------------------------------------
# Composition by sequential replay
# ---------------------------------------------------------------------------


def replay_view(flattened: list[Package]) -> dict:
    """Replay every definition of every package, in order, into plain
    dictionaries.  Later writes simply overwrite earlier ones; predicated
    rules pile up oldest first.  The result is an index-free snapshot
    comparable with ``snapshot_view`` below."""

    scalars: dict[str, tuple[object, str]] = {}
    history: dict[str, list[tuple[str, object]]] = {}
    rules: dict[str, list[tuple[object, str, str]]] = {}
    constraints: dict[str, tuple[str, str, Expr, str]] = {}
    stereotypes: dict[str, tuple[str, tuple[str, ...], str]] = {}
    tags: dict[str, tuple[str, str]] = {}
    transforms: dict[str, tuple[bool, str]] = {}

    for pkg in flattened:
        for d in pkg.definitions:
            if isinstance(d, (ConstDef, OptionDef)):
                scalars[d.key] = (d.value, pkg.id)
                history.setdefault(d.key, []).append((pkg.id, d.value))
            elif isinstance(d, PredicatedRuleDef):
                rules.setdefault(d.property_key, []).append(
                    (d.predicate, d.value, pkg.id))
            elif isinstance(d, ConstraintDef):
                constraints[d.name] = (d.scope, d.severity, d.body, pkg.id)
            elif isinstance(d, StereotypeDef):
                stereotypes[d.name] = (d.base, d.required_tags, pkg.id)
            elif isinstance(d, TagDef):
                tags[d.name] = (d.value_type, pkg.id)
            elif isinstance(d, TransformSelection):
                transforms[d.transform_id] = (d.enabled, pkg.id)

    for key, entry in OPTION_CATALOGUE.items():
        scalars.setdefault(key, (entry.default, "catalogue-default"))

    # Newest-first, to match the consultation order of predicated chains.
    return {
        "scalars": scalars,
        "history": {k: tuple(v) for k, v in history.items()},
        "rules": {k: tuple(reversed(v)) for k, v in rules.items()},
        "constraints": constraints,
        "stereotypes": stereotypes,
        "tags": tags,
        "transforms": transforms,
    }


def snapshot_view(eff) -> dict:
    """The same index-free snapshot, taken from an ``EffectiveDefinitions``."""

    return {
        "scalars": {k: (v, p.package_id) for k, (v, p) in eff.scalars.items()},
        "history": {
            k: tuple((e.package_id, e.value) for e in entries)
            for k, entries in eff.scalar_history.items()
        },
        "rules": {
            k: tuple((pred, value, prov.package_id) for pred, value, prov in chain)
            for k, chain in eff.predicated.items()
        },
        "constraints": {
            name: (d.scope, d.severity, d.body, prov.package_id)
            for name, (d, prov) in eff.constraints.items()
        },
        "stereotypes": {
            name: (d.base, d.required_tags, prov.package_id)
            for name, (d, prov) in eff.stereotypes.items()
        },
        "tags": {
            name: (d.value_type, prov.package_id)
            for name, (d, prov) in eff.tags.items()
        },
        "transforms": {
            tid: (enabled, prov.package_id)
            for tid, (enabled, prov) in eff.transforms.items()
        },
    }


def definition_keys(pkg: Package) -> set[tuple[str, str]]:
    """The (kind, key) pairs a package writes; packages with disjoint key
    sets can swap places in the replay without changing the outcome."""

    keys: set[tuple[str, str]] = set()
    for d in pkg.definitions:
        if isinstance(d, (ConstDef, OptionDef)):
            keys.add(("scalar", d.key))
        elif isinstance(d, PredicatedRuleDef):
            keys.add(("rule", d.property_key))
        elif isinstance(d, ConstraintDef):
            keys.add(("constraint", d.name))
        elif isinstance(d, StereotypeDef):
            keys.add(("stereotype", d.name))
        elif isinstance(d, TagDef):
            keys.add(("tag", d.name))
        elif isinstance(d, TransformSelection):
            keys.add(("transform", d.transform_id))
    return keys


# ---------------------------------------------------------------------------
# Brute-force expression interpreter
# ---------------------------------------------------------------------------


class BruteEvalFailure(Exception):
    """The oracle's counterpart of an evaluation error."""


_ELEMENTS = (ClassDef, Attribute, Operation, Statechart, Transition)


def _kind(v: object) -> str:
    if type(v) is bool:
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, str):
        return "str"
    if isinstance(v, tuple):
        return "seq"
    if isinstance(v, _ELEMENTS):
        return "elem"
    return "?"


def _as_bool(v: object) -> bool:
    if type(v) is not bool:
        raise BruteEvalFailure(f"not a bool: {_kind(v)}")
    return v


def _as_int(v: object) -> int:
    if _kind(v) != "int":
        raise BruteEvalFailure(f"not an int: {_kind(v)}")
    return v


def _as_seq(v: object) -> tuple:
    if not isinstance(v, tuple):
        raise BruteEvalFailure(f"not a sequence: {_kind(v)}")
    return v


def _class_by_name(model: Model | None, name: str) -> ClassDef:
    cls = model.class_named(name) if model is not None else None
    if cls is None:
        raise BruteEvalFailure(f"no class {name}")
    return cls


_FEATURES = {
    ClassDef: {
        "name": lambda e, m: e.name,
        "superclasses": lambda e, m: tuple(_class_by_name(m, n) for n in e.superclasses),
        "attributes": lambda e, m: tuple(e.attributes),
        "operations": lambda e, m: tuple(e.operations),
        "stereotypes": lambda e, m: tuple(sorted(e.stereotypes)),
    },
    Statechart: {
        "name": lambda e, m: e.name,
        "states": lambda e, m: tuple(s.name for s in e.states),
        "transitions": lambda e, m: tuple(e.transitions),
        "attachedTo": lambda e, m: _class_by_name(m, e.attached_to),
    },
    Transition: {
        "source": lambda e, m: e.source,
        "target": lambda e, m: e.target,
        "event": lambda e, m: e.event,
    },
    Attribute: {"name": lambda e, m: e.name},
    Operation: {"name": lambda e, m: e.name},
}


def brute_eval(e: Expr, bindings: dict[str, object], model: Model | None = None):
    """Evaluate an expression the slow, obvious way.

    Same semantics as the production evaluator is supposed to have:
    strict types, ``and``/``or`` stop on a deciding left operand, both
    quantifiers visit every element of their domain.
    """

    def ev(node: Expr, env: dict[str, object]) -> object:
        match node:
            case Literal(value=v):
                return v
            case VarRef(name=n):
                if n not in env:
                    raise BruteEvalFailure(f"unbound {n}")
                return env[n]
            case Nav(target=t, feature=f):
                subject = ev(t, env)
                table = _FEATURES.get(type(subject))
                if table is None or f not in table:
                    raise BruteEvalFailure(f"no feature {f} on {_kind(subject)}")
                return table[f](subject, model)
            case Call(fn="size", args=(arg,)):
                return len(_as_seq(ev(arg, env)))
            case Call(fn="isEmpty", args=(arg,)):
                return len(_as_seq(ev(arg, env))) == 0
            case Call(fn="hasStereotype", args=(subject_e, name_e)):
                subject = ev(subject_e, env)
                if not isinstance(subject, _ELEMENTS):
                    raise BruteEvalFailure("hasStereotype on a non-element")
                name = ev(name_e, env)
                if not isinstance(name, str):
                    raise BruteEvalFailure("hasStereotype name is not a string")
                carried = subject.stereotypes if isinstance(subject, ClassDef) else frozenset()
                return name in carried
            case Call():
                raise BruteEvalFailure(f"unknown call {node.fn}/{len(node.args)}")
            case Forall(var=v, domain=d, body=b):
                outcome = True
                for item in _as_seq(ev(d, env)):
                    outcome = _as_bool(ev(b, {**env, v: item})) and outcome
                return outcome
            case Exists(var=v, domain=d, body=b):
                outcome = False
                for item in _as_seq(ev(d, env)):
                    outcome = _as_bool(ev(b, {**env, v: item})) or outcome
                return outcome
            case And(lhs=l, rhs=r):
                return _as_bool(ev(l, env)) and _as_bool(ev(r, env))
            case Or(lhs=l, rhs=r):
                return _as_bool(ev(l, env)) or _as_bool(ev(r, env))
            case Not(operand=o):
                return not _as_bool(ev(o, env))
            case Implies(lhs=l, rhs=r):
                a = _as_bool(ev(l, env))
                b = _as_bool(ev(r, env))
                return (not a) or b
            case Compare(op=op, lhs=l, rhs=r):
                a, b = ev(l, env), ev(r, env)
                if _kind(a) != _kind(b):
                    raise BruteEvalFailure(f"comparing {_kind(a)} with {_kind(b)}")
                if op == "=":
                    return a == b
                if op == "<>":
                    return a != b
                if _kind(a) not in ("int", "str"):
                    raise BruteEvalFailure(f"no order on {_kind(a)}")
                return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
            case Add(lhs=l, rhs=r):
                return _as_int(ev(l, env)) + _as_int(ev(r, env))
            case Sub(lhs=l, rhs=r):
                return _as_int(ev(l, env)) - _as_int(ev(r, env))
        raise BruteEvalFailure(f"unknown node {node!r}")

    return ev(e, dict(bindings))


def boolean_assignments_satisfying(e: Expr, names: list[str]) -> list[dict[str, bool]]:
    """All assignments of booleans to ``names`` under which ``e`` is true."""

    satisfying = []
    for values in itertools.product((False, True), repeat=len(names)):
        env = dict(zip(names, values))
        if brute_eval(e, env) is True:
            satisfying.append(env)
    return satisfying


# ---------------------------------------------------------------------------
# Exhaustive element paths
# ---------------------------------------------------------------------------


def all_element_paths(model: Model) -> dict[str, object]:
    """Every addressable element of a model, path -> element, enumerated
    without any lookup machinery.  Mirrors the intended shadowing: the
    first declaration of a name wins, a class hides a same-named chart,
    an attribute a same-named operation."""

    table: dict[str, object] = {}
    for chart in model.statecharts:
        if chart.name in table:
            continue  # members of a shadowed duplicate are unreachable
        table[chart.name] = chart
        for index, t in enumerate(chart.transitions):
            table[f"{chart.name}/{index}"] = t
        for state in chart.states:
            table.setdefault(f"{chart.name}/{state.name}", state)
    seen_classes: set[str] = set()
    for cls in model.classes:
        if cls.name in seen_classes:
            continue
        seen_classes.add(cls.name)
        table[cls.name] = cls
        for op in reversed(cls.operations):
            table[f"{cls.name}.{op.name}"] = op
        for attr in reversed(cls.attributes):
            table[f"{cls.name}.{attr.name}"] = attr
    return table


# ---------------------------------------------------------------------------
# Transform conservativity
# ---------------------------------------------------------------------------


def authored_view(model: Model) -> Model:
    """The model with everything induced stripped away."""

    classes = []
    for cls in model.classes:
        classes.append(replace(
            cls,
            attributes=tuple(a for a in cls.attributes if a.origin.kind == "authored"),
            operations=tuple(
                replace(o, pre_induced=None)
                for o in cls.operations if o.origin.kind == "authored"),
            invariants=tuple(i for i in cls.invariants if i.origin.kind == "authored"),
        ))
    return replace(model, classes=tuple(classes))
