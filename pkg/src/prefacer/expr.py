"""Expression trees for constraints, preconditions, invariants and guards.

The language is a small navigational predicate calculus: boolean
connectives, integer arithmetic (+ / -), six comparison operators,
bounded quantifiers over sequences, feature navigation via ``.``, and
three built-in calls (``size``, ``isEmpty``, ``hasStereotype``).

Nodes are immutable.  Source locations are carried for diagnostics but
never participate in structural equality, so a reparsed expression
compares equal to the tree it was printed from.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import SourceLocation

#: Values a literal node may hold.  ``bool`` must be tested before ``int``
#: everywhere, since Python bools are ints.
LiteralValue = bool | int | str

COMPARE_OPS = ("=", "<>", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Literal:
    value: LiteralValue
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VarRef:
    name: str
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Nav:
    """Feature navigation, ``target.feature``."""

    target: Expr
    feature: str
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    """Built-in call: ``size``, ``isEmpty`` or ``hasStereotype``."""

    fn: str
    args: tuple[Expr, ...]
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Forall:
    var: str
    domain: Expr
    body: Expr
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Exists:
    var: str
    domain: Expr
    body: Expr
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class And:
    lhs: Expr
    rhs: Expr
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Or:
    lhs: Expr
    rhs: Expr
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Not:
    operand: Expr
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Implies:
    lhs: Expr
    rhs: Expr
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Compare:
    op: str
    lhs: Expr
    rhs: Expr
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Add:
    lhs: Expr
    rhs: Expr
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sub:
    lhs: Expr
    rhs: Expr
    loc: SourceLocation | None = field(default=None, compare=False, repr=False)


Expr = (
    Literal
    | VarRef
    | Nav
    | Call
    | Forall
    | Exists
    | And
    | Or
    | Not
    | Implies
    | Compare
    | Add
    | Sub
)


def free_vars(e: Expr) -> frozenset[str]:
    """Names of unbound variable references, ``self`` included."""

    if isinstance(e, Literal):
        return frozenset()
    if isinstance(e, VarRef):
        return frozenset((e.name,))
    if isinstance(e, Nav):
        return free_vars(e.target)
    if isinstance(e, Call):
        out: frozenset[str] = frozenset()
        for a in e.args:
            out |= free_vars(a)
        return out
    if isinstance(e, (Forall, Exists)):
        return free_vars(e.domain) | (free_vars(e.body) - {e.var})
    if isinstance(e, Not):
        return free_vars(e.operand)
    if isinstance(e, (And, Or, Implies, Compare, Add, Sub)):
        return free_vars(e.lhs) | free_vars(e.rhs)
    raise TypeError(f"not an expression node: {e!r}")


def conjoin(parts: list[Expr]) -> Expr:
    """Left-associated conjunction of one or more expressions."""

    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjoin(parts: list[Expr]) -> Expr:
    """Left-associated disjunction of one or more expressions."""

    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out
