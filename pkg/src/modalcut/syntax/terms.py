"""Names, expression nodes, types and the binding machinery shared by all calculi.

Expressions are immutable trees built from a single family of node classes;
which nodes are legal (and what syntactic class they form) is decided by the
calculus that interprets them, see :mod:`modalcut.calculi`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

# Namespaces.  They are disjoint: Name("value", "x") and Name("comp", "x")
# are different names.
VALUE = "value"
COMP = "comp"
PLAIN = "plain"
CO = "co"
NAMESPACES = (VALUE, COMP, PLAIN, CO)

SIGILS = {VALUE: "%", COMP: "#", PLAIN: "", CO: "@"}

_TRAILING_INDEX = re.compile(r"^(.*?[A-Za-z_])([1-9][0-9]*)$")


@dataclass(frozen=True, slots=True)
class Name:
    ns: str
    base: str
    index: int = 0

    def __post_init__(self) -> None:
        if self.ns not in NAMESPACES:
            raise ValueError(f"unknown namespace {self.ns!r}")
        # "x3" and Name(ns, "x", 3) must be the same name, so that printing
        # and re-parsing a fresh name gives it back.
        if self.index == 0:
            m = _TRAILING_INDEX.match(self.base)
            if m:
                object.__setattr__(self, "base", m.group(1))
                object.__setattr__(self, "index", int(m.group(2)))

    @property
    def ident(self) -> str:
        return self.base + (str(self.index) if self.index else "")

    def __str__(self) -> str:
        return SIGILS[self.ns] + self.ident

    def __repr__(self) -> str:
        return f"Name({str(self)!r})"


def value_var(s: str) -> Name:
    return Name(VALUE, s)


def comp_var(s: str) -> Name:
    return Name(COMP, s)


def plain_var(s: str) -> Name:
    return Name(PLAIN, s)


def co_var(s: str) -> Name:
    return Name(CO, s)


# ---------------------------------------------------------------- types


@dataclass(frozen=True, slots=True)
class TVar:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class TBot:
    def __str__(self) -> str:
        return "Bot"


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "Type"
    cod: "Type"
    mode: str | None = None  # None, "v" or "n"

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True, slots=True)
class Monad:
    arg: "Type"

    def __str__(self) -> str:
        return show_type(self)


Type = Union[TVar, TBot, Arrow, Monad]
BOT = TBot()


def neg(a: Type) -> Type:
    return Arrow(a, BOT)


def show_type(t: Type, prec: int = 0) -> str:
    match t:
        case TVar(n):
            return n
        case TBot():
            return "Bot"
        case Monad(a):
            s = "M " + show_type(a, 2)
            return f"({s})" if prec > 1 else s
        case Arrow(a, b, m):
            op = "->" if m is None else f"->{m}"
            s = f"{show_type(a, 1)} {op} {show_type(b, 0)}"
            return f"({s})" if prec > 0 else s
    raise TypeError(f"not a type: {t!r}")


def type_size(t: Type) -> int:
    match t:
        case Arrow(a, b, _):
            return 1 + type_size(a) + type_size(b)
        case Monad(a):
            return 1 + type_size(a)
    return 1


# ---------------------------------------------------------------- expressions


@dataclass(frozen=True, slots=True)
class Var:
    name: Name


@dataclass(frozen=True, slots=True)
class CoVar:
    """A co-variable used as a co-term (sequent calculi)."""

    name: Name


@dataclass(frozen=True, slots=True)
class Lam:
    var: Name
    ann: Type | None
    body: "Expr"


@dataclass(frozen=True, slots=True)
class Mu:
    covar: Name
    ann: Type | None
    body: "Expr"


@dataclass(frozen=True, slots=True)
class MuTilde:
    var: Name
    ann: Type | None
    body: "Expr"


@dataclass(frozen=True, slots=True)
class Cut:
    term: "Expr"
    coterm: "Expr"


@dataclass(frozen=True, slots=True)
class Cons:
    arg: "Expr"
    coterm: "Expr"
    mode: str | None = None


@dataclass(frozen=True, slots=True)
class App:
    fun: "Expr"
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class Ret:
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class CoApp:
    """Co-variable application ``a t`` (monadic calculi)."""

    covar: Name
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class Bind:
    var: Name
    ann: Type | None
    arg: "Expr"
    body: "Expr"


@dataclass(frozen=True, slots=True)
class Let:
    var: Name
    ann: Type | None
    arg: "Expr"
    body: "Expr"


@dataclass(frozen=True, slots=True)
class Sub:
    var: Name
    ann: Type | None
    arg: "Expr"
    body: "Expr"


@dataclass(frozen=True, slots=True)
class Hole:
    pass


HOLE = Hole()

Expr = Union[Var, CoVar, Lam, Mu, MuTilde, Cut, Cons, App, Ret, CoApp, Bind, Let, Sub, Hole]
Path = tuple[int, ...]

BINDER_NODES = (Lam, Mu, MuTilde)
SEQ_NODES = (Bind, Let, Sub)


def children(e: Expr) -> tuple[Expr, ...]:
    match e:
        case Lam(_, _, b) | Mu(_, _, b) | MuTilde(_, _, b):
            return (b,)
        case Cut(t, k):
            return (t, k)
        case Cons(u, k, _):
            return (u, k)
        case App(f, a):
            return (f, a)
        case Ret(a) | CoApp(_, a):
            return (a,)
        case Bind(_, _, a, b) | Let(_, _, a, b) | Sub(_, _, a, b):
            return (a, b)
    return ()


def with_children(e: Expr, kids: tuple[Expr, ...]) -> Expr:
    match e:
        case Lam(x, t, _):
            return Lam(x, t, kids[0])
        case Mu(a, t, _):
            return Mu(a, t, kids[0])
        case MuTilde(x, t, _):
            return MuTilde(x, t, kids[0])
        case Cut():
            return Cut(kids[0], kids[1])
        case Cons(_, _, m):
            return Cons(kids[0], kids[1], m)
        case App():
            return App(kids[0], kids[1])
        case Ret():
            return Ret(kids[0])
        case CoApp(a, _):
            return CoApp(a, kids[0])
        case Bind(x, t, _, _):
            return Bind(x, t, kids[0], kids[1])
        case Let(x, t, _, _):
            return Let(x, t, kids[0], kids[1])
        case Sub(x, t, _, _):
            return Sub(x, t, kids[0], kids[1])
    return e


def binder_of(e: Expr) -> Name | None:
    """The name bound by ``e`` (if any)."""
    match e:
        case Lam(x, _, _) | MuTilde(x, _, _):
            return x
        case Mu(a, _, _):
            return a
        case Bind(x, _, _, _) | Let(x, _, _, _) | Sub(x, _, _, _):
            return x
    return None


def scoped_child(e: Expr) -> int | None:
    """Index of the child in which the binder of ``e`` is in scope."""
    if isinstance(e, BINDER_NODES):
        return 0
    if isinstance(e, SEQ_NODES):
        return 1
    return None


def rebind(e: Expr, new: Name, kids: tuple[Expr, ...] | None = None) -> Expr:
    kids = children(e) if kids is None else kids
    match e:
        case Lam(_, t, _):
            return Lam(new, t, kids[0])
        case Mu(_, t, _):
            return Mu(new, t, kids[0])
        case MuTilde(_, t, _):
            return MuTilde(new, t, kids[0])
        case Bind(_, t, _, _):
            return Bind(new, t, kids[0], kids[1])
        case Let(_, t, _, _):
            return Let(new, t, kids[0], kids[1])
        case Sub(_, t, _, _):
            return Sub(new, t, kids[0], kids[1])
    raise TypeError(f"{type(e).__name__} binds nothing")


def annotation(e: Expr) -> Type | None:
    return getattr(e, "ann", None)


def with_annotation(e: Expr, ann: Type | None) -> Expr:
    match e:
        case Lam(x, _, b):
            return Lam(x, ann, b)
        case Mu(a, _, b):
            return Mu(a, ann, b)
        case MuTilde(x, _, b):
            return MuTilde(x, ann, b)
        case Bind(x, _, a, b):
            return Bind(x, ann, a, b)
        case Let(x, _, a, b):
            return Let(x, ann, a, b)
        case Sub(x, _, a, b):
            return Sub(x, ann, a, b)
    return e


def subterm(e: Expr, path: Path) -> Expr:
    for i in path:
        kids = children(e)
        if i >= len(kids):
            raise IndexError(f"path {path} leaves the expression")
        e = kids[i]
    return e


def replace_at(e: Expr, path: Path, new: Expr) -> Expr:
    if not path:
        return new
    kids = list(children(e))
    i = path[0]
    if i >= len(kids):
        raise IndexError(f"path {path} leaves the expression")
    kids[i] = replace_at(kids[i], path[1:], new)
    return with_children(e, tuple(kids))


def positions(e: Expr, path: Path = ()) -> Iterator[tuple[Path, Expr]]:
    """Pre-order enumeration of (path, subexpression)."""
    yield path, e
    for i, k in enumerate(children(e)):
        yield from positions(k, path + (i,))


def size(e: Expr) -> int:
    return 1 + sum(size(k) for k in children(e))


def holes(e: Expr) -> int:
    if isinstance(e, Hole):
        return 1
    return sum(holes(k) for k in children(e))


@lru_cache(maxsize=1 << 18)
def free_names(e: Expr) -> frozenset[Name]:
    match e:
        case Var(n) | CoVar(n):
            return frozenset((n,))
        case CoApp(a, u):
            return free_names(u) | {a}
        case Lam(x, _, b) | Mu(x, _, b) | MuTilde(x, _, b):
            return free_names(b) - {x}
        case Bind(x, _, a, b) | Let(x, _, a, b) | Sub(x, _, a, b):
            return free_names(a) | (free_names(b) - {x})
    out: frozenset[Name] = frozenset()
    for k in children(e):
        out |= free_names(k)
    return out


def all_names(e: Expr) -> frozenset[Name]:
    """Free and bound names occurring anywhere in ``e``."""
    out = set(free_names(e))
    for _, s in positions(e):
        b = binder_of(s)
        if b is not None:
            out.add(b)
    return frozenset(out)


# ---------------------------------------------------------------- freshness


@dataclass
class Session:
    """Source of fresh names; one per independent rewrite/translation job."""

    counter: Iterator[int] = field(default_factory=lambda: itertools.count(1))

    def fresh(self, ns: str, base: str, avoid: frozenset[Name] | set[Name] = frozenset()) -> Name:
        while True:
            n = Name(ns, base, next(self.counter))
            if n not in avoid:
                return n

    def fresh_like(self, name: Name, avoid: frozenset[Name] | set[Name] = frozenset()) -> Name:
        return self.fresh(name.ns, name.base or "x", avoid)


def _session(s: Session | None) -> Session:
    return Session() if s is None else s


# ---------------------------------------------------------------- substitution


class SubstitutionError(ValueError):
    pass


def _descend(e: Expr, target: Name, repl_fv: frozenset[Name], go, session: Session) -> Expr:
    """Rebuild ``e`` applying ``go`` to children, renaming a binder of ``e``
    when it would capture a free name of the replacement."""
    b = binder_of(e)
    kids = children(e)
    if b is None:
        return with_children(e, tuple(go(k) for k in kids))
    sc = scoped_child(e)
    new_kids = list(kids)
    for i, k in enumerate(kids):
        if i != sc:
            new_kids[i] = go(k)
    scoped = kids[sc]
    if b == target or target not in free_names(scoped):
        return with_children(e, tuple(new_kids))
    if b in repl_fv:
        nb = session.fresh_like(b, repl_fv | free_names(scoped) | {target})
        scoped = rename(scoped, b, nb)
        new_kids[sc] = go(scoped)
        return rebind(e, nb, tuple(new_kids))
    new_kids[sc] = go(scoped)
    return with_children(e, tuple(new_kids))


def rename(e: Expr, old: Name, new: Name) -> Expr:
    """Replace free occurrences of ``old`` by ``new`` (same namespace).

    ``new`` is assumed not to be bound inside ``e`` on a path to a free
    occurrence of ``old``; callers pick it outside ``all_names``/``free_names``.
    """
    if old == new:
        return e

    def go(e: Expr) -> Expr:
        match e:
            case Var(n):
                return Var(new) if n == old else e
            case CoVar(n):
                return CoVar(new) if n == old else e
            case CoApp(a, u):
                return CoApp(new if a == old else a, go(u))
        if old not in free_names(e):
            return e
        return _descend(e, old, frozenset((new,)), go, Session())

    return go(e)


def subst(e: Expr, x: Name, u: Expr, session: Session | None = None,
          any_namespace: bool = False) -> Expr:
    """Capture-avoiding substitution ``[u/x]e`` of an expression for a variable.

    Co-variables are refused unless ``any_namespace`` is set (the one-sorted
    target calculus, where co-variables are ordinary variables)."""
    if x.ns == CO and not any_namespace:
        raise SubstitutionError("use struct_subst for co-variables")
    if holes(u):
        raise SubstitutionError("cannot substitute a context for a variable")
    session = _session(session)
    fv = free_names(u)

    def go(e: Expr) -> Expr:
        if x not in free_names(e):
            return e
        if isinstance(e, Var):
            return u if e.name == x else e
        return _descend(e, x, fv, go, session)

    return go(e)


def fill(ctx: Expr, p: Expr) -> Expr:
    """Replace the hole of ``ctx`` by ``p`` (literal, no renaming)."""
    if isinstance(ctx, Hole):
        return p
    kids = children(ctx)
    if not kids:
        return ctx
    return with_children(ctx, tuple(fill(k, p) for k in kids))


def struct_subst(e: Expr, a: Name, repl: Expr, session: Session | None = None) -> Expr:
    """Structural substitution ``[repl/a]e``.

    A co-term replacement substitutes co-variable occurrences ``a`` (sequent
    calculi); a context replacement turns every ``a u`` into ``repl[u]``
    (monadic calculi).
    """
    if a.ns != CO:
        raise SubstitutionError(f"{a} is not a co-variable")
    session = _session(session)
    is_ctx = holes(repl) == 1
    fv = free_names(repl)

    def go(e: Expr) -> Expr:
        if a not in free_names(e):
            return e
        match e:
            case CoVar(n):
                if is_ctx:
                    raise SubstitutionError("context substituted for a co-term occurrence")
                return repl
            case CoApp(b, u):
                u2 = go(u)
                if b != a:
                    return CoApp(b, u2)
                if is_ctx:
                    return fill(repl, u2)
                if isinstance(repl, CoVar):
                    return CoApp(repl.name, u2)
                raise SubstitutionError("co-term substituted into a co-variable application")
        return _descend(e, a, fv, go, session)

    return go(e)


# ---------------------------------------------------------------- alpha


def canonical(e: Expr, annotations: bool = True, namespaces: bool = True) -> Expr:
    """Rename bound names to de Bruijn levels (base ``""``; never parseable).

    With ``namespaces=False`` bound names also lose their namespace, which
    is the right notion of alpha for a one-sorted target calculus.
    """

    def go(e: Expr, env: dict[Name, Name], depth: int) -> Expr:
        match e:
            case Var(n):
                return Var(env.get(n, n))
            case CoVar(n):
                return CoVar(env.get(n, n))
            case CoApp(b, u):
                return CoApp(env.get(b, b), go(u, env, depth))
        b = binder_of(e)
        if b is None:
            return with_children(e, tuple(go(k, env, depth) for k in children(e)))
        sc = scoped_child(e)
        nb = Name(b.ns if namespaces else PLAIN, "", depth + 1)
        inner = {**env, b: nb}
        kids = tuple(go(k, inner, depth + 1) if i == sc else go(k, env, depth)
                     for i, k in enumerate(children(e)))
        out = rebind(e, nb, kids)
        if not annotations:
            out = with_annotation(out, None)
        return out

    return go(e, {}, 0)


def alpha_eq(e1: Expr, e2: Expr, annotations: bool = True) -> bool:
    return canonical(e1, annotations) == canonical(e2, annotations)


def erase(e: Expr) -> Expr:
    """Drop every binder annotation."""
    kids = tuple(erase(k) for k in children(e))
    return with_annotation(with_children(e, kids), None)


def expr_types(e: Expr) -> Iterator[Type]:
    for _, s in positions(e):
        t = annotation(s)
        if t is not None:
            yield t
