"""Common machinery for the rewriting calculi: redex search, stepping and
typing environments."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ClassError, ModeError, NotARedex, TypingError
from ..syntax.concrete import show
from ..syntax.terms import (
    CO, Bind, Expr, Lam, Let, Mu, MuTilde, Name, Path, Session, Sub, Type, positions,
    replace_at, show_type, subst, subterm,
)


@dataclass(frozen=True, order=True)
class Redex:
    rule: str
    path: Path


@dataclass(frozen=True)
class TypeEnv:
    gamma: dict[Name, Type] = field(default_factory=dict)
    delta: dict[Name, Type] = field(default_factory=dict)

    def bind(self, x: Name, t: Type | None) -> "TypeEnv":
        g = dict(self.gamma)
        if t is None:
            g.pop(x, None)
        else:
            g[x] = t
        return TypeEnv(g, self.delta)

    def bind_co(self, a: Name, t: Type | None) -> "TypeEnv":
        d = dict(self.delta)
        if t is None:
            d.pop(a, None)
        else:
            d[a] = t
        return TypeEnv(self.gamma, d)


class NeedsAnnotation(TypingError):
    """A binder without annotation was met where its type cannot be inferred."""


@dataclass
class Derivation:
    rule: str
    subject: Expr
    type: Type | None
    premises: list["Derivation"] = field(default_factory=list)

    def judgement(self) -> str:
        if self.type is None:
            return f"{show(self.subject)} : command"
        return f"{show(self.subject)} : {show_type(self.type)}"

    def render(self, indent: int = 0) -> str:
        lines = ["  " * indent + f"[{self.rule}] {self.judgement()}"]
        for p in self.premises:
            lines.append(p.render(indent + 1))
        return "\n".join(lines)

    def rules(self) -> list[str]:
        out = [self.rule]
        for p in self.premises:
            out.extend(p.rules())
        return out

    def nodes(self) -> int:
        return 1 + sum(p.nodes() for p in self.premises)

    def walk(self):
        """All nodes, preorder."""
        yield self
        for p in self.premises:
            yield from p.walk()


@dataclass
class Sequent:
    """A typing problem: ``gamma |- subject : type | delta``.

    ``kind`` is ``"term"``, ``"coterm"`` or ``"command"``; commands carry no
    type.  For terms/co-terms ``type`` may be left ``None`` to synthesize it.
    """

    gamma: dict[Name, Type]
    delta: dict[Name, Type]
    subject: Expr
    kind: str
    type: Type | None = None

    @property
    def env(self) -> TypeEnv:
        return TypeEnv(dict(self.gamma), dict(self.delta))

    def with_subject(self, e: Expr) -> "Sequent":
        return Sequent(self.gamma, self.delta, e, self.kind, self.type)

    def __str__(self) -> str:
        g = ", ".join(f"{x}:{show_type(t)}" for x, t in self.gamma.items())
        d = ", ".join(f"{a}:{show_type(t)}" for a, t in self.delta.items())
        if self.kind == "command":
            return f"{show(self.subject)} : ({g} |- {d})"
        sep = "|" if self.kind == "term" else "|-"
        if self.kind == "coterm":
            return f"{g} | {show(self.subject)} : {show_type(self.type)} |- {d}"
        return f"{g} |- {show(self.subject)} : {show_type(self.type)} {sep} {d}"


class Calculus:
    """A rewriting system over :mod:`modalcut.syntax` expressions.

    Subclasses provide ``classify``, ``match`` (rules applicable at the root
    of an expression), ``contract`` and the typing judgements.
    """

    name: str = ""
    rules: tuple[str, ...] = ()

    # -- grammar
    def classify(self, e: Expr) -> str:
        raise NotImplementedError

    def validate(self, e: Expr) -> str:
        return self.classify(e)

    term_classes: frozenset[str] = frozenset({"value", "term", "computation"})

    def check_substitution(self, x: Name, u: Expr) -> None:
        """Raise unless ``[u/x]`` respects the calculus's classes (and modes)."""
        if x.ns == CO:
            raise ClassError(f"{x} is a co-variable; use structural substitution")
        cls = self.classify(u)
        if cls not in self.term_classes:
            raise ClassError(f"cannot substitute a {cls} for {x}")

    def substitute(self, e: Expr, x: Name, u: Expr, session: Session | None = None) -> Expr:
        """Checked capture-avoiding substitution ``[u/x]e``."""
        self.check_substitution(x, u)
        return subst(e, x, u, session)

    # -- reduction
    def match(self, e: Expr) -> list[str]:
        raise NotImplementedError

    def contract(self, rule: str, e: Expr, session: Session, env: TypeEnv | None) -> Expr:
        raise NotImplementedError

    def pattern(self, rule: str, e: Expr) -> set[Path]:
        """Relative positions of the non-metavariable nodes of a redex."""
        return {()}

    def redexes(self, e: Expr) -> list[Redex]:
        out = []
        for path, s in positions(e):
            for r in self.match(s):
                out.append(Redex(r, path))
        return out

    def step(self, e: Expr, redex: Redex, session: Session | None = None,
             env: TypeEnv | None = None) -> Expr:
        session = Session() if session is None else session
        try:
            s = subterm(e, redex.path)
        except IndexError as exc:
            raise NotARedex(str(exc)) from None
        if redex.rule not in self.match(s):
            raise NotARedex(f"no {redex.rule} redex at {list(redex.path)} in {show(e)}")
        local = self.env_at(e, redex.path, env) if env is not None else None
        return replace_at(e, redex.path, self.contract(redex.rule, s, session, local))

    def successors(self, e: Expr, session: Session | None = None,
                   env: TypeEnv | None = None) -> list[tuple[Redex, Expr]]:
        session = Session() if session is None else session
        return [(r, self.step(e, r, session, env)) for r in self.redexes(e)]

    # -- typing environments along a path
    def env_at(self, e: Expr, path: Path, env: TypeEnv) -> TypeEnv:
        for i in path:
            env = self.enter(e, i, env)
            e = subterm(e, (i,))
        return env

    def enter(self, e: Expr, i: int, env: TypeEnv) -> TypeEnv:
        match e:
            case Lam(x, t, _) | MuTilde(x, t, _):
                return env.bind(x, t)
            case Mu(a, t, _):
                return env.bind_co(a, t)
            case Bind(x, t, arg, _) | Let(x, t, arg, _) | Sub(x, t, arg, _) if i == 1:
                if t is None:
                    t = self.binder_type(e, env)
                return env.bind(x, t)
        return env

    def binder_type(self, e: Expr, env: TypeEnv) -> Type | None:
        return None

    def try_synth(self, e: Expr, env: TypeEnv | None) -> Type | None:
        if env is None:
            return None
        try:
            return self.synth(e, env)[0]
        except TypingError:
            return None

    # -- typing
    def synth(self, e: Expr, env: TypeEnv) -> tuple[Type, Derivation]:
        raise NotImplementedError

    def typecheck(self, seq: Sequent) -> Derivation:
        raise NotImplementedError

    def typable(self, seq: Sequent) -> bool:
        try:
            self.typecheck(seq)
            return True
        except (TypingError, ClassError):
            return False


def lookup(env: TypeEnv, x: Name, subject: Expr) -> Type:
    if x in env.gamma:
        return env.gamma[x]
    if x in env.delta:
        return env.delta[x]
    raise TypingError(f"unbound name {x}", subject)


def expect_equal(expected: Type, actual: Type, subject: Expr) -> None:
    if expected != actual:
        raise TypingError(
            f"{show(subject)}: expected {show_type(expected)}, got {show_type(actual)}",
            subject, expected, actual)
