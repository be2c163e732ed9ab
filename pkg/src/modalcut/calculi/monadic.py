"""The monadic calculi: lambda-mu-M (optionally restricted), the calculus of
values and computations VC, its intuitionistic subsystem, and the target
lambda-calculus with value-beta."""

from __future__ import annotations

from ..errors import CalculusError, ClassError, ModeError, TypingError
from ..syntax.terms import (
    BOT, CO, COMP, HOLE, PLAIN, VALUE, App, Arrow, Bind, CoApp, Expr, Hole, Lam, Let,
    Monad, Mu, Name, Ret, Session, Sub, TBot, TVar, Type, Var, all_names, expr_types, free_names,
    holes, rename, show_type, struct_subst, subst,
)
from .base import Calculus, Derivation, NeedsAnnotation, Sequent, TypeEnv, expect_equal, lookup


class NaturalDeduction(Calculus):
    """Typing for the lambda-style calculi; the hooks fix the type grammar."""

    var_namespaces: set[str] = {PLAIN}
    commands = True  # has a separate class of commands
    seq_is_computation = False  # let/sub are computations (intuitionistic)

    # -- hooks
    def check_type(self, t: Type, subject: Expr | None = None) -> None:
        raise NotImplementedError

    def check_binder(self, x: Name, t: Type, subject: Expr) -> None:
        self.check_type(t, subject)

    def check_cotype(self, t: Type, subject: Expr | None = None) -> None:
        self.check_type(t, subject)
        if not isinstance(t, Monad):
            raise TypingError(f"co-variable type {show_type(t)} is not monadic", subject, None, t)

    def ax_rule(self, x: Name) -> str:
        return "Ax"

    # -- synthesis
    def synth(self, t: Expr, env: TypeEnv) -> tuple[Type, Derivation]:
        match t:
            case Var(x):
                ty = lookup(env, x, t)
                return ty, Derivation(self.ax_rule(x), t, ty)
            case Lam(x, ann, body):
                if ann is None:
                    raise NeedsAnnotation(f"cannot infer the type of {x}", t)
                self.check_binder(x, ann, t)
                b, d = self.synth(body, env.bind(x, ann))
                ty = Arrow(ann, b)
                return ty, Derivation("Intro", t, ty, [d])
            case App(f, u):
                fty, df = self.synth(f, env)
                if not isinstance(fty, Arrow):
                    raise TypingError(f"applying a non-function of type {show_type(fty)}", t, None, fty)
                du = self.check(u, fty.dom, env)
                return fty.cod, Derivation("Elim", t, fty.cod, [df, du])
            case Ret(s):
                a, d = self.synth(s, env)
                ty = Monad(a)
                self.check_type(ty, t)
                return ty, Derivation("ret", t, ty, [d])
            case Mu(a, ann, c):
                if ann is None:
                    raise NeedsAnnotation(f"cannot infer the type of {a}", t)
                self.check_cotype(ann, t)
                d = self.check_command(c, env.bind_co(a, ann))
                return ann, Derivation("Act", t, ann, [d])
            case Let() | Sub() if self.seq_is_computation:
                env2, d0 = self.seq_binding(t, env)
                ty, d1 = self.synth(t.body, env2)
                return ty, Derivation(type(t).__name__.lower(), t, ty, [d0, d1])
            case Hole():
                raise TypingError("a context has no type", t)
        raise ClassError(f"not a term of {self.name}: {t!r}")

    def check(self, t: Expr, ty: Type, env: TypeEnv) -> Derivation:
        match t:
            case Lam(x, ann, body) if isinstance(ty, Arrow):
                if ann is not None:
                    expect_equal(ty.dom, ann, t)
                self.check_binder(x, ty.dom, t)
                d = self.check(body, ty.cod, env.bind(x, ty.dom))
                return Derivation("Intro", t, ty, [d])
            case Mu(a, None, c):
                self.check_cotype(ty, t)
                d = self.check_command(c, env.bind_co(a, ty))
                return Derivation("Act", t, ty, [d])
            case Ret(s) if isinstance(ty, Monad):
                d = self.check(s, ty.arg, env)
                self.check_type(ty, t)
                return Derivation("ret", t, ty, [d])
            case App(f, u):
                try:
                    fty, df = self.synth(f, env)
                except NeedsAnnotation:
                    uty, du = self.synth(u, env)
                    df = self.check(f, Arrow(uty, ty), env)
                    return Derivation("Elim", t, ty, [df, du])
                if not isinstance(fty, Arrow):
                    raise TypingError(f"applying a non-function of type {show_type(fty)}", t, None, fty)
                du = self.check(u, fty.dom, env)
                expect_equal(ty, fty.cod, t)
                return Derivation("Elim", t, ty, [df, du])
            case Let() | Sub() if self.seq_is_computation:
                env2, d0 = self.seq_binding(t, env)
                d1 = self.check(t.body, ty, env2)
                return Derivation(type(t).__name__.lower(), t, ty, [d0, d1])
        actual, d = self.synth(t, env)
        expect_equal(ty, actual, t)
        return d

    def seq_binding(self, e: Expr, env: TypeEnv) -> tuple[TypeEnv, Derivation]:
        """Type the bound expression of a bind/let/sub and extend ``env``."""
        x, ann, arg = e.var, e.ann, e.arg
        if isinstance(e, Sub):
            if ann is not None:
                self.check_binder(x, ann, e)
                d = self.check(arg, ann, env)
                ty = ann
            else:
                ty, d = self.synth(arg, env)
                self.check_binder(x, ty, e)
            return env.bind(x, ty), d
        if ann is not None:
            self.check_binder(x, ann, e)
            d = self.check(arg, Monad(ann), env)
            return env.bind(x, ann), d
        ty, d = self.synth(arg, env)
        if not isinstance(ty, Monad):
            raise TypingError(f"bound expression has non-monadic type {show_type(ty)}", e, None, ty)
        self.check_binder(x, ty.arg, e)
        return env.bind(x, ty.arg), d

    def binder_type(self, e: Expr, env: TypeEnv) -> Type | None:
        try:
            env2, _ = self.seq_binding(e, env)
        except TypingError:
            return None
        return env2.gamma.get(e.var)

    def check_command(self, c: Expr, env: TypeEnv) -> Derivation:
        match c:
            case CoApp(a, t):
                ty = lookup(env, a, c)
                d = self.check(t, ty, env)
                return Derivation("Pass", c, None, [d])
            case Bind() | Let() | Sub() if not self.seq_is_computation:
                env2, d0 = self.seq_binding(c, env)
                d1 = self.check_command(c.body, env2)
                return Derivation(type(c).__name__.lower(), c, None, [d0, d1])
        raise ClassError(f"not a command of {self.name}: {c!r}")

    def typecheck(self, seq: Sequent) -> Derivation:
        for x, t in seq.gamma.items():
            if x.ns not in self.var_namespaces:
                raise TypingError(f"{x} cannot be declared in {self.name}")
            self.check_binder(x, t, Var(x))
        for a, t in seq.delta.items():
            if a.ns != CO:
                raise TypingError(f"{a} is not a co-variable")
            self.check_cotype(t)
        cls = self.classify(seq.subject)
        kind = "command" if cls in ("command", "context") else "term"
        if kind != seq.kind:
            raise TypingError(f"subject is a {kind}, not a {seq.kind}", seq.subject)
        env = seq.env
        if kind == "command":
            return self.check_command(seq.subject, env)
        if seq.type is not None:
            self.check_type(seq.type)
            return self.check(seq.subject, seq.type, env)
        return self.synth(seq.subject, env)[1]

    # -- grammar helpers
    def classify(self, e: Expr) -> str:
        n = holes(e)
        cls = self._cls(e)
        if n == 0:
            return cls
        if n == 1 and cls == "command":
            return "context"
        raise ClassError(f"expression with {n} holes is not a context")

    def _cls(self, e: Expr) -> str:
        raise NotImplementedError

    def expect(self, e: Expr, classes: set[str]) -> str:
        c = self._cls(e)
        if c not in classes:
            raise ClassError(f"expected {'/'.join(sorted(classes))}, found {c}: {e!r}")
        return c


# ---------------------------------------------------------------- lambda-mu-M

LM_TERMS = {"value", "term"}


class LambdaMuM(NaturalDeduction):
    name = "lm-M"
    rules = ("beta", "sigma", "pi-bind", "pi-covar", "eta-mu", "eta-bind")

    def __init__(self, restricted: bool = False):
        self.restricted = restricted

    def __repr__(self) -> str:
        return f"LambdaMuM(restricted={self.restricted})"

    def check_type(self, t: Type, subject: Expr | None = None) -> None:
        match t:
            case TVar():
                return
            case Monad(a):
                self.check_type(a, subject)
                return
            case Arrow(a, b, None):
                self.check_type(a, subject)
                self.check_type(b, subject)
                if self.restricted and not isinstance(b, Monad):
                    raise TypingError(f"{show_type(t)} is not a restricted function type", subject)
                return
        raise TypingError(f"{show_type(t)} is not a type of {self.name}", subject)

    def _cls(self, e: Expr) -> str:
        match e:
            case Var(x) if x.ns == PLAIN:
                return "value"
            case Lam(x, _, t) if x.ns == PLAIN:
                self.expect(t, LM_TERMS)
                return "value"
            case App(f, u):
                self.expect(f, LM_TERMS)
                self.expect(u, LM_TERMS)
                return "term"
            case Mu(_, _, c):
                self.expect(c, {"command"})
                return "term"
            case Ret(s):
                self.expect(s, LM_TERMS)
                return "term"
            case Hole():
                return "term"
            case CoApp(_, t):
                self.expect(t, LM_TERMS)
                return "command"
            case Bind(x, _, t, c) if x.ns == PLAIN:
                self.expect(t, LM_TERMS)
                self.expect(c, {"command"})
                return "command"
        raise ClassError(f"not an expression of {self.name}: {e!r}")

    def require_restricted(self, e: Expr) -> None:
        for t in expr_types(e):
            _check_restricted(t)

    def redexes(self, e: Expr):
        if self.restricted:
            self.require_restricted(e)
        return super().redexes(e)

    def match(self, e: Expr) -> list[str]:
        out = []
        match e:
            case App(Lam(), _):
                out.append("beta")
            case Bind(_, _, Ret(), _):
                out.append("sigma")
            case Bind(_, _, Mu(), _):
                out.append("pi-bind")
            case CoApp(_, Mu()):
                out.append("pi-covar")
            case Mu(a, _, CoApp(b, t)) if a == b and a not in free_names(t):
                out.append("eta-mu")
        match e:
            case Bind(x, _, _, CoApp(_, Ret(Var(y)))) if x == y:
                out.append("eta-bind")
        return out

    def pattern(self, rule: str, e: Expr):
        if rule == "eta-bind":
            return {(), (1,), (1, 0), (1, 0, 0)}
        return {(), (0,)}

    def contract(self, rule: str, e: Expr, session: Session, env: TypeEnv | None) -> Expr:
        match rule, e:
            case "beta", App(Lam(x, ann, t), u) if not self.restricted:
                return subst(t, x, u, session)
            case "beta", App(Lam(x, ann, t), u):
                a = session.fresh(CO, "a", all_names(t) | all_names(u))
                inner = env.bind(x, ann) if env is not None and ann is not None else None
                return Mu(a, self.try_synth(t, inner), Bind(x, ann, Ret(u), CoApp(a, t)))
            case "sigma", Bind(x, _, Ret(s), c):
                return subst(c, x, s, session)
            case "pi-bind", Bind(x, ann, Mu(a, _, c), c2):
                return struct_subst(c, a, Bind(x, ann, HOLE, c2), session)
            case "pi-covar", CoApp(b, Mu(a, _, c)):
                return struct_subst(c, a, CoApp(b, HOLE), session)
            case "eta-mu", Mu(_, _, CoApp(_, t)):
                return t
            case "eta-bind", Bind(_, _, t, CoApp(a, _)):
                return CoApp(a, t)
        raise ValueError(f"cannot contract {rule} at {e!r}")


def _check_restricted(t: Type) -> None:
    match t:
        case Arrow(a, b, _):
            if not isinstance(b, Monad):
                raise CalculusError(
                    f"restricted reduction needs monadic codomains, found {show_type(t)}")
            _check_restricted(a)
            _check_restricted(b)
        case Monad(a):
            _check_restricted(a)


# ---------------------------------------------------------------- VC

def is_value_type(t: Type) -> bool:
    match t:
        case TVar():
            return True
        case Arrow(a, c, None):
            return (is_value_type(a) or is_comp_type(a)) and is_comp_type(c)
    return False


def is_comp_type(t: Type) -> bool:
    return isinstance(t, Monad) and is_value_type(t.arg)


class VC(NaturalDeduction):
    """Values and computations with a classical (co-variable) layer."""

    name = "vc"
    rules = ("beta", "sigma", "pi-covar", "pi-let", "eta-mu", "eta-let")
    var_namespaces = {VALUE, COMP}

    def __repr__(self) -> str:
        return "VC()"

    def check_type(self, t: Type, subject: Expr | None = None) -> None:
        if not (is_value_type(t) or is_comp_type(t)):
            raise TypingError(f"{show_type(t)} is not a type of {self.name}", subject)

    def check_binder(self, x: Name, t: Type, subject: Expr) -> None:
        self.check_type(t, subject)
        if x.ns == VALUE and not is_value_type(t):
            raise TypingError(f"value variable {x} given computation type {show_type(t)}",
                              subject, None, t)
        if x.ns == COMP and not is_comp_type(t):
            raise TypingError(f"computation variable {x} given value type {show_type(t)}",
                              subject, None, t)

    def check_cotype(self, t: Type, subject: Expr | None = None) -> None:
        if not is_comp_type(t):
            raise TypingError(f"co-variable type {show_type(t)} is not a computation type",
                              subject, None, t)

    def ax_rule(self, x: Name) -> str:
        return "Axv" if x.ns == VALUE else "Axc"

    def check_substitution(self, x: Name, u: Expr) -> None:
        super().check_substitution(x, u)
        cls = self.classify(u)
        want = "value" if x.ns == VALUE else "computation"
        if cls != want:
            raise ModeError(f"ill-moded substitution: {x} needs a {want}, got a {cls}")

    @staticmethod
    def is_value(t: Expr) -> bool:
        return isinstance(t, Lam) or (isinstance(t, Var) and t.name.ns == VALUE)

    def _cls(self, e: Expr) -> str:
        match e:
            case Var(x) if x.ns == VALUE:
                return "value"
            case Var(x) if x.ns == COMP:
                return "computation"
            case Lam(x, _, p) if x.ns in (VALUE, COMP):
                self.expect(p, {"computation"})
                return "value"
            case Ret(v):
                self.expect(v, {"value"})
                return "computation"
            case App(v, u):
                self.expect(v, {"value"})
                self.expect(u, {"value", "computation"})
                return "computation"
            case Hole():
                return "computation"
        return self._cls_more(e)

    def _cls_more(self, e: Expr) -> str:
        match e:
            case Mu(_, _, c):
                self.expect(c, {"command"})
                return "computation"
            case CoApp(_, p):
                self.expect(p, {"computation"})
                return "command"
            case Let(v, _, p, c) if v.ns == VALUE:
                self.expect(p, {"computation"})
                self.expect(c, {"command"})
                return "command"
            case Sub(q, _, p, c) if q.ns == COMP:
                self.expect(p, {"computation"})
                self.expect(c, {"command"})
                return "command"
        raise ClassError(f"not an expression of {self.name}: {e!r}")

    def match_beta(self, e: Expr) -> bool:
        match e:
            case App(Lam(x, _, _), u):
                return self.is_value(u) if x.ns == VALUE else not self.is_value(u)
        return False

    def match(self, e: Expr) -> list[str]:
        out = []
        if self.match_beta(e):
            out.append("beta")
        match e:
            case Let(_, _, Ret(), _) | Sub():
                out.append("sigma")
            case CoApp(_, Mu()):
                out.append("pi-covar")
            case Mu(a, _, CoApp(b, p)) if a == b and a not in free_names(p):
                out.append("eta-mu")
        match e:
            case Let(_, _, Mu(), _):
                out.append("pi-let")
        match e:
            case Let(v, _, _, CoApp(_, Ret(Var(w)))) if v == w:
                out.append("eta-let")
        return out

    def pattern(self, rule: str, e: Expr):
        if rule == "eta-let":
            return {(), (1,), (1, 0), (1, 0, 0)}
        if rule == "sigma" and isinstance(e, Sub):
            return {()}
        return {(), (0,)}

    def contract(self, rule: str, e: Expr, session: Session, env: TypeEnv | None) -> Expr:
        match rule, e:
            case "beta", App(Lam(x, ann, p), u):
                b = session.fresh(CO, "b", all_names(p) | all_names(u))
                inner = env.bind(x, ann) if env is not None and ann is not None else None
                node = Let if x.ns == VALUE else Sub
                arg = Ret(u) if x.ns == VALUE else u
                return Mu(b, self.try_synth(p, inner), node(x, ann, arg, CoApp(b, p)))
            case "sigma", Let(v, _, Ret(w), c):
                return subst(c, v, w, session)
            case "sigma", Sub(q, _, p, c):
                return subst(c, q, p, session)
            case "pi-covar", CoApp(b, Mu(a, _, c)):
                return struct_subst(c, a, CoApp(b, HOLE), session)
            case "pi-let", Let(v, ann, Mu(a, _, c), c2):
                return struct_subst(c, a, Let(v, ann, HOLE, c2), session)
            case "eta-mu", Mu(_, _, CoApp(_, p)):
                return p
            case "eta-let", Let(_, _, p, CoApp(a, _)):
                return CoApp(a, p)
        raise ValueError(f"cannot contract {rule} at {e!r}")


# ---------------------------------------------------------------- intuitionistic VC

class IVC(VC):
    """The intuitionistic subsystem: no co-variables, let/sub are computations."""

    name = "ivc"
    rules = ("beta", "sigma", "pi-let", "eta-let-i")
    seq_is_computation = True

    def __repr__(self) -> str:
        return "IVC()"

    def _cls_more(self, e: Expr) -> str:
        match e:
            case Let(v, _, p, q) if v.ns == VALUE:
                self.expect(p, {"computation"})
                self.expect(q, {"computation"})
                return "computation"
            case Sub(x, _, p, q) if x.ns == COMP:
                self.expect(p, {"computation"})
                self.expect(q, {"computation"})
                return "computation"
        raise ClassError(f"not an expression of {self.name}: {e!r}")

    def classify(self, e: Expr) -> str:
        if holes(e):
            raise ClassError("the intuitionistic subsystem has no contexts")
        return self._cls(e)

    def match(self, e: Expr) -> list[str]:
        out = []
        if self.match_beta(e):
            out.append("beta")
        match e:
            case Let(_, _, Ret(), _) | Sub():
                out.append("sigma")
        match e:
            case Let(_, _, Let() | Sub(), _):
                out.append("pi-let")
        match e:
            case Let(v, _, _, Ret(Var(w))) if v == w:
                out.append("eta-let-i")
        return out

    def pattern(self, rule: str, e: Expr):
        if rule == "eta-let-i":
            return {(), (1,), (1, 0)}
        if rule == "sigma" and isinstance(e, Sub):
            return {()}
        return {(), (0,)}

    def contract(self, rule: str, e: Expr, session: Session, env: TypeEnv | None) -> Expr:
        match rule, e:
            case "beta", App(Lam(x, ann, p), u):
                if x.ns == VALUE:
                    return Let(x, ann, Ret(u), p)
                return Sub(x, ann, u, p)
            case "sigma", Let(v, _, Ret(w), q):
                return subst(q, v, w, session)
            case "sigma", Sub(x, _, p, q):
                return subst(q, x, p, session)
            case "pi-let", Let(w, ann, inner, q2):
                return sequence(inner, w, ann, q2, session)
            case "eta-let-i", Let(_, _, p, _):
                return p
        raise ValueError(f"cannot contract {rule} at {e!r}")


def sequence(q: Expr, w: Name, ann: Type | None, q2: Expr, session: Session) -> Expr:
    """The meta-operation ``Q; w. Q'`` pushing ``let w = [] in Q'`` to the
    end of the let/sub spine of ``Q``."""
    match q:
        case Let(x, t, p, body) | Sub(x, t, p, body):
            if x != w and x in free_names(q2):
                nx = session.fresh_like(x, free_names(body) | free_names(q2) | {x, w})
                body, x = rename(body, q.var, nx), nx
            return type(q)(x, t, p, sequence(body, w, ann, q2, session))
    return Let(w, ann, q, q2)


# ---------------------------------------------------------------- lambda[beta-v]

class STLC(NaturalDeduction):
    """Simply-typed lambda-calculus with value-beta; any namespace may name a
    variable, since co-variables of VC become ordinary variables here."""

    name = "stlc"
    rules = ("beta-value",)
    var_namespaces = {PLAIN, VALUE, COMP, CO}

    def __repr__(self) -> str:
        return "STLC()"

    def check_type(self, t: Type, subject: Expr | None = None) -> None:
        match t:
            case TVar() | TBot():
                return
            case Arrow(a, b, None):
                self.check_type(a, subject)
                self.check_type(b, subject)
                return
        raise TypingError(f"{show_type(t)} is not a type of {self.name}", subject)

    def _cls(self, e: Expr) -> str:
        match e:
            case Var():
                return "value"
            case Lam(_, _, t):
                self.expect(t, {"value", "term"})
                return "value"
            case App(f, u):
                self.expect(f, {"value", "term"})
                self.expect(u, {"value", "term"})
                return "term"
        raise ClassError(f"not an expression of {self.name}: {e!r}")

    def classify(self, e: Expr) -> str:
        return self._cls(e)

    def typecheck(self, seq: Sequent) -> Derivation:
        env = seq.env
        # co-variables are ordinary variables of the target
        env = TypeEnv({**env.gamma, **env.delta}, {})
        for x, t in env.gamma.items():
            self.check_type(t)
        if seq.kind != "term":
            raise TypingError("the target calculus has only terms", seq.subject)
        self.classify(seq.subject)
        if seq.type is not None:
            self.check_type(seq.type)
            return self.check(seq.subject, seq.type, env)
        return self.synth(seq.subject, env)[1]

    @staticmethod
    def is_value(t: Expr) -> bool:
        return isinstance(t, (Var, Lam))

    def match(self, e: Expr) -> list[str]:
        match e:
            case App(Lam(), v) if self.is_value(v):
                return ["beta-value"]
        return []

    def pattern(self, rule: str, e: Expr):
        return {(), (0,)}

    def contract(self, rule: str, e: Expr, session: Session, env: TypeEnv | None) -> Expr:
        match rule, e:
            case "beta-value", App(Lam(x, _, t), v):
                return subst(t, x, v, session, any_namespace=True)
        raise ValueError(f"cannot contract {rule} at {e!r}")


__all__ = ["LambdaMuM", "VC", "IVC", "STLC", "sequence", "is_value_type", "is_comp_type", "BOT"]
