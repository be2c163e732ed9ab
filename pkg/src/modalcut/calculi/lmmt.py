"""The sequent calculus lambda-bar-mu-mu-tilde with implication only, and its
call-by-name and call-by-value fragments."""

from __future__ import annotations

from ..errors import ClassError, TypingError
from ..syntax.terms import (
    PLAIN, Arrow, CoVar, Cons, Cut, Expr, Lam, Mu, MuTilde, Name, Session, TVar, Type,
    Var, free_names, rename, show_type, struct_subst, subst,
)
from .base import Calculus, Derivation, NeedsAnnotation, Sequent, TypeEnv, expect_equal, lookup

FRAGMENTS = ("full", "cbn", "cbv")

TERM_CLASSES = {"value", "term"}
COTERM_CLASSES = {"covalue", "coterm"}
KIND_OF_CLASS = {
    "value": "term", "term": "term", "computation": "term",
    "covalue": "coterm", "coterm": "coterm",
    "command": "command", "context": "context",
}


class SequentCalculus(Calculus):
    """Typing shared by both sequent calculi.  Subclasses say which binder
    namespaces and arrow modes fit together."""

    rule_names = {"ax": "Ax", "ax-co": "Ax-co", "mu": "R-mu", "mt": "L-mt", "cut": "Cut"}

    # -- hooks
    def lam_mode(self, x: Name) -> str | None:
        raise NotImplementedError

    def check_type(self, t: Type, subject: Expr | None = None) -> None:
        raise NotImplementedError

    def r_imp(self, mode: str | None) -> str:
        return "R-imp" if mode is None else f"R-imp-{mode}"

    def l_imp(self, mode: str | None) -> str:
        return "L-imp" if mode is None else f"L-imp-{mode}"

    def _mode_check(self, x: Name, a: Arrow, subject: Expr) -> None:
        if self.lam_mode(x) != a.mode:
            raise TypingError(
                f"binder {x} does not match the mode of {show_type(a)}", subject, a, None)

    # -- terms
    def synth(self, t: Expr, env: TypeEnv) -> tuple[Type, Derivation]:
        match t:
            case Var(x):
                ty = lookup(env, x, t)
                return ty, Derivation(self.rule_names["ax"], t, ty)
            case Lam(x, ann, body):
                if ann is None:
                    raise NeedsAnnotation(f"cannot infer the type of {x}", t)
                self.check_type(ann, t)
                b, d = self.synth(body, env.bind(x, ann))
                ty = Arrow(ann, b, self.lam_mode(x))
                return ty, Derivation(self.r_imp(ty.mode), t, ty, [d])
            case Mu(a, ann, c):
                if ann is None:
                    raise NeedsAnnotation(f"cannot infer the type of {a}", t)
                self.check_type(ann, t)
                d = self.check_command(c, env.bind_co(a, ann))
                return ann, Derivation(self.rule_names["mu"], t, ann, [d])
        return self.synth_coterm(t, env)

    def check_term(self, t: Expr, ty: Type, env: TypeEnv) -> Derivation:
        match t:
            case Lam(x, None, body) if isinstance(ty, Arrow):
                self._mode_check(x, ty, t)
                d = self.check_term(body, ty.cod, env.bind(x, ty.dom))
                return Derivation(self.r_imp(ty.mode), t, ty, [d])
            case Lam(x, ann, body) if isinstance(ty, Arrow):
                self._mode_check(x, ty, t)
                expect_equal(ty.dom, ann, t)
                d = self.check_term(body, ty.cod, env.bind(x, ty.dom))
                return Derivation(self.r_imp(ty.mode), t, ty, [d])
            case Mu(a, None, c):
                d = self.check_command(c, env.bind_co(a, ty))
                return Derivation(self.rule_names["mu"], t, ty, [d])
        actual, d = self.synth(t, env)
        expect_equal(ty, actual, t)
        return d

    # -- co-terms
    def synth_coterm(self, e: Expr, env: TypeEnv) -> tuple[Type, Derivation]:
        match e:
            case CoVar(a):
                ty = lookup(env, a, e)
                return ty, Derivation(self.rule_names["ax-co"], e, ty)
            case Cons(u, k, mode):
                a, du = self.synth(u, env)
                b, dk = self.synth_coterm(k, env)
                ty = Arrow(a, b, mode)
                return ty, Derivation(self.l_imp(mode), e, ty, [du, dk])
            case MuTilde(x, ann, c):
                if ann is None:
                    raise NeedsAnnotation(f"cannot infer the type of {x}", e)
                self.check_type(ann, e)
                d = self.check_command(c, env.bind(x, ann))
                return ann, Derivation(self.rule_names["mt"], e, ann, [d])
        raise ClassError(f"not a term or co-term of {self.name}: {e!r}")

    def check_coterm(self, e: Expr, ty: Type, env: TypeEnv) -> Derivation:
        match e:
            case Cons(u, k, mode) if isinstance(ty, Arrow):
                if mode != ty.mode:
                    raise TypingError(f"stack mode does not match {show_type(ty)}", e, ty, None)
                du = self.check_term(u, ty.dom, env)
                dk = self.check_coterm(k, ty.cod, env)
                return Derivation(self.l_imp(mode), e, ty, [du, dk])
            case MuTilde(x, None, c):
                d = self.check_command(c, env.bind(x, ty))
                return Derivation(self.rule_names["mt"], e, ty, [d])
            case MuTilde(x, ann, c):
                expect_equal(ty, ann, e)
                d = self.check_command(c, env.bind(x, ty))
                return Derivation(self.rule_names["mt"], e, ty, [d])
        actual, d = self.synth_coterm(e, env)
        expect_equal(ty, actual, e)
        return d

    # -- commands
    def check_command(self, c: Expr, env: TypeEnv) -> Derivation:
        if not isinstance(c, Cut):
            raise ClassError(f"not a command of {self.name}: {c!r}")
        t, k = c.term, c.coterm
        try:
            a, dt = self.synth(t, env)
        except NeedsAnnotation:
            a, dk = self.synth_coterm(k, env)
            dt = self.check_term(t, a, env)
        else:
            dk = self.check_coterm(k, a, env)
        return Derivation(self.rule_names["cut"], c, None, [dt, dk])

    def typecheck(self, seq: Sequent) -> Derivation:
        for x, t in seq.gamma.items():
            if x.ns not in self.var_namespaces:
                raise TypingError(f"{x} cannot be declared in {self.name}")
            self.check_type(t)
        for a, t in seq.delta.items():
            if a.ns != "co":
                raise TypingError(f"{a} is not a co-variable")
            self.check_type(t)
        cls = self.classify(seq.subject)
        kind = KIND_OF_CLASS[cls]
        if kind != seq.kind:
            raise TypingError(f"subject is a {kind}, not a {seq.kind}", seq.subject)
        env = seq.env
        if kind == "command":
            return self.check_command(seq.subject, env)
        if seq.type is not None:
            self.check_type(seq.type)
            if kind == "term":
                return self.check_term(seq.subject, seq.type, env)
            return self.check_coterm(seq.subject, seq.type, env)
        return self.synth(seq.subject, env)[1]


class LMMT(SequentCalculus):
    """Full lambda-bar-mu-mu-tilde, or one of its two fragments."""

    name = "lmmt"
    rules = ("beta", "pi", "sigma", "eta-mt", "eta-mu")
    var_namespaces = {PLAIN}

    def __init__(self, fragment: str = "full"):
        if fragment not in FRAGMENTS:
            raise ValueError(f"unknown fragment {fragment!r}")
        self.fragment = fragment

    def __repr__(self) -> str:
        return f"LMMT({self.fragment!r})"

    def lam_mode(self, x: Name) -> str | None:
        return None

    def check_type(self, t: Type, subject: Expr | None = None) -> None:
        match t:
            case TVar():
                return
            case Arrow(a, b, None):
                self.check_type(a, subject)
                self.check_type(b, subject)
                return
        raise TypingError(f"{show_type(t)} is not a type of {self.name}", subject)

    # -- grammar
    def classify(self, e: Expr) -> str:
        match e:
            case Var(x) if x.ns == PLAIN:
                return "value"
            case Lam(x, _, t) if x.ns == PLAIN:
                self.expect(t, TERM_CLASSES)
                return "value"
            case Mu(_, _, c):
                self.expect(c, {"command"})
                return "term"
            case CoVar():
                return "covalue"
            case Cons(u, k, None):
                self.expect(u, TERM_CLASSES)
                self.expect(k, COTERM_CLASSES)
                return "covalue"
            case MuTilde(x, _, c) if x.ns == PLAIN:
                self.expect(c, {"command"})
                return "coterm"
            case Cut(t, k):
                self.expect(t, TERM_CLASSES)
                self.expect(k, COTERM_CLASSES)
                return "command"
        raise ClassError(f"not an expression of {self.name}: {e!r}")

    def expect(self, e: Expr, classes: set[str]) -> str:
        c = self.classify(e)
        if c not in classes:
            raise ClassError(f"expected {'/'.join(sorted(classes))}, found {c}: {e!r}")
        return c

    @staticmethod
    def is_value(t: Expr) -> bool:
        return isinstance(t, (Var, Lam))

    @staticmethod
    def is_covalue(e: Expr) -> bool:
        return isinstance(e, (CoVar, Cons))

    # -- reduction
    def match(self, e: Expr) -> list[str]:
        out = []
        match e:
            case Cut(Lam(), Cons()):
                out.append("beta")
        match e:
            case Cut(Mu(), k) if self.fragment != "cbn" or self.is_covalue(k):
                out.append("pi")
        match e:
            case Cut(t, MuTilde()) if self.fragment != "cbv" or self.is_value(t):
                out.append("sigma")
        match e:
            case MuTilde(x, _, Cut(Var(y), k)) if x == y and x not in free_names(k):
                out.append("eta-mt")
            case Mu(a, _, Cut(t, CoVar(b))) if a == b and a not in free_names(t):
                out.append("eta-mu")
        return out

    def pattern(self, rule: str, e: Expr):
        return {
            "beta": {(), (0,), (1,)}, "pi": {(), (0,)}, "sigma": {(), (1,)},
            "eta-mt": {(), (0,), (0, 0)}, "eta-mu": {(), (0,), (0, 1)},
        }[rule]

    def contract(self, rule: str, e: Expr, session: Session, env: TypeEnv | None) -> Expr:
        return contract_sequent(rule, e, session)


def contract_sequent(rule: str, e: Expr, session: Session) -> Expr:
    """Contraction shared by both sequent calculi (rule names without mode)."""
    match rule, e:
        case "beta", Cut(Lam(x, ann, t), Cons(u, k, _)):
            if x in free_names(k):
                nx = session.fresh_like(x, free_names(t) | free_names(k) | {x})
                t, x = rename(t, x, nx), nx
            return Cut(u, MuTilde(x, ann, Cut(t, k)))
        case "pi", Cut(Mu(a, _, c), k):
            return struct_subst(c, a, k, session)
        case "sigma", Cut(t, MuTilde(x, _, c)):
            return subst(c, x, t, session)
        case "eta-mt", MuTilde(_, _, Cut(_, k)):
            return k
        case "eta-mu", Mu(_, _, Cut(t, _)):
            return t
    raise ValueError(f"cannot contract {rule} at {e!r}")
