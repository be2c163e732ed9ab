"""Random generation of well-typed, binder-annotated expressions.

Generation is goal-directed: pick a kind and a type, then repeatedly choose
(uniformly) one of the typing rules whose conclusion fits the goal,
splitting the size budget between premises.  Free variables are declared on
demand, so the result comes with its own sequent.
"""

from __future__ import annotations

import random

from ..calculi import Sequent, get_calculus
from ..syntax.terms import (
    BOT, CO, COMP, PLAIN, VALUE, App, Arrow, Bind, CoApp, CoVar, Cons, Cut, Expr, Lam,
    Let, Monad, Mu, MuTilde, Name, Ret, Session, Sub, TBot, TVar, Type, Var,
)
from ..calculi.monadic import is_comp_type, is_value_type

POOL = (TVar("X"), TVar("Y"), TVar("Z"))


class _Gen:
    def __init__(self, calculus: str, rng: random.Random):
        self.calculus = calculus
        self.rng = rng
        self.session = Session()
        self.gamma: dict[Name, Type] = {}
        self.delta: dict[Name, Type] = {}
        self.free: set[Name] = set()  # names declared on demand
        self.at_root = True

    # -- names
    def fresh(self, ns: str, base: str) -> Name:
        return self.session.fresh(ns, base)

    def declare(self, ns: str, base: str, ty: Type, co: bool = False) -> Name:
        x = self.fresh(ns, base)
        (self.delta if co else self.gamma)[x] = ty
        self.free.add(x)
        return x

    def pick(self, scope: dict[Name, Type], ty: Type, ns: set[str] | None = None) -> list[Name]:
        return [x for x, t in scope.items() if t == ty and (ns is None or x.ns in ns)]

    def reuse(self, scope: dict[Name, Type], ty: Type) -> Name | None:
        """An existing name of type ``ty``, preferring binders in scope so
        that substitutions have something to act on."""
        bound = [x for x in self.pick(scope, ty) if x not in self.free]
        if bound and self.rng.random() < 0.85:
            return self.rng.choice(bound)
        cands = self.pick(scope, ty)
        if cands and self.rng.random() < 0.5:
            return self.rng.choice(cands)
        return None

    def split(self, budget: int, parts: int) -> list[int]:
        """Split ``budget - 1`` among ``parts`` premises, each at least 1."""
        rest = max(budget - 1, parts)
        cuts = sorted(self.rng.randint(0, rest - parts) for _ in range(parts - 1))
        sizes, prev = [], 0
        for c in cuts + [rest - parts]:
            sizes.append(c - prev + 1)
            prev = c
        return sizes

    def leaf(self, budget: int) -> list[str]:
        """Axioms compete with the other rules at the root and once the
        budget is nearly spent; elsewhere they would cut derivations short."""
        root, self.at_root = self.at_root, False
        return ["ax"] if budget <= 2 or root else []

    # -- random types
    def simple_type(self, depth: int = 2, modes=(None,), bot: bool = False) -> Type:
        if depth == 0 or self.rng.random() < 0.45:
            atoms = POOL + ((BOT,) if bot else ())
            return self.rng.choice(atoms)
        return Arrow(self.simple_type(depth - 1, modes, bot), self.simple_type(depth - 1, modes, bot),
                     self.rng.choice(modes))

    def lm_type(self, depth: int = 2) -> Type:
        r = self.rng.random()
        if depth == 0 or r < 0.4:
            return self.rng.choice(POOL)
        if r < 0.7:
            return Monad(self.lm_type(depth - 1))
        return Arrow(self.lm_type(depth - 1), self.lm_type(depth - 1))

    def value_type(self, depth: int = 2) -> Type:
        if depth == 0 or self.rng.random() < 0.5:
            return self.rng.choice(POOL)
        dom = self.value_type(depth - 1) if self.rng.random() < 0.5 else self.comp_type(depth - 1)
        return Arrow(dom, self.comp_type(depth - 1))

    def comp_type(self, depth: int = 2) -> Type:
        return Monad(self.value_type(depth))

    # ================================================================ sequent calculi
    def seq_var_ns(self, mode: str | None = None) -> str:
        if self.calculus == "lmmt":
            return PLAIN
        if mode is not None:
            return VALUE if mode == "v" else COMP
        return self.rng.choice((VALUE, COMP))

    def seq_type(self) -> Type:
        modes = (None,) if self.calculus == "lmmt" else ("v", "n")
        return self.simple_type(2, modes)

    def seq_term(self, ty: Type, budget: int) -> Expr:
        opts = self.leaf(budget)
        if budget > 1:
            opts.append("mu")
            if isinstance(ty, Arrow):
                opts.append("lam")
        match self.rng.choice(opts):
            case "ax":
                if (x := self.reuse(self.gamma, ty)) is not None:
                    return Var(x)
                base = "x" if self.calculus == "lmmt" else None
                ns = self.seq_var_ns()
                return Var(self.declare(ns, base or ("v" if ns == VALUE else "n"), ty))
            case "lam":
                ns = self.seq_var_ns(ty.mode)
                x = self.fresh(ns, "x" if ns == PLAIN else ("v" if ns == VALUE else "n"))
                saved = self.gamma.get(x)
                self.gamma[x] = ty.dom
                body = self.seq_term(ty.cod, budget - 1)
                self._unbind(self.gamma, x, saved)
                return Lam(x, ty.dom, body)
            case "mu":
                a = self.fresh(CO, "a")
                self.delta[a] = ty
                c = self.seq_command(budget - 1)
                del self.delta[a]
                return Mu(a, ty, c)
        raise AssertionError

    def seq_coterm(self, ty: Type, budget: int) -> Expr:
        opts = self.leaf(budget)
        if budget > 1:
            opts.append("mt")
            if isinstance(ty, Arrow) and budget > 2:
                opts.append("cons")
        match self.rng.choice(opts):
            case "ax":
                if (x := self.reuse(self.delta, ty)) is not None:
                    return CoVar(x)
                return CoVar(self.declare(CO, "b", ty, co=True))
            case "cons":
                b1, b2 = self.split(budget, 2)
                return Cons(self.seq_term(ty.dom, b1), self.seq_coterm(ty.cod, b2), ty.mode)
            case "mt":
                ns = self.seq_var_ns()
                x = self.fresh(ns, "x" if ns == PLAIN else ("v" if ns == VALUE else "n"))
                self.gamma[x] = ty
                c = self.seq_command(budget - 1)
                del self.gamma[x]
                return MuTilde(x, ty, c)
        raise AssertionError

    def seq_command(self, budget: int) -> Expr:
        ty = self.choose_cut_type()
        b1, b2 = self.split(max(budget, 3), 2)
        return Cut(self.seq_term(ty, b1), self.seq_coterm(ty, b2))

    def choose_cut_type(self) -> Type:
        scope = {**self.gamma, **self.delta}
        bound = [t for x, t in scope.items() if x not in self.free]
        if bound and self.rng.random() < 0.5:
            return self.rng.choice(bound)
        if scope and self.rng.random() < 0.3:
            return self.rng.choice(list(scope.values()))
        return self.seq_type()

    @staticmethod
    def _unbind(scope: dict, x: Name, saved) -> None:
        if saved is None:
            scope.pop(x, None)
        else:
            scope[x] = saved

    # ================================================================ lm-M
    def lm_term(self, ty: Type, budget: int) -> Expr:
        opts = self.leaf(budget)
        if budget > 1:
            opts.append("elim")
            if isinstance(ty, Arrow):
                opts.append("intro")
            if isinstance(ty, Monad):
                opts += ["act", "ret"]
        match self.rng.choice(opts):
            case "ax":
                if (x := self.reuse(self.gamma, ty)) is not None:
                    return Var(x)
                return Var(self.declare(PLAIN, "y", ty))
            case "intro":
                x = self.fresh(PLAIN, "x")
                self.gamma[x] = ty.dom
                body = self.lm_term(ty.cod, budget - 1)
                del self.gamma[x]
                return Lam(x, ty.dom, body)
            case "elim":
                arg_ty = self.lm_type(1)
                b1, b2 = self.split(budget, 2)
                return App(self.lm_term(Arrow(arg_ty, ty), b1), self.lm_term(arg_ty, b2))
            case "ret":
                return Ret(self.lm_term(ty.arg, budget - 1))
            case "act":
                a = self.fresh(CO, "a")
                self.delta[a] = ty
                c = self.lm_command(budget - 1)
                del self.delta[a]
                return Mu(a, ty, c)
        raise AssertionError

    def lm_command(self, budget: int) -> Expr:
        opts = ["pass"] + (["bind"] if budget > 2 else [])
        if self.rng.choice(opts) == "pass":
            bound = [a for a in self.delta if a not in self.free]
            cands = bound if bound and self.rng.random() < 0.85 else list(self.delta)
            if cands and self.rng.random() < 0.7:
                a = self.rng.choice(cands)
            else:
                a = self.declare(CO, "b", Monad(self.lm_type(1)), co=True)
            return CoApp(a, self.lm_term(self.delta[a], max(budget - 1, 1)))
        b = self.lm_type(1)
        b1, b2 = self.split(budget, 2)
        t = self.lm_term(Monad(b), b1)
        x = self.fresh(PLAIN, "x")
        self.gamma[x] = b
        c = self.lm_command(b2)
        del self.gamma[x]
        return Bind(x, b, t, c)

    # ================================================================ vc / ivc
    def vc_term(self, ty: Type, budget: int) -> Expr:
        return self.vc_value(ty, budget) if is_value_type(ty) else self.vc_comp(ty, budget)

    def vc_value(self, ty: Type, budget: int) -> Expr:
        opts = self.leaf(budget) + (["intro"] if isinstance(ty, Arrow) and budget > 1 else [])
        opts = opts or ["ax"]
        if self.rng.choice(opts) == "ax":
            if (x := self.reuse(self.gamma, ty)) is not None:
                return Var(x)
            return Var(self.declare(VALUE, "w", ty))
        ns = VALUE if is_value_type(ty.dom) else COMP
        x = self.fresh(ns, "v" if ns == VALUE else "q")
        self.gamma[x] = ty.dom
        body = self.vc_comp(ty.cod, budget - 1)
        del self.gamma[x]
        return Lam(x, ty.dom, body)

    def vc_comp(self, ty: Type, budget: int) -> Expr:
        ivc = self.calculus == "ivc"
        opts = self.leaf(budget)
        if budget > 1:
            opts += ["ret", "elim"]
            opts += ["let", "sub"] if ivc else ["act"]
        match self.rng.choice(opts):
            case "ax":
                if (x := self.reuse(self.gamma, ty)) is not None:
                    return Var(x)
                return Var(self.declare(COMP, "p", ty))
            case "ret":
                return Ret(self.vc_value(ty.arg, budget - 1))
            case "elim":
                arg_ty = self.value_type(1) if self.rng.random() < 0.5 else self.comp_type(1)
                b1, b2 = self.split(budget, 2)
                return App(self.vc_value(Arrow(arg_ty, ty), b1), self.vc_term(arg_ty, b2))
            case "act":
                a = self.fresh(CO, "a")
                self.delta[a] = ty
                c = self.vc_command(budget - 1)
                del self.delta[a]
                return Mu(a, ty, c)
            case "let" | "sub" as kind:
                return self.vc_seq(kind, budget, lambda b: self.vc_comp(ty, b))
        raise AssertionError

    def vc_seq(self, kind: str, budget: int, body) -> Expr:
        b1, b2 = self.split(max(budget, 3), 2)
        if kind == "let":
            bt = self.value_type(1)
            arg = self.vc_comp(Monad(bt), b1)
            x = self.fresh(VALUE, "v")
            self.gamma[x] = bt
        else:
            bt = self.comp_type(1)
            arg = self.vc_comp(bt, b1)
            x = self.fresh(COMP, "q")
            self.gamma[x] = bt
        rest = body(b2)
        del self.gamma[x]
        return (Let if kind == "let" else Sub)(x, bt, arg, rest)

    def vc_command(self, budget: int) -> Expr:
        opts = ["pass"] + (["let", "sub"] if budget > 2 else [])
        kind = self.rng.choice(opts)
        if kind == "pass":
            bound = [a for a in self.delta if a not in self.free]
            cands = bound if bound and self.rng.random() < 0.85 else list(self.delta)
            if cands and self.rng.random() < 0.7:
                a = self.rng.choice(cands)
            else:
                a = self.declare(CO, "b", self.comp_type(1), co=True)
            return CoApp(a, self.vc_comp(self.delta[a], max(budget - 1, 1)))
        return self.vc_seq(kind, budget, self.vc_command)

    # ================================================================ stlc
    def st_term(self, ty: Type, budget: int) -> Expr:
        opts = self.leaf(budget)
        if budget > 1:
            opts.append("elim")
            if isinstance(ty, Arrow):
                opts.append("intro")
        match self.rng.choice(opts):
            case "ax":
                if (x := self.reuse(self.gamma, ty)) is not None:
                    return Var(x)
                return Var(self.declare(PLAIN, "y", ty))
            case "intro":
                x = self.fresh(PLAIN, "x")
                self.gamma[x] = ty.dom
                body = self.st_term(ty.cod, budget - 1)
                del self.gamma[x]
                return Lam(x, ty.dom, body)
            case "elim":
                arg_ty = self.simple_type(1, bot=True)
                b1, b2 = self.split(budget, 2)
                return App(self.st_term(Arrow(arg_ty, ty), b1), self.st_term(arg_ty, b2))
        raise AssertionError

    # ================================================================ entry
    def run(self, budget: int, kind: str | None) -> Sequent:
        rng = self.rng
        c = self.calculus
        # no command is an axiom instance, so budget 1 asks for a term
        small = budget <= 1
        if c in ("lmmt", "lmmt-vn"):
            kind = kind or rng.choice(("term", "coterm") if small else ("term", "coterm", "command"))
            if kind == "command":
                return self._seq(self.seq_command(budget), "command", None)
            ty = self.seq_type()
            e = self.seq_term(ty, budget) if kind == "term" else self.seq_coterm(ty, budget)
            return self._seq(e, kind, ty)
        if c == "lm-M":
            kind = kind or ("term" if small else rng.choice(("term", "command")))
            if kind == "command":
                return self._seq(self.lm_command(budget), "command", None)
            ty = self.lm_type()
            return self._seq(self.lm_term(ty, budget), "term", ty)
        if c in ("vc", "ivc"):
            choices = (("value", "computation") if c == "ivc" or small
                       else ("value", "computation", "command"))
            kind = kind or rng.choice(choices)
            if kind == "command":
                return self._seq(self.vc_command(budget), "command", None)
            ty = self.value_type() if kind == "value" else self.comp_type()
            if kind == "value" and budget > 1 and not isinstance(ty, Arrow) and rng.random() < 0.7:
                ty = Arrow(self.value_type(1), self.comp_type(1))
            return self._seq(self.vc_term(ty, budget), "term", ty)
        if c == "stlc":
            ty = self.simple_type(2, bot=True)
            return self._seq(self.st_term(ty, budget), "term", ty)
        raise ValueError(f"unknown calculus {c!r}")

    def _seq(self, e: Expr, kind: str, ty: Type | None) -> Sequent:
        return Sequent(dict(self.gamma), dict(self.delta), e, kind, ty)


def gen_typed(calculus: str, budget: int = 8, seed: int | None = None,
              kind: str | None = None, rng: random.Random | None = None) -> Sequent:
    """A random typed sequent of ``calculus`` whose subject has roughly
    ``budget`` typing-rule applications.  ``kind`` forces the subject class
    (``term``/``coterm``/``command``, or for vc/ivc ``value``/``computation``)."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = rng or random.Random(seed)
    seq = _Gen(calculus, rng).run(budget, kind)
    get_calculus(calculus).typecheck(seq)  # by construction; fail loudly otherwise
    return seq


def gen_beta_redex(form: str, budget: int = 6, seed: int | None = None,
                   rng: random.Random | None = None) -> Sequent:
    """A typed VC beta-redex ``(\\%v.P) V`` (form ``value``) or
    ``(\\#q.P) Q`` (form ``computation``)."""
    rng = rng or random.Random(seed)
    g = _Gen("vc", rng)
    g.at_root = False
    result = g.comp_type(1)
    arg_ty = g.value_type(1) if form == "value" else g.comp_type(1)
    b1, b2 = g.split(max(budget, 3), 2)
    x = g.fresh(VALUE if form == "value" else COMP, "v" if form == "value" else "q")
    g.gamma[x] = arg_ty
    body = g.vc_comp(result, b1)
    del g.gamma[x]
    arg = g.vc_value(arg_ty, b2) if form == "value" else g.vc_comp(arg_ty, b2)
    seq = g._seq(App(Lam(x, arg_ty, body), arg), "term", result)
    get_calculus("vc").typecheck(seq)
    return seq


def root_constructor(e: Expr) -> str:
    return type(e).__name__


__all__ = ["POOL", "gen_typed", "gen_beta_redex", "root_constructor", "TBot", "BOT"]
