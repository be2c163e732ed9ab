"""Maps between the calculi.

* ``mtr``: the monadic translation from lmmt-vn into VC;
* ``cm`` / ``cm_aux``: instantiation of VC's monad to continuations, into stlc;
* ``cps``: their composite;
* ``forget_vn`` / ``forget_vc``: forgetful maps to lmmt and lm-M;
* ``embed_cbn`` / ``embed_cbv``: embeddings of lmmt into lmmt-vn.
"""

from __future__ import annotations

from dataclasses import dataclass

from .calculi import LMMTVN, VC, Sequent, TypeEnv
from .errors import CalculusError, TypingError
from .syntax.terms import (
    BOT, CO, COMP, HOLE, PLAIN, VALUE, App, Arrow, Bind, CoApp, CoVar, Cons, Cut, Expr,
    Lam, Let, Monad, Mu, MuTilde, Name, Ret, Session, Sub, TBot, TVar, Type, Var,
    all_names, binder_of, children, fill, free_names, neg, rebind, with_annotation,
    with_children,
)

TARGETS = ("monadic", "cm", "cps", "forget-vn", "forget-vc", "embed-cbn", "embed-cbv")
TARGET_CALCULUS = {
    "monadic": "vc", "cm": "stlc", "cps": "stlc", "forget-vn": "lmmt",
    "forget-vc": "lm-M", "embed-cbn": "lmmt-vn", "embed-cbv": "lmmt-vn",
}
SOURCE_CALCULUS = {
    "monadic": "lmmt-vn", "cm": "vc", "cps": "lmmt-vn", "forget-vn": "lmmt-vn",
    "forget-vc": "vc", "embed-cbn": "lmmt", "embed-cbv": "lmmt",
}


@dataclass
class TranslationOutput:
    result: Expr
    kind: str  # class of the result in the target calculus
    type_image: Type | None = None


def _session(s: Session | None) -> Session:
    return Session() if s is None else s


# ================================================================ monadic translation

def mtr_type(a: Type, flavor: str = "value") -> Type:
    """``A°`` (value flavor) or ``M A°`` (computation flavor)."""
    if flavor == "computation":
        return Monad(mtr_type(a))
    match a:
        case TVar():
            return a
        case Arrow(d, c, "v"):
            return Arrow(mtr_type(d), Monad(mtr_type(c)))
        case Arrow(d, c, "n"):
            return Arrow(Monad(mtr_type(d)), Monad(mtr_type(c)))
    raise TypingError(f"not a moded type: {a!r}")


def _opt(t: Type | None, flavor: str) -> Type | None:
    return None if t is None else mtr_type(t, flavor)


def _binder_flavor(x: Name) -> str:
    return "value" if x.ns == VALUE else "computation"


class _Monadic:
    def __init__(self, session: Session):
        self.s = session

    def value(self, v: Expr) -> Expr:
        match v:
            case Var(x) if x.ns == VALUE:
                return v
            case Lam(x, ann, t):
                return Lam(x, _opt(ann, _binder_flavor(x)), self.term(t))
        raise CalculusError(f"not a value of lmmt-vn: {v!r}")

    def term(self, t: Expr) -> Expr:
        match t:
            case Var(x) if x.ns == COMP:
                return t
            case Var() | Lam():
                return Ret(self.value(t))
            case Mu(a, ann, c):
                return Mu(a, _opt(ann, "computation"), self.command(c))
        raise CalculusError(f"not a term of lmmt-vn: {t!r}")

    def coterm(self, e: Expr) -> Expr:
        match e:
            case CoVar(a):
                return CoApp(a, HOLE)
            case MuTilde(x, ann, c) if x.ns == VALUE:
                return Let(x, _opt(ann, "value"), HOLE, self.command(c))
            case MuTilde(x, ann, c):
                return Sub(x, _opt(ann, "computation"), HOLE, self.command(c))
            case Cons(u, k, mode):
                ub = self.term(u)
                kb = self.coterm(k)
                avoid = all_names(ub) | all_names(kb)
                f = self.s.fresh(VALUE, "f", avoid)
                if mode == "v":
                    w = self.s.fresh(VALUE, "w", avoid)
                    return Let(f, None, HOLE, Let(w, None, ub, fill(kb, App(Var(f), Var(w)))))
                q = self.s.fresh(COMP, "q", avoid)
                return Let(f, None, HOLE, Sub(q, None, ub, fill(kb, App(Var(f), Var(q)))))
        raise CalculusError(f"not a co-term of lmmt-vn: {e!r}")

    def command(self, c: Expr) -> Expr:
        match c:
            case Cut(t, k):
                return fill(self.coterm(k), self.term(t))
        raise CalculusError(f"not a command of lmmt-vn: {c!r}")


def mtr(e: Expr, session: Session | None = None, as_value: bool = False,
        type_: Type | None = None) -> TranslationOutput:
    """Monadic translation.  Values translate as terms (``ret V°``) unless
    ``as_value`` is set; co-terms translate to contexts."""
    tr = _Monadic(_session(session))
    cls = LMMTVN().classify(e)
    if cls == "value" and as_value:
        return TranslationOutput(tr.value(e), "value", _opt(type_, "value"))
    if cls in ("value", "term"):
        return TranslationOutput(tr.term(e), "computation", _opt(type_, "computation"))
    if cls in ("covalue", "coterm"):
        return TranslationOutput(tr.coterm(e), "context", _opt(type_, "computation"))
    return TranslationOutput(tr.command(e), "command", None)


def mtr_gamma(gamma: dict[Name, Type]) -> dict[Name, Type]:
    return {x: mtr_type(t, _binder_flavor(x)) for x, t in gamma.items()}


def mtr_delta(delta: dict[Name, Type]) -> dict[Name, Type]:
    return {a: mtr_type(t, "computation") for a, t in delta.items()}


def mtr_sequent(seq: Sequent, session: Session | None = None,
                as_value: bool = False) -> Sequent:
    """The VC sequent that the admissible typing rules assign to the image
    of a typed lmmt-vn sequent.  A co-term ``e : A`` becomes the command
    ``e[p]`` with a fresh ``p : M A°`` added to the context."""
    session = _session(session)
    out = mtr(seq.subject, session, as_value)
    g, d = mtr_gamma(seq.gamma), mtr_delta(seq.delta)
    if out.kind == "context":
        p = session.fresh(COMP, "p", all_names(out.result) | set(g))
        g = {**g, p: mtr_type(seq.type, "computation")}
        return Sequent(g, d, fill(out.result, Var(p)), "command")
    if out.kind == "command":
        return Sequent(g, d, out.result, "command")
    flavor = "value" if out.kind == "value" else "computation"
    ty = None if seq.type is None else mtr_type(seq.type, flavor)
    return Sequent(g, d, out.result, "term", ty)


# ================================================================ continuations monad

def cm_type(a: Type) -> Type:
    match a:
        case TVar():
            return a
        case Arrow(d, c, _):
            return Arrow(cm_type(d), cm_type(c))
        case Monad(b):
            return neg(neg(cm_type(b)))
    raise TypingError(f"not a type of vc: {a!r}")


def cm_cotype(c: Type) -> Type:
    if not isinstance(c, Monad):
        raise TypingError(f"{c} is not a computation type")
    return neg(cm_type(c.arg))


def _opt_cm(t: Type | None) -> Type | None:
    return None if t is None else cm_type(t)


class _CM:
    """Continuations-monad instantiation.  With a typing environment the
    binders it introduces are annotated, so its output typechecks."""

    def __init__(self, session: Session):
        self.s = session
        self.vc = VC()

    # -- type helpers (None when untyped)
    def synth(self, e: Expr, env: TypeEnv | None) -> Type | None:
        return self.vc.try_synth(e, env)

    def result_of(self, p: Expr, env: TypeEnv | None) -> Type | None:
        """``B°`` for a computation ``p : M B``."""
        t = self.synth(p, env)
        return cm_type(t.arg) if isinstance(t, Monad) else None

    def fresh(self, base: str, *avoid: Expr) -> Name:
        names: set[Name] = set()
        for e in avoid:
            names |= free_names(e)
        return self.s.fresh(PLAIN, base, names)

    def up(self, t: Expr, b: Type | None) -> Expr:
        x = self.fresh("x", t)
        return Lam(x, b, App(t, Var(x)))

    def dneg(self, t: Expr, a: Type | None) -> Expr:
        k = self.fresh("k", t)
        return Lam(k, None if a is None else neg(a), App(Var(k), t))

    # -- translation
    def value(self, v: Expr, env: TypeEnv | None) -> Expr:
        match v:
            case Var(x) if x.ns == VALUE:
                return v
            case Lam(x, ann, p):
                inner = None if env is None else env.bind(x, ann)
                return Lam(x, _opt_cm(ann), self.comp(p, inner))
        raise CalculusError(f"not a value of vc: {v!r}")

    def term(self, t: Expr, env: TypeEnv | None) -> Expr:
        if VC.is_value(t):
            return self.value(t, env)
        return self.comp(t, env)

    def comp(self, p: Expr, env: TypeEnv | None) -> Expr:
        if isinstance(p, Ret):
            return self.aux(p, env)
        b = self.result_of(p, env)
        body = self.aux(p, env)
        k = self.fresh("k", body)
        return Lam(k, None if b is None else neg(b), App(body, self.up(Var(k), b)))

    def aux(self, p: Expr, env: TypeEnv | None) -> Expr:
        match p:
            case Var(x) if x.ns == COMP:
                return p
            case Ret(v):
                t = self.synth(v, env)
                return self.dneg(self.value(v, env), _opt_cm(t))
            case Mu(a, ann, c):
                inner = None if env is None else env.bind_co(a, ann)
                return Lam(a, None if ann is None else cm_cotype(ann),
                           self.command(c, inner))
            case App(v, u):
                vt = self.synth(v, env)
                ut = bt = None
                if isinstance(vt, Arrow):
                    ut = cm_type(vt.dom)
                    bt = cm_type(vt.cod.arg) if isinstance(vt.cod, Monad) else None
                vb, ub = self.value(v, env), self.term(u, env)
                k = self.fresh("k", vb, ub)
                w = self.fresh("w", vb, ub, Var(k))
                inner = Lam(w, ut, App(App(vb, Var(w)), self.up(Var(k), bt)))
                return Lam(k, None if bt is None else neg(bt), App(self.dneg(ub, ut), inner))
        raise CalculusError(f"not a computation of vc: {p!r}")

    def command(self, c: Expr, env: TypeEnv | None) -> Expr:
        match c:
            case CoApp(a, p):
                ct = None if env is None else env.delta.get(a)
                b = cm_type(ct.arg) if isinstance(ct, Monad) else None
                return App(self.aux(p, env), self.up(Var(a), b))
            case Let(v, ann, p, body):
                bt = ann if ann is not None or env is None else self.vc.binder_type(c, env)
                inner = None if env is None else env.bind(v, bt)
                return App(self.aux(p, env), Lam(v, _opt_cm(bt), self.command(body, inner)))
            case Sub(q, ann, p, body):
                ct = ann if ann is not None or env is None else self.vc.binder_type(c, env)
                inner = None if env is None else env.bind(q, ct)
                return App(Lam(q, _opt_cm(ct), self.command(body, inner)), self.comp(p, env))
        raise CalculusError(f"not a command of vc: {c!r}")


def cm(e: Expr, session: Session | None = None, env: TypeEnv | None = None) -> TranslationOutput:
    """``T°``: values and computations go to target values, commands to
    terms of type Bot."""
    tr = _CM(_session(session))
    cls = VC().classify(e)
    ty = tr.synth(e, env) if env is not None and cls != "command" else None
    if cls == "value":
        return TranslationOutput(tr.value(e, env), "value", _opt_cm(ty))
    if cls == "computation":
        return TranslationOutput(tr.comp(e, env), "value", _opt_cm(ty))
    if cls == "command":
        return TranslationOutput(tr.command(e, env), "term", BOT if env is not None else None)
    raise CalculusError("contexts have no continuations-monad image")


def cm_aux(p: Expr, session: Session | None = None,
           env: TypeEnv | None = None) -> TranslationOutput:
    """``P°'``, the sparing variant for computations."""
    tr = _CM(_session(session))
    if VC().classify(p) != "computation":
        raise CalculusError("cm_aux applies to computations only")
    ty = tr.synth(p, env)
    return TranslationOutput(tr.aux(p, env), "value", _opt_cm(ty))


def cm_env(gamma: dict[Name, Type], delta: dict[Name, Type]) -> dict[Name, Type]:
    """Target context ``Gamma°, Delta°-`` (co-variables become variables)."""
    out = {x: cm_type(t) for x, t in gamma.items()}
    out.update({a: cm_cotype(t) for a, t in delta.items()})
    return out


def cm_sequent(seq: Sequent, session: Session | None = None, aux: bool = False) -> Sequent:
    """The stlc sequent assigned to a typed VC sequent by the admissible
    rules: ``cm_aux(P)``/``cm(t)`` at ``A°``, commands at Bot."""
    env = seq.env
    if seq.kind == "command":
        out = cm(seq.subject, session, env)
        return Sequent(cm_env(seq.gamma, seq.delta), {}, out.result, "term", BOT)
    ty = seq.type if seq.type is not None else VC().synth(seq.subject, env)[0]
    out = cm_aux(seq.subject, session, env) if aux else cm(seq.subject, session, env)
    return Sequent(cm_env(seq.gamma, seq.delta), {}, out.result, "term", cm_type(ty))


# ================================================================ CPS

def cps(e: Expr, session: Session | None = None, env: TypeEnv | None = None) -> TranslationOutput:
    """Composite ``cm . mtr``.  A co-term is first filled with a fresh
    computation variable."""
    session = _session(session)
    m = mtr(e, session)
    venv = None if env is None else TypeEnv(mtr_gamma(env.gamma), mtr_delta(env.delta))
    target = m.result
    if m.kind == "context":
        p = session.fresh(COMP, "p", all_names(target))
        target = fill(target, Var(p))
    return cm(target, session, venv)


# ================================================================ forgetful maps

def _merge_names(names, suffix: str = "_n") -> dict[Name, Name]:
    """Map value/computation names to plain names, keeping the bare name
    when possible and suffixing computation names on collision."""
    names = sorted(set(names), key=lambda n: (n.ns != VALUE, n.base, n.index))
    out: dict[Name, Name] = {}
    taken: set[Name] = set()
    for n in names:
        if n.ns == CO:
            continue
        cand = Name(PLAIN, n.base, n.index)
        base = n.base
        while cand in taken:
            base += suffix
            cand = Name(PLAIN, base, n.index)
        out[n] = cand
        taken.add(cand)
    return out


def _rename_all(e: Expr, table: dict[Name, Name]) -> Expr:
    """Rename every occurrence (free or bound) through ``table``."""
    def go(e: Expr) -> Expr:
        match e:
            case Var(n):
                return Var(table.get(n, n))
        kids = tuple(go(k) for k in children(e))
        e = with_children(e, kids)
        b = binder_of(e)
        if b is not None and b in table:
            e = rebind(e, table[b])
        return e
    return go(e)


def forget_type(t: Type) -> Type:
    match t:
        case Arrow(a, b, _):
            return Arrow(forget_type(a), forget_type(b))
        case Monad(a):
            return Monad(forget_type(a))
    return t


def _map_types(e: Expr, f) -> Expr:
    kids = tuple(_map_types(k, f) for k in children(e))
    e = with_children(e, kids)
    ann = getattr(e, "ann", None)
    if ann is not None:
        e = with_annotation(e, f(ann))
    match e:
        case Cons(u, k, m) if m is not None:
            return Cons(u, k, None)
    return e


def forget_vn(x, names: dict[Name, Name] | None = None):
    """Forgetful map from lmmt-vn to lmmt on types or expressions."""
    if isinstance(x, (TVar, Arrow, Monad, TBot)):
        return forget_type(x)
    table = _merge_names(all_names(x)) if names is None else names
    return _map_types(_rename_all(x, table), forget_type)


def forget_vn_sequent(seq: Sequent) -> Sequent:
    table = _merge_names(all_names(seq.subject) | set(seq.gamma))
    gamma = {table[x]: forget_type(t) for x, t in seq.gamma.items()}
    ty = None if seq.type is None else forget_type(seq.type)
    return Sequent(gamma, {a: forget_type(t) for a, t in seq.delta.items()}, forget_vn(seq.subject, table), seq.kind, ty)


def forget_rule(rule: str) -> str:
    """Erase the mode from a rule or typing-rule name (``beta-v`` -> ``beta``)."""
    if rule.endswith(("-v", "-n")):
        return rule[:-2]
    return rule


def forget_vc(e: Expr, names: dict[Name, Name] | None = None) -> Expr:
    """Forgetful map from VC to (restricted) lm-M."""
    table = _merge_names(all_names(e)) if names is None else names

    def go(e: Expr) -> Expr:
        match e:
            case Let(v, ann, p, c):
                return Bind(table[v], ann, go(p), go(c))
            case Sub(q, ann, p, c):
                return Bind(table[q], ann, Ret(go(p)), go(c))
            case Var(n):
                return Var(table.get(n, n))
            case Lam(x, ann, p):
                return Lam(table[x], ann, go(p))
        return with_children(e, tuple(go(k) for k in children(e)))

    return go(e)


def forget_vc_sequent(seq: Sequent) -> Sequent:
    table = _merge_names(all_names(seq.subject) | set(seq.gamma))
    gamma = {table[x]: t for x, t in seq.gamma.items()}
    return Sequent(gamma, dict(seq.delta), forget_vc(seq.subject, table), seq.kind, seq.type)


# ================================================================ embeddings

def _embed(x, ns: str, mode: str):
    if isinstance(x, (TVar, Arrow)):
        match x:
            case Arrow(a, b, _):
                return Arrow(_embed(a, ns, mode), _embed(b, ns, mode), mode)
        return x

    def name(n: Name) -> Name:
        return Name(ns, n.base, n.index) if n.ns == PLAIN else n

    def go(e: Expr) -> Expr:
        kids = tuple(go(k) for k in children(e))
        e = with_children(e, kids)
        match e:
            case Var(n):
                return Var(name(n))
            case Cons(u, k, _):
                return Cons(u, k, mode)
            case Lam(v, t, b):
                return Lam(name(v), None if t is None else _embed(t, ns, mode), b)
            case MuTilde(v, t, b):
                return MuTilde(name(v), None if t is None else _embed(t, ns, mode), b)
            case Mu(a, t, b):
                return Mu(a, None if t is None else _embed(t, ns, mode), b)
        return e

    return go(x)


def embed_cbn(x):
    """lmmt to lmmt-vn, call-by-name: variables become computation variables."""
    return _embed(x, COMP, "n")


def embed_cbv(x):
    """lmmt to lmmt-vn, call-by-value: variables become value variables."""
    return _embed(x, VALUE, "v")


def embed_sequent(seq: Sequent, flavor: str) -> Sequent:
    f = embed_cbn if flavor == "cbn" else embed_cbv
    gamma = {f(Var(x)).name: f(t) for x, t in seq.gamma.items()}
    delta = {a: f(t) for a, t in seq.delta.items()}
    return Sequent(gamma, delta, f(seq.subject), seq.kind, None if seq.type is None else f(seq.type))


def translate(e: Expr, target: str, session: Session | None = None,
              env: TypeEnv | None = None) -> TranslationOutput:
    """Dispatch used by the command line."""
    match target:
        case "monadic":
            return mtr(e, session)
        case "cm":
            return cm(e, session, env)
        case "cps":
            return cps(e, session, env)
        case "forget-vn":
            return TranslationOutput(forget_vn(e), LMMTVN().classify(e))
        case "forget-vc":
            return TranslationOutput(forget_vc(e), VC().classify(e))
        case "embed-cbn":
            return TranslationOutput(embed_cbn(e), "")
        case "embed-cbv":
            return TranslationOutput(embed_cbv(e), "")
    raise ValueError(f"unknown target {target!r}")
