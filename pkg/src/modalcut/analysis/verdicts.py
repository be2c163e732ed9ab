"""Checkers that turn reduction graphs into verdicts: confluence, subject
reduction, strict simulation, critical pairs, the derived eager beta rule
and conservativity of the embeddings."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..calculi import LMMT, LMMTVN, STLC, VC, Calculus, Redex, Sequent, TypeEnv
from ..errors import ModalcutError, TypingError
from ..syntax.concrete import show
from ..syntax.terms import (
    COMP, App, Expr, Lam, Let, Mu, Ret, Session, Sub, Var, all_names, canonical, erase,
    fill, positions, subst, subterm,
)
from ..translate import cm, embed_cbn, embed_cbv, forget_rule, mtr
from .rewriting import (
    Stepper, Step, Trace, default_stepper, nf_key, reduction_graph, sort_key,
)

KINDS = ("confluent", "non-confluent", "simulation-ok", "simulation-fail",
         "sr-ok", "sr-fail", "inconclusive")
OK_KINDS = {"confluent", "simulation-ok", "sr-ok"}


@dataclass
class Verdict:
    kind: str
    witness: object = None  # traces, or a counterexample
    detail: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.kind in OK_KINDS

    def to_json(self) -> dict:
        out: dict = {"verdict": self.kind, "detail": self.detail, **self.stats}
        w = self.witness
        if isinstance(w, (list, tuple)) and all(isinstance(t, Trace) for t in w):
            out["witnesses"] = [t.to_json() for t in w]
        elif isinstance(w, Trace):
            out["witnesses"] = [w.to_json()]
        elif w is not None:
            out["witness"] = str(w)
        return out

    def render(self) -> str:
        lines = [f"verdict: {self.kind}"]
        if self.detail:
            lines.append(self.detail)
        w = self.witness
        traces = w if isinstance(w, (list, tuple)) else [w] if isinstance(w, Trace) else []
        for t in traces:
            if isinstance(t, Trace):
                lines.append(t.render())
        return "\n".join(lines)


# ---------------------------------------------------------------- confluence

def check_confluence(calc: Calculus, e: Expr, bound: int = 10_000,
                     env: TypeEnv | None = None) -> Verdict:
    g = reduction_graph(calc, e, bound, env)
    stats = {"nodes": len(g.nodes), "edges": len(g.edges), "exhausted": g.exhausted}
    nfs = g.normal_forms
    if len(nfs) >= 2:
        a, b = nfs[0], nfs[1]
        return Verdict("non-confluent", [g.trace_to(a), g.trace_to(b)],
                       f"{len(nfs)} distinct normal forms", stats)
    if len(nfs) == 1 and not g.exhausted:
        return Verdict("confluent", [g.trace_to(nfs[0])], "unique normal form", stats)
    return Verdict("inconclusive", None,
                   "node bound reached" if g.exhausted else "no normal form reachable", stats)


# ---------------------------------------------------------------- subject reduction

def check_subject_reduction(calc: Calculus, seq: Sequent, bound: int = 10_000,
                            stepper: Stepper = default_stepper) -> Verdict:
    """Every node of the (typed) reduction graph must typecheck at ``seq``."""
    calc.typecheck(seq)  # raises TypingError if the subject is ill-typed
    g = reduction_graph(calc, seq.subject, bound, seq.env, stepper=stepper)
    stats = {"nodes": len(g.nodes), "edges": len(g.edges), "exhausted": g.exhausted}
    for i, node in enumerate(g.nodes[1:], start=1):
        try:
            calc.typecheck(seq.with_subject(node))
        except ModalcutError as exc:
            return Verdict("sr-fail", g.trace_to(i), f"{show(node)}: {exc}", stats)
    # identical subjects reached through different edges were merged; every
    # edge target is a checked node
    return Verdict("sr-ok", None, f"{len(g.nodes)} nodes preserve the sequent", stats)


# ---------------------------------------------------------------- simulation

TRANSLATIONS = ("mtr", "cm", "cps")


def _images(source: str, translation: str, before: Expr, after: Expr,
            session: Session) -> tuple[Expr, Expr, Calculus]:
    """Translate both ends of a source step; co-terms get one shared filler."""
    if translation == "cm":
        if source != "vc":
            raise ModalcutError("cm applies to vc steps")
        return cm(before, session).result, cm(after, session).result, STLC()
    if source != "lmmt-vn":
        raise ModalcutError(f"{translation} applies to lmmt-vn steps")
    m1, m2 = mtr(before, session), mtr(after, session)
    t1, t2 = m1.result, m2.result
    if m1.kind == "context":
        p = session.fresh(COMP, "p", all_names(t1) | all_names(t2))
        t1, t2 = fill(t1, Var(p)), fill(t2, Var(p))
    if translation == "mtr":
        return t1, t2, VC()
    return cm(t1, session).result, cm(t2, session).result, STLC()


def search_path(calc: Calculus, start: Expr, goal: Expr, fuel: int = 50,
                bound: int = 10_000, session: Session | None = None) -> Trace | None:
    """Breadth-first search for a reduction path of length >= 1 from
    ``start`` to ``goal`` (alpha, annotations ignored; in stlc bound names
    are compared without their namespace)."""
    session = Session() if session is None else session
    sorted_names = not isinstance(calc, STLC)
    target = canonical(erase(goal), False, sorted_names)
    start = erase(start)
    seen = {canonical(start, False, sorted_names): None}
    parent: dict = {}
    order = [start]
    queue = deque([(0, 0)])
    while queue:
        i, depth = queue.popleft()
        if depth >= fuel:
            continue
        src = order[i]
        for r in calc.redexes(src):
            dst = calc.step(src, r, session)
            key = canonical(dst, False, sorted_names)
            if key == target:
                steps = [Step(r.rule, r.path, dst)]
                while i != 0:
                    pi, rule, path = parent[i]
                    steps.append(Step(rule, path, order[i]))
                    i = pi
                steps.reverse()
                return Trace(calc.name, start, steps)
            if key in seen:
                continue
            if len(order) >= bound:
                return None
            seen[key] = len(order)
            parent[len(order)] = (i, r.rule, r.path)
            order.append(dst)
            queue.append((len(order) - 1, depth + 1))
    return None


def check_simulation(calc: Calculus, e: Expr, redex: Redex, translation: str,
                     fuel: int = 50, bound: int = 10_000,
                     session: Session | None = None) -> Verdict:
    """Does the translation of ``e`` reduce in at least one step to the
    translation of its reduct at ``redex``?"""
    session = Session() if session is None else session
    after = calc.step(e, redex, session)
    t1, t2, target = _images(calc.name, translation, e, after, session)
    path = search_path(target, t1, t2, fuel, bound, session)
    src = Trace(calc.name, e, [Step(redex.rule, redex.path, after)])
    if path is None:
        return Verdict("simulation-fail", src,
                       f"no {target.name} path from {show(t1)} to {show(t2)}")
    return Verdict("simulation-ok", [src, path], f"{len(path)} target steps",
                   {"target_steps": len(path)})


# ---------------------------------------------------------------- critical pairs

def overlaps(calc: Calculus, e: Expr) -> list[tuple[Redex, Redex]]:
    """Pairs of distinct redexes of ``e`` where the second sits on a
    non-variable position of the first's pattern."""
    rs = calc.redexes(e)
    out = []
    for i, r1 in enumerate(rs):
        pat = calc.pattern(r1.rule, subterm(e, r1.path))
        n = len(r1.path)
        for j, r2 in enumerate(rs):
            if i == j or (r2.path == r1.path and j < i):
                continue
            if r2.path[:n] == r1.path and r2.path[n:] in pat:
                out.append((r1, r2))
    return out


def overlap_shapes(calc: Calculus, exprs) -> set[tuple[str, str]]:
    """Rule pairs ``(outer, inner)`` that overlap somewhere in ``exprs``;
    root-level overlaps are unordered and reported sorted by rule order."""
    order = {r: i for i, r in enumerate(calc.rules)}
    shapes = set()
    for e in exprs:
        for r1, r2 in overlaps(calc, e):
            if r1.path == r2.path:
                a, b = sorted((r1.rule, r2.rule), key=order.get)
                shapes.add((a, b))
            else:
                shapes.add((r1.rule, r2.rule))
    return shapes


def joinable(calc: Calculus, e: Expr, r1: Redex, r2: Redex, bound: int = 2000) -> bool:
    """Do the two one-step reducts have a common reduct?"""
    s = Session()
    a, b = calc.step(e, r1, s), calc.step(e, r2, s)
    ga, gb = reduction_graph(calc, a, bound), reduction_graph(calc, b, bound)
    ka = {nf_key(n) for n in ga.nodes}
    return any(nf_key(n) in ka for n in gb.nodes)


# ---------------------------------------------------------------- eager beta

def eager_beta(e: Expr, session: Session | None = None) -> tuple[Trace, Expr]:
    """Run ``beta; sigma; eta-mu`` on a VC beta-redex at the root, following
    the residuals, and return the trace with the expected ``[u/x]P``."""
    session = Session() if session is None else session
    calc = VC()
    match e:
        case App(Lam(x, _, p), u):
            expected = subst(p, x, u, session)
        case _:
            raise ModalcutError("not a beta-redex")
    trace = Trace("vc", e)
    plan = [("beta", ()), ("sigma", (0,)), ("eta-mu", ())]
    cur = e
    for rule, path in plan:
        cur = calc.step(cur, Redex(rule, path), session)
        trace.steps.append(Step(rule, path, cur))
    return trace, expected


# ---------------------------------------------------------------- embeddings

def check_embedding(e: Expr, fragment: str) -> tuple[bool, str]:
    """Redexes of ``e`` in the fragment and of its embedding in lmmt-vn are
    in bijection by position and (erased) rule, and one-step reducts commute
    with the embedding."""
    src = LMMT(fragment)
    tgt = LMMTVN()
    emb = embed_cbn if fragment == "cbn" else embed_cbv
    image = emb(e)
    rs = src.redexes(e)
    ts = tgt.redexes(image)
    a = sorted((r.path, r.rule) for r in rs)
    b = sorted((r.path, forget_rule(r.rule)) for r in ts)
    if a != b:
        return False, f"redex sets differ: {a} vs {b}"
    by_pos = {(r.path, forget_rule(r.rule)): r for r in ts}
    for r in rs:
        s = Session()
        left = emb(src.step(e, r, s))
        right = tgt.step(image, by_pos[(r.path, r.rule)], s)
        if canonical(left) != canonical(right):
            return False, f"{r.rule} at {list(r.path)}: {show(left)} vs {show(right)}"
    return True, ""


def sigma_pi_overlap(calc: Calculus, e: Expr) -> list:
    """Positions carrying both a sigma and a pi redex."""
    by_path: dict = {}
    for r in calc.redexes(e):
        by_path.setdefault(r.path, set()).add(r.rule)
    return [p for p, rules in by_path.items()
            if "pi" in rules and rules & {"sigma", "sigma-v", "sigma-n"}]
