"""Traces, normalization strategies and bounded reduction graphs."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from ..calculi import Calculus, Redex, TypeEnv
from ..syntax.concrete import show
from ..syntax.terms import Expr, Path, Session, canonical

STRATEGIES = ("leftmost-outermost", "rightmost-innermost", "random")

Stepper = Callable[[Calculus, Expr, Redex, Session, "TypeEnv | None"], Expr]


def default_stepper(calc: Calculus, e: Expr, r: Redex, session: Session,
                    env: TypeEnv | None) -> Expr:
    return calc.step(e, r, session, env)


@dataclass
class Step:
    rule: str
    path: Path
    result: Expr

    def to_json(self) -> dict:
        return {"rule": self.rule, "path": list(self.path), "result": show(self.result)}


@dataclass
class Trace:
    calculus: str
    start: Expr
    steps: list[Step] = field(default_factory=list)
    exhausted: bool = False  # fuel ran out before a normal form

    @property
    def final(self) -> Expr:
        return self.steps[-1].result if self.steps else self.start

    @property
    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "calculus": self.calculus,
            "start": show(self.start),
            "steps": [s.to_json() for s in self.steps],
        }

    def render(self) -> str:
        lines = [show(self.start)]
        for s in self.steps:
            lines.append(f"  -> [{s.rule} @ {list(s.path)}] {show(s.result)}")
        if self.exhausted:
            lines.append("  (fuel exhausted)")
        return "\n".join(lines)

    def replay(self, calc: Calculus) -> bool:
        """Check every step against the calculus (up to alpha)."""
        e = self.start
        session = Session()
        for s in self.steps:
            try:
                nxt = calc.step(e, Redex(s.rule, s.path), session)
            except Exception:
                return False
            if canonical(nxt, False) != canonical(s.result, False):
                return False
            e = s.result
        return True


def choose(calc: Calculus, redexes: list[Redex], strategy: str,
           rng: random.Random | None = None) -> Redex:
    order = {r: i for i, r in enumerate(calc.rules)}
    if strategy == "leftmost-outermost":
        return min(redexes, key=lambda r: (r.path, order.get(r.rule, 0)))
    if strategy == "rightmost-innermost":
        return max(redexes, key=lambda r: (r.path, order.get(r.rule, 0)))
    if strategy == "random":
        rng = rng or random.Random(0)
        return rng.choice(sorted(redexes, key=lambda r: (r.path, order.get(r.rule, 0))))
    raise ValueError(f"unknown strategy {strategy!r}")


def normalize(calc: Calculus, e: Expr, strategy: str = "leftmost-outermost",
              fuel: int = 1000, seed: int | None = None, session: Session | None = None,
              env: TypeEnv | None = None) -> Trace:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    session = Session() if session is None else session
    rng = random.Random(seed)
    trace = Trace(calc.name, e)
    for _ in range(fuel):
        rs = calc.redexes(e)
        if not rs:
            return trace
        r = choose(calc, rs, strategy, rng)
        e = calc.step(e, r, session, env)
        trace.steps.append(Step(r.rule, r.path, e))
    trace.exhausted = bool(calc.redexes(e))
    return trace


@dataclass
class Edge:
    source: int
    rule: str
    path: Path
    target: int


@dataclass
class GraphReport:
    calculus: str
    nodes: list[Expr]
    edges: list[Edge]
    normal_forms: list[int]  # node indices, one per alpha-class, canonically ordered
    exhausted: bool
    parent: dict[int, Edge] = field(default_factory=dict)

    @property
    def start(self) -> Expr:
        return self.nodes[0]

    def normal_form_exprs(self) -> list[Expr]:
        return [self.nodes[i] for i in self.normal_forms]

    def trace_to(self, i: int) -> Trace:
        """A shortest trace from the start node to node ``i``."""
        edges = []
        while i != 0:
            edge = self.parent[i]
            edges.append(edge)
            i = edge.source
        edges.reverse()
        return Trace(self.calculus, self.nodes[0],
                     [Step(ed.rule, ed.path, self.nodes[ed.target]) for ed in edges])

    def to_json(self) -> dict:
        out = (self.trace_to(self.normal_forms[0]) if self.normal_forms
               else Trace(self.calculus, self.start)).to_json()
        out["nodes"] = [show(n) for n in self.nodes]
        out["edges"] = [{"source": ed.source, "target": ed.target, "rule": ed.rule,
                         "path": list(ed.path)} for ed in self.edges]
        out["normal_forms"] = [show(self.nodes[i]) for i in self.normal_forms]
        out["exhausted"] = self.exhausted
        return out


def nf_key(e: Expr):
    """Identity of normal forms: alpha-equivalence, ignoring annotations."""
    return canonical(e, annotations=False)


def sort_key(e: Expr) -> tuple[int, str]:
    c = canonical(e, annotations=False)
    return (len(show(c)), show(c))


def reduction_graph(calc: Calculus, e: Expr, bound: int = 10_000,
                    env: TypeEnv | None = None, session: Session | None = None,
                    stepper: Stepper = default_stepper) -> GraphReport:
    """Breadth-first closure of one-step reduction, nodes identified up to
    alpha.  Stops adding nodes once ``bound`` is reached."""
    if bound < 1:
        raise ValueError("bound must be positive")
    session = Session() if session is None else session
    index = {canonical(e): 0}
    nodes = [e]
    edges: list[Edge] = []
    parent: dict[int, Edge] = {}
    normal: list[int] = []
    exhausted = False
    queue = deque([0])
    while queue:
        i = queue.popleft()
        src = nodes[i]
        rs = calc.redexes(src)
        if not rs:
            normal.append(i)
            continue
        for r in rs:
            dst = stepper(calc, src, r, session, env)
            key = canonical(dst)
            j = index.get(key)
            if j is None:
                if len(nodes) >= bound:
                    exhausted = True
                    continue
                j = len(nodes)
                index[key] = j
                nodes.append(dst)
                queue.append(j)
                parent[j] = Edge(i, r.rule, r.path, j)
            edges.append(Edge(i, r.rule, r.path, j))
    seen = {}
    for i in normal:
        seen.setdefault(nf_key(nodes[i]), i)
    nfs = sorted(seen.values(), key=lambda i: sort_key(nodes[i]))
    return GraphReport(calc.name, nodes, edges, nfs, exhausted, parent)
