"""lambda-bar-mu-mu-tilde with modes: value and computation variables,
mode-annotated implications and stacks."""

from __future__ import annotations

from ..errors import ClassError, TypingError
from ..syntax.terms import (
    COMP, VALUE, Arrow, CoVar, Cons, Cut, Expr, Lam, Mu, MuTilde, Name, Session, TVar,
    Type, Var, free_names, show_type,
)
from .base import TypeEnv
from .lmmt import COTERM_CLASSES, TERM_CLASSES, SequentCalculus, contract_sequent

MODE_OF_NS = {VALUE: "v", COMP: "n"}
NS_OF_MODE = {"v": VALUE, "n": COMP}

# names of the grammar classes as used in the figures
VN_CLASS_NAMES = {
    "value": "value", "term": "non-value-term", "covalue": "co-value",
    "coterm": "non-co-value-co-term", "command": "command",
}


class LMMTVN(SequentCalculus):
    name = "lmmt-vn"
    rules = ("beta-v", "beta-n", "pi", "sigma-v", "sigma-n", "eta-mt-v", "eta-mt-n", "eta-mu")
    var_namespaces = {VALUE, COMP}

    def __repr__(self) -> str:
        return "LMMTVN()"

    def lam_mode(self, x: Name) -> str | None:
        return MODE_OF_NS.get(x.ns)

    def check_type(self, t: Type, subject: Expr | None = None) -> None:
        match t:
            case TVar():
                return
            case Arrow(a, b, m) if m in ("v", "n"):
                self.check_type(a, subject)
                self.check_type(b, subject)
                return
        raise TypingError(f"{show_type(t)} is not a type of {self.name}", subject)

    # -- grammar
    def classify(self, e: Expr) -> str:
        match e:
            case Var(x) if x.ns == VALUE:
                return "value"
            case Var(x) if x.ns == COMP:
                return "term"
            case Lam(x, _, t) if x.ns in MODE_OF_NS:
                self.expect(t, TERM_CLASSES)
                return "value"
            case Mu(_, _, c):
                self.expect(c, {"command"})
                return "term"
            case CoVar():
                return "covalue"
            case MuTilde(x, _, c) if x.ns in MODE_OF_NS:
                self.expect(c, {"command"})
                return "covalue" if x.ns == VALUE else "coterm"
            case Cons(u, k, m) if m in NS_OF_MODE:
                self.expect(u, TERM_CLASSES)
                self.expect(k, COTERM_CLASSES)
                return "covalue"
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
        return isinstance(t, Lam) or (isinstance(t, Var) and t.name.ns == VALUE)

    @staticmethod
    def is_covalue(e: Expr) -> bool:
        return (isinstance(e, (CoVar, Cons))
                or (isinstance(e, MuTilde) and e.var.ns == VALUE))

    # -- reduction
    def match(self, e: Expr) -> list[str]:
        out = []
        match e:
            case Cut(Lam(x, _, _), Cons(_, _, m)) if MODE_OF_NS.get(x.ns) == m:
                out.append(f"beta-{m}")
        match e:
            case Cut(Mu(), k) if self.is_covalue(k):
                out.append("pi")
        match e:
            case Cut(t, MuTilde(x, _, _)):
                if x.ns == COMP:
                    out.append("sigma-n")
                elif self.is_value(t):
                    out.append("sigma-v")
        match e:
            case MuTilde(x, _, Cut(Var(y), k)) if x == y and x not in free_names(k):
                if x.ns == COMP:
                    out.append("eta-mt-n")
                elif self.is_covalue(k):
                    out.append("eta-mt-v")
            case Mu(a, _, Cut(t, CoVar(b))) if a == b and a not in free_names(t):
                out.append("eta-mu")
        return out

    def pattern(self, rule: str, e: Expr):
        base = rule.rsplit("-", 1)[0] if rule[-2:] in ("-v", "-n") else rule
        return {
            "beta": {(), (0,), (1,)}, "pi": {(), (0,)}, "sigma": {(), (1,)},
            "eta-mt": {(), (0,), (0, 0)}, "eta-mu": {(), (0,), (0, 1)},
        }[base]

    def contract(self, rule: str, e: Expr, session: Session, env: TypeEnv | None) -> Expr:
        base = rule[:-2] if rule[-2:] in ("-v", "-n") else rule
        return contract_sequent(base, e, session)


def classify_vn(e: Expr) -> str:
    """Grammar class of a moded expression, named as in the figures."""
    return VN_CLASS_NAMES[LMMTVN().classify(e)]
