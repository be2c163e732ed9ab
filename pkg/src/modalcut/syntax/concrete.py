"""Surface syntax: tokenizer, recursive-descent parser and printer.

Grammar summary (whitespace-insensitive, ``--`` starts a line comment)::

    expr  ::= app [ ('::' | '::v' | '::n') expr ]
    app   ::= 'ret' arg | '@a' arg | arg arg*          -- '@a arg' only in lm-M / vc
    arg   ::= var | '@a' | '[]' | '(' expr ')' | '<' expr '|' expr '>'
            | '\\' var [':' type] '.' expr | 'mu' '@a' [':' type] '.' expr
            | 'mt' var [':' type] '.' expr
            | ('let' | 'sub' | 'bind') var [':' type] '=' expr 'in' expr
    type  ::= tapp [('->' | '->v' | '->n') type]
    tapp  ::= 'M' tapp | '~' tapp | X | 'Bot' | '(' type ')'

Variables carry a sigil for their namespace: ``%v`` value, ``#p``
computation, ``@a`` co-variable, bare ``x`` plain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ModeError, ParseError
from .terms import (
    BOT, CO, COMP, PLAIN, SIGILS, VALUE, App, Arrow, Bind, CoApp, CoVar, Cons, Cut, Expr,
    Hole, Lam, Let, Monad, Mu, MuTilde, Name, Ret, Sub, TVar, Type, Var, show_type,
)

CALCULI = ("lmmt", "lmmt-vn", "lm-M", "vc", "ivc", "stlc")

KEYWORDS = {"mu", "mt", "ret", "let", "sub", "bind", "in"}
_SIGIL_NS = {"%": VALUE, "#": COMP, "@": CO, "": PLAIN}

# namespaces allowed for ordinary variables in each calculus
VAR_NAMESPACES = {
    "lmmt": {PLAIN},
    "lmmt-vn": {VALUE, COMP},
    "lm-M": {PLAIN},
    "vc": {VALUE, COMP},
    "ivc": {VALUE, COMP},
    "stlc": {PLAIN, VALUE, COMP, CO},
}
BINDER_NAMESPACES = {"let": {VALUE}, "sub": {COMP}, "bind": {PLAIN}}
COAPP_CALCULI = {"lm-M", "vc"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<op>::[vn](?![A-Za-z0-9_])|->[vn](?![A-Za-z0-9_])|::|->|\[\s*\]|[\\.:<>|()~=,\[\]])
  | (?P<ident>[%#@]?[A-Za-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "op", "ident", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            if kind == "op" and tok.startswith("["):
                tok = "[]"
            out.append(Token(kind, tok, line, pos - line_start + 1))
        nl = m.group().count("\n")
        if nl:
            line += nl
            line_start = pos + m.group().rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class Parser:
    def __init__(self, text: str, calculus: str | None = None):
        if calculus is not None and calculus not in CALCULI:
            raise ValueError(f"unknown calculus {calculus!r}")
        self.toks = tokenize(text)
        self.i = 0
        self.calculus = calculus

    # -- token helpers
    def peek(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text:
            raise self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.advance()

    def at_keyword(self, kw: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text == kw

    def finish(self) -> None:
        if self.peek().kind != "eof":
            raise self.error(f"unexpected {self.peek().text!r}")

    # -- names
    def name(self, tok: Token) -> Name:
        sigil = tok.text[0] if tok.text[0] in "%#@" else ""
        return Name(_SIGIL_NS[sigil], tok.text[len(sigil):])

    def is_var_token(self, t: Token) -> bool:
        return (t.kind == "ident" and t.text not in KEYWORDS
                and (t.text[0] in "%#" or t.text[0].islower()))

    def is_covar_token(self, t: Token) -> bool:
        return t.kind == "ident" and t.text.startswith("@")

    def var(self, role: str = "variable") -> Name:
        t = self.peek()
        if self.is_covar_token(t) and self.calculus == "stlc":
            self.advance()
            return self.name(t)
        if not self.is_var_token(t):
            raise self.error(f"expected a {role}")
        self.advance()
        n = self.name(t)
        allowed = BINDER_NAMESPACES.get(role) or VAR_NAMESPACES.get(self.calculus or "", None)
        if allowed is not None and n.ns not in allowed:
            what = f"{role} binder" if role in BINDER_NAMESPACES else role
            raise ModeError(f"{n} cannot be used as a {what} here ({self.calculus})", t.line, t.col)
        return n

    def covar(self) -> Name:
        t = self.peek()
        if not self.is_covar_token(t):
            raise self.error("expected a co-variable")
        self.advance()
        return self.name(t)

    # -- expressions
    def expr(self) -> Expr:
        left = self.app()
        t = self.peek()
        if t.kind == "op" and t.text in ("::", "::v", "::n"):
            self.advance()
            mode = t.text[2:] or None
            return Cons(left, self.expr(), mode)
        return left

    def starts_arg(self, t: Token) -> bool:
        if t.kind == "op":
            return t.text in ("(", "[]", "<", "\\")
        if t.kind != "ident":
            return False
        if t.text in ("mu", "mt", "let", "sub", "bind"):
            return True
        if self.is_covar_token(t):
            return self.calculus not in COAPP_CALCULI
        return self.is_var_token(t)

    def app(self) -> Expr:
        t = self.peek()
        if self.at_keyword("ret"):
            self.advance()
            return Ret(self.arg())
        if self.is_covar_token(t) and self.calculus in COAPP_CALCULI:
            self.advance()
            return CoApp(self.name(t), self.arg())
        head = self.arg()
        while self.starts_arg(self.peek()):
            head = App(head, self.arg())
        return head

    def annotation(self) -> Type | None:
        if self.peek().text == ":" and self.peek().kind == "op":
            self.advance()
            return self.type_()
        return None

    def arg(self) -> Expr:
        t = self.peek()
        if t.kind == "op":
            if t.text == "(":
                self.advance()
                e = self.expr()
                self.expect(")")
                return e
            if t.text == "[]":
                self.advance()
                return Hole()
            if t.text == "<":
                self.advance()
                left = self.expr()
                self.expect("|")
                right = self.expr()
                self.expect(">")
                return Cut(left, right)
            if t.text == "\\":
                self.advance()
                x = self.var("variable")
                ann = self.annotation()
                self.expect(".")
                return Lam(x, ann, self.expr())
        if t.kind == "ident":
            if t.text == "mu":
                self.advance()
                a = self.covar()
                ann = self.annotation()
                self.expect(".")
                return Mu(a, ann, self.expr())
            if t.text == "mt":
                self.advance()
                x = self.var("variable")
                ann = self.annotation()
                self.expect(".")
                return MuTilde(x, ann, self.expr())
            if t.text in BINDER_NAMESPACES:
                kw = self.advance().text
                x = self.var(kw)
                ann = self.annotation()
                self.expect("=")
                bound = self.expr()
                self.expect("in")
                body = self.expr()
                return {"let": Let, "sub": Sub, "bind": Bind}[kw](x, ann, bound, body)
            if self.is_covar_token(t):
                self.advance()
                n = self.name(t)
                return Var(n) if self.calculus == "stlc" else CoVar(n)
            if self.is_var_token(t):
                return Var(self.var())
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    # -- types
    def type_(self) -> Type:
        left = self.tapp()
        t = self.peek()
        if t.kind == "op" and t.text in ("->", "->v", "->n"):
            self.advance()
            return Arrow(left, self.type_(), t.text[2:] or None)
        return left

    def tapp(self) -> Type:
        t = self.peek()
        if t.kind == "ident" and t.text == "M":
            self.advance()
            return Monad(self.tapp())
        if t.kind == "op" and t.text == "~":
            self.advance()
            return Arrow(self.tapp(), BOT)
        if t.kind == "op" and t.text == "(":
            self.advance()
            ty = self.type_()
            self.expect(")")
            return ty
        if t.kind == "ident" and t.text == "Bot":
            self.advance()
            return BOT
        if t.kind == "ident" and t.text[0].isupper():
            self.advance()
            return TVar(t.text)
        raise self.error(f"expected a type, found {t.text or 'end of input'!r}")

    # -- declarations "x:A, @a:B"
    def declarations(self) -> dict[Name, Type]:
        out: dict[Name, Type] = {}
        if self.peek().kind == "eof":
            return out
        while True:
            t = self.peek()
            if t.kind != "ident" or t.text in KEYWORDS:
                raise self.error("expected a declaration")
            self.advance()
            n = self.name(t)
            self.expect(":")
            ty = self.type_()
            if n in out and out[n] != ty:
                raise ParseError(f"inconsistent declarations for {n}", t.line, t.col)
            out[n] = ty
            if self.peek().text != ",":
                break
            self.advance()
        return out


def parse_raw(text: str, calculus: str | None = None) -> Expr:
    p = Parser(text, calculus)
    e = p.expr()
    p.finish()
    return e


def parse_type(text: str) -> Type:
    p = Parser(text)
    t = p.type_()
    p.finish()
    return t


def parse_declarations(text: str) -> dict[Name, Type]:
    p = Parser(text)
    d = p.declarations()
    p.finish()
    return d


# ---------------------------------------------------------------- printer

def _ann(t: Type | None) -> str:
    return "" if t is None else ":" + show_type(t)


def show(e: Expr) -> str:
    """Print ``e`` so that parsing it back yields ``e`` exactly."""
    match e:
        case Cons(u, k, m):
            op = "::" if m is None else f"::{m}"
            return f"{_show_left(u)} {op} {show(k)}"
        case Lam(x, t, b):
            return f"\\{x}{_ann(t)}. {show(b)}"
        case Mu(a, t, b):
            return f"mu {a}{_ann(t)}. {show(b)}"
        case MuTilde(x, t, b):
            return f"mt {x}{_ann(t)}. {show(b)}"
        case Let(x, t, a, b) | Sub(x, t, a, b) | Bind(x, t, a, b):
            kw = type(e).__name__.lower()
            return f"{kw} {x}{_ann(t)} = {show(a)} in {show(b)}"
    return _show_left(e)


def _show_left(e: Expr) -> str:
    match e:
        case Ret(a):
            return f"ret {_show_arg(a)}"
        case CoApp(a, u):
            return f"{a} {_show_arg(u)}"
        case App(f, a):
            head = _show_left(f) if isinstance(f, App) else _show_arg(f)
            return f"{head} {_show_arg(a)}"
    return _show_arg(e)


def _show_arg(e: Expr) -> str:
    match e:
        case Var(n) | CoVar(n):
            return str(n)
        case Hole():
            return "[]"
        case Cut(t, k):
            return f"< {show(t)} | {show(k)} >"
        case Lam() | Mu() | MuTilde() | Cons() | App() | Ret() | CoApp() | Let() | Sub() | Bind():
            return f"({show(e)})"
    raise TypeError(f"not an expression: {e!r}")


def show_name(n: Name) -> str:
    return SIGILS[n.ns] + n.ident
