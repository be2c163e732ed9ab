"""Confluent cut elimination with modes: six calculi, translations between
them and tools to explore their reduction."""

from .calculi import CALCULUS_IDS, Sequent, get_calculus
from .calculi.lmmt import KIND_OF_CLASS
from .syntax.concrete import parse_declarations, parse_raw, parse_type, show
from .syntax.terms import Expr, Type

__version__ = "0.1.0"


def parse(text: str, calculus: str) -> Expr:
    """Parse ``text`` in the grammar of ``calculus`` and check that it forms
    an expression of one of its syntactic classes."""
    e = parse_raw(text, calculus)
    get_calculus(calculus).validate(e)
    return e


def sequent(calculus: str, e: Expr, gamma: dict | None = None, delta: dict | None = None,
            type_: Type | None = None) -> Sequent:
    """A sequent whose kind is read off the class of ``e``."""
    kind = KIND_OF_CLASS[get_calculus(calculus).classify(e)]
    return Sequent(dict(gamma or {}), dict(delta or {}), e, kind, type_)


__all__ = ["CALCULUS_IDS", "Expr", "Sequent", "get_calculus", "parse", "parse_declarations",
           "parse_type", "sequent", "show"]
