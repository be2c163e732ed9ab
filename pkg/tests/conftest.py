from pathlib import Path

import pytest

from modalcut import parse
from modalcut.syntax.terms import Name

CORPUS = Path(__file__).with_name("corpus.txt")


def corpus() -> list[tuple[str, str]]:
    out = []
    for line in CORPUS.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("--"):
            continue
        calc, _, text = line.partition(":")
        out.append((calc.strip(), text.strip()))
    return out


def n(s: str) -> Name:
    """Name from surface spelling, e.g. ``n("%v")``, ``n("@a")``."""
    return parse_name(s)


def parse_name(s: str) -> Name:
    sig = {"%": "value", "#": "comp", "@": "co"}
    if s[0] in sig:
        return Name(sig[s[0]], s[1:])
    return Name("plain", s)


@pytest.fixture
def p():
    return parse
